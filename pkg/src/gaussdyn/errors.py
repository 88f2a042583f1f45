"""Exception hierarchy.

Every error carries a short ``category`` string; the command-line front end
prints it so scripts can branch on the failure kind without parsing text.
"""


class GaussDynError(Exception):
    category = "error"


class DimensionError(GaussDynError, ValueError):
    category = "dimension"


class NotSymmetricError(GaussDynError, ValueError):
    category = "not-symmetric"


class NotPositiveError(GaussDynError, ValueError):
    category = "not-positive"


class UnphysicalError(GaussDynError, ValueError):
    """A covariance matrix violates the uncertainty relation."""

    category = "uncertainty-relation"


class InvalidChannelError(GaussDynError, ValueError):
    """The pair (X, Y) violates the complete-positivity constraint."""

    category = "channel-constraint"


class NotSymplecticError(GaussDynError, ValueError):
    category = "not-symplectic"


class PreconditionError(GaussDynError, ValueError):
    category = "precondition"


class DegeneracyError(GaussDynError, ArithmeticError):
    category = "degenerate"


class SingularMatrixError(GaussDynError, ArithmeticError):
    category = "singular"


class InstabilityError(GaussDynError, ArithmeticError):
    """No steady state: the drift matrix is not Hurwitz."""

    category = "unstable"


class ConvergenceError(GaussDynError, ArithmeticError):
    category = "no-convergence"


class CertificationError(GaussDynError, ArithmeticError):
    """A converged Riccati solution failed the stabilising-solution checks."""

    category = "certification"


class StepSizeError(GaussDynError, ArithmeticError):
    """Integration left the physical set; the step is probably too large."""

    category = "step-size"


class ConfigError(GaussDynError, ValueError):
    category = "config"
