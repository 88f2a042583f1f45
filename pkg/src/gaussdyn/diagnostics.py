from dataclasses import dataclass, field


@dataclass(frozen=True)
class Validation:
    """Outcome of a physicality check; truthy iff the check passed.

    ``min_eigenvalue`` is the smallest eigenvalue of the Hermitian matrix
    whose positivity encodes the constraint being checked.
    """

    ok: bool
    min_eigenvalue: float
    constraint: str
    details: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.ok

    def as_dict(self) -> dict:
        return {
            "ok": self.ok,
            "constraint": self.constraint,
            "min_eigenvalue": self.min_eigenvalue,
            **self.details,
        }
