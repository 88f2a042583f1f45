"""Phase-space linear algebra.

All vectors and matrices use the interleaved ``(x1, p1, x2, p2, ...)``
ordering. Only :func:`antisymmetric_canonical_form` works in the two-block
``(x1, ..., xk, p1, ..., pk)`` layout; :func:`xxpp_permutation` converts
between the two.
"""

from typing import NamedTuple, Optional

import numpy as np
from scipy.linalg import block_diag, null_space

from .errors import (
    DegeneracyError,
    DimensionError,
    NotPositiveError,
    NotSymmetricError,
    PreconditionError,
)

#: eigenvalues of a PSD input inside (-PSD_CLAMP, 0) are rounded to zero
PSD_CLAMP = 1e-10

_OMEGA_1 = np.array([[0.0, 1.0], [-1.0, 0.0]])


def omega(n: int) -> np.ndarray:
    """Symplectic form of ``n`` modes, the direct sum of ``[[0, 1], [-1, 0]]``."""
    if int(n) != n or n < 1:
        raise DimensionError(f"mode count must be a positive integer, got {n!r}")
    out = block_diag(*([_OMEGA_1] * int(n)))
    out.setflags(write=False)
    return out


def xxpp_permutation(n: int) -> np.ndarray:
    """Permutation matrix ``P`` with ``P @ r_xpxp == r_xxpp``.

    Conjugating by it maps ``omega(n)`` onto ``[[0, I], [-I, 0]]``.
    """
    order = np.concatenate([np.arange(0, 2 * n, 2), np.arange(1, 2 * n, 2)])
    return np.eye(2 * n)[order]


def mode_count(matrix: np.ndarray) -> int:
    """Number of modes of a square, even-dimensional phase-space matrix."""
    matrix = np.asarray(matrix)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {matrix.shape}")
    if matrix.shape[0] == 0 or matrix.shape[0] % 2:
        raise DimensionError(
            f"phase-space matrices have even dimension, got {matrix.shape[0]}"
        )
    return matrix.shape[0] // 2


def check_symmetric(matrix: np.ndarray, tol: float = 1e-9, name: str = "matrix"):
    matrix = np.asarray(matrix, dtype=float)
    scale = max(1.0, np.max(np.abs(matrix), initial=0.0))
    if np.max(np.abs(matrix - matrix.T), initial=0.0) > tol * scale:
        raise NotSymmetricError(f"{name} is not symmetric")
    return matrix


def min_eig_plus_i_omega(matrix: np.ndarray, antisym: np.ndarray) -> float:
    """Smallest eigenvalue of the Hermitian matrix ``matrix + 1j * antisym``."""
    herm = np.asarray(matrix, dtype=complex) + 1j * np.asarray(antisym)
    herm = (herm + herm.conj().T) / 2
    return float(np.linalg.eigvalsh(herm)[0])


def is_symplectic(S: np.ndarray, tol: float = 1e-9) -> bool:
    """True iff ``max|S Ω Sᵀ − Ω| <= tol``."""
    S = np.asarray(S, dtype=float)
    n = mode_count(S)
    Om = omega(n)
    return bool(np.max(np.abs(S @ Om @ S.T - Om)) <= tol)


def symplectic_eigenvalues(sigma: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    """Symplectic eigenvalues of a positive-definite matrix, sorted descending.

    They are the moduli of the eigenvalues of ``iΩσ``. The computation goes
    through the Hermitian matrix ``σ^{1/2} (iΩ) σ^{1/2}``, which is similar
    to ``iΩσ`` and whose spectrum is ``{±ν_j}``.

    Parameters
    ----------
    sigma : (2n, 2n) array_like
        Real symmetric positive-definite matrix.
    tol : float
        Symmetry tolerance and tolerance for matching ``+ν`` with ``-ν``.

    Returns
    -------
    numpy.ndarray
        The ``n`` values ``ν_j``.
    """
    sigma = check_symmetric(sigma, tol, "sigma")
    n = mode_count(sigma)
    try:
        np.linalg.cholesky(sigma)
    except np.linalg.LinAlgError:
        raise NotPositiveError("sigma is not positive definite") from None
    root = psd_sqrt(sigma)
    herm = 1j * root @ omega(n) @ root
    evals = np.linalg.eigvalsh((herm + herm.conj().T) / 2)
    positive = evals[n:][::-1]
    negative = -evals[:n]
    scale = max(1.0, float(positive[0]))
    if np.max(np.abs(positive - negative)) > tol * scale:
        raise ArithmeticError("eigenvalues of iΩσ do not come in ± pairs")
    return positive.copy()


class AntisymmetricCanonicalForm(NamedTuple):
    """``R @ M @ R.T == [[0, diag(d)], [-diag(d), 0]]`` in two-block order."""

    R: np.ndarray
    d: np.ndarray

    def block(self) -> np.ndarray:
        k = len(self.d)
        D = np.diag(self.d)
        Z = np.zeros((k, k))
        return np.block([[Z, D], [-D, Z]])


def antisymmetric_canonical_form(M: np.ndarray, tol: float = 1e-9) -> AntisymmetricCanonicalForm:
    """Orthogonal reduction of a real antisymmetric matrix to canonical form.

    Works by deflation: the dominant eigenvector ``e`` of ``M²`` restricted
    to the not-yet-reduced subspace is paired with ``e' = -M e / d`` so that
    ``eᵀ M e' = d``; the plane they span is invariant and is removed.

    Ties in ``d`` are ordered by the position of the first non-negligible
    entry of ``e``, and each pair is signed so that entry is positive.
    """
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] % 2:
        raise DimensionError(f"expected an even square matrix, got shape {M.shape}")
    scale = max(1.0, np.max(np.abs(M), initial=0.0))
    if np.max(np.abs(M + M.T), initial=0.0) > tol * scale:
        raise NotSymmetricError("matrix is not antisymmetric")
    M = (M - M.T) / 2
    dim = M.shape[0]
    k = dim // 2
    zero_tol = 1e-12 * scale

    pairs = []
    Q = np.eye(dim)
    while Q.shape[1]:
        Mr = Q.T @ M @ Q
        Mr = (Mr - Mr.T) / 2
        w, U = np.linalg.eigh(Mr @ Mr)
        d = float(np.sqrt(max(-w[0], 0.0)))
        if d <= zero_tol:
            # the rest is numerically zero; pair up whatever basis remains
            for j in range(0, Q.shape[1], 2):
                pairs.append((0.0, Q[:, j], Q[:, j + 1]))
            break
        u = U[:, 0]
        u2 = -Mr @ u / d
        u2 -= (u2 @ u) * u
        u2 /= np.linalg.norm(u2)
        pairs.append((d, Q @ u, Q @ u2))
        Q = Q @ null_space(np.vstack([u, u2]))

    def first_index(vec):
        big = np.flatnonzero(np.abs(vec) > 1e-8)
        return int(big[0]) if big.size else 0

    normalised = []
    for d, e, e2 in pairs:
        i = first_index(e)
        if e[i] < 0:
            e, e2 = -e, -e2
        normalised.append((d, i, e, e2))
    # equal d up to round-off must tie-break deterministically
    normalised.sort(key=lambda p: (-round(p[0], 9), p[1]))

    d = np.array([p[0] for p in normalised])
    R = np.vstack([p[2] for p in normalised] + [p[3] for p in normalised])
    assert R.shape == (dim, dim) and len(d) == k
    return AntisymmetricCanonicalForm(R, d)


def psd_sqrt(Y: np.ndarray, tol: float = PSD_CLAMP) -> np.ndarray:
    """Symmetric PSD square root; eigenvalues in ``(-tol, 0)`` are clamped."""
    Y = check_symmetric(Y, 1e-9, "Y")
    w, V = np.linalg.eigh((Y + Y.T) / 2)
    if w.size and w[0] < -tol:
        raise NotPositiveError(f"matrix is not positive semidefinite (min eig {w[0]:.3e})")
    w = np.clip(w, 0.0, None)
    W = (V * np.sqrt(w)) @ V.T
    return (W + W.T) / 2


def symplectic_complete(
    V: np.ndarray,
    omega_big: Optional[np.ndarray] = None,
    tol: float = 1e-8,
    degeneracy_tol: float = 1e-12,
) -> np.ndarray:
    """Extend ``2s`` symplectically canonical rows to a full symplectic matrix.

    The rows ``v_j`` of ``V`` must satisfy ``v_j ω v_kᵀ = (Ω_s)_{jk}``. The
    orthogonal complement of their span is symplectically orthogonalised
    against them, brought to canonical form and rescaled, giving ``S`` with
    ``S ω Sᵀ = Ω_N`` whose leading rows are exactly ``V``.

    Parameters
    ----------
    V : (2s, 2N) array_like
        Rows to keep. ``s = 0`` (no rows) is allowed.
    omega_big : (2N, 2N) array_like, optional
        Antisymmetric form to complete against; defaults to ``omega(N)``.
    tol : float
        Relative tolerance for the canonical-rows precondition.
    degeneracy_tol : float
        Smallest acceptable symplectic norm of a completing pair.

    Raises
    ------
    PreconditionError
        If the rows of ``V`` are not symplectically canonical.
    DegeneracyError
        If the completed block is numerically degenerate.
    """
    V = np.atleast_2d(np.asarray(V, dtype=float))
    if omega_big is None:
        if V.shape[1] % 2:
            raise DimensionError("row length must be even")
        omega_big = omega(V.shape[1] // 2)
    omega_big = np.asarray(omega_big, dtype=float)
    N = mode_count(omega_big)
    if V.size == 0:
        V = np.zeros((0, 2 * N))
    if V.shape[1] != 2 * N or V.shape[0] % 2 or V.shape[0] > 2 * N:
        raise DimensionError(f"rows of shape {V.shape} do not fit a {N}-mode form")
    s = V.shape[0] // 2
    if s == 0 and np.array_equal(omega_big, omega(N)):
        return np.eye(2 * N)

    Om_s = omega(s) if s else np.zeros((0, 0))
    scale = max(1.0, np.max(np.abs(V), initial=0.0) ** 2)
    if s and np.max(np.abs(V @ omega_big @ V.T - Om_s)) > tol * scale:
        raise PreconditionError("rows are not symplectically canonical")
    if s == N:
        return V.copy()

    W = null_space(V).T if s else np.eye(2 * N)
    if s:
        W = W - (W @ omega_big @ V.T) @ Om_s.T @ V
    G = W @ omega_big @ W.T
    form = antisymmetric_canonical_form(G, tol=1e-6)
    if form.d[-1] < degeneracy_tol * max(1.0, float(form.d[0])):
        raise DegeneracyError(
            f"completion is degenerate (smallest pair norm {form.d[-1]:.3e})"
        )
    k = N - s
    W = form.R @ W
    rescale = 1.0 / np.sqrt(np.concatenate([form.d, form.d]))
    W = W * rescale[:, None]
    interleave = np.ravel(np.column_stack([np.arange(k), np.arange(k, 2 * k)]))
    return np.vstack([V, W[interleave]])
