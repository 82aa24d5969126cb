"""Dense matrix primitives.

Everything downstream is built on the rank-revealing SVD split computed
here: pseudoinverses, null/range bases, affine solution sets of linear
systems, semidefiniteness tests, and Schur complements of partitioned
symmetric matrices.

Matrices are plain ``numpy.ndarray`` values, validated (2-d, finite) at
the function boundary.  All functions are pure and all returned values
should be treated as immutable.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Singular value sigma_i is treated as zero when
# sigma_i <= RANK_EPS * sigma_max * max(rows, cols).
RANK_EPS = 1e-12
# b is in R(A) when ||U2' b|| <= RANGE_TOL * max(1, ||b||).
RANGE_TOL = 1e-9
# Asymmetry ||M - M'|| <= SYM_TOL * ||M|| is silently symmetrized,
# anything larger is rejected.
SYM_TOL = 1e-9
# Minimum eigenvalue >= -PSD_TOL * max(1, ||M||) counts as nonnegative.
PSD_TOL = 1e-9


def as_matrix(a, name: str = "matrix") -> np.ndarray:
    """Validate and convert ``a`` to a 2-d float array with finite entries."""
    m = np.asarray(a, dtype=float)
    if m.ndim != 2:
        raise ValueError(f"{name} must be 2-dimensional, got shape {m.shape}")
    if m.size and not np.all(np.isfinite(m)):
        raise ValueError(f"{name} contains non-finite entries")
    return m


def as_vector(b, name: str = "vector") -> np.ndarray:
    """Validate and convert ``b`` to a 1-d float array with finite entries."""
    v = np.asarray(b, dtype=float)
    if v.ndim != 1:
        raise ValueError(f"{name} must be 1-dimensional, got shape {v.shape}")
    if v.size and not np.all(np.isfinite(v)):
        raise ValueError(f"{name} contains non-finite entries")
    return v


@dataclass(frozen=True)
class SvdFactors:
    """Rank-revealing SVD split A = U1 diag(sigma) V1'.

    Columns of ``u1``/``u2`` span the range of A and its orthogonal
    complement; columns of ``v1``/``v2`` span the row space and the null
    space.  ``sigma`` holds the retained (positive, descending) singular
    values, and ``rank`` equals ``len(sigma)``.  The zero matrix has rank
    0 with empty ``u1``/``v1`` blocks; a square invertible matrix has
    empty ``u2``/``v2`` blocks.
    """

    u1: np.ndarray
    u2: np.ndarray
    v1: np.ndarray
    v2: np.ndarray
    sigma: np.ndarray
    rank: int

    def pinv(self) -> np.ndarray:
        """Moore-Penrose pseudoinverse V1 diag(1/sigma) U1'."""
        if self.rank == 0:
            return np.zeros((self.v1.shape[0], self.u1.shape[0]))
        return (self.v1 / self.sigma) @ self.u1.T

    def in_range(self, b: np.ndarray) -> bool:
        """Whether b lies in the range of A (relative residual test)."""
        b = as_vector(b)
        resid = np.linalg.norm(self.u2.T @ b)
        return resid <= RANGE_TOL * max(1.0, np.linalg.norm(b))


def svd(a) -> SvdFactors:
    """Full SVD of ``a`` split at the numerical rank."""
    a = as_matrix(a)
    m, n = a.shape
    if a.size == 0:
        u = np.eye(m)
        s = np.zeros(0)
        vt = np.eye(n)
    else:
        u, s, vt = np.linalg.svd(a, full_matrices=True)
    smax = float(s[0]) if s.size else 0.0
    cutoff = RANK_EPS * smax * max(m, n, 1)
    rank = int(np.sum(s > cutoff))
    return SvdFactors(
        u1=u[:, :rank],
        u2=u[:, rank:],
        v1=vt[:rank].T,
        v2=vt[rank:].T,
        sigma=s[:rank].copy(),
        rank=rank,
    )


def pinv(a) -> np.ndarray:
    """Moore-Penrose pseudoinverse of ``a``."""
    return svd(a).pinv()


def null_basis(a) -> np.ndarray:
    """Orthonormal columns spanning the null space of ``a``."""
    return svd(a).v2


def range_basis(a) -> np.ndarray:
    """Orthonormal columns spanning the range of ``a``."""
    return svd(a).u1


def spectral_norm(a) -> float:
    """Largest singular value; 0 for the zero or empty matrix."""
    a = as_matrix(a)
    if a.size == 0:
        return 0.0
    return float(np.linalg.svd(a, compute_uv=False)[0])


@dataclass(frozen=True)
class AffineSolutionSet:
    """An affine set x0 + span(basis columns).

    ``particular`` is the minimum-norm representative and is orthogonal
    to the orthonormal ``basis`` columns, which span the free directions
    (the basis may have zero columns, in which case the set is a single
    point).
    """

    particular: np.ndarray
    basis: np.ndarray

    def __post_init__(self):
        particular = as_vector(self.particular, "particular")
        basis = as_matrix(self.basis, "basis")
        if basis.shape[0] != particular.shape[0]:
            raise ValueError(
                f"basis rows {basis.shape[0]} do not match the particular "
                f"point length {particular.shape[0]}"
            )
        object.__setattr__(self, "particular", particular)
        object.__setattr__(self, "basis", basis)

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def point(self, coeffs=None) -> np.ndarray:
        """A member of the set: particular + basis @ coeffs."""
        if coeffs is None:
            return self.particular.copy()
        coeffs = as_vector(coeffs, "coeffs")
        return self.particular + self.basis @ coeffs


@dataclass(frozen=True)
class LinearSolve:
    """Outcome of solving A x = b.

    When ``consistent`` the set solves the system exactly; otherwise it
    is the least-squares solution set and ``residual`` = ||A x - b||,
    which equals ||U2' b||.
    """

    solutions: AffineSolutionSet
    residual: float
    consistent: bool


def solve_linear(a, b) -> LinearSolve:
    """Solve A x = b, returning the full solution set.

    The particular solution is the minimum-norm one (pinv(A) b); the
    basis spans the null space of A.  Consistency is decided by the
    relative range-membership test; b = 0 is always consistent.
    """
    a = as_matrix(a, "A")
    b = as_vector(b, "b")
    if a.shape[0] != b.shape[0]:
        raise ValueError(f"A has {a.shape[0]} rows but b has length {b.shape[0]}")
    f = svd(a)
    x = f.pinv() @ b
    residual = float(np.linalg.norm(f.u2.T @ b))
    consistent = residual <= RANGE_TOL * max(1.0, float(np.linalg.norm(b)))
    return LinearSolve(AffineSolutionSet(x, f.v2), residual, consistent)


def symmetrize(m, name: str = "matrix") -> np.ndarray:
    """Return (M + M')/2, rejecting inputs with material asymmetry."""
    m = as_matrix(m, name)
    if m.shape[0] != m.shape[1]:
        raise ValueError(f"{name} must be square, got shape {m.shape}")
    asym = np.linalg.norm(m - m.T)
    if asym > SYM_TOL * np.linalg.norm(m):
        raise ValueError(f"{name} is not symmetric (asymmetry {asym:g})")
    return 0.5 * (m + m.T)


def is_psd(m) -> bool:
    """Whether ``m`` is symmetric positive semidefinite.

    Returns False (rather than raising) for symmetric-looking input
    that fails the eigenvalue test or for materially asymmetric input.
    """
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise ValueError(f"square matrix required, got shape {m.shape}")
    if m.size == 0:
        return True
    if np.linalg.norm(m - m.T) > SYM_TOL * np.linalg.norm(m):
        return False
    w = np.linalg.eigvalsh(0.5 * (m + m.T))
    scale = max(1.0, float(np.max(np.abs(w))))
    return bool(w[0] >= -PSD_TOL * scale)


def is_nsd(m) -> bool:
    """Whether ``m`` is symmetric negative semidefinite."""
    return is_psd(-as_matrix(m))


def assemble_blocks(m11, m12, m22) -> np.ndarray:
    """Assemble the symmetric block matrix [[M11, M12], [M12', M22]]."""
    m11 = as_matrix(m11, "M11")
    m12 = as_matrix(m12, "M12")
    m22 = as_matrix(m22, "M22")
    p, n = m11.shape[0], m22.shape[0]
    if m11.shape != (p, p) or m22.shape != (n, n) or m12.shape != (p, n):
        raise ValueError(
            f"inconsistent block shapes {m11.shape}, {m12.shape}, {m22.shape}"
        )
    m = np.zeros((p + n, p + n))
    m[:p, :p] = m11
    m[:p, p:] = m12
    m[p:, :p] = m12.T
    m[p:, p:] = m22
    return m


@dataclass(frozen=True)
class SchurPair:
    """The two lambda-dependent Schur complements of a partitioned matrix.

    ``schur11`` = (M22 - lambda I) - M12' pinv(M11) M12 is the complement
    of the upper-left block; ``schur22`` = M11 - M12 pinv(M22 - lambda I) M12'
    is the complement of the (shifted) lower-right block.  Both are
    symmetric.
    """

    schur11: np.ndarray
    schur22: np.ndarray


def schur_complements(m11, m12, m22, lam: float = 0.0) -> SchurPair:
    """Compute both Schur complements of [[M11, M12], [M12', M22 - lam I]]."""
    m11 = symmetrize(m11, "M11")
    m22 = symmetrize(m22, "M22")
    m12 = as_matrix(m12, "M12")
    if m12.shape != (m11.shape[0], m22.shape[0]):
        raise ValueError(
            f"M12 shape {m12.shape} inconsistent with blocks "
            f"{m11.shape} and {m22.shape}"
        )
    m22l = m22 - lam * np.eye(m22.shape[0])
    s11 = m22l - m12.T @ pinv(m11) @ m12
    s22 = m11 - m12 @ pinv(m22l) @ m12.T
    return SchurPair(0.5 * (s11 + s11.T), 0.5 * (s22 + s22.T))


def is_psd_partitioned(m11, m12, m22) -> bool:
    """PSD test for the assembled block matrix, block by block.

    True iff M11 >= 0, the Schur complement M22 - M12' pinv(M11) M12 >= 0,
    and the range of M12 is contained in the range of M11.  Agrees with
    ``is_psd`` on the assembled matrix.
    """
    m11 = symmetrize(m11, "M11")
    m22 = symmetrize(m22, "M22")
    m12 = as_matrix(m12, "M12")
    if m12.shape != (m11.shape[0], m22.shape[0]):
        raise ValueError(
            f"M12 shape {m12.shape} inconsistent with blocks "
            f"{m11.shape} and {m22.shape}"
        )
    if not is_psd(m11):
        return False
    f = svd(m11)
    range_ok = np.linalg.norm(f.u2.T @ m12) <= RANGE_TOL * np.linalg.norm(m12)
    if not range_ok:
        return False
    s11 = m22 - m12.T @ f.pinv() @ m12
    return is_psd(0.5 * (s11 + s11.T))
