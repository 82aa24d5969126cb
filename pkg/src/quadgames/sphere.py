"""Maximization of a convex quadratic over the unit sphere.

The problem max V(w) = 1/2 w'Dw + w'd over w'w = 1 with D >= 0 is solved
directly: the optimal multiplier is the largest real eigenvalue of the
2n x 2n block matrix [[D, I], [dd', D]].  When that eigenvalue equals
||D|| the optimum sits on a null-space slice of the sphere (boundary
case); when it is larger, the optimizer -(D - lambda I)^{-1} d is unique
and has unit norm (interior case).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import (
    AffineSolutionSet,
    as_vector,
    is_psd,
    spectral_norm,
    svd,
    symmetrize,
)

# An eigenvalue counts as real when |Im| <= IMAG_TOL * (1 + |Re|);
# nonsymmetric eigensolvers return complex pairs with rounding noise.
IMAG_TOL = 1e-8
# Boundary case is declared for lambda_p <= ||D|| + BOUNDARY_TOL * (1 + ||D||).
BOUNDARY_TOL = 1e-8
# Width of the near-hard-case band around response norm 1 where both
# branches are computed and compared.
HARD_CASE_BAND = 1e-6


def _check_inputs(d_mat, d_vec):
    d_mat = symmetrize(d_mat, "D")
    if not is_psd(d_mat):
        raise ValueError("D must be positive semidefinite")
    d_vec = as_vector(d_vec, "d")
    if d_vec.shape[0] != d_mat.shape[0]:
        raise ValueError("d length does not match D")
    return d_mat, d_vec


def companion_matrix(d_mat, d_vec) -> np.ndarray:
    """The 2n x 2n block matrix [[D, I], [dd', D]]."""
    d_mat, d_vec = _check_inputs(d_mat, d_vec)
    n = d_mat.shape[0]
    p = np.zeros((2 * n, 2 * n))
    p[:n, :n] = d_mat
    p[:n, n:] = np.eye(n)
    p[n:, :n] = np.outer(d_vec, d_vec)
    p[n:, n:] = d_mat
    return p


def lambda_p(d_mat, d_vec) -> float:
    """Largest real eigenvalue of the companion matrix.

    A real eigenvalue >= ||D|| always exists for PSD D; its absence
    signals an eigensolver failure and is surfaced as a RuntimeError.
    """
    p = companion_matrix(d_mat, d_vec)
    try:
        eigs = np.linalg.eigvals(p)
    except np.linalg.LinAlgError as exc:
        raise RuntimeError("eigenvalue computation failed") from exc
    real = eigs[np.abs(eigs.imag) <= IMAG_TOL * (1.0 + np.abs(eigs.real))]
    if real.size == 0:
        raise RuntimeError("no real eigenvalue found in the companion matrix")
    return float(real.real.max())


@dataclass(frozen=True)
class BoundaryConditions:
    """The two tests deciding whether the multiplier sticks at ||D||.

    ``range_holds``: d lies in the range of D - ||D|| I.
    ``norm_holds``: ||pinv(D - ||D|| I) d|| <= 1.
    Both hold iff the optimal multiplier equals ||D||.
    ``response_norm`` is the tested pseudoinverse-response norm.
    """

    range_holds: bool
    norm_holds: bool
    response_norm: float


def boundary_conditions(d_mat, d_vec) -> BoundaryConditions:
    d_mat, d_vec = _check_inputs(d_mat, d_vec)
    n = d_mat.shape[0]
    shifted = d_mat - spectral_norm(d_mat) * np.eye(n)
    f = svd(shifted)
    response = f.pinv() @ d_vec
    response_norm = float(np.linalg.norm(response))
    return BoundaryConditions(
        range_holds=f.in_range(d_vec),
        norm_holds=response_norm <= 1.0 + 1e-9,
        response_norm=response_norm,
    )


@dataclass(frozen=True)
class SphereSolutionSet:
    """Intersection of an affine set with the unit sphere.

    ``particular`` is the minimum-norm point of the affine set (norm at
    most 1), ``basis`` spans the free directions, and ``radius_residual``
    = sqrt(max(0, 1 - ||particular||^2)) is the norm available along
    them.  Representatives are unit vectors.
    """

    particular: np.ndarray
    basis: np.ndarray
    radius_residual: float

    def representative(self) -> np.ndarray:
        """Deterministic unit-norm member: positive coefficient on the
        first free direction, or the particular point alone."""
        if self.basis.shape[1] == 0:
            return self.particular.copy()
        return self.particular + self.radius_residual * self.basis[:, 0]


def sphere_intersect(aset: AffineSolutionSet) -> SphereSolutionSet:
    """Intersect an affine solution set with the unit sphere.

    Relies on the particular point being the minimum-norm member
    (orthogonal to the basis).  Raises when the intersection is empty,
    which on trust-region solution sets signals a numerical breakdown.
    """
    p_norm = float(np.linalg.norm(aset.particular))
    if p_norm > 1.0 + 1e-9:
        raise ValueError(
            f"affine set does not reach the unit sphere (min norm {p_norm!r})"
        )
    if aset.basis.shape[1] == 0 and p_norm < 1.0 - 1e-9:
        raise ValueError(
            f"affine set is a single interior point (norm {p_norm!r}); "
            "empty intersection with the sphere"
        )
    residual = math.sqrt(max(0.0, 1.0 - p_norm * p_norm))
    return SphereSolutionSet(aset.particular, aset.basis, residual)


@dataclass(frozen=True)
class TrustRegionSolution:
    """Solution of max of a convex quadratic over the unit sphere.

    ``boundary`` records whether the optimal multiplier equals ||D||
    (solution set may include null-space directions) or exceeds it
    (unique optimizer).  ``near_hard_case`` flags instances where the
    boundary response norm sits within the fragile band around 1 and
    both branches were compared.
    """

    value: float
    lambda_p: float
    boundary: bool
    w_star: SphereSolutionSet
    near_hard_case: bool = False


def _boundary_branch(d_mat, d_vec):
    n = d_mat.shape[0]
    shifted = d_mat - spectral_norm(d_mat) * np.eye(n)
    f = svd(shifted)
    step = f.pinv() @ d_vec
    w_star = sphere_intersect(AffineSolutionSet(-step, f.v2))
    value = float(-0.5 * d_vec @ step + 0.5 * spectral_norm(d_mat))
    return value, w_star


def _interior_branch(d_mat, d_vec, lam):
    n = d_mat.shape[0]
    w = -np.linalg.solve(d_mat - lam * np.eye(n), d_vec)
    value = float(0.5 * d_vec @ w + 0.5 * lam)
    return value, SphereSolutionSet(w, np.zeros((n, 0)), 0.0)


def _objective(d_mat, d_vec, w) -> float:
    return float(0.5 * w @ d_mat @ w + w @ d_vec)


def solve_trust_region(d_mat, d_vec) -> TrustRegionSolution:
    """Solve max 1/2 w'Dw + w'd over the unit sphere for PSD D.

    The value is -1/2 d' pinv(D - lambda I) d + lambda/2 at the optimal
    multiplier.  Exactly at the hard case (boundary response norm near
    1) both case formulas are evaluated and the better one returned,
    flagged via ``near_hard_case``.
    """
    d_mat, d_vec = _check_inputs(d_mat, d_vec)
    norm_d = spectral_norm(d_mat)
    lam = lambda_p(d_mat, d_vec)
    conditions = boundary_conditions(d_mat, d_vec)
    near_hard = (
        conditions.range_holds
        and abs(conditions.response_norm - 1.0) < HARD_CASE_BAND
    )
    boundary = lam <= norm_d + BOUNDARY_TOL * (1.0 + norm_d)
    if near_hard:
        value_b, w_b = _boundary_branch(d_mat, d_vec)
        try:
            value_i, w_i = _interior_branch(d_mat, d_vec, lam)
        except np.linalg.LinAlgError:
            value_i, w_i = -math.inf, None
        take_boundary = _objective(d_mat, d_vec, w_b.representative()) >= (
            _objective(d_mat, d_vec, w_i.representative())
            if w_i is not None
            else -math.inf
        )
        if take_boundary:
            return TrustRegionSolution(value_b, lam, True, w_b, True)
        return TrustRegionSolution(value_i, lam, False, w_i, True)
    if boundary:
        value, w_star = _boundary_branch(d_mat, d_vec)
        return TrustRegionSolution(value, lam, True, w_star)
    value, w_star = _interior_branch(d_mat, d_vec, lam)
    return TrustRegionSolution(value, lam, False, w_star)


def dual_curve(
    d_mat,
    d_vec,
    lambda_min: float,
    lambda_max: float,
    steps: int,
) -> list[tuple[float, float, float | None]]:
    """Sample the dual value function and its derivative on a grid.

    For lambda > ||D|| the value is -1/2 d'(D - lambda I)^{-1} d +
    lambda/2 with derivative 1/2 (1 - d'(D - lambda I)^{-2} d).  At
    lambda = ||D|| the value is finite iff d is in the range of
    D - ||D|| I, and the pseudoinverse takes over.  Points below ||D||
    are infinite with no derivative (encoded math.inf / None).
    """
    d_mat, d_vec = _check_inputs(d_mat, d_vec)
    if not lambda_min < lambda_max:
        raise ValueError("lambda_min must be smaller than lambda_max")
    if steps < 2:
        raise ValueError("steps must be at least 2")
    n = d_mat.shape[0]
    norm_d = spectral_norm(d_mat)
    edge = BOUNDARY_TOL * (1.0 + norm_d)
    rows: list[tuple[float, float, float | None]] = []
    for lam in np.linspace(lambda_min, lambda_max, steps):
        lam = float(lam)
        if lam < norm_d - edge:
            rows.append((lam, math.inf, None))
        elif lam <= norm_d + edge:
            conditions = boundary_conditions(d_mat, d_vec)
            if conditions.range_holds:
                shifted_pinv = svd(d_mat - norm_d * np.eye(n)).pinv()
                step = shifted_pinv @ d_vec
                value = float(-0.5 * d_vec @ step + 0.5 * lam)
                deriv = float(0.5 * (1.0 - step @ step))
                rows.append((lam, value, deriv))
            else:
                rows.append((lam, math.inf, None))
        else:
            step = np.linalg.solve(d_mat - lam * np.eye(n), d_vec)
            value = float(-0.5 * d_vec @ step + 0.5 * lam)
            deriv = float(0.5 * (1.0 - step @ step))
            rows.append((lam, value, deriv))
    return rows
