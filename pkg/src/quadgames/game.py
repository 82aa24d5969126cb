"""Two-player quadratic games.

Covers the unconstrained saddle-point problem for
V(u, w) = 1/2 [u; w]' M [u; w] + [u; w]' d with M11 >= 0 and M22 <= 0,
a sampled saddle-point verifier, and the lambda-parameterized family
L(u, w, lambda) = V(u, w) - lambda/2 (w'w - 1) whose minmax and maxmin
value functions become finite at ||M22|| and at the Schur-complement
norm ||M22 - M12' pinv(M11) M12|| respectively.  Between those two
thresholds the duality gap is infinite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import (
    AffineSolutionSet,
    as_matrix,
    as_vector,
    is_nsd,
    is_psd,
    pinv,
    spectral_norm,
    svd,
    symmetrize,
)

# Absolute slack at the existence boundary lambda = threshold, where the
# pseudoinverse formulas remain valid.
THRESHOLD_SLACK = 1e-9


@dataclass(frozen=True)
class PartitionedQuadratic:
    """V(u, w) = 1/2 [u; w]' [[M11, M12], [M12', M22]] [u; w] + u'd1 + w'd2."""

    m11: np.ndarray
    m12: np.ndarray
    m22: np.ndarray
    d1: np.ndarray
    d2: np.ndarray

    def __post_init__(self):
        m11 = symmetrize(self.m11, "M11")
        m22 = symmetrize(self.m22, "M22")
        m12 = as_matrix(self.m12, "M12")
        d1 = as_vector(self.d1, "d1")
        d2 = as_vector(self.d2, "d2")
        p, n = m11.shape[0], m22.shape[0]
        if m12.shape != (p, n):
            raise ValueError(
                f"M12 shape {m12.shape} inconsistent with blocks "
                f"{m11.shape} and {m22.shape}"
            )
        if d1.shape[0] != p or d2.shape[0] != n:
            raise ValueError("linear terms inconsistent with block dimensions")
        object.__setattr__(self, "m11", m11)
        object.__setattr__(self, "m12", m12)
        object.__setattr__(self, "m22", m22)
        object.__setattr__(self, "d1", d1)
        object.__setattr__(self, "d2", d2)

    @property
    def u_dim(self) -> int:
        return self.m11.shape[0]

    @property
    def w_dim(self) -> int:
        return self.m22.shape[0]

    @property
    def d(self) -> np.ndarray:
        return np.concatenate([self.d1, self.d2])

    def assembled(self, lam: float = 0.0) -> np.ndarray:
        """The block matrix with the w-block shifted by -lambda I."""
        p, n = self.u_dim, self.w_dim
        m = np.zeros((p + n, p + n))
        m[:p, :p] = self.m11
        m[:p, p:] = self.m12
        m[p:, :p] = self.m12.T
        m[p:, p:] = self.m22 - lam * np.eye(n)
        return m

    def evaluate(self, u, w) -> float:
        u = as_vector(u, "u")
        w = as_vector(w, "w")
        if u.shape[0] != self.u_dim or w.shape[0] != self.w_dim:
            raise ValueError("argument dimensions do not match the blocks")
        z = np.concatenate([u, w])
        return float(0.5 * z @ self.assembled() @ z + z @ self.d)


@dataclass(frozen=True)
class SaddleSolution:
    """Joint saddle-point set over the stacked (u, w) vector.

    The set is stored jointly because the null space of M couples the
    two players; per-player particular points are sliced on demand.
    """

    solutions: AffineSolutionSet
    value: float
    u_dim: int

    @property
    def u_star(self) -> np.ndarray:
        return self.solutions.particular[: self.u_dim]

    @property
    def w_star(self) -> np.ndarray:
        return self.solutions.particular[self.u_dim :]


def solve_saddle(pq: PartitionedQuadratic) -> SaddleSolution | None:
    """Saddle point of V, which exists iff d is in the range of M.

    Requires M11 >= 0 and M22 <= 0.  Returns None when no solution
    exists.  At a solution, strong duality holds: the minmax and maxmin
    values both equal -1/2 d' pinv(M) d.
    """
    if not is_psd(pq.m11):
        raise ValueError("solve_saddle requires M11 positive semidefinite")
    if not is_nsd(pq.m22):
        raise ValueError("solve_saddle requires M22 negative semidefinite")
    f = svd(pq.assembled())
    d = pq.d
    if not f.in_range(d):
        return None
    step = f.pinv() @ d
    value = float(-0.5 * d @ step)
    return SaddleSolution(AffineSolutionSet(-step, f.v2), value, pq.u_dim)


def verify_saddle(
    pq: PartitionedQuadratic,
    u_star,
    w_star,
    samples: int = 200,
    seed: int = 0,
    tol: float = 1e-9,
) -> bool:
    """Sampled check of V(u*, w) <= V(u*, w*) <= V(u, w*).

    Draws ``samples`` Gaussian perturbations around the candidate point;
    a probabilistic refutation test, not a certificate.
    """
    u_star = as_vector(u_star, "u_star")
    w_star = as_vector(w_star, "w_star")
    rng = np.random.default_rng(seed)
    center = pq.evaluate(u_star, w_star)
    scale = 1.0 + float(np.linalg.norm(u_star) + np.linalg.norm(w_star))
    for _ in range(samples):
        u = u_star + scale * rng.standard_normal(pq.u_dim)
        w = w_star + scale * rng.standard_normal(pq.w_dim)
        if pq.evaluate(u_star, w) > center + tol:
            return False
        if pq.evaluate(u, w_star) < center - tol:
            return False
    return True


def minmax_threshold(pq: PartitionedQuadratic) -> float:
    """Smallest lambda at which min-max of L is finite: ||M22||."""
    return spectral_norm(pq.m22)


def maxmin_threshold(pq: PartitionedQuadratic) -> float:
    """Smallest lambda at which max-min of L is finite:
    ||M22 - M12' pinv(M11) M12||."""
    return spectral_norm(pq.m22 - pq.m12.T @ pinv(pq.m11) @ pq.m12)


@dataclass(frozen=True)
class LambdaSolve:
    """One evaluation of the parameterized game at a fixed lambda.

    ``finite`` is False below the existence threshold; the value and the
    per-player optimizer sets are populated only when finite.
    """

    lam: float
    finite: bool
    value: float | None = None
    u_set: AffineSolutionSet | None = None
    w_set: AffineSolutionSet | None = None


def _require_psd(pq: PartitionedQuadratic) -> None:
    if not is_psd(pq.assembled()):
        raise ValueError("the assembled block matrix must be positive semidefinite")


def _lambda_value(pq: PartitionedQuadratic, lam: float) -> float:
    d = pq.d
    return float(0.5 * lam - 0.5 * d @ pinv(pq.assembled(lam)) @ d)


def minmax_at_lambda(pq: PartitionedQuadratic, lam: float) -> LambdaSolve:
    """min over u of max over w of L at a fixed lambda.

    Infinite for lambda < ||M22||.  When finite, the outer minimizer set
    comes from the Schur complement of the shifted w-block, and the
    returned w set is the inner best response at the particular u.
    """
    _require_psd(pq)
    lam = float(lam)
    thr = minmax_threshold(pq)
    if lam < thr - THRESHOLD_SLACK * (1.0 + thr):
        return LambdaSolve(lam, False)
    n = pq.w_dim
    m22l = pq.m22 - lam * np.eye(n)
    m22l_p = pinv(m22l)
    schur = pq.m11 - pq.m12 @ m22l_p @ pq.m12.T
    schur = 0.5 * (schur + schur.T)
    rhs = pq.d1 - pq.m12 @ (m22l_p @ pq.d2)
    fs = svd(schur)
    u0 = -fs.pinv() @ rhs
    u_set = AffineSolutionSet(u0, fs.v2)
    w0 = -m22l_p @ (pq.m12.T @ u0 + pq.d2)
    w_set = AffineSolutionSet(w0, svd(m22l).v2)
    return LambdaSolve(lam, True, _lambda_value(pq, lam), u_set, w_set)


def maxmin_at_lambda(pq: PartitionedQuadratic, lam: float) -> LambdaSolve:
    """max over w of min over u of L at a fixed lambda.

    Infinite for lambda < ||M22 - M12' pinv(M11) M12||.  When finite,
    the outer maximizer set comes from the Schur complement of M11, and
    the returned u set is the inner best response at the particular w.
    """
    _require_psd(pq)
    lam = float(lam)
    thr = maxmin_threshold(pq)
    if lam < thr - THRESHOLD_SLACK * (1.0 + thr):
        return LambdaSolve(lam, False)
    n = pq.w_dim
    m11_p = pinv(pq.m11)
    schur = (pq.m22 - lam * np.eye(n)) - pq.m12.T @ m11_p @ pq.m12
    schur = 0.5 * (schur + schur.T)
    rhs = pq.d2 - pq.m12.T @ (m11_p @ pq.d1)
    fs = svd(schur)
    w0 = -fs.pinv() @ rhs
    w_set = AffineSolutionSet(w0, fs.v2)
    u0 = -m11_p @ (pq.m12 @ w0 + pq.d1)
    u_set = AffineSolutionSet(u0, svd(pq.m11).v2)
    return LambdaSolve(lam, True, _lambda_value(pq, lam), u_set, w_set)


@dataclass(frozen=True)
class DualityReport:
    """Joint status of the two value functions at one lambda.

    status is "strong_duality" (both finite, equal value),
    "infinite_gap" (only maxmin finite), or "both_infinite".
    """

    status: str
    value: float | None = None


def duality_report(pq: PartitionedQuadratic, lam: float) -> DualityReport:
    mm = minmax_at_lambda(pq, lam)
    xm = maxmin_at_lambda(pq, lam)
    if mm.finite and xm.finite:
        return DualityReport("strong_duality", mm.value)
    if xm.finite:
        return DualityReport("infinite_gap")
    return DualityReport("both_infinite")


def lambda_curve(
    pq: PartitionedQuadratic,
    lambda_min: float,
    lambda_max: float,
    steps: int,
) -> list[tuple[float, float, float]]:
    """Sample both value functions on a uniform lambda grid.

    Returns (lambda, minmax value, maxmin value) triples ordered by
    lambda; infinite branches are encoded as math.inf.
    """
    if not lambda_min < lambda_max:
        raise ValueError("lambda_min must be smaller than lambda_max")
    if steps < 2:
        raise ValueError("steps must be at least 2")
    rows = []
    for lam in np.linspace(lambda_min, lambda_max, steps):
        mm = minmax_at_lambda(pq, float(lam))
        xm = maxmin_at_lambda(pq, float(lam))
        rows.append(
            (
                float(lam),
                mm.value if mm.finite else math.inf,
                xm.value if xm.finite else math.inf,
            )
        )
    return rows
