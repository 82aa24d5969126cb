"""Brute-force verifiers, independent of the closed-form solvers.

Sphere sampling for constrained maximization, nested grid / multi-start
search for the small minmax games, and finite-difference gradients.
These are probabilistic desk-scale bounds (dimensions up to 4), not
certificates.  All randomness flows from the seed in OracleConfig, so
identical configurations give identical outputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from .game import PartitionedQuadratic
from .linalg import as_vector, pinv, spectral_norm, svd
from .minmax import Direction
from .quadratic import QuadraticForm

POLISH_STEPS = 100


@dataclass(frozen=True)
class OracleConfig:
    seed: int = 0
    samples: int = 100_000
    grid_points: int = 2000
    box_radius: float = 0.0  # 0 means derive from the problem data
    fd_step: float = 1e-5

    def __post_init__(self):
        if self.samples < 1:
            raise ValueError("samples must be at least 1")
        if self.grid_points < 2:
            raise ValueError("grid_points must be at least 2")
        if not self.fd_step > 0:
            raise ValueError("fd_step must be positive")


def unit_samples(rng: np.random.Generator, count: int, dim: int) -> np.ndarray:
    """Uniform points on the unit sphere via normalized Gaussian draws."""
    g = rng.standard_normal((count, dim))
    norms = np.linalg.norm(g, axis=1, keepdims=True)
    norms[norms == 0.0] = 1.0
    return g / norms


def sphere_max(q: QuadraticForm, cfg: OracleConfig) -> tuple[float, np.ndarray]:
    """Best sampled value of q on the unit sphere, with a polish step.

    The best of ``cfg.samples`` uniform unit vectors is refined by
    projected gradient ascent (fixed step 1/(||D|| + 1)).
    """
    if q.dim < 1:
        raise ValueError("dimension must be at least 1")
    rng = np.random.default_rng(cfg.seed)
    candidates = unit_samples(rng, cfg.samples, q.dim)
    values = (
        0.5 * np.einsum("ij,ij->i", candidates @ q.hessian, candidates)
        + candidates @ q.linear
        + q.constant
    )
    best = int(np.argmax(values))
    w = candidates[best]
    step = 1.0 / (spectral_norm(q.hessian) + 1.0)
    for _ in range(POLISH_STEPS):
        w = w + step * q.gradient(w)
        w = w / np.linalg.norm(w)
    polished = q.evaluate(w)
    if polished >= values[best]:
        return float(polished), w
    return float(values[best]), candidates[best]


def _w_candidates(dim: int, cfg: OracleConfig) -> np.ndarray:
    if dim == 1:
        return np.array([[-1.0], [1.0]])
    # Deterministic circle grid; dense enough that the discretization
    # error is negligible next to the oracle tolerance.
    count = max(cfg.samples, 4)
    theta = np.linspace(0.0, 2.0 * math.pi, count, endpoint=False)
    return np.column_stack([np.cos(theta), np.sin(theta)])


def _auto_box(pq: PartitionedQuadratic) -> float:
    d = pq.d
    return 2.0 * (1.0 + float(np.linalg.norm(pinv(pq.assembled()) @ d)))


def grid_minmax(
    pq: PartitionedQuadratic, cfg: OracleConfig, direction: Direction
) -> float:
    """Nested brute-force value of the sphere-constrained game.

    MINMAX: outer search over u (grid for 1-d, multi-start simplex for
    2-d) with the inner maximum taken over sampled sphere points.
    MAXMIN: outer maximum over sampled sphere points with the inner
    minimum over u solved exactly (convex quadratic).
    """
    m, n = pq.u_dim, pq.w_dim
    if m > 2 or n > 2:
        raise ValueError("grid oracle supports dimensions up to 2")
    box = cfg.box_radius if cfg.box_radius > 0 else _auto_box(pq)
    w_cand = _w_candidates(n, cfg)

    if direction is Direction.MINMAX:
        quad_w = 0.5 * np.einsum("ij,ij->i", w_cand @ pq.m22, w_cand) + w_cand @ pq.d2

        def outer(u: np.ndarray) -> float:
            cross = w_cand @ (pq.m12.T @ u)
            inner = float(np.max(quad_w + cross))
            return inner + float(0.5 * u @ pq.m11 @ u + u @ pq.d1)

        if m == 0:
            return outer(np.zeros(0))
        if m == 1:
            grid = np.linspace(-box, box, cfg.grid_points)
            vals = [outer(np.array([u])) for u in grid]
            best = int(np.argmin(vals))
            # Derivative-free refinement around the best grid point; the
            # outer function can have a kink where the inner argmax
            # switches, so the raw grid error is O(step), not O(step^2).
            lo = grid[max(best - 1, 0)]
            hi = grid[min(best + 1, len(grid) - 1)]
            for _ in range(80):
                third = (hi - lo) / 3.0
                a, b = lo + third, hi - third
                if outer(np.array([a])) <= outer(np.array([b])):
                    hi = b
                else:
                    lo = a
            return float(outer(np.array([0.5 * (lo + hi)])))
        rng = np.random.default_rng(cfg.seed)
        best = math.inf
        for _ in range(20):
            start = rng.uniform(-box, box, size=m)
            result = optimize.minimize(outer, start, method="Nelder-Mead")
            best = min(best, float(result.fun))
        return best

    # MAXMIN: the inner minimum over u of a convex quadratic is exact.
    f11 = svd(pq.m11)
    m11_pinv = f11.pinv()
    rhs = w_cand @ pq.m12.T + pq.d1  # one row per w candidate
    # Unbounded below when the stationarity system has no solution.
    if f11.u2.shape[1] > 0:
        residuals = np.linalg.norm(rhs @ f11.u2, axis=1)
        feasible = residuals <= 1e-9 * np.maximum(
            1.0, np.linalg.norm(rhs, axis=1)
        )
    else:
        feasible = np.ones(len(w_cand), dtype=bool)
    inner = -0.5 * np.einsum("ij,ij->i", rhs @ m11_pinv, rhs)
    outer_vals = (
        0.5 * np.einsum("ij,ij->i", w_cand @ pq.m22, w_cand) + w_cand @ pq.d2
    )
    totals = np.where(feasible, inner + outer_vals, -math.inf)
    return float(np.max(totals))


def fd_gradient(f, x, step: float) -> np.ndarray:
    """Central-difference gradient of a scalar field."""
    x = as_vector(x, "x")
    grad = np.zeros_like(x)
    for i in range(x.shape[0]):
        shift = np.zeros_like(x)
        shift[i] = step
        grad[i] = (f(x + shift) - f(x - shift)) / (2.0 * step)
    return grad
