"""Single-player convex quadratic forms and their exact minimization.

V(u) = 1/2 u'Du + u'd + c with symmetric D.  Minimization is exact: the
minimum exists iff d lies in the range of D, in which case the full
minimizer set is -pinv(D) d + null(D) and the value is
-1/2 d' pinv(D) d + c.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import AffineSolutionSet, as_vector, is_psd, svd, symmetrize


@dataclass(frozen=True)
class QuadraticForm:
    """V(u) = 1/2 u'hessian u + u'linear + constant."""

    hessian: np.ndarray
    linear: np.ndarray
    constant: float = 0.0

    def __post_init__(self):
        h = symmetrize(self.hessian, "hessian")
        lin = as_vector(self.linear, "linear")
        if lin.shape[0] != h.shape[0]:
            raise ValueError(
                f"linear term has length {lin.shape[0]} but the quadratic "
                f"term is {h.shape[0]}x{h.shape[0]}"
            )
        object.__setattr__(self, "hessian", h)
        object.__setattr__(self, "linear", lin)
        object.__setattr__(self, "constant", float(self.constant))

    @property
    def dim(self) -> int:
        return self.hessian.shape[0]

    def evaluate(self, u) -> float:
        u = as_vector(u, "u")
        if u.shape[0] != self.dim:
            raise ValueError(f"expected a vector of length {self.dim}")
        return float(0.5 * u @ self.hessian @ u + u @ self.linear + self.constant)

    def gradient(self, u) -> np.ndarray:
        u = as_vector(u, "u")
        return self.hessian @ u + self.linear

    def is_convex(self) -> bool:
        return is_psd(self.hessian)

    def is_concave(self) -> bool:
        return is_psd(-self.hessian)

    def negated(self) -> "QuadraticForm":
        return QuadraticForm(-self.hessian, -self.linear, -self.constant)


@dataclass(frozen=True)
class QuadOptimum:
    """Optimizer set and optimal value of a bounded quadratic problem."""

    points: AffineSolutionSet
    value: float


def minimize(q: QuadraticForm) -> QuadOptimum | None:
    """Global minimum of a convex quadratic form.

    Returns None when the form is unbounded below (linear term not in the
    range of the hessian).  Raises for non-convex input; maximize the
    negation instead.
    """
    if not q.is_convex():
        raise ValueError("minimize requires a convex form (PSD quadratic term)")
    f = svd(q.hessian)
    if not f.in_range(q.linear):
        return None
    step = f.pinv() @ q.linear
    value = float(-0.5 * q.linear @ step + q.constant)
    return QuadOptimum(AffineSolutionSet(-step, f.v2), value)


def maximize(q: QuadraticForm) -> QuadOptimum | None:
    """Global maximum of a concave quadratic form, by negation.

    Returns None when unbounded above.
    """
    if not q.is_concave():
        raise ValueError("maximize requires a concave form (NSD quadratic term)")
    result = minimize(q.negated())
    if result is None:
        return None
    return QuadOptimum(result.points, -result.value)
