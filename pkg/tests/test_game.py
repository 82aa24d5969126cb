import math

import numpy as np
import pytest

from quadgames import (
    PartitionedQuadratic,
    duality_report,
    lambda_curve,
    maxmin_at_lambda,
    maxmin_threshold,
    minmax_at_lambda,
    minmax_threshold,
    solve_saddle,
    verify_saddle,
)

from util import random_partitioned, random_saddle_instance


def bilinear(d1: float, d2: float) -> PartitionedQuadratic:
    z = np.zeros((1, 1))
    return PartitionedQuadratic(
        z, np.array([[1.0]]), z, np.array([d1]), np.array([d2])
    )


def gap_instance() -> PartitionedQuadratic:
    one = np.array([[1.0]])
    return PartitionedQuadratic(one, one, one, np.zeros(1), np.zeros(1))


def grid_saddle_values(pq, points):
    """Nested grid estimates of (minmax, maxmin) over a box.

    Independent of the closed-form path: both values are read straight
    off the tabulated payoffs.
    """
    m, n = pq.u_dim, pq.w_dim
    big = pq.assembled()
    box = 2.0 * (1.0 + np.linalg.norm(np.linalg.pinv(big) @ pq.d))
    axis = np.linspace(-box, box, points)
    u_grid = np.stack(
        np.meshgrid(*([axis] * m), indexing="ij"), axis=-1
    ).reshape(-1, m)
    w_grid = np.stack(
        np.meshgrid(*([axis] * n), indexing="ij"), axis=-1
    ).reshape(-1, n)
    quad_u = 0.5 * np.einsum("ij,ij->i", u_grid @ pq.m11, u_grid) + u_grid @ pq.d1
    quad_w = 0.5 * np.einsum("ij,ij->i", w_grid @ pq.m22, w_grid) + w_grid @ pq.d2
    minmax = math.inf
    maxmin = -math.inf
    chunk = 256
    inner_min = np.full(len(w_grid), math.inf)
    for lo in range(0, len(u_grid), chunk):
        hi = lo + chunk
        cross = u_grid[lo:hi] @ pq.m12 @ w_grid.T
        table = quad_u[lo:hi, None] + cross + quad_w[None, :]
        minmax = min(minmax, float(table.max(axis=1).min()))
        inner_min = np.minimum(inner_min, table.min(axis=0))
    maxmin = float(inner_min.max())
    return minmax, maxmin


def test_saddle_bilinear():
    sol = solve_saddle(bilinear(3.0, 5.0))
    assert sol is not None
    assert sol.value == pytest.approx(-15.0, abs=1e-12)
    np.testing.assert_allclose(sol.u_star, [-5.0], atol=1e-12)
    np.testing.assert_allclose(sol.w_star, [-3.0], atol=1e-12)
    assert sol.solutions.dim == 0


def test_saddle_decoupled():
    pq = PartitionedQuadratic(
        np.eye(2), np.zeros((2, 2)), -np.eye(2),
        np.array([1.0, 2.0]), np.array([3.0, 4.0]),
    )
    sol = solve_saddle(pq)
    assert sol is not None
    np.testing.assert_allclose(sol.u_star, [-1.0, -2.0], atol=1e-12)
    np.testing.assert_allclose(sol.w_star, [3.0, 4.0], atol=1e-12)
    assert sol.value == pytest.approx(-0.5 * 5.0 + 0.5 * 25.0, abs=1e-12)


def test_saddle_zero_game():
    z = np.zeros((1, 1))
    pq = PartitionedQuadratic(z, z, z, np.zeros(1), np.zeros(1))
    sol = solve_saddle(pq)
    assert sol is not None
    assert sol.value == 0.0
    assert sol.solutions.dim == 2


def test_saddle_no_solution_off_range():
    z = np.zeros((1, 1))
    pq = PartitionedQuadratic(z, z, z, np.array([1.0]), np.zeros(1))
    assert solve_saddle(pq) is None


def test_saddle_sign_conditions_enforced():
    one = np.array([[1.0]])
    with pytest.raises(ValueError):
        solve_saddle(PartitionedQuadratic(-one, one, -one, np.zeros(1), np.zeros(1)))
    with pytest.raises(ValueError):
        solve_saddle(PartitionedQuadratic(one, one, one, np.zeros(1), np.zeros(1)))


def test_verify_saddle_accepts_and_refutes():
    pq = bilinear(3.0, 5.0)
    assert verify_saddle(pq, np.array([-5.0]), np.array([-3.0]))
    assert not verify_saddle(pq, np.array([0.0]), np.array([0.0]))
    z = np.zeros((1, 1))
    zero = PartitionedQuadratic(z, z, z, np.zeros(1), np.zeros(1))
    assert verify_saddle(zero, np.zeros(1), np.zeros(1))


def test_saddle_stationarity_and_verifier_on_random_instances():
    rng = np.random.default_rng(41)
    for _ in range(30):
        m = int(rng.integers(1, 4))
        n = int(rng.integers(1, 4))
        pq = random_saddle_instance(rng, m, n)
        sol = solve_saddle(pq)
        assert sol is not None
        grad = pq.assembled() @ sol.solutions.particular + pq.d
        assert np.linalg.norm(grad) <= 1e-8 * (1.0 + np.linalg.norm(pq.d))
        assert verify_saddle(pq, sol.u_star, sol.w_star, tol=1e-6)


def test_grid_oracle_matches_saddle_value_1d():
    rng = np.random.default_rng(43)
    for _ in range(50):
        pq = random_saddle_instance(rng, 1, 1, definite=True)
        sol = solve_saddle(pq)
        assert sol is not None
        minmax, maxmin = grid_saddle_values(pq, points=400)
        assert minmax == pytest.approx(sol.value, abs=2e-2)
        assert maxmin == pytest.approx(sol.value, abs=2e-2)


def test_grid_oracle_matches_saddle_value_2d():
    rng = np.random.default_rng(47)
    for _ in range(8):
        pq = random_saddle_instance(rng, 2, 2, definite=True)
        sol = solve_saddle(pq)
        assert sol is not None
        minmax, maxmin = grid_saddle_values(pq, points=120)
        assert minmax == pytest.approx(sol.value, abs=2e-2)
        assert maxmin == pytest.approx(sol.value, abs=2e-2)


def test_thresholds_gap_instance():
    pq = gap_instance()
    assert minmax_threshold(pq) == pytest.approx(1.0, abs=1e-12)
    assert maxmin_threshold(pq) == pytest.approx(0.0, abs=1e-12)


def test_threshold_ordering_random():
    rng = np.random.default_rng(53)
    for _ in range(200):
        m = int(rng.integers(1, 4))
        n = int(rng.integers(1, 4))
        pq = random_partitioned(rng, m, n)
        assert maxmin_threshold(pq) <= minmax_threshold(pq) + 1e-9


def test_minmax_at_lambda_separable():
    pq = PartitionedQuadratic(
        np.array([[1.0]]), np.zeros((1, 1)), np.zeros((1, 1)),
        np.array([1.0]), np.array([2.0]),
    )
    ls = minmax_at_lambda(pq, 2.0)
    assert ls.finite
    assert ls.value == pytest.approx(1.5, abs=1e-12)
    np.testing.assert_allclose(ls.u_set.particular, [-1.0], atol=1e-12)
    np.testing.assert_allclose(ls.w_set.particular, [1.0], atol=1e-12)


def test_lambda_solves_on_gap_instance():
    pq = gap_instance()
    assert not minmax_at_lambda(pq, 0.5).finite
    xm = maxmin_at_lambda(pq, 0.5)
    assert xm.finite and xm.value == pytest.approx(0.25, abs=1e-12)
    mm = minmax_at_lambda(pq, 1.5)
    assert mm.finite and mm.value == pytest.approx(0.75, abs=1e-12)
    assert not maxmin_at_lambda(pq, -0.5).finite


def test_duality_report_statuses():
    pq = gap_instance()
    assert duality_report(pq, -0.5).status == "both_infinite"
    assert duality_report(pq, 0.5).status == "infinite_gap"
    rep = duality_report(pq, 1.5)
    assert rep.status == "strong_duality"
    assert rep.value == pytest.approx(0.75, abs=1e-12)


def test_lambda_curve_gap_instance():
    rows = lambda_curve(gap_instance(), 0.0, 2.0, 5)
    lams = [r[0] for r in rows]
    np.testing.assert_allclose(lams, [0.0, 0.5, 1.0, 1.5, 2.0])
    assert rows[0][1] == math.inf and rows[1][1] == math.inf
    for lam, mm, xm in rows[2:]:
        assert mm == pytest.approx(lam / 2.0, abs=1e-12)
        assert xm == pytest.approx(lam / 2.0, abs=1e-12)
    for lam, _, xm in rows[:2]:
        assert xm == pytest.approx(lam / 2.0, abs=1e-12)


def test_norms_equal_thresholds_coincide():
    # the thresholds agree even though the assembled matrix is not PSD,
    # so only the threshold formulas apply to this instance
    pq = PartitionedQuadratic(
        np.diag([1.0, 0.0]), np.eye(2), np.eye(2), np.zeros(2), np.zeros(2)
    )
    assert minmax_threshold(pq) == pytest.approx(1.0, abs=1e-12)
    assert maxmin_threshold(pq) == pytest.approx(1.0, abs=1e-12)


def test_lambda_curve_coupled_psd_instance():
    pq = PartitionedQuadratic(
        np.eye(2), np.zeros((2, 2)), np.diag([2.0, 1.0]),
        np.zeros(2), np.zeros(2),
    )
    rows = lambda_curve(pq, 1.5, 2.5, 3)
    assert rows[0][1] == math.inf and math.isfinite(rows[0][2]) is False
    assert math.isfinite(rows[1][1]) and math.isfinite(rows[1][2])
    assert rows[1][1] == pytest.approx(1.0, abs=1e-12)


def test_weak_and_strong_duality_random():
    rng = np.random.default_rng(59)
    for _ in range(40):
        m = int(rng.integers(1, 4))
        n = int(rng.integers(1, 4))
        pq = random_partitioned(rng, m, n, linear_scale=0.5)
        thr_max = maxmin_threshold(pq)
        thr_min = minmax_threshold(pq)
        for lam in np.linspace(thr_max, thr_min + 2.0, 7):
            mm = minmax_at_lambda(pq, float(lam))
            xm = maxmin_at_lambda(pq, float(lam))
            lo = xm.value if xm.finite else -math.inf
            hi = mm.value if mm.finite else math.inf
            assert lo <= hi + 1e-9
            if mm.finite and xm.finite:
                scale = 1.0 + abs(mm.value)
                assert abs(mm.value - xm.value) <= 1e-8 * scale


def test_inner_response_containment():
    rng = np.random.default_rng(61)
    for _ in range(30):
        pq = random_partitioned(rng, 2, 2, linear_scale=0.3)
        lam = minmax_threshold(pq) + float(rng.uniform(0.1, 2.0))
        mm = minmax_at_lambda(pq, lam)
        assert mm.finite
        u0, w0 = mm.u_set.particular, mm.w_set.particular
        m22l = pq.m22 - lam * np.eye(pq.w_dim)
        # inner stationarity: w0 is a best response to u0
        resid = m22l @ w0 + pq.m12.T @ u0 + pq.d2
        assert np.linalg.norm(resid) <= 1e-8 * (1.0 + np.linalg.norm(pq.d))
        # outer stationarity for u0 on the Schur system
        resid_u = pq.m11 @ u0 + pq.m12 @ w0 + pq.d1
        assert np.linalg.norm(resid_u) <= 1e-8 * (1.0 + np.linalg.norm(pq.d))
