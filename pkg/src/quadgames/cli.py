"""Command-line interface.

Problem files are JSON documents with a ``kind`` field naming the solver
and arrays named after the solver's inputs (see README for the schema
and one example per kind).  Results are emitted as JSON documents that
round-trip losslessly; curves are emitted as CSV with the literal token
``inf`` for infinite entries.

Exit codes: 0 solved / check passed, 1 input error, 2 well-posed
"no solution / unbounded" outcomes, 3 check failed.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import game, minmax, oracle, quadratic, sphere
from .linalg import AffineSolutionSet, solve_linear, svd

KINDS = (
    "linear_solve",
    "quad_min",
    "saddle",
    "lagrangian",
    "trust_region",
    "minmax",
    "maxmin",
)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_NO_SOLUTION = 2
EXIT_CHECK_FAILED = 3


class ProblemError(Exception):
    """Malformed or inconsistent problem file."""


def _tol_scale() -> float:
    raw = os.environ.get("QG_TOL_OVERRIDE", "1")
    try:
        scale = float(raw)
    except ValueError as exc:
        raise ProblemError(f"QG_TOL_OVERRIDE is not a number: {raw!r}") from exc
    if not scale > 0:
        raise ProblemError("QG_TOL_OVERRIDE must be positive")
    return scale


def load_problem(path: str) -> dict:
    try:
        with open(path) as fh:
            prob = json.load(fh)
    except OSError as exc:
        raise ProblemError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ProblemError(f"{path}:{exc.lineno}: invalid JSON: {exc.msg}") from exc
    if not isinstance(prob, dict):
        raise ProblemError(f"{path}: top level must be an object")
    kind = prob.get("kind")
    if kind not in KINDS:
        raise ProblemError(
            f"{path}: field 'kind' must be one of {', '.join(KINDS)}; got {kind!r}"
        )
    return prob


def _field_matrix(prob: dict, key: str) -> np.ndarray:
    if key not in prob:
        raise ProblemError(f"missing required matrix field {key!r}")
    try:
        m = np.asarray(prob[key], dtype=float)
    except (TypeError, ValueError) as exc:
        raise ProblemError(f"field {key!r} is not a numeric array") from exc
    if m.ndim != 2:
        raise ProblemError(f"field {key!r} must be a rectangular 2-d array")
    return m


def _field_vector(prob: dict, key: str) -> np.ndarray:
    if key not in prob:
        raise ProblemError(f"missing required vector field {key!r}")
    try:
        v = np.asarray(prob[key], dtype=float)
    except (TypeError, ValueError) as exc:
        raise ProblemError(f"field {key!r} is not a numeric array") from exc
    if v.ndim != 1:
        raise ProblemError(f"field {key!r} must be a 1-d array")
    return v


def _partitioned(prob: dict) -> game.PartitionedQuadratic:
    m11 = _field_matrix(prob, "M11")
    m12 = _field_matrix(prob, "M12")
    m22 = _field_matrix(prob, "M22")
    d1 = np.asarray(prob.get("d1", np.zeros(m11.shape[0])), dtype=float)
    d2 = np.asarray(prob.get("d2", np.zeros(m22.shape[0])), dtype=float)
    try:
        return game.PartitionedQuadratic(m11, m12, m22, d1, d2)
    except ValueError as exc:
        raise ProblemError(str(exc)) from exc


def _oracle_config(prob: dict, samples=None, seed=None) -> oracle.OracleConfig:
    raw = dict(prob.get("oracle", {}))
    if samples is not None:
        raw["samples"] = samples
    if seed is not None:
        raw["seed"] = seed
    try:
        return oracle.OracleConfig(**raw)
    except (TypeError, ValueError) as exc:
        raise ProblemError(f"invalid oracle config: {exc}") from exc


def _aset_doc(aset: AffineSolutionSet) -> dict:
    return {
        "particular": aset.particular.tolist(),
        "basis": aset.basis.tolist(),
    }


def _sset_doc(sset: sphere.SphereSolutionSet) -> dict:
    return {
        "particular": sset.particular.tolist(),
        "basis": sset.basis.tolist(),
        "radius_residual": sset.radius_residual,
        "representative": sset.representative().tolist(),
    }


def solve_document(prob: dict) -> tuple[dict, int]:
    """Dispatch a parsed problem to its solver and build the result doc."""
    kind = prob["kind"]
    try:
        if kind == "linear_solve":
            result = solve_linear(_field_matrix(prob, "A"), _field_vector(prob, "b"))
            doc = {
                "kind": kind,
                "status": "consistent" if result.consistent else "least_squares",
                "residual": result.residual,
                "solutions": _aset_doc(result.solutions),
            }
            return doc, EXIT_OK

        if kind == "quad_min":
            form = quadratic.QuadraticForm(
                _field_matrix(prob, "D"),
                _field_vector(prob, "d"),
                float(prob.get("c", 0.0)),
            )
            optimum = quadratic.minimize(form)
            if optimum is None:
                return {"kind": kind, "status": "unbounded_below"}, EXIT_NO_SOLUTION
            doc = {
                "kind": kind,
                "status": "bounded",
                "value": optimum.value,
                "minimizers": _aset_doc(optimum.points),
            }
            return doc, EXIT_OK

        if kind == "saddle":
            pq = _partitioned(prob)
            solution = game.solve_saddle(pq)
            if solution is None:
                return {"kind": kind, "status": "no_solution"}, EXIT_NO_SOLUTION
            doc = {
                "kind": kind,
                "status": "solved",
                "value": solution.value,
                "u_star": solution.u_star.tolist(),
                "w_star": solution.w_star.tolist(),
                "solutions": _aset_doc(solution.solutions),
            }
            return doc, EXIT_OK

        if kind == "lagrangian":
            pq = _partitioned(prob)
            if "lambda" not in prob:
                raise ProblemError("lagrangian problems require a 'lambda' field")
            lam = float(prob["lambda"])
            report = game.duality_report(pq, lam)
            doc = {"kind": kind, "lambda": lam, "status": report.status}
            for name, solve in (
                ("minmax", game.minmax_at_lambda(pq, lam)),
                ("maxmin", game.maxmin_at_lambda(pq, lam)),
            ):
                entry: dict = {"finite": solve.finite}
                if solve.finite:
                    entry["value"] = solve.value
                    entry["u_set"] = _aset_doc(solve.u_set)
                    entry["w_set"] = _aset_doc(solve.w_set)
                doc[name] = entry
            code = EXIT_OK if report.status == "strong_duality" else EXIT_NO_SOLUTION
            if report.value is not None:
                doc["value"] = report.value
            return doc, code

        if kind == "trust_region":
            solution = sphere.solve_trust_region(
                _field_matrix(prob, "D"), _field_vector(prob, "d")
            )
            doc = {
                "kind": kind,
                "status": "solved",
                "value": solution.value,
                "lambda_p": solution.lambda_p,
                "case": "boundary" if solution.boundary else "interior",
                "w_star": _sset_doc(solution.w_star),
                "diagnostics": {"near_hard_case": solution.near_hard_case},
            }
            return doc, EXIT_OK

        # minmax / maxmin
        pq = _partitioned(prob)
        direction = minmax.Direction(kind)
        solution = minmax.solve_linear_term(pq, direction)
        doc = {
            "kind": kind,
            "status": "solved",
            "value": solution.value,
            "lambda0": solution.lambda0,
            "u_set": _aset_doc(solution.u_set),
            "w_set": _sset_doc(solution.w_set),
            "diagnostics": solution.diagnostics,
        }
        return doc, EXIT_OK
    except ValueError as exc:
        raise ProblemError(str(exc)) from exc


def _fmt(x) -> str:
    if x is None:
        return ""
    x = float(x)
    if math.isinf(x):
        return "inf"
    return repr(x)


def run_solve(args) -> int:
    prob = load_problem(args.input)
    doc, code = solve_document(prob)
    text = json.dumps(doc, indent=2)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return code


def run_curve(args) -> int:
    prob = load_problem(args.input)
    kind = prob["kind"]
    if args.lambda_min >= args.lambda_max:
        raise ProblemError("--lambda-min must be smaller than --lambda-max")
    if args.steps < 2:
        raise ProblemError("--steps must be at least 2")
    if kind == "lagrangian":
        pq = _partitioned(prob)
        rows = game.lambda_curve(pq, args.lambda_min, args.lambda_max, args.steps)
        header = "lambda,minmax,maxmin"
    elif kind == "trust_region":
        rows = sphere.dual_curve(
            _field_matrix(prob, "D"),
            _field_vector(prob, "d"),
            args.lambda_min,
            args.lambda_max,
            args.steps,
        )
        header = "lambda,L,dL"
    else:
        raise ProblemError(
            f"curve supports kinds 'lagrangian' and 'trust_region', not {kind!r}"
        )
    lines = [header] + [",".join(_fmt(x) for x in row) for row in rows]
    text = "\n".join(lines) + "\n"
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _check_trust_region(prob, cfg, scale):
    doc, _ = solve_document(prob)
    value = float(prob.get("expected_value", doc["value"]))
    form = quadratic.QuadraticForm(
        _field_matrix(prob, "D"), _field_vector(prob, "d")
    )
    if form.dim > 4:
        raise ProblemError("sphere oracle supports dimensions up to 4")
    oracle_value, _ = oracle.sphere_max(form, cfg)
    gap = value - oracle_value
    passed = -1e-9 * scale <= gap <= 5e-3 * scale
    return value, oracle_value, passed


def _check_minmax(prob, cfg, scale):
    doc, _ = solve_document(prob)
    value = float(prob.get("expected_value", doc["value"]))
    pq = _partitioned(prob)
    direction = minmax.Direction(prob["kind"])
    oracle_value = oracle.grid_minmax(pq, cfg, direction)
    tol = 1e-3 if max(pq.u_dim, pq.w_dim) <= 1 else 5e-3
    passed = abs(value - oracle_value) <= tol * scale
    return value, oracle_value, passed


def _check_quad_min(prob, cfg, scale):
    doc, code = solve_document(prob)
    form = quadratic.QuadraticForm(
        _field_matrix(prob, "D"), _field_vector(prob, "d"), float(prob.get("c", 0.0))
    )
    rng = np.random.default_rng(cfg.seed)
    if code == EXIT_NO_SOLUTION:
        # Escape direction: the component of -d outside the range of D.
        f = svd(form.hessian)
        escape = -(form.linear - f.u1 @ (f.u1.T @ form.linear))
        probe = form.evaluate(1e6 * escape)
        return math.nan, probe, probe < -1e2
    value = float(prob.get("expected_value", doc["value"]))
    x0 = np.asarray(doc["minimizers"]["particular"])
    candidates = x0 + rng.standard_normal((cfg.samples, form.dim)) * (
        1.0 + np.linalg.norm(x0)
    )
    candidates[0] = x0
    vals = [form.evaluate(c) for c in candidates]
    oracle_value = float(np.min(vals))
    passed = -1e-9 * scale <= oracle_value - value <= 1e-6 * scale
    return value, oracle_value, passed


def _check_linear_solve(prob, cfg, scale):
    doc, _ = solve_document(prob)
    a = _field_matrix(prob, "A")
    b = _field_vector(prob, "b")
    residual = float(prob.get("expected_value", doc["residual"]))
    rng = np.random.default_rng(cfg.seed)
    x0 = np.asarray(doc["solutions"]["particular"])
    candidates = x0 + rng.standard_normal((cfg.samples, a.shape[1])) * (
        1.0 + np.linalg.norm(x0)
    )
    candidates[0] = x0
    oracle_value = float(np.min(np.linalg.norm(candidates @ a.T - b, axis=1)))
    passed = -1e-9 * scale <= oracle_value - residual <= 1e-6 * scale
    return residual, oracle_value, passed


def _check_saddle(prob, cfg, scale):
    doc, code = solve_document(prob)
    if code == EXIT_NO_SOLUTION:
        return math.nan, math.nan, True
    pq = _partitioned(prob)
    u_star = np.asarray(doc["u_star"], dtype=float)
    w_star = np.asarray(doc["w_star"], dtype=float)
    value = float(doc["value"])
    samples = min(cfg.samples, 2000)
    passed = game.verify_saddle(
        pq, u_star, w_star, samples=samples, seed=cfg.seed, tol=1e-9 * scale
    )
    if "expected_value" in prob:
        passed = passed and abs(float(prob["expected_value"]) - value) <= 1e-9 * scale
    return value, pq.evaluate(u_star, w_star), passed


def _check_lagrangian(prob, cfg, scale):
    pq = _partitioned(prob)
    if pq.u_dim > 2 or pq.w_dim > 2:
        raise ProblemError("lagrangian check supports dimensions up to 2")
    lam = float(prob["lambda"])
    mm = game.minmax_at_lambda(pq, lam)
    xm = game.maxmin_at_lambda(pq, lam)
    if not xm.finite:
        return math.nan, math.nan, True
    value = float(prob.get("expected_value", xm.value))
    box = cfg.box_radius if cfg.box_radius > 0 else oracle._auto_box(pq)
    points = np.linspace(-box, box, min(cfg.grid_points, 400))
    # Outer grid over w, inner exact minimum over u of the parameterized
    # objective; the inner solve reuses the fixed pinv of M11.
    if pq.w_dim == 1:
        w_grid = points.reshape(-1, 1)
    else:
        w_grid = np.stack(
            np.meshgrid(points, points), axis=-1
        ).reshape(-1, 2)
    f11 = svd(pq.m11)
    rhs = w_grid @ pq.m12.T + pq.d1
    if f11.u2.shape[1] > 0:
        bad = np.linalg.norm(rhs @ f11.u2, axis=1) > 1e-9 * np.maximum(
            1.0, np.linalg.norm(rhs, axis=1)
        )
    else:
        bad = np.zeros(len(w_grid), dtype=bool)
    m22l = pq.m22 - lam * np.eye(pq.w_dim)
    outer = (
        0.5 * np.einsum("ij,ij->i", w_grid @ m22l, w_grid)
        + w_grid @ pq.d2
        + 0.5 * lam
    )
    inner = -0.5 * np.einsum("ij,ij->i", rhs @ f11.pinv(), rhs)
    totals = np.where(bad, -math.inf, outer + inner)
    oracle_value = float(np.max(totals))
    tol = (1e-3 if max(pq.u_dim, pq.w_dim) <= 1 else 5e-3) * scale
    passed = abs(oracle_value - value) <= tol
    if mm.finite:
        passed = passed and xm.value <= mm.value + 1e-9 * scale
    return value, oracle_value, passed


def run_check(args) -> int:
    prob = load_problem(args.input)
    scale = _tol_scale()
    cfg = _oracle_config(prob, samples=args.samples, seed=args.seed)
    kind = prob["kind"]
    checkers = {
        "trust_region": _check_trust_region,
        "minmax": _check_minmax,
        "maxmin": _check_minmax,
        "quad_min": _check_quad_min,
        "linear_solve": _check_linear_solve,
        "saddle": _check_saddle,
        "lagrangian": _check_lagrangian,
    }
    value, oracle_value, passed = checkers[kind](prob, cfg, scale)
    print(f"kind: {kind}")
    print(f"solver value: {_fmt(value)}")
    print(f"oracle value: {_fmt(oracle_value)}")
    gap = value - oracle_value if not (math.isnan(value) or math.isnan(oracle_value)) else math.nan
    print(f"gap: {_fmt(gap)}")
    print(f"result: {'PASS' if passed else 'FAIL'}")
    return EXIT_OK if passed else EXIT_CHECK_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quadgames",
        description="Solvers for quadratic games, trust-region problems, "
        "and parametric Lagrangian duality.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="solve a problem file")
    p_solve.add_argument("input")
    p_solve.add_argument("--output", help="write the result JSON to a file")
    p_solve.set_defaults(func=run_solve)

    p_curve = sub.add_parser("curve", help="emit a value-function CSV")
    p_curve.add_argument("input")
    p_curve.add_argument("--lambda-min", type=float, required=True)
    p_curve.add_argument("--lambda-max", type=float, required=True)
    p_curve.add_argument("--steps", type=int, required=True)
    p_curve.add_argument("--output", help="write the CSV to a file")
    p_curve.set_defaults(func=run_curve)

    p_check = sub.add_parser("check", help="cross-check a solve with an oracle")
    p_check.add_argument("input")
    p_check.add_argument("--samples", type=int, default=None)
    p_check.add_argument("--seed", type=int, default=None)
    p_check.set_defaults(func=run_check)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ProblemError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except RuntimeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
