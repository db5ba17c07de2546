"""Command-line front end.

Reads a JSON problem file, dispatches to the library, re-verifies every
numeric claim, and emits a certificate report as JSON (the documented
schema) or as text.  Exit status: 0 when all certificates pass, 2 when a
result was produced but some certificate failed (or the solver gave up),
1 on malformed input.

Report schema (JSON format)::

    {"kind": ..., "input_echo": ..., "result": ...,
     "certificates": [{"name": ..., "residual": ..., "pass": ...}, ...],
     "runtime_ms": ...}

All floating-point numbers are serialized with 17 significant digits, so
re-reading a report reproduces every finite value bit for bit.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time

import numpy as np

from .certificates import CertificateCheck
from .cones import project_dual, project_generated, positive_relative_test, verify_characterization
from .errors import BadInterval, IterationLimit, MomentFitFailed
from .farkas import FarkasTag, farkas_alternative, generalized_farkas, verify_outcome
from .legendre import legendre_to_monomial, monomial_to_legendre
from .linalg import as_vector, generator_matrix, span_membership
from .legendre import chebyshev_points
from .quadrature import EXACTNESS_TOL, integral_moments, positive_quadrature, verify_exactness
from .shape import LegendrePoly, ShapeProblem, default_grid, eval_poly, project_shape, representer

KINDS = ("project", "farkas", "quadrature", "shape", "membership")


class InputError(Exception):
    """Malformed problem file; the message carries a location."""


# ---------------------------------------------------------------------------
# deterministic JSON with 17 significant digits


def _format_float(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError("non-finite value in report")
    s = format(x, ".17g")
    if not any(c in s for c in ".eE"):
        s += ".0"
    return s


def dumps_report(obj, indent: int = 0) -> str:
    """Serialize a report deterministically (insertion-ordered keys)."""
    pad = " " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f'{pad}  {json.dumps(k)}: {dumps_report(v, indent + 2)}' for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + f"\n{pad}}}"
    if isinstance(obj, (list, tuple)):
        seq = list(obj)
        if not seq:
            return "[]"
        items = [f"{pad}  {dumps_report(v, indent + 2)}" for v in seq]
        return "[\n" + ",\n".join(items) + f"\n{pad}]"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, float):
        return _format_float(obj)
    if isinstance(obj, int):
        return str(obj)
    if obj is None:
        return "null"
    if isinstance(obj, str):
        return json.dumps(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _listify(v) -> list:
    return [float(t) for t in np.asarray(v, dtype=float).ravel()]


# ---------------------------------------------------------------------------
# input handling


def _load_input(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror or exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    if not isinstance(data, dict):
        raise InputError(f"{path}:1:1: top-level value must be an object")
    return data


def _field(data: dict, name: str, path: str, required=True, default=None):
    if name not in data:
        if required:
            raise InputError(f"{path}: missing required field '{name}'")
        return default
    return data[name]


def _vector_field(data, name, path, required=True, default=None):
    raw = _field(data, name, path, required, default)
    if raw is None:
        return None
    try:
        return as_vector(raw)
    except (ValueError, TypeError) as exc:
        raise InputError(f"{path}: field '{name}': {exc}") from exc


def _vectors_field(data, name, path):
    raw = _field(data, name, path)
    if not isinstance(raw, list):
        raise InputError(f"{path}: field '{name}' must be a list of vectors")
    try:
        return [as_vector(v) for v in raw]
    except (ValueError, TypeError) as exc:
        raise InputError(f"{path}: field '{name}': {exc}") from exc


# ---------------------------------------------------------------------------
# per-kind handlers: return (result dict, certificate checks)


def _check(name, residual, passed) -> CertificateCheck:
    return CertificateCheck(name, float(residual), bool(passed))


def _handle_project(data: dict, path: str, tol: float, seed: int):
    generators = _vectors_field(data, "generators", path)
    x = _vector_field(data, "point", path)
    orientation = _field(data, "orientation", path, required=False, default="dual")
    if orientation not in ("dual", "generated"):
        raise InputError(f"{path}: field 'orientation' must be 'dual' or 'generated'")
    witness = _vector_field(data, "witness_e", path, required=False)
    S = generator_matrix(generators, dim=x.size)
    scale = tol * (1.0 + float(np.linalg.norm(x)))

    if orientation == "generated":
        res = project_generated(generators, x, tol)
        r = x - res.point
        checks = [
            _check("multipliers_nonnegative", max(0.0, -float(res.rho.min(initial=0.0))), res.rho.min(initial=0.0) >= 0.0),
            _check("kkt_inequalities", res.kkt_residual, res.kkt_residual <= scale * max(1.0, float(np.linalg.norm(S, axis=0).max(initial=0.0)))),
            _check("orthogonality", res.orthogonality_residual, res.orthogonality_residual <= tol * (1.0 + float(x @ x))),
            _check("representation", float(np.linalg.norm(res.point - S @ res.rho)), float(np.linalg.norm(res.point - S @ res.rho)) <= scale),
        ]
        _ = r
    else:
        res = project_dual(generators, x, tol)
        report = verify_characterization(generators, x, res.point, tol, witness_e=witness)
        checks = list(report.checks)
        checks.append(_check("kkt_residual", res.kkt_residual, res.kkt_residual <= scale * max(1.0, float(np.linalg.norm(S, axis=0).max(initial=0.0)))))
        checks.append(_check("orthogonality", res.orthogonality_residual, res.orthogonality_residual <= tol * (1.0 + float(x @ x))))

    result = {
        "orientation": orientation,
        "point": _listify(res.point),
        "rho": _listify(res.rho),
        "active": [int(i) for i in res.active],
        "kkt_residual": float(res.kkt_residual),
        "orthogonality_residual": float(res.orthogonality_residual),
    }
    return result, checks


def _handle_farkas(data: dict, path: str, tol: float, seed: int):
    if "pairs" in data:
        raw_pairs = _field(data, "pairs", path)
        if not isinstance(raw_pairs, list):
            raise InputError(f"{path}: field 'pairs' must be a list of [vector, scalar] pairs")
        pairs = []
        for i, entry in enumerate(raw_pairs):
            try:
                s, p = entry
                pairs.append((as_vector(s), float(p)))
            except (ValueError, TypeError) as exc:
                raise InputError(f"{path}: field 'pairs[{i}]': {exc}") from exc
        b = _vector_field(data, "b", path)
        r = _field(data, "r", path)
        if not isinstance(r, (int, float)):
            raise InputError(f"{path}: field 'r' must be a number")
        report = generalized_farkas(pairs, b, float(r), tol, seed=seed)
        result = {
            "member_plain": report.member_plain,
            "member_augmented": report.member_augmented,
            "sampled_implication_holds": report.sampled_implication_holds,
            "hypothesis_verified": report.hypothesis_verified,
            "feasible_point": None if report.feasible_point is None else _listify(report.feasible_point),
            "samples_used": report.samples_used,
        }
        checks = [
            _check("membership_monotone", float(report.member_plain and not report.member_augmented), (not report.member_plain) or report.member_augmented),
            _check("sampled_implication_consistent", float((report.member_plain or report.member_augmented) and not report.sampled_implication_holds), (not (report.member_plain or report.member_augmented)) or report.sampled_implication_holds),
            _check("feasibility_hypothesis", float(not report.hypothesis_verified), report.hypothesis_verified),
        ]
        return result, checks

    A = _vectors_field(data, "matrix", path)
    b = _vector_field(data, "rhs", path)
    Am = np.array([list(row) for row in A]) if A else np.zeros((0, b.size))
    if Am.size and Am.shape[1] != b.size:
        raise InputError(f"{path}: matrix width {Am.shape[1]} does not match rhs length {b.size}")
    outcome = farkas_alternative(Am, b, tol)
    verified = verify_outcome(Am, b, outcome, tol)
    ver = outcome.verification
    if outcome.tag is FarkasTag.SYSTEM1:
        checks = [
            _check("primal_residual", ver.primal_residual, ver.primal_residual <= tol * (1.0 + float(np.linalg.norm(b)))),
            _check("multipliers_nonnegative", ver.dual_violation, ver.dual_violation <= tol),
        ]
    else:
        x = outcome.x
        row_norms = np.linalg.norm(Am, axis=1)
        normalized = 0.0
        if row_norms.size:
            with np.errstate(divide="ignore", invalid="ignore"):
                ratios = np.where(row_norms > 0, (Am @ x) / np.where(row_norms > 0, row_norms, 1.0), 0.0)
            normalized = max(0.0, float(ratios.max())) / (1.0 + float(np.linalg.norm(x)))
        checks = [
            _check("dual_violation_normalized", normalized, normalized <= tol),
            _check("strict_gap_positive", max(0.0, -ver.strict_gap), ver.strict_gap > 0.0),
        ]
    checks.append(_check("certificate_verifies", float(not verified), verified))
    result = {
        "tag": outcome.tag.value,
        "y": None if outcome.y is None else _listify(outcome.y),
        "x": None if outcome.x is None else _listify(outcome.x),
        "verification": {
            "primal_residual": ver.primal_residual,
            "dual_violation": ver.dual_violation,
            "strict_gap": ver.strict_gap,
        },
    }
    return result, checks


def _handle_quadrature(data: dict, path: str, tol: float, seed: int):
    degree = _field(data, "degree", path)
    interval = _field(data, "interval", path)
    grid_size = _field(data, "grid_size", path, required=False, default=None)
    if not isinstance(degree, int) or degree < 0:
        raise InputError(f"{path}: field 'degree' must be a nonnegative integer")
    try:
        a, b = (float(v) for v in interval)
    except (TypeError, ValueError) as exc:
        raise InputError(f"{path}: field 'interval' must be [a, b]") from exc
    if grid_size is None:
        grid_size = 8 * (degree + 1)
    if not isinstance(grid_size, int) or grid_size < 4 * (degree + 1):
        raise InputError(f"{path}: field 'grid_size' must be an integer >= 4 (degree + 1)")
    try:
        spec = integral_moments(degree, a, b)
    except BadInterval as exc:
        raise InputError(f"{path}: {exc}") from exc
    rule = positive_quadrature(spec, grid_size)

    exactness = verify_exactness(rule, degree)
    min_weight = float(rule.weights.min(initial=np.inf))
    checks = [
        _check("basis_exactness", exactness, exactness <= EXACTNESS_TOL),
        _check("node_count_bound", float(rule.nodes.size - (degree + 1)), rule.nodes.size <= degree + 1),
        _check("weights_positive", max(0.0, 1e-12 - min_weight), min_weight > 1e-12),
        _check("nodes_in_interval", max(0.0, float(a - rule.nodes.min(initial=a)), float(rule.nodes.max(initial=b) - b)), bool(rule.nodes.size == 0 or (rule.nodes.min() >= a - 1e-12 and rule.nodes.max() <= b + 1e-12))),
    ]
    result = {
        "nodes": _listify(rule.nodes),
        "weights": _listify(rule.weights),
        "degree": degree,
        "interval": [a, b],
    }
    return result, checks


def _parse_shape_target(data: dict, path: str, n: int) -> LegendrePoly:
    raw = _field(data, "target", path)
    if not isinstance(raw, dict) or not ({"legendre", "monomial"} & set(raw)):
        raise InputError(f"{path}: field 'target' must be an object with 'legendre' or 'monomial' coefficients")
    if "legendre" in raw:
        coeffs = as_vector(raw["legendre"])
    else:
        coeffs = monomial_to_legendre(as_vector(raw["monomial"]))
    if coeffs.size > n + 1:
        raise InputError(f"{path}: target degree exceeds n = {n}")
    padded = np.zeros(n + 1)
    padded[: coeffs.size] = coeffs
    return LegendrePoly(padded)


def _handle_shape(data: dict, path: str, tol: float, seed: int):
    n = _field(data, "n", path)
    r = _field(data, "r", path)
    if not isinstance(n, int) or not isinstance(r, int) or not 0 <= r < n:
        raise InputError(f"{path}: need integers 0 <= r < n")
    target = _parse_shape_target(data, path, n)
    grid_raw = _field(data, "grid", path, required=False)
    grid_size = _field(data, "grid_size", path, required=False)
    if grid_raw is not None:
        grid = as_vector(grid_raw)
    elif grid_size is not None:
        if not isinstance(grid_size, int) or grid_size < n + 1:
            raise InputError(f"{path}: field 'grid_size' must be an integer >= n + 1")
        grid = chebyshev_points(grid_size)
    else:
        grid = default_grid(n)
    try:
        problem = ShapeProblem(n=n, r=r, grid=grid, target=target)
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from exc
    res = project_shape(problem, tol)

    # re-verify the claims through the evaluators, not the solver state
    sol = res.solution
    scale = tol * (1.0 + target.norm())
    rep = sol.coeffs - target.coeffs
    for alpha, weight in zip(res.active_alphas, res.rho):
        rep = rep - weight * representer(n, r, float(alpha)).coeffs
    rep_residual = float(np.linalg.norm(rep))
    active_deriv = max((abs(float(eval_poly(sol, float(alpha), r))) for alpha in res.active_alphas), default=0.0)
    grid_min = min((float(eval_poly(sol, float(t), r)) for t in problem.grid), default=0.0)
    checks = [
        _check("representation", rep_residual, rep_residual <= scale),
        _check("active_derivative_zero", active_deriv, active_deriv <= tol * (1.0 + sol.norm())),
        _check("grid_feasibility", max(0.0, -grid_min), grid_min >= -tol * (1.0 + sol.norm())),
        _check("checkgrid_feasibility", max(0.0, -res.min_derivative_on_checkgrid), res.min_derivative_on_checkgrid >= -1e-7),
        _check("active_count_bound", float(not res.bound_ok), res.bound_ok),
    ]
    result = {
        "legendre_coeffs": _listify(sol.coeffs),
        "monomial_coeffs": _listify(legendre_to_monomial(sol.coeffs)),
        "active_alphas": _listify(res.active_alphas),
        "rho": _listify(res.rho),
        "min_derivative_on_checkgrid": float(res.min_derivative_on_checkgrid),
        "distance": float(np.linalg.norm(sol.coeffs - target.coeffs)),
    }
    return result, checks


def _handle_membership(data: dict, path: str, tol: float, seed: int):
    mode = _field(data, "mode", path, required=False, default="cone")
    if mode not in ("span", "cone"):
        raise InputError(f"{path}: field 'mode' must be 'span' or 'cone'")
    vectors = _vectors_field(data, "vectors", path)
    x = _vector_field(data, "point", path)
    G = generator_matrix(vectors, dim=x.size)
    scale = tol * (1.0 + float(np.linalg.norm(x)))

    if mode == "span":
        res = span_membership(x, vectors, tol)
        member = res.member
        coeffs = res.coefficients
        witness = res.residual
    else:
        res = positive_relative_test(vectors, x, tol)
        member = res.positive
        coeffs = res.rho
        witness = res.witness if res.witness is not None else np.zeros(x.size)

    if member:
        rep_res = float(np.linalg.norm(x - G @ coeffs))
        checks = [_check("representation", rep_res, rep_res <= scale)]
        if mode == "cone":
            checks.append(_check("multipliers_nonnegative", max(0.0, -float(coeffs.min(initial=0.0))), coeffs.min(initial=0.0) >= 0.0))
    else:
        w = witness
        col_scale = scale * max(1.0, float(np.linalg.norm(G, axis=0).max(initial=0.0)))
        if mode == "span":
            ortho = float(np.abs(G.T @ w).max(initial=0.0))
            ortho_name = "witness_orthogonality"
        else:
            ortho = max(0.0, float((G.T @ w).max(initial=0.0)))
            ortho_name = "witness_nonpositive_products"
        gap = float(x @ w) - float(w @ w)
        checks = [
            _check("witness_separates", max(0.0, -float(x @ w)), float(x @ w) > 0.0),
            _check(ortho_name, ortho, ortho <= col_scale),
            _check("witness_self_product", abs(gap), abs(gap) <= tol * (1.0 + float(x @ x))),
        ]
    result = {
        "mode": mode,
        "member": bool(member),
        "coefficients": None if coeffs is None else _listify(coeffs),
        "witness": None if member else _listify(witness),
    }
    return result, checks


_HANDLERS = {
    "project": _handle_project,
    "farkas": _handle_farkas,
    "quadrature": _handle_quadrature,
    "shape": _handle_shape,
    "membership": _handle_membership,
}


# ---------------------------------------------------------------------------
# rendering


def _render_text(report: dict) -> str:
    lines = [f"kind: {report['kind']}"]
    result = report["result"]
    if result is None:
        lines.append("result: (none)")
    else:
        lines.append("result:")
        for key, value in result.items():
            lines.append(f"  {key}: {value}")
    if "error" in report:
        lines.append(f"error: {report['error']}")
    lines.append("certificates:")
    for cert in report["certificates"]:
        status = "pass" if cert["pass"] else "FAIL"
        lines.append(f"  [{status}] {cert['name']}  residual={_format_float(cert['residual'])}")
    lines.append(f"runtime_ms: {_format_float(report['runtime_ms'])}")
    return "\n".join(lines) + "\n"


def _dump_csv(report: dict, csv_path: str) -> None:
    kind = report["kind"]
    result = report["result"] or {}
    rows = []
    if kind == "quadrature":
        rows.append("node,weight")
        for t, w in zip(result.get("nodes", []), result.get("weights", [])):
            rows.append(f"{_format_float(t)},{_format_float(w)}")
    elif kind == "shape":
        coeffs = result.get("monomial_coeffs", [])
        rows.append("t,solution")
        for t in np.linspace(-1.0, 1.0, 201):
            val = float(np.polynomial.polynomial.polyval(t, coeffs)) if coeffs else 0.0
            rows.append(f"{_format_float(float(t))},{_format_float(val)}")
    elif kind == "project":
        rows.append("component,point")
        for i, v in enumerate(result.get("point", [])):
            rows.append(f"{i},{_format_float(v)}")
    elif kind == "farkas":
        vec = result.get("y") or result.get("x") or []
        rows.append("component,value")
        for i, v in enumerate(vec):
            rows.append(f"{i},{_format_float(v)}")
    else:
        vec = result.get("coefficients") or result.get("witness") or []
        rows.append("component,value")
        for i, v in enumerate(vec):
            rows.append(f"{i},{_format_float(v)}")
    with open(csv_path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(rows) + "\n")


# ---------------------------------------------------------------------------
# entry points


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="conecert", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="kind", required=True)
    for kind in KINDS:
        p = sub.add_parser(kind, help=f"run a '{kind}' problem file")
        p.add_argument("--input", required=True, help="path to the JSON problem file")
        p.add_argument("--output", default=None, help="write the report here instead of stdout")
        p.add_argument("--tol", type=float, default=1e-9, help="certificate tolerance (default 1e-9)")
        p.add_argument("--format", choices=("json", "text"), default="json")
        p.add_argument("--seed", type=int, default=0, help="seed for any sampling the kind performs")
        p.add_argument("--dump-csv", default=None, help="also write the main result table as CSV")
    return parser


def run(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1

    if args.tol <= 0:
        print("error: --tol must be positive", file=sys.stderr)
        return 1

    started = time.perf_counter()
    try:
        data = _load_input(args.input)
        kind = _field(data, "kind", args.input)
        if kind != args.kind:
            raise InputError(f"{args.input}: file kind '{kind}' does not match subcommand '{args.kind}'")
        result, checks = _HANDLERS[args.kind](data, args.input, args.tol, args.seed)
        error = None
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (IterationLimit, MomentFitFailed) as exc:
        result = None
        checks = [CertificateCheck("computation_completed", 1.0, False)]
        error = f"{type(exc).__name__}: {exc}"

    report = {
        "kind": args.kind,
        "input_echo": {"file": data, "tol": float(args.tol), "seed": int(args.seed)},
        "result": result,
        "certificates": [{"name": c.name, "residual": c.residual, "pass": c.passed} for c in checks],
        "runtime_ms": (time.perf_counter() - started) * 1000.0,
    }
    if error is not None:
        report["error"] = error

    rendered = dumps_report(report) + "\n" if args.format == "json" else _render_text(report)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(rendered)
    else:
        sys.stdout.write(rendered)
    if args.dump_csv:
        _dump_csv(report, args.dump_csv)

    return 0 if all(c.passed for c in checks) else 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
