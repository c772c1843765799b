"""Scenario runner: ``colombeau {classify,compose,expmap,hermite} --scenario FILE --out DIR``.

A scenario is a JSON object naming catalog entries and settings.  Every run
writes ``report.json`` plus CSV series into ``--out``.  An optional
``"expect"`` block turns summary values into pass/fail checks.

Exit codes: 0 pass, 1 a check failed, 2 configuration error, 3 internal error.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
import traceback
from pathlib import Path

import numpy as np

from . import __version__
from .catalog import ConfigError, make_field, make_net, make_operator
from .core import DomainError, EpsilonGrid, SamplingBox
from .hermite import (
    HermiteExpansion,
    coefficient_decay_check,
    expand,
    regularize_ultra,
    verify_inclusion_bound,
)
from .operators import compose, exp_apply, kernel_growth_check, verify_composition
from .reporting import scenario_hash, write_csv, write_json
from .seminorms import MuSpec, NuSpec, classify_power_growth, classify_tempered, classify_ultra
from .weights import WeightSequence, gevrey

EXIT_PASS, EXIT_FAIL, EXIT_CONFIG, EXIT_INTERNAL = 0, 1, 2, 3


# -- scenario parsing ----------------------------------------------------------


def load_scenario(path) -> dict:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read scenario {path}: {exc.strerror}") from None
    return parse_json(text, str(path))


def parse_json(text: str, source: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{source}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def _grid(scenario: dict, eps_levels: int | None) -> EpsilonGrid:
    try:
        return _make_grid(scenario.get("grid", {}), eps_levels)
    except (DomainError, TypeError, ValueError) as exc:
        raise ConfigError(f"grid: {exc}") from None


def _make_grid(spec: dict, eps_levels: int | None) -> EpsilonGrid:
    if "values" in spec:
        values = list(spec["values"])
        if eps_levels is not None:
            values = values[:eps_levels]
        return EpsilonGrid(values)
    k_min = int(spec.get("k_min", 1))
    k_max = int(spec.get("k_max", 12)) if eps_levels is None else k_min + eps_levels - 1
    return EpsilonGrid.geometric(k_max, k_min, float(spec.get("base", 2.0)))


def _box(spec: dict | None, default: SamplingBox) -> SamplingBox:
    if not spec:
        return default
    try:
        return SamplingBox(
            spec.get("half_width", default.half_width),
            spec.get("points_per_axis", default.points_per_axis),
            spec.get("refine", default.refine),
        )
    except DomainError as exc:
        raise ConfigError(f"box: {exc}") from None


def _weights(spec) -> WeightSequence:
    if isinstance(spec, dict):
        if "gevrey" in spec:
            return gevrey(float(spec["gevrey"]), int(spec.get("p_max", 64)))
        if "values" in spec:
            return WeightSequence.from_values(spec["values"])
    raise ConfigError("weights must be {'gevrey': s[, 'p_max': P]} or {'values': [...]}")


def _points(spec, n: int) -> np.ndarray:
    if isinstance(spec, list):
        return np.asarray(spec, dtype=float).reshape(-1, n)
    spec = spec or {}
    rng = np.random.default_rng(int(spec.get("seed", 0)))
    R = float(spec.get("half_width", 2.0))
    return rng.uniform(-R, R, size=(int(spec.get("count", 25)), n))


def _require(scenario: dict, key: str):
    if key not in scenario:
        raise ConfigError(f"scenario is missing required key {key!r}")
    return scenario[key]


# -- expectations --------------------------------------------------------------


def check_expectations(expect: dict, summary: dict) -> dict:
    """Compare each expected value with the summary entry of the same name.

    Numbers accept ``[lo, hi]`` ranges or ``{"value": v, "tol": t}``; other
    values are compared for equality.
    """
    results = {}
    for key, want in expect.items():
        if key not in summary:
            raise ConfigError(f"expect: unknown key {key!r}; available: {sorted(summary)}")
        got = summary[key]
        if isinstance(want, list) and len(want) == 2 and not isinstance(got, (list, str)):
            ok = got is not None and want[0] <= got <= want[1]
        elif isinstance(want, dict):
            ok = got is not None and abs(got - want["value"]) <= want.get("tol", 0.0)
        elif isinstance(want, float) or isinstance(got, float):
            ok = got is not None and math.isclose(got, want, rel_tol=1e-12, abs_tol=0.0)
        else:
            ok = got == want
        results[key] = bool(ok)
    return results


# -- commands ------------------------------------------------------------------


def cmd_classify(scenario: dict, out: Path, args) -> tuple[dict, bool]:
    grid = _grid(scenario, args.eps_levels)
    net = make_net(_require(scenario, "net"), grid)
    spec = dict(scenario.get("classify", {}))
    mode = spec.get("mode", "tempered")
    box = _box(spec.get("box"), SamplingBox())
    p_max = int(spec.get("p_max", 8))
    l = int(spec.get("l", 0))
    if mode == "tempered":
        report = classify_tempered(net, l, box, p_max, int(spec.get("q_max", 12)))
    elif mode == "power":
        report = classify_power_growth(net, MuSpec(int(spec.get("q", 0)), l), box, p_max)
    elif mode == "ultra":
        nu = NuSpec(float(spec.get("h", 1.0)), _weights(spec.get("M", {"gevrey": 2})), cap=int(spec.get("cap", 4)))
        report = classify_ultra(net, nu, _weights(spec.get("N", {"gevrey": 2})), spec.get("kind", "roumieu"), box)
    else:
        raise ConfigError(f"classify.mode must be tempered, power or ultra, not {mode!r}")
    write_csv(
        out / "seminorms.csv",
        ["eps", "seminorm", "log_seminorm"],
        [(e, v, lv) for (e, v), lv in zip(report.seminorm_values, report.log_values)],
    )
    summary = {
        "verdict": report.verdict,
        "order": report.order,
        "slope": report.fitted_order,
        "r2": report.fit_r2,
        "boundary_flag": report.boundary_flag,
        "q": report.q,
        "max_seminorm": max((v for _, v in report.seminorm_values), default=0.0),
    }
    return {"summary": summary, "growth": report.to_dict()}, True


def cmd_compose(scenario: dict, out: Path, args) -> tuple[dict, bool]:
    grid = _grid(scenario, args.eps_levels)
    kernels = _require(scenario, "kernels")
    if not isinstance(kernels, list) or len(kernels) != 2:
        raise ConfigError("compose needs 'kernels': [outer, inner]")
    A2 = make_operator(kernels[0], grid, args.nodes)
    A1 = make_operator(kernels[1], grid, args.nodes)
    phi = make_net(scenario.get("phi", {"family": "gaussian"}), grid)
    pts = _points(scenario.get("points"), A1.n)
    tol = args.tol if args.tol is not None else float(scenario.get("tol", 1e-6))
    reports = [verify_composition(A2, A1, phi, eps, pts, tol) for eps in grid]
    gspec = scenario.get("growth", {"q1": 2, "q2": 2})
    growth = kernel_growth_check(
        A2 if gspec.get("kernel", "composed") == "outer" else compose(A2, A1),
        int(gspec.get("q1", 2)),
        int(gspec.get("q2", 2)),
        _box(gspec.get("box"), SamplingBox(4.0, 41)),
    )
    write_csv(
        out / "composition.csv",
        ["eps", "max_discrepancy", "max_abs_discrepancy", "pass"],
        [(r.eps, r.max_discrepancy, r.max_abs_discrepancy, int(r.passed)) for r in reports],
    )
    write_csv(
        out / "growth.csv",
        ["eps", "seminorm", "log_seminorm"],
        [(e, v, lv) for (e, v), lv in zip(growth.growth.seminorm_values, growth.growth.log_values)],
    )
    passed = all(r.passed for r in reports) and growth.within_corrected
    summary = {
        "pass": passed,
        "max_discrepancy": max(r.max_discrepancy for r in reports),
        "slope": growth.slope,
        "nominal_margin": growth.nominal_margin,
        "corrected_margin": growth.corrected_margin,
        "note": growth.note,
        "verdict": growth.growth.verdict,
    }
    body = {
        "summary": summary,
        "composition": [r.to_dict() for r in reports],
        "kernel_growth": growth.to_dict(),
    }
    return body, passed


def cmd_expmap(scenario: dict, out: Path, args) -> tuple[dict, bool]:
    grid = _grid(scenario, args.eps_levels)
    A = make_operator(_require(scenario, "kernel"), grid, args.nodes)
    phi = make_net(scenario.get("phi", {"family": "gaussian"}), grid)
    pts = _points(scenario.get("points", {"count": 5}), A.n)
    K_max = int(scenario.get("K_max", 16))
    tol = args.tol if args.tol is not None else float(scenario.get("tol", 1e-12))
    rows, per_eps = [], []
    for eps in grid:
        res = exp_apply(A, phi, eps, pts, K_max, tol)
        mags = res.term_magnitudes
        rows.append((eps, 0, float(np.max(np.abs(res.identity))), ""))
        for k, mag in enumerate(mags, start=1):
            if mag == 0.0 and k == len(mags):
                break
            ratio = mags[k] / mag if k < len(mags) and mag else math.nan
            rows.append((eps, k, mag, ratio))
        per_eps.append({"eps": eps, **res.to_dict()})
    write_csv(out / "terms.csv", ["eps", "k", "term_max_abs", "ratio"], rows)
    passed = all(r["converged"] for r in per_eps)
    summary = {
        "pass": passed,
        "converged": passed,
        "max_last_term": max(r["last_term"] for r in per_eps),
        "max_k_used": max(r["k_used"] for r in per_eps),
    }
    if not passed:
        summary["failure"] = "series truncated at K_max before terms fell below tol"
    return {"summary": summary, "series": per_eps}, passed


def _expansion(source: dict, base: Path) -> HermiteExpansion:
    if "file" in source:
        path = base / source["file"]
        try:
            text = path.read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read coefficient file {path}: {exc.strerror}") from None
        data = parse_json(text, str(path))
        if not isinstance(data, list):
            raise ConfigError(f"{path}: expected a JSON array of coefficients")
        return HermiteExpansion(np.asarray(data, dtype=float))
    if "coefficients" in source:
        return HermiteExpansion(np.asarray(source["coefficients"], dtype=float))
    if "constant" in source:
        return HermiteExpansion(np.full(int(source.get("N", 128)) + 1, float(source["constant"])))
    if "expand" in source:
        f = make_field(source["expand"], 1.0)
        return expand(f, int(source.get("N", 64)))
    raise ConfigError("hermite source needs one of 'file', 'coefficients', 'constant', 'expand'")


def cmd_hermite(scenario: dict, out: Path, args) -> tuple[dict, bool]:
    grid = _grid(scenario, args.eps_levels)
    e = _expansion(_require(scenario, "source"), Path(args.scenario).parent)
    M = _weights(scenario.get("weights", {"gevrey": 2}))
    h = float(scenario.get("h", 1.0))
    square = scenario.get("square", "value")
    decay = coefficient_decay_check(e, M, h, scenario.get("direction", "growth"))
    incl = verify_inclusion_bound(e, M, h, grid, square)
    net = regularize_ultra(e, M, h, grid, square)
    x = np.linspace(-6.0, 6.0, 241)
    base = e(x)
    deviation = [float(np.max(np.abs(f(x[:, None]) - base))) for _, f in net.items()]
    write_csv(
        out / "coefficients.csv",
        ["n", "coefficient", "bound_margin"],
        [(n, float(b), float(m)) for n, (b, m) in enumerate(zip(e.coefficients, decay.margins))],
    )
    gap = incl.gap_to_limit
    write_csv(
        out / "bounds.csv",
        ["eps", "log_C", "gap_to_limit", "regularization_deviation"],
        [(eps, float(c), float(g), d) for eps, c, g, d in zip(grid, incl.constants.log_abs, gap, deviation)],
    )
    passed = incl.uniform_bound_holds
    summary = {
        "pass": passed,
        "N": e.N,
        "uniform_bound_holds": incl.uniform_bound_holds,
        "violations": len(incl.violations),
        "monotone_to_limit": incl.approaches_limit_monotonically,
        "limit_log_C": incl.limit_log_C,
        "decay_pass": decay.passed,
        "max_regularization_deviation": max(deviation),
        "argmax_coefficient": int(np.argmax(np.abs(e.coefficients))),
        "max_abs_coefficient": float(np.max(np.abs(e.coefficients))),
    }
    body = {
        "summary": summary,
        "expansion": {
            "N": e.N,
            "tail_energy": e.tail_energy,
            "boundary_warning": e.boundary_warning,
        },
        "decay": decay.to_dict(),
        "inclusion": incl.to_dict(),
    }
    return body, passed


COMMANDS = {"classify": cmd_classify, "compose": cmd_compose, "expmap": cmd_expmap, "hermite": cmd_hermite}


# -- entry point ---------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="colombeau", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--scenario", required=True, help="scenario JSON file")
        p.add_argument("--out", required=True, help="output directory")
        p.add_argument("--nodes", type=int, default=64, help="quadrature nodes per axis (default 64)")
        p.add_argument("--eps-levels", type=int, default=None, help="number of eps levels, finest last")
        p.add_argument("--tol", type=float, default=None, help="tolerance override")
    return parser


def run(args) -> int:
    try:
        scenario = load_scenario(args.scenario)
        if not isinstance(scenario, dict):
            raise ConfigError("scenario must be a JSON object")
        if args.nodes < 8:
            raise ConfigError("--nodes must be at least 8")
        if args.eps_levels is not None and args.eps_levels < 4:
            raise ConfigError("--eps-levels must be at least 4")
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        expect = scenario.get("expect", {})
        if not isinstance(expect, dict):
            raise ConfigError("expect must be an object")
        body, passed = COMMANDS[args.command](scenario, out, args)
        checks = check_expectations(expect, body["summary"])
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception:
        traceback.print_exc()
        return EXIT_INTERNAL
    ok = passed and all(checks.values())
    report = {
        "tool": "colombeau",
        "version": __version__,
        "command": args.command,
        "scenario": scenario.get("name", Path(args.scenario).stem),
        "scenario_sha256": scenario_hash(scenario),
        "settings": {"nodes": args.nodes, "eps_levels": args.eps_levels, "tol": args.tol},
        "pass": ok,
        "expect": checks,
        **body,
    }
    write_json(out / "report.json", report)
    for key, good in checks.items():
        if not good:
            print(f"expectation failed: {key} = {body['summary'][key]!r}, wanted {expect[key]!r}", file=sys.stderr)
    print(f"{args.command} {report['scenario']}: {'pass' if ok else 'FAIL'}")
    return EXIT_PASS if ok else EXIT_FAIL


def main(argv=None) -> int:
    return run(build_parser().parse_args(argv))


if __name__ == "__main__":
    sys.exit(main())
