"""Acceptance checks, one test per criterion, each printing a PASS/FAIL line."""
import csv
import math
import time
from pathlib import Path

import mpmath
import numpy as np

from colombeau import cli
from colombeau.core import EpsilonGrid, FunctionNet, GaussianPolynomial, gaussian, monomial, tensor_product
from colombeau.hermite import (
    HermiteExpansion,
    expand,
    hermite_functions,
    regularize_ultra,
    verify_inclusion_bound,
)
from colombeau.operators import (
    GeneralizedOperator,
    KernelNet,
    compose,
    exp_apply,
    kernel_growth_check,
    verify_composition,
)
from colombeau.quadrature import gauss_hermite, integrate_damped
from colombeau.seminorms import classify_tempered
from colombeau.weights import associated_function, check_conditions, gevrey

SCENARIOS = Path(__file__).resolve().parents[1] / "scenarios"
GRID8 = EpsilonGrid.geometric(8)
GRID12 = EpsilonGrid.geometric(12)


def operator(kernel, grid=GRID8, nodes=64):
    return GeneralizedOperator(KernelNet(grid, [kernel] * len(grid), 1), nodes)


def hermite_kernel(i, j, amplitude=1.0):
    return tensor_product(HermiteExpansion.unit(i).field(), HermiteExpansion.unit(j).field()).scaled(amplitude)


def test_composition_identity(criterion):
    pairs = {
        "gaussian": (gaussian(2), gaussian(2)),
        "rank_one": (hermite_kernel(0, 1), hermite_kernel(1, 0)),
        "monomial": (monomial([2, 2]), monomial([2, 2])),
    }
    pts = np.random.default_rng(0).uniform(-2.0, 2.0, 25)
    phi = FunctionNet(GRID8, [gaussian()] * len(GRID8))
    start = time.perf_counter()
    worst = {}
    for name, (k2, k1) in pairs.items():
        A2, A1 = operator(k2), operator(k1)
        worst[name] = max(verify_composition(A2, A1, phi, eps, pts).max_discrepancy for eps in GRID8)
    elapsed = time.perf_counter() - start
    ok = all(v <= 1e-6 for v in worst.values()) and elapsed < 60
    detail = ", ".join(f"{k} {v:.2e}" for k, v in worst.items())
    criterion(1, ok, f"composition identity, max discrepancy {detail} (tol 1e-6), {elapsed:.2f} s (< 60 s)")


def test_twin_gaussian_closed_form(criterion):
    rng = np.random.default_rng(2)
    eps = np.sort(rng.uniform(1e-4, 1.0, 100))[::-1]
    grid = EpsilonGrid(eps)
    C = compose(operator(gaussian(2), grid), operator(gaussian(2), grid))
    xy = rng.uniform(-3.0, 3.0, size=(100, 2))
    worst = 0.0
    for e, p in zip(grid, xy):
        got = float(C.kernel[e](p[None, :])[0])
        want = math.sqrt(math.pi / (2 + e)) * math.exp(-(p[0] ** 2 + p[1] ** 2))
        worst = max(worst, abs(got - want) / want)
    criterion(2, worst <= 1e-8, f"twin Gaussian composition vs closed form, max rel error {worst:.2e} (tol 1e-8)")


def test_monomial_growth_slope(criterion):
    C = compose(operator(monomial([2, 2])), operator(monomial([2, 2])))
    # moment oracle: x^2 y^2 int z^4 exp(-eps z^2) dz = x^2 y^2 (3 sqrt(pi) / 4) eps^(-5/2)
    oracle_err = max(
        abs(float(C.kernel[e]([[1.0, 1.0]])[0]) / (0.75 * math.sqrt(math.pi) * e**-2.5) - 1.0) for e in GRID8
    )
    r = kernel_growth_check(C, 2, 2)
    ok = (
        abs(r.slope - 2.5) <= 0.05
        and oracle_err <= 1e-10
        and r.note == "exceeds paper exponent, within corrected exponent"
    )
    criterion(
        3,
        ok,
        f"monomial pair slope {r.slope:.4f} (2.5 +/- 0.05), moment oracle rel err {oracle_err:.1e}, "
        f"margins vs 2.0: {r.nominal_margin:+.4f}, vs 2.5: {r.corrected_margin:+.4f}; {r.note}",
    )


def test_growth_classification(criterion):
    start = time.perf_counter()
    moll = FunctionNet.from_family(GRID12, lambda e: gaussian(1, 1 / e**2, 1 / (e * math.sqrt(math.pi))))
    tiny = FunctionNet.from_family(GRID12, lambda e: GaussianPolynomial(gaussian().terms, 1, log_scale=-1 / e))
    huge = FunctionNet.from_family(GRID12, lambda e: gaussian(1, -1.0))
    rm, rt, rh = classify_tempered(moll), classify_tempered(tiny, p_max=8), classify_tempered(huge)
    elapsed = time.perf_counter() - start
    ok = (
        rm.verdict == "moderate(1)"
        and abs(rm.fitted_order - 1.0) <= 0.05
        and rt.verdict == "negligible"
        and rh.verdict == "neither"
        and rh.boundary_flag
        and elapsed < 30
    )
    criterion(
        4,
        ok,
        f"mollifier {rm.verdict} slope {rm.fitted_order:.4f}; exp(-1/eps) {rt.verdict}; "
        f"exp(x^2) {rh.verdict} boundary_flag={rh.boundary_flag}; {elapsed:.2f} s (< 30 s)",
    )


def test_hermite_battery(criterion):
    rule = gauss_hermite(60)
    H = hermite_functions(40, rule.nodes)
    G = (H * (rule.weights * np.exp(rule.nodes**2))) @ H.T
    ortho = float(np.max(np.abs(G - np.eye(41))))
    rng = np.random.default_rng(5)
    b = rng.normal(size=65) * np.exp(-0.05 * np.arange(65))
    e = HermiteExpansion(b)
    trip = float(np.max(np.abs(expand(lambda x: e(x), 64).coefficients - b)))
    net = regularize_ultra(HermiteExpansion.unit(0), gevrey(2), 1.0, GRID12)
    x = np.linspace(-6, 6, 241)[:, None]
    ref = net[GRID12[0]](x)
    diff = max(float(np.max(np.abs(f(x) - ref))) for _, f in net.items())
    ok = ortho < 1e-10 and trip < 1e-8 and diff == 0.0
    criterion(
        5,
        ok,
        f"orthonormality {ortho:.1e} (< 1e-10), round trip {trip:.1e} (< 1e-8), unit-0 eps-dependence {diff:g} (== 0)",
    )


def test_inclusion_bound(criterion):
    r = verify_inclusion_bound(HermiteExpansion(np.ones(129)), gevrey(2), 1.0, GRID12)
    finite = bool(np.all(np.isfinite(r.constants.log_abs)))
    ok = r.uniform_bound_holds and not r.violations and finite and r.approaches_limit_monotonically
    gap = r.gap_to_limit
    criterion(
        6,
        ok,
        f"b_n = 1, gevrey(2), n <= 128: {len(r.violations)} violations, C_eps finite={finite}, "
        f"log C_eps rises monotonically to its limit {r.limit_log_C:.6f} from below, "
        f"gap {gap[0]:.3e} -> {gap[-1]:.3e}",
    )


def test_exponential_series(criterion, tmp_path):
    kernel = hermite_kernel(0, 0, 1.5)
    A = operator(kernel)
    phi = HermiteExpansion.unit(0).field()
    x = np.linspace(-2, 2, 5)
    h0 = hermite_functions(0, x)[0]
    worst_val = 0.0
    for eps in GRID8:
        c = 1.5 / math.sqrt(1 + eps)
        res = exp_apply(A, phi, eps, x, K_max=40, tol=1e-16)
        worst_val = max(worst_val, float(np.max(np.abs(res.value - math.exp(c) * h0))))
    assert cli.main(["expmap", "--scenario", str(SCENARIOS / "expmap_rank_one.json"), "--out", str(tmp_path)]) == 0
    worst_ratio = 0.0
    with open(tmp_path / "terms.csv") as fh:
        for row in csv.DictReader(fh):
            k = int(row["k"])
            if 1 <= k <= 8:
                c = 1.5 / math.sqrt(1 + float(row["eps"]))
                worst_ratio = max(worst_ratio, abs(float(row["ratio"]) / (c / (k + 1)) - 1))
    ok = worst_val <= 1e-8 and worst_ratio <= 0.05
    criterion(
        7,
        ok,
        f"rank-one exp series vs exp(c) h_0: {worst_val:.1e} (tol 1e-8); ratio column vs c/(k+1), k <= 8: "
        f"max rel dev {worst_ratio:.1e} (tol 5%)",
    )


def test_weight_conditions(criterion):
    g1 = check_conditions(gevrey(1))
    g2 = check_conditions(gevrey(2, 10_000))
    brute = float(max(p - mpmath.log(mpmath.factorial(p)) for p in range(65)))
    m_e = associated_function(gevrey(1), math.e).value
    ok = (
        g1.m1
        and g1.m2
        and (g1.m2_c, g1.m2_H) == (1.0, 2.0)
        and not g1.m3_converged
        and g2.m3_converged
        and abs(g2.m3_limit_estimate - math.pi**2 / 6) <= 1e-3
        and abs(g2.m3_partial_sum - math.pi**2 / 6) <= 1e-3
        and abs(m_e - brute) <= 1e-9
        and abs(m_e - 1.30685) < 1e-5
    )
    criterion(
        8,
        ok,
        f"gevrey(1): m1={g1.m1} m2={g1.m2} (c={g1.m2_c:g}, H={g1.m2_H:g}) m3 divergent={not g1.m3_converged}; "
        f"gevrey(2) m3 partial sum {g2.m3_partial_sum:.8f}, with tail {g2.m3_limit_estimate:.10f} "
        f"vs pi^2/6 (tol 1e-3); "
        f"M(e) = {m_e:.12f} vs brute force {brute:.12f} (tol 1e-9)",
    )


def test_quadrature(criterion):
    worst_poly = 0.0
    for m in (2, 8, 32):
        rule = gauss_hermite(m)
        for k in range(2 * m):
            got = math.fsum(w * math.pow(z, k) for z, w in zip(rule.nodes, rule.weights))
            want = 0.0 if k % 2 else math.gamma((k + 1) / 2)
            worst_poly = max(worst_poly, abs(got - want) / max(1.0, want))
    worst_const = 0.0
    for g in np.geomspace(1e-4, 1.0, 101):
        v = integrate_damped(lambda y: np.ones(len(y)), g).value
        worst_const = max(worst_const, abs(v - math.sqrt(math.pi / g)))
    ok = worst_poly <= 1e-13 and worst_const <= 1e-12
    criterion(
        9,
        ok,
        f"Gauss-Hermite exactness m in (2, 8, 32): {worst_poly:.1e} (tol 1e-13); "
        f"int exp(-g y^2) dy, g in [1e-4, 1]: abs error {worst_const:.1e} (tol 1e-12)",
    )


def test_determinism(criterion, tmp_path):
    mismatched = []
    paths = sorted(SCENARIOS.glob("*.json"))
    for path in paths:
        cmd = next((c for c in ("compose", "expmap", "hermite") if path.stem.startswith(c)), "classify")
        outs = []
        for run in ("a", "b"):
            out = tmp_path / path.stem / run
            cli.main([cmd, "--scenario", str(path), "--out", str(out)])
            outs.append({p.name: p.read_bytes() for p in sorted(out.iterdir())})
        if outs[0] != outs[1]:
            mismatched.append(path.stem)
    criterion(
        10,
        not mismatched,
        f"{len(paths)} bundled scenarios rerun: byte-identical reports"
        + (f"; differing: {mismatched}" if mismatched else ""),
    )
