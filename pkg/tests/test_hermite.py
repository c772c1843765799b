import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate
from scipy.special import eval_hermite, gammaln

from colombeau.core import CapabilityError, EpsilonGrid
from colombeau.hermite import (
    N_MAX,
    HermiteExpansion,
    coefficient_decay_check,
    damping_factors,
    expand,
    hermite_function,
    hermite_functions,
    regularize_ultra,
    synthesize,
    verify_inclusion_bound,
)
from colombeau.quadrature import gauss_hermite
from colombeau.weights import associated_function, gevrey


def explicit_h(n, x):
    log_norm = -0.5 * (n * math.log(2) + gammaln(n + 1) + 0.5 * math.log(math.pi))
    return math.exp(log_norm) * eval_hermite(n, x) * np.exp(-x**2 / 2)


def gram_error(N, nodes):
    rule = gauss_hermite(nodes)
    H = hermite_functions(N, rule.nodes)
    w = rule.weights * np.exp(rule.nodes**2)
    G = (H * w) @ H.T
    return np.max(np.abs(G - np.eye(N + 1)))


def test_matches_explicit_formula():
    x = np.linspace(-6, 6, 49)
    for n in range(0, 31):
        assert np.allclose(hermite_functions(30, x)[n], explicit_h(n, x), atol=1e-12, rtol=1e-10)


def test_orthonormality():
    assert gram_error(40, 60) < 1e-10


def test_orthonormality_by_adaptive_quadrature():
    for m, n in [(0, 0), (3, 5), (7, 7), (12, 13), (20, 20)]:
        val = integrate.quad(lambda x: hermite_function(m, x) * hermite_function(n, x), -np.inf, np.inf, limit=200)[0]
        assert val == pytest.approx(float(m == n), abs=1e-9)


def test_bounded_for_large_index():
    x = np.linspace(-30, 30, 3001)
    H = hermite_functions(N_MAX, x)
    assert np.all(np.isfinite(H))
    assert np.max(np.abs(H)) <= math.pi**-0.25 + 1e-12


def test_index_limits():
    with pytest.raises(CapabilityError):
        hermite_functions(N_MAX + 1, 0.0)
    with pytest.raises(ValueError):
        hermite_function(-1, 0.0)


@settings(max_examples=30, deadline=None)
@given(coeffs=st.lists(st.floats(-5, 5), min_size=1, max_size=30), x=st.floats(-8, 8))
def test_synthesize_equals_direct_sum(coeffs, x):
    direct = float(np.dot(coeffs, hermite_functions(len(coeffs) - 1, x)))
    assert synthesize(coeffs, x) == pytest.approx(direct, abs=1e-12)


def test_derivative_coefficients():
    rng = np.random.default_rng(3)
    e = HermiteExpansion(rng.normal(size=12) / np.arange(1, 13) ** 2)
    x = np.linspace(-4, 4, 41)
    h = 1e-5
    fd = (e(x + h) - e(x - h)) / (2 * h)
    assert np.allclose(e.derivative()(x), fd, atol=1e-8)
    # h_n' = -x h_n + sqrt(2n) h_{n-1}
    n = 5
    d = HermiteExpansion.unit(n).derivative()
    assert np.allclose(d(x), -x * hermite_function(n, x) + math.sqrt(2 * n) * hermite_function(n - 1, x), atol=1e-13)


def test_round_trip():
    rng = np.random.default_rng(0)
    b = rng.normal(size=65) * np.exp(-0.05 * np.arange(65))
    e = HermiteExpansion(b)
    back = expand(lambda x: e(x), 64)
    assert np.max(np.abs(back.coefficients - b)) < 1e-8


def test_expand_gaussian():
    e = expand(lambda x: np.exp(-x**2 / 2), 20)
    want = np.zeros(21)
    want[0] = math.pi**0.25
    assert np.allclose(e.coefficients, want, atol=1e-13)
    assert abs(e.tail_energy) < 1e-12
    assert not e.boundary_warning


def test_expand_accepts_fields():
    e = expand(HermiteExpansion.unit(3).field(), 10)
    assert np.allclose(e.coefficients, np.eye(11)[3], atol=1e-13)


def test_field_derivatives_are_exact():
    f = HermiteExpansion([0.5, -1.0, 0.25]).field()
    x = np.linspace(-3, 3, 13)[:, None]
    d = HermiteExpansion([0.5, -1.0, 0.25]).derivative(2)
    assert np.allclose(f.base_derivative((2,), x), d(x[:, 0]), atol=1e-14)


def test_json_round_trip(tmp_path):
    e = HermiteExpansion([1.0, 0.0, -0.5])
    assert np.array_equal(HermiteExpansion.from_json(e.to_json()).coefficients, e.coefficients)
    path = tmp_path / "c.json"
    path.write_text(e.to_json())
    assert np.array_equal(HermiteExpansion.from_json(path).coefficients, e.coefficients)
    with pytest.raises(ValueError):
        HermiteExpansion([np.nan])


def test_damping_factors_properties():
    M = gevrey(2)
    f1 = damping_factors(64, M, 1.0, 0.1)
    f2 = damping_factors(64, M, 1.0, 0.01)
    assert f1[0] == 1.0 and f2[0] == 1.0
    assert np.all(np.diff(f1) <= 0) and np.all(f1 <= f2) and np.all(f1 > 0)
    arg = damping_factors(64, M, 1.0, 0.1, "argument")
    assert np.allclose(arg, np.exp(-0.1 * associated_function(M, np.arange(65.0)).value))
    with pytest.raises(ValueError):
        damping_factors(4, M, 1.0, 0.1, "other")


def test_unit_zero_regularization_is_eps_independent():
    grid = EpsilonGrid.geometric()
    net = regularize_ultra(HermiteExpansion.unit(0), gevrey(2), 1.0, grid)
    x = np.linspace(-5, 5, 101)[:, None]
    ref = net[grid[0]](x)
    for _, f in net.items():
        assert np.array_equal(f(x), ref)


def test_decay_check():
    M = gevrey(2)
    n = np.arange(65)
    Mn = associated_function(M, np.sqrt(n)).value
    assert coefficient_decay_check(HermiteExpansion(np.exp(-Mn)), M, 1.0).passed
    assert coefficient_decay_check(HermiteExpansion(np.exp(Mn)), M, 1.0, "growth").passed
    assert not coefficient_decay_check(HermiteExpansion(np.ones(65)), M, 1.0, "decay").passed
    with pytest.raises(ValueError):
        coefficient_decay_check(HermiteExpansion(np.ones(3)), M, 1.0, "sideways")


def test_inclusion_bound_for_constant_coefficients():
    grid = EpsilonGrid.geometric()
    r = verify_inclusion_bound(HermiteExpansion(np.ones(129)), gevrey(2), 1.0, grid)
    assert r.uniform_bound_holds and not r.violations
    assert np.all(np.isfinite(r.constants.log_abs))
    assert r.approaches_limit_monotonically
    assert np.all(r.constants.log_abs <= r.limit_log_C + 1e-12)


def test_inclusion_bound_reports_violations():
    grid = EpsilonGrid.geometric(6)
    r = verify_inclusion_bound(HermiteExpansion(np.full(40, 1e6)), gevrey(2), 1.0, grid)
    assert not r.uniform_bound_holds
    assert r.violations[0][0] == 0
