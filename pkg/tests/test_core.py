import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import eval_hermite

from colombeau.core import (
    CapabilityError,
    DomainError,
    EpsilonGrid,
    FunctionNet,
    GaussianPolynomial,
    GeneralizedConstantNet,
    GridMembershipError,
    MultiIndex,
    SamplingBox,
    ScalarField,
    ShapeError,
    constant,
    double_regularize,
    evaluate,
    gaussian,
    gaussian_damp,
    monomial,
    multi_indices,
    partial_derivative,
    radial_polynomial,
    tensor_product,
    zero_field,
)


def sine_field():
    return ScalarField(1, lambda X: np.sin(X[..., 0]))


def gaussian_derivative_oracle(k, a, x):
    # d^k/dx^k exp(-a x^2) = (-sqrt a)^k H_k(sqrt a x) exp(-a x^2)
    s = math.sqrt(a)
    return (-s) ** k * eval_hermite(k, s * x) * np.exp(-a * x**2)


def test_multi_indices_count_and_order():
    idx = multi_indices(2, 2)
    assert len(idx) == 6
    assert all(isinstance(a, MultiIndex) and a.order <= 2 for a in idx)
    assert MultiIndex((1, 2)).order == 3
    assert MultiIndex((1, 2)).dim == 2


@settings(max_examples=60, deadline=None)
@given(
    k=st.integers(0, 8),
    a=st.floats(0.1, 3.0),
    x=st.floats(-3.0, 3.0),
)
def test_gaussian_derivatives_match_hermite_polynomials(k, a, x):
    f = gaussian(1, a)
    got = partial_derivative(f, (k,), x)
    want = gaussian_derivative_oracle(k, a, x)
    assert got == pytest.approx(want, rel=1e-10, abs=1e-12)


def test_monomial_derivatives():
    f = monomial([3, 2])
    X = np.array([[1.5, -0.5], [2.0, 3.0]])
    assert np.allclose(partial_derivative(f, (1, 1), X), 3 * X[:, 0] ** 2 * 2 * X[:, 1])
    assert np.allclose(partial_derivative(f, (3, 2), X), 12.0)
    assert np.allclose(partial_derivative(f, (4, 0), X), 0.0)


def test_exponential_growth_cancels_exactly():
    grow = gaussian(1, -1.0)
    decay = gaussian(1, 1.0)
    prod = grow * decay
    x = np.array([0.0, 10.0, 30.0])
    assert np.array_equal(prod(x), np.ones(3))
    assert grow(10.0) == pytest.approx(math.exp(100.0))


def test_finite_difference_step_halving():
    f = sine_field()
    x = 0.7
    for k, exact in [(1, math.cos(x)), (2, -math.sin(x)), (3, -math.cos(x)), (4, math.sin(x))]:
        h = 0.05
        e1 = abs(partial_derivative(f, (k,), x, step=h) - exact)
        e2 = abs(partial_derivative(f, (k,), x, step=h / 2) - exact)
        assert e1 / e2 >= 3.0, (k, e1, e2)


def test_finite_difference_default_step_accuracy():
    f = sine_field()
    x = np.linspace(-2, 2, 9)
    assert np.allclose(partial_derivative(f, (1,), x), np.cos(x), atol=1e-7)
    assert np.allclose(partial_derivative(f, (2,), x), -np.sin(x), atol=1e-5)


def test_finite_difference_order_limit():
    with pytest.raises(CapabilityError):
        partial_derivative(sine_field(), (5,), 0.0)
    with pytest.raises(DomainError):
        partial_derivative(sine_field(), (1,), 0.0, step=-1.0)
    with pytest.raises(ShapeError):
        partial_derivative(sine_field(), (1, 0), 0.0)


def test_product_rule_matches_finite_differences():
    f = gaussian(1, 0.5) * radial_polynomial([1.0, 0.0, 2.0])
    g = sine_field() * gaussian(1, 0.3)
    x = np.linspace(-2, 2, 7)
    fd = ScalarField(1, lambda X: f.base(X) * g.base(X))
    assert np.allclose(
        partial_derivative(f * g, (2,), x), partial_derivative(fd, (2,), x, step=1e-3), atol=1e-5
    )


@settings(max_examples=40, deadline=None)
@given(a=st.floats(0.01, 2.0), b=st.floats(0.01, 2.0), x=st.floats(-3, 3))
def test_damping_composes_additively(a, b, x):
    for f in (radial_polynomial([1.0, 1.0]), sine_field()):
        lhs = gaussian_damp(gaussian_damp(f, a), b)
        rhs = gaussian_damp(f, a + b)
        assert lhs(x) == pytest.approx(rhs(x), rel=1e-12, abs=1e-300)


def test_damping_rejects_nonpositive_rate():
    with pytest.raises(DomainError):
        gaussian_damp(gaussian(), 0.0)


def test_damped_field_derivative_uses_leibniz():
    f = ScalarField(1, lambda X: np.sin(X[..., 0]), lambda a, X: [np.sin, np.cos][a[0] % 2](X[..., 0]) * (-1) ** (a[0] // 2))
    d = gaussian_damp(f, 0.5)
    x = np.linspace(-2, 2, 9)
    want = (np.cos(x) - x * np.sin(x)) * np.exp(-0.5 * x**2)
    assert np.allclose(partial_derivative(d, (1,), x), want, atol=1e-13)


def test_log_scale_keeps_tiny_values():
    f = gaussian().scaled(1.0)
    tiny = GaussianPolynomial(f.terms, 1, log_scale=-2000.0)
    assert tiny(0.0) == 0.0
    assert tiny.log_scale == -2000.0
    assert tiny.base(0.0) == pytest.approx(1.0)


def test_scaling_and_sums():
    f = gaussian(1, 1.0, 2.0)
    assert (-f)(0.0) == -2.0
    assert (f * 3.0)(0.0) == pytest.approx(6.0)
    assert (f + gaussian(1, 1.0))(0.0) == pytest.approx(3.0)
    assert zero_field()(1.0) == 0.0
    assert constant(2, 4.0)(np.zeros(2)) == 4.0


def test_tensor_product_values_and_derivatives():
    f, g = gaussian(1, 1.0), monomial([2])
    t = tensor_product(f, g)
    assert t.dim == 2 and t.gaussian_rate == (1.0, 0.0)
    X = np.array([[0.3, 1.2], [-1.0, 2.0]])
    assert np.allclose(t(X), np.exp(-X[:, 0] ** 2) * X[:, 1] ** 2)
    assert np.allclose(partial_derivative(t, (1, 1), X), -2 * X[:, 0] * np.exp(-X[:, 0] ** 2) * 2 * X[:, 1])


def test_epsilon_grid_validation():
    g = EpsilonGrid.geometric()
    assert len(g) == 12 and g[0] == 0.5 and g[-1] == 2.0**-12
    assert 2.0**-5 in g and 0.3 not in g
    with pytest.raises(GridMembershipError):
        g.index(0.3)
    for bad in ([0.5, 0.25, 0.125], [0.5, 0.5, 0.25, 0.1], [2.0, 0.5, 0.25, 0.1], [0.5, 0.25, 0.1, 0.0]):
        with pytest.raises(DomainError):
            EpsilonGrid(bad)


def test_function_net_lookup_and_product():
    grid = EpsilonGrid.geometric(6)
    net = FunctionNet.from_family(grid, lambda e: gaussian(1, 1.0, 1.0 / e))
    assert evaluate(net, 0.25, 0.0) == pytest.approx(4.0)
    sq = net * net
    assert sq[0.125](0.0) == pytest.approx(64.0)
    with pytest.raises(GridMembershipError):
        net[0.3]
    with pytest.raises(GridMembershipError):
        FunctionNet(grid, {0.5: gaussian()})
    with pytest.raises(ShapeError):
        FunctionNet(grid, [gaussian(1)] * 5 + [gaussian(2)])


def test_double_regularize_ties_damping_to_eps():
    grid = EpsilonGrid.geometric(5)
    net = double_regularize(FunctionNet.from_family(grid, lambda e: radial_polynomial([1.0, 1.0])))
    for eps, f in net.items():
        assert f(2.0) == pytest.approx(5.0 * math.exp(-4 * eps))


def test_generalized_constant_net():
    grid = EpsilonGrid.geometric(4)
    c = GeneralizedConstantNet(grid, [1.0, -2.0, 0.0, 4.0])
    assert c[0.25] == -2.0 and c[0.125] == 0.0
    with pytest.raises(ShapeError):
        GeneralizedConstantNet(grid, [1.0])


def test_sampling_box_shell():
    box = SamplingBox(10.0, 11)
    X = box.points(2)
    assert X.shape == (121, 2)
    assert box.on_shell(np.array([[9.5, 0.0]]))[0]
    assert not box.on_shell(np.array([[8.0, -8.0]]))[0]
    with pytest.raises(DomainError):
        SamplingBox(0.0)
