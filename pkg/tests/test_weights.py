import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from colombeau.core import DomainError
from colombeau.weights import (
    WeightSequence,
    associated_function,
    check_conditions,
    gevrey,
    growth_function,
)


def brute_associated(log_M, rho):
    """sup_p (p log rho - log M_p) in extended precision."""
    if rho == 0:
        return mpmath.mpf(0)
    return max(p * mpmath.log(rho) - mpmath.mpf(lm) for p, lm in enumerate(log_M))


def test_gevrey_values():
    M = gevrey(1.5, 20)
    assert M.p_max == 20
    assert M[5] == pytest.approx(120.0**1.5)
    assert M[0] == 1.0


def test_validation():
    with pytest.raises(DomainError):
        WeightSequence(np.zeros(5))
    with pytest.raises(DomainError):
        WeightSequence(np.ones(20))
    with pytest.raises(DomainError):
        gevrey(0.5)
    with pytest.raises(DomainError):
        WeightSequence.from_values([1.0] + [-1.0] * 20)


def test_round_trip(tmp_path):
    M = gevrey(2, 32)
    path = tmp_path / "w.json"
    import json

    path.write_text(json.dumps(M.to_dict()))
    back = WeightSequence.from_json(path)
    assert np.array_equal(back.log_values, M.log_values)
    assert back.name == M.name


def test_gevrey_one_conditions():
    r = check_conditions(gevrey(1))
    assert r.m1 and r.m1_printed is False
    assert r.m2 and (r.m2_c, r.m2_H) == (1.0, 2.0)
    assert not r.m3_converged
    assert r.m3_decay_exponent == pytest.approx(1.0, abs=1e-6)


def test_gevrey_two_summability():
    r = check_conditions(gevrey(2, 10_000))
    assert r.m3_converged
    assert r.m3_limit_estimate == pytest.approx(math.pi**2 / 6, abs=1e-6)
    assert r.m2_H == 4.0


def test_non_log_convex_sequence_fails_m1():
    lv = gevrey(1, 20).log_values.copy()
    lv[10] += 2.0
    assert not check_conditions(WeightSequence(lv)).m1


def test_associated_function_value_at_e():
    v = associated_function(gevrey(1), math.e)
    assert v.value == pytest.approx(2.0 - math.log(2.0), abs=1e-12)
    assert v.argmax == 2 and not v.truncated


@settings(max_examples=50, deadline=None)
@given(s=st.floats(1.0, 3.0), rho=st.floats(0.0, 40.0))
def test_associated_function_matches_brute_force(s, rho):
    M = gevrey(s, 64)
    got = associated_function(M, rho)
    want = float(brute_associated(M.log_values, rho))
    assert got.value == pytest.approx(want, abs=1e-9)


@settings(max_examples=30, deadline=None)
@given(s=st.floats(1.0, 3.0), rhos=st.lists(st.floats(0.0, 1e3), min_size=2, max_size=20))
def test_associated_function_nondecreasing(s, rhos):
    rhos = np.sort(np.asarray(rhos))
    vals = associated_function(gevrey(s, 64), rhos).value
    assert np.all(np.diff(vals) >= -1e-12)


def test_associated_function_extremes():
    M = gevrey(1, 64)
    assert associated_function(M, 0.0).value == 0.0
    big = associated_function(M, math.exp(50))
    assert np.isfinite(big.value) and big.truncated
    with pytest.raises(DomainError):
        associated_function(M, -1.0)


def test_growth_function_of_gevrey_two_is_gevrey_one():
    rho = np.linspace(0.0, 20.0, 11)
    a = growth_function(gevrey(2, 64), rho).value
    b = associated_function(gevrey(1, 64), rho).value
    assert np.allclose(a, b, atol=1e-12)
