"""Orthonormal Hermite functions, expansions, and the Hermite regularization of ultradistributions.

``h_n(x) = (2^n n! sqrt(pi))^{-1/2} H_n(x) exp(-x^2/2)`` is evaluated by the
three-term recurrence on the normalized functions themselves, which stays
bounded for large ``n`` where the polynomial ``H_n`` would overflow.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .core import CapabilityError, EpsilonGrid, FunctionNet, GeneralizedConstantNet, SamplingBox, ScalarField
from .quadrature import integrate_box
from .seminorms import GrowthReport, classify_constant
from .weights import WeightSequence, associated_function

__all__ = [
    "N_MAX",
    "HermiteExpansion",
    "DecayReport",
    "InclusionReport",
    "hermite_function",
    "hermite_functions",
    "expand",
    "synthesize",
    "coefficient_decay_check",
    "damping_factors",
    "regularize_ultra",
    "verify_inclusion_bound",
]

N_MAX = 256
_PI_QUARTER = math.pi ** -0.25


def hermite_functions(N: int, x) -> np.ndarray:
    """Array of ``h_0(x) .. h_N(x)`` with shape ``(N + 1,) + x.shape``."""
    if N > N_MAX:
        raise CapabilityError(f"Hermite index {N} exceeds N_MAX = {N_MAX}")
    x = np.asarray(x, dtype=float)
    out = np.empty((N + 1,) + x.shape)
    out[0] = _PI_QUARTER * np.exp(-0.5 * x**2)
    if N >= 1:
        out[1] = math.sqrt(2.0) * x * out[0]
    for n in range(1, N):
        out[n + 1] = x * math.sqrt(2.0 / (n + 1)) * out[n] - math.sqrt(n / (n + 1)) * out[n - 1]
    return out


def hermite_function(n: int, x):
    if n < 0:
        raise ValueError("n must be nonnegative")
    val = hermite_functions(n, x)[n]
    return float(val) if val.ndim == 0 else val


def synthesize(coefficients, x):
    """``sum_n b_n h_n(x)`` in a single pass of the recurrence."""
    b = np.asarray(getattr(coefficients, "coefficients", coefficients), dtype=float)
    if len(b) - 1 > N_MAX:
        raise CapabilityError(f"expansion length exceeds N_MAX = {N_MAX}")
    x = np.asarray(x, dtype=float)
    prev = _PI_QUARTER * np.exp(-0.5 * x**2)
    total = b[0] * prev if len(b) else np.zeros_like(x)
    if len(b) > 1:
        cur = math.sqrt(2.0) * x * prev
        total = total + b[1] * cur
        for n in range(1, len(b) - 1):
            prev, cur = cur, x * math.sqrt(2.0 / (n + 1)) * cur - math.sqrt(n / (n + 1)) * prev
            total = total + b[n + 1] * cur
    return float(total) if total.ndim == 0 else total


def _derivative_coefficients(b: np.ndarray) -> np.ndarray:
    # h_n' = sqrt(n/2) h_{n-1} - sqrt((n+1)/2) h_{n+1}
    N = len(b)
    out = np.zeros(N + 1)
    n = np.arange(N)
    out[: N - 1] += np.sqrt(n[1:] / 2.0) * b[1:]
    out[1:] -= np.sqrt((n + 1) / 2.0) * b
    return out


@dataclass(frozen=True)
class HermiteExpansion:
    coefficients: np.ndarray
    tail_energy: float | None = None
    boundary_warning: bool = False

    def __post_init__(self):
        c = np.asarray(self.coefficients, dtype=float)
        if c.ndim != 1 or len(c) == 0:
            raise ValueError("coefficients must be a nonempty 1-d sequence")
        if not np.all(np.isfinite(c)):
            raise ValueError("coefficients must be finite")
        c = c.copy()
        c.setflags(write=False)
        object.__setattr__(self, "coefficients", c)

    @property
    def N(self) -> int:
        return len(self.coefficients) - 1

    @classmethod
    def unit(cls, n: int, N: int | None = None) -> "HermiteExpansion":
        c = np.zeros((n if N is None else N) + 1)
        c[n] = 1.0
        return cls(c)

    def __call__(self, x):
        return synthesize(self.coefficients, x)

    def derivative(self, order: int = 1) -> "HermiteExpansion":
        c = self.coefficients
        for _ in range(order):
            c = _derivative_coefficients(c)
        return HermiteExpansion(c)

    def field(self) -> ScalarField:
        """The expansion as a 1-d field with exact derivatives."""
        b = self.coefficients

        def derivative(alpha, X):
            c = b
            for _ in range(int(alpha[0])):
                c = _derivative_coefficients(c)
            return synthesize(c, X[..., 0])

        return ScalarField(
            1,
            lambda X: synthesize(b, X[..., 0]),
            derivative,
            gaussian_rate=(0.5,),
            max_order=max(0, N_MAX - self.N),
            name="hermite_series",
        )

    def to_json(self) -> str:
        return json.dumps([float(v) for v in self.coefficients])

    @classmethod
    def from_json(cls, text_or_path) -> "HermiteExpansion":
        text = str(text_or_path)
        if not text.lstrip().startswith("["):
            text = Path(text).read_text()
        return cls(np.asarray(json.loads(text), dtype=float))


def expand(f, N: int = 128, nodes: int = 4097, half_width: float | None = None) -> HermiteExpansion:
    """Coefficients ``b_n = int f h_n dx`` for ``n <= N`` by Simpson's rule.

    The default range ``sqrt(2N + 1) + 8`` covers the oscillatory region of
    every ``h_n`` with ``n <= N`` plus a Gaussian tail.  ``tail_energy`` is
    ``||f||^2 - sum b_n^2``, the energy beyond the truncation.
    """
    if N > N_MAX:
        raise CapabilityError(f"N = {N} exceeds N_MAX = {N_MAX}")
    R = half_width if half_width is not None else math.sqrt(2 * N + 1) + 8.0
    box = SamplingBox(R, 3)

    def fx(x):
        return np.asarray(f(x[:, None]) if isinstance(f, ScalarField) else f(x), dtype=float)

    coef = integrate_box(lambda x: hermite_functions(N, x) * fx(x), box, nodes)
    energy = integrate_box(lambda x: fx(x) ** 2, box, nodes)
    b = np.asarray(coef.value)
    tail = float(energy.value - np.sum(b**2))
    return HermiteExpansion(b, tail, coef.boundary_warning or energy.boundary_warning)


@dataclass(frozen=True)
class DecayReport:
    passed: bool
    direction: str
    log_C: float
    margin_min: float
    margin_max: float
    margins: np.ndarray

    @property
    def C(self) -> float:
        return math.exp(self.log_C) if self.log_C < 709 else math.inf

    def to_dict(self) -> dict:
        return {
            "pass": self.passed,
            "direction": self.direction,
            "log_C": self.log_C,
            "C": self.C,
            "margin_min": self.margin_min,
            "margin_max": self.margin_max,
        }


def _rho(n: np.ndarray, h: float) -> np.ndarray:
    return np.sqrt(n) * h


def coefficient_decay_check(
    e: HermiteExpansion, M: WeightSequence, h: float, direction: str = "decay"
) -> DecayReport:
    """Compare ``log |b_n|`` with ``-M(sqrt(n) h)`` (decay) or ``+M(sqrt(n) h)`` (growth).

    ``margins[n] = bound - log|b_n|``; ``log_C`` is the smallest constant with
    ``|b_n| <= C exp(bound)`` on the stored range.  The check passes when the
    worst discrepancy on the upper half of the indices does not exceed the
    worst on the lower half, i.e. the needed constant has stopped growing.
    """
    if direction not in ("decay", "growth"):
        raise ValueError("direction must be 'decay' or 'growth'")
    b = np.asarray(e.coefficients)
    n = np.arange(len(b))
    Mn = associated_function(M, _rho(n, h)).value
    bound = -Mn if direction == "decay" else Mn
    with np.errstate(divide="ignore"):
        margins = bound - np.log(np.abs(b))
    disc = -margins
    log_C = float(np.max(disc))
    half = max(1, len(b) // 2)
    upper, lower = disc[half:], disc[:half]
    passed = True if len(upper) == 0 else bool(np.max(upper) <= max(np.max(lower), 0.0) + 1e-12)
    finite = margins[np.isfinite(margins)]
    mmin = float(np.min(finite)) if len(finite) else math.inf
    mmax = float(np.max(finite)) if len(finite) else math.inf
    return DecayReport(passed, direction, log_C, mmin, mmax, margins)


def damping_factors(N: int, M: WeightSequence, h: float, eps: float, square: str = "value") -> np.ndarray:
    """``exp(-eps M(sqrt(n) h)^2)`` for ``n = 0..N``.

    ``square="argument"`` switches to ``exp(-eps M(n h^2))``.
    """
    n = np.arange(N + 1)
    if square == "value":
        return np.exp(-eps * associated_function(M, _rho(n, h)).value ** 2)
    if square == "argument":
        return np.exp(-eps * associated_function(M, n * h * h).value)
    raise ValueError("square must be 'value' or 'argument'")


def regularize_ultra(
    e: HermiteExpansion, M: WeightSequence, h: float, grid: EpsilonGrid, square: str = "value"
) -> FunctionNet:
    """The net ``f_eps = sum_n exp(-eps M(sqrt(n) h)^2) b_n h_n``."""
    b = e.coefficients
    return FunctionNet(
        grid, [HermiteExpansion(damping_factors(e.N, M, h, eps, square) * b).field() for eps in grid]
    )


@dataclass
class InclusionReport:
    grid: EpsilonGrid
    constants: GeneralizedConstantNet
    limit_log_C: float
    growth: GrowthReport
    uniform_bound_holds: bool
    violations: list
    max_uniform_margin: float

    @property
    def gap_to_limit(self) -> np.ndarray:
        log_C = self.constants.log_abs
        # an all-zero expansion has log C = -inf at every eps and no gap
        with np.errstate(invalid="ignore"):
            gap = self.limit_log_C - log_C
        return np.where(np.isneginf(log_C) & (self.limit_log_C == -np.inf), 0.0, gap)

    @property
    def approaches_limit_monotonically(self) -> bool:
        gap = self.gap_to_limit
        return bool(np.all(gap >= -1e-12) and np.all(np.diff(gap) <= 1e-12))

    def to_dict(self) -> dict:
        return {
            "eps": list(self.grid),
            "log_C": self.constants.log_abs.tolist(),
            "limit_log_C": self.limit_log_C,
            "gap_to_limit": self.gap_to_limit.tolist(),
            "monotone_to_limit": self.approaches_limit_monotonically,
            "uniform_bound_holds": self.uniform_bound_holds,
            "violations": self.violations,
            "max_uniform_margin": self.max_uniform_margin,
            "growth": self.growth.to_dict(),
        }


def verify_inclusion_bound(
    e: HermiteExpansion, M: WeightSequence, h: float, grid: EpsilonGrid, square: str = "value"
) -> InclusionReport:
    """Measure ``C_eps = max_n |f^eps_n| exp(M(sqrt(n) h))`` and check ``|f^eps_n| <= exp(M(sqrt(n) h))``.

    ``limit_log_C`` is the eps -> 0 value ``max_n (log|b_n| + M(sqrt(n) h))``.
    Violations of the uniform bound are listed as ``(n, eps)`` witnesses.
    """
    b = np.asarray(e.coefficients)
    n = np.arange(len(b))
    Mn = associated_function(M, _rho(n, h)).value
    with np.errstate(divide="ignore"):
        log_b = np.log(np.abs(b))
    log_C, violations, worst = [], [], -math.inf
    for eps in grid:
        log_f = log_b + np.log(damping_factors(e.N, M, h, eps, square))
        log_C.append(float(np.max(log_f + Mn)))
        excess = log_f - Mn
        worst = max(worst, float(np.max(excess)))
        for k in np.nonzero(excess > 1e-12)[0]:
            violations.append((int(k), float(eps)))
    constants = GeneralizedConstantNet(grid, log_abs=log_C)
    return InclusionReport(
        grid,
        constants,
        float(np.max(log_b + Mn)),
        classify_constant(constants),
        not violations,
        violations,
        worst,
    )
