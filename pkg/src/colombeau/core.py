"""Smooth fields, epsilon-nets, sampling boxes and Gaussian damping.

A :class:`ScalarField` is a vectorised map ``R^d -> R``: it is called on
arrays of shape ``(..., d)`` and returns arrays of shape ``(...)``.  Fields
carry a ``log_scale`` so that nets such as ``exp(-1/eps) * g`` or
``exp(+1/eps) * g`` stay representable when the prefactor under/overflows
double precision; seminorms work with the unscaled ``base`` values and add the
log scale back in at the end.
"""
from __future__ import annotations

import itertools
import math
from functools import lru_cache
from typing import Callable, Iterable, Iterator, Mapping, Sequence

import numpy as np
from numpy.polynomial import polynomial as P

__all__ = [
    "ColombeauError",
    "GridMembershipError",
    "ShapeError",
    "CapabilityError",
    "DomainError",
    "MultiIndex",
    "multi_indices",
    "ScalarField",
    "GaussianPolynomial",
    "EpsilonGrid",
    "FunctionNet",
    "GeneralizedConstantNet",
    "SamplingBox",
    "evaluate",
    "partial_derivative",
    "gaussian_damp",
    "double_regularize",
    "gaussian",
    "monomial",
    "constant",
    "radial_polynomial",
    "zero_field",
    "tensor_product",
]

DEFAULT_MAX_FD_ORDER = 4
DEFAULT_MAX_ANALYTIC_ORDER = 16
DEFAULT_STEP = 1e-4


class ColombeauError(Exception):
    """Base class for errors raised by this package."""


class GridMembershipError(ColombeauError, KeyError):
    pass


class ShapeError(ColombeauError, ValueError):
    pass


class CapabilityError(ColombeauError, ValueError):
    """A requested derivative order or truncation exceeds what is supported."""


class DomainError(ColombeauError, ValueError):
    pass


class MultiIndex(tuple):
    """Tuple of nonnegative integers; ``order`` is the sum of the entries."""

    def __new__(cls, entries: Iterable[int] = ()):
        entries = tuple(int(a) for a in entries)
        if any(a < 0 for a in entries):
            raise DomainError(f"multi-index entries must be nonnegative: {entries}")
        return super().__new__(cls, entries)

    @property
    def order(self) -> int:
        return sum(self)

    @property
    def dim(self) -> int:
        return len(self)


def multi_indices(dim: int, max_order: int) -> list[MultiIndex]:
    """All multi-indices of length ``dim`` with order ``<= max_order``, graded."""
    out = []
    for order in range(max_order + 1):
        for combo in itertools.product(range(order + 1), repeat=dim):
            if sum(combo) == order:
                out.append(MultiIndex(combo))
    return out


def _as_points(x, dim: int) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if dim == 1 and (x.ndim == 0 or x.shape[-1] != 1):
        x = x[..., None]
    if x.ndim == 0 or x.shape[-1] != dim:
        raise ShapeError(f"expected points with trailing dimension {dim}, got shape {x.shape}")
    return x


def _squeeze(values):
    values = np.asarray(values, dtype=float)
    return float(values) if values.ndim == 0 else values


class ScalarField:
    """Smooth real field on ``R^dim``.

    Parameters
    ----------
    dim : int
        Ambient dimension.
    evaluator : callable
        Vectorised map from ``(..., dim)`` arrays to ``(...)`` arrays.
    derivative : callable, optional
        ``derivative(alpha, X)`` returning ``d^alpha`` of the evaluator.  When
        absent, derivatives fall back to central finite differences.
    log_scale : float
        The field value is ``exp(log_scale) * evaluator(X)``.
    gaussian_rate : sequence of float, optional
        Per-axis rate ``a_i`` such that the field behaves like a polynomial
        times ``exp(-a_i x_i^2)``.  Used to pick quadrature scales.
    """

    def __init__(
        self,
        dim: int,
        evaluator: Callable[[np.ndarray], np.ndarray],
        derivative: Callable[[Sequence[int], np.ndarray], np.ndarray] | None = None,
        *,
        log_scale: float = 0.0,
        gaussian_rate: Sequence[float] | None = None,
        max_order: int | None = None,
        name: str = "",
    ):
        if int(dim) < 1:
            raise DomainError("dimension must be positive")
        self.dim = int(dim)
        self._evaluator = evaluator
        self._derivative = derivative
        self.log_scale = float(log_scale)
        rate = (0.0,) * self.dim if gaussian_rate is None else tuple(float(r) for r in gaussian_rate)
        if len(rate) != self.dim:
            raise ShapeError("gaussian_rate must have one entry per axis")
        self.gaussian_rate = rate
        if max_order is None:
            max_order = DEFAULT_MAX_ANALYTIC_ORDER if derivative is not None else DEFAULT_MAX_FD_ORDER
        self.max_order = int(max_order)
        self.name = name

    @property
    def analytic(self) -> bool:
        return self._derivative is not None

    @property
    def scale(self) -> float:
        return math.exp(self.log_scale)

    def __repr__(self):
        label = self.name or type(self).__name__
        return f"<{label} dim={self.dim} log_scale={self.log_scale:g}>"

    def base(self, x) -> np.ndarray:
        """Values without the ``exp(log_scale)`` prefactor."""
        X = _as_points(x, self.dim)
        return np.asarray(self._evaluator(X), dtype=float)

    def base_derivative(self, alpha: Sequence[int], x) -> np.ndarray:
        if self._derivative is None:
            raise CapabilityError("field has no analytic derivative")
        X = _as_points(x, self.dim)
        alpha = MultiIndex(alpha)
        if alpha.order == 0:
            return np.asarray(self._evaluator(X), dtype=float)
        return np.asarray(self._derivative(alpha, X), dtype=float)

    def __call__(self, x):
        return _squeeze(self.scale * self.base(x))

    # -- algebra ----------------------------------------------------------

    def _with(self, evaluator, derivative, log_scale, rate, name=""):
        return ScalarField(
            self.dim,
            evaluator,
            derivative,
            log_scale=log_scale,
            gaussian_rate=rate,
            max_order=self.max_order,
            name=name,
        )

    def scaled(self, c: float) -> "ScalarField":
        c = float(c)
        if c == 0.0:
            return zero_field(self.dim)
        if c > 0:
            return self._with(self._evaluator, self._derivative, self.log_scale + math.log(c), self.gaussian_rate, self.name)
        ev, der = self._evaluator, self._derivative
        neg_der = None if der is None else (lambda a, X: -der(a, X))
        return self._with(lambda X: -ev(X), neg_der, self.log_scale + math.log(-c), self.gaussian_rate, self.name)

    def __neg__(self):
        return self.scaled(-1.0)

    def __mul__(self, other):
        if isinstance(other, (int, float, np.floating, np.integer)):
            return self.scaled(float(other))
        if not isinstance(other, ScalarField):
            return NotImplemented
        _check_same_dim(self, other)
        f, g = self, other
        rate = tuple(a + b for a, b in zip(f.gaussian_rate, g.gaussian_rate))
        derivative = None
        if f.analytic and g.analytic:

            def derivative(alpha, X):
                return _leibniz(f.base_derivative, g.base_derivative, alpha, X)

        out = ScalarField(
            f.dim,
            lambda X: f.base(X) * g.base(X),
            derivative,
            log_scale=f.log_scale + g.log_scale,
            gaussian_rate=rate,
            max_order=min(f.max_order, g.max_order),
        )
        return out

    __rmul__ = __mul__

    def __add__(self, other):
        if not isinstance(other, ScalarField):
            return NotImplemented
        _check_same_dim(self, other)
        f, g = self, other
        top = max(f.log_scale, g.log_scale)
        wf, wg = math.exp(f.log_scale - top), math.exp(g.log_scale - top)
        rate = tuple(min(a, b) for a, b in zip(f.gaussian_rate, g.gaussian_rate))
        derivative = None
        if f.analytic and g.analytic:

            def derivative(alpha, X):
                return wf * f.base_derivative(alpha, X) + wg * g.base_derivative(alpha, X)

        return ScalarField(
            f.dim,
            lambda X: wf * f.base(X) + wg * g.base(X),
            derivative,
            log_scale=top,
            gaussian_rate=rate,
            max_order=min(f.max_order, g.max_order),
        )

    def __sub__(self, other):
        return self + (-other)


def _check_same_dim(f: ScalarField, g: ScalarField) -> None:
    if f.dim != g.dim:
        raise ShapeError(f"dimension mismatch: {f.dim} vs {g.dim}")


def _leibniz(df, dg, alpha, X):
    alpha = MultiIndex(alpha)
    total = 0.0
    for beta in itertools.product(*(range(a + 1) for a in alpha)):
        rest = tuple(a - b for a, b in zip(alpha, beta))
        coef = math.prod(math.comb(a, b) for a, b in zip(alpha, beta))
        total = total + coef * df(beta, X) * dg(rest, X)
    return total


# -- Gaussian-times-polynomial fields with closed-form derivatives -----------


@lru_cache(maxsize=4096)
def _factor_poly(power: int, rate: float, order: int) -> np.ndarray:
    """Coefficients of p with d^order/dx^order [x^power e^{-rate x^2}] = p(x) e^{-rate x^2}."""
    c = np.zeros(power + 1)
    c[power] = 1.0
    for _ in range(order):
        c = P.polyadd(P.polyder(c), -2.0 * rate * P.polymulx(c))
    return c


class GaussianPolynomial(ScalarField):
    """Finite sum of terms ``coef * prod_i x_i^k_i * exp(-sum_i r_i x_i^2)``.

    The class is closed under products and Gaussian damping, and every
    derivative is available in closed form.  Negative rates are allowed,
    which gives fields such as ``exp(|x|^2)`` that leave ``O_M``.
    """

    def __init__(self, terms, dim: int, *, log_scale: float = 0.0, name: str = ""):
        clean = []
        for coef, powers, rates in terms:
            powers = tuple(int(k) for k in powers)
            rates = tuple(float(r) for r in rates)
            if len(powers) != dim or len(rates) != dim:
                raise ShapeError("term powers/rates must have one entry per axis")
            if coef != 0.0:
                clean.append((float(coef), powers, rates))
        self.terms = tuple(clean)
        if self.terms:
            rate = tuple(min(t[2][i] for t in self.terms) for i in range(dim))
        else:
            rate = (0.0,) * dim
        super().__init__(
            dim,
            self._eval,
            self._deriv,
            log_scale=log_scale,
            gaussian_rate=rate,
            max_order=DEFAULT_MAX_ANALYTIC_ORDER,
            name=name,
        )

    def _eval(self, X):
        return self._deriv((0,) * self.dim, X)

    def _deriv(self, alpha, X):
        out = np.zeros(X.shape[:-1])
        for coef, powers, rates in self.terms:
            val = coef * np.exp(-sum(r * X[..., i] ** 2 for i, r in enumerate(rates)))
            for i, (k, r) in enumerate(zip(powers, rates)):
                if k == 0 and alpha[i] == 0:
                    continue
                val = val * P.polyval(X[..., i], _factor_poly(k, r, int(alpha[i])))
            out = out + val
        return out

    def scaled(self, c: float) -> "GaussianPolynomial":
        c = float(c)
        if c == 0.0:
            return zero_field(self.dim)
        terms = [(math.copysign(1.0, c) * coef, k, r) for coef, k, r in self.terms]
        return GaussianPolynomial(terms, self.dim, log_scale=self.log_scale + math.log(abs(c)), name=self.name)

    def damped(self, gamma: float) -> "GaussianPolynomial":
        terms = [(coef, k, tuple(ri + gamma for ri in r)) for coef, k, r in self.terms]
        return GaussianPolynomial(terms, self.dim, log_scale=self.log_scale, name=self.name)

    def __mul__(self, other):
        if isinstance(other, GaussianPolynomial):
            _check_same_dim(self, other)
            terms = [
                (c1 * c2, tuple(a + b for a, b in zip(k1, k2)), tuple(a + b for a, b in zip(r1, r2)))
                for (c1, k1, r1), (c2, k2, r2) in itertools.product(self.terms, other.terms)
            ]
            return GaussianPolynomial(terms, self.dim, log_scale=self.log_scale + other.log_scale)
        return super().__mul__(other)

    __rmul__ = __mul__

    def __add__(self, other):
        if isinstance(other, GaussianPolynomial):
            _check_same_dim(self, other)
            top = max(self.log_scale, other.log_scale)
            wa, wb = math.exp(self.log_scale - top), math.exp(other.log_scale - top)
            terms = [(wa * c, k, r) for c, k, r in self.terms] + [(wb * c, k, r) for c, k, r in other.terms]
            return GaussianPolynomial(terms, self.dim, log_scale=top)
        return super().__add__(other)


def gaussian(dim: int = 1, rate: float | Sequence[float] = 1.0, amplitude: float = 1.0) -> GaussianPolynomial:
    """``amplitude * exp(-sum_i rate_i x_i^2)``; a negative rate gives a growing field."""
    rates = (float(rate),) * dim if np.isscalar(rate) else tuple(rate)
    return GaussianPolynomial([(1.0, (0,) * dim, rates)], dim, name="gaussian").scaled(amplitude)


def monomial(powers: Sequence[int], amplitude: float = 1.0) -> GaussianPolynomial:
    dim = len(powers)
    return GaussianPolynomial([(1.0, tuple(powers), (0.0,) * dim)], dim, name="monomial").scaled(amplitude)


def constant(dim: int = 1, value: float = 1.0) -> GaussianPolynomial:
    return monomial((0,) * dim, value)


def zero_field(dim: int = 1) -> GaussianPolynomial:
    return GaussianPolynomial([], dim, name="zero")


def radial_polynomial(coefficients: Sequence[float], dim: int = 1) -> GaussianPolynomial:
    """``sum_k c_k |x|^{2k}``, expanded into monomials."""
    terms = []
    for k, c in enumerate(coefficients):
        for powers in itertools.product(range(k + 1), repeat=dim):
            if sum(powers) != k:
                continue
            multinom = math.factorial(k) / math.prod(math.factorial(p) for p in powers)
            terms.append((c * multinom, tuple(2 * p for p in powers), (0.0,) * dim))
    return GaussianPolynomial(terms, dim, name="radial_polynomial")


def tensor_product(f: ScalarField, g: ScalarField) -> ScalarField:
    """``(x, y) -> f(x) g(y)`` on ``R^{f.dim + g.dim}``."""
    d = f.dim
    derivative = None
    if f.analytic and g.analytic:

        def derivative(alpha, X):
            return f.base_derivative(alpha[:d], X[..., :d]) * g.base_derivative(alpha[d:], X[..., d:])

    return ScalarField(
        d + g.dim,
        lambda X: f.base(X[..., :d]) * g.base(X[..., d:]),
        derivative,
        log_scale=f.log_scale + g.log_scale,
        gaussian_rate=f.gaussian_rate + g.gaussian_rate,
        max_order=min(f.max_order, g.max_order),
        name=f"{f.name or 'f'}(x){g.name or 'g'}(y)",
    )


# -- derivatives ---------------------------------------------------------------

# Central stencils of second-order accuracy for derivative orders 1..4.
_STENCILS = {
    1: ((-1, -0.5), (1, 0.5)),
    2: ((-1, 1.0), (0, -2.0), (1, 1.0)),
    3: ((-2, -0.5), (-1, 1.0), (1, -1.0), (2, 0.5)),
    4: ((-2, 1.0), (-1, -4.0), (0, 6.0), (1, -4.0), (2, 1.0)),
}


def _default_step(order: int) -> float:
    return max(DEFAULT_STEP, np.finfo(float).eps ** (1.0 / (order + 2)))


def _fd_base(f: ScalarField, alpha: MultiIndex, X: np.ndarray, step: float | None) -> np.ndarray:
    scale = 1.0 + np.linalg.norm(X, axis=-1)
    axes = [i for i, a in enumerate(alpha) if a > 0]
    if not axes:
        return f.base(X)
    steps = {i: (step if step is not None else _default_step(alpha[i])) * scale for i in axes}
    total = np.zeros(X.shape[:-1])
    for combo in itertools.product(*(_STENCILS[alpha[i]] for i in axes)):
        shifted = X.copy()
        coef = 1.0
        for i, (offset, c) in zip(axes, combo):
            shifted[..., i] = X[..., i] + offset * steps[i]
            coef *= c
        total = total + coef * f.base(shifted)
    denom = 1.0
    for i in axes:
        denom = denom * steps[i] ** alpha[i]
    return total / denom


def derivative_base(f: ScalarField, alpha: Sequence[int], X: np.ndarray, step: float | None = None,
                    max_order: int | None = None) -> np.ndarray:
    """Unscaled ``d^alpha f`` on points ``X``; analytic when available."""
    alpha = MultiIndex(alpha)
    if alpha.dim != f.dim:
        raise ShapeError(f"multi-index {tuple(alpha)} does not match dimension {f.dim}")
    limit = f.max_order if max_order is None else max_order
    if alpha.order > limit:
        raise CapabilityError(f"derivative order {alpha.order} exceeds supported maximum {limit}")
    if f.analytic:
        return f.base_derivative(alpha, X)
    if any(a > DEFAULT_MAX_FD_ORDER for a in alpha):
        raise CapabilityError(f"finite differences support per-axis order <= {DEFAULT_MAX_FD_ORDER}")
    if step is not None and step <= 0:
        raise DomainError("step must be positive")
    return _fd_base(f, alpha, X, step)


def partial_derivative(f: ScalarField, alpha: Sequence[int], x, step: float | None = None,
                       max_order: int | None = None):
    """``d^alpha f(x)``.

    Uses the field's analytic derivative when present, otherwise second-order
    central differences with step ``step * (1 + |x|)``.  Without an explicit
    ``step`` the step grows with the derivative order to limit cancellation.
    """
    X = _as_points(x, f.dim)
    return _squeeze(f.scale * derivative_base(f, alpha, X, step, max_order))


# -- damping ---------------------------------------------------------------


def _gaussian_factor_derivative(gamma: float, dim: int):
    def dg(beta, X):
        out = np.exp(-gamma * np.sum(X**2, axis=-1))
        for i, b in enumerate(beta):
            if b:
                out = out * P.polyval(X[..., i], _factor_poly(0, gamma, int(b)))
        return out

    return dg


def gaussian_damp(f: ScalarField, gamma: float) -> ScalarField:
    """Multiply ``f`` by ``exp(-gamma |x|^2)``."""
    if not gamma > 0:
        raise DomainError(f"damping rate must be positive, got {gamma}")
    if isinstance(f, GaussianPolynomial):
        return f.damped(gamma)
    dg = _gaussian_factor_derivative(gamma, f.dim)
    derivative = None
    if f.analytic:

        def derivative(alpha, X):
            return _leibniz(f.base_derivative, dg, alpha, X)

    return ScalarField(
        f.dim,
        lambda X: f.base(X) * np.exp(-gamma * np.sum(X**2, axis=-1)),
        derivative,
        log_scale=f.log_scale,
        gaussian_rate=tuple(r + gamma for r in f.gaussian_rate),
        max_order=f.max_order,
        name=f.name,
    )


# -- epsilon grids and nets ----------------------------------------------------


class EpsilonGrid:
    """Strictly decreasing values in (0, 1] indexing a net."""

    def __init__(self, values: Iterable[float]):
        values = tuple(float(v) for v in values)
        if len(values) < 4:
            raise DomainError("an epsilon grid needs at least 4 values")
        if any(not (0.0 < v <= 1.0) for v in values):
            raise DomainError("epsilon values must lie in (0, 1]")
        if any(b >= a for a, b in zip(values, values[1:])):
            raise DomainError("epsilon values must be strictly decreasing")
        self.values = values

    @classmethod
    def geometric(cls, k_max: int = 12, k_min: int = 1, base: float = 2.0) -> "EpsilonGrid":
        return cls(base ** (-k) for k in range(k_min, k_max + 1))

    def __iter__(self) -> Iterator[float]:
        return iter(self.values)

    def __len__(self):
        return len(self.values)

    def __getitem__(self, i):
        return self.values[i]

    def __eq__(self, other):
        return isinstance(other, EpsilonGrid) and self.values == other.values

    def __hash__(self):
        return hash(self.values)

    def __repr__(self):
        return f"EpsilonGrid({len(self)} values, {self.values[0]:g} .. {self.values[-1]:g})"

    def index(self, eps: float) -> int:
        for i, v in enumerate(self.values):
            if math.isclose(v, eps, rel_tol=1e-12, abs_tol=0.0):
                return i
        raise GridMembershipError(f"epsilon {eps!r} is not on the grid")

    def __contains__(self, eps) -> bool:
        try:
            self.index(eps)
        except GridMembershipError:
            return False
        return True

    def as_array(self) -> np.ndarray:
        return np.asarray(self.values)


class FunctionNet:
    """A net ``eps -> f_eps`` of fields of a common dimension."""

    def __init__(self, grid: EpsilonGrid, fields: Mapping[float, ScalarField] | Sequence[ScalarField]):
        if not isinstance(fields, Mapping):
            fields = dict(zip(grid, fields))
        ordered = []
        for eps in grid:
            match = [f for e, f in fields.items() if math.isclose(e, eps, rel_tol=1e-12)]
            if not match:
                raise GridMembershipError(f"no field for grid value {eps!r}")
            ordered.append(match[0])
        dims = {f.dim for f in ordered}
        if len(dims) != 1:
            raise ShapeError(f"all fields of a net must share a dimension, got {sorted(dims)}")
        self.grid = grid
        self._fields = tuple(ordered)
        self.dim = dims.pop()

    @classmethod
    def from_family(cls, grid: EpsilonGrid, family: Callable[[float], ScalarField]) -> "FunctionNet":
        return cls(grid, [family(eps) for eps in grid])

    def __getitem__(self, eps: float) -> ScalarField:
        return self._fields[self.grid.index(eps)]

    def items(self):
        return zip(self.grid, self._fields)

    def map(self, fn: Callable[[float, ScalarField], ScalarField]) -> "FunctionNet":
        return FunctionNet(self.grid, [fn(eps, f) for eps, f in self.items()])

    def __mul__(self, other: "FunctionNet") -> "FunctionNet":
        if self.grid != other.grid:
            raise GridMembershipError("nets live on different grids")
        return FunctionNet(self.grid, [a * b for (_, a), (_, b) in zip(self.items(), other.items())])

    def __repr__(self):
        return f"FunctionNet(dim={self.dim}, {self.grid!r})"


class GeneralizedConstantNet:
    """A net of scalars ``(C_eps)``, stored as logarithms of the magnitudes with signs."""

    def __init__(self, grid: EpsilonGrid, values=None, *, log_abs=None, signs=None):
        if (values is None) == (log_abs is None):
            raise DomainError("pass exactly one of values or log_abs")
        if values is not None:
            values = np.asarray(values, dtype=float)
            with np.errstate(divide="ignore"):
                log_abs = np.log(np.abs(values))
            signs = np.sign(values)
        log_abs = np.asarray(log_abs, dtype=float)
        signs = np.ones_like(log_abs) if signs is None else np.asarray(signs, dtype=float)
        if log_abs.shape != (len(grid),):
            raise ShapeError("one value per grid point is required")
        self.grid = grid
        self.log_abs = log_abs
        self.signs = signs

    @property
    def values(self) -> np.ndarray:
        return self.signs * np.exp(self.log_abs)

    def __getitem__(self, eps):
        return float(self.values[self.grid.index(eps)])


class SamplingBox:
    """Uniform sample grid on ``[-R, R]^d`` standing in for a sup over ``R^d``."""

    def __init__(self, half_width: float = 8.0, points_per_axis: int = 401, refine: int = 3):
        if not half_width > 0:
            raise DomainError("half_width must be positive")
        if int(points_per_axis) < 3:
            raise DomainError("points_per_axis must be at least 3")
        self.half_width = float(half_width)
        self.points_per_axis = int(points_per_axis)
        self.refine = int(refine)

    def __repr__(self):
        return f"SamplingBox(R={self.half_width:g}, points={self.points_per_axis})"

    @property
    def spacing(self) -> float:
        return 2 * self.half_width / (self.points_per_axis - 1)

    def axis(self) -> np.ndarray:
        return np.linspace(-self.half_width, self.half_width, self.points_per_axis)

    def points(self, dim: int) -> np.ndarray:
        mesh = np.meshgrid(*([self.axis()] * dim), indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=-1)

    def on_shell(self, X: np.ndarray) -> np.ndarray:
        """True for points in the outermost 10% of the box."""
        return np.max(np.abs(X), axis=-1) > 0.9 * self.half_width


def evaluate(net: FunctionNet, eps: float, x):
    f = net[eps]
    return f(_as_points(x, f.dim))


def double_regularize(net: FunctionNet) -> FunctionNet:
    """Damp each ``f_eps`` by ``exp(-eps |x|^2)``, tying the damping rate to eps."""
    return net.map(lambda eps, f: gaussian_damp(f, eps))
