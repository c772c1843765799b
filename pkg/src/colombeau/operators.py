"""Generalized integral operators with Gaussian-damped kernels.

An operator is a net of kernels ``K_eps(x, y)`` on ``R^n x R^n``.  It acts on
a net ``phi_eps`` by

    (A phi)_eps(x) = int K_eps(x, y) phi_eps(y) exp(-eps |y|^2) dy,

so polynomially growing inputs are admissible.  Composition multiplies
kernels through the same damped integral in the middle variable,

    (A2 o A1)_eps(x, y) = int K2_eps(x, z) K1_eps(z, y) exp(-eps |z|^2) dz,

and ``exp(A) = I + sum_k A^k / k!`` is summed by iterated application.

All integrals use tensor Gauss-Hermite rules.  The Gaussian scale of each
rule is ``eps`` plus the known Gaussian decay rates of the integrand
factors, which makes the rule exact for polynomial-times-Gaussian catalogs.
"""
from __future__ import annotations

import math
import threading
import warnings
from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np

from .core import (
    ColombeauError,
    DomainError,
    EpsilonGrid,
    FunctionNet,
    GridMembershipError,
    SamplingBox,
    ScalarField,
    ShapeError,
    _as_points,
    _squeeze,
    derivative_base,
    multi_indices,
)
from .quadrature import damped_rule
from .seminorms import GrowthReport, classify_tempered, growth_report, sampled_sup

__all__ = [
    "AccuracyWarning",
    "ResourceError",
    "KernelNet",
    "GeneralizedOperator",
    "CompositionReport",
    "ExpApplyResult",
    "KernelGrowthReport",
    "ModerationReport",
    "applied_field",
    "apply",
    "compose",
    "verify_composition",
    "power",
    "exp_apply",
    "kernel_growth_check",
    "operator_moderation_check",
]

DEFAULT_NODES = 64
DEFAULT_BUDGET = 1 << 14
QUADRATURE_RTOL = 1e-8
VERIFY_TOL = 1e-6
_CELLS = 1 << 20


class AccuracyWarning(UserWarning):
    """Doubling the quadrature nodes changed a result by more than the tolerance."""


class ResourceError(ColombeauError, MemoryError):
    pass


class KernelNet:
    """``eps -> K_eps``, fields on ``R^{2n}`` with ``x`` first and ``y`` last."""

    def __init__(self, grid: EpsilonGrid, kernels, n: int):
        net = FunctionNet(grid, kernels)
        if net.dim != 2 * n:
            raise ShapeError(f"kernels must have dimension 2n = {2 * n}, got {net.dim}")
        self.grid = grid
        self.n = int(n)
        self._net = net

    @classmethod
    def from_family(cls, grid: EpsilonGrid, n: int, family: Callable[[float], ScalarField]) -> "KernelNet":
        return cls(grid, [family(eps) for eps in grid], n)

    def __getitem__(self, eps) -> ScalarField:
        return self._net[eps]

    def items(self):
        return self._net.items()


class GeneralizedOperator:
    """An integral operator given by a kernel net and a quadrature setting."""

    def __init__(self, kernel: KernelNet, nodes: int = DEFAULT_NODES, method: str = "gauss_hermite",
                 budget: int = DEFAULT_BUDGET):
        if nodes < 8:
            raise DomainError("operators need at least 8 quadrature nodes per axis")
        if kernel.n > 2:
            raise DomainError("quadrature-based operators support n <= 2")
        if method != "gauss_hermite":
            raise DomainError(f"unknown quadrature method {method!r}")
        self.kernel = kernel
        self.nodes = int(nodes)
        self.method = method
        self.budget = int(budget)

    @property
    def grid(self) -> EpsilonGrid:
        return self.kernel.grid

    @property
    def n(self) -> int:
        return self.kernel.n

    @classmethod
    def from_family(cls, grid, n, family, **kwargs) -> "GeneralizedOperator":
        return cls(KernelNet.from_family(grid, n, family), **kwargs)

    def __repr__(self):
        return f"GeneralizedOperator(n={self.n}, nodes={self.nodes}, {self.grid!r})"


# -- integration helpers --------------------------------------------------------


def _rates(f: ScalarField) -> np.ndarray:
    return np.asarray(f.gaussian_rate, dtype=float)


def _scale(eps: float, *rates) -> np.ndarray:
    beta = eps + sum(rates)
    if np.any(beta <= 0):
        raise DomainError(f"integrand grows faster than the damping exp(-{eps:g}|y|^2) can absorb")
    return beta


def _pairs(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """All concatenations ``(a_p, b_j)``: shape ``(P, J, dA + dB)``."""
    P, J = len(A), len(B)
    return np.concatenate(
        [np.broadcast_to(A[:, None, :], (P, J, A.shape[1])), np.broadcast_to(B[None, :, :], (P, J, B.shape[1]))],
        axis=-1,
    )


def _pairs_rev(B: np.ndarray, A: np.ndarray) -> np.ndarray:
    """All concatenations ``(b_j, a_p)``: shape ``(P, J, dB + dA)``."""
    P, J = len(A), len(B)
    return np.concatenate(
        [np.broadcast_to(B[None, :, :], (P, J, B.shape[1])), np.broadcast_to(A[:, None, :], (P, J, A.shape[1]))],
        axis=-1,
    )


def _blocked(fn, X: np.ndarray, n: int, width: int) -> np.ndarray:
    shape = X.shape[:-1]
    flat = X.reshape(-1, n)
    step = max(1, _CELLS // max(width, 1))
    out = np.concatenate([fn(flat[i:i + step]) for i in range(0, len(flat), step)]) if len(flat) else np.zeros(0)
    return out.reshape(shape)


def _field_at(phi, eps) -> ScalarField:
    return phi if isinstance(phi, ScalarField) else phi[eps]


def _applied(K: ScalarField, f: ScalarField, eps: float, m: int, n: int) -> ScalarField:
    if f.dim != n:
        raise ShapeError(f"input net has dimension {f.dim}, operator acts on R^{n}")
    beta = _scale(eps, _rates(K)[n:], _rates(f))
    Y, W = damped_rule(eps, m, n, beta)
    fy = f.base(Y)
    zeros = (0,) * n

    def base(X):
        return _blocked(lambda Xc: (K.base(_pairs(Xc, Y)) * fy) @ W, X, n, len(W))

    derivative = None
    if K.analytic:

        def derivative(alpha, X):
            a = tuple(alpha) + zeros
            return _blocked(lambda Xc: (K.base_derivative(a, _pairs(Xc, Y)) * fy) @ W, X, n, len(W))

    return ScalarField(
        n,
        base,
        derivative,
        log_scale=K.log_scale + f.log_scale,
        gaussian_rate=tuple(_rates(K)[:n]),
        max_order=K.max_order,
        name="applied",
    )


def applied_field(A: GeneralizedOperator, phi, eps: float, nodes: int | None = None) -> ScalarField:
    """The field ``x -> int K_eps(x, y) phi_eps(y) exp(-eps |y|^2) dy``, evaluated lazily."""
    if eps not in A.grid:
        raise GridMembershipError(f"epsilon {eps!r} is not on the operator grid")
    return _applied(A.kernel[eps], _field_at(phi, eps), eps, nodes or A.nodes, A.n)


def apply(A: GeneralizedOperator, phi, eps: float, x, check: bool = False):
    """``(A phi)_eps(x)``; the damping ``exp(-eps |y|^2)`` is supplied here, not by the caller.

    ``phi`` is a :class:`FunctionNet` (or a single field used at this eps).
    With ``check=True`` the result is recomputed with twice the nodes and an
    :class:`AccuracyWarning` is issued if the relative change exceeds 1e-8.
    """
    X = _as_points(x, A.n)
    value = applied_field(A, phi, eps)(X)
    if check:
        fine = applied_field(A, phi, eps, min(2 * A.nodes, 512))(X)
        change = np.max(np.abs(np.asarray(fine) - value) / np.maximum(1.0, np.abs(fine)))
        if change > QUADRATURE_RTOL:
            warnings.warn(f"node doubling changed the result by {change:.3g}", AccuracyWarning, stacklevel=2)
    return value


# -- composition and powers --------------------------------------------------


def _composed_field(K2: ScalarField, K1: ScalarField, eps: float, m: int, n: int) -> ScalarField:
    r2, r1 = _rates(K2), _rates(K1)
    beta = _scale(eps, r2[n:], r1[:n])
    Z, W = damped_rule(eps, m, n, beta)

    def kernel_values(alpha, Xc):
        x, y = Xc[:, :n], Xc[:, n:]
        if alpha is None:
            left, right = K2.base(_pairs(x, Z)), K1.base(_pairs_rev(Z, y))
        else:
            left = K2.base_derivative(tuple(alpha[:n]) + (0,) * n, _pairs(x, Z))
            right = K1.base_derivative((0,) * n + tuple(alpha[n:]), _pairs_rev(Z, y))
        return (left * right) @ W

    derivative = None
    if K2.analytic and K1.analytic:

        def derivative(alpha, X):
            return _blocked(lambda Xc: kernel_values(alpha, Xc), X, 2 * n, len(W))

    return ScalarField(
        2 * n,
        lambda X: _blocked(lambda Xc: kernel_values(None, Xc), X, 2 * n, len(W)),
        derivative,
        log_scale=K2.log_scale + K1.log_scale,
        gaussian_rate=tuple(np.concatenate([r2[:n], r1[n:]])),
        max_order=min(K2.max_order, K1.max_order),
        name="composed",
    )


def _check_compatible(A2: GeneralizedOperator, A1: GeneralizedOperator) -> None:
    if A2.n != A1.n:
        raise ShapeError(f"cannot compose operators on R^{A2.n} and R^{A1.n}")
    if A2.grid != A1.grid:
        raise GridMembershipError("operators live on different epsilon grids")


def compose(A2: GeneralizedOperator, A1: GeneralizedOperator) -> GeneralizedOperator:
    """``A2 o A1`` with kernel ``int K2(x, z) K1(z, y) exp(-eps |z|^2) dz``, evaluated lazily."""
    _check_compatible(A2, A1)
    n, m = A1.n, max(A1.nodes, A2.nodes)
    kernels = [_composed_field(A2.kernel[eps], A1.kernel[eps], eps, m, n) for eps in A1.grid]
    return GeneralizedOperator(KernelNet(A1.grid, kernels, n), m, budget=min(A1.budget, A2.budget))


class _PowerKernel:
    """Kernel of ``A^k`` for k >= 3, factored through the inner quadrature nodes.

    With nodes ``z_i`` and damped weights ``w_i`` shared by every inner
    integral, ``K^k(x, y) = r(x) Q u(y)`` where ``r_i = K(x, z_i) w_i``,
    ``u_j = K(z_j, y)`` and ``Q = (K(z_i, z_j) w_j)^(k-2)``.  This is the same
    number the nested lazy compositions would produce, at O(N^2) per point.
    """

    def __init__(self, K: ScalarField, eps: float, k: int, m: int, n: int):
        self.K, self.k, self.n = K, k, n
        r = _rates(K)
        self.Z, self.W = damped_rule(eps, m, n, _scale(eps, r[n:], r[:n]))
        self._Q = None
        self._lock = threading.Lock()

    @property
    def Q(self) -> np.ndarray:
        if self._Q is None:
            Kzz = self.K.base(_pairs(self.Z, self.Z))
            Q = np.linalg.matrix_power(Kzz * self.W[None, :], self.k - 2)
            with self._lock:
                if self._Q is None:
                    self._Q = Q
        return self._Q

    def values(self, alpha, Xc):
        n = self.n
        x, y = Xc[:, :n], Xc[:, n:]
        if alpha is None:
            left = self.K.base(_pairs(x, self.Z))
            right = self.K.base(_pairs_rev(self.Z, y))
        else:
            left = self.K.base_derivative(tuple(alpha[:n]) + (0,) * n, _pairs(x, self.Z))
            right = self.K.base_derivative((0,) * n + tuple(alpha[n:]), _pairs_rev(self.Z, y))
        return np.sum(((left * self.W) @ self.Q) * right, axis=-1)

    def field(self) -> ScalarField:
        n, K = self.n, self.K
        width = len(self.W)
        derivative = None
        if K.analytic:

            def derivative(alpha, X):
                return _blocked(lambda Xc: self.values(alpha, Xc), X, 2 * n, width)

        return ScalarField(
            2 * n,
            lambda X: _blocked(lambda Xc: self.values(None, Xc), X, 2 * n, width),
            derivative,
            log_scale=self.k * K.log_scale,
            gaussian_rate=K.gaussian_rate,
            max_order=K.max_order,
            name=f"power{self.k}",
        )


def power(A: GeneralizedOperator, k: int) -> GeneralizedOperator:
    """``A^k``, the k-fold composition (left fold of :func:`compose`)."""
    if int(k) < 1:
        raise DomainError("power must be a positive integer")
    k = int(k)
    if k == 1:
        return A
    if k == 2:
        return compose(A, A)
    N = A.nodes ** A.n
    if k * N > A.budget:
        raise ResourceError(f"k * nodes^n = {k * N} exceeds the budget {A.budget}")
    kernels = [_PowerKernel(A.kernel[eps], eps, k, A.nodes, A.n).field() for eps in A.grid]
    return GeneralizedOperator(KernelNet(A.grid, kernels, A.n), A.nodes, budget=A.budget)


# -- verification of the composition identity ----------------------------------


@dataclass
class CompositionReport:
    eps: float
    max_discrepancy: float
    max_abs_discrepancy: float
    sample_points: list
    tolerance: float
    passed: bool
    composed_values: list = field(default_factory=list)
    iterated_values: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "eps": self.eps,
            "max_discrepancy": self.max_discrepancy,
            "max_abs_discrepancy": self.max_abs_discrepancy,
            "tolerance": self.tolerance,
            "pass": self.passed,
            "sample_points": self.sample_points,
            "composed": self.composed_values,
            "iterated": self.iterated_values,
        }


def verify_composition(
    A2: GeneralizedOperator,
    A1: GeneralizedOperator,
    phi,
    eps: float,
    points,
    tol: float = VERIFY_TOL,
) -> CompositionReport:
    """Compare ``(A2 o A1) phi`` with ``A2 (A1 phi)`` at the given points.

    The discrepancy at each point is ``|a - b| / max(1, |b|)``: absolute for
    values of order one, relative for large ones.
    """
    _check_compatible(A2, A1)
    X = _as_points(points, A1.n)
    lhs = np.atleast_1d(apply(compose(A2, A1), phi, eps, X))
    inner = applied_field(A1, phi, eps)
    rhs = np.atleast_1d(apply(A2, inner, eps, X))
    diff = np.abs(lhs - rhs)
    scaled = diff / np.maximum(1.0, np.abs(rhs))
    worst = float(np.max(scaled)) if len(scaled) else 0.0
    return CompositionReport(
        float(eps),
        worst,
        float(np.max(diff)) if len(diff) else 0.0,
        X.reshape(-1, A1.n).tolist(),
        tol,
        worst <= tol,
        lhs.tolist(),
        rhs.tolist(),
    )


# -- exponential ---------------------------------------------------------------


@dataclass
class ExpApplyResult:
    value: float | np.ndarray
    identity: float | np.ndarray
    terms: list
    k_used: int
    last_term: float
    converged: bool

    @property
    def term_magnitudes(self) -> list:
        return [float(np.max(np.abs(t))) for t in self.terms]

    @property
    def ratios(self) -> list:
        mags = self.term_magnitudes
        return [b / a if a else math.nan for a, b in zip(mags, mags[1:])]

    def to_dict(self) -> dict:
        return {
            "k_used": self.k_used,
            "last_term": self.last_term,
            "converged": self.converged,
            "term_magnitudes": self.term_magnitudes,
            "ratios": self.ratios,
            "value": np.asarray(self.value).tolist(),
        }


def exp_apply(
    A: GeneralizedOperator,
    phi,
    eps: float,
    x,
    K_max: int = 16,
    tol: float = 1e-12,
) -> ExpApplyResult:
    """``(e^A phi)_eps(x) = phi_eps(x) + sum_{k>=1} (A^k phi)_eps(x) / k!``.

    The identity term is the undamped ``phi_eps``.  Powers are never formed:
    ``A^k phi`` is obtained by applying ``A`` to ``A^{k-1} phi`` sampled on the
    inner quadrature nodes.  Summation stops once a term's largest magnitude
    drops below ``tol``; hitting ``K_max`` first is reported through
    ``converged = False``.
    """
    if K_max < 1:
        raise DomainError("K_max must be at least 1")
    n = A.n
    X = _as_points(x, n)
    f = _field_at(phi, eps)
    identity = np.asarray(f(X), dtype=float)
    first = applied_field(A, f, eps)
    term = np.asarray(first(X), dtype=float)
    terms = [term]
    last = float(np.max(np.abs(term))) if term.size else 0.0
    converged = last < tol
    if not converged and K_max > 1:
        K = A.kernel[eps]
        r = _rates(K)
        Z, W = damped_rule(eps, A.nodes, n, _scale(eps, r[n:], r[:n]))
        scale = math.exp(K.log_scale)
        # v holds (A^{k-1} phi)(z_i) / (k-1)!
        v = first(Z)
        inner = scale * K.base(_pairs(Z, Z)) * W[None, :]
        outer = scale * K.base(_pairs(X.reshape(-1, n), Z)) * W[None, :]
        for k in range(2, K_max + 1):
            term = (outer @ v / k).reshape(X.shape[:-1])
            terms.append(term)
            last = float(np.max(np.abs(term))) if term.size else 0.0
            if last < tol:
                converged = True
                break
            v = inner @ v / k
    value = identity + sum(terms)
    return ExpApplyResult(_squeeze(value), _squeeze(identity), terms, len(terms), last, converged)


# -- growth estimates ----------------------------------------------------------


@dataclass
class KernelGrowthReport:
    growth: GrowthReport
    q1: int
    q2: int
    n: int
    nominal_exponent: float
    corrected_exponent: float
    slope_tolerance: float = 0.05

    @property
    def slope(self) -> float:
        return self.growth.fitted_order

    @property
    def nominal_margin(self) -> float:
        return self.nominal_exponent - self.slope

    @property
    def corrected_margin(self) -> float:
        return self.corrected_exponent - self.slope

    @property
    def exceeds_nominal(self) -> bool:
        return bool(self.slope > self.nominal_exponent + self.slope_tolerance)

    @property
    def within_corrected(self) -> bool:
        return math.isnan(self.slope) or bool(self.slope <= self.corrected_exponent + self.slope_tolerance)

    @property
    def note(self) -> str:
        if math.isnan(self.slope):
            return "no growth to fit (zero kernel)"
        nominal = "exceeds paper exponent" if self.exceeds_nominal else "within paper exponent"
        corrected = "within corrected exponent" if self.within_corrected else "exceeds corrected exponent"
        return f"{nominal}, {corrected}"

    def to_dict(self) -> dict:
        return {
            "q1": self.q1,
            "q2": self.q2,
            "n": self.n,
            "slope": self.slope,
            "nominal_exponent": self.nominal_exponent,
            "corrected_exponent": self.corrected_exponent,
            "nominal_margin": self.nominal_margin,
            "corrected_margin": self.corrected_margin,
            "note": self.note,
            "growth": self.growth.to_dict(),
        }


def kernel_growth_check(
    A,
    q1: int,
    q2: int,
    box: SamplingBox | None = None,
    grid: EpsilonGrid | None = None,
    derivatives: bool = False,
) -> KernelGrowthReport:
    """Fit the eps-slope of ``sup (1+|x|)^-q1 (1+|y|)^-q2 |K_eps(x, y)|``.

    The slope is compared with ``(q1 + q2)/2`` and with ``(q1 + q2 + n)/2``;
    the latter accounts for ``int exp(-eps|z|^2) dz ~ eps^{-n/2}``.  With
    ``derivatives=True`` first-order derivatives enter the sup as well.
    """
    kernel = A.kernel if isinstance(A, GeneralizedOperator) else A
    n = kernel.n
    box = box or SamplingBox(4.0, 41)
    grid = grid or kernel.grid
    alphas = multi_indices(2 * n, 1 if derivatives else 0)
    logs, flags = [], []
    for eps in grid:
        K = kernel[eps]

        def g(X, K=K):
            w = (1 + np.linalg.norm(X[..., :n], axis=-1)) ** -q1 * (1 + np.linalg.norm(X[..., n:], axis=-1)) ** -q2
            out = np.zeros(X.shape[:-1])
            for a in alphas:
                out = np.maximum(out, np.abs(derivative_base(K, a, X)))
            return w * out

        sup, _, flag = sampled_sup(g, box, 2 * n)
        logs.append(K.log_scale + math.log(sup) if sup > 0 else -math.inf)
        flags.append(flag)
    report = growth_report(list(grid), logs, boundary_flag=any(flags))
    return KernelGrowthReport(report, q1, q2, n, (q1 + q2) / 2, (q1 + q2 + n) / 2)


@dataclass
class ModerationReport:
    entries: dict

    @property
    def passed(self) -> bool:
        return all(e["bound_holds"] for e in self.entries.values())

    def to_dict(self) -> dict:
        return {"pass": self.passed, "entries": self.entries}


def operator_moderation_check(
    A: GeneralizedOperator,
    catalog: Mapping[str, FunctionNet],
    l: int = 0,
    box: SamplingBox | None = None,
    p_max: int = 8,
    q_max: int = 12,
) -> ModerationReport:
    """Check ``mu_{-p,l}(A_eps(phi_eps e^{-eps|.|^2})) <= C eps^{-q} mu_{-q',0}(phi_eps)`` for each catalog net.

    ``p`` and ``q'`` are the smallest weights giving interior, moderate sups;
    ``q`` is read off the eps-slope of the ratio of the two seminorms.
    """
    if not catalog:
        raise ValueError("the input catalog is empty")
    box = box or SamplingBox(8.0, 201)
    entries = {}
    for name, phi in catalog.items():
        out = FunctionNet(A.grid, [applied_field(A, phi, eps) for eps in A.grid])
        out_rep = classify_tempered(out, l, box, p_max, q_max)
        in_rep = classify_tempered(phi, 0, box, p_max, q_max)
        lo, li = np.asarray(out_rep.log_values), np.asarray(in_rep.log_values)
        with np.errstate(invalid="ignore"):
            ratio = np.where(lo == -np.inf, -np.inf, lo - li)
        ratio_rep = growth_report(list(A.grid), ratio, p_max=p_max)
        ok_out = out_rep.is_moderate or out_rep.is_negligible
        ok_ratio = ratio_rep.is_moderate or ratio_rep.is_negligible
        entries[name] = {
            "p": out_rep.q,
            "q_prime": in_rep.q,
            "output_verdict": out_rep.verdict,
            "input_verdict": in_rep.verdict,
            "ratio_slope": ratio_rep.fitted_order,
            "ratio_verdict": ratio_rep.verdict,
            "q": ratio_rep.order,
            "bound_holds": bool(ok_out and ok_ratio),
            "output": out_rep.to_dict(),
            "ratio": ratio_rep.to_dict(),
        }
    return ModerationReport(entries)
