"""Sampled seminorms and growth classification of nets.

The weighted sup-seminorm ``mu_{q,l}`` and the ultradifferentiable seminorm
``nu_{h,M}`` are estimated by a maximum over a :class:`SamplingBox`, with a
local refinement around the best sample.  Classification fits the eps-slope
of ``log seminorm`` on the finest half of the grid and tests the
negligibility quantifier ``forall p`` up to ``p_max``.  Everything runs on
logarithms so that nets like ``exp(-1/eps) g`` never underflow.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .core import (
    FunctionNet,
    GeneralizedConstantNet,
    SamplingBox,
    ScalarField,
    derivative_base,
    multi_indices,
)
from .weights import WeightSequence, growth_function

__all__ = [
    "MuSpec",
    "NuSpec",
    "SeminormResult",
    "GrowthReport",
    "mu_seminorm",
    "nu_seminorm",
    "sampled_sup",
    "classify_power_growth",
    "classify_tempered",
    "classify_ultra",
    "classify_constant",
    "growth_report",
]

SLOPE_TOLERANCE = 0.25
R2_THRESHOLD = 0.98
FLAT_RESIDUAL = 0.05
P_MAX = 8
Q_MAX = 12
_CHUNK = 1 << 15


@dataclass(frozen=True)
class MuSpec:
    q: int
    l: int = 0

    def __post_init__(self):
        if self.l < 0:
            raise ValueError("derivative order l must be nonnegative")


@dataclass(frozen=True)
class NuSpec:
    h: float
    M: WeightSequence
    M_weight: WeightSequence | None = None
    cap: int = 4

    def __post_init__(self):
        if not self.h > 0:
            raise ValueError("h must be positive")
        if self.cap < 0:
            raise ValueError("cap must be nonnegative")

    @property
    def beta_weights(self) -> WeightSequence:
        return self.M if self.M_weight is None else self.M_weight


class SeminormResult(NamedTuple):
    value: float
    boundary_flag: bool
    log_value: float
    argmax: tuple


def _chunked(fn, X):
    if len(X) <= _CHUNK:
        return fn(X)
    return np.concatenate([fn(X[i:i + _CHUNK]) for i in range(0, len(X), _CHUNK)])


def sampled_sup(g, box: SamplingBox, dim: int):
    """Max of a nonnegative vectorised ``g`` over the box.

    Returns ``(value, argmax, boundary_flag)``.  The flag is raised when the
    largest value on the outer 10% shell strictly exceeds every interior
    value, i.e. the sampled sup is only reached at the truncation edge.
    """
    X = box.points(dim)
    vals = _chunked(g, X)
    vals = np.where(np.isnan(vals), -np.inf, vals)
    i = int(np.argmax(vals))
    best, best_x = float(vals[i]), X[i]
    shell = box.on_shell(X)
    interior_max = float(np.max(vals[~shell])) if np.any(~shell) else -np.inf
    shell_max = float(np.max(vals[shell])) if np.any(shell) else -np.inf
    boundary = shell_max > interior_max * (1 + 1e-9) and shell_max > 0
    width = box.spacing
    R = box.half_width
    for _ in range(box.refine):
        if not np.isfinite(best) or best <= 0:
            break
        offsets = np.linspace(-width, width, 11)
        local = np.stack(np.meshgrid(*([offsets] * dim), indexing="ij"), axis=-1).reshape(-1, dim)
        local = np.clip(best_x + local, -R, R)
        lv = np.asarray(g(local), dtype=float)
        lv = np.where(np.isnan(lv), -np.inf, lv)
        j = int(np.argmax(lv))
        if lv[j] > best:
            best, best_x = float(lv[j]), local[j]
        width *= 0.2
    return best, tuple(float(v) for v in best_x), boundary


def _finish(f: ScalarField, sup: float, argmax, boundary: bool) -> SeminormResult:
    with np.errstate(divide="ignore"):
        log_value = f.log_scale + math.log(sup) if sup > 0 else -math.inf
    value = math.exp(log_value) if log_value < 709 else math.inf
    return SeminormResult(value, bool(boundary), log_value, argmax)


def _mu_integrand(f: ScalarField, q: float, l: int, step=None):
    alphas = multi_indices(f.dim, l)

    def g(X):
        out = np.zeros(X.shape[:-1])
        for a in alphas:
            out = np.maximum(out, np.abs(derivative_base(f, a, X, step)))
        return (1.0 + np.linalg.norm(X, axis=-1)) ** q * out

    return g


def mu_seminorm(f: ScalarField, spec: MuSpec, box: SamplingBox | None = None, step=None) -> SeminormResult:
    """``sup_{x, |alpha| <= l} (1 + |x|)^q |d^alpha f(x)|`` over the sampling box."""
    box = box or SamplingBox()
    sup, arg, flag = sampled_sup(_mu_integrand(f, spec.q, spec.l, step), box, f.dim)
    return _finish(f, sup, arg, flag)


def nu_seminorm(f: ScalarField, spec: NuSpec, box: SamplingBox | None = None, step=None) -> SeminormResult:
    """``sup h^{|a|+|b|} |x^b d^a f(x)| / (M_{|a|} M_{|b|})`` for ``|a|, |b| <= cap``."""
    box = box or SamplingBox()
    if spec.cap > min(spec.M.p_max, spec.beta_weights.p_max):
        raise ValueError("cap exceeds the stored weight sequence")
    alphas = multi_indices(f.dim, spec.cap)
    betas = multi_indices(f.dim, spec.cap)
    log_h = math.log(spec.h)
    LA, LB = spec.M.log_values, spec.beta_weights.log_values

    def g(X):
        out = np.zeros(X.shape[:-1])
        absX = np.abs(X)
        for a in alphas:
            d = np.abs(derivative_base(f, a, X, step))
            for b in betas:
                w = math.exp((a.order + b.order) * log_h - LA[a.order] - LB[b.order])
                mono = np.prod(absX ** np.asarray(b, dtype=float), axis=-1)
                out = np.maximum(out, w * mono * d)
        return out

    sup, arg, flag = sampled_sup(g, box, f.dim)
    return _finish(f, sup, arg, flag)


# -- growth reports -----------------------------------------------------------


@dataclass
class GrowthReport:
    eps: tuple
    log_values: tuple
    fitted_order: float
    fit_r2: float
    verdict: str
    order: int | None = None
    boundary_flag: bool = False
    q: int | None = None
    diagnostics: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def seminorm_values(self) -> list:
        return [(e, math.exp(v) if v < 709 else math.inf) for e, v in zip(self.eps, self.log_values)]

    @property
    def is_moderate(self) -> bool:
        return self.verdict.startswith("moderate")

    @property
    def is_negligible(self) -> bool:
        return self.verdict == "negligible"

    def to_dict(self) -> dict:
        out = {
            "seminorm": [[e, v] for e, v in self.seminorm_values],
            "log_seminorm": [[e, v] for e, v in zip(self.eps, self.log_values)],
            "slope": self.fitted_order,
            "r2": self.fit_r2,
            "verdict": self.verdict,
            "q": self.q,
            "boundary_flag": self.boundary_flag,
            "diagnostics": list(self.diagnostics),
        }
        if self.details:
            out["details"] = self.details
        return out


def _window(n: int) -> slice:
    return slice(n // 2, n)


def _fit(eps, log_values):
    """Least squares of log value on log(1/eps) over the finest half."""
    eps = np.asarray(eps)[_window(len(eps))]
    y = np.asarray(log_values)[_window(len(log_values))]
    ok = np.isfinite(y)
    if ok.sum() < 2:
        return math.nan, math.nan, math.nan
    x = np.log(1.0 / eps[ok])
    y = y[ok]
    slope, icept = np.polyfit(x, y, 1)
    resid = y - (slope * x + icept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    ss_res = float(np.sum(resid**2))
    r2 = 1.0 if ss_tot <= 1e-24 else max(0.0, 1.0 - ss_res / ss_tot)
    return float(slope), r2, float(np.max(np.abs(resid)))


def _nonincreasing_to_zero(r: np.ndarray) -> bool:
    if np.all(r == -np.inf):
        return True
    with np.errstate(invalid="ignore"):
        steps = np.diff(r)
    steps = np.where(np.isnan(steps), 0.0, steps)
    scale = 1e-12 * max(1.0, float(np.max(np.abs(r[np.isfinite(r)])))) if np.any(np.isfinite(r)) else 0.0
    return bool(np.all(steps <= scale) and (r[-1] < r[0] or r[-1] == -np.inf))


def _is_negligible(eps, log_values, p_max: int) -> bool:
    w = _window(len(eps))
    le = np.log(np.asarray(eps)[w])
    lv = np.asarray(log_values)[w]
    return all(_nonincreasing_to_zero(lv - p * le) for p in range(p_max + 1))


def growth_report(
    eps,
    log_values,
    *,
    boundary_flag: bool = False,
    p_max: int = P_MAX,
    slope_tolerance: float = SLOPE_TOLERANCE,
    r2_threshold: float = R2_THRESHOLD,
) -> GrowthReport:
    """Classify a sampled seminorm series as moderate(n), negligible, neither or inconclusive."""
    eps = tuple(float(e) for e in eps)
    log_values = tuple(float(v) for v in log_values)
    lv = np.asarray(log_values)
    slope, r2, resid = _fit(eps, lv)
    report = GrowthReport(eps, log_values, slope, r2, "inconclusive", boundary_flag=boundary_flag)
    if np.any(np.isnan(lv)) or np.any(lv == np.inf):
        report.verdict = "neither"
        report.diagnostics.append("seminorm is infinite or undefined at some eps")
        return report
    if _is_negligible(eps, lv, p_max):
        report.verdict = "negligible"
        report.diagnostics.append(f"value/eps^p decreases along the finest half for all p <= {p_max}")
        return report
    if math.isnan(slope):
        report.diagnostics.append("fewer than two nonzero values in the fit window")
        return report
    if r2 >= r2_threshold or resid <= FLAT_RESIDUAL:
        n = max(0, math.ceil(slope - slope_tolerance))
        report.order = n
        report.verdict = f"moderate({n})"
    else:
        report.diagnostics.append(f"poor power-law fit (r2={r2:.3f})")
    return report


def _mu_logs(net: FunctionNet, q: int, l: int, box: SamplingBox, step=None):
    logs, flags = [], []
    for eps, f in net.items():
        res = mu_seminorm(f, MuSpec(q, l), box, step)
        logs.append(res.log_value)
        flags.append(res.boundary_flag)
    return logs, flags


def classify_power_growth(
    net: FunctionNet,
    spec: MuSpec,
    box: SamplingBox | None = None,
    p_max: int = P_MAX,
    **kwargs,
) -> GrowthReport:
    """Growth of ``mu_{q,l}(f_eps)`` as eps -> 0."""
    box = box or SamplingBox()
    logs, flags = _mu_logs(net, spec.q, spec.l, box)
    report = growth_report(net.grid, logs, boundary_flag=any(flags), p_max=p_max, **kwargs)
    report.q = spec.q
    if report.boundary_flag:
        report.diagnostics.append("sampled sup attained on the outer shell of the box")
    return report


def classify_tempered(
    net: FunctionNet,
    l: int = 0,
    box: SamplingBox | None = None,
    p_max: int = P_MAX,
    q_max: int = Q_MAX,
    **kwargs,
) -> GrowthReport:
    """Smallest ``q`` for which ``mu_{-q,l}(f_eps)`` is moderate (or negligible) with an interior sup.

    The chosen weight exponent is returned in ``report.q``.  If no
    ``q <= q_max`` works the verdict is ``neither``.
    """
    box = box or SamplingBox()
    any_flag = False
    last = None
    for q in range(q_max + 1):
        report = classify_power_growth(net, MuSpec(-q, l), box, p_max, **kwargs)
        report.q = q
        last = report
        any_flag |= report.boundary_flag
        if (report.is_moderate or report.is_negligible) and not report.boundary_flag:
            return report
    last.verdict = "neither"
    last.order = None
    last.boundary_flag = any_flag
    last.diagnostics.append(f"no weight (1+|x|)^-q with q <= {q_max} gives an interior, moderate sup")
    return last


def _bounded_above(d: np.ndarray) -> bool:
    """Finite proxy for ``d(eps) = O(1)``: the finest half sets no new maximum."""
    if np.any(np.isnan(d)) or np.any(d == np.inf):
        return False
    half = len(d) // 2
    fine = d[half:]
    if np.all(fine == -np.inf):
        return True
    coarse_max = float(np.max(d[:half]))
    tol = 1e-9 * max(1.0, abs(coarse_max)) if np.isfinite(coarse_max) else 0.0
    return bool(np.max(fine) <= coarse_max + tol)


def classify_ultra(
    net: FunctionNet,
    spec: NuSpec,
    N: WeightSequence,
    kind: str = "roumieu",
    box: SamplingBox | None = None,
    h_values=None,
    k_values=(0.25, 0.5, 1.0, 2.0, 4.0, 8.0),
    p_max: int = P_MAX,
) -> GrowthReport:
    """Membership in the Roumieu or Beurling exponential classes and their ideals.

    For every tested ``h`` and ``k``, checks that ``log nu_h(f_eps) - N*(k/eps)``
    (class) or ``log nu_h(f_eps) + N*(k/eps)`` (ideal) stays bounded above as
    eps decreases.  Roumieu: class if some ``(h, k)`` passes, ideal if some ``h``
    passes for every ``k``.  Beurling: class if every ``h`` has a passing ``k``,
    ideal if every ``(h, k)`` passes.
    """
    kind = kind.lower()
    if kind not in ("roumieu", "beurling"):
        raise ValueError("kind must be 'roumieu' or 'beurling'")
    box = box or SamplingBox()
    h_values = tuple(h_values) if h_values is not None else tuple(spec.h * s for s in (0.25, 0.5, 1.0, 2.0, 4.0))
    k_values = tuple(k_values)
    eps = net.grid.as_array()
    log_nu = np.empty((len(h_values), len(eps)))
    flag = False
    for i, h in enumerate(h_values):
        sub = NuSpec(h, spec.M, spec.M_weight, spec.cap)
        for j, (_, f) in enumerate(net.items()):
            res = nu_seminorm(f, sub, box)
            log_nu[i, j] = res.log_value
            flag |= res.boundary_flag
    class_pass = np.zeros((len(h_values), len(k_values)), dtype=bool)
    ideal_pass = np.zeros_like(class_pass)
    truncated = False
    for b, k in enumerate(k_values):
        bound = growth_function(N, k / eps)
        truncated |= bound.truncated
        for a in range(len(h_values)):
            class_pass[a, b] = _bounded_above(log_nu[a] - bound.value)
            ideal_pass[a, b] = _bounded_above(log_nu[a] + bound.value)
    if kind == "roumieu":
        in_class = bool(class_pass.any())
        in_ideal = bool(ideal_pass.all(axis=1).any())
    else:
        in_class = bool(class_pass.any(axis=1).all())
        in_ideal = bool(ideal_pass.all())
    ref = h_values.index(spec.h) if spec.h in h_values else 0
    report = growth_report(eps, log_nu[ref], boundary_flag=flag, p_max=p_max)
    report.order = None
    if np.any(~np.isfinite(log_nu) & (log_nu != -np.inf)):
        report.verdict = "neither"
        report.diagnostics.append("nu seminorm infinite at some eps: not of exponential type")
    elif in_ideal:
        report.verdict = "negligible"
    elif in_class:
        report.verdict = "moderate"
    else:
        report.verdict = "neither"
    if truncated:
        report.diagnostics.append("N*(k/eps) truncated at the last stored weight index")
    report.details = {
        "kind": kind,
        "h_values": list(h_values),
        "k_values": list(k_values),
        "class_pass": class_pass.tolist(),
        "ideal_pass": ideal_pass.tolist(),
        "in_class": in_class,
        "in_ideal": in_ideal,
        "truncated": truncated,
    }
    return report


def classify_constant(net: GeneralizedConstantNet, p_max: int = P_MAX, **kwargs) -> GrowthReport:
    """Moderate/negligible test for a net of generalized constants ``(C_eps)``."""
    return growth_report(net.grid, net.log_abs, p_max=p_max, **kwargs)
