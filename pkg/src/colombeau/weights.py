"""Weight sequences M_p, the conditions (M.1)-(M.3), and associated functions.

Sequences are stored as ``log M_p`` so that Gevrey sequences such as
``(p!)^2`` stay finite far beyond the double-precision range.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple

import numpy as np
from scipy.special import gammaln

from .core import DomainError

__all__ = [
    "WeightSequence",
    "ConditionReport",
    "AssociatedValue",
    "gevrey",
    "check_conditions",
    "associated_function",
    "growth_function",
]

_LOG_TOL = 1e-9


@dataclass(frozen=True)
class WeightSequence:
    log_values: np.ndarray
    name: str = ""

    def __post_init__(self):
        lv = np.asarray(self.log_values, dtype=float)
        if lv.ndim != 1 or len(lv) < 17:
            raise DomainError("a weight sequence needs log M_p for p = 0..P_max with P_max >= 16")
        if not np.all(np.isfinite(lv)):
            raise DomainError("weight sequence entries must be finite")
        if abs(lv[0]) > 1e-14:
            raise DomainError("M_0 must equal 1")
        lv = lv.copy()
        lv[0] = 0.0
        lv.setflags(write=False)
        object.__setattr__(self, "log_values", lv)

    @property
    def p_max(self) -> int:
        return len(self.log_values) - 1

    def __getitem__(self, p):
        return math.exp(self.log_values[p])

    @classmethod
    def from_values(cls, values, name: str = "") -> "WeightSequence":
        values = np.asarray(values, dtype=float)
        if np.any(values <= 0):
            raise DomainError("weights must be positive")
        return cls(np.log(values), name)

    def to_dict(self) -> dict:
        return {"name": self.name, "log_values": [float(v) for v in self.log_values]}

    @classmethod
    def from_dict(cls, data: dict) -> "WeightSequence":
        return cls(np.asarray(data["log_values"], dtype=float), data.get("name", ""))

    @classmethod
    def from_json(cls, path) -> "WeightSequence":
        return cls.from_dict(json.loads(Path(path).read_text()))

    def divided_by_factorial(self) -> "WeightSequence":
        """The sequence ``M*_p = M_p / p!``."""
        p = np.arange(len(self.log_values))
        return WeightSequence(self.log_values - gammaln(p + 1), f"{self.name}/p!")


def gevrey(s: float, p_max: int = 64) -> WeightSequence:
    """``M_p = (p!)^s``."""
    if s < 1:
        raise DomainError(f"Gevrey order must be >= 1, got {s}")
    p = np.arange(p_max + 1)
    return WeightSequence(s * gammaln(p + 1), f"gevrey({s:g})")


class ConditionReport(NamedTuple):
    m1: bool
    m1_printed: bool
    m2: bool
    m2_c: float | None
    m2_H: float | None
    m3_partial_sum: float
    m3_converged: bool
    m3_limit_estimate: float
    m3_decay_exponent: float

    def to_dict(self) -> dict:
        return self._asdict()


def _m2_search(lv: np.ndarray, max_pow: int = 16):
    P = len(lv) - 1
    # worst split of each p: max_q log(M_p / (M_q M_{p-q}))
    worst = np.array([np.max(lv[p] - lv[: p + 1] - lv[p::-1]) for p in range(P + 1)])
    pp = np.arange(P + 1)
    for j in range(max_pow + 1):
        log_H = j * math.log(2.0)
        need = float(np.max(worst - pp * log_H))
        k = max(0, math.ceil(need / math.log(2.0) - _LOG_TOL))
        if k <= max_pow:
            return True, float(2**k), float(2**j)
    return False, None, None


def _m3_tail(lv: np.ndarray):
    terms = np.exp(lv[:-1] - lv[1:])
    partial = float(np.sum(terms))
    P = len(terms)
    start = max(1, (3 * P) // 4)
    p = np.arange(start, P + 1)
    slope = np.polyfit(np.log(p), np.log(terms[start - 1:]), 1)[0]
    exponent = float(-slope)
    if exponent > 1.05:
        last = terms[-1]
        # integral of the fitted power law from P to infinity, less half a term
        tail = last * P / (exponent - 1.0) - 0.5 * last
        return partial, True, float(partial + max(tail, 0.0)), exponent
    return partial, False, float("inf"), exponent


def check_conditions(M: WeightSequence) -> ConditionReport:
    """Check log-convexity (M.1), stability (M.2) and summability (M.3).

    (M.1) is tested as ``M_p^2 <= M_{p-1} M_{p+1}``; the variant
    ``M_p^2 <= M_{p-1}^2`` is reported alongside as ``m1_printed``.
    (M.2) searches powers of two for ``H`` (smallest first), then ``c``.
    (M.3) returns the partial sum and a power-law tail estimate; a fitted
    decay exponent at or below 1.05 is reported as divergent.
    """
    lv = M.log_values
    m1 = bool(np.all(2 * lv[1:-1] <= lv[:-2] + lv[2:] + _LOG_TOL))
    m1_printed = bool(np.all(2 * lv[1:] <= 2 * lv[:-1] + _LOG_TOL))
    m2, c, H = _m2_search(lv)
    partial, converged, limit, exponent = _m3_tail(lv)
    return ConditionReport(m1, m1_printed, m2, c, H, partial, converged, limit, exponent)


class AssociatedValue(NamedTuple):
    value: float | np.ndarray
    argmax: int | np.ndarray
    truncated: bool


def _associated(lv: np.ndarray, rho) -> AssociatedValue:
    rho = np.asarray(rho, dtype=float)
    if np.any(rho < 0):
        raise DomainError("rho must be nonnegative")
    p = np.arange(len(lv))
    with np.errstate(divide="ignore", invalid="ignore"):
        log_rho = np.log(rho)[..., None]
        table = np.where(p == 0, 0.0, p * log_rho) - lv
    table = np.where(np.isnan(table), -np.inf, table)
    arg = np.argmax(table, axis=-1)
    val = np.take_along_axis(table, arg[..., None], axis=-1)[..., 0]
    truncated = bool(np.any(arg == len(lv) - 1))
    if val.ndim == 0:
        return AssociatedValue(float(val), int(arg), truncated)
    return AssociatedValue(val, arg, truncated)


def associated_function(M: WeightSequence, rho) -> AssociatedValue:
    """``M(rho) = sup_p log(rho^p / M_p)`` by brute force over the stored range.

    ``truncated`` is set when the maximum sits at the last stored index, in
    which case the true supremum may be larger.  ``rho = 0`` gives 0.
    """
    return _associated(M.log_values, rho)


def growth_function(M: WeightSequence, rho) -> AssociatedValue:
    """``M*(rho)``: the associated function of ``M_p / p!``."""
    return _associated(M.divided_by_factorial().log_values, rho)
