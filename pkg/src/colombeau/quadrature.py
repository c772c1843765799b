"""Gauss-Hermite rules, Gaussian-damped integrals over R^n, and box integrals."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
from numpy.polynomial.hermite import hermgauss
from scipy.integrate import simpson
from scipy.special import roots_hermite

from .core import ColombeauError, DomainError, SamplingBox

__all__ = [
    "QuadratureRule",
    "QuadratureResult",
    "QuadratureEvaluationError",
    "BoundaryWarning",
    "gauss_hermite",
    "damped_rule",
    "integrate_damped",
    "integrate_box",
]

MAX_NODES = 512


class QuadratureEvaluationError(ColombeauError, FloatingPointError):
    pass


class BoundaryWarning(UserWarning):
    """The integrand has not decayed at the edge of the integration box."""


@dataclass(frozen=True)
class QuadratureRule:
    nodes: np.ndarray
    weights: np.ndarray
    kind: str = "gauss_hermite"

    def __len__(self):
        return len(self.nodes)


@dataclass(frozen=True)
class QuadratureResult:
    value: float | np.ndarray
    error_estimate: float
    nodes: int
    boundary_warning: bool = False

    def __float__(self):
        return float(self.value)


@lru_cache(maxsize=64)
def _gh(m: int):
    # numpy's rule is slightly more accurate but its weights overflow past ~350 nodes
    if m <= 256:
        t, w = hermgauss(m)
    else:
        t, w = roots_hermite(m)
    t.setflags(write=False)
    w.setflags(write=False)
    return t, w


def gauss_hermite(m: int) -> QuadratureRule:
    """Nodes and weights for ``int f(z) exp(-z^2) dz``, exact up to degree ``2m - 1``."""
    if not 1 <= int(m) <= MAX_NODES:
        raise DomainError(f"node count must be in [1, {MAX_NODES}], got {m}")
    t, w = _gh(int(m))
    return QuadratureRule(t, w, "gauss_hermite")


def damped_rule(gamma: float, m: int, n: int = 1, scale: float | Sequence[float] | None = None):
    """Tensor nodes ``Y`` (shape ``(m**n, n)``) and weights for ``int f(y) exp(-gamma |y|^2) dy``.

    With ``scale`` = ``beta_i`` per axis, the rule integrates exactly when
    ``f(y) exp(-gamma |y|^2)`` is a polynomial times ``exp(-sum beta_i y_i^2)``;
    the default ``beta = gamma`` is the plain substitution ``y = t / sqrt(gamma)``.
    """
    if not gamma > 0:
        raise DomainError(f"damping rate must be positive, got {gamma}")
    if n not in (1, 2):
        raise DomainError("only n = 1 or 2 is supported")
    betas = [gamma] * n if scale is None else ([float(scale)] * n if np.isscalar(scale) else list(scale))
    if len(betas) != n or any(not b > 0 for b in betas):
        raise DomainError(f"quadrature scales must be positive, got {betas}")
    t, w = _gh(int(m))
    with np.errstate(divide="ignore"):
        logw = np.log(w)
    axes_nodes, axes_weights = [], []
    for beta in betas:
        axes_nodes.append(t / math.sqrt(beta))
        # w * exp(t^2 (1 - gamma/beta)) / sqrt(beta), in logs to avoid 0 * inf
        axes_weights.append(np.exp(logw + t**2 * (1.0 - gamma / beta) - 0.5 * math.log(beta)))
    if n == 1:
        return axes_nodes[0][:, None], axes_weights[0]
    Y = np.stack(np.meshgrid(*axes_nodes, indexing="ij"), axis=-1).reshape(-1, n)
    W = np.multiply.outer(*axes_weights).ravel()
    return Y, W


def _damped_sum(f, gamma, m, n, scale):
    Y, W = damped_rule(gamma, m, n, scale)
    values = np.asarray(f(Y), dtype=float)
    if not np.all(np.isfinite(values)):
        bad = np.argwhere(~np.isfinite(values.reshape(-1, len(W))))[0]
        raise QuadratureEvaluationError(f"non-finite integrand at node {Y[bad[-1]].tolist()}")
    return values @ W


def integrate_damped(
    f: Callable[[np.ndarray], np.ndarray],
    gamma: float,
    m: int = 64,
    n: int = 1,
    scale: float | Sequence[float] | None = None,
    estimate_error: bool = True,
) -> QuadratureResult:
    """``int_{R^n} f(y) exp(-gamma |y|^2) dy`` by scaled tensor Gauss-Hermite.

    ``f`` receives nodes of shape ``(N, n)`` and returns shape ``(..., N)``;
    vector-valued integrands are integrated along the last axis.  The error
    estimate is the change under doubling the node count.
    """
    value = _damped_sum(f, gamma, m, n, scale)
    err = float("nan")
    if estimate_error:
        fine = _damped_sum(f, gamma, min(2 * m, MAX_NODES), n, scale)
        err = float(np.max(np.abs(fine - value)))
    value = float(value) if np.ndim(value) == 0 else value
    return QuadratureResult(value, err, m)


def integrate_box(
    f: Callable[[np.ndarray], np.ndarray],
    box: SamplingBox,
    m: int = 4097,
    decay_tol: float = 1e-12,
) -> QuadratureResult:
    """Composite Simpson over ``[-R, R]`` with an ``m``-doubling error estimate.

    ``f`` receives the 1-d node array and returns shape ``(..., m)``.  A
    :class:`BoundaryWarning` is issued if the integrand is not below
    ``decay_tol`` (relative to its peak) at either end.
    """
    m = int(m) | 1
    R = box.half_width
    x = np.linspace(-R, R, m)
    values = np.asarray(f(x), dtype=float)
    coarse = simpson(values, x=x, axis=-1)
    xf = np.linspace(-R, R, 2 * m - 1)
    fine = simpson(np.asarray(f(xf), dtype=float), x=xf, axis=-1)
    peak = max(1.0, float(np.max(np.abs(values))))
    edge = float(np.max(np.abs(values[..., [0, -1]])))
    boundary = edge > decay_tol * peak
    if boundary:
        warnings.warn(f"integrand is {edge:.3g} at |x| = {R:g}", BoundaryWarning, stacklevel=2)
    err = float(np.max(np.abs(fine - coarse)))
    fine = float(fine) if np.ndim(fine) == 0 else fine
    return QuadratureResult(fine, err, 2 * m - 1, boundary)
