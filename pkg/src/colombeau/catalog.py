"""Named families of nets and kernels used by scenario files.

Each entry is ``{"family": name, "params": {...}}``.  Unknown families or
parameters raise :class:`ConfigError` naming the offending key.
"""
from __future__ import annotations

import math

import numpy as np

from .core import (
    ColombeauError,
    EpsilonGrid,
    FunctionNet,
    GaussianPolynomial,
    ScalarField,
    gaussian,
    monomial,
    radial_polynomial,
    tensor_product,
)
from .hermite import HermiteExpansion
from .operators import GeneralizedOperator, KernelNet

__all__ = ["ConfigError", "NET_FAMILIES", "KERNEL_FAMILIES", "make_field", "make_net", "make_kernel", "make_operator"]


class ConfigError(ColombeauError, ValueError):
    pass


def _with_log_scale(f: ScalarField, extra: float) -> ScalarField:
    if isinstance(f, GaussianPolynomial):
        return GaussianPolynomial(f.terms, f.dim, log_scale=f.log_scale + extra, name=f.name)
    return ScalarField(
        f.dim,
        f.base,
        f.base_derivative if f.analytic else None,
        log_scale=f.log_scale + extra,
        gaussian_rate=f.gaussian_rate,
        max_order=f.max_order,
        name=f.name,
    )


def _hermite_series(params) -> ScalarField:
    if "unit" in params:
        return HermiteExpansion.unit(int(params["unit"])).field()
    return HermiteExpansion(np.asarray(params["coefficients"], dtype=float)).field()


# family -> (allowed params, builder(eps, params) -> field)
NET_FAMILIES = {
    "gaussian": (
        {"dim", "rate", "amplitude", "power"},
        lambda eps, p: _with_log_scale(
            gaussian(p.get("dim", 1), p.get("rate", 1.0), p.get("amplitude", 1.0)),
            p.get("power", 0.0) * math.log(1 / eps),
        ),
    ),
    "mollifier": (
        {"dim", "amplitude"},
        lambda eps, p: gaussian(
            p.get("dim", 1), 1.0 / eps**2, p.get("amplitude", 1.0) * (eps * math.sqrt(math.pi)) ** -p.get("dim", 1)
        ),
    ),
    "polynomial": (
        {"dim", "coefficients", "power"},
        lambda eps, p: _with_log_scale(
            radial_polynomial(p.get("coefficients", [1.0]), p.get("dim", 1)),
            p.get("power", 0.0) * math.log(1 / eps),
        ),
    ),
    "power_net": (
        {"order", "base"},
        lambda eps, p: _with_log_scale(make_field(p.get("base", {"family": "gaussian"}), eps), p["order"] * math.log(1 / eps)),
    ),
    "negligible_net": (
        {"rate", "base"},
        lambda eps, p: _with_log_scale(make_field(p.get("base", {"family": "gaussian"}), eps), -p.get("rate", 1.0) / eps),
    ),
    "hermite_series": ({"unit", "coefficients"}, lambda eps, p: _hermite_series(p)),
}


def _kernel_gaussian(eps, p):
    n = p.get("n", 1)
    rates = [p.get("a_x", 1.0)] * n + [p.get("a_y", 1.0)] * n
    return gaussian(2 * n, rates, p.get("amplitude", 1.0))


def _kernel_monomial(eps, p):
    px, py = p.get("px", 2), p.get("py", 2)
    px = [px] if np.isscalar(px) else list(px)
    py = [py] if np.isscalar(py) else list(py)
    if len(px) != len(py):
        raise ConfigError("monomial_kernel: px and py must have the same length")
    return monomial(px + py, p.get("amplitude", 1.0))


def _kernel_rank_one(eps, p):
    f = HermiteExpansion.unit(int(p.get("i", 0))).field()
    g = HermiteExpansion.unit(int(p.get("j", 0))).field()
    return tensor_product(f, g).scaled(p.get("amplitude", 1.0))


KERNEL_FAMILIES = {
    "gaussian_kernel": ({"n", "a_x", "a_y", "amplitude"}, _kernel_gaussian),
    "monomial_kernel": ({"px", "py", "amplitude"}, _kernel_monomial),
    "rank_one_kernel": ({"i", "j", "amplitude"}, _kernel_rank_one),
}


def _lookup(entry, table, what):
    if not isinstance(entry, dict) or "family" not in entry:
        raise ConfigError(f"{what} entry must be an object with a 'family' key")
    name = entry["family"]
    if name not in table:
        raise ConfigError(f"unknown {what} family {name!r}; expected one of {sorted(table)}")
    allowed, builder = table[name]
    params = dict(entry.get("params", {}))
    extra = set(params) - allowed
    if extra:
        raise ConfigError(f"{name}: unknown parameter(s) {sorted(extra)}")
    return builder, params


def _build(name, builder, eps, params):
    try:
        return builder(eps, params)
    except KeyError as exc:
        raise ConfigError(f"{name}: missing parameter {exc.args[0]!r}") from None
    except ConfigError:
        raise
    except (TypeError, ValueError, ColombeauError) as exc:
        raise ConfigError(f"{name}: invalid parameters ({exc})") from None


def make_field(entry: dict, eps: float) -> ScalarField:
    builder, params = _lookup(entry, NET_FAMILIES, "net")
    return _build(entry["family"], builder, eps, params)


def make_net(entry: dict, grid: EpsilonGrid) -> FunctionNet:
    return FunctionNet(grid, [make_field(entry, eps) for eps in grid])


def make_kernel(entry: dict, grid: EpsilonGrid) -> KernelNet:
    builder, params = _lookup(entry, KERNEL_FAMILIES, "kernel")
    kernels = [_build(entry["family"], builder, eps, params) for eps in grid]
    return KernelNet(grid, kernels, kernels[0].dim // 2)


def make_operator(entry: dict, grid: EpsilonGrid, nodes: int = 64) -> GeneralizedOperator:
    return GeneralizedOperator(make_kernel(entry, grid), nodes)
