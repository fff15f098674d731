"""Poisson-Hermite semigroup and Gaussian Bessel potentials.

P_t f = pi^{-1/2} int_0^inf u^{-1/2} e^{-u} T_{t^2/4u} f du     (multiplier e^{-t sqrt k})
J_beta f = Gamma(beta)^{-1} int_0^inf s^{beta-1} e^{-s} P_s f ds  (multiplier (1 + sqrt k)^{-beta})

Both integrals are discretized with Gauss-Laguerre rules whose weight absorbs
the power and the exponential. For P_t the integrand e^{-k t^2/4u} is flat
but not analytic at u = 0, so the Laguerre rule converges only algebraically
there; ``poisson_discrepancy`` measures the gap against the multiplier.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .hermite import HermiteExpansion, eval_expansion
from .quadrature import MAX_ORDER, QuadratureRule, gauss_laguerre_rule
from .semigroup import _as_function, _points, ou_quadrature, time_convert

DEFAULT_LAGUERRE = 64
DEFAULT_TOL = 1e-6
S_CAP = 1.0 - 2.0**-52


@dataclass(frozen=True)
class SubordinationRule:
    """A Gauss-Laguerre rule with alpha = -1/2 (Poisson) or beta - 1 (Bessel)."""

    laguerre: QuadratureRule
    kind: str
    beta: float | None = None

    @property
    def n(self) -> int:
        return self.laguerre.order

    @property
    def nodes(self) -> np.ndarray:
        return self.laguerre.nodes

    @property
    def normalized_weights(self) -> np.ndarray:
        """Weights rescaled to sum to one (divided by Gamma(alpha + 1))."""
        return self.laguerre.weights / math.exp(gammaln(self.laguerre.alpha + 1.0))


def poisson_rule(n: int = DEFAULT_LAGUERRE) -> SubordinationRule:
    return SubordinationRule(gauss_laguerre_rule(n, -0.5), "poisson")


def bessel_rule(beta: float, n: int = DEFAULT_LAGUERRE) -> SubordinationRule:
    _check_beta(beta)
    return SubordinationRule(gauss_laguerre_rule(n, beta - 1.0), "bessel", float(beta))


def _check_t(t: float) -> None:
    if not (t > 0 and math.isfinite(t)):
        raise ValueError(f"Poisson time must be positive, got {t}")


def _check_beta(beta: float) -> None:
    if not (beta > 0 and math.isfinite(beta)):
        raise ValueError(f"beta must be positive, got {beta}")


# ---------------------------------------------------------------------------
# multipliers


def poisson_multiplier(k, t: float):
    return np.exp(-t * np.sqrt(k))


def bessel_multiplier(k, beta: float):
    return (1.0 + np.sqrt(k)) ** (-beta)


def poisson_multiplier_quadrature(k, t: float, n: int = DEFAULT_LAGUERRE):
    """pi^{-1/2} sum_i w_i e^{-k t^2 / 4 u_i}: the Bochner rule applied to eigenvalue k."""
    _check_t(t)
    rule = poisson_rule(n)
    k = np.asarray(k, dtype=float)
    vals = np.exp(-np.multiply.outer(k, t * t / (4.0 * rule.nodes)))
    out = vals @ rule.normalized_weights
    return float(out) if out.ndim == 0 else out


def bessel_multiplier_quadrature(k, beta: float, n: int = DEFAULT_LAGUERRE):
    """Gamma(beta)^{-1} sum_i w_i e^{-s_i sqrt k}, exact spectral P_s inside."""
    rule = bessel_rule(beta, n)
    k = np.asarray(k, dtype=float)
    vals = np.exp(-np.multiply.outer(np.sqrt(k), rule.nodes))
    out = vals @ rule.normalized_weights
    return float(out) if out.ndim == 0 else out


def _relative_gap(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.max(np.abs(a - b) / np.maximum(np.abs(b), np.finfo(float).tiny)))


def poisson_discrepancy(t: float, k_max: int, n: int = DEFAULT_LAGUERRE) -> float:
    """Worst relative gap between the quadrature and exact multipliers for k <= k_max."""
    k = np.arange(k_max + 1)
    return _relative_gap(poisson_multiplier_quadrature(k, t, n), poisson_multiplier(k, t))


def bessel_discrepancy(beta: float, k_max: int, n: int = DEFAULT_LAGUERRE) -> float:
    k = np.arange(k_max + 1)
    return _relative_gap(bessel_multiplier_quadrature(k, beta, n), bessel_multiplier(k, beta))


def _doubling(gap, n: int, tol: float, auto_double: bool) -> int:
    """Smallest n (doubling up to MAX_ORDER) whose gap(n) <= tol."""
    if not auto_double:
        return n
    while gap(n) > tol and 2 * n <= MAX_ORDER:
        n *= 2
    if gap(n) > tol:
        warnings.warn(f"subordination rule still off by {gap(n):.3g} > {tol:g} at {n} nodes", RuntimeWarning)
    return n


# ---------------------------------------------------------------------------
# operators on expansions


def poisson_expansion(e: HermiteExpansion, t: float, mode: str = "spectral",
                      n_nodes: int = DEFAULT_LAGUERRE) -> HermiteExpansion:
    _check_t(t)
    if mode == "spectral":
        return e.map_degrees(lambda k: math.exp(-t * math.sqrt(k)))
    if mode == "quadrature":
        return e.map_degrees(lambda k: poisson_multiplier_quadrature(k, t, n_nodes))
    raise ValueError(f"unknown mode {mode!r}")


def bessel_expansion(e: HermiteExpansion, beta: float, mode: str = "spectral",
                     n_nodes: int = DEFAULT_LAGUERRE) -> HermiteExpansion:
    _check_beta(beta)
    if mode == "spectral":
        return e.map_degrees(lambda k: (1.0 + math.sqrt(k)) ** (-beta))
    if mode == "quadrature":
        return e.map_degrees(lambda k: bessel_multiplier_quadrature(k, beta, n_nodes))
    raise ValueError(f"unknown mode {mode!r}")


# ---------------------------------------------------------------------------
# pointwise application


def _poisson_callable(f, t: float, pts: np.ndarray, n: int, inner_nodes: int) -> np.ndarray:
    rule = poisson_rule(n)
    out = np.zeros(len(pts))
    for u, w in zip(rule.nodes, rule.normalized_weights):
        if w == 0.0:
            continue
        # the kernel-centred rule stays positive and accurate for smooth f even
        # at the tiny OU times of large u; huge OU times round s to 1, so cap it
        s = min(time_convert(t * t / (4.0 * u)).s, S_CAP)
        out += w * ou_quadrature(f, s, pts, inner_nodes)
    return out


def poisson_apply(f, t: float, x, mode: str = "auto", n_nodes: int = DEFAULT_LAGUERRE,
                  tol: float = DEFAULT_TOL, auto_double: bool = True, inner_nodes: int = 40):
    """P_t f(x).

    "spectral" needs a HermiteExpansion. "quadrature" applies the Laguerre
    rule over u with spectral T inside for expansions, or kernel quadrature
    for plain callables. For expansions the node count doubles (up to 256)
    while the quadrature multipliers differ from e^{-t sqrt k} by more than tol.
    """
    _check_t(t)
    is_exp = isinstance(f, HermiteExpansion)
    if mode == "auto":
        mode = "spectral" if is_exp else "quadrature"
    pts, single = _points(x, f.dim if is_exp else None)
    if mode == "spectral":
        if not is_exp:
            raise TypeError("spectral mode needs a HermiteExpansion")
        out = eval_expansion(poisson_expansion(f, t), pts)
    elif mode == "quadrature":
        if is_exp:
            n = _doubling(lambda m: poisson_discrepancy(t, f.max_order, m), n_nodes, tol, auto_double)
            out = eval_expansion(poisson_expansion(f, t, "quadrature", n), pts)
        else:
            out = _poisson_callable(_as_function(f), t, pts, n_nodes, inner_nodes)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return float(out[0]) if single else out


def bessel_apply(f, beta: float, x, mode: str = "auto", n_nodes: int = DEFAULT_LAGUERRE,
                 tol: float = DEFAULT_TOL, auto_double: bool = True, inner_nodes: int = 40):
    """J_beta f(x); quadrature composes a Laguerre rule over s with P_s."""
    _check_beta(beta)
    is_exp = isinstance(f, HermiteExpansion)
    if mode == "auto":
        mode = "spectral" if is_exp else "quadrature"
    pts, single = _points(x, f.dim if is_exp else None)
    if mode == "spectral":
        if not is_exp:
            raise TypeError("spectral mode needs a HermiteExpansion")
        out = eval_expansion(bessel_expansion(f, beta), pts)
    elif mode == "quadrature":
        if is_exp:
            n = _doubling(lambda m: bessel_discrepancy(beta, f.max_order, m), n_nodes, tol, auto_double)
            out = eval_expansion(bessel_expansion(f, beta, "quadrature", n), pts)
        else:
            rule = bessel_rule(beta, n_nodes)
            g = _as_function(f)
            out = np.zeros(len(pts))
            for s, w in zip(rule.nodes, rule.normalized_weights):
                if w == 0.0:
                    continue
                out += w * _poisson_callable(g, s, pts, n_nodes, inner_nodes)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return float(out[0]) if single else out
