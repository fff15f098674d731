"""Quadrature rules: Gauss-Hermite, Gauss-Laguerre, box trapezoid and polar ball rules.

Gauss rules are built with the Golub-Welsch eigenvalue method and then
polished: one Newton step on the nodes and Christoffel-sum weights from the
orthonormal three-term recurrence, which keeps the weights accurate for
large ``n`` where eigenvector components lose relative precision.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy.special import gammaln

MAX_ORDER = 256


class QuadratureError(ValueError):
    """Raised when an integrand is non-finite at a quadrature node."""


@dataclass(frozen=True)
class QuadratureRule:
    kind: str
    nodes: np.ndarray
    weights: np.ndarray
    alpha: float | None = None
    box_radius: float | None = None

    @property
    def order(self) -> int:
        return len(self.weights)

    @property
    def dim(self) -> int:
        return 1 if self.nodes.ndim == 1 else self.nodes.shape[1]


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=float)
    a.setflags(write=False)
    return a


def _check_order(n: int) -> None:
    if not (1 <= n <= MAX_ORDER):
        raise ValueError(f"rule order must lie in [1, {MAX_ORDER}], got {n}")


@lru_cache(maxsize=None)
def gauss_hermite_rule(n: int) -> QuadratureRule:
    """n-point rule for the weight e^{-x^2} on the real line."""
    _check_order(n)
    if n == 1:
        return QuadratureRule("gauss_hermite", _frozen([0.0]), _frozen([np.sqrt(np.pi)]))
    k = np.arange(1, n)
    jacobi = np.diag(np.sqrt(k / 2.0), 1) + np.diag(np.sqrt(k / 2.0), -1)
    x = np.linalg.eigvalsh(jacobi)

    # Newton polish on the orthonormal polynomial; h_n' = sqrt(2n) h_{n-1}
    table = _orthonormal_hermite(n, x)
    x = x - table[n] / (np.sqrt(2.0 * n) * table[n - 1])
    x = 0.5 * (x - x[::-1])

    table = _orthonormal_hermite(n - 1, x)
    w = np.sqrt(np.pi) / np.sum(table**2, axis=0)
    w = 0.5 * (w + w[::-1])
    return QuadratureRule("gauss_hermite", _frozen(x), _frozen(w))


def _orthonormal_hermite(n: int, x: np.ndarray) -> np.ndarray:
    # orthonormal w.r.t. e^{-x^2}/sqrt(pi); same recurrence as hermite.hermite_table
    out = np.empty((n + 1,) + np.shape(x))
    out[0] = 1.0
    if n >= 1:
        out[1] = np.sqrt(2.0) * x
    for j in range(1, n):
        out[j + 1] = (np.sqrt(2.0) * x * out[j] - np.sqrt(j) * out[j - 1]) / np.sqrt(j + 1)
    return out


def _orthonormal_laguerre(n: int, x: np.ndarray, alpha: float) -> np.ndarray:
    # orthonormal w.r.t. x^alpha e^{-x} / Gamma(alpha+1)
    out = np.empty((n + 1,) + np.shape(x))
    out[0] = 1.0
    if n >= 1:
        out[1] = (alpha + 1.0 - x) / np.sqrt(alpha + 1.0)
    for j in range(1, n):
        a = 2 * j + alpha + 1.0
        b_next = np.sqrt((j + 1) * (j + 1 + alpha))
        b_cur = np.sqrt(j * (j + alpha))
        out[j + 1] = ((a - x) * out[j] - b_cur * out[j - 1]) / b_next
    return out


@lru_cache(maxsize=None)
def gauss_laguerre_rule(n: int, alpha: float = 0.0) -> QuadratureRule:
    """n-point rule for the weight s^alpha e^{-s} on (0, inf); weights sum to Gamma(alpha+1)."""
    _check_order(n)
    if alpha <= -1.0:
        raise ValueError(f"alpha must exceed -1, got {alpha}")
    mu0 = np.exp(gammaln(alpha + 1.0))
    k = np.arange(n)
    diag = 2.0 * k + alpha + 1.0
    off = np.sqrt(k[1:] * (k[1:] + alpha))
    jacobi = np.diag(diag) + np.diag(off, 1) + np.diag(off, -1)
    x = np.linalg.eigvalsh(jacobi)
    if n > 1:
        # p_n' = (n p_n - sqrt(n(n+alpha)) p_{n-1}) / x for the orthonormal family
        table = _orthonormal_laguerre(n, x, alpha)
        deriv = (n * table[n] - np.sqrt(n * (n + alpha)) * table[n - 1]) / x
        x = x - table[n] / deriv
    with np.errstate(over="ignore"):
        table = _orthonormal_laguerre(n - 1, x, alpha)
        w = mu0 / np.sum(table**2, axis=0)
    return QuadratureRule("gauss_laguerre", _frozen(x), _frozen(w), alpha=float(alpha))


def trapezoid_box(radius: float, n: int, dim: int) -> QuadratureRule:
    """Tensor trapezoid rule on [-radius, radius]^dim with n points per axis."""
    if n < 2:
        raise ValueError("trapezoid rule needs at least two points per axis")
    x, h = np.linspace(-radius, radius, n, retstep=True)
    w = np.full(n, h)
    w[[0, -1]] = h / 2
    nodes, weights = _tensor(x, w, dim)
    return QuadratureRule("trapezoid_box", _frozen(nodes), _frozen(weights), box_radius=float(radius))


def _tensor(x: np.ndarray, w: np.ndarray, dim: int) -> tuple[np.ndarray, np.ndarray]:
    grids = np.meshgrid(*([x] * dim), indexing="ij")
    nodes = np.stack([g.ravel() for g in grids], axis=-1)
    wgrids = np.meshgrid(*([w] * dim), indexing="ij")
    weights = np.prod(np.stack([g.ravel() for g in wgrids], axis=-1), axis=-1)
    return nodes, weights


@lru_cache(maxsize=None)
def gaussian_tensor(n: int, dim: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes (n^dim, dim) and probability weights for integrals against gamma_d."""
    rule = gauss_hermite_rule(n)
    nodes, weights = _tensor(rule.nodes, rule.weights, dim)
    return _frozen(nodes), _frozen(weights * np.pi ** (-dim / 2))


def integrate_gaussian(f: Callable[[np.ndarray], np.ndarray], dim: int, rule: QuadratureRule) -> float:
    """Integral of f against the Gaussian probability measure pi^{-d/2} e^{-|x|^2} dx.

    ``f`` receives an array of points with shape (N, dim).
    """
    if rule.kind != "gauss_hermite":
        raise ValueError(f"integrate_gaussian needs a gauss_hermite rule, got {rule.kind}")
    nodes, weights = gaussian_tensor(rule.order, dim)
    values = np.asarray(f(nodes), dtype=float)
    check_finite(values, nodes)
    return float(weights @ values)


def check_finite(values: np.ndarray, nodes: np.ndarray) -> None:
    bad = ~np.isfinite(values)
    if np.any(bad):
        i = int(np.flatnonzero(bad)[0])
        raise QuadratureError(f"integrand is non-finite ({values[i]}) at node {nodes[i].tolist()}")


# ---------------------------------------------------------------------------
# Rules adapted to balls and annuli around a point, used for the local/global
# split and the Hardy-Littlewood averages.


def sphere_rule(dim: int, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Directions on S^{dim-1} and weights summing to the sphere's surface area."""
    if dim == 1:
        return np.array([[-1.0], [1.0]]), np.array([1.0, 1.0])
    if dim == 2:
        theta = 2 * np.pi * np.arange(n) / n
        return np.stack([np.cos(theta), np.sin(theta)], axis=-1), np.full(n, 2 * np.pi / n)
    if dim == 3:
        z, wz = np.polynomial.legendre.leggauss(n)
        m = 2 * n
        phi = 2 * np.pi * np.arange(m) / m
        zz, pp = np.meshgrid(z, phi, indexing="ij")
        rr = np.sqrt(1 - zz**2)
        dirs = np.stack([rr * np.cos(pp), rr * np.sin(pp), zz], axis=-1).reshape(-1, 3)
        w = np.outer(wz, np.full(m, 2 * np.pi / m)).ravel()
        return dirs, w
    raise ValueError(f"dimension {dim} not supported")


def radial_panels(r0: float, r1: float, width: float, per_panel: int = 10) -> tuple[np.ndarray, np.ndarray]:
    """Composite Gauss-Legendre nodes on [r0, r1] with panels no wider than ``width``."""
    if r1 <= r0:
        return np.empty(0), np.empty(0)
    npan = max(1, int(np.ceil((r1 - r0) / width)))
    edges = np.linspace(r0, r1, npan + 1)
    g, gw = np.polynomial.legendre.leggauss(per_panel)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    r = (mid[:, None] + half[:, None] * g[None, :]).ravel()
    w = (half[:, None] * gw[None, :]).ravel()
    return r, w


def annulus_rule(
    center: np.ndarray,
    r0: float,
    r1: float,
    *,
    radial_width: float,
    n_angular: int,
    per_panel: int = 10,
) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and Lebesgue weights for {r0 <= |y - center| <= r1}."""
    center = np.asarray(center, dtype=float)
    dim = center.shape[0]
    r, wr = radial_panels(r0, r1, radial_width, per_panel)
    dirs, wd = sphere_rule(dim, n_angular)
    nodes = center[None, None, :] + r[:, None, None] * dirs[None, :, :]
    weights = (wr * r ** (dim - 1))[:, None] * wd[None, :]
    return nodes.reshape(-1, dim), weights.ravel()
