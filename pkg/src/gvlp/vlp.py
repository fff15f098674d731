"""Variable-exponent Lebesgue spaces over the Gaussian and Lebesgue measures.

Every integral is a weighted sum over an ``IntegrationGrid``: tensor
Gauss-Hermite for gamma_d, a trapezoid box for dx. Norms come from
bisection on lambda -> rho(f / lambda), which is strictly decreasing for f != 0.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .covering import Ball, CoveringFamily
from .exponents import ExponentFunction, conjugate
from .hermite import HermiteExpansion, eval_expansion
from .quadrature import check_finite, gaussian_tensor, radial_panels, trapezoid_box

DEFAULT_TOL = 1e-8
MAX_BISECTIONS = 60
MAX_DOUBLINGS = 2000
HOLDER_K = 4.0
LEBESGUE_RADIUS = 10.0


class NormError(RuntimeError):
    """Raised when the Luxemburg bracket cannot be established."""


@dataclass(frozen=True)
class IntegrationGrid:
    nodes: np.ndarray
    weights: np.ndarray
    measure: str
    truncation_radius: float

    @property
    def dim(self) -> int:
        return self.nodes.shape[1]

    def restrict(self, mask: np.ndarray) -> "IntegrationGrid":
        return IntegrationGrid(self.nodes[mask], self.weights[mask], self.measure, self.truncation_radius)


def gaussian_grid(dim: int, n: int = 80) -> IntegrationGrid:
    """Tensor Gauss-Hermite grid; weights sum to one (probability measure gamma_d)."""
    nodes, weights = gaussian_tensor(n, dim)
    return IntegrationGrid(nodes, weights, "gaussian", float(np.max(np.abs(nodes))))


def gaussian_panel_grid(
    dim: int, breaks: Sequence[float] = (), radius: float = 9.0, width: float = 0.25, per_panel: int = 16
) -> IntegrationGrid:
    """Tensor composite Gauss-Legendre grid for gamma_d with panel edges at ``breaks``.

    Meant for integrands with jumps on coordinate hyperplanes (or at known
    radii in d = 1), where Gauss-Hermite converges slowly.
    """
    edges = np.unique(np.concatenate([[-radius, radius], [b for b in breaks if -radius < b < radius]]))
    xs, ws = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        r, w = radial_panels(a, b, width, per_panel)
        xs.append(r)
        ws.append(w)
    x = np.concatenate(xs)
    w = np.concatenate(ws) * np.exp(-x * x) / math.sqrt(math.pi)
    grids = np.meshgrid(*([x] * dim), indexing="ij")
    nodes = np.stack([g.ravel() for g in grids], axis=-1)
    weights = np.prod(np.stack([g.ravel() for g in np.meshgrid(*([w] * dim), indexing="ij")], -1), -1)
    return IntegrationGrid(nodes, weights, "gaussian", float(radius))


def lebesgue_grid(dim: int, radius: float = LEBESGUE_RADIUS, n: int | None = None) -> IntegrationGrid:
    """Trapezoid grid on [-radius, radius]^dim."""
    n = n or {1: 2001, 2: 401, 3: 81}[dim]
    rule = trapezoid_box(radius, n, dim)
    return IntegrationGrid(rule.nodes, rule.weights, "lebesgue", float(radius))


def default_grid(measure: str, dim: int, refine: int = 1) -> IntegrationGrid:
    if measure == "gaussian":
        return gaussian_grid(dim, 80 * refine)
    if measure == "lebesgue":
        n = {1: 2001, 2: 401, 3: 81}[dim]
        return lebesgue_grid(dim, n=(n - 1) * refine + 1)
    raise ValueError(f"unknown measure {measure!r}")


def evaluate(f, pts: np.ndarray) -> np.ndarray:
    """Values of a HermiteExpansion, a constant or a callable on (N, d) points."""
    if isinstance(f, HermiteExpansion):
        vals = eval_expansion(f, pts)
    elif np.isscalar(f):
        vals = np.full(len(pts), float(f))
    else:
        vals = np.asarray(f(pts), dtype=float).reshape(len(pts))
    check_finite(vals, pts)
    return vals


def _grid_for(measure: str, dim: int, grid: IntegrationGrid | None) -> IntegrationGrid:
    if grid is None:
        return default_grid(measure, dim)
    if grid.measure != measure:
        raise ValueError(f"grid measure {grid.measure} does not match {measure}")
    return grid


def _modular_sum(a: np.ndarray, pv: np.ndarray, w: np.ndarray, lam: float) -> float:
    """sum_i w_i (a_i / lam)^{p_i} for a >= 0."""
    with np.errstate(divide="ignore", over="ignore"):
        terms = np.where(a > 0, np.exp(pv * (np.log(np.where(a > 0, a, 1.0)) - math.log(lam))), 0.0)
    return float(w @ terms)


@dataclass(frozen=True)
class ModularValue:
    value: float
    measure: str
    truncation_radius: float


def modular(f, p: ExponentFunction, measure: str = "gaussian", grid: IntegrationGrid | None = None) -> ModularValue:
    """rho(f) = int |f(x)|^{p(x)} mu(dx) on the grid."""
    grid = _grid_for(measure, p.dim, grid)
    a = np.abs(evaluate(f, grid.nodes))
    value = _modular_sum(a, p(grid.nodes), grid.weights, 1.0)
    if not math.isfinite(value):
        raise NormError("modular is not finite on the grid")
    return ModularValue(value, measure, grid.truncation_radius)


@dataclass(frozen=True)
class NormResult:
    norm: float
    lambda_bracket: tuple[float, float]
    modular_at_norm: float
    iterations: int = 0

    @property
    def bracket_width(self) -> float:
        return self.lambda_bracket[1] - self.lambda_bracket[0]


def _luxemburg_arrays(a: np.ndarray, pv: np.ndarray, w: np.ndarray, tol: float) -> NormResult:
    if not (0 < tol <= 1e-2):
        raise ValueError(f"tol must lie in (0, 1e-2], got {tol}")
    if not np.any((a > 0) & (w > 0)):
        return NormResult(0.0, (0.0, 0.0), 0.0)
    rho = lambda lam: _modular_sum(a, pv, w, lam)
    hi = max(float(a.max()) * 1e-6, np.finfo(float).tiny)
    lo = 0.0
    for _ in range(MAX_DOUBLINGS):
        r = rho(hi)
        if not math.isfinite(r) and r != math.inf:
            raise NormError("modular evaluated to NaN while bracketing")
        if r <= 1.0:
            break
        lo, hi = hi, 2.0 * hi
    else:
        raise NormError("could not find lambda with rho(f / lambda) <= 1")
    it = 0
    # hi always satisfies rho(f/hi) <= 1; lo (if positive) has rho(f/lo) > 1
    while hi - lo > tol * hi and it < MAX_BISECTIONS:
        mid = 0.5 * (lo + hi)
        if rho(mid) <= 1.0:
            hi = mid
        else:
            lo = mid
        it += 1
    return NormResult(hi, (lo, hi), rho(hi), it)


def luxemburg_norm(
    f, p: ExponentFunction, measure: str = "gaussian", tol: float = DEFAULT_TOL, grid: IntegrationGrid | None = None
) -> NormResult:
    """inf{lambda > 0 : rho(f / lambda) <= 1}, returned as the upper end of the final bracket.

    The bracket satisfies hi - lo <= tol * hi, so rho(f / norm) <= 1 always.
    """
    grid = _grid_for(measure, p.dim, grid)
    a = np.abs(evaluate(f, grid.nodes))
    return _luxemburg_arrays(a, p(grid.nodes), grid.weights, tol)


def norm_equivalence_window(dim: int) -> tuple[float, float]:
    return 1.0, math.pi ** (dim / 2)


def norm_equivalence_report(
    f,
    p: ExponentFunction,
    tol: float = DEFAULT_TOL,
    gaussian: IntegrationGrid | None = None,
    lebesgue: IntegrationGrid | None = None,
) -> float:
    """||f e^{-|.|^2/p(.)}||_{p(.)} / ||f||_{p(.),gamma}; lies in [1, pi^{d/2}]."""
    lebesgue = _grid_for("lebesgue", p.dim, lebesgue)
    den = luxemburg_norm(f, p, "gaussian", tol, gaussian).norm
    if den == 0:
        raise ZeroDivisionError("f has zero Gaussian norm on the grid")
    y = lebesgue.nodes
    damped = np.abs(evaluate(f, y)) * np.exp(-np.sum(y * y, axis=-1) / p(y))
    num = _luxemburg_arrays(damped, p(y), lebesgue.weights, tol).norm
    return num / den


class HolderResult(NamedTuple):
    lhs: float
    rhs: float
    ratio: float

    @property
    def passed(self) -> bool:
        return self.lhs <= HOLDER_K * self.rhs


def holder_check(f, g, p: ExponentFunction, tol: float = DEFAULT_TOL, grid: IntegrationGrid | None = None) -> HolderResult:
    """int |f g| d gamma against ||f||_{p(.),gamma} ||g||_{p'(.),gamma}."""
    grid = _grid_for("gaussian", p.dim, grid)
    lhs = float(grid.weights @ np.abs(evaluate(f, grid.nodes) * evaluate(g, grid.nodes)))
    rhs = luxemburg_norm(f, p, "gaussian", tol, grid).norm * luxemburg_norm(g, conjugate(p), "gaussian", tol, grid).norm
    ratio = lhs / rhs if rhs > 0 else (0.0 if lhs == 0 else math.inf)
    return HolderResult(lhs, rhs, ratio)


class ClassGResult(NamedTuple):
    sum: float
    product: float
    ratio: float


def class_g_check(
    f,
    g,
    p: ExponentFunction,
    family: CoveringFamily | Sequence[Ball],
    tol: float = DEFAULT_TOL,
    grid: IntegrationGrid | None = None,
) -> ClassGResult:
    """sum_B ||f chi_B||_{p(.)} ||g chi_B||_{p'(.)} against ||f||_{p(.)} ||g||_{p'(.)} (Lebesgue norms)."""
    grid = _grid_for("lebesgue", p.dim, grid)
    balls = family.members("tilde") if isinstance(family, CoveringFamily) else list(family)
    q = conjugate(p)
    a, b = np.abs(evaluate(f, grid.nodes)), np.abs(evaluate(g, grid.nodes))
    pv, qv, w = p(grid.nodes), q(grid.nodes), grid.weights
    total = 0.0
    for ball in balls:
        m = ball.contains(grid.nodes)
        if not np.any(m):
            continue
        total += _luxemburg_arrays(a[m], pv[m], w[m], tol).norm * _luxemburg_arrays(b[m], qv[m], w[m], tol).norm
    product = _luxemburg_arrays(a, pv, w, tol).norm * _luxemburg_arrays(b, qv, w, tol).norm
    ratio = total / product if product > 0 else (0.0 if total == 0 else math.inf)
    return ClassGResult(total, product, ratio)


@dataclass(frozen=True)
class TruncationReport:
    """Terms of  int_E F^rho <= C int_E F^rho_inf + int_E R^rho_-  and its converse,
    with R(x) = (e + |x|)^{-N}. rhs1/rhs2 use C = 1; c1/c2 are the smallest
    constants making each inequality hold on the grid."""

    lhs1: float
    rhs1: float
    lhs2: float
    rhs2: float
    c1: float
    c2: float
    tail: float


def truncation_inequality_report(
    rho: ExponentFunction,
    F: Callable[[np.ndarray], np.ndarray],
    box: tuple[float, float],
    N: float,
    n: int | None = None,
) -> TruncationReport:
    """Evaluate the four integrals over the box E = [a, b]^d by the trapezoid rule."""
    d = rho.dim
    if rho.p_inf is None or not (0 < rho.p_inf < math.inf):
        raise ValueError("rho needs a finite positive limit rho_inf")
    if not N > d / rho.p_minus:
        raise ValueError(f"N = {N} must exceed d / rho_- = {d / rho.p_minus}")
    lo, hi = box
    n = n or {1: 4001, 2: 401, 3: 81}[d]
    x, h = np.linspace(lo, hi, n, retstep=True)
    w1 = np.full(n, h)
    w1[[0, -1]] = h / 2
    grids = np.meshgrid(*([x] * d), indexing="ij")
    y = np.stack([gr.ravel() for gr in grids], axis=-1)
    w = np.prod(np.stack([gr.ravel() for gr in np.meshgrid(*([w1] * d), indexing="ij")], -1), -1)
    Fv = evaluate(F, y)
    if np.any((Fv < 0) | (Fv > 1)):
        i = int(np.flatnonzero((Fv < 0) | (Fv > 1))[0])
        raise ValueError(f"F must take values in [0, 1]; F = {Fv[i]} at {y[i].tolist()}")
    rv = rho(y)
    R = (math.e + np.linalg.norm(y, axis=-1)) ** (-N)
    f_rho = float(w @ Fv**rv)
    f_inf = float(w @ Fv**rho.p_inf)
    tail = float(w @ R**rho.p_minus)
    c1 = max(0.0, f_rho - tail) / f_inf if f_inf > 0 else 0.0
    c2 = max(0.0, f_inf - tail) / f_rho if f_rho > 0 else 0.0
    return TruncationReport(f_rho, f_inf + tail, f_inf, f_rho + tail, c1, c2, tail)


def duality_test_set(dim: int) -> list[tuple[str, Callable[[np.ndarray], np.ndarray]]]:
    """Hermite basis through degree 6, Gaussian bumps at 5 centers, indicators of 4 balls."""
    from .hermite import multi_indices

    out: list[tuple[str, Callable]] = []
    for nu in multi_indices(dim, 6):
        out.append((f"h{list(nu)}", HermiteExpansion.basis(nu)))
    e1 = np.eye(dim)[0]
    for c in (-2.0, -1.0, 0.0, 1.0, 2.0):
        out.append((f"bump[{c:g}]", lambda x, _c=c * e1: np.exp(-np.sum((x - _c) ** 2, axis=-1))))
    for r in (0.5, 1.0, 2.0, 3.0):
        out.append((f"ball[{r:g}]", lambda x, _r=r: (np.linalg.norm(x, axis=-1) <= _r).astype(float)))
    return out


def duality_pairing(
    f, p: ExponentFunction, test_set: Sequence, tol: float = DEFAULT_TOL, grid: IntegrationGrid | None = None
) -> float:
    """sup over g of int f |g| d gamma with each g scaled to unit p'(.)-norm; a lower bound of ||f||."""
    test_set = list(test_set)
    if not test_set:
        raise ValueError("empty test set")
    grid = _grid_for("gaussian", p.dim, grid)
    q = conjugate(p)
    fv = evaluate(f, grid.nodes)
    best = 0.0
    for g in test_set:
        g = g[1] if isinstance(g, tuple) else g
        gv = np.abs(evaluate(g, grid.nodes))
        nrm = _luxemburg_arrays(gv, q(grid.nodes), grid.weights, tol).norm
        if nrm > 0:
            best = max(best, float(grid.weights @ (fv * gv)) / nrm)
    return best


NORM_CSV_HEADER = ("function_id", "exponent_id", "measure", "norm", "modular_at_norm", "bracket_width")


def norm_csv_row(function_id: str, p: ExponentFunction, measure: str, result: NormResult) -> list[str]:
    return [function_id, p.ident, measure, repr(result.norm), repr(result.modular_at_norm), repr(result.bracket_width)]
