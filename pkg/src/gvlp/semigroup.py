"""The Ornstein-Uhlenbeck semigroup T_t on R^d.

Two evaluation paths:

* spectral: T_t multiplies the degree-k Hermite component by e^{-tk};
* quadrature: T_t f(x) = int M(s, x, y) f(y) dy with the Mehler kernel
  M(s, x, y) = (pi s)^{-d/2} exp(-|y - sqrt(1-s) x|^2 / s), s = 1 - e^{-2t}.

The quadrature path integrates against the kernel with a Gauss-Hermite rule
centred on sqrt(1-s) x and scaled by sqrt(s), so it resolves the kernel for
any s but is refused below S_MIN where callers must go spectral.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.special import expit, logit

from .covering import Ball, CoveringFamily, admissible_ball, admissible_radius
from .hermite import HermiteExpansion, eval_expansion
from .quadrature import annulus_rule, check_finite, gaussian_tensor

S_MIN = 1e-3
SPECTRAL_T = 0.05
DEFAULT_NODES = 80

Function = Callable[[np.ndarray], np.ndarray]

__all__ = [
    "OUTime", "time_convert", "time_from_s", "mehler_kernel", "log_mehler_kernel",
    "ou_expansion", "ou_apply", "admissible_ball", "ou_split", "ou_maximal",
    "ball_average", "hl_maximal", "local_domination", "KernelBoundReport",
    "kernel_bound_params", "kernel_bound_report", "default_s_grid",
    "majorant_alpha", "global_majorant_integral",
]


@dataclass(frozen=True)
class OUTime:
    t: float
    s: float


def time_convert(t: float) -> OUTime:
    if not (t > 0 and math.isfinite(t)):
        raise ValueError(f"OU time must be positive and finite, got {t}")
    return OUTime(float(t), -math.expm1(-2.0 * t))


def time_from_s(s: float) -> OUTime:
    if not (0.0 < s < 1.0):
        raise ValueError(f"s must lie in (0, 1), got {s}")
    return OUTime(-0.5 * math.log1p(-s), float(s))


def _s_of(ou) -> float:
    s = ou.s if isinstance(ou, OUTime) else float(ou)
    if not (0.0 < s < 1.0):
        raise ValueError(f"s must lie in (0, 1), got {s}")
    return s


def log_mehler_kernel(ou, x, y) -> np.ndarray:
    s = _s_of(ou)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    d = y.shape[-1]
    diff = y - math.sqrt(1.0 - s) * x
    return -0.5 * d * math.log(math.pi * s) - np.sum(diff * diff, axis=-1) / s


def mehler_kernel(ou, x, y) -> np.ndarray | float:
    """Kernel of T_t against Lebesgue measure dy; ``ou`` is an OUTime or a bare s."""
    out = np.exp(log_mehler_kernel(ou, x, y))
    return float(out) if np.ndim(out) == 0 else out


def _as_function(f) -> Function:
    if isinstance(f, HermiteExpansion):
        return lambda pts, _e=f: eval_expansion(_e, pts)
    return f


def _points(x, dim: int | None = None) -> tuple[np.ndarray, bool]:
    x = np.asarray(x, dtype=float)
    single = x.ndim <= 1
    if dim is None:
        dim = 1 if x.ndim == 0 else x.shape[-1]
    return x.reshape(-1, dim), single


def ou_expansion(e: HermiteExpansion, t: float) -> HermiteExpansion:
    """Spectral T_t: the expansion with J_k scaled by e^{-tk}."""
    if t < 0:
        raise ValueError("t must be non-negative")
    return e.map_degrees(lambda k: math.exp(-t * k))


def ou_quadrature(f, s: float, x, n_nodes: int = DEFAULT_NODES) -> np.ndarray:
    """int M(s, x, y) f(y) dy by a kernel-centred Gauss-Hermite rule (no S_MIN guard)."""
    g = _as_function(f)
    pts, _ = _points(x)
    d = pts.shape[1]
    z, w = gaussian_tensor(n_nodes, d)
    w = w * math.pi ** (d / 2)  # plain weights for e^{-|z|^2}
    center = math.sqrt(1.0 - s) * pts  # (M, d)
    y = center[:, None, :] + math.sqrt(s) * z[None, :, :]  # (M, N, d)
    # weight / e^{-|z|^2} * kernel * Jacobian s^{d/2}
    logk = log_mehler_kernel(s, pts[:, None, :], y)
    factor = np.exp(logk + np.sum(z * z, axis=-1)[None, :] + 0.5 * d * math.log(s))
    vals = np.asarray(g(y.reshape(-1, d)), dtype=float).reshape(len(pts), -1)
    check_finite(vals.ravel(), y.reshape(-1, d))
    return np.sum(w[None, :] * factor * vals, axis=1)


def ou_apply(f, ou, x, mode: str = "auto", n_nodes: int = DEFAULT_NODES):
    """T_t f(x).

    mode "spectral" needs a HermiteExpansion; "quadrature" works for any
    function but is refused for s < S_MIN; "auto" picks spectral whenever f
    is an expansion.
    """
    if not isinstance(ou, OUTime):
        ou = time_convert(ou)
    if mode == "auto":
        mode = "spectral" if isinstance(f, HermiteExpansion) else "quadrature"
    pts, single = _points(x, f.dim if isinstance(f, HermiteExpansion) else None)
    if mode == "spectral":
        if not isinstance(f, HermiteExpansion):
            raise TypeError("spectral mode needs a HermiteExpansion")
        out = eval_expansion(ou_expansion(f, ou.t), pts)
    elif mode == "quadrature":
        if ou.s < S_MIN:
            raise ValueError(f"s = {ou.s:.3g} < {S_MIN}: kernel too singular for quadrature; use spectral mode")
        out = ou_quadrature(f, ou.s, pts, n_nodes)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return float(out[0]) if single else out


# ---------------------------------------------------------------------------
# local / global decomposition


def _split_rule(x: np.ndarray, s: float, r0: float, r1: float, refine: int = 1):
    """Nodes/weights on {r0 <= |y - x| <= r1} restricted to where the kernel lives."""
    d = len(x)
    delta = float(np.linalg.norm(x - math.sqrt(1 - s) * x))
    reach = math.sqrt(40.0 * s)
    lo, hi = max(r0, delta - reach, 0.0), min(r1, delta + reach)
    if hi <= lo:
        return np.empty((0, d)), np.empty(0)
    sq = math.sqrt(s)
    if d == 1:
        n_ang = 2
    elif d == 2:
        n_ang = min(8192, 64 + int(math.ceil(8 * math.pi * hi / sq))) * refine
    else:
        n_ang = min(256, 16 + int(math.ceil(2 * math.pi * hi / sq))) * refine
    return annulus_rule(x, lo, hi, radial_width=sq / (2 * refine), n_angular=n_ang)


def ou_split(f, ou, x, refine: int = 1) -> tuple[float, float]:
    """(local, global) parts of T_t f(x): the kernel integral over B_h(x) and its complement."""
    if not isinstance(ou, OUTime):
        ou = time_convert(ou)
    s = ou.s
    if s < S_MIN:
        raise ValueError(f"s = {s:.3g} < {S_MIN}: kernel too singular for quadrature")
    g = _as_function(f)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    rh = float(admissible_radius(x))
    parts = []
    for r0, r1 in ((0.0, rh), (rh, math.inf)):
        y, w = _split_rule(x, s, r0, r1, refine)
        if len(w) == 0:
            parts.append(0.0)
            continue
        vals = np.asarray(g(y), dtype=float)
        parts.append(float(np.sum(w * mehler_kernel(s, x, y) * vals)))
    return parts[0], parts[1]


def ou_maximal(f, x, t_grid: Sequence[float], mode: str = "auto", n_nodes: int = DEFAULT_NODES):
    """max over the grid of T_t f(x); a lower bound for sup_{t>0} T_t f(x)."""
    t_grid = list(t_grid)
    if not t_grid:
        raise ValueError("empty t grid")
    vals = [np.atleast_1d(ou_apply(f, t, x, mode=mode, n_nodes=n_nodes)) for t in t_grid]
    out = np.max(np.stack(vals), axis=0)
    return float(out[0]) if np.ndim(x) <= 1 and out.size == 1 else out


def maximal_t_grid(n: int = 50, t_min: float = 1e-3, t_max: float = 10.0) -> np.ndarray:
    return np.geomspace(t_min, t_max, n)


# ---------------------------------------------------------------------------
# Hardy-Littlewood averages


def ball_average(f, x, r: float, refine: int = 1) -> float:
    """(1/|B(x,r)|) int_{B(x,r)} |f| dy."""
    g = _as_function(f)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    d = len(x)
    n_ang = {1: 2, 2: 128 * refine, 3: 24 * refine}[d]
    y, w = annulus_rule(x, 0.0, r, radial_width=r / (8 * refine), n_angular=n_ang)
    vol = Ball(tuple(x), r).volume()
    return float(np.sum(w * np.abs(np.asarray(g(y), dtype=float))) / vol)


def hl_maximal(f, x, radii: Sequence[float], refine: int = 1) -> float:
    """max over radii of the ball averages of |f| around x; a lower bound for M_HL f(x)."""
    radii = np.asarray(radii, dtype=float)
    if np.any(radii <= 0):
        raise ValueError("radii must be positive")
    return max(ball_average(f, x, r, refine) for r in radii)


@dataclass(frozen=True)
class LocalDomination:
    constant: float
    worst_x: tuple
    worst_s: float
    ratios: np.ndarray


def local_domination(
    f,
    xs,
    s_values: Sequence[float],
    family: CoveringFamily,
    radii: Sequence[float],
    refine: int = 1,
) -> LocalDomination:
    """Measured C in  T^0_s f(x) <= C * M_HL(f chi_{B-hat})(x)  for f >= 0.

    B-hat is C_n times a member of the tilde family containing x.
    """
    g = _as_function(f)
    xs = np.asarray(xs, dtype=float).reshape(-1, family.dim)
    members = family.members("tilde")
    ratios = np.zeros((len(xs), len(s_values)))
    for i, x in enumerate(xs):
        home = next((b for b in members if b.contains(x)[0]), None)
        if home is None:
            raise ValueError(f"point {x.tolist()} lies outside the covering family")
        hat = home.scaled(family.scale_hat)
        restricted = lambda y, _h=hat: g(y) * _h.contains(y)
        hl = hl_maximal(restricted, x, radii, refine)
        for j, s in enumerate(s_values):
            local, _ = ou_split(f, time_from_s(s), x, refine)
            ratios[i, j] = local / hl if hl > 0 else (0.0 if local <= 0 else math.inf)
    i, j = np.unravel_index(np.argmax(ratios), ratios.shape)
    return LocalDomination(float(ratios[i, j]), tuple(xs[i].tolist()), float(s_values[j]), ratios)


# ---------------------------------------------------------------------------
# global-region kernel estimates


@dataclass(frozen=True)
class KernelBoundReport:
    x: tuple
    y: tuple
    b: float
    a: float
    t0: float
    u0: float
    sup_M: float
    s_star: float
    bound: float
    ratio: float
    branch: str

    CSV_HEADER = ("x", "y", "b", "branch", "t0", "u0", "sup_M", "bound", "ratio")

    def csv_row(self) -> list[str]:
        vec = lambda v: ";".join(repr(float(c)) for c in v)
        return [vec(self.x), vec(self.y), repr(self.b), self.branch, repr(self.t0), repr(self.u0),
                repr(self.sup_M), repr(self.bound), repr(self.ratio)]


def kernel_bound_params(x, y) -> dict:
    """a, b, t0, u0, branch and the majorant of sup_s M(s, x, y) for a pair (x, y)."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    y = np.atleast_1d(np.asarray(y, dtype=float))
    d = len(x)
    b = 2.0 * float(x @ y)
    a = float(x @ x + y @ y)
    if b <= 0:
        return {"a": a, "b": b, "t0": math.nan, "u0": math.nan, "branch": "b_nonpositive",
                "bound": math.exp(-float(y @ y))}
    root = math.sqrt(max(a * a - b * b, 0.0))
    t0 = 2.0 * root / (a + root)
    u0 = 0.5 * (float(y @ y) - float(x @ x) + float(np.linalg.norm(x + y) * np.linalg.norm(x - y)))
    return {"a": a, "b": b, "t0": t0, "u0": u0, "branch": "b_positive",
            "bound": math.exp(-u0) / t0 ** (d / 2)}


def default_s_grid(n: int = 200, z_max: float = 18.0) -> np.ndarray:
    """Logistic grid on (0, 1), geometrically dense towards both endpoints."""
    return expit(np.linspace(-z_max, z_max, n))


def kernel_bound_report(x, y, s_grid: Sequence[float] | None = None, polish: bool = True) -> KernelBoundReport:
    """Compare sup_s M(s, x, y) with its majorant for y outside B_h(x)."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    y = np.atleast_1d(np.asarray(y, dtype=float))
    if np.linalg.norm(x - y) <= admissible_radius(x):
        raise ValueError("y lies in the admissible ball B_h(x); the estimates hold on its complement only")
    s_grid = np.sort(np.asarray(default_s_grid() if s_grid is None else s_grid, dtype=float))
    if np.any((s_grid <= 0) | (s_grid >= 1)):
        raise ValueError("s grid must lie in (0, 1)")
    logm = np.array([log_mehler_kernel(s, x, y) for s in s_grid])
    i = int(np.argmax(logm))
    best_s, best = float(s_grid[i]), float(logm[i])
    if polish and len(s_grid) >= 3:
        lo = logit(s_grid[max(i - 1, 0)])
        hi = logit(s_grid[min(i + 1, len(s_grid) - 1)])
        if hi > lo:
            res = minimize_scalar(lambda z: -log_mehler_kernel(expit(z), x, y),
                                  bounds=(lo, hi), method="bounded", options={"xatol": 1e-10})
            if -res.fun > best:
                best_s, best = float(expit(res.x)), float(-res.fun)
    # the kernel extends continuously to s = 1, where it is pi^{-d/2} e^{-|y|^2}
    at_one = -0.5 * len(x) * math.log(math.pi) - float(y @ y)
    if at_one > best:
        best_s, best = 1.0, at_one
    p = kernel_bound_params(x, y)
    sup_m = math.exp(best)
    return KernelBoundReport(
        tuple(x.tolist()), tuple(y.tolist()), p["b"], p["a"], p["t0"], p["u0"],
        sup_m, best_s, p["bound"], sup_m / p["bound"], p["branch"],
    )


def majorant_alpha(p_inf: float) -> float:
    """alpha_inf = 1/2 - |1/p_inf - 1/2|."""
    alpha = 0.5 - abs(1.0 / p_inf - 0.5)
    if not alpha > 0:
        raise ValueError(f"alpha_inf = {alpha} must be positive (p_inf = {p_inf})")
    return alpha


def global_majorant_integral(x, p_inf: float, n_per_axis: int | None = None) -> float:
    """int P(x, y) dy over the box [-R, R]^d, R = max(8, |x| + 8), where
    P(x, y) = |x + y|^d exp(-alpha_inf |x + y| |x - y|)."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    d = len(x)
    alpha = majorant_alpha(p_inf)
    R = max(8.0, float(np.linalg.norm(x)) + 8.0)
    n = n_per_axis or {1: 8001, 2: 801, 3: 161}[d]
    g, h = np.linspace(-R, R, n, retstep=True)
    w1 = np.full(n, h)
    w1[[0, -1]] = h / 2
    total = 0.0
    # accumulate over the first axis to bound memory
    rest = np.stack([m.ravel() for m in np.meshgrid(*([g] * (d - 1)), indexing="ij")], -1) if d > 1 else np.zeros((1, 0))
    wrest = np.prod(np.stack([m.ravel() for m in np.meshgrid(*([w1] * (d - 1)), indexing="ij")], -1), -1) if d > 1 else np.ones(1)
    for gi, wi in zip(g, w1):
        y = np.concatenate([np.full((len(rest), 1), gi), rest], axis=1)
        plus = np.linalg.norm(x + y, axis=-1)
        minus = np.linalg.norm(x - y, axis=-1)
        total += wi * float(np.sum(wrest * plus**d * np.exp(-alpha * plus * minus)))
    return total
