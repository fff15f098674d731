"""Variable exponents p(.) on R^d and sample-based regularity checks.

Every check is a verdict on a finite sample set. A report therefore says
"passed on N samples", never that p belongs to a class.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Any, Callable

import numpy as np


@dataclass(frozen=True)
class ExponentFunction:
    """An exponent p: R^d -> (1, inf) with known bounds p_minus <= p <= p_plus.

    ``func`` maps an (N, dim) array of points to N values.
    """

    func: Callable[[np.ndarray], np.ndarray]
    dim: int
    p_minus: float
    p_plus: float
    p_inf: float | None = None
    name: str = "custom"
    params: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if not (1.0 < self.p_minus <= self.p_plus < math.inf):
            raise ValueError(
                f"exponent bounds must satisfy 1 < p_minus <= p_plus < inf, got [{self.p_minus}, {self.p_plus}]"
            )
        if self.p_inf is not None and not (self.p_minus <= self.p_inf <= self.p_plus):
            raise ValueError(f"p_inf={self.p_inf} outside [{self.p_minus}, {self.p_plus}]")

    def __call__(self, x) -> np.ndarray:
        pts = np.asarray(x, dtype=float).reshape(-1, self.dim)
        return np.asarray(self.func(pts), dtype=float).reshape(len(pts))

    def with_p_inf(self, p_inf: float) -> "ExponentFunction":
        return replace(self, p_inf=float(p_inf))

    @property
    def ident(self) -> str:
        if not self.params:
            return self.name
        args = ",".join(f"{k}={v:g}" for k, v in sorted(self.params.items()))
        return f"{self.name}({args})"


def _conj(p):
    return p / (p - 1.0)


def conjugate(p: ExponentFunction) -> ExponentFunction:
    """Pointwise conjugate exponent p' = p/(p-1)."""
    if p.p_minus <= 1.0:
        raise ValueError("conjugate exponent is unbounded when p_minus = 1")
    return ExponentFunction(
        func=lambda x, _p=p: _conj(_p(x)),
        dim=p.dim,
        p_minus=_conj(p.p_plus),
        p_plus=_conj(p.p_minus),
        p_inf=None if p.p_inf is None else _conj(p.p_inf),
        name=f"conj[{p.ident}]",
    )


# ---------------------------------------------------------------------------
# catalogue


def _radius(x: np.ndarray) -> np.ndarray:
    return np.linalg.norm(x, axis=-1)


def constant(p0: float, dim: int = 1) -> ExponentFunction:
    return ExponentFunction(
        func=lambda x: np.full(len(x), float(p0)),
        dim=dim, p_minus=p0, p_plus=p0, p_inf=p0,
        name="constant", params={"p0": p0},
    )


def rational_decay(p0: float, c: float, dim: int = 1) -> ExponentFunction:
    """p(x) = p0 + c / (1 + |x|^2)."""
    lo, hi = (p0, p0 + c) if c >= 0 else (p0 + c, p0)
    return ExponentFunction(
        func=lambda x: p0 + c / (1.0 + np.sum(x * x, axis=-1)),
        dim=dim, p_minus=lo, p_plus=hi, p_inf=p0,
        name="rational_decay", params={"p0": p0, "c": c},
    )


def oscillating(p0: float, a: float, dim: int = 1) -> ExponentFunction:
    """p(x) = p0 + a sin(|x|); has no limit at infinity."""
    return ExponentFunction(
        func=lambda x: p0 + a * np.sin(_radius(x)),
        dim=dim, p_minus=p0 - abs(a), p_plus=p0 + abs(a), p_inf=None,
        name="oscillating", params={"p0": p0, "a": a},
    )


def step(p0: float, p1: float, r: float, dim: int = 1) -> ExponentFunction:
    """p0 on the closed ball |x| <= r, p1 outside."""
    return ExponentFunction(
        func=lambda x: np.where(_radius(x) <= r, float(p0), float(p1)),
        dim=dim, p_minus=min(p0, p1), p_plus=max(p0, p1), p_inf=p1,
        name="step", params={"p0": p0, "p1": p1, "r": r},
    )


CATALOGUE: dict[str, Callable[..., ExponentFunction]] = {
    "constant": constant,
    "rational_decay": rational_decay,
    "oscillating": oscillating,
    "step": step,
}


def from_spec(spec: dict, dim: int) -> ExponentFunction:
    """Build a catalogue exponent from {"name": ..., "params": {...}}."""
    name = spec["name"]
    if name not in CATALOGUE:
        raise ValueError(f"unknown exponent {name!r}; catalogue: {sorted(CATALOGUE)}")
    return CATALOGUE[name](**spec.get("params", {}), dim=dim)


# ---------------------------------------------------------------------------
# regularity checks


@dataclass(frozen=True)
class RegularityReport:
    class_name: str
    constant: float
    witness_pair: tuple
    passed: bool
    cap: float
    n_samples: int
    skipped: int = 0
    p_inf: float | None = None

    def summary(self) -> str:
        verdict = "passed" if self.passed else "failed"
        return f"constant {self.constant:.6g} {verdict} (cap {self.cap:g}) on {self.n_samples} samples"


def _pairs_to_arrays(pairs, dim) -> tuple[np.ndarray, np.ndarray]:
    if isinstance(pairs, tuple) and len(pairs) == 2 and np.ndim(pairs[0]) == 2:
        xs, ys = pairs
    else:
        pairs = list(pairs)
        xs = np.array([p[0] for p in pairs], dtype=float)
        ys = np.array([p[1] for p in pairs], dtype=float)
    return np.asarray(xs, float).reshape(-1, dim), np.asarray(ys, float).reshape(-1, dim)


def check_log_holder_local(p: ExponentFunction, pairs, cap: float = 1.0) -> RegularityReport:
    """Max over pairs of |1/p(x) - 1/p(y)| log(e + 1/|x - y|), pairs with 0 < |x - y| <= 1/2.

    ``pairs`` is either a sequence of (x, y) or a tuple of two (N, d) arrays.
    """
    xs, ys = _pairs_to_arrays(pairs, p.dim)
    if len(xs) == 0:
        raise ValueError("no pairs supplied")
    dist = np.linalg.norm(xs - ys, axis=-1)
    if np.any(dist > 0.5):
        raise ValueError("LH0 pairs must satisfy |x - y| <= 1/2")
    keep = dist > 0
    skipped = int(np.count_nonzero(~keep))
    xs, ys, dist = xs[keep], ys[keep], dist[keep]
    if len(xs) == 0:
        return RegularityReport("LH0", 0.0, (), True, cap, 0, skipped)
    ratio = np.abs(1.0 / p(xs) - 1.0 / p(ys)) * np.log(np.e + 1.0 / dist)
    i = int(np.argmax(ratio))
    c = float(ratio[i])
    return RegularityReport("LH0", c, (xs[i].tolist(), ys[i].tolist()), c <= cap, cap, len(xs), skipped)


def _fit_p_inf(p: ExponentFunction, samples: np.ndarray) -> float:
    r = _radius(samples)
    n_outer = max(1, int(math.ceil(len(r) / 10)))
    outer = np.argsort(r, kind="stable")[-n_outer:]
    return float(np.mean(p(samples[outer])))


def check_log_holder_infinity(
    p: ExponentFunction, samples, p_inf_guess: float | None = None, cap: float = 1.0
) -> RegularityReport:
    """Max of |1/p(x) - 1/p_inf| log(e + |x|); base point fixed at the origin."""
    samples = np.asarray(samples, dtype=float).reshape(-1, p.dim)
    p_inf = p_inf_guess if p_inf_guess is not None else _fit_p_inf(p, samples)
    ratio = np.abs(1.0 / p(samples) - 1.0 / p_inf) * np.log(np.e + _radius(samples))
    i = int(np.argmax(ratio))
    c = float(ratio[i])
    return RegularityReport("LHinf", c, (samples[i].tolist(),), c <= cap, cap, len(samples), p_inf=p_inf)


def check_p_gamma_inf(
    p: ExponentFunction, samples, p_inf_guess: float | None = None, cap: float = 10.0
) -> RegularityReport:
    """Max of |p(x) - p_inf| |x|^2 over the samples.

    Without a guess, p_inf is the mean of p over the outermost decile of
    sample radii.
    """
    samples = np.asarray(samples, dtype=float).reshape(-1, p.dim)
    r = _radius(samples)
    if np.any(r == 0):
        raise ValueError("samples must exclude the origin")
    p_inf = p_inf_guess if p_inf_guess is not None else _fit_p_inf(p, samples)
    ratio = np.abs(p(samples) - p_inf) * r**2
    i = int(np.argmax(ratio))
    c = float(ratio[i])
    return RegularityReport("PgammaInf", c, (samples[i].tolist(),), c <= cap, cap, len(samples), p_inf=p_inf)


@dataclass(frozen=True)
class ExpEquivalenceReport:
    """Range of e^{-|x|^2 (p/p_inf - 1)} and of its conjugate-exponent analogue."""

    p_min: float
    p_max: float
    conj_min: float
    conj_max: float
    c_gamma: float
    c1: float
    c2: float
    passed: bool


def check_exp_equivalence(p: ExponentFunction, samples, c_gamma: float | None = None) -> ExpEquivalenceReport:
    """Check both two-sided exponential bounds with C1 = e^{C/p_inf}, C2 = e^{C (p_-)'/p_inf}.

    ``c_gamma`` defaults to the constant measured by check_p_gamma_inf on the
    same samples with p_inf fixed.
    """
    if p.p_inf is None:
        raise ValueError("p_inf must be set before checking the exponential equivalence")
    samples = np.asarray(samples, dtype=float).reshape(-1, p.dim)
    r2 = np.sum(samples**2, axis=-1)
    pv = p(samples)
    q_inf = _conj(p.p_inf)
    a = np.exp(-r2 * (pv / p.p_inf - 1.0))
    b = np.exp(-r2 * (_conj(pv) / q_inf - 1.0))
    if c_gamma is None:
        nz = r2 > 0
        c_gamma = float(np.max(np.abs(pv[nz] - p.p_inf) * r2[nz])) if np.any(nz) else 0.0
    c1 = math.exp(c_gamma / p.p_inf)
    c2 = math.exp(c_gamma * _conj(p.p_minus) / p.p_inf)
    slack = 1e-12
    passed = bool(
        a.max() <= c1 * (1 + slack) and a.min() >= (1 - slack) / c1
        and b.max() <= c2 * (1 + slack) and b.min() >= (1 - slack) / c2
    )
    return ExpEquivalenceReport(
        float(a.min()), float(a.max()), float(b.min()), float(b.max()), float(c_gamma), c1, c2, passed
    )


# ---------------------------------------------------------------------------
# deterministic sample sets


def radial_samples(dim: int, r_max: float, n: int, seed: int = 0, r_min: float = 0.05) -> np.ndarray:
    """Points with radii log-spaced in [r_min, r_max] and seeded directions."""
    rng = np.random.default_rng(seed)
    r = np.geomspace(r_min, r_max, n)
    d = rng.standard_normal((n, dim))
    d /= np.linalg.norm(d, axis=-1, keepdims=True)
    return r[:, None] * d


def local_pairs(dim: int, box: float, n: int, seed: int = 0, min_dist: float = 1e-6) -> tuple[np.ndarray, np.ndarray]:
    """Pairs with x in [-box, box]^d and |x - y| log-spaced in [min_dist, 1/2]."""
    rng = np.random.default_rng(seed)
    xs = rng.uniform(-box, box, size=(n, dim))
    d = rng.standard_normal((n, dim))
    d /= np.linalg.norm(d, axis=-1, keepdims=True)
    dist = np.geomspace(min_dist, 0.5, n)
    rng.shuffle(dist)
    return xs, xs + dist[:, None] * d


def straddle_pairs(
    dim: int, radius: float, n: int, seed: int = 0, min_dist: float = 1e-9
) -> tuple[np.ndarray, np.ndarray]:
    """Pairs (r - h/2) u, (r + h/2) u across the sphere |x| = radius, h log-spaced in [min_dist, 1/2]."""
    rng = np.random.default_rng(seed)
    u = rng.standard_normal((n, dim))
    u /= np.linalg.norm(u, axis=-1, keepdims=True)
    h = np.geomspace(min_dist, 0.5, n)
    return (radius - h / 2)[:, None] * u, (radius + h / 2)[:, None] * u
