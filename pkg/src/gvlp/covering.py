"""Admissible balls and the sqrt(k)-shell covering family of R^d (d = 1, 2).

Shell k (k >= 1) is the annulus sqrt(k) <= |x| <= sqrt(k+1). Its balls B_j^k
have centers on the sphere of radius (sqrt(k+1) + sqrt(k)) / 2 and diameter
sqrt(k+1) - sqrt(k) = 1 / (2 |y_j^k|). The doubled balls 2 B_j^k together with
B(0, 1) cover R^d out to sqrt(k_max + 1).
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

DISJOINT_TOL = 1e-12


@dataclass(frozen=True)
class Ball:
    center: tuple[float, ...]
    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError(f"ball radius must be positive, got {self.radius}")
        object.__setattr__(self, "center", tuple(float(c) for c in np.atleast_1d(self.center)))

    @property
    def dim(self) -> int:
        return len(self.center)

    @property
    def c(self) -> np.ndarray:
        return np.array(self.center)

    def contains(self, points) -> np.ndarray:
        pts = np.asarray(points, dtype=float).reshape(-1, self.dim)
        return np.linalg.norm(pts - self.c, axis=-1) <= self.radius

    def scaled(self, factor: float) -> "Ball":
        return Ball(self.center, self.radius * factor)

    def volume(self) -> float:
        d = self.dim
        return math.pi ** (d / 2) / math.gamma(d / 2 + 1) * self.radius**d


def admissible_radius(x) -> float | np.ndarray:
    """d * min(1, 1/|x|) for a point (or rows of points) x."""
    x = np.asarray(x, dtype=float)
    d = x.shape[-1]
    r = np.linalg.norm(x, axis=-1)
    with np.errstate(divide="ignore"):
        return d * np.minimum(1.0, 1.0 / r)


def admissible_ball(x) -> Ball:
    """B_h(x) = {y : |x - y| <= d (1 ^ 1/|x|)}."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    return Ball(tuple(x), float(admissible_radius(x)))


def shell_center_radius(k: int) -> float:
    return (math.sqrt(k + 1) + math.sqrt(k)) / 2


def shell_diameter(k: int) -> float:
    return math.sqrt(k + 1) - math.sqrt(k)


@dataclass(frozen=True)
class CoveringFamily:
    dim: int
    k_max: int
    base: Ball
    shells: list[tuple[int, list[Ball]]]
    scale_tilde: float = 2.0
    scale_hat: float = field(default=float("nan"))

    def shell_balls(self) -> list[tuple[int, Ball]]:
        return [(k, b) for k, balls in self.shells for b in balls]

    def members(self, which: str = "tilde") -> list[Ball]:
        """Balls of the family: "base" (B_j^k only), "tilde" (B(0,1) and 2B_j^k) or "hat"."""
        if which == "base":
            return [b for _, b in self.shell_balls()]
        tilde = [self.base] + [b.scaled(self.scale_tilde) for _, b in self.shell_balls()]
        if which == "tilde":
            return tilde
        if which == "hat":
            return [b.scaled(self.scale_hat) for b in tilde]
        raise ValueError(f"unknown family variant {which!r}")

    @property
    def built_radius(self) -> float:
        return math.sqrt(self.k_max + 1)

    def to_json(self) -> str:
        balls = [{"center": list(self.base.center), "radius": self.base.radius, "shell": 0}]
        balls += [{"center": list(b.center), "radius": b.radius, "shell": k} for k, b in self.shell_balls()]
        return json.dumps({"dim": self.dim, "k_max": self.k_max, "balls": balls})

    @classmethod
    def from_json(cls, text: str) -> "CoveringFamily":
        data = json.loads(text)
        base = None
        shells: dict[int, list[Ball]] = {}
        for e in data["balls"]:
            ball = Ball(tuple(e["center"]), e["radius"])
            if e["shell"] == 0:
                base = ball
            else:
                shells.setdefault(int(e["shell"]), []).append(ball)
        fam = cls(int(data["dim"]), int(data["k_max"]), base, sorted(shells.items()))
        return _with_hat(fam)


def _hull_sup(ball: Ball) -> float:
    """sup over x in ball of (|x - c| + r_h(x)) / radius.

    Both terms are largest at the point of the ball nearest the origin.
    """
    d = ball.dim
    near = max(0.0, float(np.linalg.norm(ball.c)) - ball.radius)
    rh = d * min(1.0, 1.0 / near) if near > 0 else d
    return (ball.radius + rh) / ball.radius


def _with_hat(fam: CoveringFamily) -> CoveringFamily:
    c_n = max(_hull_sup(b) for b in fam.members("tilde"))
    return CoveringFamily(fam.dim, fam.k_max, fam.base, fam.shells, fam.scale_tilde, c_n)


def build_covering(dim: int, k_max: int) -> CoveringFamily:
    if dim not in (1, 2):
        raise ValueError(f"covering construction is implemented for d = 1, 2 only, got d = {dim}")
    if k_max < 1:
        raise ValueError("k_max must be at least 1")
    shells = []
    for k in range(1, k_max + 1):
        rc = shell_center_radius(k)
        r = shell_diameter(k) / 2
        if dim == 1:
            balls = [Ball((-rc,), r), Ball((rc,), r)]
        else:
            # largest count whose adjacent chords 2 rc sin(pi/N) still separate the balls
            n = int(math.floor(math.pi / math.asin(r * (1 + DISJOINT_TOL) / rc)))
            theta = 2 * math.pi * np.arange(n) / n
            balls = [Ball((rc * math.cos(t), rc * math.sin(t)), r) for t in theta]
        shells.append((k, balls))
    fam = CoveringFamily(dim, k_max, Ball((0.0,) * dim, 1.0), shells)
    return _with_hat(fam)


def _check_samples(family: CoveringFamily, samples) -> np.ndarray:
    pts = np.asarray(samples, dtype=float).reshape(-1, family.dim)
    if np.any(np.linalg.norm(pts, axis=-1) > math.sqrt(family.k_max) * (1 + 1e-12)):
        raise ValueError(f"samples must satisfy |x| <= sqrt(k_max) = {math.sqrt(family.k_max):.6g}")
    return pts


def _membership_counts(balls: list[Ball], pts: np.ndarray) -> np.ndarray:
    counts = np.zeros(len(pts), dtype=int)
    tree = cKDTree(pts)
    for b in balls:
        # tiny inflation keeps closed-ball boundary points that rounding pushes out
        idx = tree.query_ball_point(b.center, b.radius * (1 + 1e-13))
        counts[idx] += 1
    return counts


def coverage_check(family: CoveringFamily, samples) -> float:
    """Fraction of samples lying in B(0,1) or some doubled shell ball."""
    pts = _check_samples(family, samples)
    counts = _membership_counts(family.members("tilde"), pts)
    return float(np.mean(counts > 0))


def overlap_count(family: CoveringFamily, samples, which: str = "tilde") -> int:
    """Largest number of family balls containing a single sample."""
    pts = _check_samples(family, samples)
    return int(_membership_counts(family.members(which), pts).max())


@dataclass(frozen=True)
class BallStats:
    density_ratio: float
    hull_constant: float


def ball_stats(ball: Ball, samples) -> BallStats:
    """Variation of e^{-|x|^2} over the samples and the admissible-ball hull constant.

    hull_constant is the smallest c with B_h(x) inside c * ball for every
    sample x, i.e. max (|x - center| + r_h(x)) / radius.
    """
    pts = np.asarray(samples, dtype=float).reshape(-1, ball.dim)
    if len(pts) == 0:
        raise ValueError("no samples")
    r2 = np.sum(pts**2, axis=-1)
    density_ratio = float(np.exp(r2.max() - r2.min()))
    hull = (np.linalg.norm(pts - ball.c, axis=-1) + admissible_radius(pts)) / ball.radius
    return BallStats(density_ratio, float(hull.max()))


def sample_ball(ball: Ball, n: int, rng: np.random.Generator) -> np.ndarray:
    """n uniform points in the ball, plus its boundary point nearest the origin."""
    d = ball.dim
    g = rng.standard_normal((n, d))
    g /= np.linalg.norm(g, axis=-1, keepdims=True)
    rad = ball.radius * rng.uniform(0, 1, n) ** (1 / d)
    pts = ball.c + rad[:, None] * g
    cn = np.linalg.norm(ball.c)
    if cn > 0:
        pts = np.vstack([pts, ball.c * (1 - ball.radius / cn)])
    return pts


def family_ball_stats(family: CoveringFamily, which: str = "tilde", n_per_ball: int = 64, seed: int = 0) -> BallStats:
    """Worst density ratio and hull constant over every ball of the family."""
    rng = np.random.default_rng(seed)
    worst_d, worst_h = 0.0, 0.0
    for b in family.members(which):
        s = ball_stats(b, sample_ball(b, n_per_ball, rng))
        worst_d = max(worst_d, s.density_ratio)
        worst_h = max(worst_h, s.hull_constant)
    return BallStats(worst_d, worst_h)


def shell_disjoint(family: CoveringFamily) -> bool:
    """Balls of the same shell are pairwise disjoint (with relative margin DISJOINT_TOL)."""
    for _, balls in family.shells:
        c = np.array([b.center for b in balls])
        r = np.array([b.radius for b in balls])
        dist = np.linalg.norm(c[:, None, :] - c[None, :, :], axis=-1)
        need = (r[:, None] + r[None, :]) * (1 + DISJOINT_TOL)
        np.fill_diagonal(dist, np.inf)
        if np.any(dist < need):
            return False
    return True


def polar_samples(dim: int, r_max: float, n_r: int, n_theta: int) -> np.ndarray:
    """Deterministic polar grid (d = 2) or uniform grid (d = 1) in |x| <= r_max."""
    r = np.linspace(0, r_max, n_r)
    if dim == 1:
        return np.concatenate([-r[::-1], r[1:]])[:, None]
    theta = 2 * np.pi * np.arange(n_theta) / n_theta
    rr, tt = np.meshgrid(r, theta, indexing="ij")
    return np.stack([rr * np.cos(tt), rr * np.sin(tt)], axis=-1).reshape(-1, 2)
