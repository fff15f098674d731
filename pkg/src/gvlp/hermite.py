"""Normalized Hermite polynomials and truncated Hermite expansions on R^d.

Convention: physicists' Hermite polynomials H_n (weight e^{-x^2}), normalized
so that h_nu = prod_i H_{nu_i}(x_i) / sqrt(2^{nu_i} nu_i!) is orthonormal in
L^2(gamma_d) with gamma_d = pi^{-d/2} e^{-|x|^2} dx. With this convention the
Ornstein-Uhlenbeck operator acts on h_nu by -|nu|.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Mapping

import numpy as np

from .quadrature import QuadratureRule, check_finite, gauss_hermite_rule, gaussian_tensor

MultiIndex = tuple[int, ...]

PRUNE_TOL = 1e-15


def multi_indices(dim: int, max_order: int) -> Iterator[MultiIndex]:
    """All multi-indices with |nu| <= max_order, ordered by total degree."""
    for k in range(max_order + 1):
        yield from multi_indices_of_order(dim, k)


def multi_indices_of_order(dim: int, k: int) -> Iterator[MultiIndex]:
    if dim == 1:
        yield (k,)
        return
    for first in range(k, -1, -1):
        for rest in multi_indices_of_order(dim - 1, k - first):
            yield (first,) + rest


def hermite_table(n: int, x: np.ndarray) -> np.ndarray:
    """Values of the normalized h_0..h_n at x, shape (n+1, *x.shape).

    The normalized three-term recurrence avoids the factorial overflow of the
    textbook form.
    """
    x = np.asarray(x, dtype=float)
    out = np.empty((n + 1,) + x.shape)
    out[0] = 1.0
    if n >= 1:
        out[1] = np.sqrt(2.0) * x
    for j in range(1, n):
        out[j + 1] = (np.sqrt(2.0) * x * out[j] - np.sqrt(j) * out[j - 1]) / np.sqrt(j + 1)
    return out


def _as_points(x, dim: int) -> tuple[np.ndarray, bool]:
    pts = np.asarray(x, dtype=float)
    single = pts.ndim <= 1
    pts = pts.reshape(-1, dim) if not single else pts.reshape(1, dim)
    return pts, single


def hermite_normalized_eval(nu: Iterable[int], x) -> np.ndarray | float:
    nu = tuple(int(v) for v in nu)
    pts, single = _as_points(x, len(nu))
    val = np.ones(len(pts))
    for axis, n in enumerate(nu):
        val *= hermite_table(n, pts[:, axis])[n]
    return float(val[0]) if single else val


@dataclass(frozen=True)
class HermiteExpansion:
    """Finite expansion sum_nu c_nu h_nu. Missing indices have coefficient zero."""

    dim: int
    coeffs: Mapping[MultiIndex, float] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for nu, c in self.coeffs.items():
            nu = tuple(int(v) for v in nu)
            if len(nu) != self.dim:
                raise ValueError(f"multi-index {nu} does not match dimension {self.dim}")
            if abs(c) > PRUNE_TOL:
                clean[nu] = float(c)
        object.__setattr__(self, "coeffs", dict(sorted(clean.items(), key=lambda kv: (sum(kv[0]), kv[0]))))

    @classmethod
    def basis(cls, nu: Iterable[int], c: float = 1.0) -> "HermiteExpansion":
        nu = tuple(nu)
        return cls(len(nu), {nu: c})

    @classmethod
    def constant(cls, dim: int, c: float = 1.0) -> "HermiteExpansion":
        return cls(dim, {(0,) * dim: c})

    @property
    def max_order(self) -> int:
        return max((sum(nu) for nu in self.coeffs), default=0)

    def __call__(self, x) -> np.ndarray | float:
        return eval_expansion(self, x)

    def map_degrees(self, multiplier: Callable[[int], float]) -> "HermiteExpansion":
        """Apply a spectral multiplier m(|nu|) coefficientwise."""
        return HermiteExpansion(self.dim, {nu: multiplier(sum(nu)) * c for nu, c in self.coeffs.items()})

    def __add__(self, other: "HermiteExpansion") -> "HermiteExpansion":
        if other.dim != self.dim:
            raise ValueError("dimension mismatch")
        out = dict(self.coeffs)
        for nu, c in other.coeffs.items():
            out[nu] = out.get(nu, 0.0) + c
        return HermiteExpansion(self.dim, out)

    def __neg__(self) -> "HermiteExpansion":
        return self * -1.0

    def __sub__(self, other: "HermiteExpansion") -> "HermiteExpansion":
        return self + (-other)

    def __mul__(self, a: float) -> "HermiteExpansion":
        return HermiteExpansion(self.dim, {nu: a * c for nu, c in self.coeffs.items()})

    __rmul__ = __mul__

    def l2_norm(self) -> float:
        return float(np.sqrt(sum(c * c for c in self.coeffs.values())))

    def to_json(self) -> str:
        return json.dumps(
            {"dim": self.dim, "coeffs": [{"nu": list(nu), "c": c} for nu, c in self.coeffs.items()]}
        )

    @classmethod
    def from_json(cls, text: str) -> "HermiteExpansion":
        data = json.loads(text)
        return cls(int(data["dim"]), {tuple(e["nu"]): float(e["c"]) for e in data["coeffs"]})


def eval_expansion(e: HermiteExpansion, x) -> np.ndarray | float:
    pts, single = _as_points(x, e.dim)
    if not e.coeffs:
        val = np.zeros(len(pts))
        return float(val[0]) if single else val
    top = max(max(nu) for nu in e.coeffs)
    tables = [hermite_table(top, pts[:, a]) for a in range(e.dim)]
    val = np.zeros(len(pts))
    for nu, c in e.coeffs.items():
        term = np.full(len(pts), c)
        for a, n in enumerate(nu):
            term *= tables[a][n]
        val += term
    return float(val[0]) if single else val


def expand(
    f: Callable[[np.ndarray], np.ndarray],
    max_order: int,
    rule: QuadratureRule | None = None,
    dim: int = 1,
) -> HermiteExpansion:
    """Coefficients <f, h_nu>_{gamma_d} for |nu| <= max_order by tensor Gauss-Hermite.

    For polynomial f the rule is exact once 2 * order - 1 >= deg f + max_order.
    """
    rule = rule or gauss_hermite_rule(max(max_order + 1, 40))
    n = rule.order
    x, w = rule.nodes, rule.weights / np.sqrt(np.pi)
    grids = np.meshgrid(*([x] * dim), indexing="ij")
    pts = np.stack([g.ravel() for g in grids], axis=-1)
    values = np.asarray(f(pts), dtype=float)
    check_finite(values, pts)
    F = values.reshape((n,) * dim)

    table = hermite_table(max_order, x) * w[None, :]  # (max_order+1, n)
    C = F
    for _ in range(dim):
        # contract the leading axis and rotate it to the back
        C = np.tensordot(C, table, axes=([0], [1]))
    coeffs = {nu: C[nu] for nu in multi_indices(dim, max_order)}
    return HermiteExpansion(dim, coeffs)


def project_degree(e: HermiteExpansion, k: int) -> HermiteExpansion:
    """J_k: keep the terms with |nu| = k."""
    if k < 0:
        raise ValueError("degree must be non-negative")
    return HermiteExpansion(e.dim, {nu: c for nu, c in e.coeffs.items() if sum(nu) == k})


def gram_matrix(dim: int, max_order: int, rule: QuadratureRule) -> np.ndarray:
    """Gram matrix of {h_nu : |nu| <= max_order} under the tensor Gaussian rule."""
    nodes, weights = gaussian_tensor(rule.order, dim)
    idx = list(multi_indices(dim, max_order))
    V = np.stack([hermite_normalized_eval(nu, nodes) for nu in idx])
    return (V * weights[None, :]) @ V.T
