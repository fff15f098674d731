"""The test-function catalogue.

Each member is stored as its Hermite projection onto degree <= max_degree,
computed once with an 80-point tensor Gauss-Hermite rule. The projection *is*
the test function, so every operator acts on it exactly through its
spectral multiplier.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..hermite import HermiteExpansion, expand
from ..quadrature import gauss_hermite_rule

PROJECTION_NODES = 80


@dataclass(frozen=True)
class TestFunction:
    ident: str
    kind: str
    expansion: HermiteExpansion

    __test__ = False  # not a pytest class


def _unit(dim: int) -> np.ndarray:
    return np.eye(dim)[0]


def default_suite_specs(dim: int = 1) -> list[dict]:
    """Twenty functions: h_(k,0,..) for k <= 8, four polynomials, four bumps, three ball indicators."""
    e1 = _unit(dim).tolist()
    zero = [0.0] * dim
    specs: list[dict] = [{"kind": "hermite", "nu": [k] + [0] * (dim - 1)} for k in range(9)]
    first = [1] + [0] * (dim - 1)
    specs += [
        {"kind": "polynomial", "terms": [[1.0, [0] * dim], [1.0, first]]},
        {"kind": "polynomial", "terms": [[1.0, [2] + [0] * (dim - 1)], [-0.5, [0] * dim]]},
        {"kind": "polynomial", "terms": [[1.0, [3] + [0] * (dim - 1)], [-1.0, first]]},
        {"kind": "polynomial", "terms": [[0.25, [4] + [0] * (dim - 1)], [1.0, [0] * dim]]},
    ]
    specs += [
        {"kind": "bump", "center": [c * v for v in e1], "width": w}
        for c, w in ((0.0, 1.0), (0.5, 1.0), (-1.0, 0.5), (1.5, 2.0))
    ]
    specs += [
        {"kind": "indicator", "center": zero, "radius": 0.5},
        {"kind": "indicator", "center": zero, "radius": 1.0},
        {"kind": "indicator", "center": [0.5 * v for v in e1], "radius": 1.0},
    ]
    return specs


def _ident(spec: dict) -> str:
    kind = spec["kind"]
    if kind == "hermite":
        return "h" + "".join(str(v) for v in spec["nu"])
    if kind == "polynomial":
        return "poly[" + "+".join(f"{c:g}*x^{''.join(str(v) for v in pw)}" for c, pw in spec["terms"]) + "]"
    if kind == "bump":
        return f"bump[c={','.join(f'{v:g}' for v in spec['center'])};w={spec['width']:g}]"
    if kind == "indicator":
        return f"ball[c={','.join(f'{v:g}' for v in spec['center'])};r={spec['radius']:g}]"
    raise ValueError(f"unknown test-function kind {kind!r}")


def raw_function(spec: dict):
    """The unprojected function as a callable on (N, d) arrays (None for Hermite elements)."""
    kind = spec["kind"]
    if kind == "polynomial":
        terms = [(float(c), np.asarray(pw)) for c, pw in spec["terms"]]
        return lambda x: sum(c * np.prod(x**pw, axis=-1) for c, pw in terms)
    if kind == "bump":
        c, w = np.asarray(spec["center"], float), float(spec["width"])
        return lambda x: np.exp(-np.sum((x - c) ** 2, axis=-1) / w)
    if kind == "indicator":
        c, r = np.asarray(spec["center"], float), float(spec["radius"])
        return lambda x: (np.linalg.norm(x - c, axis=-1) <= r).astype(float)
    if kind == "hermite":
        return None
    raise ValueError(f"unknown test-function kind {kind!r}")


def build_function(spec: dict, dim: int, max_degree: int = 8) -> TestFunction:
    kind = spec["kind"]
    if kind == "hermite":
        nu = tuple(int(v) for v in spec["nu"])
        if len(nu) != dim:
            raise ValueError(f"multi-index {nu} does not match dimension {dim}")
        e = HermiteExpansion.basis(nu)
    else:
        e = expand(raw_function(spec), max_degree, gauss_hermite_rule(PROJECTION_NODES), dim)
    return TestFunction(_ident(spec), kind, e)


def build_suite(specs: list[dict], dim: int, max_degree: int = 8) -> list[TestFunction]:
    return [build_function(s, dim, max_degree) for s in specs]
