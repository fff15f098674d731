"""Experiment configuration: one declarative JSON file per run."""
from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path

from .suite import default_suite_specs


def _default_exponent() -> dict:
    return {"name": "rational_decay", "params": {"p0": 3.0, "c": 1.0}}


@dataclass(frozen=True)
class ExperimentConfig:
    exponent: dict = field(default_factory=_default_exponent)
    dim: int = 1
    suite: list | None = None  # None -> default_suite_specs(dim)
    max_degree: int = 8
    t_grid: list = field(default_factory=lambda: [0.01, 0.1, 0.5, 1.0, 3.0])
    maximal_t_range: list = field(default_factory=lambda: [1e-3, 10.0, 50])
    poisson_t: list = field(default_factory=lambda: [0.1, 0.5, 1.0, 2.0])
    betas: list = field(default_factory=lambda: [0.5, 1.0, 2.0, 4.0])
    continuity_t: list = field(default_factory=lambda: [1.0, 0.1, 1e-2, 1e-3, 1e-4])
    gauss_nodes: int = 80
    laguerre_nodes: int = 64
    ou_nodes: int = 80
    norm_tol: float = 1e-10
    stability: float = 0.2
    contraction_tol: float = 1e-8
    lh0_cap: float = 1.0
    pgamma_cap: float = 10.0
    k_max: list = field(default_factory=lambda: [9, 25])
    covering_dim: int = 2
    kernel_pairs: int = 100
    seed: int = 0
    output: str = "report.json"

    def __post_init__(self):
        if not 1 <= self.dim <= 3:
            raise ValueError(f"dimension must be 1, 2 or 3, got {self.dim}")
        if self.covering_dim not in (1, 2):
            raise ValueError("covering experiments need dimension 1 or 2")
        for name in ("t_grid", "poisson_t", "betas", "continuity_t", "k_max"):
            if not getattr(self, name):
                raise ValueError(f"{name} must be nonempty")
        if any(t <= 0 for t in self.t_grid + self.poisson_t + self.continuity_t):
            raise ValueError("times must be positive")
        if any(b <= 0 for b in self.betas):
            raise ValueError("beta values must be positive")

    @property
    def suite_specs(self) -> list[dict]:
        return default_suite_specs(self.dim) if self.suite is None else list(self.suite)

    def refined(self) -> "ExperimentConfig":
        """Doubles every quadrature order."""
        return replace(self, gauss_nodes=2 * self.gauss_nodes, laguerre_nodes=2 * self.laguerre_nodes,
                       ou_nodes=2 * self.ou_nodes)

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    def hash(self) -> str:
        canon = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canon.encode()).hexdigest()[:16]

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def load(cls, path: str | Path) -> "ExperimentConfig":
        return cls.from_dict(json.loads(Path(path).read_text()))
