"""Experiment configuration: JSON round-trip, validation, env overrides."""

from __future__ import annotations

import dataclasses
import json
import os
from dataclasses import dataclass, field
from pathlib import Path


@dataclass
class ExperimentConfig:
    seed: int = 12345
    p_max: int = 199
    X_grid: list[float] = field(default_factory=lambda: [1e4, 3e4, 1e5, 3e5, 1e6])
    theta_list: list[float] = field(default_factory=lambda: [0.5, 0.75])
    delta: float = 0.05  # exponent offset in N1 = p^{1/2-delta}
    primes_per_X: int = 5
    samples_per_X: int = 50
    samples_A: int = 20
    prime_range: list[int] = field(default_factory=lambda: [101, 499])
    t_probe: float = 0.0
    sigma_grid: list[float] = field(default_factory=lambda: [0.5, 1.0])
    t_grid: list[float] = field(default_factory=lambda: [0.0, 5.0, 20.0])
    tolerances: dict[str, float] = field(default_factory=dict)
    out_dir: str = "out"
    workers: int = 1

    def validate(self) -> None:
        if self.seed < 0:
            raise ValueError("seed must be non-negative")
        if self.p_max < 2:
            raise ValueError("p_max must be >= 2")
        if not self.X_grid or any(x <= 0 for x in self.X_grid):
            raise ValueError("X_grid must be positive")
        if list(self.X_grid) != sorted(self.X_grid):
            raise ValueError("X_grid must be increasing")
        if any(not 0 < th < 1 for th in self.theta_list):
            raise ValueError("theta values must lie in (0,1)")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        if len(self.prime_range) != 2 or self.prime_range[0] > self.prime_range[1]:
            raise ValueError("prime_range must be [lo, hi] with lo <= hi")

    def to_json(self) -> str:
        return json.dumps(dataclasses.asdict(self), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "ExperimentConfig":
        data = json.loads(text)
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        cfg = cls(**data)
        cfg.validate()
        return cfg

    @classmethod
    def load(cls, path: str | Path | None = None) -> "ExperimentConfig":
        """Config file, then DIVAP_* environment overrides."""
        if path is not None:
            cfg = cls.from_json(Path(path).read_text())
        else:
            cfg = cls()
        cfg.apply_env()
        cfg.validate()
        return cfg

    def apply_env(self, env: dict[str, str] | None = None) -> None:
        env = env if env is not None else dict(os.environ)
        for f in dataclasses.fields(self):
            key = f"DIVAP_{f.name.upper()}"
            if key not in env:
                continue
            raw = env[key]
            cur = getattr(self, f.name)
            if isinstance(cur, bool):
                setattr(self, f.name, raw.lower() in ("1", "true", "yes"))
            elif isinstance(cur, int):
                setattr(self, f.name, int(raw))
            elif isinstance(cur, float):
                setattr(self, f.name, float(raw))
            elif isinstance(cur, (list, dict)):
                setattr(self, f.name, json.loads(raw))
            else:
                setattr(self, f.name, raw)
