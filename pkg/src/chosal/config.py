"""Pipeline parameters; every default lives here and is echoed into reports."""
from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, fields

WORKERS_ENV = "CHOSAL_WORKERS"


@dataclass(frozen=True)
class PipelineConfig:
    sigma_c2: float = 3.0
    sigma_s2: float = 0.4
    sigma_w2: float = 0.16
    layer_counts: tuple[int, ...] = (2, 4, 8, 16, 32)
    scale_k: float = 300.0
    min_size: int = 50
    smooth_sigma: float = 0.8
    beta2: float = 0.3
    normalize_cues: bool = True
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "layer_counts", tuple(int(c) for c in self.layer_counts))
        for name in ("sigma_c2", "sigma_s2", "sigma_w2", "beta2", "scale_k"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")
        counts = self.layer_counts
        if not counts or counts[0] < 1 or any(b <= a for a, b in zip(counts, counts[1:])):
            raise ValueError(f"layer_counts must be strictly increasing positive ints, got {list(counts)}")
        if self.min_size < 1:
            raise ValueError("min_size must be >= 1")
        if self.smooth_sigma < 0:
            raise ValueError("smooth_sigma must be >= 0")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["layer_counts"] = list(self.layer_counts)
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict) -> "PipelineConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def from_json_file(cls, path) -> "PipelineConfig":
        with open(os.fspath(path)) as fh:
            return cls.from_dict(json.load(fh))

    def replace(self, **changes) -> "PipelineConfig":
        d = self.to_dict()
        d.update({k: v for k, v in changes.items() if v is not None})
        return PipelineConfig.from_dict(d)


def resolve_workers(cfg: PipelineConfig) -> int:
    env = os.environ.get(WORKERS_ENV)
    if env:
        return max(1, int(env))
    return cfg.workers
