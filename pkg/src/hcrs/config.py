"""Flat key=value run configuration with flag overrides."""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .resources import ResourcePack, default_data_path

__all__ = ["RunConfig", "load_config_file"]


def load_config_file(path: str | Path) -> dict[str, str]:
    """Parse ``key=value`` lines; blank lines and ``#`` comments ignored."""
    values: dict[str, str] = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key=value")
        key, value = line.split("=", 1)
        values[key.strip()] = value.strip()
    return values


@dataclass
class RunConfig:
    lexicons: Path = field(default_factory=lambda: default_data_path() / "lexicons")
    gazetteer: Path = field(default_factory=lambda: default_data_path() / "gazetteer.tsv")
    embeddings: Path = field(default_factory=lambda: default_data_path() / "embeddings.txt")
    prompts: Path = field(default_factory=lambda: default_data_path() / "prompts.json")
    weights: Path | None = None
    store: Path = Path("ratings.jsonl")
    x_ref: float = 5.0
    seed: int = 42
    serve_host: str = "127.0.0.1"
    serve_port: int = 8571

    _PATH_KEYS = ("lexicons", "gazetteer", "embeddings", "prompts", "weights", "store")

    @classmethod
    def from_sources(cls, config_path: str | None, overrides: dict) -> "RunConfig":
        cfg = cls()
        values: dict[str, str] = {}
        if config_path:
            values.update(load_config_file(config_path))
        # flags win over file values
        values.update({k: v for k, v in overrides.items() if v is not None})
        for key, value in values.items():
            if not hasattr(cfg, key) or key.startswith("_"):
                raise ValueError(f"unknown config key: {key}")
            if key in cls._PATH_KEYS:
                setattr(cfg, key, Path(value))
            elif key == "x_ref":
                cfg.x_ref = float(value)
            elif key in ("seed", "serve_port"):
                setattr(cfg, key, int(value))
            else:
                setattr(cfg, key, str(value))
        return cfg

    def load_resources(self) -> ResourcePack:
        return ResourcePack.load(self.lexicons, self.gazetteer, self.embeddings, self.x_ref)
