"""Declarative experiment configs (YAML or JSON)."""
from __future__ import annotations

import hashlib
import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import yaml

from ..bounds import BoundId
from ..invex import InvalidInput
from ..registry import ETA_MAPS, FUNCTIONS, get_function

FORMATS = ("csv", "json")
TOLERANCE_KEYS = {"cert": float, "ineq_abs": float, "ineq_rel": float, "n_space": int, "n_t": int}


class ConfigError(ValueError):
    pass


FunctionEntry = Union[str, List[float]]


@dataclass
class ExperimentConfig:
    functions: List[FunctionEntry]
    eta_maps: List[str]
    segments: List[Tuple[float, float]]
    bounds: List[str] = field(default_factory=list)
    q_values: List[float] = field(default_factory=lambda: [2.0])
    x_resolution: int = 33
    x_points: Optional[List[float]] = None
    M: Optional[float] = None
    tolerances: Dict[str, float] = field(default_factory=dict)
    output: Dict[str, str] = field(default_factory=lambda: {"path": "report.csv", "format": "csv"})
    name: str = "experiment"

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        for entry in self.functions:
            try:
                get_function(entry)
            except (InvalidInput, TypeError) as exc:
                raise ConfigError(f"functions: {exc}") from None
        for label in self.eta_maps:
            if label not in ETA_MAPS:
                raise ConfigError(f"eta_maps: unknown label {label!r}; known: {', '.join(sorted(ETA_MAPS))}")
        try:
            self.segments = [(float(a), float(b)) for a, b in self.segments]
        except (TypeError, ValueError):
            raise ConfigError("segments must be a list of [a, b] pairs") from None
        if not all(math.isfinite(v) for seg in self.segments for v in seg):
            raise ConfigError("segments must be finite")
        for bound in self.bounds:
            if bound not in BoundId.__members__:
                raise ConfigError(f"bounds: unknown bound id {bound!r}")
        self.q_values = [float(q) for q in self.q_values]
        if not self.q_values or any(not q >= 1 for q in self.q_values):
            raise ConfigError("q_values must be a nonempty list of reals >= 1")
        if not isinstance(self.x_resolution, int) or self.x_resolution < 3:
            raise ConfigError("x_resolution must be an integer >= 3")
        if self.x_points is not None:
            self.x_points = [float(x) for x in self.x_points]
            if not self.x_points or not all(math.isfinite(x) for x in self.x_points):
                raise ConfigError("x_points must be a nonempty list of finite reals")
        if self.M is not None:
            self.M = float(self.M)
            if not self.M > 0:
                raise ConfigError("M must be positive when given")
        for key, value in self.tolerances.items():
            if key not in TOLERANCE_KEYS:
                raise ConfigError(f"tolerances: unknown key {key!r}; known: {', '.join(sorted(TOLERANCE_KEYS))}")
            self.tolerances[key] = TOLERANCE_KEYS[key](value)
        fmt = self.output.get("format", "csv")
        if fmt not in FORMATS:
            raise ConfigError(f"output.format must be one of {FORMATS}, got {fmt!r}")

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ExperimentConfig":
        if not isinstance(data, dict):
            raise ConfigError("config must be a mapping")
        known = set(cls.__dataclass_fields__)
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
        missing = {"functions", "eta_maps", "segments"} - set(data)
        if missing:
            raise ConfigError(f"missing config keys: {', '.join(sorted(missing))}")
        return cls(**data)

    def canonical(self) -> Dict[str, Any]:
        data = asdict(self)
        data["segments"] = [list(s) for s in self.segments]
        data.pop("output")
        return data

    def digest(self) -> str:
        text = json.dumps(self.canonical(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(text.encode()).hexdigest()


def load_config(path: Union[str, Path]) -> ExperimentConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"cannot parse config {path}: {exc}") from None
    return ExperimentConfig.from_dict(data)


def known_labels() -> Dict[str, List[str]]:
    return {"functions": sorted(FUNCTIONS), "eta_maps": sorted(ETA_MAPS), "bounds": list(BoundId.__members__)}
