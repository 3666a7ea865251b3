"""Run configuration: JSON records for maps, weights, schedules and grids.

A configuration file is one JSON object::

    {
      "map": {"type": "lfm", "a": 1, "b": 0, "c": -1, "d": 2},
      "weight": {"type": "alpha", "alpha": 1.0},
      "space": "hinf_nu",
      "schedule": "auto",
      "n_max": 24,
      "grid": {"max_dyadic_level": 24, "angles": 1024},
      "thresholds": {"decide": 0.001, "reject": 0.01},
      "output_dir": "out"
    }

Complex numbers are written as a JSON number or a ``[re, im]`` pair.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .ergodicity import DECIDE, REJECT, Dyadic, Explicit, PowerMatched, RadiusSchedule, VerdictParams
from .errors import InvalidMapError
from .grid import GridSpec
from .maps import (
    Automorphism,
    Compose,
    ConvexCombination,
    LinearFractional,
    Monomial,
    Rotation,
    Scale,
    SelfMap,
    identity,
)
from .weights import ExpWeight, LogWeight, RadialWeight, StandardAlpha, Tabulated


class ConfigError(ValueError):
    pass


def parse_complex(v, what="value") -> complex:
    if isinstance(v, bool):
        raise ConfigError(f"{what}: expected a number or [re, im]")
    if isinstance(v, (int, float)):
        return complex(v)
    if isinstance(v, (list, tuple)) and len(v) == 2 and all(isinstance(x, (int, float)) for x in v):
        return complex(v[0], v[1])
    raise ConfigError(f"{what}: expected a number or [re, im], got {v!r}")


def _need(rec: dict, key: str, what: str):
    if key not in rec:
        raise ConfigError(f"{what} record is missing {key!r}")
    return rec[key]


def parse_map(rec) -> SelfMap:
    if not isinstance(rec, dict) or "type" not in rec:
        raise ConfigError(f"map spec must be a record with a 'type', got {rec!r}")
    t = rec["type"]
    try:
        if t == "identity":
            return identity()
        if t == "monomial":
            k = _need(rec, "k", t)
            if not isinstance(k, int) or isinstance(k, bool):
                raise ConfigError("monomial k must be an integer")
            return Monomial(k)
        if t == "rotation":
            if "angle_turns" in rec:
                turns = rec["angle_turns"]
                if isinstance(turns, str):
                    try:
                        turns = Fraction(turns)
                    except ValueError as exc:
                        raise ConfigError(f"angle_turns {turns!r} is not a rational number") from exc
                elif not isinstance(turns, (int, float)) or isinstance(turns, bool):
                    raise ConfigError("angle_turns must be a rational string or a number")
                return Rotation.from_turns(turns)
            return Rotation(parse_complex(_need(rec, "multiplier", t), "multiplier"))
        if t == "automorphism":
            return Automorphism(parse_complex(_need(rec, "p", t), "p"), parse_complex(rec.get("phase", 1.0), "phase"))
        if t == "lfm":
            return LinearFractional(*(parse_complex(_need(rec, k, t), k) for k in "abcd"))
        if t == "convex":
            maps = _need(rec, "maps", t)
            weights = _need(rec, "weights", t)
            if not isinstance(maps, list) or not isinstance(weights, list):
                raise ConfigError("convex maps and weights must be lists")
            return ConvexCombination(tuple(parse_map(m) for m in maps), tuple(float(w) for w in weights))
        if t == "scale":
            inner = parse_map(rec["map"]) if "map" in rec else identity()
            return Scale(parse_complex(_need(rec, "c", t), "c"), inner)
        if t == "compose":
            return Compose(parse_map(_need(rec, "outer", t)), parse_map(_need(rec, "inner", t)))
    except InvalidMapError as exc:
        raise ConfigError(str(exc)) from exc
    raise ConfigError(f"unknown map type {t!r}")


def parse_weight(rec) -> RadialWeight:
    if not isinstance(rec, dict) or "type" not in rec:
        raise ConfigError(f"weight spec must be a record with a 'type', got {rec!r}")
    t = rec["type"]
    try:
        if t == "alpha":
            return StandardAlpha(float(_need(rec, "alpha", t)))
        if t == "table":
            return Tabulated(tuple(_need(rec, "radii", t)), tuple(_need(rec, "values", t)), rec.get("tail", "zero"))
        if t == "log":
            return LogWeight(float(rec.get("alpha", 1.0)), float(rec.get("beta", 1.0)))
        if t == "exp":
            return ExpWeight(float(rec.get("c", 1.0)))
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"bad {t} weight: {exc}") from exc
    raise ConfigError(f"unknown weight type {t!r}")


def parse_schedule(v) -> RadiusSchedule | None:
    """``"auto"`` (or missing) gives None, meaning chosen from the map."""
    if v is None or v == "auto":
        return None
    if v == "dyadic":
        return Dyadic()
    if not isinstance(v, dict) or "type" not in v:
        raise ConfigError(f"bad schedule spec {v!r}")
    try:
        if v["type"] == "dyadic":
            return Dyadic()
        if v["type"] == "power":
            return PowerMatched(int(_need(v, "k", "power")))
        if v["type"] == "explicit":
            return Explicit(_need(v, "radii", "explicit"))
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"bad schedule: {exc}") from exc
    raise ConfigError(f"unknown schedule type {v['type']!r}")


@dataclass
class RunConfig:
    map: SelfMap
    weight: RadialWeight | None = None
    space: str = "hinf_nu"
    schedule: RadiusSchedule | None = None
    n_max: int = 24
    grid: GridSpec = field(default_factory=GridSpec)
    decide: float = DECIDE
    reject: float = REJECT
    output_dir: str = "out"
    cesaro: bool = False
    root_cap: int = 64

    def params(self) -> VerdictParams:
        return VerdictParams(
            n_max=self.n_max,
            grid=self.grid,
            decide=self.decide,
            reject=self.reject,
            schedule=self.schedule,
            root_cap=self.root_cap,
            with_cesaro=self.cesaro,
        )

    def resolved(self) -> dict:
        """The fully resolved configuration, embedded in every report."""
        return {
            "map": self.map.to_spec(),
            "weight": None if self.weight is None else self.weight.to_spec(),
            "space": self.space,
            "schedule": "auto" if self.schedule is None else self.schedule.to_dict(),
            "n_max": self.n_max,
            "grid": self.grid.to_dict(),
            "thresholds": {"decide": self.decide, "reject": self.reject},
            "output_dir": self.output_dir,
            "cesaro": self.cesaro,
            "root_cap": self.root_cap,
        }


_KNOWN = {"map", "weight", "space", "schedule", "n_max", "grid", "thresholds", "output_dir", "cesaro", "root_cap"}


def config_from_dict(d: dict) -> RunConfig:
    if not isinstance(d, dict):
        raise ConfigError("configuration must be a JSON object")
    unknown = set(d) - _KNOWN
    if unknown:
        raise ConfigError(f"unknown configuration keys: {sorted(unknown)}")
    if "map" not in d:
        raise ConfigError("configuration needs a 'map'")
    space = d.get("space", "hinf_nu" if d.get("weight") else "hinf")
    if space not in ("hinf", "hinf_nu"):
        raise ConfigError("space must be 'hinf' or 'hinf_nu'")
    weight = parse_weight(d["weight"]) if d.get("weight") is not None else None
    if space == "hinf_nu" and weight is None:
        raise ConfigError("space 'hinf_nu' requires a weight")
    g = d.get("grid", {})
    th = d.get("thresholds", {})
    try:
        cfg = RunConfig(
            map=parse_map(d["map"]),
            weight=weight,
            space=space,
            schedule=parse_schedule(d.get("schedule")),
            n_max=int(d.get("n_max", 24)),
            grid=GridSpec(int(g.get("max_dyadic_level", 24)), int(g.get("angles", 1024))),
            decide=float(th.get("decide", DECIDE)),
            reject=float(th.get("reject", REJECT)),
            output_dir=str(d.get("output_dir", "out")),
            cesaro=bool(d.get("cesaro", False)),
            root_cap=int(d.get("root_cap", 64)),
        )
    except (TypeError, AttributeError) as exc:
        raise ConfigError(f"malformed configuration: {exc}") from exc
    validate_config(cfg)
    return cfg


def validate_config(cfg: RunConfig) -> None:
    if cfg.n_max < 1:
        raise ConfigError("n_max must be at least 1")
    if not cfg.decide < cfg.reject:
        raise ConfigError("thresholds.decide must be below thresholds.reject")
    if cfg.root_cap < 1:
        raise ConfigError("root_cap must be positive")


def load_config(path) -> RunConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    return config_from_dict(data)


def read_nodes(path) -> tuple[list[complex], list[complex] | None]:
    """Node file: ``re im [target_re target_im]`` per line, ``#`` comments."""
    nodes, targets = [], []
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read node file: {exc}") from exc
    for lineno, line in enumerate(lines, start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) not in (2, 4):
            raise ConfigError(f"line {lineno}: expected 2 or 4 numbers, got {len(parts)}")
        try:
            vals = [float(p) for p in parts]
        except ValueError as exc:
            raise ConfigError(f"line {lineno}: {exc}") from exc
        nodes.append(complex(vals[0], vals[1]))
        targets.append(complex(vals[2], vals[3]) if len(vals) == 4 else None)
    if not nodes:
        raise ConfigError("node file has no nodes")
    have = [t is not None for t in targets]
    if all(have):
        return nodes, targets
    if any(have):
        raise ConfigError("either every node line has a target or none does")
    return nodes, None
