"""Flat ``key = value`` run configurations and the shipped figure presets.

A config file names one sweep kind and its parameters. ``runs_over`` names
a key whose comma separated values each become a run of their own.
"""

import logging
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import numpy as np

from wvnn import wvnnsweep
from wvnn.wvnnerrors import UsageError
from wvnn.wvnnsettings import get_log_level
from wvnn.wvnnstates import HALF_PI, observable_from_spec, parse_angle
from wvnn.wvnntable import SweepTable

logger = logging.getLogger(__name__)
logger.setLevel(get_log_level())

PRESET_DIR = Path(__file__).resolve().parent / "presets"
SWEEP_KINDS = ("state-grid", "observable", "eigen", "family", "phase-curve")
DEFAULT_LEVELS = "1, 1.001, 2"


def read_config_file(path) -> Dict[str, str]:
    file = Path(path)
    if not file.is_file():
        raise UsageError(f"Config file {path} does not exist")
    values = {}
    for number, raw in enumerate(file.read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep or not key.strip():
            raise UsageError(f"{file.name}:{number}: expected 'key = value', got {raw.strip()!r}")
        values[key.strip().replace("-", "_")] = value.strip()
    return values


def find_preset(name: str, preset_dir: Path = None) -> Path:
    folder = Path(preset_dir) if preset_dir else PRESET_DIR
    path = folder / f"{name}.cfg"
    if not path.is_file():
        known = sorted(p.stem for p in folder.glob("*.cfg")) if folder.is_dir() else []
        raise UsageError(f"Unknown preset {name!r}, known presets: {', '.join(known) or 'none'}")
    return path


def list_presets(preset_dir: Path = None) -> List[str]:
    folder = Path(preset_dir) if preset_dir else PRESET_DIR
    return sorted(p.stem for p in folder.glob("*.cfg"))


def split_list(text: str) -> List[str]:
    return [item.strip() for item in text.split(",") if item.strip()]


@dataclass
class RunConfig:
    """One sweep invocation: file values merged with command-line overrides."""

    values: Dict[str, str] = field(default_factory=dict)
    source: Optional[str] = None

    @classmethod
    def from_file(cls, path) -> "RunConfig":
        return cls(read_config_file(path), str(path))

    @classmethod
    def from_preset(cls, name: str, preset_dir: Path = None) -> "RunConfig":
        config = cls.from_file(find_preset(name, preset_dir))
        config.values.setdefault("sweep_id", name)
        return config

    def merged(self, overrides: Dict[str, Optional[str]]) -> "RunConfig":
        values = dict(self.values)
        values.update({k: str(v) for k, v in overrides.items() if v is not None})
        return replace(self, values=values)

    @property
    def kind(self) -> str:
        kind = self.values.get("sweep")
        if kind not in SWEEP_KINDS:
            raise UsageError(f"'sweep' must be one of {', '.join(SWEEP_KINDS)}, got {kind!r}")
        return kind

    @property
    def sweep_id(self) -> str:
        return self.values.get("sweep_id", self.kind)

    def get(self, key: str, default: str = None) -> str:
        if key in self.values:
            return self.values[key]
        if default is None:
            raise UsageError(f"Missing required key {key!r} for a {self.values.get('sweep')} sweep")
        return default

    def angle(self, key: str, default: float = None) -> float:
        if key not in self.values and default is not None:
            return default
        return parse_angle(self.get(key))

    def angles(self, key: str) -> List[float]:
        items = split_list(self.get(key))
        if not items:
            raise UsageError(f"{key} lists no values")
        return [parse_angle(x) for x in items]

    def integer(self, key: str, default: int) -> int:
        text = self.values.get(key)
        if text is None:
            return default
        try:
            return int(text)
        except ValueError:
            raise UsageError(f"{key} must be an integer, got {text!r}")

    def axis(self, key: str, default: Tuple[float, float, int]) -> Tuple[float, float, int]:
        """'lo, hi, steps' with angle expressions for the bounds."""
        if key not in self.values:
            return default
        items = split_list(self.values[key])
        if len(items) != 3:
            raise UsageError(f"{key} must be 'lo, hi, steps', got {self.values[key]!r}")
        try:
            steps = int(items[2])
        except ValueError:
            raise UsageError(f"{key} steps must be an integer, got {items[2]!r}")
        if steps < 2:
            raise UsageError(f"{key} needs at least 2 steps, got {steps}")
        return parse_angle(items[0]), parse_angle(items[1]), steps

    def interval(self, key: str) -> Optional[Tuple[float, float]]:
        if key not in self.values:
            return None
        items = split_list(self.values[key])
        if len(items) != 2:
            raise UsageError(f"{key} must be 'lo, hi', got {self.values[key]!r}")
        return parse_angle(items[0]), parse_angle(items[1])

    def levels(self) -> List[float]:
        try:
            return [float(x) for x in split_list(self.values.get("levels", DEFAULT_LEVELS))]
        except ValueError:
            raise UsageError(f"levels must be numbers, got {self.values['levels']!r}")

    def expand_runs(self) -> List["RunConfig"]:
        key = self.values.get("runs_over")
        if not key:
            return [self]
        if key not in self.values:
            raise UsageError(f"runs_over names {key!r} which has no values")
        runs = []
        for k, item in enumerate(split_list(self.values[key]), start=1):
            values = {name: value for name, value in self.values.items() if name != "runs_over"}
            values[key] = item
            values["sweep_id"] = f"{self.sweep_id}-{k}"
            runs.append(RunConfig(values, self.source))
        logger.debug(f"Expanded {self.sweep_id} over {key} into {len(runs)} runs")
        return runs


def _phases(config: RunConfig) -> Tuple[float, float]:
    if "phases" in config.values:
        pair = config.values["phases"].split(":")
        if len(pair) != 2:
            raise UsageError(f"phases must be 'xi_i:xi_f', got {config.values['phases']!r}")
        return parse_angle(pair[0]), parse_angle(pair[1])
    return config.angle("xi_i", 0.0), config.angle("xi_f", 0.0)


def _theta_i_values(config: RunConfig) -> List[float]:
    if "theta_i_values" in config.values:
        return config.angles("theta_i_values")
    lo, hi, steps = config.axis("theta_i", (0.0, HALF_PI, 0))
    if steps == 0:
        raise UsageError("Need theta_i_values or a 'theta_i = lo, hi, count' range")
    return list(np.linspace(lo, hi, steps))


def grid_spec(config: RunConfig) -> wvnnsweep.GridSpec:
    o = observable_from_spec(config.get("observable"))
    full = (0.0, HALF_PI, wvnnsweep.DEFAULT_STATE_STEPS)
    extra = {key: config.angle(key) for key in wvnnsweep.QUTRIT_KEYS if key in config.values}
    return wvnnsweep.GridSpec(
        observable=o,
        theta_i_range=config.axis("theta_i", full),
        theta_f_range=config.axis("theta_f", full),
        fixed_phases=_phases(config),
        extra_params=extra,
        sweep_id=config.sweep_id,
    )


def build_table(config: RunConfig) -> SweepTable:
    """Run the sweep a single (already expanded) config describes."""
    kind = config.kind
    if kind == "state-grid":
        return wvnnsweep.state_grid_sweep(grid_spec(config))
    if kind == "observable":
        return wvnnsweep.observable_sweep(
            _theta_i_values(config),
            config.angle("phi"),
            config.angle("theta_f", 0.0),
            config.interval("theta_range"),
            config.integer("steps", wvnnsweep.DEFAULT_THETA_STEPS),
            sweep_id=config.sweep_id,
        )
    if kind == "eigen":
        return wvnnsweep.eigen_sweep(
            _theta_i_values(config),
            config.angle("phi"),
            config.angle("theta_f", 0.0),
            config.interval("theta_range") or (0.0, HALF_PI),
            config.integer("steps", wvnnsweep.DEFAULT_THETA_STEPS),
            sweep_id=config.sweep_id,
        )
    if kind == "family":
        return wvnnsweep.family_sweep(
            _theta_i_values(config),
            config.angle("phi", np.pi / 4),
            config.angle("theta_f", 0.0),
            config.integer("steps", wvnnsweep.DEFAULT_THETA_STEPS),
            sweep_id=config.sweep_id,
        )
    xi_i, xi_f = _phases(config)
    return wvnnsweep.phase_curve_sweep(
        config.angle("theta_i"), xi_i, xi_f, config.integer("steps", 200), sweep_id=config.sweep_id
    )
