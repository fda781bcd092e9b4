import hashlib
import json
import logging
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from wvnn.wvnnerrors import NotFoundError, UsageError
from wvnn.wvnnsettings import get_log_level, settings

logger = logging.getLogger(__name__)
logger.setLevel(get_log_level())

FLOAT_FORMAT = "%.17g"
META_PREFIX = "# "
CURVES_SUFFIX = "__curves.json"


class SweepTable:
    """Fields sampled on the product of named axes, plus provenance.

    Every field array has the shape ``tuple(len(axis) for axis in axes)``.
    """

    def __init__(self, sweep_id: str, observable: str, axes: Dict[str, Sequence[float]], meta: Dict = None):
        self.sweep_id = sweep_id
        self.observable = observable
        self.axes: Dict[str, np.ndarray] = {name: np.asarray(values, dtype=float) for name, values in axes.items()}
        self.fields: Dict[str, np.ndarray] = {}
        self.meta: Dict = dict(meta or {})

    @property
    def shape(self):
        return tuple(len(values) for values in self.axes.values())

    def add_field(self, name: str, values):
        values = np.asarray(values)
        if values.shape != self.shape:
            raise ValueError(f"Field {name} has shape {values.shape}, table has {self.shape}")
        self.fields[name] = values

    def field(self, name: str) -> np.ndarray:
        if name not in self.fields:
            raise NotFoundError(f"Table {self.sweep_id} has no field {name!r}")
        return self.fields[name]

    def axis(self, name: str) -> np.ndarray:
        if name not in self.axes:
            raise NotFoundError(f"Table {self.sweep_id} has no axis {name!r}")
        return self.axes[name]

    @property
    def columns(self) -> List[str]:
        return list(self.axes) + list(self.fields)

    def to_frame(self) -> pd.DataFrame:
        grids = np.meshgrid(*self.axes.values(), indexing="ij")
        data = {name: grid.ravel() for name, grid in zip(self.axes, grids)}
        for name, values in self.fields.items():
            data[name] = values.ravel()
        return pd.DataFrame(data, columns=self.columns)

    def params_hash(self) -> str:
        canonical = json.dumps(self.meta.get("spec", {}), sort_keys=True, default=str)
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:12]

    def file_stem(self) -> str:
        return "__".join(
            [get_safe_filename(self.sweep_id), get_safe_filename(self.observable), self.params_hash()]
        )

    def __repr__(self):
        return f"SweepTable({self.sweep_id}, {self.observable}, shape={self.shape}, fields={list(self.fields)})"


@dataclass
class TableFile:
    """A stored sweep table or level-curve file."""

    name: str
    path: str
    size: int

    @property
    def kind(self) -> str:
        return "curves" if self.name.endswith(CURVES_SUFFIX) else "table"

    @staticmethod
    def human_readable_size(size, decimal_places=3):
        for unit in ["B", "KB", "MB", "GB", "TB"]:
            if size < 1024.0:
                break
            size /= 1024.0
        return f"{size:.{decimal_places}f} {unit}"

    def to_dict(self) -> Dict:
        return {"name": self.name, "path": self.path, "kind": self.kind, "size": self.human_readable_size(self.size, 0)}

    def __str__(self):
        return f"{self.name} - {self.human_readable_size(self.size, decimal_places=0)}"


def list_table_files_from_path(root: str) -> List[TableFile]:
    """Every CSV and JSON file below ``root``, sorted by path."""
    table_files = []
    for path, _, files in os.walk(root):
        for name in files:
            if name.endswith((".csv", ".json")):
                full = os.path.join(path, name)
                table_files.append(TableFile(name, full, os.path.getsize(full)))
    return sorted(table_files, key=lambda tf: tf.path)


def _meta_with_layout(table: SweepTable) -> Dict:
    meta = {
        "sweep_id": table.sweep_id,
        "observable": table.observable,
        "axes": list(table.axes),
    }
    meta.update(table.meta)
    return meta


def _meta_line(key: str, value) -> str:
    if isinstance(value, str):
        text = value
    else:
        text = json.dumps(value, sort_keys=True, default=str)
    return f"{META_PREFIX}{key}: {text}\n"


def _parse_meta_value(text: str):
    try:
        return json.loads(text)
    except ValueError:
        return text


def _plain(value):
    if isinstance(value, np.generic):
        return value.item()
    return value


def _output_path(table: SweepTable, suffix: str, folder: Optional[str]) -> str:
    storage_folder = folder or settings.data_dir()
    Path(storage_folder).mkdir(parents=True, exist_ok=True)
    return os.path.join(storage_folder, table.file_stem() + suffix)


def write_table_csv(table: SweepTable, stream):
    for key, value in _meta_with_layout(table).items():
        stream.write(_meta_line(key, value))
    table.to_frame().to_csv(stream, index=False, float_format=FLOAT_FORMAT, na_rep="nan", lineterminator="\n")


def table_to_json_dict(table: SweepTable) -> Dict:
    frame = table.to_frame()
    rows = [[_plain(v) for v in row] for row in frame.itertuples(index=False, name=None)]
    return {"meta": _meta_with_layout(table), "columns": list(frame.columns), "rows": rows}


def save_table_to_csv(table: SweepTable, folder: str = None) -> str:
    path = _output_path(table, ".csv", folder)
    with open(path, "w", encoding="utf-8", newline="") as f:
        write_table_csv(table, f)
    logger.info(f"Wrote {table.sweep_id} ({np.prod(table.shape)} rows) to {path}")
    return path


def save_table_to_json(table: SweepTable, folder: str = None) -> str:
    path = _output_path(table, ".json", folder)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(table_to_json_dict(table), f)
    logger.info(f"Wrote {table.sweep_id} ({np.prod(table.shape)} rows) to {path}")
    return path


def save_table(table: SweepTable, fmt: str = "csv", folder: str = None) -> str:
    if fmt == "csv":
        return save_table_to_csv(table, folder)
    if fmt == "json":
        return save_table_to_json(table, folder)
    raise UsageError(f"Unknown table format {fmt!r}, expected csv or json")


def _table_from_frame(meta: Dict, frame: pd.DataFrame) -> SweepTable:
    meta = dict(meta)
    sweep_id = meta.pop("sweep_id", "table")
    observable = meta.pop("observable", "unknown")
    axis_names = meta.pop("axes", [])
    axes = {name: pd.unique(frame[name]) for name in axis_names}
    table = SweepTable(sweep_id, observable, axes, meta)
    for name in frame.columns:
        if name not in table.axes:
            table.add_field(name, frame[name].to_numpy().reshape(table.shape))
    return table


def load_table_from_csv(path: str) -> SweepTable:
    if not os.path.isfile(path):
        raise NotFoundError(f"No table file at {path}")
    meta = {}
    skip = 0
    with open(path, "r", encoding="utf-8") as f:
        for line in f:
            if not line.startswith(META_PREFIX):
                break
            key, _, text = line[len(META_PREFIX):].rstrip("\n").partition(": ")
            meta[key] = _parse_meta_value(text)
            skip += 1
    frame = pd.read_csv(path, skiprows=skip, float_precision="round_trip")
    return _table_from_frame(meta, frame)


def load_table_from_json(path: str) -> SweepTable:
    if not os.path.isfile(path):
        raise NotFoundError(f"No table file at {path}")
    with open(path, "r", encoding="utf-8") as f:
        data = json.load(f)
    frame = pd.DataFrame(data["rows"], columns=data["columns"])
    return _table_from_frame(data["meta"], frame)


def get_safe_filename(unsafe_filename: str) -> str:
    return "".join(x for x in unsafe_filename if x.isalnum() or x in "._- ").replace(
        " ", "_"
    )


def save_curves_to_json(table: SweepTable, curves: Dict[str, List[Dict]], folder: str = None) -> str:
    """Level curves next to their table, keyed by the level as written in the config."""
    path = _output_path(table, CURVES_SUFFIX, folder)
    with open(path, "w", encoding="utf-8") as f:
        json.dump({"sweep_id": table.sweep_id, "observable": table.observable, "levels": curves}, f)
    logger.info(f"Wrote {sum(len(c) for c in curves.values())} level curves to {path}")
    return path
