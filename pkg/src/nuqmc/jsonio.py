"""JSON schemas for the CLI: measures, point sets, and grid functions.

Schemas
-------
measure::

    {"type": "uniform", "d": 2}
    {"type": "discrete", "atoms": [{"x": [0.5, 0.5], "w": 1.0}, ...]}
    {"type": "product", "axes": [{"breakpoints": [...], "values": [...],
                                  "values_left": [...]}, ...]}
    {"type": "chelson"}

point set::

    {"d": 2, "points": [[...], [...], ...]}

grid function::

    {"breakpoints": [[...axis 1...], [...axis 2...]],
     "values": [... row-major vertex values ...],
     "interp": "step" | "multilinear"}
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import ValidationError
from .measures import AxisCdf, DiscreteMeasure, DiscreteSignedMeasure, ProductMeasure, UniformMeasure
from .discrepancy import PointSet
from .transforms import chelson_measure
from .variation import GridFunction, STEP


def load_json(path) -> object:
    text = Path(path).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as err:
        raise ValidationError(
            f"{path}: malformed JSON at line {err.lineno} column {err.colno}: {err.msg}"
        ) from err


def _require(obj: dict, field: str, where: str):
    if field not in obj:
        raise ValidationError(f"{where}: missing field {field!r}")
    return obj[field]


def measure_from_dict(obj, where: str = "measure"):
    if not isinstance(obj, dict):
        raise ValidationError(f"{where}: expected an object")
    kind = _require(obj, "type", where)
    if kind == "uniform":
        return UniformMeasure(int(_require(obj, "d", where)))
    if kind == "discrete":
        atoms = _require(obj, "atoms", where)
        if not isinstance(atoms, list) or not atoms:
            raise ValidationError(f"{where}.atoms: expected a nonempty list")
        locs, ws = [], []
        for i, atom in enumerate(atoms):
            locs.append(_require(atom, "x", f"{where}.atoms[{i}]"))
            ws.append(float(_require(atom, "w", f"{where}.atoms[{i}]")))
        d = len(locs[0])
        return DiscreteMeasure(DiscreteSignedMeasure(d, zip(locs, ws)))
    if kind == "product":
        axes = _require(obj, "axes", where)
        if not isinstance(axes, list) or not axes:
            raise ValidationError(f"{where}.axes: expected a nonempty list")
        built = []
        for i, ax in enumerate(axes):
            built.append(
                AxisCdf(
                    _require(ax, "breakpoints", f"{where}.axes[{i}]"),
                    _require(ax, "values", f"{where}.axes[{i}]"),
                    ax.get("values_left"),
                )
            )
        return ProductMeasure(built)
    if kind == "chelson":
        return chelson_measure()
    raise ValidationError(f"{where}.type: unknown measure type {kind!r}")


def points_from_dict(obj, where: str = "points"):
    if not isinstance(obj, dict):
        raise ValidationError(f"{where}: expected an object")
    d = int(_require(obj, "d", where))
    pts = _require(obj, "points", where)
    return PointSet(d, pts)


def points_to_dict(ps: PointSet) -> dict:
    return {"d": ps.dimension, "points": [list(map(float, p)) for p in ps.points]}


def grid_function_from_dict(obj, where: str = "function") -> GridFunction:
    if not isinstance(obj, dict):
        raise ValidationError(f"{where}: expected an object")
    bps = _require(obj, "breakpoints", where)
    values = _require(obj, "values", where)
    interp = obj.get("interp", STEP)
    return GridFunction(bps, np.asarray(values, dtype=float), interp)


def grid_function_to_dict(f: GridFunction) -> dict:
    return {
        "breakpoints": [list(map(float, b)) for b in f.breakpoints],
        "values": [float(v) for v in f.values.reshape(-1)],
        "interp": f.interp,
    }


def load_measure(path):
    return measure_from_dict(load_json(path), where=str(path))


def load_points(path) -> PointSet:
    return points_from_dict(load_json(path), where=str(path))


def load_grid_function(path) -> GridFunction:
    return grid_function_from_dict(load_json(path), where=str(path))
