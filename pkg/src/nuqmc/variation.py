"""Quasi-volumes, Vitali and Hardy-Krause variation, and the correspondence
between right-continuous functions of bounded variation and signed measures.

Functions live on rectangular grids (:class:`GridFunction`).  Variation of a
grid function is defined as the supremum over sub-partitions of its own grid;
by refinement monotonicity that supremum is attained at the finest grid, so
every variation here is a finite sum over grid cells.  For the two supported
interpretations -- multilinear interpolation and right-continuous step
extension -- the grid supremum equals the true variation of the extended
function, because cell quasi-volume densities keep a constant sign inside
each cell.  No such claim is made for other extensions.

Decompositions (the prefix-variation split into completely monotone parts and
the unique variation-additive split) are exact at grid vertices; for step
functions they are exact everywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

import numpy as np

from .errors import DimensionMismatchError, ValidationError
from .measures import DiscreteSignedMeasure

#: Interpretation flags for :class:`GridFunction`.
STEP = "step"
MULTILINEAR = "multilinear"

#: Anchor flags for Hardy-Krause variation.
ANCHOR_ONE = "one"
ANCHOR_ZERO = "zero"

#: Slack for sign tests on quasi-volumes (fixtures use non-dyadic rationals).
MONOTONE_TOL = 1e-12


@dataclass(frozen=True)
class Box:
    """A closed axis-parallel box ``[lower, upper]`` inside the unit cube."""

    lower: tuple[float, ...]
    upper: tuple[float, ...]

    def __post_init__(self) -> None:
        lo = np.asarray(self.lower, dtype=float)
        hi = np.asarray(self.upper, dtype=float)
        if lo.shape != hi.shape or lo.ndim != 1:
            raise ValidationError("box corners must be points of equal dimension")
        if np.any(lo < 0.0) or np.any(hi > 1.0) or np.any(lo > hi):
            raise ValidationError("box needs 0 <= lower <= upper <= 1 componentwise")
        object.__setattr__(self, "lower", tuple(float(x) for x in lo))
        object.__setattr__(self, "upper", tuple(float(x) for x in hi))

    @property
    def dimension(self) -> int:
        return len(self.lower)


@dataclass(frozen=True)
class FaceSelector:
    """A nonempty set of free axes; the remaining axes are pinned to the
    anchor corner (1 or 0)."""

    axes: tuple[int, ...]
    anchor: str = ANCHOR_ONE

    def __post_init__(self) -> None:
        axes = tuple(sorted(set(int(a) for a in self.axes)))
        if not axes:
            raise ValidationError("face needs at least one free axis")
        if self.anchor not in (ANCHOR_ONE, ANCHOR_ZERO):
            raise ValidationError(f"unknown anchor {self.anchor!r}")
        object.__setattr__(self, "axes", axes)


class GridFunction:
    """A function on ``[0,1]^d`` given by vertex values on a rectangular grid.

    Parameters
    ----------
    breakpoints:
        One strictly increasing array per axis, each starting at 0.0 and
        ending at 1.0.
    values:
        Array of vertex values, shape ``(len(b_1), ..., len(b_d))``
        (row-major / C order).
    interp:
        ``"step"`` for the right-continuous step extension (constant on
        half-open grid cells) or ``"multilinear"`` for cellwise multilinear
        interpolation.
    """

    def __init__(self, breakpoints, values, interp: str = STEP) -> None:
        bps = []
        for b in breakpoints:
            arr = np.asarray(b, dtype=float)
            if arr.ndim != 1 or arr.size < 2:
                raise ValidationError("each axis needs >= 2 breakpoints")
            if arr[0] != 0.0 or arr[-1] != 1.0:
                raise ValidationError("breakpoints must start at 0.0 and end at 1.0")
            if np.any(np.diff(arr) <= 0):
                raise ValidationError("breakpoints must be strictly increasing")
            arr.flags.writeable = False
            bps.append(arr)
        if not bps:
            raise ValidationError("dimension must be >= 1")
        vals = np.asarray(values, dtype=float)
        shape = tuple(b.size for b in bps)
        if vals.size == int(np.prod(shape)):
            vals = vals.reshape(shape)
        if vals.shape != shape:
            raise ValidationError(
                f"values shape {vals.shape} does not match grid shape {shape}"
            )
        if not np.all(np.isfinite(vals)):
            raise ValidationError("vertex values must be finite")
        if interp not in (STEP, MULTILINEAR):
            raise ValidationError(f"unknown interpretation {interp!r}")
        vals = vals.copy()
        vals.flags.writeable = False
        self.breakpoints = tuple(bps)
        self.values = vals
        self.interp = interp

    @property
    def dimension(self) -> int:
        return len(self.breakpoints)

    @property
    def shape(self) -> tuple[int, ...]:
        return self.values.shape

    def __repr__(self) -> str:
        return f"GridFunction(d={self.dimension}, shape={self.shape}, interp={self.interp!r})"

    def value_at_origin(self) -> float:
        return float(self.values.flat[0])

    def with_values(self, values) -> "GridFunction":
        return GridFunction(self.breakpoints, values, self.interp)

    def vertex_index(self, point) -> tuple[int, ...]:
        """Grid index of a point that must lie exactly on the grid."""
        p = np.asarray(point, dtype=float).reshape(-1)
        if p.size != self.dimension:
            raise DimensionMismatchError(
                f"point has {p.size} coordinates, expected {self.dimension}"
            )
        idx = []
        for s, b in enumerate(self.breakpoints):
            pos = int(np.searchsorted(b, p[s]))
            if pos >= b.size or b[pos] != p[s]:
                raise ValidationError(f"coordinate {p[s]!r} is not a breakpoint of axis {s}")
            idx.append(pos)
        return tuple(idx)

    def vertex_coordinates(self) -> np.ndarray:
        """All grid vertices as an ``(n_vertices, d)`` array (C order)."""
        mesh = np.meshgrid(*self.breakpoints, indexing="ij")
        return np.stack([m.reshape(-1) for m in mesh], axis=-1)

    def evaluate(self, points) -> np.ndarray:
        """Evaluate the interpreted function at points of ``[0,1]^d``."""
        pts = np.asarray(points, dtype=float)
        squeeze = pts.ndim == 1
        pts = np.atleast_2d(pts)
        if pts.shape[1] != self.dimension:
            raise DimensionMismatchError(
                f"points have {pts.shape[1]} coordinates, expected {self.dimension}"
            )
        if np.any(pts < 0.0) or np.any(pts > 1.0):
            raise ValidationError("evaluation points must lie in [0,1]^d")
        if self.interp == STEP:
            idx = tuple(
                np.searchsorted(b, pts[:, s], side="right") - 1
                for s, b in enumerate(self.breakpoints)
            )
            out = self.values[idx]
        else:
            d = self.dimension
            cell = []
            frac = []
            for s, b in enumerate(self.breakpoints):
                j = np.clip(np.searchsorted(b, pts[:, s], side="right") - 1, 0, b.size - 2)
                cell.append(j)
                frac.append((pts[:, s] - b[j]) / (b[j + 1] - b[j]))
            out = np.zeros(pts.shape[0])
            for bits in range(1 << d):
                weight = np.ones(pts.shape[0])
                index = []
                for s in range(d):
                    if bits >> s & 1:
                        index.append(cell[s] + 1)
                        weight = weight * frac[s]
                    else:
                        index.append(cell[s])
                        weight = weight * (1.0 - frac[s])
                out = out + weight * self.values[tuple(index)]
        return float(out[0]) if squeeze else out


@dataclass(frozen=True)
class JordanPair:
    """The unique variation-additive split ``f = f(0) + f_plus - f_minus``
    into completely monotone parts vanishing at the origin."""

    f_plus: GridFunction
    f_minus: GridFunction


def _cell_sum(values: np.ndarray, axes: Sequence[int], pin_index: int | None) -> float:
    """Sum of |quasi-volume| over the finest cells of a face restriction."""
    v = values
    for s in range(values.ndim):
        if s not in axes and pin_index is not None:
            v = np.take(v, [pin_index], axis=s)
    for s in axes:
        v = np.diff(v, axis=s)
    return float(np.abs(v).sum())


def quasi_volume(f: GridFunction, box: Box) -> float:
    """Alternating corner sum of ``f`` over a grid-aligned box.

    The corner at ``upper`` enters with positive sign; axes of zero extent
    contribute zero.  Corners must lie on grid vertices (callers snap).
    """
    if box.dimension != f.dimension:
        raise DimensionMismatchError("box and function dimensions differ")
    lo = f.vertex_index(box.lower)
    hi = f.vertex_index(box.upper)
    v = f.values
    for s in range(f.dimension):
        v = np.take(v, [hi[s]], axis=s) - np.take(v, [lo[s]], axis=s)
    return float(v.reshape(()))


def vitali_variation(f: GridFunction, face: FaceSelector | None = None) -> float:
    """Variation in the sense of Vitali over the full grid or a face.

    With a face selector, the function is restricted to the face whose free
    axes are ``face.axes`` and whose remaining coordinates are pinned at the
    anchor corner.  The supremum over sub-partitions of the grid is attained
    at the finest grid, which is what gets summed.
    """
    if face is None:
        return _cell_sum(f.values, tuple(range(f.dimension)), None)
    if face.axes[-1] >= f.dimension:
        raise ValidationError("face axis out of range")
    pin = -1 if face.anchor == ANCHOR_ONE else 0
    return _cell_sum(f.values, face.axes, pin)


def hk_variation(f: GridFunction, anchor: str = ANCHOR_ONE) -> float:
    """Hardy-Krause variation of ``f`` anchored at 1 (or at 0).

    Sums the Vitali variation of ``f`` restricted to every face adjacent to
    the anchor corner, over all ``2^d - 1`` nonempty axis subsets.
    """
    if anchor not in (ANCHOR_ONE, ANCHOR_ZERO):
        raise ValidationError(f"unknown anchor {anchor!r}")
    pin = -1 if anchor == ANCHOR_ONE else 0
    d = f.dimension
    total = 0.0
    for r in range(1, d + 1):
        for axes in combinations(range(d), r):
            total += _cell_sum(f.values, axes, pin)
    return total


def hk0_prefix_grid(f: GridFunction) -> np.ndarray:
    """Anchored-at-0 variation of ``f`` on ``[0, v]`` for every grid vertex ``v``.

    Returned as an array over the grid; the origin entry is 0.
    """
    vals = f.values
    d = f.dimension
    out = np.zeros(vals.shape)
    for r in range(1, d + 1):
        for axes in combinations(range(d), r):
            v = vals
            for s in range(d):
                if s not in axes:
                    v = np.take(v, [0], axis=s)
            for s in axes:
                v = np.diff(v, axis=s)
            v = np.abs(v)
            for s in axes:
                v = np.cumsum(v, axis=s)
            pad = [(1, 0) if s in axes else (0, 0) for s in range(d)]
            out += np.pad(v, pad)
    return out


def hk0_prefix(f: GridFunction, x) -> float:
    """Anchored-at-0 variation of ``f`` on the sub-box ``[0, x]``.

    ``x`` must be a grid vertex; the degenerate box ``[0, 0]`` has
    variation 0.
    """
    idx = f.vertex_index(x)
    return float(hk0_prefix_grid(f)[idx])


def leonov_decompose(f: GridFunction) -> tuple[GridFunction, GridFunction]:
    """Prefix-variation split ``f = f1 - f2`` into completely monotone parts.

    ``f1`` is the anchored prefix variation ``x -> V(f; [0, x])`` and
    ``f2 = f1 - f``.  This split is not variation-minimal; see
    :func:`jordan_decompose_function` for the unique minimal one.
    """
    prefix = hk0_prefix_grid(f)
    return f.with_values(prefix), f.with_values(prefix - f.values)


def jordan_decompose_function(f: GridFunction) -> JordanPair:
    """The unique split ``f = f(0) + f_plus - f_minus`` into completely
    monotone parts vanishing at the origin whose anchored-at-0 variations add
    up to the variation of ``f``.

    ``f_plus = (prefix + (f - f(0))) / 2`` and
    ``f_minus = (prefix - (f - f(0))) / 2`` where ``prefix`` is the anchored
    prefix variation.
    """
    prefix = hk0_prefix_grid(f)
    centered = f.values - f.value_at_origin()
    return JordanPair(
        f_plus=f.with_values(0.5 * (prefix + centered)),
        f_minus=f.with_values(0.5 * (prefix - centered)),
    )


def is_completely_monotone(f: GridFunction, tol: float = MONOTONE_TOL) -> bool:
    """True iff every quasi-volume of every dimension is ``>= -tol``.

    Checks all nonempty axis subsets with the remaining coordinates pinned at
    every grid position; adjacent-cell boxes suffice since larger boxes are
    sums of adjacent ones.  Cost grows like ``3^d`` times the grid size.
    """
    d = f.dimension
    for r in range(1, d + 1):
        for axes in combinations(range(d), r):
            v = f.values
            for s in axes:
                v = np.diff(v, axis=s)
            if v.size and float(v.min()) < -tol:
                return False
    return True


def mirror(f: GridFunction) -> GridFunction:
    """Reflect through the cube center: ``g(x) = f(1 - x)``.

    Exchanges the roles of the two anchors:
    ``hk_variation(f, "one") == hk_variation(mirror(f), "zero")``.
    """
    bps = tuple(np.ascontiguousarray((1.0 - b)[::-1]) for b in f.breakpoints)
    vals = f.values[(slice(None, None, -1),) * f.dimension]
    return GridFunction(bps, vals, f.interp)


def function_to_measure(f: GridFunction) -> DiscreteSignedMeasure:
    """Signed measure whose anchored CDF reproduces a step grid function.

    Atom weights are the d-fold mixed backward differences of the vertex
    values (an axis at coordinate 0 has no predecessor and contributes the
    anchored value itself, so ``f(0)`` lands as an atom at the origin).
    Satisfies ``cdf_eval(result, v) == f(v)`` at every grid vertex and
    ``total_variation(result) == hk_variation(f, "zero") + |f(0)|``.
    """
    if f.interp != STEP:
        raise ValidationError("function_to_measure needs the step interpretation")
    w = f.values
    for s in range(f.dimension):
        w = np.diff(w, axis=s, prepend=0.0)
    coords = f.vertex_coordinates()
    weights = w.reshape(-1)
    mask = weights != 0.0
    return DiscreteSignedMeasure(f.dimension, zip(coords[mask], weights[mask]))


def measure_to_function(nu: DiscreteSignedMeasure) -> GridFunction:
    """Right-continuous step function ``x -> nu([0, x])``.

    The grid is the atom coordinates united with {0, 1} per axis;
    round-trips with :func:`function_to_measure`.
    """
    d = nu.dimension
    bps = []
    for s in range(d):
        bps.append(np.unique(np.concatenate([[0.0, 1.0], nu.axis_coordinates(s)])))
    vals = np.zeros(tuple(b.size for b in bps))
    if len(nu):
        idx = tuple(
            np.searchsorted(bps[s], nu.locations[:, s]) for s in range(d)
        )
        np.add.at(vals, idx, nu.weights)
    for s in range(d):
        np.cumsum(vals, axis=s, out=vals)
    return GridFunction(bps, vals, STEP)


def box_indicator(upper) -> GridFunction:
    """Step indicator of the half-open anchored box ``[0, upper)``.

    The closed-box indicator is not right-continuous, so this is the step
    representative; counts and masses agree with the closed box whenever no
    point or atom sits exactly on the boundary.
    """
    u = np.asarray(upper, dtype=float).reshape(-1)
    if np.any(u < 0.0) or np.any(u > 1.0):
        raise ValidationError("box corner must lie in [0,1]^d")
    bps = [np.unique(np.concatenate([[0.0, 1.0], [c]])) for c in u]
    vals = np.ones(tuple(b.size for b in bps))
    for s, b in enumerate(bps):
        shape = [1] * len(bps)
        shape[s] = b.size
        vals = vals * (b < u[s]).astype(float).reshape(shape)
    return GridFunction(bps, vals, STEP)


def corner_indicator(lower) -> GridFunction:
    """Step indicator of the closed corner box ``[lower, 1]``.

    This one is right-continuous, hence exactly representable.
    """
    c = np.asarray(lower, dtype=float).reshape(-1)
    if np.any(c < 0.0) or np.any(c > 1.0):
        raise ValidationError("box corner must lie in [0,1]^d")
    bps = [np.unique(np.concatenate([[0.0, 1.0], [x]])) for x in c]
    vals = np.ones(tuple(b.size for b in bps))
    for s, b in enumerate(bps):
        shape = [1] * len(bps)
        shape[s] = b.size
        vals = vals * (b >= c[s]).astype(float).reshape(shape)
    return GridFunction(bps, vals, STEP)
