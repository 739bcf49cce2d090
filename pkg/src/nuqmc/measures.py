"""Normalized and signed Borel measures on the unit cube ``[0,1]^d``.

A measure is represented by its anchored distribution function
``F(a) = mass([0, a])`` over closed anchored boxes.  Four concrete
representations are provided:

* :class:`UniformMeasure` -- Lebesgue measure on the cube,
* :class:`DiscreteMeasure` -- a probability measure on finitely many atoms,
* :class:`ProductMeasure` -- a product of one-dimensional CDFs
  (:class:`AxisCdf`), each allowed to carry jumps (atoms) and plateaus,
* :class:`AnalyticCdfMeasure` -- a closed-form CDF callback.

Signed measures are restricted to the purely atomic case
(:class:`DiscreteSignedMeasure`), which is all the function/measure
correspondence of :mod:`nuqmc.variation` produces.  Jordan decomposition and
total variation are exact there.

All numeric comparisons in this package use a documented floating point
tolerance of ``1e-12`` (non-dyadic rational fixtures make bit-exact
comparisons impossible).  Every object is immutable after construction and
every operation is a pure function, so concurrent evaluation needs no
synchronization.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Sequence, Union

import numpy as np

from .errors import (
    DimensionMismatchError,
    UnsupportedMeasureError,
    ValidationError,
)

#: Comparison tolerance for normalization / mass checks.
TOLERANCE = 1e-12

#: Per-axis evaluation flags for one-sided CDF limits.
AT_POINT = "at"
LEFT_LIMIT = "left"


def _unit_point(a, dimension: int, name: str = "point") -> np.ndarray:
    arr = np.asarray(a, dtype=float).reshape(-1)
    if arr.size != dimension:
        raise DimensionMismatchError(
            f"{name} has {arr.size} coordinates, expected {dimension}"
        )
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{name} has non-finite coordinates: {arr}")
    if np.any(arr < 0.0) or np.any(arr > 1.0):
        raise ValidationError(f"{name} must lie in [0,1]^d, got {arr}")
    return arr


def _limit_flags(flags, dimension: int) -> tuple[str, ...]:
    if flags is None:
        return (AT_POINT,) * dimension
    out = tuple(flags)
    if len(out) != dimension:
        raise DimensionMismatchError(
            f"expected {dimension} limit flags, got {len(out)}"
        )
    for f in out:
        if f not in (AT_POINT, LEFT_LIMIT):
            raise ValidationError(f"unknown limit flag {f!r}")
    return out


@dataclass(frozen=True)
class Atom:
    """A weighted point mass.  The weight may be negative (signed measures)."""

    location: tuple[float, ...]
    weight: float


class DiscreteSignedMeasure:
    """A finite signed measure supported on finitely many distinct atoms.

    Atoms at identical locations are merged at construction (weights summed,
    exact zeros dropped), which makes Jordan decomposition and total
    variation canonical.
    """

    def __init__(self, dimension: int, atoms: Iterable) -> None:
        if dimension < 1:
            raise ValidationError("dimension must be >= 1")
        self.dimension = int(dimension)
        locs: list[np.ndarray] = []
        ws: list[float] = []
        for atom in atoms:
            if isinstance(atom, Atom):
                loc, w = atom.location, atom.weight
            else:
                loc, w = atom
            locs.append(_unit_point(loc, self.dimension, "atom location"))
            w = float(w)
            if not np.isfinite(w):
                raise ValidationError("atom weight must be finite")
            ws.append(w)
        if locs:
            locations = np.asarray(locs)
            weights = np.asarray(ws)
            # merge duplicates: lexicographic sort, sum runs of equal rows
            order = np.lexsort(locations.T[::-1])
            locations = locations[order]
            weights = weights[order]
            keep_locs: list[np.ndarray] = []
            keep_ws: list[float] = []
            for loc, w in zip(locations, weights):
                if keep_locs and np.array_equal(keep_locs[-1], loc):
                    keep_ws[-1] += w
                else:
                    keep_locs.append(loc)
                    keep_ws.append(w)
            locations = np.asarray(keep_locs)
            weights = np.asarray(keep_ws)
            nonzero = weights != 0.0
            locations = locations[nonzero]
            weights = weights[nonzero]
        else:
            locations = np.empty((0, self.dimension))
            weights = np.empty(0)
        locations.flags.writeable = False
        weights.flags.writeable = False
        self.locations = locations
        self.weights = weights

    def __len__(self) -> int:
        return self.weights.size

    def __repr__(self) -> str:
        return (
            f"DiscreteSignedMeasure(d={self.dimension}, atoms={len(self)}, "
            f"mass={self.mass:.6g})"
        )

    @property
    def atoms(self) -> tuple[Atom, ...]:
        return tuple(
            Atom(tuple(loc), float(w))
            for loc, w in zip(self.locations, self.weights)
        )

    @property
    def mass(self) -> float:
        return float(self.weights.sum())

    def cdf(self, a) -> float:
        a = _unit_point(a, self.dimension)
        if not len(self):
            return 0.0
        inside = np.all(self.locations <= a, axis=1)
        return float(self.weights[inside].sum())

    def cdf_one_sided(self, a, flags) -> float:
        a = _unit_point(a, self.dimension)
        flags = _limit_flags(flags, self.dimension)
        if not len(self):
            return 0.0
        inside = np.ones(len(self), dtype=bool)
        for s, f in enumerate(flags):
            col = self.locations[:, s]
            inside &= (col < a[s]) if f == LEFT_LIMIT else (col <= a[s])
        return float(self.weights[inside].sum())

    def axis_coordinates(self, axis: int) -> np.ndarray:
        if not len(self):
            return np.empty(0)
        return np.unique(self.locations[:, axis])


def jordan_decompose_measure(
    nu: DiscreteSignedMeasure,
) -> tuple[DiscreteSignedMeasure, DiscreteSignedMeasure]:
    """Split ``nu`` into its mutually singular positive and negative parts.

    Returns ``(positive, negative)`` with disjoint supports and
    ``nu = positive - negative`` atom by atom.
    """
    pos_mask = nu.weights > 0
    neg_mask = nu.weights < 0
    positive = DiscreteSignedMeasure(
        nu.dimension,
        zip(nu.locations[pos_mask], nu.weights[pos_mask]),
    )
    negative = DiscreteSignedMeasure(
        nu.dimension,
        zip(nu.locations[neg_mask], -nu.weights[neg_mask]),
    )
    return positive, negative


def total_variation(nu: DiscreteSignedMeasure) -> float:
    """Total variation ``|nu|([0,1]^d)``, i.e. the sum of absolute weights.

    Summed per sign class so the identity with the Jordan part masses is
    bit-exact rather than merely within tolerance.
    """
    w = nu.weights
    return float(w[w > 0].sum() + (-w[w < 0]).sum())


class AxisCdf:
    """One-dimensional right-continuous piecewise-linear CDF on ``[0,1]``.

    Both one-sided values are stored at every breakpoint so that jumps
    (atoms) are representable and left limits ``G(x-)`` are exact; plateaus
    are allowed.  ``values_left[0]`` is always 0 (there is no mass below 0).
    """

    def __init__(
        self,
        breakpoints: Sequence[float],
        values: Sequence[float],
        values_left: Sequence[float] | None = None,
    ) -> None:
        bp = np.asarray(breakpoints, dtype=float)
        va = np.asarray(values, dtype=float)
        if bp.ndim != 1 or bp.size < 2:
            raise ValidationError("breakpoints must be a 1-d array of size >= 2")
        if bp[0] != 0.0 or bp[-1] != 1.0:
            raise ValidationError("breakpoints must start at 0.0 and end at 1.0")
        if np.any(np.diff(bp) <= 0):
            raise ValidationError("breakpoints must be strictly increasing")
        if va.shape != bp.shape:
            raise ValidationError("values must match breakpoints in length")
        if values_left is None:
            vl = va.copy()
            vl[0] = 0.0
        else:
            vl = np.asarray(values_left, dtype=float)
            if vl.shape != bp.shape:
                raise ValidationError("values_left must match breakpoints in length")
        if vl[0] != 0.0:
            raise ValidationError("values_left[0] must be 0 (no mass below 0)")
        chain = np.empty(2 * bp.size)
        chain[0::2] = vl
        chain[1::2] = va
        if np.any(np.diff(chain) < 0):
            raise ValidationError("CDF data must be nondecreasing")
        if abs(va[-1] - 1.0) > TOLERANCE:
            raise ValidationError(f"G(1) must equal 1, got {va[-1]}")
        for arr in (bp, va, vl):
            arr.flags.writeable = False
        self.breakpoints = bp
        self.values = va
        self.values_left = vl

    @classmethod
    def identity(cls) -> "AxisCdf":
        return cls([0.0, 1.0], [0.0, 1.0])

    @property
    def is_continuous(self) -> bool:
        return bool(np.all(self.values[1:] == self.values_left[1:]) and self.values[0] == 0.0)

    def value(self, x: float) -> float:
        return float(self.values_at(np.asarray([x]))[0])

    def left_value(self, x: float) -> float:
        return float(self.left_values_at(np.asarray([x]))[0])

    def _interp(self, xs: np.ndarray, at_break: np.ndarray) -> np.ndarray:
        bp, va, vl = self.breakpoints, self.values, self.values_left
        j = np.searchsorted(bp, xs, side="right") - 1
        j = np.clip(j, 0, bp.size - 2)
        x0 = bp[j]
        x1 = bp[j + 1]
        y0 = va[j]
        y1 = vl[j + 1]
        t = (xs - x0) / (x1 - x0)
        out = y0 + t * (y1 - y0)
        exact = np.searchsorted(bp, xs, side="left")
        on_break = (exact < bp.size) & (bp[np.minimum(exact, bp.size - 1)] == xs)
        out[on_break] = at_break[exact[on_break]]
        return out

    def values_at(self, xs: np.ndarray) -> np.ndarray:
        """Vectorized ``G(x)`` (right-continuous value)."""
        xs = np.asarray(xs, dtype=float)
        if np.any(xs < 0.0) or np.any(xs > 1.0):
            raise ValidationError("CDF argument outside [0,1]")
        return self._interp(xs, self.values)

    def left_values_at(self, xs: np.ndarray) -> np.ndarray:
        """Vectorized left limit ``G(x-)``."""
        xs = np.asarray(xs, dtype=float)
        if np.any(xs < 0.0) or np.any(xs > 1.0):
            raise ValidationError("CDF argument outside [0,1]")
        return self._interp(xs, self.values_left)

    def pseudo_inverse(self, y: float) -> float:
        """Smallest ``x`` with ``G(x) >= y``; exact on the piecewise data."""
        if not 0.0 <= y <= 1.0:
            raise ValidationError("pseudo-inverse argument outside [0,1]")
        bp, va, vl = self.breakpoints, self.values, self.values_left
        if va[0] >= y:
            return 0.0
        for j in range(1, bp.size):
            # interior of the segment (bp[j-1], bp[j]): continuous ramp to vl[j]
            if va[j - 1] < y <= vl[j]:
                t = (y - va[j - 1]) / (vl[j] - va[j - 1])
                return float(bp[j - 1] + t * (bp[j] - bp[j - 1]))
            # jump at bp[j] reaches y
            if vl[j] < y <= va[j]:
                return float(bp[j])
        return 1.0  # unreachable for valid data: G(1) = 1 >= y


@dataclass(frozen=True)
class UniformMeasure:
    """Lebesgue measure on ``[0,1]^d``."""

    dimension: int

    def __post_init__(self) -> None:
        if self.dimension < 1:
            raise ValidationError("dimension must be >= 1")

    def cdf(self, a) -> float:
        return float(np.prod(_unit_point(a, self.dimension)))

    def cdf_one_sided(self, a, flags) -> float:
        _limit_flags(flags, self.dimension)
        return self.cdf(a)  # continuous: left limits coincide with values

    def axis_coordinates(self, axis: int) -> np.ndarray:
        return np.empty(0)


class DiscreteMeasure:
    """A probability measure on finitely many atoms (all weights positive,
    total mass 1 within tolerance)."""

    def __init__(self, atoms: DiscreteSignedMeasure) -> None:
        if np.any(atoms.weights <= 0):
            raise ValidationError("discrete probability measure needs positive weights")
        if abs(atoms.mass - 1.0) > TOLERANCE:
            raise ValidationError(f"total mass must be 1, got {atoms.mass}")
        self.support = atoms
        self.dimension = atoms.dimension

    @classmethod
    def from_points(cls, dimension: int, locations, weights) -> "DiscreteMeasure":
        return cls(DiscreteSignedMeasure(dimension, zip(locations, weights)))

    @classmethod
    def empirical(cls, points: np.ndarray) -> "DiscreteMeasure":
        """Empirical measure of a point set (weight 1/N per point, duplicates merge)."""
        pts = np.asarray(points, dtype=float)
        n = pts.shape[0]
        return cls(DiscreteSignedMeasure(pts.shape[1], zip(pts, np.full(n, 1.0 / n))))

    def cdf(self, a) -> float:
        return self.support.cdf(a)

    def cdf_one_sided(self, a, flags) -> float:
        return self.support.cdf_one_sided(a, flags)

    def axis_coordinates(self, axis: int) -> np.ndarray:
        return self.support.axis_coordinates(axis)


class ProductMeasure:
    """Product of one-dimensional CDFs: ``F(a) = prod_s G_s(a_s)``."""

    def __init__(self, axes: Sequence[AxisCdf]) -> None:
        axes = tuple(axes)
        if not axes:
            raise ValidationError("product measure needs at least one axis")
        self.axes = axes
        self.dimension = len(axes)

    def cdf(self, a) -> float:
        a = _unit_point(a, self.dimension)
        return float(np.prod([ax.value(x) for ax, x in zip(self.axes, a)]))

    def cdf_one_sided(self, a, flags) -> float:
        a = _unit_point(a, self.dimension)
        flags = _limit_flags(flags, self.dimension)
        factors = [
            ax.left_value(x) if f == LEFT_LIMIT else ax.value(x)
            for ax, x, f in zip(self.axes, a, flags)
        ]
        return float(np.prod(factors))

    def axis_coordinates(self, axis: int) -> np.ndarray:
        return self.axes[axis].breakpoints


class AnalyticCdfMeasure:
    """Measure given by a closed-form anchored CDF callback ``F(a)``.

    ``continuous=True`` declares that the CDF has no atoms so that left
    limits coincide with point values; otherwise a ``left_limit`` callback
    ``(a, flags) -> float`` must be supplied for one-sided evaluation.
    ``grid_hints`` may list per-axis coordinates worth injecting into exact
    discrepancy grids (kinks, say); correctness does not depend on them.
    """

    def __init__(
        self,
        dimension: int,
        cdf: Callable[[np.ndarray], float],
        continuous: bool = True,
        left_limit: Callable[[np.ndarray, tuple[str, ...]], float] | None = None,
        grid_hints: Sequence[Sequence[float]] | None = None,
        label: str = "analytic",
    ) -> None:
        if dimension < 1:
            raise ValidationError("dimension must be >= 1")
        self.dimension = int(dimension)
        self._cdf = cdf
        self.continuous = bool(continuous)
        self._left_limit = left_limit
        self.label = label
        if grid_hints is None:
            self._hints = tuple(np.empty(0) for _ in range(dimension))
        else:
            self._hints = tuple(np.asarray(h, dtype=float) for h in grid_hints)
        norm = self.cdf(np.ones(self.dimension))
        if abs(norm - 1.0) > TOLERANCE:
            raise ValidationError(f"F(1,...,1) must equal 1, got {norm}")

    def cdf(self, a) -> float:
        a = _unit_point(a, self.dimension)
        return float(self._cdf(a))

    def cdf_one_sided(self, a, flags) -> float:
        a = _unit_point(a, self.dimension)
        flags = _limit_flags(flags, self.dimension)
        if all(f == AT_POINT for f in flags) or self.continuous:
            return self.cdf(a)
        if self._left_limit is None:
            raise UnsupportedMeasureError(
                "analytic CDF declared discontinuous has no one-sided limit callback"
            )
        return float(self._left_limit(a, flags))

    def axis_coordinates(self, axis: int) -> np.ndarray:
        return self._hints[axis]


MeasureSpec = Union[UniformMeasure, DiscreteMeasure, ProductMeasure, AnalyticCdfMeasure]


def measure_dimension(m) -> int:
    return m.dimension


def cdf_eval(m, a) -> float:
    """Anchored CDF ``F(a) = m([0, a])`` of a measure at a point.

    Accepts any :data:`MeasureSpec` as well as a raw
    :class:`DiscreteSignedMeasure`.
    """
    return m.cdf(a)


def cdf_one_sided(m, a, flags=None) -> float:
    """CDF with left limits taken on the axes flagged ``"left"``."""
    return m.cdf_one_sided(a, flags)


def box_measure(m, lower, upper, lower_open=None, upper_open=None) -> float:
    """Measure of an axis-parallel box with per-axis open/closed sides.

    The default is the closed box ``[lower, upper]``.  Computed by
    inclusion-exclusion over the anchored CDF, taking one-sided limits where
    a closed lower side (or an open upper side) requires them.  A degenerate
    axis (``lower == upper``, both sides closed) measures the mass of the
    slab through that coordinate.
    """
    d = m.dimension
    lo = _unit_point(lower, d, "lower corner")
    hi = _unit_point(upper, d, "upper corner")
    if np.any(lo > hi):
        raise ValidationError("box needs lower <= upper componentwise")
    lo_open = tuple(bool(b) for b in (lower_open or (False,) * d))
    hi_open = tuple(bool(b) for b in (upper_open or (False,) * d))
    if len(lo_open) != d or len(hi_open) != d:
        raise DimensionMismatchError("openness flags must have one entry per axis")

    total = 0.0
    corner = np.empty(d)
    flags: list[str] = [AT_POINT] * d
    for bits in range(1 << d):
        sign = 1.0
        for s in range(d):
            if bits >> s & 1:  # this axis takes the lower coordinate
                sign = -sign
                corner[s] = lo[s]
                flags[s] = AT_POINT if lo_open[s] else LEFT_LIMIT
            else:
                corner[s] = hi[s]
                flags[s] = LEFT_LIMIT if hi_open[s] else AT_POINT
        total += sign * m.cdf_one_sided(corner, tuple(flags))
    return total
