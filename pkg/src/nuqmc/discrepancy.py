"""Exact star-discrepancy of finite point sets with respect to uniform,
product, discrete, and analytic-CDF measures.

The supremum runs over closed anchored boxes ``[0, a]``.  The counting
function is constant on the half-open cells of the critical grid (point
coordinates, atom coordinates, CDF breakpoints, and {0, 1}) while the
measure's CDF is componentwise monotone there, so the supremum over each
cell is reached either at the cell's lower corner (an attained value) or at
its upper corner approached from below (a one-sided limit, which need not be
attained -- e.g. a single point forces an unattained supremum under any
continuous CDF).  Exact mode enumerates all cells; cost is the product of
the per-axis grid sizes, so it is gated by a dimension limit and a cell
budget, beyond which only the randomized lower-bound search is offered.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Sequence

import numpy as np

from .errors import BudgetExceededError, DimensionMismatchError, ValidationError
from .measures import (
    AT_POINT,
    LEFT_LIMIT,
    AnalyticCdfMeasure,
    DiscreteMeasure,
    ProductMeasure,
    UniformMeasure,
    _limit_flags,
    _unit_point,
    cdf_one_sided,
)
from .variation import Box

#: Default gate for exact cell enumeration.
MAX_EXACT_DIMENSION = 4
CELL_BUDGET = 10**8

EXACT_GRID = "exact"
RANDOM_SEARCH = "search"


class PointSet:
    """N points in ``[0,1]^d`` (the sample whose discrepancy is measured)."""

    def __init__(self, dimension: int, points) -> None:
        if dimension < 1:
            raise ValidationError("dimension must be >= 1")
        pts = np.asarray(points, dtype=float)
        if pts.ndim == 1:
            pts = pts.reshape(-1, dimension)
        if pts.ndim != 2 or pts.shape[1] != dimension:
            raise DimensionMismatchError(
                f"points must form an (N, {dimension}) array, got shape {pts.shape}"
            )
        if pts.shape[0] < 1:
            raise ValidationError("point set must contain at least one point")
        if not np.all(np.isfinite(pts)):
            raise ValidationError("points must be finite")
        if np.any(pts < 0.0) or np.any(pts > 1.0):
            raise ValidationError("points must lie in [0,1]^d")
        pts = pts.copy()
        pts.flags.writeable = False
        self.dimension = int(dimension)
        self.points = pts

    @property
    def n(self) -> int:
        return self.points.shape[0]

    def __repr__(self) -> str:
        return f"PointSet(d={self.dimension}, n={self.n})"


@dataclass(frozen=True)
class DiscrepancyResult:
    """Outcome of a discrepancy computation.

    ``witness_box`` is the anchored box realizing ``value``; when
    ``attained`` is False the witness is a one-sided limit and
    ``witness_flags`` records which axes approach the corner from below.
    """

    value: float
    witness_box: Box
    witness_flags: tuple[str, ...]
    attained: bool
    method: str


def local_discrepancy(a, ps: PointSet, m, limit_flags=None) -> float:
    """``|#{x_n <= a}/N - F(a)|`` with left limits of F on the flagged axes.

    The count always uses the closed-box convention; see
    :func:`one_sided_deviation` for the fully one-sided evaluation.
    """
    a = _unit_point(a, ps.dimension)
    if m.dimension != ps.dimension:
        raise DimensionMismatchError("measure and point set dimensions differ")
    count = int(np.all(ps.points <= a, axis=1).sum())
    return abs(count / ps.n - cdf_one_sided(m, a, limit_flags))


def one_sided_deviation(a, ps: PointSet, m, limit_flags=None) -> float:
    """Limit of the local discrepancy as the corner is approached from below
    on the flagged axes (count strict there, F by left limit).

    Unlike mixing a closed count with a one-sided CDF, this quantity is a
    limit of actual local discrepancies and therefore never exceeds the
    star-discrepancy.
    """
    a = _unit_point(a, ps.dimension)
    flags = _limit_flags(limit_flags, ps.dimension)
    inside = np.ones(ps.n, dtype=bool)
    for s, f in enumerate(flags):
        col = ps.points[:, s]
        inside &= (col < a[s]) if f == LEFT_LIMIT else (col <= a[s])
    count = int(inside.sum())
    return abs(count / ps.n - cdf_one_sided(m, a, flags))


def _critical_grids(ps: PointSet, m) -> list[np.ndarray]:
    grids = []
    for s in range(ps.dimension):
        grids.append(
            np.unique(
                np.concatenate(
                    [[0.0, 1.0], ps.points[:, s], np.asarray(m.axis_coordinates(s), dtype=float)]
                )
            )
        )
    return grids


def _vertex_counts(ps: PointSet, grids: Sequence[np.ndarray]) -> np.ndarray:
    shape = tuple(g.size for g in grids)
    counts = np.zeros(shape, dtype=np.int64)
    idx = tuple(
        np.searchsorted(g, ps.points[:, s], side="right") - 1
        for s, g in enumerate(grids)
    )
    np.add.at(counts, idx, 1)
    for s in range(len(grids)):
        np.cumsum(counts, axis=s, out=counts)
    return counts


def _outer(arrays: Sequence[np.ndarray]) -> np.ndarray:
    return reduce(np.multiply.outer, arrays)


def _vertex_cdf_arrays(m, grids: Sequence[np.ndarray]) -> tuple[np.ndarray, np.ndarray]:
    """CDF at every cell's lower corner, and the one-sided limit at its
    upper corner (left limits except on the degenerate final interval)."""
    d = len(grids)
    if isinstance(m, UniformMeasure):
        lo = _outer(grids)
        hi = _outer([np.concatenate([g[1:], [1.0]]) for g in grids])
        return lo, hi
    if isinstance(m, ProductMeasure):
        lo = _outer([ax.values_at(g) for ax, g in zip(m.axes, grids)])
        hi_axes = [
            np.concatenate([ax.left_values_at(g[1:]), [ax.value(1.0)]])
            for ax, g in zip(m.axes, grids)
        ]
        return lo, _outer(hi_axes)
    if isinstance(m, DiscreteMeasure):
        shape = tuple(g.size for g in grids)
        lo = np.zeros(shape)
        support = m.support
        if len(support):
            idx = tuple(
                np.searchsorted(g, support.locations[:, s])
                for s, g in enumerate(grids)
            )
            np.add.at(lo, idx, support.weights)
            for s in range(d):
                np.cumsum(lo, axis=s, out=lo)
        # atoms lie on the grid, so the limit at the next vertex equals the
        # value at this one
        return lo, lo
    if isinstance(m, AnalyticCdfMeasure):
        shape = tuple(g.size for g in grids)
        lo = np.empty(shape)
        hi = np.empty(shape)
        uppers = [np.concatenate([g[1:], [1.0]]) for g in grids]
        point = np.empty(d)
        for index in np.ndindex(shape):
            for s in range(d):
                point[s] = grids[s][index[s]]
            lo[index] = m.cdf(point)
        if m.continuous:
            for index in np.ndindex(shape):
                for s in range(d):
                    point[s] = uppers[s][index[s]]
                hi[index] = m.cdf(point)
        else:
            for index in np.ndindex(shape):
                flags = []
                for s in range(d):
                    point[s] = uppers[s][index[s]]
                    flags.append(AT_POINT if index[s] == shape[s] - 1 else LEFT_LIMIT)
                hi[index] = m.cdf_one_sided(point, tuple(flags))
        return lo, hi
    raise ValidationError(f"unsupported measure type {type(m).__name__}")


def star_discrepancy(
    ps: PointSet,
    m,
    max_exact_dim: int = MAX_EXACT_DIMENSION,
    cell_budget: int = CELL_BUDGET,
) -> DiscrepancyResult:
    """Exact star-discrepancy ``sup_a |#{x_n <= a}/N - F(a)|``.

    Enumerates the critical grid; reports whether the supremum is attained
    and a witness box (with one-sided flags when it is not).  Raises
    :class:`BudgetExceededError` when the grid exceeds the dimension gate or
    the cell budget; use :func:`random_search_lower_bound` then.
    """
    if m.dimension != ps.dimension:
        raise DimensionMismatchError("measure and point set dimensions differ")
    d = ps.dimension
    if d > max_exact_dim:
        raise BudgetExceededError(
            f"exact mode is gated at dimension {max_exact_dim}; "
            "use random_search_lower_bound"
        )
    grids = _critical_grids(ps, m)
    n_cells = int(np.prod([g.size for g in grids], dtype=np.int64))
    if n_cells > cell_budget:
        raise BudgetExceededError(
            f"critical grid has {n_cells} cells, budget is {cell_budget}; "
            "use random_search_lower_bound"
        )

    counts = _vertex_counts(ps, grids) / ps.n
    f_lo, f_hi = _vertex_cdf_arrays(m, grids)

    dev_lo = counts - f_lo  # largest at a cell's lower corner (attained)
    dev_hi = f_hi - counts  # approached at its upper corner (one-sided)
    best_lo_idx = np.unravel_index(int(np.argmax(dev_lo)), dev_lo.shape)
    best_hi_idx = np.unravel_index(int(np.argmax(dev_hi)), dev_hi.shape)
    best_lo = float(dev_lo[best_lo_idx])
    best_hi = float(dev_hi[best_hi_idx])

    if best_lo >= best_hi:
        witness = tuple(float(grids[s][best_lo_idx[s]]) for s in range(d))
        flags = (AT_POINT,) * d
        value, attained = best_lo, True
    else:
        witness = []
        flags = []
        for s in range(d):
            j = best_hi_idx[s]
            if j == grids[s].size - 1:
                witness.append(1.0)
                flags.append(AT_POINT)
            else:
                witness.append(float(grids[s][j + 1]))
                flags.append(LEFT_LIMIT)
        witness = tuple(witness)
        flags = tuple(flags)
        value, attained = best_hi, False

    return DiscrepancyResult(
        value=value,
        witness_box=Box(lower=(0.0,) * d, upper=witness),
        witness_flags=flags,
        attained=attained,
        method=EXACT_GRID,
    )


def random_search_lower_bound(
    ps: PointSet, m, trials: int, seed: int
) -> DiscrepancyResult:
    """Randomized lower bound for the star-discrepancy.

    Maximizes the one-sided deviation over random corners, corners snapped
    to point/measure coordinates, and random per-axis limit flags.  Every
    evaluation is a limit of actual local discrepancies, so the result never
    exceeds the exact star-discrepancy.  Deterministic for a fixed seed.
    """
    if trials < 1:
        raise ValidationError("trials must be >= 1")
    if m.dimension != ps.dimension:
        raise DimensionMismatchError("measure and point set dimensions differ")
    d = ps.dimension
    rng = np.random.default_rng(seed)
    pools = [
        np.unique(
            np.concatenate(
                [[1.0], ps.points[:, s], np.asarray(m.axis_coordinates(s), dtype=float)]
            )
        )
        for s in range(d)
    ]

    best = -1.0
    best_corner = (1.0,) * d
    best_flags = (AT_POINT,) * d
    corner = np.empty(d)
    for _ in range(trials):
        flags = []
        for s in range(d):
            u = rng.random()
            if u < 0.5:
                corner[s] = pools[s][rng.integers(pools[s].size)]
            elif u < 0.6:
                corner[s] = 1.0
            else:
                corner[s] = rng.random()
            flags.append(LEFT_LIMIT if rng.random() < 0.5 else AT_POINT)
        flags = tuple(flags)
        dev = one_sided_deviation(corner, ps, m, flags)
        if dev > best:
            best = dev
            best_corner = tuple(float(c) for c in corner)
            best_flags = flags

    return DiscrepancyResult(
        value=best,
        witness_box=Box(lower=(0.0,) * d, upper=best_corner),
        witness_flags=best_flags,
        attained=all(f == AT_POINT for f in best_flags),
        method=RANDOM_SEARCH,
    )
