"""Shared oracles and random generators for the test suite.

The oracles are deliberately independent of the library code paths they
check: variation by enumerating every sub-partition of a grid, discrepancy
by dense-grid evaluation of the deviation itself, and the piecewise-constant
density integrated segment by segment rather than through its closed-form
CDF.
"""

from __future__ import annotations

from itertools import combinations, product

import numpy as np

from nuqmc import (
    AxisCdf,
    DiscreteMeasure,
    DiscreteSignedMeasure,
    GridFunction,
    PointSet,
    STEP,
    one_sided_deviation,
)


# ---------------------------------------------------------------------------
# variation oracles
# ---------------------------------------------------------------------------

def _partitions_of_axis(n_vertices: int):
    """All vertex subsets forming a partition of [0,1] on this axis."""
    interior = range(1, n_vertices - 1)
    for r in range(n_vertices - 1):
        for chosen in combinations(interior, r):
            yield (0,) + chosen + (n_vertices - 1,)


def vitali_by_enumeration(values: np.ndarray, axes) -> float:
    """Supremum of sum |quasi-volume| over ALL sub-partitions of the grid.

    Axes not listed must already be pinned (size-1 dims are fine).
    """
    axes = tuple(axes)
    choices = []
    for s in range(values.ndim):
        if s in axes:
            choices.append(list(_partitions_of_axis(values.shape[s])))
        else:
            choices.append([None])
    best = 0.0
    for combo in product(*choices):
        v = values
        for s, sel in enumerate(combo):
            if sel is not None:
                v = np.take(v, sel, axis=s)
        for s, sel in enumerate(combo):
            if sel is not None:
                v = np.diff(v, axis=s)
        best = max(best, float(np.abs(v).sum()))
    return best


def hk_by_enumeration(f: GridFunction, anchor: str) -> float:
    """Hardy-Krause variation with every face evaluated by full enumeration."""
    d = f.dimension
    pin = -1 if anchor == "one" else 0
    total = 0.0
    for r in range(1, d + 1):
        for axes in combinations(range(d), r):
            v = f.values
            for s in range(d):
                if s not in axes:
                    v = np.take(v, [pin], axis=s)
            total += vitali_by_enumeration(v, axes)
    return total


# ---------------------------------------------------------------------------
# discrepancy oracles
# ---------------------------------------------------------------------------

def dense_uniform_star_discrepancy(ps: PointSet, n_per_axis: int) -> float:
    """Brute-force uniform star-discrepancy over a dense candidate grid,
    evaluating both the at-point and left-limit deviations (d <= 2)."""
    pts = ps.points
    n = ps.n
    cands = [
        np.unique(np.concatenate([np.linspace(0.0, 1.0, n_per_axis), pts[:, s]]))
        for s in range(ps.dimension)
    ]
    best = 0.0
    if ps.dimension == 1:
        c = cands[0]
        xs = np.sort(pts[:, 0])
        for side in ("right", "left"):
            counts = np.searchsorted(xs, c, side=side)
            best = max(best, float(np.max(np.abs(counts / n - c))))
        return best
    if ps.dimension != 2:
        raise ValueError("dense oracle is implemented for d <= 2")
    c1, c2 = cands
    for strict1, strict2 in product((False, True), repeat=2):
        m1 = (pts[None, :, 0] < c1[:, None]) if strict1 else (pts[None, :, 0] <= c1[:, None])
        m2 = (pts[None, :, 1] < c2[:, None]) if strict2 else (pts[None, :, 1] <= c2[:, None])
        counts = m1.astype(float) @ m2.astype(float).T
        f = np.multiply.outer(c1, c2)
        best = max(best, float(np.max(np.abs(counts / n - f))))
    return best


def brute_force_star_discrepancy(ps: PointSet, m, per_axis) -> float:
    """Generic (slow) brute force: one-sided deviation at every candidate
    corner and every per-axis flag combination."""
    grids = [np.asarray(g, dtype=float) for g in per_axis]
    best = 0.0
    for corner in product(*grids):
        for flags in product(("at", "left"), repeat=ps.dimension):
            best = max(best, one_sided_deviation(corner, ps, m, flags))
    return best


# ---------------------------------------------------------------------------
# quadrature oracle for the Chelson density
# ---------------------------------------------------------------------------

def chelson_box_mass(lower, upper) -> float:
    """Mass of a box under the density (1/2 above the diagonal, 3/2 below),
    integrated in the first coordinate segment by segment.

    The inner integral in y2 is linear in y1 between the kinks at y1 = l2
    and y1 = h2, so the midpoint rule per segment is exact.
    """
    l1, l2 = lower
    h1, h2 = upper
    kinks = sorted({l1, h1, min(max(l2, l1), h1), min(max(h2, l1), h1)})
    total = 0.0
    for a, b in zip(kinks[:-1], kinks[1:]):
        y1 = 0.5 * (a + b)
        above = max(0.0, h2 - max(l2, y1))
        below = max(0.0, min(h2, y1) - l2)
        total += (0.5 * above + 1.5 * below) * (b - a)
    return total


# ---------------------------------------------------------------------------
# random generators
# ---------------------------------------------------------------------------

def random_grid_function(rng, d=None, max_intervals=3, interp=STEP,
                         low=-2.0, high=2.0) -> GridFunction:
    if d is None:
        d = int(rng.integers(1, 4))
    bps = []
    for _ in range(d):
        k = int(rng.integers(0, max_intervals))
        interior = rng.uniform(0.05, 0.95, size=k)
        bps.append(np.unique(np.concatenate([[0.0, 1.0], interior])))
    shape = tuple(b.size for b in bps)
    return GridFunction(bps, rng.uniform(low, high, size=shape), interp)


def random_signed_measure(rng, d, max_atoms=20, wlow=-2.0, whigh=2.0) -> DiscreteSignedMeasure:
    n = int(rng.integers(1, max_atoms + 1))
    locs = rng.random((n, d))
    if rng.random() < 0.3:
        locs[0] = 0.0  # atom at the origin exercises the anchored term
    if n > 1 and rng.random() < 0.3:
        locs[-1] = 1.0
    w = rng.uniform(wlow, whigh, size=n)
    w[w == 0.0] = 0.5
    return DiscreteSignedMeasure(d, zip(locs, w))


def random_discrete_probability(rng, d, max_atoms=20) -> DiscreteMeasure:
    n = int(rng.integers(1, max_atoms + 1))
    locs = rng.random((n, d))
    w = rng.random(n) + 0.05
    w = w / w.sum()
    return DiscreteMeasure(DiscreteSignedMeasure(d, zip(locs, w)))


def random_point_set(rng, d, max_points=64) -> PointSet:
    n = int(rng.integers(1, max_points + 1))
    return PointSet(d, rng.random((n, d)))


def random_strict_axis_cdf(rng, max_segments=4) -> AxisCdf:
    """Continuous, strictly increasing piecewise-linear CDF (invertible)."""
    k = int(rng.integers(1, max_segments))
    bp = np.unique(np.concatenate([[0.0, 1.0], rng.uniform(0.05, 0.95, size=k)]))
    inc = rng.random(bp.size - 1) + 0.1
    v = np.concatenate([[0.0], np.cumsum(inc)])
    v = v / v[-1]
    v[-1] = 1.0
    return AxisCdf(bp, v)


def random_general_axis_cdf(rng, max_segments=4) -> AxisCdf:
    """CDF with random plateaus and jumps (atoms), still normalized."""
    k = int(rng.integers(1, max_segments))
    bp = np.unique(np.concatenate([[0.0, 1.0], rng.uniform(0.05, 0.95, size=k)]))
    n = bp.size
    steps = rng.random(2 * n - 1)
    steps[rng.random(2 * n - 1) < 0.4] = 0.0
    if steps.sum() == 0.0:
        steps[-1] = 1.0
    chain = np.concatenate([[0.0], np.cumsum(steps)])
    chain = chain / chain[-1]
    values_left = chain[0::2].copy()
    values = chain[1::2].copy()
    values[-1] = 1.0
    return AxisCdf(bp, values, values_left)


def completely_monotone_function(rng, breakpoints, scale=1.0) -> GridFunction:
    """Separable nondecreasing product, vanishing at the origin corner.

    Products of per-axis nondecreasing nonnegative factors have nonnegative
    quasi-volumes of every dimension.
    """
    factors = []
    for b in breakpoints:
        inc = rng.random(b.size - 1) * scale
        factors.append(np.concatenate([[0.0], np.cumsum(inc)]))
    vals = np.ones(tuple(b.size for b in breakpoints))
    for s, fac in enumerate(factors):
        shape = [1] * len(breakpoints)
        shape[s] = fac.size
        vals = vals * fac.reshape(shape)
    return GridFunction(breakpoints, vals, STEP)


def grids_equal(f: GridFunction, g: GridFunction) -> bool:
    return f.shape == g.shape and all(
        np.array_equal(a, b) for a, b in zip(f.breakpoints, g.breakpoints)
    )


def measures_match(a: DiscreteSignedMeasure, b: DiscreteSignedMeasure, tol: float) -> bool:
    """Atomwise equality up to ``tol``, treating missing atoms as weight 0."""
    diff: dict = {}
    for loc, w in zip(a.locations, a.weights):
        diff[tuple(loc)] = diff.get(tuple(loc), 0.0) + w
    for loc, w in zip(b.locations, b.weights):
        diff[tuple(loc)] = diff.get(tuple(loc), 0.0) - w
    return all(abs(v) <= tol for v in diff.values())
