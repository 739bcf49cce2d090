"""QMC estimators, variation-times-discrepancy error certificates, and
importance sampling.

The certificate asserts ``|sample mean - integral| <= variation * star
discrepancy`` with the variation anchored at 1.  Reference integrals are
only computed for exactly integrable pairs (a discrete measure with any
integrand, or a step grid function with any supported measure), never by
numerical quadrature, so an unsatisfied certificate is conclusive evidence
of a bug rather than of quadrature error.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
import numpy as np

from .discrepancy import PointSet, star_discrepancy
from .errors import UnsupportedIntegrandError, ValidationError
from .measures import (
    AnalyticCdfMeasure,
    DiscreteMeasure,
    LEFT_LIMIT,
    AT_POINT,
    ProductMeasure,
    UniformMeasure,
)
from .variation import ANCHOR_ONE, STEP, GridFunction, hk_variation

#: Certificate slack absorbing floating point accumulation.
CERTIFICATE_TOL = 1e-10


@dataclass(frozen=True)
class KHCertificate:
    """A variation-times-discrepancy error bound with the observed error.

    ``reference_integral`` (and with it ``observed_error`` and
    ``satisfied``) is None when no exact reference is computable;
    ``variation_certified`` is False when the variation is only a sampled
    lower-bound proxy rather than an exact grid variation.
    """

    estimate: float
    reference_integral: float | None
    observed_error: float | None
    variation: float
    discrepancy: float
    bound: float
    satisfied: bool | None
    variation_certified: bool = True


def qmc_estimate(f, ps: PointSet) -> float:
    """Sample mean ``(1/N) sum f(x_n)`` of a grid function or callback."""
    if isinstance(f, GridFunction):
        return float(np.mean(f.evaluate(ps.points)))
    return float(np.mean([f(x) for x in ps.points]))


def _generalized_cell_masses(m, breakpoints) -> np.ndarray:
    """Masses of the cells tiling the cube along a step function's grid.

    Per axis the cells are ``[g_j, g_{j+1})`` for ``j < m`` plus the
    degenerate slab ``{1}``; every mass is a mixed difference of one-sided
    CDF evaluations, so atoms on cell boundaries land exactly once.
    """
    d = len(breakpoints)
    if isinstance(m, UniformMeasure):
        axis_vals = [np.concatenate([b, [1.0]]) for b in breakpoints]
        table = reduce(np.multiply.outer, axis_vals)
    elif isinstance(m, ProductMeasure):
        axis_vals = [
            np.concatenate([ax.left_values_at(b), [ax.value(1.0)]])
            for ax, b in zip(m.axes, breakpoints)
        ]
        table = reduce(np.multiply.outer, axis_vals)
    elif isinstance(m, AnalyticCdfMeasure):
        coords = [np.concatenate([b, [1.0]]) for b in breakpoints]
        shape = tuple(c.size for c in coords)
        table = np.empty(shape)
        point = np.empty(d)
        for index in np.ndindex(shape):
            flags = []
            for s in range(d):
                point[s] = coords[s][index[s]]
                flags.append(AT_POINT if index[s] == shape[s] - 1 else LEFT_LIMIT)
            table[index] = m.cdf_one_sided(point, tuple(flags))
    else:
        raise UnsupportedIntegrandError(
            f"no exact cell masses for measure type {type(m).__name__}"
        )
    for s in range(d):
        table = np.diff(table, axis=s)
    return table


def integral_under_measure(f: GridFunction, m) -> float:
    """Exact integral of ``f`` with respect to ``m``.

    Supported pairs: any grid function against a discrete measure (a finite
    weighted sum), or a step grid function against a uniform, product, or
    analytic-CDF measure (cell value times cell mass).  Anything else raises
    :class:`UnsupportedIntegrandError`.
    """
    if m.dimension != f.dimension:
        raise ValidationError("measure and integrand dimensions differ")
    if isinstance(m, DiscreteMeasure):
        values = f.evaluate(m.support.locations)
        return float(np.sum(m.support.weights * values))
    if f.interp != STEP:
        raise UnsupportedIntegrandError(
            "exact integration against a continuous measure needs a step function"
        )
    masses = _generalized_cell_masses(m, f.breakpoints)
    return float(np.sum(f.values * masses))


def kh_certificate(f: GridFunction, ps: PointSet, m, **discrepancy_options) -> KHCertificate:
    """Full error certificate for estimating ``integral f dm`` by the sample
    mean over ``ps``.

    All fields are populated; since the underlying inequality is a theorem,
    ``satisfied`` must come out True for every valid input -- a False here
    indicates an implementation bug, which is the point of the certificate.
    """
    estimate = qmc_estimate(f, ps)
    reference = integral_under_measure(f, m)
    observed = abs(estimate - reference)
    variation = hk_variation(f, ANCHOR_ONE)
    disc = star_discrepancy(ps, m, **discrepancy_options).value
    bound = variation * disc
    return KHCertificate(
        estimate=estimate,
        reference_integral=reference,
        observed_error=observed,
        variation=variation,
        discrepancy=disc,
        bound=bound,
        satisfied=observed <= bound + CERTIFICATE_TOL,
    )


def _default_proxy_grid(dimension: int, resolution: int = 16) -> tuple[np.ndarray, ...]:
    return tuple(np.linspace(0.0, 1.0, resolution + 1) for _ in range(dimension))


def importance_sampling_estimate(
    f,
    g,
    ps: PointSet,
    m_g,
    variation: float | None = None,
    reference_integral: float | None = None,
    proxy_grid=None,
    **discrepancy_options,
) -> tuple[float, KHCertificate]:
    """Estimate ``integral f dx`` as the sample mean of ``f/g`` over a point
    set equidistributed for the measure with density ``g``.

    When ``f`` and ``g`` are step grid functions on the same grid the ratio
    is formed exactly: its variation, the reference integral of ``f``, and
    the certificate are all exact.  For callbacks the certificate's
    variation is either the caller-supplied bound or the grid variation of
    ``f/g`` sampled on ``proxy_grid`` -- a lower-bound proxy, flagged
    uncertified; the reference integral must then be supplied by the caller
    for the observed error to be reported.
    """
    if m_g.dimension != ps.dimension:
        raise ValidationError("measure and point set dimensions differ")

    exact_pair = (
        isinstance(f, GridFunction)
        and isinstance(g, GridFunction)
        and f.interp == STEP
        and g.interp == STEP
        and f.shape == g.shape
        and all(np.array_equal(a, b) for a, b in zip(f.breakpoints, g.breakpoints))
    )

    if exact_pair:
        if np.any(g.values <= 0.0):
            raise ValidationError("density must be positive")
        ratio = f.with_values(f.values / g.values)
        estimate = qmc_estimate(ratio, ps)
        var = hk_variation(ratio, ANCHOR_ONE) if variation is None else float(variation)
        certified = True  # exact grid variation, or a bound the caller vouches for
        if reference_integral is None:
            reference_integral = integral_under_measure(f, UniformMeasure(f.dimension))
    else:
        g_vals = np.asarray([float(g(x)) for x in ps.points])
        if np.any(g_vals <= 0.0):
            raise ValidationError("density must be positive at every sample point")
        f_vals = np.asarray([float(f(x)) for x in ps.points])
        estimate = float(np.mean(f_vals / g_vals))
        if variation is not None:
            var = float(variation)
            certified = True
        else:
            grid = proxy_grid if proxy_grid is not None else _default_proxy_grid(ps.dimension)
            mesh = np.meshgrid(*grid, indexing="ij")
            vertices = np.stack([c.reshape(-1) for c in mesh], axis=-1)
            ratio_vals = np.asarray([float(f(v)) / float(g(v)) for v in vertices])
            sampled = GridFunction(grid, ratio_vals.reshape([len(b) for b in grid]), STEP)
            var = hk_variation(sampled, ANCHOR_ONE)
            certified = False

    disc = star_discrepancy(ps, m_g, **discrepancy_options).value
    bound = var * disc
    observed = None if reference_integral is None else abs(estimate - reference_integral)
    satisfied = None if observed is None else observed <= bound + CERTIFICATE_TOL
    cert = KHCertificate(
        estimate=estimate,
        reference_integral=reference_integral,
        observed_error=observed,
        variation=var,
        discrepancy=disc,
        bound=bound,
        satisfied=satisfied,
        variation_certified=certified,
    )
    return estimate, cert
