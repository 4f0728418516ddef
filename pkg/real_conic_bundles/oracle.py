"""
Floating-point cross-checks for the exact pipeline.

Nothing here feeds back into the symbolic computations: the oracle samples
signs on a grid and either agrees with the exact answer or raises.
"""

import logging
from dataclasses import dataclass

import numpy as np
import numpy.polynomial.polynomial as poly

from .bundle import SurfaceState, SurfaceType
from .config import DEFAULT_ORACLE_SAMPLES, MAX_ORACLE_SAMPLES
from .errors import InvalidInput, OracleDisagreement, OracleInconclusive
from .exactpoly import Polynomial, RationalFunction, cauchy_bound, count_real_roots, validate_g

logger = logging.getLogger(__name__)

MIN_COMPONENT_SAMPLES = 256


@dataclass(frozen=True)
class NumericRootCount:
    count: int
    samples: int
    low: float
    high: float


@dataclass(frozen=True)
class ComponentCount:
    spheres: int
    tori: int
    samples: int = 0

    def as_tuple(self) -> tuple[int, int]:
        return self.spheres, self.tori


def _floats(p: Polynomial) -> np.ndarray:
    return np.array([float(c) for c in p.coefficients], dtype=float)


def _sign_changes(values: np.ndarray) -> int:
    signs = np.sign(values)
    signs = signs[signs != 0]
    return int(np.count_nonzero(signs[1:] != signs[:-1]))


def numeric_root_count(p: Polynomial, samples: int = DEFAULT_ORACLE_SAMPLES) -> NumericRootCount:
    """
    Count real roots of ``p`` by sign changes on a float grid.

    The grid is geometric on both half-lines, between a lower bound on the
    modulus of the nonzero roots and the Cauchy bound, so that small and
    large roots get the same relative resolution. A root at 0 is split off
    exactly first.

    Examples
    --------
    .. code-block:: python

        numeric_root_count(Polynomial((-2, 0, 1)), samples=64).count    # 2
    """
    if p.is_zero:
        raise InvalidInput("the zero polynomial has no finite root count", "oracle")
    if samples < 2 * p.degree + 2:
        raise InvalidInput(
            f"{samples} samples cannot resolve a polynomial of degree {p.degree}", "oracle"
        )
    at_zero = 0
    while p.degree > 0 and p.coefficients[0] == 0:
        p = p // Polynomial((0, 1))
        at_zero += 1
    if p.degree <= 0:
        return NumericRootCount(at_zero, samples, 0.0, 0.0)

    reciprocal = Polynomial(tuple(reversed(p.coefficients)))
    low = 0.5 / cauchy_bound(reciprocal)
    high = 2.0 * cauchy_bound(p)
    half = max(samples // 2, 2)
    positive = np.geomspace(low, high, half)
    coefficients = _floats(p)
    changes = _sign_changes(poly.polyval(positive, coefficients)) + _sign_changes(
        poly.polyval(-positive, coefficients)
    )
    return NumericRootCount(changes + at_zero, samples, low, high)


def _homogeneous(p: Polynomial, degree: int, c: np.ndarray, s: np.ndarray) -> np.ndarray:
    total = np.zeros_like(c)
    for i, a in enumerate(p.coefficients):
        total += float(a) * c**i * s ** (degree - i)
    return total


def _circle_signs(g: RationalFunction, samples: int, offset: float) -> np.ndarray:
    degree = max(g.numerator.degree, g.denominator.degree, 0)
    degree += degree % 2
    theta = np.pi * (np.arange(samples) + offset) / samples
    c, s = np.cos(theta), np.sin(theta)
    num = _homogeneous(g.numerator, degree, c, s)
    den = _homogeneous(g.denominator, degree, c, s)
    tolerance = 64 * np.finfo(float).eps
    scale_num = np.abs(_floats(g.numerator)).sum()
    scale_den = np.abs(_floats(g.denominator)).sum()
    ambiguous = (np.abs(num) <= tolerance * scale_num) | (np.abs(den) <= tolerance * scale_den)
    signs = np.sign(num) * np.sign(den)
    signs[ambiguous] = 0
    return signs


def numeric_component_count(
    g: RationalFunction, samples: int = DEFAULT_ORACLE_SAMPLES
) -> ComponentCount:
    """
    Count the components of ``{x^2 + y^2 = g(z)}`` over ``P^1(R)`` by sampling.

    The circle is parametrized by ``[cos t : sin t]``, ``0 <= t < pi``, and
    the sign of ``g`` is read from its homogenization to an even degree.
    Each maximal positive arc gives a sphere; a circle that is positive
    everywhere gives a torus.

    Raises
    ------
    OracleInconclusive
        If a grid point stays within rounding distance of a zero or pole
        after one offset resample.
    """
    if samples < MIN_COMPONENT_SAMPLES:
        raise InvalidInput(f"need at least {MIN_COMPONENT_SAMPLES} samples, got {samples}", "oracle")
    if g.numerator.is_zero or not validate_g(g).is_valid:
        raise InvalidInput(f"g = {g} does not define a conic bundle", "oracle")

    signs = _circle_signs(g, samples, 0.5)
    if not signs.all():
        logger.debug("ambiguous samples for g = %s at %d points, resampling", g, samples)
        signs = _circle_signs(g, samples, 0.25)
        if not signs.all():
            raise OracleInconclusive(
                f"g = {g} vanishes numerically on the {samples}-point grid", "oracle"
            )
    positive = signs > 0
    if positive.all():
        return ComponentCount(0, 1, samples)
    rises = np.count_nonzero(positive & ~np.roll(positive, 1))
    return ComponentCount(int(rises), 0, samples)


def confirm_root_count(
    p: Polynomial,
    samples: int = DEFAULT_ORACLE_SAMPLES,
    max_samples: int = MAX_ORACLE_SAMPLES,
) -> NumericRootCount:
    """Refine the root-count grid until it agrees with the Sturm count."""
    exact = count_real_roots(p)
    n = max(samples, 2 * p.degree + 2)
    while True:
        result = numeric_root_count(p, n)
        if result.count == exact:
            return result
        if n * 2 > max_samples:
            raise OracleDisagreement(
                f"{p}: Sturm count {exact}, {n}-point grid counts {result.count}", "oracle"
            )
        logger.debug("%s: grid of %d counts %d, expected %d; refining", p, n, result.count, exact)
        n *= 2


def expected_components(state: SurfaceState) -> ComponentCount:
    return ComponentCount(
        spheres=sum(c.topology is SurfaceType.SPHERE for c in state.components),
        tori=sum(c.topology is SurfaceType.TORUS for c in state.components),
    )


def confirm_components(
    g: RationalFunction,
    state: SurfaceState,
    samples: int = DEFAULT_ORACLE_SAMPLES,
    max_samples: int = MAX_ORACLE_SAMPLES,
) -> ComponentCount:
    """
    Refine the angular grid until it agrees with the minimal model ``state``.

    Examples
    --------
    .. code-block:: python

        state = build_minimal_surface(spec)
        confirm_components(spec.g_data, state).as_tuple()    # (2, 0)
    """
    if not state.minimal:
        raise InvalidInput("the oracle only checks minimal models", "oracle")
    expected = expected_components(state)
    n = max(samples, MIN_COMPONENT_SAMPLES)
    while True:
        try:
            result = numeric_component_count(g, n)
        except OracleInconclusive:
            if n * 2 > max_samples:
                raise
            result = None
        if result is not None and result.as_tuple() == expected.as_tuple():
            return result
        if n * 2 > max_samples:
            raise OracleDisagreement(
                f"g = {g}: exact model has {expected.spheres} spheres and {expected.tori} tori, "
                f"{n}-point grid finds {result.spheres} and {result.tori}",
                "oracle",
            )
        logger.debug("g = %s: %d-point grid gave %s; refining", g, n, result)
        n *= 2
