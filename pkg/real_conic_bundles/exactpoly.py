"""
Exact univariate polynomial arithmetic over the rationals.

:class:`Polynomial` keeps its coefficients as :class:`fractions.Fraction`
for the document and oracle layers; every algebraic step (division, gcd,
square-free part, Sturm sequences, root counting and isolation) runs on the
equivalent :class:`sympy.Poly` over ``QQ``. Floating point never enters a
sign decision. The point at infinity of the real projective line is modelled
by the :data:`INFINITY` marker so that the real zeros and poles of a rational
function can be read off the whole circle ``R u {oo}``.
"""

import logging
import re
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Optional, Union

import sympy
from sympy import QQ, Poly, Rational

from .config import DEFAULT_REFINE_BITS
from .errors import InvalidInput, PoleAtSample

logger = logging.getLogger(__name__)

_RATIONAL_LITERAL = re.compile(r"[+-]?\d+(/\d+)?")

Z = sympy.Symbol("z")


class _PointAtInfinity(Enum):
    INFINITY = "inf"

    def __repr__(self) -> str:
        return "INFINITY"

    def __str__(self) -> str:
        return "∞"


INFINITY = _PointAtInfinity.INFINITY

Number = Union[int, Fraction]
CirclePoint = Union[int, Fraction, str, _PointAtInfinity]


def to_rational(value) -> Fraction:
    """
    Read an exact integer or rational literal.

    Accepts ``int``, ``Fraction``, sympy rationals and strings such as
    ``"-7"`` or ``"3/4"``. Decimal literals and floats are refused so nothing
    is rounded before the exact analysis starts.
    """
    if isinstance(value, bool):
        raise InvalidInput(f"expected a number, got a boolean: {value!r}", "exactpoly")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, Rational):
        return Fraction(int(value.p), int(value.q))
    if isinstance(value, str):
        text = value.strip()
        if not _RATIONAL_LITERAL.fullmatch(text):
            raise InvalidInput(
                f"not an exact integer or rational literal: {value!r}", "exactpoly"
            )
        try:
            return Fraction(text)
        except ZeroDivisionError:
            raise InvalidInput(f"zero denominator in {value!r}", "exactpoly") from None
    raise InvalidInput(
        f"expected an integer or rational, got {type(value).__name__}: {value!r}",
        "exactpoly",
    )


def _sympy_rational(value) -> Rational:
    value = to_rational(value)
    return Rational(value.numerator, value.denominator)


def _sign(value: Fraction) -> int:
    return (value > 0) - (value < 0)


@dataclass(frozen=True)
class Polynomial:
    """
    A polynomial with rational coefficients in ascending degree order.

    Trailing zero coefficients are stripped on construction, so the zero
    polynomial has no coefficients and degree ``-1``. :attr:`poly` is the
    same polynomial as a ``sympy.Poly`` in ``z`` over ``QQ``.

    Examples
    --------
    .. code-block:: python

        from real_conic_bundles.exactpoly import Polynomial

        p = Polynomial(("-2", 0, 1))
        p.degree   # 2
        str(p)     # 'z^2 - 2'
        p.poly     # Poly(z**2 - 2, z, domain='QQ')
    """

    coefficients: tuple = ()

    def __post_init__(self):
        coeffs = [to_rational(c) for c in self.coefficients]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        object.__setattr__(self, "coefficients", tuple(coeffs))

    @cached_property
    def poly(self) -> Poly:
        rep = [Rational(c.numerator, c.denominator) for c in reversed(self.coefficients)]
        return Poly.from_list(rep or [0], Z, domain=QQ)

    @classmethod
    def from_sympy(cls, poly: Poly) -> "Polynomial":
        return cls(tuple(reversed(poly.all_coeffs())))

    @classmethod
    def constant(cls, value: Number) -> "Polynomial":
        return cls((value,))

    @classmethod
    def from_roots(cls, roots: Iterable[Number], leading: Number = 1) -> "Polynomial":
        """Build ``leading * prod(z - r)``."""
        result = cls.constant(leading)
        for r in roots:
            result = result * cls((-to_rational(r), 1))
        return result

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coefficients

    @property
    def leading(self) -> Fraction:
        if self.is_zero:
            return Fraction(0)
        return self.coefficients[-1]

    def __call__(self, x: Number) -> Fraction:
        return to_rational(self.poly.eval(_sympy_rational(x)))

    def sign_at(self, x: Number) -> int:
        return _sign(self(x))

    def sign_at_infinity(self, negative: bool = False) -> int:
        """Sign of the polynomial near ``+oo`` (or ``-oo``)."""
        s = _sign(self.leading)
        if negative and self.degree % 2 == 1:
            s = -s
        return s

    def derivative(self) -> "Polynomial":
        return Polynomial.from_sympy(self.poly.diff(Z))

    def scale(self, factor: Number) -> "Polynomial":
        return Polynomial.from_sympy(self.poly.mul_ground(_sympy_rational(factor)))

    def monic(self) -> "Polynomial":
        if self.is_zero:
            return self
        return Polynomial.from_sympy(self.poly.monic())

    def __neg__(self) -> "Polynomial":
        return Polynomial.from_sympy(-self.poly)

    def __add__(self, other) -> "Polynomial":
        return Polynomial.from_sympy(self.poly + _as_polynomial(other).poly)

    __radd__ = __add__

    def __sub__(self, other) -> "Polynomial":
        return Polynomial.from_sympy(self.poly - _as_polynomial(other).poly)

    def __rsub__(self, other) -> "Polynomial":
        return _as_polynomial(other) - self

    def __mul__(self, other) -> "Polynomial":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return Polynomial.from_sympy(self.poly * _as_polynomial(other).poly)

    __rmul__ = __mul__

    def __divmod__(self, other) -> tuple["Polynomial", "Polynomial"]:
        other = _as_polynomial(other)
        if other.is_zero:
            raise InvalidInput("division by the zero polynomial", "exactpoly")
        q, r = self.poly.div(other.poly)
        return Polynomial.from_sympy(q), Polynomial.from_sympy(r)

    def __floordiv__(self, other) -> "Polynomial":
        return divmod(self, other)[0]

    def __mod__(self, other) -> "Polynomial":
        return divmod(self, other)[1]

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        terms = []
        for power in range(self.degree, -1, -1):
            c = self.coefficients[power]
            if c == 0:
                continue
            magnitude = abs(c)
            if power == 0:
                body = str(magnitude)
            else:
                mono = "z" if power == 1 else f"z^{power}"
                body = mono if magnitude == 1 else f"{magnitude}*{mono}"
            sign = "-" if c < 0 else "+"
            if not terms:
                terms.append(body if sign == "+" else f"-{body}")
            else:
                terms.append(f"{sign} {body}")
        return " ".join(terms)


def _as_polynomial(value) -> Polynomial:
    if isinstance(value, Polynomial):
        return value
    return Polynomial.constant(value)


def gcd(p: Polynomial, q: Polynomial) -> Polynomial:
    """Monic greatest common divisor (zero only when both inputs are zero)."""
    return Polynomial.from_sympy(p.poly.gcd(q.poly)).monic()


def squarefree_part(p: Polynomial) -> Polynomial:
    """
    Return ``p / gcd(p, p')``, made monic.

    The result has the same real roots as ``p``, all of them simple.

    Raises
    ------
    InvalidInput
        If ``p`` is the zero polynomial.
    """
    if p.is_zero:
        raise InvalidInput("squarefree_part of the zero polynomial", "exactpoly")
    if p.degree == 0:
        return Polynomial.constant(1)
    return Polynomial.from_sympy(p.poly.sqf_part()).monic()


def is_squarefree(p: Polynomial) -> bool:
    return not p.is_zero and p.poly.is_sqf


def _require_squarefree(p: Polynomial) -> None:
    if p.is_zero:
        raise InvalidInput("the zero polynomial has no isolated roots", "exactpoly")
    if not is_squarefree(p):
        raise InvalidInput(
            f"{p} is not square-free; call squarefree_part first", "exactpoly"
        )


def sturm_sequence(p: Polynomial) -> tuple[Polynomial, ...]:
    """Sturm sequence ``p, p', -rem(p, p'), ...`` from ``sympy.Poly.sturm``.

    sympy starts from the monic square-free part, so for square-free ``p``
    the first entry is ``p`` rescaled by a positive constant and every sign
    is unchanged.
    """
    return tuple(Polynomial.from_sympy(q) for q in p.poly.sturm())


def count_real_roots(
    p: Polynomial,
    interval: tuple[Optional[Number], Optional[Number]] = (None, None),
) -> int:
    """
    Count the real roots of a square-free polynomial in an open interval.

    ``sympy.Poly.count_roots`` counts the closed interval from the sign
    variations of the Sturm sequence; roots sitting on a finite endpoint are
    taken off again.

    Parameters
    ----------
    p : Polynomial
        Square-free polynomial.
    interval : tuple
        ``(low, high)``; ``None`` stands for an infinite endpoint.

    Returns
    -------
    int

    Examples
    --------
    .. code-block:: python

        count_real_roots(Polynomial((-2, 0, 1)), (0, 2))     # 1
        count_real_roots(Polynomial((0, -1, 0, 1)))          # 3
    """
    _require_squarefree(p)
    low, high = interval
    low = None if low is None else to_rational(low)
    high = None if high is None else to_rational(high)
    if low is not None and high is not None and not low < high:
        raise InvalidInput(f"empty interval ({low}, {high})", "exactpoly")
    count = int(
        p.poly.count_roots(
            None if low is None else _sympy_rational(low),
            None if high is None else _sympy_rational(high),
        )
    )
    for end in (low, high):
        if end is not None and p(end) == 0:
            count -= 1
    return count


@dataclass(frozen=True)
class IsolatingInterval:
    """
    An open interval ``(low, high)`` holding exactly one real root.

    Endpoints are never roots, so the polynomial changes sign exactly once
    across the interval. ``root`` is set when the root is rational and known
    exactly; the interval is then centred on it. The point at infinity is
    represented by ``IsolatingInterval.infinity()``.
    """

    low: Optional[Fraction] = None
    high: Optional[Fraction] = None
    at_infinity: bool = False
    root: Optional[Fraction] = None

    def __post_init__(self):
        if self.at_infinity:
            return
        if self.low is None or self.high is None or not self.low < self.high:
            raise InvalidInput(
                f"isolating interval needs low < high, got ({self.low}, {self.high})",
                "exactpoly",
            )
        if self.root is not None and not self.low < self.root < self.high:
            raise InvalidInput(
                f"exact root {self.root} lies outside ({self.low}, {self.high})", "exactpoly"
            )

    @classmethod
    def infinity(cls) -> "IsolatingInterval":
        return cls(at_infinity=True)

    @property
    def width(self) -> Optional[Fraction]:
        return None if self.at_infinity else self.high - self.low

    def contains(self, x: Number) -> bool:
        if self.at_infinity:
            return False
        return self.low < to_rational(x) < self.high

    def approximate(self) -> float:
        if self.at_infinity:
            return float("inf")
        if self.root is not None:
            return float(self.root)
        return float((self.low + self.high) / 2)

    def __str__(self) -> str:
        if self.at_infinity:
            return "∞"
        return f"({self.low}, {self.high})"


def cauchy_bound(p: Polynomial) -> int:
    """An integer strictly larger than the modulus of every root of ``p``."""
    lead = abs(p.leading)
    worst = max((abs(c) / lead for c in p.coefficients[:-1]), default=Fraction(0))
    return int(worst) + 2


def _open_interval(
    p: Polynomial, raw: list[tuple[Fraction, Fraction]], i: int, limit: Fraction
) -> IsolatingInterval:
    # sympy reports rational roots it hits exactly as closed intervals (r, r)
    low, high = raw[i]
    root = next((x for x in (low, (low + high) / 2, high) if p(x) == 0), None)
    if root is None:
        return IsolatingInterval(low, high)
    left = raw[i - 1][1] if i > 0 else None
    right = raw[i + 1][0] if i + 1 < len(raw) else None
    half = limit / 2
    # stay within half the gap to each neighbour so intervals remain disjoint
    while (left is not None and 2 * half >= root - left) or (
        right is not None and 2 * half >= right - root
    ):
        half /= 2
    return IsolatingInterval(root - half, root + half, root=root)


def isolate_real_roots(
    p: Polynomial, refine_bits: int = DEFAULT_REFINE_BITS
) -> list[IsolatingInterval]:
    """
    Isolate the real roots of a square-free polynomial.

    ``sympy.Poly.intervals`` isolates and refines; each returned interval is
    open, has width at most ``2**-refine_bits`` and the list is sorted and
    pairwise disjoint. Rational roots found exactly carry ``root``.

    Examples
    --------
    .. code-block:: python

        roots = isolate_real_roots(Polynomial((-4, 0, 1)))
        [iv.contains(r) for iv, r in zip(roots, (-2, 2))]   # [True, True]
        isolate_real_roots(Polynomial((0, 1)))[0].root      # Fraction(0, 1)
    """
    _require_squarefree(p)
    if p.degree < 1:
        return []
    limit = Fraction(1, 2**refine_bits)
    raw = sorted(
        (to_rational(a), to_rational(b))
        for a, b in p.poly.intervals(eps=_sympy_rational(limit), sqf=True)
    )
    found = [_open_interval(p, raw, i, limit) for i in range(len(raw))]
    logger.debug("isolated %d real root(s) of %s", len(found), p)
    return found


@dataclass(frozen=True)
class RationalFunction:
    """
    ``numerator / denominator`` in lowest terms with a monic denominator.

    Common factors are cancelled on construction.

    Raises
    ------
    InvalidInput
        If the denominator is the zero polynomial.
    """

    numerator: Polynomial
    denominator: Polynomial = field(default_factory=lambda: Polynomial((1,)))

    def __post_init__(self):
        num, den = self.numerator, self.denominator
        if den.is_zero:
            raise InvalidInput("rational function with zero denominator", "exactpoly")
        common = gcd(num, den)
        if common.degree > 0:
            num, den = num // common, den // common
        lead = den.leading
        object.__setattr__(self, "numerator", num.scale(1 / lead))
        object.__setattr__(self, "denominator", den.scale(1 / lead))

    @classmethod
    def from_coefficients(cls, numerator, denominator=(1,)) -> "RationalFunction":
        return cls(Polynomial(tuple(numerator)), Polynomial(tuple(denominator)))

    @property
    def order_at_infinity(self) -> Optional[int]:
        """``deg(denominator) - deg(numerator)``; ``None`` for the zero function."""
        if self.numerator.is_zero:
            return None
        return self.denominator.degree - self.numerator.degree

    def __call__(self, x: Number) -> Fraction:
        x = to_rational(x)
        d = self.denominator(x)
        if d == 0:
            raise PoleAtSample(f"{x} is a pole of {self}", "exactpoly")
        return self.numerator(x) / d

    def __str__(self) -> str:
        if self.denominator.degree == 0:
            return str(self.numerator)
        return f"({self.numerator}) / ({self.denominator})"


def sign_on_circle(g: RationalFunction, sample: CirclePoint) -> int:
    """
    Exact sign of ``g`` at a rational point or at :data:`INFINITY`.

    Returns ``-1``, ``0`` or ``1``.

    Raises
    ------
    PoleAtSample
        If ``sample`` is a pole of ``g`` (at infinity: ``deg num > deg den``).

    Examples
    --------
    .. code-block:: python

        g = RationalFunction.from_coefficients((4, 0, -5, 0, 1), (1, 0, 0, 0, 1))
        sign_on_circle(g, 0)          # 1
        sign_on_circle(g, "3/2")      # -1
        sign_on_circle(g, INFINITY)   # 1
    """
    if sample is INFINITY:
        order = g.order_at_infinity
        if order is None or order > 0:
            return 0
        if order < 0:
            raise PoleAtSample(f"{g} has a pole at infinity", "exactpoly")
        return _sign(g.numerator.leading / g.denominator.leading)
    x = to_rational(sample)
    d = g.denominator.sign_at(x)
    if d == 0:
        raise PoleAtSample(f"{x} is a pole of {g}", "exactpoly")
    return g.numerator.sign_at(x) * d


@dataclass(frozen=True)
class GValidation:
    """Outcome of :func:`validate_g`."""

    real_zero_intervals: tuple[IsolatingInterval, ...]
    pole_free: bool
    simple_real_zeros: bool
    order_at_infinity: int
    real_poles: int = 0
    repeated_real_zeros: int = 0

    @property
    def zero_count(self) -> int:
        return len(self.real_zero_intervals)

    @property
    def finite_zeros(self) -> tuple[IsolatingInterval, ...]:
        return tuple(iv for iv in self.real_zero_intervals if not iv.at_infinity)

    @property
    def zero_at_infinity(self) -> bool:
        return any(iv.at_infinity for iv in self.real_zero_intervals)

    @property
    def is_valid(self) -> bool:
        return self.pole_free and self.simple_real_zeros

    def failures(self) -> list[str]:
        """The clauses of the validity rule that ``g`` breaks."""
        out = []
        if self.real_poles:
            out.append(f"g has {self.real_poles} real pole(s)")
        if self.order_at_infinity < 0:
            out.append("g has a pole at infinity")
        if self.repeated_real_zeros:
            out.append(f"g has {self.repeated_real_zeros} non-simple real zero(s)")
        if self.order_at_infinity >= 2:
            out.append(
                f"g vanishes to order {self.order_at_infinity} at infinity"
            )
        return out


def validate_g(g: RationalFunction, refine_bits: int = DEFAULT_REFINE_BITS) -> GValidation:
    """
    Check that ``g`` has no real pole and only simple real zeros on ``R u {oo}``.

    The point at infinity counts through ``order_at_infinity``: a negative
    order is a pole, order 1 a simple zero, order 2 or more a multiple zero.

    Examples
    --------
    .. code-block:: python

        g = RationalFunction.from_coefficients((4, 0, -5, 0, 1), (1, 0, 0, 0, 1))
        v = validate_g(g)
        v.is_valid, v.zero_count, v.order_at_infinity    # (True, 4, 0)
    """
    if g.numerator.is_zero:
        raise InvalidInput("g must be a nonzero rational function", "exactpoly")
    order = g.order_at_infinity
    real_poles = count_real_roots(squarefree_part(g.denominator))
    repeated = gcd(g.numerator, g.numerator.derivative())
    repeated_real = 0
    if repeated.degree > 0:
        repeated_real = count_real_roots(squarefree_part(repeated))
    intervals = isolate_real_roots(squarefree_part(g.numerator), refine_bits)
    if order == 1:
        intervals.append(IsolatingInterval.infinity())
    result = GValidation(
        real_zero_intervals=tuple(intervals),
        pole_free=real_poles == 0 and order >= 0,
        simple_real_zeros=repeated_real == 0 and order <= 1,
        order_at_infinity=order,
        real_poles=real_poles,
        repeated_real_zeros=repeated_real,
    )
    logger.debug(
        "validate_g(%s): zeros=%d pole_free=%s simple=%s",
        g,
        result.zero_count,
        result.pole_free,
        result.simple_real_zeros,
    )
    return result
