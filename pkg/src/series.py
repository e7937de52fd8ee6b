"""
Truncated q-series with exact rational coefficients.

A QSeries stores the first `prec` coefficients of a formal power series in q.
Every result of a binary operation is only as precise as its least precise
operand, so a coefficient read from a QSeries is always a known value.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Callable, Iterable, List, Sequence, Tuple, Union

Scalar = Union[int, Fraction]


def _to_fraction(value) -> Fraction:
    # bool is an int subclass; floats never enter a series
    if isinstance(value, Fraction):
        return value
    if isinstance(value, Rational) and not isinstance(value, bool):
        return Fraction(value)
    raise TypeError(f"QSeries coefficients must be exact rationals, got {type(value).__name__}: {value!r}")


def _scaled_integers(coeffs: Sequence[Fraction]) -> Tuple[List[int], int]:
    """Return integer numerators over a common denominator."""
    scale = math.lcm(*(c.denominator for c in coeffs)) if coeffs else 1
    return [c.numerator * (scale // c.denominator) for c in coeffs], scale


@dataclass(frozen=True)
class QSeries:
    """
    Immutable truncated power series a(0) + a(1) q + ... + a(prec-1) q^(prec-1).

    Attributes:
        coeffs: Tuple of exact rational coefficients, one per known exponent
    """
    coeffs: Tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.coeffs) < 1:
            raise ValueError("QSeries precision must be a positive integer")
        object.__setattr__(self, 'coeffs', tuple(_to_fraction(c) for c in self.coeffs))

    @classmethod
    def from_integers(cls, values: Iterable[int], denominator: int = 1) -> 'QSeries':
        """Build a series from integer numerators sharing one denominator."""
        if denominator == 1:
            return cls(tuple(Fraction(v) for v in values))
        return cls(tuple(Fraction(v, denominator) for v in values))

    @classmethod
    def zero(cls, prec: int) -> 'QSeries':
        return cls((Fraction(0),) * prec)

    @classmethod
    def one(cls, prec: int) -> 'QSeries':
        return cls((Fraction(1),) + (Fraction(0),) * (prec - 1))

    @property
    def prec(self) -> int:
        return len(self.coeffs)

    def __len__(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, n: int) -> Fraction:
        if not 0 <= n < self.prec:
            raise IndexError(f"Coefficient q^{n} is beyond the known precision {self.prec}")
        return self.coeffs[n]

    def truncate(self, prec: int) -> 'QSeries':
        if prec > self.prec:
            raise ValueError(f"Cannot extend a series of precision {self.prec} to {prec}")
        return QSeries(self.coeffs[:prec])

    def valuation(self) -> int:
        """Smallest exponent with a nonzero coefficient (prec if all known coefficients vanish)."""
        for n, c in enumerate(self.coeffs):
            if c:
                return n
        return self.prec

    def __add__(self, other: 'QSeries') -> 'QSeries':
        if not isinstance(other, QSeries):
            return NotImplemented
        prec = min(self.prec, other.prec)
        return QSeries(tuple(self.coeffs[i] + other.coeffs[i] for i in range(prec)))

    def __neg__(self) -> 'QSeries':
        return QSeries(tuple(-c for c in self.coeffs))

    def __sub__(self, other: 'QSeries') -> 'QSeries':
        if not isinstance(other, QSeries):
            return NotImplemented
        return self + (-other)

    def scale(self, factor: Scalar) -> 'QSeries':
        factor = _to_fraction(factor)
        return QSeries(tuple(factor * c for c in self.coeffs))

    def __mul__(self, other) -> 'QSeries':
        if isinstance(other, QSeries):
            return mul(self, other)
        try:
            return self.scale(other)
        except TypeError:
            return NotImplemented

    def __rmul__(self, other) -> 'QSeries':
        try:
            return self.scale(other)
        except TypeError:
            return NotImplemented

    def dilate(self, d: int) -> 'QSeries':
        return dilate(self, d)

    def twist(self, chi) -> 'QSeries':
        return twist(self, chi)


def add(f: QSeries, g: QSeries) -> QSeries:
    return f + g


def mul(f: QSeries, g: QSeries) -> QSeries:
    """
    Cauchy product truncated to min(f.prec, g.prec).

    Both operands are scaled to integers over a common denominator so the
    schoolbook convolution runs on Python ints rather than Fractions.
    """
    prec = min(f.prec, g.prec)
    a, scale_a = _scaled_integers(f.coeffs[:prec])
    b, scale_b = _scaled_integers(g.coeffs[:prec])
    out = [0] * prec
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j in range(prec - i):
            bj = b[j]
            if bj:
                out[i + j] += ai * bj
    return QSeries.from_integers(out, scale_a * scale_b)


def product(factors: Sequence[QSeries]) -> QSeries:
    """Multiply a non-empty sequence of series left to right."""
    if not factors:
        raise ValueError("product() needs at least one factor")
    result = factors[0]
    for factor in factors[1:]:
        result = mul(result, factor)
    return result


def dilate(f: QSeries, d: int) -> QSeries:
    """Realize f(z) -> f(dz): the coefficient at d*n becomes f's coefficient at n."""
    if d < 1:
        raise ValueError(f"Dilation must be a positive integer, got {d}")
    if d == 1:
        return f
    out = [Fraction(0)] * f.prec
    for n in range(0, (f.prec - 1) // d + 1):
        out[d * n] = f.coeffs[n]
    return QSeries(tuple(out))


def twist(f: QSeries, chi: Callable[[int], int]) -> QSeries:
    """
    Twist by a character: a(n) -> chi(n) a(n) for n >= 1, constant term dropped.

    Args:
        f: Series to twist
        chi: Any callable evaluating the character (a DirichletCharacter works)
    """
    out = [Fraction(0)] + [chi(n) * f.coeffs[n] for n in range(1, f.prec)]
    return QSeries(tuple(out))


def linear_combination(terms: Sequence[Tuple[Scalar, QSeries]]) -> QSeries:
    """Sum of weight * series, at the minimum precision of the inputs."""
    if not terms:
        raise ValueError("linear_combination() needs at least one term")
    prec = min(series.prec for _, series in terms)
    total = [Fraction(0)] * prec
    for weight, series in terms:
        weight = _to_fraction(weight)
        if weight == 0:
            continue
        for n in range(prec):
            total[n] += weight * series.coeffs[n]
    return QSeries(tuple(total))
