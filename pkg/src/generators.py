"""
q-expansions of the generating functions: the Jacobi theta series, the
Borwein hexagonal series F, eta quotients and their rational combinations,
and the Eisenstein series E_k and E_{k,chi,psi}.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple

from src.arith import DirichletCharacter, bernoulli, gen_bernoulli, sigma, sigma_twisted
from src.series import QSeries, linear_combination, twist

logger = logging.getLogger(__name__)


class NonIntegralLeadingExponent(ValueError):
    """The q-prefactor sum(d*r)/24 of an eta quotient is not an integer."""


class NegativeLeadingExponent(ValueError):
    """The q-prefactor of an eta quotient is negative (a pole at infinity)."""


class ParityMismatch(ValueError):
    """chi(-1) psi(-1) != (-1)^k, so the Eisenstein space is zero."""


@dataclass(frozen=True)
class EtaQuotientSpec:
    """
    prod_i eta(d_i z)^{r_i}, written d_1^{r_1} d_2^{r_2} ... in the usual shorthand.

    Attributes:
        factors: (dilation, exponent) pairs, sorted by dilation
    """
    factors: Tuple[Tuple[int, int], ...]

    def __post_init__(self):
        factors = tuple(sorted((int(d), int(r)) for d, r in self.factors))
        dilations = [d for d, _ in factors]
        if len(set(dilations)) != len(dilations):
            raise ValueError(f"Eta quotient has repeated dilations: {dilations}")
        for d, r in factors:
            if d < 1:
                raise ValueError(f"Eta quotient dilation must be positive, got {d}")
            if r == 0:
                raise ValueError(f"Eta quotient exponent for dilation {d} must be non-zero")
        object.__setattr__(self, 'factors', factors)

    @property
    def weight(self) -> Fraction:
        return Fraction(sum(r for _, r in self.factors), 2)

    @property
    def order_numerator(self) -> int:
        """sum(d * r); the leading exponent is this over 24."""
        return sum(d * r for d, r in self.factors)

    @property
    def leading_exponent(self) -> int:
        total = self.order_numerator
        if total % 24:
            raise NonIntegralLeadingExponent(
                f"Eta quotient {self} has leading exponent {total}/24, which is not an integer"
            )
        if total < 0:
            raise NegativeLeadingExponent(f"Eta quotient {self} has negative leading exponent {total // 24}")
        return total // 24

    @property
    def level(self) -> int:
        return math.lcm(*(d for d, _ in self.factors))

    def exponent(self, d: int) -> int:
        return dict(self.factors).get(d, 0)

    def __str__(self) -> str:
        return " ".join(f"{d}^{r}" for d, r in self.factors)


@dataclass(frozen=True)
class EtaCombination:
    """A rational linear combination of eta quotients, optionally twisted."""
    terms: Tuple[Tuple[Fraction, EtaQuotientSpec], ...]
    twist: Optional[DirichletCharacter] = None

    def __str__(self) -> str:
        parts = []
        for weight, spec in self.terms:
            if weight == 1:
                parts.append(f"({spec})")
            else:
                parts.append(f"{weight}*({spec})")
        text = " + ".join(parts)
        return f"[{text}] (x) {self.twist.label}" if self.twist else text


def theta_series(prec: int) -> QSeries:
    """Theta(z) = sum over m in Z of q^(m^2)."""
    if prec < 1:
        raise ValueError(f"Precision must be positive, got {prec}")
    coeffs = [0] * prec
    coeffs[0] = 1
    m = 1
    while m * m < prec:
        coeffs[m * m] = 2
        m += 1
    return QSeries.from_integers(coeffs)


def hexagonal_bound(n: int) -> int:
    """|x|, |y| <= this whenever x^2 + xy + y^2 <= n."""
    return math.isqrt(4 * n // 3) + 1


def borwein_F(prec: int) -> QSeries:
    """
    Theta series of the hexagonal form x^2 + xy + y^2, by direct enumeration.

    x^2 + xy + y^2 >= (3/4) max(x^2, y^2) bounds both coordinates.
    """
    if prec < 1:
        raise ValueError(f"Precision must be positive, got {prec}")
    limit = prec - 1
    bound = hexagonal_bound(limit)
    coeffs = [0] * prec
    for x in range(-bound, bound + 1):
        for y in range(-bound, bound + 1):
            norm = x * x + x * y + y * y
            if norm <= limit:
                coeffs[norm] += 1
    return QSeries.from_integers(coeffs)


def _eta_product_integers(spec: EtaQuotientSpec, length: int) -> List[int]:
    """Integer coefficients of prod_i prod_n (1 - q^(d_i n))^(r_i) up to q^(length-1)."""
    body = [0] * length
    body[0] = 1
    for d, r in spec.factors:
        for m in range(d, length, d):
            if r > 0:
                # multiply by (1 - q^m), r times; descending keeps the old values
                for _ in range(r):
                    for i in range(length - 1, m - 1, -1):
                        body[i] -= body[i - m]
            else:
                # divide by (1 - q^m): b[i] = a[i] + b[i - m]
                for _ in range(-r):
                    for i in range(m, length):
                        body[i] += body[i - m]
    return body


def eta_quotient(spec: EtaQuotientSpec, prec: int) -> QSeries:
    """
    Expand q^e * prod_i prod_{n>=1} (1 - q^(d_i n))^(r_i) with e = sum(d_i r_i)/24.

    Raises:
        NonIntegralLeadingExponent: If sum(d_i r_i) is not a multiple of 24
        NegativeLeadingExponent: If the prefactor exponent is negative
    """
    e = spec.leading_exponent
    if e >= prec:
        return QSeries.zero(prec)
    body = _eta_product_integers(spec, prec - e)
    return QSeries.from_integers([0] * e + body)


def eta_combination(combo: EtaCombination, prec: int) -> QSeries:
    series = linear_combination([(weight, eta_quotient(spec, prec)) for weight, spec in combo.terms])
    if combo.twist is not None:
        series = twist(series, combo.twist)
    return series


def eisenstein_Ek(k: int, prec: int) -> QSeries:
    """Normalized E_k = 1 - (2k/B_k) sum sigma_{k-1}(n) q^n."""
    if k < 4 or k % 2:
        raise ValueError(f"E_k needs an even weight k >= 4, got {k}")
    factor = -Fraction(2 * k) / bernoulli(k)
    coeffs = [Fraction(1)] + [factor * sigma(k - 1, n) for n in range(1, prec)]
    return QSeries(tuple(coeffs))


def eisenstein_constant(k: int, chi: DirichletCharacter, psi: DirichletCharacter) -> Fraction:
    if chi.conductor > 1:
        return Fraction(0)
    return -gen_bernoulli(k, psi) / (2 * k)


def eisenstein_char(k: int, chi: DirichletCharacter, psi: DirichletCharacter, prec: int) -> QSeries:
    """
    E_{k,chi,psi} = c_0 + sum_n (sum_{d|n} psi(d) chi(n/d) d^(k-1)) q^n.

    c_0 is 0 when chi is non-trivial and -B_{k,psi}/2k otherwise. When both
    characters are trivial the series is -B_k/2k times E_k.

    Raises:
        ParityMismatch: If chi(-1) psi(-1) != (-1)^k
        ValueError: If either character is imprimitive
    """
    if chi.sign * psi.sign != (-1) ** k:
        raise ParityMismatch(
            f"E_{{{k},{chi.label},{psi.label}}}: chi(-1)psi(-1) = {chi.sign * psi.sign} but (-1)^k = {(-1) ** k}"
        )
    for c in (chi, psi):
        if not c.is_primitive:
            raise ValueError(f"Eisenstein series need primitive characters; {c.label} has conductor {c.conductor}")
    if chi.conductor == 1 and psi.conductor == 1:
        return eisenstein_Ek(k, prec).scale(-bernoulli(k) / (2 * k))
    coeffs = [eisenstein_constant(k, chi, psi)]
    coeffs += [Fraction(sigma_twisted(k - 1, chi, psi, n)) for n in range(1, prec)]
    return QSeries(tuple(coeffs))
