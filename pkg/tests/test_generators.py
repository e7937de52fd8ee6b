from fractions import Fraction

import pytest

from src.arith import TRIVIAL, character, divisors
from src.generators import (EtaCombination, EtaQuotientSpec, NegativeLeadingExponent, NonIntegralLeadingExponent,
                            ParityMismatch, borwein_F, eisenstein_char, eisenstein_constant, eisenstein_Ek,
                            eta_combination, eta_quotient, theta_series)


def _ints(series):
    return [int(c) for c in series.coeffs]


def test_theta_series() -> None:
    assert _ints(theta_series(10)) == [1, 2, 0, 0, 2, 0, 0, 0, 0, 2]


def test_borwein_first_terms() -> None:
    assert _ints(borwein_F(8)) == [1, 6, 0, 6, 6, 0, 0, 12]


def test_borwein_matches_divisor_formula() -> None:
    chi = character("chi-3")
    limit = 10000
    F = borwein_F(limit + 1)
    for n in range(1, limit + 1):
        assert F[n] == 6 * sum(chi(d) for d in divisors(n)), n


def test_eta_24_is_delta() -> None:
    delta = eta_quotient(EtaQuotientSpec(((1, 24),)), 6)
    assert _ints(delta) == [0, 1, -24, 252, -1472, 4830]


def test_f4_6_expansion() -> None:
    f = eta_quotient(EtaQuotientSpec(((1, 2), (2, 2), (3, 2), (6, 2))), 4)
    assert _ints(f) == [0, 1, -2, -3]


def test_negative_exponents_divide() -> None:
    # (eta(z)^2 / eta(2z))^8 is the theta series of Z^8 at -q
    quotient = eta_quotient(EtaQuotientSpec(((1, 16), (2, -8))), 4)
    assert _ints(quotient) == [1, -16, 112, -448]


def test_spec_validation() -> None:
    with pytest.raises(ValueError):
        EtaQuotientSpec(((1, 2), (1, 3)))
    with pytest.raises(ValueError):
        EtaQuotientSpec(((2, 0),))
    with pytest.raises(ValueError):
        EtaQuotientSpec(((0, 2),))
    with pytest.raises(NonIntegralLeadingExponent):
        EtaQuotientSpec(((1, 1),)).leading_exponent
    with pytest.raises(NegativeLeadingExponent):
        EtaQuotientSpec(((1, -24),)).leading_exponent


def test_spec_properties() -> None:
    spec = EtaQuotientSpec(((6, 2), (1, 2), (3, 2), (2, 2)))
    assert spec.factors == ((1, 2), (2, 2), (3, 2), (6, 2))
    assert spec.weight == 4
    assert spec.level == 6
    assert spec.leading_exponent == 1
    assert spec.exponent(3) == 2 and spec.exponent(4) == 0
    assert str(spec) == "1^2 2^2 3^2 6^2"


def test_combination_with_twist() -> None:
    spec = EtaQuotientSpec(((1, 24),))
    combo = EtaCombination(((Fraction(1, 2), spec),), character("chi-4"))
    series = eta_combination(combo, 5)
    # chi-4 kills even n and flips n = 3
    assert series.coeffs == (0, Fraction(1, 2), 0, -126, 0)


def test_eisenstein_Ek() -> None:
    assert _ints(eisenstein_Ek(4, 4)) == [1, 240, 2160, 6720]
    assert _ints(eisenstein_Ek(6, 3)) == [1, -504, -16632]
    with pytest.raises(ValueError):
        eisenstein_Ek(3, 4)


def test_eisenstein_with_characters() -> None:
    chi8 = character("chi8")
    series = eisenstein_char(4, TRIVIAL, chi8, 4)
    assert series.coeffs == (Fraction(11, 2), 1, 1, -26)
    assert eisenstein_char(4, chi8, TRIVIAL, 3).coeffs == (0, 1, 8)


@pytest.mark.parametrize("psi, constant", [("chi8", Fraction(11, 2)), ("chi12", Fraction(23)), ("chi24", Fraction(261))])
def test_eisenstein_constants(psi: str, constant: Fraction) -> None:
    assert eisenstein_constant(4, TRIVIAL, character(psi)) == constant
    assert eisenstein_constant(4, character(psi), TRIVIAL) == 0


def test_trivial_characters_route_to_Ek() -> None:
    series = eisenstein_char(4, TRIVIAL, TRIVIAL, 3)
    assert series.coeffs == (Fraction(1, 240), 1, 9)


def test_parity_and_primitivity_checks() -> None:
    with pytest.raises(ParityMismatch):
        eisenstein_char(4, character("chi-4"), TRIVIAL, 3)
    with pytest.raises(ValueError):
        eisenstein_char(4, character("chi4"), TRIVIAL, 3)
    mixed = eisenstein_char(4, character("chi-4"), character("chi-3"), 3)
    assert mixed[0] == 0
