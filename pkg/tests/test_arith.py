import math
from fractions import Fraction

import pytest

from src.arith import (TRIVIAL, bernoulli, bernoulli_polynomial, char_eval, character, divisors, gen_bernoulli, jacobi,
                       kronecker, sigma, sigma_twisted)


@pytest.mark.parametrize("a, n, expected", [(2, 7, 1), (3, 7, -1), (5, 9, 1), (6, 9, 0), (-1, 3, -1)])
def test_jacobi(a: int, n: int, expected: int) -> None:
    assert jacobi(a, n) == expected


def test_jacobi_rejects_even_modulus() -> None:
    with pytest.raises(ValueError):
        jacobi(3, 8)


@pytest.mark.parametrize("label, values", [
    ("chi8", {1: 1, 2: 0, 3: -1, 5: -1, 7: 1}),
    ("chi12", {1: 1, 5: -1, 7: -1, 11: 1, 3: 0}),
    ("chi24", {1: 1, 5: 1, 7: -1, 11: -1, 13: -1}),
    ("chi-3", {1: 1, 2: -1, 3: 0, 4: 1}),
    ("chi-4", {1: 1, 2: 0, 3: -1}),
    ("chi4", {1: 1, 2: 0, 3: 1}),
    ("1", {1: 1, 2: 1, 24: 1}),
])
def test_character_values(label: str, values: dict) -> None:
    chi = character(label)
    for n, expected in values.items():
        assert chi(n) == expected, f"{label}({n})"


@pytest.mark.parametrize("label, sign", [
    ("chi8", 1), ("chi12", 1), ("chi24", 1), ("chi-3", -1), ("chi-4", -1), ("chi-8", -1), ("chi-12", -1), ("1", 1),
])
def test_character_parity(label: str, sign: int) -> None:
    assert character(label).sign == sign


@pytest.mark.parametrize("label", ["1", "chi8", "chi12", "chi24", "chi-3", "chi-4", "chi-8", "chi-12", "chi4"])
def test_characters_are_multiplicative_and_periodic(label: str, rng) -> None:
    chi = character(label)
    for _ in range(10_000):
        m, n = rng.randint(1, 10_000), rng.randint(1, 10_000)
        assert chi(m * n) == chi(m) * chi(n)
        assert chi(n + chi.modulus) == chi(n)
        assert (chi(n) == 0) == (math.gcd(n, chi.modulus) > 1)


def test_kronecker_zero_bottom() -> None:
    assert kronecker(1, 0) == 1
    assert kronecker(8, 0) == 0


def test_unknown_character() -> None:
    with pytest.raises(KeyError):
        character("chi5")


def test_divisors_and_sigma() -> None:
    assert divisors(12) == [1, 2, 3, 4, 6, 12]
    with pytest.raises(ValueError):
        divisors(0)
    assert sigma(3, 6) == 252
    assert sigma(3, Fraction(3, 2)) == 0
    assert sigma(3, 0) == 0
    assert sigma(3, Fraction(6, 2)) == 28


def test_trivial_twisted_sum_is_plain_sigma() -> None:
    for n in range(1, 60):
        assert sigma_twisted(3, TRIVIAL, TRIVIAL, n) == sigma(3, n)


def test_twisted_sum_weights() -> None:
    chi8 = character("chi8")
    # sum over d | 3 of chi8(d) d^3 = 1 - 27
    assert sigma_twisted(3, TRIVIAL, chi8, 3) == -26
    # sum over d | 3 of chi8(3/d) d^3 = -1 + 27
    assert sigma_twisted(3, chi8, TRIVIAL, 3) == 26
    assert sigma_twisted(3, chi8, TRIVIAL, Fraction(1, 3)) == 0


def test_bernoulli_numbers() -> None:
    assert bernoulli(0) == 1
    assert bernoulli(1) == Fraction(-1, 2)
    assert bernoulli(3) == 0
    assert bernoulli(2) == Fraction(1, 6)
    assert bernoulli(4) == Fraction(-1, 30)
    assert bernoulli(12) == Fraction(-691, 2730)
    assert bernoulli(20) == Fraction(-174611, 330)
    with pytest.raises(ValueError):
        bernoulli(-1)


def test_bernoulli_polynomial_values() -> None:
    # B_1(x) = x - 1/2 and B_2(x) = x^2 - x + 1/6
    assert bernoulli_polynomial(1, Fraction(1, 4)) == Fraction(-1, 4)
    assert bernoulli_polynomial(2, Fraction(1, 3)) == Fraction(-1, 18)
    assert bernoulli_polynomial(0, Fraction(5, 7)) == 1


@pytest.mark.parametrize("k, label, expected", [
    (4, "chi8", Fraction(-44)),
    (4, "chi12", Fraction(-184)),
    (4, "chi24", Fraction(-2088)),
    (4, "1", Fraction(-1, 30)),
    (1, "chi-4", Fraction(-1, 2)),
    (1, "chi-3", Fraction(-1, 3)),
    (1, "1", Fraction(-1, 2)),
])
def test_generalized_bernoulli(k: int, label: str, expected: Fraction) -> None:
    assert gen_bernoulli(k, character(label)) == expected


def test_char_eval() -> None:
    chi = character("chi-8")
    assert [char_eval(chi, n) for n in (1, 2, 3, 5, 7)] == [1, 0, 1, -1, -1]
    assert char_eval(TRIVIAL, 0) == 1
