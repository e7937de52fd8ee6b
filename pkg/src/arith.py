"""
Number-theoretic scalar kernel: Kronecker symbols, the real Dirichlet
characters used at level 24, plain and twisted divisor sums, Bernoulli and
generalized Bernoulli numbers.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Union

import sympy
from sympy import divisors as _sympy_divisors


def jacobi(a: int, n: int) -> int:
    """Jacobi symbol (a/n) for odd positive n."""
    if n <= 0 or n % 2 == 0:
        raise ValueError(f"Jacobi symbol needs an odd positive modulus, got {n}")
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def kronecker(top: int, n: int) -> int:
    """
    Full Kronecker symbol (top/n), defined for every integer bottom argument.

    Args:
        top: The fixed upper argument (a discriminant for every character here)
        n: Bottom argument, any integer

    Returns:
        int: -1, 0 or 1
    """
    if n == 0:
        return 1 if abs(top) == 1 else 0
    result = 1
    if n < 0:
        n = -n
        if top < 0:
            result = -result
    twos = 0
    while n % 2 == 0:
        n //= 2
        twos += 1
    if twos:
        if top % 2 == 0:
            return 0
        if top % 8 in (3, 5) and twos % 2 == 1:
            result = -result
    if n == 1:
        return result
    return result * jacobi(top, n)


@dataclass(frozen=True)
class DirichletCharacter:
    """
    A real Dirichlet character given by a Kronecker symbol.

    The trivial character has modulus 1 and takes the value 1 everywhere;
    it is not the principal character modulo 24.

    Attributes:
        label: Catalog name such as "chi8" or "chi-3"
        modulus: Period of the character
        top: Upper Kronecker argument, or None for the trivial character
        conductor: Conductor (equal to modulus for primitive characters)
    """
    label: str
    modulus: int
    top: Optional[int]
    conductor: int

    def __call__(self, n: int) -> int:
        return char_eval(self, n)

    @property
    def is_trivial(self) -> bool:
        return self.top is None

    @property
    def is_primitive(self) -> bool:
        return self.conductor == self.modulus

    @property
    def parity(self) -> str:
        return "even" if char_eval(self, -1) == 1 else "odd"

    @property
    def sign(self) -> int:
        """chi(-1) as an integer."""
        return 1 if self.parity == "even" else -1


TRIVIAL = DirichletCharacter("1", 1, None, 1)

CHARACTERS: Dict[str, DirichletCharacter] = {
    chi.label: chi
    for chi in (
        TRIVIAL,
        DirichletCharacter("chi8", 8, 8, 8),
        DirichletCharacter("chi12", 12, 12, 12),
        DirichletCharacter("chi24", 24, 24, 24),
        DirichletCharacter("chi-3", 3, -3, 3),
        DirichletCharacter("chi-4", 4, -4, 4),
        DirichletCharacter("chi-8", 8, -8, 8),
        DirichletCharacter("chi-12", 12, -12, 12),
        # (4/.) is the principal character mod 2 written with modulus 4
        DirichletCharacter("chi4", 4, 4, 1),
    )
}


def character(label: str) -> DirichletCharacter:
    """Look up a character by catalog label ("1", "chi8", "chi-3", ...)."""
    try:
        return CHARACTERS[label]
    except KeyError:
        raise KeyError(f"Unknown character {label!r}; expected one of {sorted(CHARACTERS)}") from None


def char_eval(chi: DirichletCharacter, n: int) -> int:
    if chi.top is None:
        return 1
    return kronecker(chi.top, n)


def divisors(n: int) -> List[int]:
    """Positive divisors of a positive integer in increasing order."""
    if n < 1:
        raise ValueError(f"divisors() needs a positive integer, got {n}")
    return [int(d) for d in _sympy_divisors(n)]


def _as_positive_integer(n: Union[int, Fraction]) -> Optional[int]:
    if isinstance(n, Fraction):
        if n.denominator != 1:
            return None
        n = n.numerator
    return n if n >= 1 else None


def sigma(k: int, n: Union[int, Fraction]) -> int:
    """
    Divisor power sum sigma_k(n).

    Non-integral or non-positive arguments give 0, which is how terms like
    sigma_3(n/2) vanish for odd n.
    """
    m = _as_positive_integer(n)
    if m is None:
        return 0
    return sum(d ** k for d in divisors(m))


def sigma_twisted(k: int, chi: DirichletCharacter, psi: DirichletCharacter, n: Union[int, Fraction]) -> int:
    """
    Twisted divisor sum: sum over d | n of psi(d) * chi(n/d) * d^k.

    psi weights the divisor, chi weights the complementary divisor.
    """
    m = _as_positive_integer(n)
    if m is None:
        return 0
    return sum(char_eval(psi, d) * char_eval(chi, m // d) * d ** k for d in divisors(m))


def _to_fraction(value: sympy.Rational) -> Fraction:
    return Fraction(int(value.p), int(value.q))


@lru_cache(maxsize=None)
def bernoulli(k: int) -> Fraction:
    """Bernoulli number B_k with the x/(e^x - 1) convention (B_1 = -1/2)."""
    if k < 0:
        raise ValueError(f"Bernoulli index must be non-negative, got {k}")
    # sympy >= 1.12 returns B_1 = +1/2
    if k == 1:
        return Fraction(-1, 2)
    return _to_fraction(sympy.bernoulli(k))


def bernoulli_polynomial(k: int, x: Fraction) -> Fraction:
    """B_k(x) evaluated at a rational point."""
    x = Fraction(x)
    return _to_fraction(sympy.bernoulli(k, sympy.Rational(x.numerator, x.denominator)))


@lru_cache(maxsize=None)
def gen_bernoulli(k: int, psi: DirichletCharacter) -> Fraction:
    """
    Generalized Bernoulli number B_{k,psi}.

    Computed from sum_{a=1}^{f} psi(a) t e^{at} / (e^{ft} - 1), which gives
    B_{k,psi} = f^(k-1) * sum_a psi(a) B_k(a/f). The modulus-1 character
    returns bernoulli(k) so that B_{1,1} keeps the -1/2 convention.
    """
    if k < 0:
        raise ValueError(f"Bernoulli index must be non-negative, got {k}")
    f = psi.modulus
    if f == 1:
        return bernoulli(k)
    total = sum(char_eval(psi, a) * bernoulli_polynomial(k, Fraction(a, f)) for a in range(1, f + 1))
    return Fraction(f) ** (k - 1) * total
