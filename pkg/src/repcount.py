"""
Brute-force representation numbers for the two octonary families

    A: a1 x1^2 + a2 x2^2 + a3 x3^2 + a4 x4^2 + b1 (x5^2 + x5 x6 + x6^2) + b2 (x7^2 + x7 x8 + x8^2)
    B: (x1^2 + x1 x2 + x2^2) + c1 (...) + c2 (...) + c3 (...)

and the theta products whose q-expansions generate them.
"""

import logging
import math
import re
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations_with_replacement
from typing import List, Sequence, Tuple

from src.generators import borwein_F, hexagonal_bound, theta_series
from src.series import QSeries, dilate, product

logger = logging.getLogger(__name__)

SQUARE_CHOICES = (1, 2, 3)
HEXAGONAL_CHOICES = (1, 2, 4)
FAMILY_B_CHOICES = (1, 2, 4, 8)

# squarefree kernel of a1 a2 a3 a4 -> space of the theta product
_KERNEL_SPACE = {1: "trivial", 2: "chi8", 3: "chi12", 6: "chi24"}


class FormConstraintError(ValueError):
    """A quadratic-form coefficient is outside its allowed set or out of order."""

    def __init__(self, field: str, value, reason: str):
        self.field = field
        self.value = value
        super().__init__(f"Invalid coefficient {field}={value}: {reason}")


def _check_block(prefix: str, values: Sequence[int], allowed: Sequence[int], length: int) -> None:
    if len(values) != length:
        raise FormConstraintError(prefix, tuple(values), f"expected {length} coefficients, got {len(values)}")
    for i, value in enumerate(values):
        field = f"{prefix}{i + 1}"
        if value not in allowed:
            raise FormConstraintError(field, value, f"must be one of {list(allowed)}")
        if i and value < values[i - 1]:
            raise FormConstraintError(field, value, f"coefficients must be non-decreasing ({prefix}{i} = {values[i - 1]})")


@dataclass(frozen=True)
class QuadraticForm:
    """
    One octonary form of family A or B.

    Attributes:
        family: "A" or "B"
        squares: (a1, a2, a3, a4) for family A, empty for family B
        hexagonals: (b1, b2) for family A, (c1, c2, c3) for family B
    """
    family: str
    squares: Tuple[int, ...]
    hexagonals: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, 'squares', tuple(int(a) for a in self.squares))
        object.__setattr__(self, 'hexagonals', tuple(int(b) for b in self.hexagonals))
        if self.family == "A":
            _check_block("a", self.squares, SQUARE_CHOICES, 4)
            _check_block("b", self.hexagonals, HEXAGONAL_CHOICES, 2)
        elif self.family == "B":
            if self.squares:
                raise FormConstraintError("a", self.squares, "family B has no diagonal part")
            _check_block("c", self.hexagonals, FAMILY_B_CHOICES, 3)
        else:
            raise FormConstraintError("family", self.family, "must be 'A' or 'B'")

    @property
    def hexagonal_coefficients(self) -> Tuple[int, ...]:
        """Multipliers of every x^2 + xy + y^2 block, including the implicit 1 of family B."""
        return (1,) + self.hexagonals if self.family == "B" else self.hexagonals

    @property
    def label(self) -> str:
        return f"{self.family}:" + ",".join(str(v) for v in self.squares + self.hexagonals)

    @property
    def row_label(self) -> str:
        if self.family == "A":
            return "(" + "".join(map(str, self.squares)) + "," + "".join(map(str, self.hexagonals)) + ")"
        return "(" + ",".join(map(str, self.hexagonal_coefficients)) + ")"

    @property
    def character_label(self) -> str:
        if self.family == "B":
            return "trivial"
        kernel = 1
        for p in (2, 3):
            if sum(1 for a in self.squares if a == p) % 2:
                kernel *= p
        return _KERNEL_SPACE[kernel]

    @property
    def level(self) -> int:
        level = math.lcm(*(4 * a for a in self.squares), *(3 * b for b in self.hexagonal_coefficients))
        if 24 % level:
            raise FormConstraintError("level", level, f"{self.label} has a level that does not divide 24")
        return level

    @classmethod
    def parse(cls, text: str) -> "QuadraticForm":
        """
        Parse "A:a1,a2,a3,a4,b1,b2" or "B:c1,c2,c3".

        Raises:
            ValueError: On malformed text
            FormConstraintError: If a coefficient violates the family constraints
        """
        match = re.fullmatch(r"\s*([ABab])\s*:\s*([\d,\s]+)", text)
        if not match:
            raise ValueError(f"Cannot parse form {text!r}; expected 'A:a1,a2,a3,a4,b1,b2' or 'B:c1,c2,c3'")
        family = match.group(1).upper()
        values = [int(v) for v in match.group(2).replace(" ", "").split(",") if v]
        if family == "A":
            if len(values) != 6:
                raise ValueError(f"Family A form {text!r} needs 6 coefficients, got {len(values)}")
            return cls("A", tuple(values[:4]), tuple(values[4:]))
        return cls("B", (), tuple(values))

    @classmethod
    def from_row_label(cls, text: str) -> "QuadraticForm":
        """Parse the printed row styles "(1111,11)", "1112,11", "112311" and "(1,1,1,2)"."""
        body = text.strip().strip("()").replace(" ", "")
        parts = body.split(",")
        if len(parts) == 4:
            if parts[0] != "1":
                raise ValueError(f"Family B row {text!r} must start with 1")
            return cls("B", (), tuple(int(p) for p in parts[1:]))
        digits = "".join(parts)
        if len(digits) != 6 or not digits.isdigit() or (len(parts) == 2 and len(parts[0]) != 4):
            raise ValueError(f"Cannot parse row label {text!r}")
        return cls("A", tuple(int(c) for c in digits[:4]), tuple(int(c) for c in digits[4:]))


def enumerate_forms() -> List[QuadraticForm]:
    """
    All 90 family-A forms followed by the 19 family-B forms, in canonical order.

    Family-A forms are grouped by space (trivial, chi8, chi12, chi24), each
    group in lexicographic order. Family B skips (1, 1, 1), the s8 form.
    """
    family_a = [
        QuadraticForm("A", squares, hexagonals)
        for squares in combinations_with_replacement(SQUARE_CHOICES, 4)
        for hexagonals in combinations_with_replacement(HEXAGONAL_CHOICES, 2)
    ]
    order = {label: i for i, label in enumerate(_KERNEL_SPACE.values())}
    family_a.sort(key=lambda f: (order[f.character_label], f.squares, f.hexagonals))
    family_b = [
        QuadraticForm("B", (), c)
        for c in combinations_with_replacement(FAMILY_B_CHOICES, 3)
        if c != (1, 1, 1)
    ]
    return family_a + family_b


@lru_cache(maxsize=8)
def _hexagonal_norms(limit: int) -> Tuple[int, ...]:
    """Number of (x, y) with x^2 + xy + y^2 = m, for m = 0..limit."""
    counts = [0] * (limit + 1)
    bound = hexagonal_bound(limit)
    for x in range(-bound, bound + 1):
        for y in range(-bound, bound + 1):
            norm = x * x + x * y + y * y
            if norm <= limit:
                counts[norm] += 1
    return tuple(counts)


def _square_solutions(a: int, rem: int) -> int:
    """Number of x with a x^2 = rem."""
    if rem == 0:
        return 1
    if rem % a:
        return 0
    root = math.isqrt(rem // a)
    return 2 if root * root == rem // a else 0


def _count(squares: Sequence[int], hexagonals: Sequence[int], n: int) -> int:
    hex_norms = _hexagonal_norms(n)

    def squares_count(rem: int, idx: int) -> int:
        a = squares[idx]
        if idx == len(squares) - 1:
            return _square_solutions(a, rem)
        total = squares_count(rem, idx + 1)
        x = 1
        while a * x * x <= rem:
            total += 2 * squares_count(rem - a * x * x, idx + 1)
            x += 1
        return total

    def hexagonal_count(rem: int, idx: int) -> int:
        b = hexagonals[idx]
        if idx == len(hexagonals) - 1 and not squares:
            return hex_norms[rem // b] if rem % b == 0 else 0
        total = 0
        for m in range(rem // b + 1):
            if hex_norms[m]:
                rest = rem - b * m
                inner = hexagonal_count(rest, idx + 1) if idx + 1 < len(hexagonals) else squares_count(rest, 0)
                total += hex_norms[m] * inner
        return total

    if not hexagonals:
        return squares_count(n, 0)
    return hexagonal_count(n, 0)


def count_representations(form: QuadraticForm, n: int) -> int:
    """
    Number of integer vectors x in Z^8 with Q(x) = n, by nested enumeration.

    Hexagonal blocks are iterated outermost with their norm multiplicities;
    the last diagonal variable is solved directly.
    """
    if n < 0:
        raise ValueError(f"Representation count needs n >= 0, got {n}")
    return _count(form.squares, form.hexagonal_coefficients, n)


def _convolve(a: Sequence[int], b: Sequence[int], n_max: int) -> List[int]:
    out = [0] * (n_max + 1)
    for i, x in enumerate(a):
        if x:
            for j in range(n_max + 1 - i):
                if b[j]:
                    out[i + j] += x * b[j]
    return out


def _histogram(squares: Sequence[int], hexagonals: Sequence[int], n_max: int) -> List[int]:
    hex_norms = _hexagonal_norms(n_max)
    square_half = [1] + [0] * n_max
    for a in squares:
        single = [0] * (n_max + 1)
        for m in range(n_max + 1):
            single[m] = _square_solutions(a, m)
        square_half = _convolve(square_half, single, n_max)
    hexagonal_half = [1] + [0] * n_max
    for b in hexagonals:
        dilated = [hex_norms[m // b] if m % b == 0 else 0 for m in range(n_max + 1)]
        hexagonal_half = _convolve(hexagonal_half, dilated, n_max)
    return _convolve(square_half, hexagonal_half, n_max)


def representation_counts(form: QuadraticForm, n_max: int) -> List[int]:
    """
    Counts for n = 0..n_max from histograms of the diagonal half and the
    hexagonal half, convolved.
    """
    if n_max < 0:
        raise ValueError(f"n_max must be non-negative, got {n_max}")
    return _histogram(form.squares, form.hexagonal_coefficients, n_max)


def hexagonal_sum_counts(n_max: int) -> List[int]:
    """Representation numbers of the sum of four copies of x^2 + xy + y^2, n = 0..n_max."""
    return _histogram((), (1, 1, 1, 1), n_max)


def hexagonal_sum_count(n: int) -> int:
    return hexagonal_sum_counts(n)[n]


def theta_product(form: QuadraticForm, prec: int) -> QSeries:
    """Theta(a1 z)...Theta(a4 z) F(b1 z) F(b2 z), or F(z) F(c1 z) F(c2 z) F(c3 z)."""
    if prec < 1:
        raise ValueError(f"Precision must be positive, got {prec}")
    theta = theta_series(prec)
    hexagonal = borwein_F(prec)
    factors = [dilate(theta, a) for a in form.squares]
    factors += [dilate(hexagonal, b) for b in form.hexagonal_coefficients]
    return product(factors)
