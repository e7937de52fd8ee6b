"""
Exact rational linear algebra without floating point.

Rows are scaled to integers and eliminated fraction-free (Bareiss), so
intermediate entries stay bounded by minors of the input matrix.
"""

import logging
import math
from fractions import Fraction
from typing import List, Sequence, Tuple

logger = logging.getLogger(__name__)

Matrix = Sequence[Sequence[Fraction]]


class InconsistentSystem(ArithmeticError):
    """Some rows of an overdetermined system are not satisfied by the solution."""

    def __init__(self, failing_rows: Sequence[int]):
        self.failing_rows = list(failing_rows)
        shown = ", ".join(str(n) for n in self.failing_rows[:10])
        more = "" if len(self.failing_rows) <= 10 else f" (+{len(self.failing_rows) - 10} more)"
        super().__init__(f"Linear system is inconsistent at rows n = {shown}{more}")


class SingularSystem(ArithmeticError):
    """The coefficient matrix never reaches full column rank."""

    def __init__(self, rank: int, dependent_columns: Sequence[int]):
        self.rank = rank
        self.dependent_columns = list(dependent_columns)
        super().__init__(f"Matrix has rank {rank}; dependent columns {self.dependent_columns}")


def _integer_row(row: Sequence[Fraction]) -> List[int]:
    row = [Fraction(v) for v in row]
    scale = math.lcm(*(v.denominator for v in row)) if row else 1
    return [v.numerator * (scale // v.denominator) for v in row]


def scale_rows(matrix: Matrix) -> List[List[int]]:
    """Multiply each row by the lcm of its denominators."""
    return [_integer_row(row) for row in matrix]


def _pick_pivot(rows: List[List[int]], start: int, col: int) -> int:
    """Row index (>= start) with the shortest nonzero entry in col, or -1."""
    best, best_bits = -1, None
    for i in range(start, len(rows)):
        value = rows[i][col]
        if value:
            bits = abs(value).bit_length()
            if best_bits is None or bits < best_bits:
                best, best_bits = i, bits
    return best


def _bareiss(rows: List[List[int]], ncols: int) -> List[int]:
    """In-place fraction-free row echelon form over the first ncols columns; returns pivot columns."""
    pivots: List[int] = []
    previous = 1
    r = 0
    for c in range(ncols):
        if r == len(rows):
            break
        p = _pick_pivot(rows, r, c)
        if p < 0:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        pivot_row = rows[r]
        pivot = pivot_row[c]
        width = len(pivot_row)
        for i in range(r + 1, len(rows)):
            row = rows[i]
            factor = row[c]
            for j in range(c + 1, width):
                row[j] = (pivot * row[j] - factor * pivot_row[j]) // previous
            row[c] = 0
        previous = pivot
        pivots.append(c)
        r += 1
    return pivots


def echelon(matrix: Matrix) -> Tuple[List[List[int]], List[int]]:
    """
    Fraction-free echelon form of a rational matrix.

    Returns:
        Tuple of (nonzero integer echelon rows, pivot column indices)
    """
    rows = scale_rows(matrix)
    if not rows:
        return [], []
    pivots = _bareiss(rows, len(rows[0]))
    return rows[:len(pivots)], pivots


def rank(matrix: Matrix) -> int:
    return len(echelon(matrix)[1])


def dependent_columns(matrix: Matrix) -> List[int]:
    """1-based indices of the non-pivot columns, in column order."""
    rows = list(matrix)
    if not rows:
        return []
    ncols = len(rows[0])
    pivots = set(echelon(rows)[1])
    return [c + 1 for c in range(ncols) if c not in pivots]


def _reduce(row: List[int], basis: List[Tuple[int, List[int]]]) -> List[int]:
    for col, pivot_row in basis:
        if row[col]:
            pivot = pivot_row[col]
            factor = row[col]
            row = [pivot * a - factor * b for a, b in zip(row, pivot_row)]
            g = math.gcd(*row)
            if g > 1:
                row = [a // g for a in row]
    return row


def select_rows(matrix: Matrix, target_rank: int) -> List[int]:
    """
    Greedily pick rows n = 0, 1, 2, ... keeping each one that raises the rank.

    Stops once target_rank rows are kept or the matrix is exhausted.
    """
    basis: List[Tuple[int, List[int]]] = []
    chosen: List[int] = []
    for n, row in enumerate(matrix):
        if len(chosen) == target_rank:
            break
        reduced = _reduce(_integer_row(row), basis)
        lead = next((c for c, v in enumerate(reduced) if v), None)
        if lead is None:
            continue
        basis.append((lead, reduced))
        chosen.append(n)
    logger.debug(f"Selected rows {chosen} for target rank {target_rank}")
    return chosen


def _solve_square(rows: Matrix, rhs: Sequence[Fraction]) -> List[Fraction]:
    augmented = [_integer_row(list(row) + [b]) for row, b in zip(rows, rhs)]
    n = len(augmented)
    pivots = _bareiss(augmented, n)
    if len(pivots) < n:
        raise SingularSystem(len(pivots), [c + 1 for c in range(n) if c not in pivots])
    x = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        row = augmented[i]
        acc = Fraction(row[n]) - sum(row[j] * x[j] for j in range(i + 1, n))
        x[i] = acc / row[i]
    return x


class ExactSystem:
    """
    An overdetermined exact system M x = b sharing one coefficient matrix.

    Row selection is done once; each solve runs on the selected rows and then
    checks every row of the matrix.
    """

    def __init__(self, matrix: Matrix):
        self.matrix = [[Fraction(v) for v in row] for row in matrix]
        self.ncols = len(self.matrix[0]) if self.matrix else 0
        self.rows = select_rows(self.matrix, self.ncols)
        if len(self.rows) < self.ncols:
            raise SingularSystem(len(self.rows), dependent_columns(self.matrix))

    def residual_rows(self, x: Sequence[Fraction], rhs: Sequence[Fraction]) -> List[int]:
        return [
            n for n, (row, b) in enumerate(zip(self.matrix, rhs))
            if sum(a * v for a, v in zip(row, x) if a) != b
        ]

    def solve(self, rhs: Sequence[Fraction]) -> List[Fraction]:
        """
        Raises:
            InconsistentSystem: If any row is not satisfied
        """
        if len(rhs) != len(self.matrix):
            raise ValueError(f"Right-hand side has {len(rhs)} entries, matrix has {len(self.matrix)} rows")
        rhs = [Fraction(b) for b in rhs]
        x = _solve_square([self.matrix[i] for i in self.rows], [rhs[i] for i in self.rows])
        failing = self.residual_rows(x, rhs)
        if failing:
            raise InconsistentSystem(failing)
        return x


def solve_exact(matrix: Matrix, rhs: Sequence[Fraction]) -> List[Fraction]:
    return ExactSystem(matrix).solve(rhs)
