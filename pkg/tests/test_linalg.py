from fractions import Fraction

import pytest

from src.linalg import (ExactSystem, InconsistentSystem, SingularSystem, dependent_columns, echelon, rank,
                        scale_rows, select_rows, solve_exact)

F = Fraction


def test_scale_rows_clears_denominators() -> None:
    assert scale_rows([[F(1, 2), F(1, 3)], [F(2), F(0)]]) == [[3, 2], [2, 0]]


def test_rank_and_dependent_columns() -> None:
    matrix = [
        [1, 2, 3, 2],
        [0, 1, 1, 1],
        [1, 3, 4, 3],
        [2, 5, 7, 5],
    ]
    assert rank(matrix) == 2
    # columns 3 and 4 are combinations of the first two
    assert dependent_columns(matrix) == [3, 4]


def test_echelon_pivots() -> None:
    rows, pivots = echelon([[0, 2], [3, 1], [6, 2]])
    assert pivots == [0, 1]
    assert len(rows) == 2


def test_select_rows_is_greedy() -> None:
    matrix = [[0, 0], [1, 1], [2, 2], [1, 0], [5, 7]]
    assert select_rows(matrix, 2) == [1, 3]


def test_solve_exact_overdetermined() -> None:
    # x = 1/3, y = -2
    matrix = [[F(1), F(0)], [F(0), F(1)], [F(3), F(1, 2)], [F(6), F(1)]]
    rhs = [F(1, 3), F(-2), F(0), F(0)]
    assert solve_exact(matrix, rhs) == [F(1, 3), F(-2)]


def test_inconsistent_rows_are_reported() -> None:
    matrix = [[1, 0], [0, 1], [1, 1], [2, 1]]
    with pytest.raises(InconsistentSystem) as excinfo:
        solve_exact(matrix, [1, 1, 2, 4])
    assert excinfo.value.failing_rows == [3]


def test_singular_system() -> None:
    with pytest.raises(SingularSystem) as excinfo:
        ExactSystem([[1, 2], [2, 4], [3, 6]])
    assert excinfo.value.rank == 1
    assert excinfo.value.dependent_columns == [2]


def test_system_reuse_and_rhs_length() -> None:
    system = ExactSystem([[2, 1], [1, 3], [3, 4]])
    assert system.rows == [0, 1]
    assert system.solve([3, 4, 7]) == [F(1), F(1)]
    assert system.solve([1, 3, 4]) == [F(0), F(1)]
    with pytest.raises(ValueError):
        system.solve([1, 2])


def test_random_square_systems(rng) -> None:
    for _ in range(20):
        n = rng.randint(2, 6)
        x = [F(rng.randint(-20, 20), rng.randint(1, 9)) for _ in range(n)]
        while True:
            matrix = [[F(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(n)] for _ in range(n + 3)]
            if rank(matrix) == n:
                break
        rhs = [sum(a * v for a, v in zip(row, x)) for row in matrix]
        assert solve_exact(matrix, rhs) == x
