from collections import Counter

import pytest

from src import repcount
from src.arith import sigma
from src.repcount import (FormConstraintError, QuadraticForm, count_representations, enumerate_forms,
                          hexagonal_sum_count, hexagonal_sum_counts, representation_counts, theta_product)


def test_enumerate_forms() -> None:
    forms = enumerate_forms()
    assert len(forms) == 109
    assert len(set(forms)) == 109
    family_a = [f for f in forms if f.family == "A"]
    family_b = [f for f in forms if f.family == "B"]
    assert len(family_a) == 90 and len(family_b) == 19
    assert Counter(f.character_label for f in family_a) == {"trivial": 36, "chi8": 18, "chi12": 18, "chi24": 18}
    assert forms[0].label == "A:1,1,1,1,1,1"
    assert forms[90].label == "B:1,1,2"
    assert QuadraticForm("B", (), (1, 1, 1)) not in forms
    # grouped by space
    labels = [f.character_label for f in family_a]
    assert labels == sorted(labels, key=["trivial", "chi8", "chi12", "chi24"].index)


@pytest.mark.parametrize("label, n, expected", [
    ("A:1,1,1,1,1,1", 0, 1),
    ("A:1,1,1,1,1,1", 1, 20),
    ("A:1,1,2,3,1,1", 1, 16),
    ("B:1,1,2", 1, 18),
    ("B:1,1,2", 2, 114),
    ("A:3,3,3,3,4,4", 1, 0),
    ("A:3,3,3,3,4,4", 3, 8),
])
def test_count_representations(label: str, n: int, expected: int) -> None:
    assert count_representations(QuadraticForm.parse(label), n) == expected


def test_negative_n_rejected() -> None:
    with pytest.raises(ValueError):
        count_representations(QuadraticForm.parse("A:1,1,1,1,1,1"), -1)
    with pytest.raises(ValueError):
        representation_counts(QuadraticForm.parse("A:1,1,1,1,1,1"), -1)


@pytest.mark.parametrize("label", ["A:1,1,1,1,1,1", "A:1,1,1,2,1,4", "A:1,2,3,3,2,2", "B:1,2,4", "B:2,4,8"])
def test_theta_product_matches_enumeration(label: str) -> None:
    form = QuadraticForm.parse(label)
    counts = representation_counts(form, 30)
    assert [int(c) for c in theta_product(form, 31).coeffs] == counts
    for n in (0, 1, 7, 12, 30):
        assert count_representations(form, n) == counts[n]


def test_hexagonal_sum_identity() -> None:
    counts = hexagonal_sum_counts(500)
    assert counts[0] == 1
    for n in range(1, 501):
        expected = 24 * sigma(3, n) + (216 * sigma(3, n // 3) if n % 3 == 0 else 0)
        assert counts[n] == expected, n
    assert hexagonal_sum_count(9) == counts[9]


def test_labels_and_levels() -> None:
    form = QuadraticForm.parse("A:1,1,1,2,1,4")
    assert form.label == "A:1,1,1,2,1,4"
    assert form.row_label == "(1112,14)"
    assert form.character_label == "chi8"
    assert form.level == 24
    b = QuadraticForm.parse("b: 1, 2, 4")
    assert b.label == "B:1,2,4"
    assert b.row_label == "(1,1,2,4)"
    assert b.hexagonal_coefficients == (1, 1, 2, 4)
    assert b.character_label == "trivial"
    assert QuadraticForm.parse("A:1,1,1,1,1,1").level == 12


@pytest.mark.parametrize("text, expected", [
    ("(1111,11)", "A:1,1,1,1,1,1"),
    ("1112,11", "A:1,1,1,2,1,1"),
    ("112311", "A:1,1,2,3,1,1"),
    ("(1,1,1,2)", "B:1,1,2"),
])
def test_from_row_label(text: str, expected: str) -> None:
    assert QuadraticForm.from_row_label(text).label == expected


@pytest.mark.parametrize("text", ["(2,1,1,2)", "11121", "111,211"])
def test_from_row_label_errors(text: str) -> None:
    with pytest.raises(ValueError):
        QuadraticForm.from_row_label(text)


@pytest.mark.parametrize("text, field", [
    ("A:3,1,1,1,1,1", "a2"),
    ("A:1,1,1,5,1,1", "a4"),
    ("A:1,1,1,1,3,3", "b1"),
    ("B:1,1,16", "c3"),
])
def test_constraint_violations(text: str, field: str) -> None:
    with pytest.raises(FormConstraintError) as excinfo:
        QuadraticForm.parse(text)
    assert excinfo.value.field == field


@pytest.mark.parametrize("text", ["C:1,1", "A:1,1,1", "A:1;1;1;1;1;1", ""])
def test_parse_errors(text: str) -> None:
    with pytest.raises(ValueError):
        QuadraticForm.parse(text)


def test_level_outside_24_is_rejected(monkeypatch) -> None:
    monkeypatch.setattr(repcount, "HEXAGONAL_CHOICES", (1, 2, 4, 5))
    form = QuadraticForm("A", (1, 1, 1, 1), (1, 5))
    with pytest.raises(FormConstraintError) as excinfo:
        form.level
    assert excinfo.value.field == "level"
    assert excinfo.value.value == 60
