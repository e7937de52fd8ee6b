from fractions import Fraction

import pytest

import src.eta_search as eta_search
from src.catalog import eta_character, parse_eta_spec
from src.eta_search import candidate_specs, cusp_orders, explain_table, group_index, remediate_basis
from src.generators import eta_quotient
from src.repcount import QuadraticForm

F5 = parse_eta_spec("3^-2 6^7 8^3 12^3 24^-3")
LEVEL_8_SUBSTITUTE = parse_eta_spec("1^2 2^1 4^-1 8^6")


@pytest.mark.parametrize("level, index", [(1, 1), (6, 12), (8, 12), (12, 24), (24, 48)])
def test_group_index(level: int, index: int) -> None:
    assert group_index(level) == index


def test_cusp_orders_level_8() -> None:
    orders = cusp_orders(LEVEL_8_SUBSTITUTE, 8)
    assert orders == {1: 1, 2: Fraction(1, 2), 4: Fraction(1, 2), 8: 2}


def test_cusp_orders_sum_to_valence() -> None:
    for spec, level in ((F5, 24), (parse_eta_spec("1^2 2^2 3^2 6^2"), 6), (parse_eta_spec("2^4 4^4"), 8)):
        orders = cusp_orders(spec, level)
        assert sum(orders.values()) == Fraction(4 * group_index(level), 12)
        assert all(v > 0 for v in orders.values())
        # the order at infinity is the leading exponent
        assert orders[level] == spec.leading_exponent


def test_cusp_orders_rejects_foreign_dilation() -> None:
    with pytest.raises(ValueError):
        cusp_orders(parse_eta_spec("1^4 3^4"), 8)


def test_level_8_candidates() -> None:
    printed = parse_eta_spec("1^2 2^-3 4^11 8^-2")
    candidates = candidate_specs(level=8, weight=4, character="chi8", reference=printed, chunk_size=7)
    assert candidates[0] == printed
    assert LEVEL_8_SUBSTITUTE in candidates
    assert set(candidates) == {
        printed,
        LEVEL_8_SUBSTITUTE,
        parse_eta_spec("1^-2 2^11 4^-3 8^2"),
        parse_eta_spec("1^6 2^-1 4^1 8^2"),
    }
    assert len(candidates) == 4
    for spec in candidates:
        assert spec.weight == 4
        assert eta_character(spec) == "chi8"
        assert all(v > 0 for v in cusp_orders(spec, 8).values())


def test_candidates_without_reference_are_sorted_by_size() -> None:
    candidates = candidate_specs(level=8, weight=4, character="chi8")
    sizes = [sum(abs(r) for _, r in spec.factors) for spec in candidates]
    assert sizes == sorted(sizes)


def _fake_counts(spec, monkeypatch) -> None:
    def counts(form, n_max):
        return list(eta_quotient(spec, n_max + 1).coeffs)
    monkeypatch.setattr(eta_search, "representation_counts", counts)


def test_explain_table_finds_substituted_form(monkeypatch) -> None:
    # a row that picks out the seventh chi8 element, against counts generated by another quotient
    _fake_counts(LEVEL_8_SUBSTITUTE, monkeypatch)
    form = QuadraticForm.parse("A:1,1,1,2,1,1")
    vector = [Fraction(0)] * 14
    vector[6] = Fraction(1)
    explanation = explain_table("chi8", {form: vector}, n_max=20)
    assert explanation is not None
    assert explanation.form_name == "f4_8_chi8_2"
    assert explanation.printed_spec == parse_eta_spec("1^2 2^-3 4^11 8^-2")
    assert explanation.substitute == LEVEL_8_SUBSTITUTE
    assert explanation.rows_explained == 1
    assert explanation.kind == "replace"


def test_explain_table_returns_none_when_rows_match(monkeypatch) -> None:
    _fake_counts(parse_eta_spec("1^2 2^-3 4^11 8^-2"), monkeypatch)
    vector = [Fraction(0)] * 14
    vector[6] = Fraction(1)
    assert explain_table("chi8", {QuadraticForm.parse("A:1,1,1,2,1,1"): vector}, n_max=20) is None


def test_full_rank_space_needs_no_remediation() -> None:
    basis, remediation = remediate_basis("trivial", 40)
    assert remediation is None
    assert len(basis) == 16


@pytest.mark.slow
def test_level_24_candidates_include_printed_quotient() -> None:
    candidates = candidate_specs(level=24, weight=4, character="chi24", reference=F5)
    assert candidates[0] == F5
    assert len(candidates) == 1948


@pytest.mark.slow
def test_chi24_remediation() -> None:
    basis, remediation = remediate_basis("chi24", 60)
    assert len(basis) == 14
    assert remediation is not None
    assert remediation.column == 11
    assert remediation.replaced == "f4_24_chi24_7"
    assert (remediation.rank_before, remediation.rank_after) == (13, 14)
    assert remediation.substitute != remediation.replaced_spec
    assert basis[10].label == "f4_24_chi24_7'"
