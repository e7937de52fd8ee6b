"""
Searches over holomorphic eta quotients on Gamma_0(N).

Orders at the cusps follow Ligozat's formula. A candidate is enumerated
through its vector of doubled cusp orders, which is a composition of
2 * k * index / 12. The vector is inverted back to exponents with numpy in
chunks.

Two consumers:
  - remediate_basis replaces a dependent column of a spanning set with the
    first candidate that restores the rank and lets every form of the space
    be solved against brute-force counts;
  - explain_table looks for one change to a printed spanning set (a form
    replaced, or a missing form inserted in place of a duplicate) under
    which printed coefficient rows reproduce brute-force counts.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, islice
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np
from sympy import primefactors

from src.arith import divisors
from src.bases import (BasisElement, EtaComboDescriptor, RankDeficient, basis_descriptors, build_basis,
                       coefficient_matrix, space_id)
from src.catalog import eta_character, load_catalog
from src.generators import EtaCombination, EtaQuotientSpec
from src.linalg import ExactSystem, InconsistentSystem, SingularSystem, dependent_columns, rank
from src.repcount import QuadraticForm, enumerate_forms, representation_counts
from src.utils import load_config

logger = logging.getLogger(__name__)


class RemediationFailed(RuntimeError):
    """No candidate eta quotient restores the rank of a spanning set."""


@dataclass(frozen=True)
class Remediation:
    """
    A substitution applied to a rank-deficient spanning set.

    Attributes:
        space: Space label
        column: 1-based index of the replaced element
        replaced: Catalog name of the replaced form
        replaced_spec: Its eta quotient
        substitute: The eta quotient put in its place
        rank_before: Rank of the printed spanning set
        rank_after: Rank after substitution
        candidates_tried: Candidates examined before one was accepted
    """
    space: str
    column: int
    replaced: str
    replaced_spec: EtaQuotientSpec
    substitute: EtaQuotientSpec
    rank_before: int
    rank_after: int
    candidates_tried: int


@dataclass(frozen=True)
class Explanation:
    """
    A change to the printed spanning set under which printed rows reproduce brute-force counts.

    kind "replace": every occurrence of form_name is swapped for substitute.
    kind "insert": substitute enters at column position, the columns from there
    up to the duplicate form_name shift right by one and the duplicate is dropped.
    """
    space: str
    form_name: str
    printed_spec: EtaQuotientSpec
    substitute: EtaQuotientSpec
    rows_explained: int
    kind: str = "replace"
    position: Optional[int] = None


def group_index(level: int) -> int:
    """Index of Gamma_0(level) in SL_2(Z)."""
    index = level
    for p in primefactors(level):
        index = index * (p + 1) // p
    return index


def _order_matrix(level: int) -> List[List[Fraction]]:
    """Rows: cusp denominators c | level; columns: dilations delta | level."""
    divs = divisors(level)
    return [
        [Fraction(level * math.gcd(c, delta) ** 2, 24 * math.gcd(c, level // c) * c * delta) for delta in divs]
        for c in divs
    ]


def cusp_orders(spec: EtaQuotientSpec, level: int = 24) -> Dict[int, Fraction]:
    """
    Order of vanishing at the cusp with denominator c, for each c | level.

    Raises:
        ValueError: If a dilation of the quotient does not divide the level
    """
    for d, _ in spec.factors:
        if level % d:
            raise ValueError(f"Eta quotient {spec} has dilation {d}, which does not divide level {level}")
    divs = divisors(level)
    exponents = [spec.exponent(delta) for delta in divs]
    matrix = _order_matrix(level)
    return {c: sum((a * r for a, r in zip(row, exponents)), Fraction(0)) for c, row in zip(divs, matrix)}


def _doubled_inverse(level: int) -> Tuple[np.ndarray, int]:
    """Integer matrix M and denominator D with exponents = (M @ w) / D for doubled orders w."""
    matrix = _order_matrix(level)
    size = len(matrix)
    system = ExactSystem(matrix)
    columns = [system.solve([Fraction(int(i == j)) for i in range(size)]) for j in range(size)]
    inverse = [[columns[j][i] / 2 for j in range(size)] for i in range(size)]
    denominator = math.lcm(*(v.denominator for row in inverse for v in row))
    scaled = np.array([[int(v * denominator) for v in row] for row in inverse], dtype=np.int64)
    return scaled, denominator


def _compositions(total: int, parts: int, chunk_size: int):
    """Chunks of compositions of total into parts positive integers, as int64 arrays."""
    cuts = combinations(range(1, total), parts - 1)
    while True:
        block = list(islice(cuts, chunk_size))
        if not block:
            return
        inner = np.array(block, dtype=np.int64).reshape(len(block), parts - 1)
        edges = np.hstack([
            np.zeros((len(block), 1), dtype=np.int64),
            inner,
            np.full((len(block), 1), total, dtype=np.int64),
        ])
        yield np.diff(edges, axis=1)


def _distance_key(exponents: Tuple[int, ...], reference: Optional[Tuple[int, ...]]):
    distance = sum(abs(a - b) for a, b in zip(exponents, reference)) if reference else 0
    return distance, sum(abs(r) for r in exponents), exponents


@lru_cache(maxsize=None)
def _enumerate_specs(level: int, weight: int, character: str, max_exponent: int,
                     chunk_size: int) -> Tuple[EtaQuotientSpec, ...]:
    divs = divisors(level)
    total = Fraction(2 * weight * group_index(level), 12)
    if total.denominator != 1:
        raise ValueError(f"Weight {weight} at level {level} gives a non-integral order budget {total}")
    scaled, denominator = _doubled_inverse(level)
    delta = np.array(divs, dtype=np.int64)
    codelta = np.array([level // d for d in divs], dtype=np.int64)

    found: List[Tuple[int, ...]] = []
    for chunk in _compositions(int(total), len(divs), chunk_size):
        numer = chunk @ scaled.T
        integral = np.all(numer % denominator == 0, axis=1)
        exps = numer[integral] // denominator
        keep = np.all(np.abs(exps) <= max_exponent, axis=1)
        keep &= exps.sum(axis=1) == 2 * weight
        keep &= (exps @ delta) % 24 == 0
        keep &= (exps @ codelta) % 24 == 0
        for row in exps[keep]:
            found.append(tuple(int(r) for r in row))
        logger.debug(f"Level {level}: {len(found)} exponent vectors after chunk of {len(chunk)}")

    specs = []
    for exps in found:
        spec = EtaQuotientSpec(tuple((d, r) for d, r in zip(divs, exps) if r))
        if eta_character(spec) == character:
            specs.append(spec)
    logger.info(f"Found {len(specs)} candidate eta quotients at level {level}, weight {weight}, character {character}")
    return tuple(specs)


def candidate_specs(level: int = 24, weight: int = 4, character: str = "chi24", max_exponent: int = 14,
                    reference: Optional[EtaQuotientSpec] = None,
                    chunk_size: Optional[int] = None) -> List[EtaQuotientSpec]:
    """
    Every holomorphic cusp form of the given weight that is an eta quotient on
    Gamma_0(level) with the requested character and |r| <= max_exponent.

    Ordered by L1 distance of the exponent vector to reference (when given),
    then by total |r|, then lexicographically.
    """
    if chunk_size is None:
        chunk_size = int(load_config()["search"]["chunk_size"])
    divs = divisors(level)
    ref = tuple(reference.exponent(d) for d in divs) if reference else None
    specs = list(_enumerate_specs(level, weight, character, max_exponent, chunk_size))
    specs.sort(key=lambda s: _distance_key(tuple(s.exponent(d) for d in divs), ref))
    return specs


def _space_forms(space_label: str) -> List[QuadraticForm]:
    return [f for f in enumerate_forms() if f.character_label == space_label]


def _solves_all(basis: Sequence[BasisElement], forms: Sequence[QuadraticForm], n_max: int) -> bool:
    try:
        system = ExactSystem(coefficient_matrix(basis, n_max))
    except SingularSystem:
        return False
    for form in forms:
        try:
            system.solve(representation_counts(form, n_max))
        except InconsistentSystem:
            logger.debug(f"{form.label} is not in the span of the candidate basis")
            return False
    return True


@lru_cache(maxsize=None)
def remediate_basis(space_label: str, prec: int) -> Tuple[Tuple[BasisElement, ...], Optional[Remediation]]:
    """
    Build the basis of a space, repairing a rank-deficient spanning set.

    Returns:
        (basis, remediation); remediation is None when the printed list is a basis

    Raises:
        RemediationFailed: If no candidate restores full rank
    """
    try:
        return tuple(build_basis(space_label, prec)), None
    except RankDeficient as e:
        deficiency = e

    config = load_config()["search"]
    verify_n_max = min(int(config["verify_n_max"]), prec - 1)
    space = space_id(space_label)
    descriptors = basis_descriptors(space)
    printed = build_basis(space, prec, descriptors=descriptors, check_rank=False)
    forms = _space_forms(space_label)
    basis = list(printed)
    remediation = None
    for column in deficiency.dependent_columns:
        original = descriptors[column - 1]
        if not isinstance(original, EtaComboDescriptor) or len(original.combination.terms) != 1:
            raise RemediationFailed(f"Space {space_label}: dependent column {column} is not a single eta quotient")
        replaced_spec = original.combination.terms[0][1]
        current_rank = rank(coefficient_matrix(basis, prec - 1))
        candidates = candidate_specs(level=24, weight=4, character=space.character_name,
                                     max_exponent=int(config["max_exponent"]), reference=replaced_spec)
        for tried, spec in enumerate(candidates, start=1):
            descriptor = EtaComboDescriptor(f"{original.form_name}'", EtaCombination(((Fraction(1), spec),)),
                                            original.dilation)
            trial = list(basis)
            trial[column - 1] = BasisElement(column, descriptor, descriptor.expand(prec))
            new_rank = rank(coefficient_matrix(trial, prec - 1))
            if new_rank <= current_rank or not _solves_all(trial, forms, verify_n_max):
                continue
            basis = trial
            remediation = Remediation(space_label, column, original.form_name, replaced_spec, spec,
                                      deficiency.rank, new_rank, tried)
            logger.warning(
                f"Space {space_label}: column {column} ({original.form_name} = {replaced_spec}) is dependent; "
                f"substituted {spec} after {tried} candidates"
            )
            break
        else:
            raise RemediationFailed(
                f"Space {space_label}: no candidate among {len(candidates)} restores column {column}"
            )

    final_rank = rank(coefficient_matrix(basis, prec - 1))
    if final_rank < space.dimension:
        raise RemediationFailed(f"Space {space_label}: rank {final_rank} after remediation, need {space.dimension}")
    return tuple(basis), remediation


def _reproduces(vector: Sequence[Fraction], columns: Sequence[Sequence[Fraction]], counts: Sequence[int]) -> bool:
    for n, count in enumerate(counts):
        if sum((v * col[n] for v, col in zip(vector, columns) if v), Fraction(0)) != count:
            return False
    return True


def _single_quotient(descriptor) -> Optional[EtaQuotientSpec]:
    if not isinstance(descriptor, EtaComboDescriptor):
        return None
    combination = descriptor.combination
    if len(combination.terms) != 1 or combination.twist is not None:
        return None
    return combination.terms[0][1]


class _Explainer:
    """Printed columns of one space and the rows they are meant to reproduce."""

    def __init__(self, space_label: str, rows: Mapping[QuadraticForm, Sequence[Fraction]], n_max: int):
        self.space = space_id(space_label)
        self.rows = rows
        self.prec = n_max + 1
        self.descriptors = basis_descriptors(self.space)
        self.columns = [d.expand(self.prec).coeffs for d in self.descriptors]
        self.counts = {form: representation_counts(form, n_max) for form in rows}
        self.max_exponent = int(load_config()["search"]["max_exponent"])
        self._expansions: Dict[Tuple[EtaQuotientSpec, int], Tuple[Fraction, ...]] = {}

    def expand(self, spec: EtaQuotientSpec, dilation: int) -> Tuple[Fraction, ...]:
        key = (spec, dilation)
        if key not in self._expansions:
            descriptor = EtaComboDescriptor(str(spec), EtaCombination(((Fraction(1), spec),)), dilation)
            self._expansions[key] = descriptor.expand(self.prec).coeffs
        return self._expansions[key]

    def explains(self, columns: Sequence[Sequence[Fraction]]) -> bool:
        return all(_reproduces(vector, columns, self.counts[form]) for form, vector in self.rows.items())

    def candidates(self, name: str, printed_spec: EtaQuotientSpec) -> List[EtaQuotientSpec]:
        level = load_catalog().form(name).level
        return candidate_specs(level=level, weight=4, character=eta_character(printed_spec),
                               max_exponent=self.max_exponent, reference=printed_spec)

    def by_replacement(self) -> Optional[Explanation]:
        used: Dict[str, List[int]] = {}
        for j, d in enumerate(self.descriptors):
            if _single_quotient(d) is not None and any(vector[j] for vector in self.rows.values()):
                used.setdefault(d.form_name, []).append(j)

        for name, positions in used.items():
            printed_spec = _single_quotient(self.descriptors[positions[0]])
            for spec in self.candidates(name, printed_spec):
                if spec == printed_spec:
                    continue
                trial = list(self.columns)
                for j in positions:
                    trial[j] = self.expand(spec, self.descriptors[j].dilation)
                if self.explains(trial):
                    return Explanation(self.space.label, name, printed_spec, spec, len(self.rows))
        return None

    def by_insertion(self) -> Optional[Explanation]:
        matrix = [[col[n] for col in self.columns] for n in range(self.prec)]
        first_cusp = self.space.eisenstein_dim + 1
        for column in dependent_columns(matrix):
            dropped = self.descriptors[column - 1]
            printed_spec = _single_quotient(dropped)
            if printed_spec is None or column <= first_cusp:
                continue
            for spec in self.candidates(dropped.form_name, printed_spec):
                inserted = self.expand(spec, dropped.dilation)
                for position in range(first_cusp, column):
                    trial = (self.columns[:position - 1] + [inserted]
                             + self.columns[position - 1:column - 1] + self.columns[column:])
                    if self.explains(trial):
                        return Explanation(self.space.label, dropped.form_name, printed_spec, spec,
                                           len(self.rows), kind="insert", position=position)
        return None


def explain_table(space_label: str, rows: Mapping[QuadraticForm, Sequence[Fraction]],
                  n_max: int = 40) -> Optional[Explanation]:
    """
    Find a change to the printed spanning set under which every given
    coefficient row reproduces brute-force counts for n <= n_max.

    Two kinds of change are tried, in order:
      - replace a single-quotient catalog form (all of its dilations) that
        carries a nonzero coefficient in some row by another eta quotient of
        the same level and character;
      - when the printed list has a dependent column, drop it and insert a
        candidate at an earlier cusp position, shifting the forms in between.

    Returns:
        Explanation, or None when the rows already match or nothing explains them
    """
    explainer = _Explainer(space_label, rows, n_max)
    if explainer.explains(explainer.columns):
        return None
    explanation = explainer.by_replacement() or explainer.by_insertion()
    if explanation is None:
        logger.info(f"Space {space_label}: no single change to the printed list explains the rows")
    elif explanation.kind == "insert":
        logger.info(
            f"Space {space_label}: rows reproduce counts with {explanation.substitute} inserted at column "
            f"{explanation.position} and the duplicate {explanation.form_name} dropped"
        )
    else:
        logger.info(
            f"Space {space_label}: rows reproduce counts with {explanation.form_name} = {explanation.substitute} "
            f"instead of {explanation.printed_spec}"
        )
    return explanation
