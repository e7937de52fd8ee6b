"""
Express theta products in the explicit bases and audit the printed tables.

Every solve is exact: the coefficient matrix over n = 0..prec-1 is reduced
on its first independent rows and the solution is then checked against all
remaining rows.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from src.bases import BasisElement, SpaceId, build_basis, coefficient_matrix, space_id
from src.eta_search import Explanation, Remediation, explain_table, remediate_basis
from src.linalg import ExactSystem
from src.refdata import SampleFormula, formula_values, load_reference_tables
from src.repcount import QuadraticForm, count_representations, representation_counts, theta_product
from src.utils import load_config

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CoefficientVector:
    """
    Exact coordinates of a theta product in the basis of its space.

    Attributes:
        space: Space the coordinates refer to
        form: The quadratic form
        entries: One rational per basis element, in basis order
        remediation: Substitution applied to the basis, if any
    """
    space: SpaceId
    form: QuadraticForm
    entries: Tuple[Fraction, ...]
    remediation: Optional[Remediation] = None

    def __post_init__(self):
        if len(self.entries) != self.space.dimension:
            raise ValueError(
                f"{self.form.label}: {len(self.entries)} entries for space {self.space.label} "
                f"of dimension {self.space.dimension}"
            )

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, i: int) -> Fraction:
        return self.entries[i]


@dataclass(frozen=True)
class TableDiff:
    table: str
    form: QuadraticForm
    row_label: str
    column: int
    printed_value: Fraction
    computed_value: Fraction
    printed_reproduces_counts: bool
    computed_reproduces_counts: bool
    first_failing_n: Optional[int] = None

    @property
    def verdict(self) -> str:
        return "match" if self.printed_value == self.computed_value else "mismatch"


@dataclass
class VerificationReport:
    form: QuadraticForm
    n_max: int
    # (n, formula value, brute-force count)
    violations: List[Tuple[int, Fraction, int]] = field(default_factory=list)
    remediation: Optional[Remediation] = None

    @property
    def ok(self) -> bool:
        return not self.violations


@dataclass
class SampleFormulaReport:
    form: QuadraticForm
    n_max: int
    pipeline_mismatches: List[int] = field(default_factory=list)
    count_mismatches: List[int] = field(default_factory=list)

    @property
    def agrees_with_pipeline(self) -> bool:
        return not self.pipeline_mismatches

    @property
    def agrees_with_counts(self) -> bool:
        return not self.count_mismatches


@dataclass
class RowDiagnostics:
    """A printed row evaluated against the printed basis and brute force."""
    table: str
    form: QuadraticForm
    n_max: int
    residuals: Dict[int, Fraction] = field(default_factory=dict)

    @property
    def failing_n(self) -> List[int]:
        return sorted(self.residuals)


def default_precision() -> int:
    return int(load_config()["series"]["default_precision"])


def basis_for_space(space_label: str, prec: int) -> Tuple[Tuple[BasisElement, ...], Optional[Remediation]]:
    """Basis of a space at the given precision, remediated if the printed list is rank deficient."""
    return remediate_basis(space_label, prec)


@lru_cache(maxsize=None)
def printed_basis(space_label: str, prec: int) -> Tuple[BasisElement, ...]:
    """The printed spanning set exactly as listed, without a rank check."""
    return tuple(build_basis(space_label, prec, check_rank=False))


@lru_cache(maxsize=None)
def _system(space_label: str, prec: int) -> ExactSystem:
    basis, _ = basis_for_space(space_label, prec)
    return ExactSystem(coefficient_matrix(basis, prec - 1))


def solve_coefficients(form: QuadraticForm, prec: Optional[int] = None) -> CoefficientVector:
    """
    Coordinates of the theta product of a form in its space's basis.

    Args:
        form: The quadratic form
        prec: Number of coefficients matched; at least 2 * dimension + 8

    Raises:
        InconsistentSystem: If the solution fails any row n < prec
        RemediationFailed: If the space has no usable basis
    """
    prec = prec or default_precision()
    space = space_id(form.character_label)
    if prec < 2 * space.dimension + 8:
        raise ValueError(f"Precision {prec} is too small for space {space.label}; need {2 * space.dimension + 8}")
    _, remediation = basis_for_space(space.label, prec)
    rhs = theta_product(form, prec).coeffs
    entries = _system(space.label, prec).solve(rhs)
    logger.debug(f"Solved {form.label} in space {space.label} at precision {prec}")
    return CoefficientVector(space, form, tuple(entries), remediation)


def eval_formula(v: Sequence[Fraction], basis: Sequence[BasisElement], n: int) -> Fraction:
    """sum_i v_i * (coefficient of q^n in basis element i)."""
    if len(v) != len(basis):
        raise ValueError(f"Vector has {len(v)} entries, basis has {len(basis)} elements")
    return sum((c * element.series[n] for c, element in zip(v, basis) if c), Fraction(0))


def _values(v: Sequence[Fraction], basis: Sequence[BasisElement], n_max: int) -> List[Fraction]:
    return [eval_formula(v, basis, n) for n in range(n_max + 1)]


def verify_form(form: QuadraticForm, n_max: Optional[int] = None, prec: Optional[int] = None) -> VerificationReport:
    """
    Compare the solved formula with nested brute-force counts for 0 <= n <= n_max.

    Violations are returned, never raised.
    """
    n_max = load_config()["verification"]["n_max"] if n_max is None else n_max
    prec = max(prec or default_precision(), n_max + 1)
    vector = solve_coefficients(form, prec)
    basis, remediation = basis_for_space(form.character_label, prec)
    report = VerificationReport(form, n_max, remediation=remediation)
    for n in range(n_max + 1):
        value = eval_formula(vector.entries, basis, n)
        count = count_representations(form, n)
        if value != count:
            report.violations.append((n, value, count))
    if report.violations:
        logger.warning(f"{form.label}: {len(report.violations)} violations up to n = {n_max}")
    return report


def row_diagnostics(table_key: str, form: QuadraticForm, n_max: Optional[int] = None,
                    prec: Optional[int] = None) -> RowDiagnostics:
    """Residuals (printed formula minus count) of a printed row against the printed basis."""
    n_max = load_config()["verification"]["n_max"] if n_max is None else n_max
    table = load_reference_tables()[table_key]
    row = table.row(form)
    prec = max(prec or default_precision(), n_max + 1)
    basis = printed_basis(table.space, prec)
    counts = representation_counts(form, n_max)
    diagnostics = RowDiagnostics(table_key, form, n_max)
    for n, value in enumerate(_values(row.values, basis, n_max)):
        if value != counts[n]:
            diagnostics.residuals[n] = value - counts[n]
    return diagnostics


def diff_tables(prec: Optional[int] = None, tables: Optional[Iterable[str]] = None,
                n_max: Optional[int] = None) -> List[TableDiff]:
    """
    Compare every printed row with the solved vector, column by column.

    Each record also carries whether the printed row and the solved vector
    reproduce brute-force counts up to n_max.
    """
    prec = prec or default_precision()
    n_max = load_config()["verification"]["n_max"] if n_max is None else n_max
    reference = load_reference_tables()
    keys = list(tables) if tables is not None else list(reference)
    diffs: List[TableDiff] = []
    for key in keys:
        table = reference[key]
        basis, _ = basis_for_space(table.space, prec)
        mismatched_rows = 0
        for row in table.rows:
            vector = solve_coefficients(row.form, prec)
            diagnostics = row_diagnostics(key, row.form, n_max, prec)
            counts = representation_counts(row.form, n_max)
            computed_ok = _values(vector.entries, basis, n_max) == counts
            failing = diagnostics.failing_n[0] if diagnostics.failing_n else None
            row_diffs = [
                TableDiff(key, row.form, row.label, j + 1, printed, computed,
                          not diagnostics.residuals, computed_ok, failing)
                for j, (printed, computed) in enumerate(zip(row.values, vector.entries))
            ]
            if any(d.verdict == "mismatch" for d in row_diffs):
                mismatched_rows += 1
            diffs.extend(row_diffs)
        if mismatched_rows:
            logger.warning(f"Table {key}: {mismatched_rows} of {len(table.rows)} rows differ from the solved vectors")
        else:
            logger.info(f"Table {key}: all {len(table.rows)} rows match")
    return diffs


def check_sample_formula(formula: SampleFormula, n_max: int = 100, prec: Optional[int] = None) -> SampleFormulaReport:
    """Compare a closed formula with the solved formula and with brute-force counts for 1 <= n <= n_max."""
    prec = max(prec or default_precision(), n_max + 1)
    vector = solve_coefficients(formula.form, prec)
    basis, _ = basis_for_space(formula.form.character_label, prec)
    sample = formula_values(formula, n_max)
    pipeline = _values(vector.entries, basis, n_max)
    counts = representation_counts(formula.form, n_max)
    report = SampleFormulaReport(formula.form, n_max)
    for n in range(1, n_max + 1):
        if sample[n] != pipeline[n]:
            report.pipeline_mismatches.append(n)
        if sample[n] != counts[n]:
            report.count_mismatches.append(n)
    if report.count_mismatches:
        logger.warning(f"Sample formula for {formula.form.label} disagrees with counts at n = {report.count_mismatches[:5]}")
    return report


def explain_errata(table_key: str, n_max: Optional[int] = None) -> Optional[Explanation]:
    """
    Look for one change to the printed list (a replaced catalog form, or an
    inserted eta quotient that shifts the later columns) under which every
    failing printed row of a table reproduces brute-force counts.
    """
    n_max = load_config()["verification"]["n_max"] if n_max is None else n_max
    table = load_reference_tables()[table_key]
    failing = {}
    for row in table.rows:
        if row_diagnostics(table_key, row.form, n_max).residuals:
            failing[row.form] = row.values
    if not failing:
        return None
    logger.info(f"Table {table_key}: {len(failing)} printed rows fail brute force; searching for an explanation")
    return explain_table(table.space, failing, n_max)
