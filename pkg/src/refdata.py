"""
Printed reference data: coefficient tables per space and the closed sample
formulas, loaded from database/reference_tables.json.
"""

import json
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

from src.arith import character, sigma_twisted
from src.catalog import CatalogError, load_catalog
from src.generators import eta_combination
from src.repcount import QuadraticForm
from src.utils import load_config, parse_fraction, resolve_data_path

logger = logging.getLogger(__name__)

TABLE_KEYS = ("trivial", "chi8", "chi12", "chi24", "hexagonal")
# printed table numbers accepted as aliases of the keys
TABLE_NUMBERS = {"3": "trivial", "4": "chi8", "5": "chi12", "6": "chi24", "7": "hexagonal"}
FORMULA_WEIGHT = 4


@dataclass(frozen=True)
class ReferenceRow:
    label: str
    form: QuadraticForm
    values: Tuple[Fraction, ...]


@dataclass(frozen=True)
class ReferenceTable:
    """
    One printed coefficient table.

    Attributes:
        key: Table key ("trivial", "chi8", "chi12", "chi24" or "hexagonal")
        space: Space whose basis the columns refer to
        family: Quadratic-form family of the rows
        rows: Rows in printed order
    """
    key: str
    space: str
    family: str
    description: str
    rows: Tuple[ReferenceRow, ...]

    def row(self, form: QuadraticForm) -> ReferenceRow:
        for row in self.rows:
            if row.form == form:
                return row
        raise KeyError(f"Table {self.key} has no row for {form.label}")


@dataclass(frozen=True)
class FormulaTerm:
    """coefficient * sigma_{3;chi,psi}(n/dilation), or coefficient * a_form(n/dilation)."""
    coefficient: Fraction
    kind: str
    dilation: int = 1
    chi: Optional[str] = None
    psi: Optional[str] = None
    form_name: Optional[str] = None

    @property
    def label(self) -> str:
        argument = "n" if self.dilation == 1 else f"n/{self.dilation}"
        if self.kind == "divisor_sum":
            return f"sigma_{FORMULA_WEIGHT - 1}[{self.chi},{self.psi}]({argument})"
        return f"a[{self.form_name}]({argument})"


@dataclass(frozen=True)
class SampleFormula:
    form: QuadraticForm
    space: str
    terms: Tuple[FormulaTerm, ...]

    def __str__(self) -> str:
        parts = [f"{term.coefficient} {term.label}" for term in self.terms]
        return f"{self.form.label}: " + " + ".join(parts)


def _reference_path(path: Optional[Union[str, Path]]) -> str:
    if path is None:
        path = resolve_data_path(load_config()["data"]["reference_tables_path"])
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Reference table file {path} not found")
    return str(path.resolve())


@lru_cache(maxsize=None)
def _read(path: str) -> dict:
    with open(path, 'r') as f:
        return json.load(f)


def _parse_table(key: str, raw: dict, dimensions: Dict[str, int]) -> ReferenceTable:
    space = raw.get("space")
    if space not in dimensions:
        raise CatalogError(f"Reference table {key}: unknown space {space!r}")
    rows = []
    for record in raw.get("rows", []):
        form = QuadraticForm.parse(record["form"])
        if QuadraticForm.from_row_label(record["label"]) != form:
            raise CatalogError(f"Reference table {key}: row label {record['label']} does not match {record['form']}")
        if form.family != raw.get("family") or form.character_label != space:
            raise CatalogError(f"Reference table {key}: {form.label} does not belong in space {space}")
        values = tuple(parse_fraction(v) for v in record["values"])
        if len(values) != dimensions[space]:
            raise CatalogError(
                f"Reference table {key}: row {record['label']} has {len(values)} values, space {space} "
                f"has dimension {dimensions[space]}"
            )
        rows.append(ReferenceRow(record["label"], form, values))
    return ReferenceTable(key, space, raw["family"], raw.get("description", ""), tuple(rows))


def load_reference_tables(path: Optional[Union[str, Path]] = None) -> Dict[str, ReferenceTable]:
    """
    Load every printed coefficient table, keyed by TABLE_KEYS.

    Raises:
        CatalogError: If a row is malformed or sits in the wrong table
    """
    raw = _read(_reference_path(path))
    dimensions = {label: space["dimension"] for label, space in load_catalog().spaces.items()}
    tables = {key: _parse_table(key, table, dimensions) for key, table in raw["tables"].items()}
    missing = set(TABLE_KEYS) - set(tables)
    if missing:
        raise CatalogError(f"Reference tables missing: {sorted(missing)}")
    logger.debug(f"Loaded {sum(len(t.rows) for t in tables.values())} reference rows")
    return tables


def reference_table(key: str, path: Optional[Union[str, Path]] = None) -> ReferenceTable:
    tables = load_reference_tables(path)
    if key not in tables:
        raise KeyError(f"Unknown reference table {key!r}; expected one of {list(TABLE_KEYS)}")
    return tables[key]


def _parse_term(record: dict) -> FormulaTerm:
    kind = record.get("kind")
    coefficient = parse_fraction(record["coefficient"])
    dilation = int(record.get("dilation", 1))
    if kind == "divisor_sum":
        character(record["chi"])
        character(record["psi"])
        return FormulaTerm(coefficient, kind, dilation, chi=record["chi"], psi=record["psi"])
    if kind == "eta":
        load_catalog().form(record["form"])
        return FormulaTerm(coefficient, kind, dilation, form_name=record["form"])
    raise CatalogError(f"Unknown formula term kind {kind!r}")


def load_sample_formulas(path: Optional[Union[str, Path]] = None) -> List[SampleFormula]:
    raw = _read(_reference_path(path))
    formulas = []
    for record in raw.get("sample_formulas", []):
        form = QuadraticForm.parse(record["form"])
        terms = tuple(_parse_term(term) for term in record["terms"])
        formulas.append(SampleFormula(form, record["space"], terms))
    return formulas


@lru_cache(maxsize=64)
def _form_coefficients(name: str, prec: int) -> Tuple[Fraction, ...]:
    return eta_combination(load_catalog().form(name).combination, prec).coeffs


def formula_values(formula: SampleFormula, n_max: int) -> List[Fraction]:
    """Values of a sample formula at n = 0..n_max."""
    values = [Fraction(0)] * (n_max + 1)
    for term in formula.terms:
        t = term.dilation
        if term.kind == "divisor_sum":
            chi, psi = character(term.chi), character(term.psi)
            for n in range(t, n_max + 1, t):
                values[n] += term.coefficient * sigma_twisted(FORMULA_WEIGHT - 1, chi, psi, n // t)
        else:
            coeffs = _form_coefficients(term.form_name, n_max // t + 1)
            for n in range(t, n_max + 1, t):
                values[n] += term.coefficient * coeffs[n // t]
    return values


def evaluate_sample_formula(formula: SampleFormula, n: int) -> Fraction:
    """
    Evaluate a closed formula at n >= 1.

    Divisor sums and cusp-form coefficients at non-integral n/t vanish.
    """
    if n < 1:
        raise ValueError(f"Sample formulas are stated for n >= 1, got {n}")
    return formula_values(formula, n)[n]
