"""
The named-form catalog: eta quotients (and combinations of them) that span
the cusp spaces, plus the ordered basis layout of every space.

Everything is read from database/eta_catalog.json and validated on load so
that a transcription slip surfaces as a CatalogError naming the record.
"""

import json
import logging
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from src.arith import character
from src.generators import (EtaCombination, EtaQuotientSpec, NegativeLeadingExponent, NonIntegralLeadingExponent,
                            borwein_F, eisenstein_Ek, eta_combination, eta_quotient, theta_series)
from src.series import QSeries
from src.utils import load_config, parse_fraction, resolve_data_path

logger = logging.getLogger(__name__)

CATALOG_WEIGHT = Fraction(4)

# squarefree kernel of prod d^r  ->  character of a weight-4 eta quotient
_KERNEL_CHARACTER = {1: "1", 2: "chi8", 3: "chi12", 6: "chi24"}

_TOKEN = re.compile(r"^(\d+)\^\{?(-?\d+)\}?$")


class CatalogError(ValueError):
    """A record of the catalog file is malformed or inconsistent."""


class UnknownSeries(KeyError):
    """A series name is neither built in, in the catalog, nor an inline eta quotient."""

    def __str__(self) -> str:
        return str(self.args[0]) if self.args else "unknown series"


class SpecParseError(ValueError):
    """An inline eta quotient like "1^2 2^2 3^2 6^2" could not be parsed."""


@dataclass(frozen=True)
class NamedForm:
    name: str
    description: str
    space: str
    combination: EtaCombination
    # where the form appears in the printed lists
    citation: str = ""

    @property
    def level(self) -> int:
        return max(spec.level for _, spec in self.combination.terms)


@dataclass(frozen=True)
class Catalog:
    forms: Dict[str, NamedForm]
    spaces: Dict[str, Dict[str, Any]]

    def form(self, name: str) -> NamedForm:
        try:
            return self.forms[name]
        except KeyError:
            raise UnknownSeries(f"Unknown catalog form {name!r}") from None


def _valuation(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def eta_character(spec: EtaQuotientSpec) -> str:
    """
    Character label of a weight-4 eta quotient on a level dividing 24.

    For even weight the character is (s/.) with s = prod d^r, so only the
    parity of the 2- and 3-adic valuations of s matters.
    """
    if spec.weight.denominator != 1 or spec.weight % 2:
        raise ValueError(f"Character rule needs a weight divisible by 2, got {spec.weight} for {spec}")
    twos = sum(r * _valuation(d, 2) for d, r in spec.factors)
    threes = sum(r * _valuation(d, 3) for d, r in spec.factors)
    for d, _ in spec.factors:
        if d // (2 ** _valuation(d, 2) * 3 ** _valuation(d, 3)) != 1:
            raise ValueError(f"Eta quotient {spec} has dilation {d}, which is not of the form 2^a 3^b")
    kernel = (2 if twos % 2 else 1) * (3 if threes % 2 else 1)
    return _KERNEL_CHARACTER[kernel]


def parse_eta_spec(text: str) -> EtaQuotientSpec:
    """Parse the shorthand "d1^r1 d2^r2 ..." into an EtaQuotientSpec."""
    tokens = text.replace(",", " ").split()
    if not tokens:
        raise SpecParseError("Empty eta quotient specification")
    factors = []
    for token in tokens:
        match = _TOKEN.match(token)
        if not match:
            raise SpecParseError(f"Cannot parse eta factor {token!r}; expected d^r such as 6^2 or 12^-1")
        factors.append((int(match.group(1)), int(match.group(2))))
    try:
        return EtaQuotientSpec(tuple(factors))
    except ValueError as e:
        raise SpecParseError(f"Invalid eta quotient {text!r}: {e}") from e


def _parse_form(name: str, record: Dict[str, Any], space_characters: Dict[str, str]) -> NamedForm:
    space = record.get("space")
    if space not in space_characters:
        raise CatalogError(f"Form {name}: unknown space {space!r}")
    terms = []
    for term in record.get("terms", []):
        spec = EtaQuotientSpec(tuple(tuple(f) for f in term["factors"]))
        if spec.weight != CATALOG_WEIGHT:
            raise CatalogError(f"Form {name}: term {spec} has weight {spec.weight}, expected {CATALOG_WEIGHT}")
        try:
            spec.leading_exponent
        except (NonIntegralLeadingExponent, NegativeLeadingExponent) as e:
            raise CatalogError(f"Form {name}: {e}") from e
        label = eta_character(spec)
        if label != space_characters[space]:
            raise CatalogError(f"Form {name}: term {spec} has character {label}, space {space} needs {space_characters[space]}")
        terms.append((parse_fraction(term.get("weight", "1")), spec))
    if not terms:
        raise CatalogError(f"Form {name} has no eta quotient terms")
    twist = character(record["twist"]) if record.get("twist") else None
    citation = record.get("citation", "")
    if not isinstance(citation, str):
        raise CatalogError(f"Form {name}: citation must be a string, got {citation!r}")
    return NamedForm(name, record.get("description", ""), space, EtaCombination(tuple(terms), twist), citation)


def _validate_space(label: str, space: Dict[str, Any], forms: Dict[str, NamedForm]) -> None:
    layout = space.get("layout", [])
    if space["dimension"] != space["eisenstein_dim"] + space["cusp_dim"]:
        raise CatalogError(f"Space {label}: dimension {space['dimension']} != eisenstein + cusp dimensions")
    if len(layout) != space["dimension"]:
        raise CatalogError(f"Space {label}: layout has {len(layout)} entries, dimension is {space['dimension']}")
    for entry in layout:
        kind = entry.get("kind")
        if kind == "eta":
            if entry.get("form") not in forms:
                raise CatalogError(f"Space {label}: layout references unknown form {entry.get('form')!r}")
        elif kind == "Ekchi":
            for key in ("chi", "psi"):
                character(entry[key])
        elif kind != "Ek":
            raise CatalogError(f"Space {label}: unknown layout kind {kind!r}")


@lru_cache(maxsize=None)
def _load(path: str) -> Catalog:
    with open(path, 'r') as f:
        raw = json.load(f)
    spaces = raw.get("spaces", {})
    space_characters = {label: space["character"] for label, space in spaces.items()}
    forms = {name: _parse_form(name, record, space_characters) for name, record in raw.get("forms", {}).items()}
    for label, space in spaces.items():
        _validate_space(label, space, forms)
    logger.debug(f"Loaded {len(forms)} named forms and {len(spaces)} spaces from {path}")
    return Catalog(forms, spaces)


def load_catalog(path: Optional[Union[str, Path]] = None) -> Catalog:
    """
    Load and validate the named-form catalog.

    Args:
        path: Catalog file; defaults to data.catalog_path from config.yaml

    Returns:
        Catalog: Parsed forms and space layouts

    Raises:
        CatalogError: If any record fails validation
    """
    if path is None:
        path = resolve_data_path(load_config()["data"]["catalog_path"])
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Catalog file {path} not found")
    return _load(str(path.resolve()))


def builtin_series_names() -> List[str]:
    return ["theta", "F", "E4", "E6", "E8"]


def named_series(name: str, prec: int, catalog: Optional[Catalog] = None) -> QSeries:
    """
    Expand a series given by name: theta, F, Ek, a catalog form, or an inline
    eta quotient such as "1^2 2^2 3^2 6^2".

    Raises:
        UnknownSeries: If the name matches nothing
        SpecParseError: If an inline eta quotient is malformed
    """
    name = name.strip()
    if name == "theta":
        return theta_series(prec)
    if name == "F":
        return borwein_F(prec)
    match = re.fullmatch(r"E(\d+)", name)
    if match:
        return eisenstein_Ek(int(match.group(1)), prec)
    catalog = catalog or load_catalog()
    if name in catalog.forms:
        return eta_combination(catalog.forms[name].combination, prec)
    if "^" in name:
        return eta_quotient(parse_eta_spec(name), prec)
    raise UnknownSeries(
        f"Unknown series {name!r}; expected one of {builtin_series_names()}, a catalog form "
        f"such as f4_6, or an eta quotient like '1^2 2^2 3^2 6^2'"
    )
