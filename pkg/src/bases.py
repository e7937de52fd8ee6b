"""
Explicit bases of the weight-4 spaces on Gamma_0(24) with characters
1, chi8, chi12 and chi24.

A basis is an ordered list of descriptors (Eisenstein series or dilated eta
combinations) read from the catalog; the q-expansion of each element is
always rebuilt from its descriptor.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Union

import numpy as np

from src.arith import DirichletCharacter, character
from src.catalog import Catalog, load_catalog
from src.generators import EtaCombination, eisenstein_char, eisenstein_Ek, eta_combination
from src.linalg import dependent_columns, rank
from src.series import QSeries, dilate

logger = logging.getLogger(__name__)

SPACE_LABELS = ("trivial", "chi8", "chi12", "chi24")


class RankDeficient(ArithmeticError):
    """The spanning set of a space has fewer independent columns than its dimension."""

    def __init__(self, space: str, rank: int, dependent_columns: Sequence[int]):
        self.space = space
        self.rank = rank
        self.dependent_columns = list(dependent_columns)
        super().__init__(
            f"Basis for space {space} has rank {rank}; dependent columns {self.dependent_columns}"
        )


@dataclass(frozen=True)
class SpaceId:
    """
    One of the four spaces M_4(Gamma_0(24), chi).

    Attributes:
        character_label: "trivial", "chi8", "chi12" or "chi24"
        dimension: Total dimension
        eisenstein_dim: Dimension of the Eisenstein subspace
        cusp_dim: Dimension of the cusp subspace
    """
    character_label: str
    dimension: int
    eisenstein_dim: int
    cusp_dim: int
    character_name: str = "1"

    @property
    def label(self) -> str:
        return self.character_label

    @property
    def character(self) -> DirichletCharacter:
        return character(self.character_name)


def space_id(label: str, catalog: Optional[Catalog] = None) -> SpaceId:
    catalog = catalog or load_catalog()
    if label not in catalog.spaces:
        raise KeyError(f"Unknown space {label!r}; expected one of {list(SPACE_LABELS)}")
    space = catalog.spaces[label]
    return SpaceId(label, space["dimension"], space["eisenstein_dim"], space["cusp_dim"], space["character"])


@dataclass(frozen=True)
class EisensteinDescriptor:
    weight: int
    chi: str
    psi: str
    dilation: int = 1
    normalized: bool = False

    is_cusp = False

    @property
    def label(self) -> str:
        name = f"E{self.weight}" if self.normalized else f"E_{{{self.weight},{self.chi},{self.psi}}}"
        return name if self.dilation == 1 else f"{name}({self.dilation}z)"

    def expand(self, prec: int) -> QSeries:
        if self.normalized:
            series = eisenstein_Ek(self.weight, prec)
        else:
            series = eisenstein_char(self.weight, character(self.chi), character(self.psi), prec)
        return dilate(series, self.dilation)


@dataclass(frozen=True)
class EtaComboDescriptor:
    form_name: str
    combination: EtaCombination
    dilation: int = 1

    is_cusp = True

    @property
    def label(self) -> str:
        return self.form_name if self.dilation == 1 else f"{self.form_name}({self.dilation}z)"

    def expand(self, prec: int) -> QSeries:
        return dilate(eta_combination(self.combination, prec), self.dilation)


Descriptor = Union[EisensteinDescriptor, EtaComboDescriptor]


@dataclass(frozen=True)
class BasisElement:
    """
    Attributes:
        index: 1-based position in the basis, matching the printed numbering
        descriptor: Source of truth for the element
        series: q-expansion rebuilt from the descriptor
    """
    index: int
    descriptor: Descriptor
    series: QSeries

    @property
    def label(self) -> str:
        return self.descriptor.label


def _resolve_space(space: Union[SpaceId, str], catalog: Catalog) -> SpaceId:
    return space if isinstance(space, SpaceId) else space_id(space, catalog)


def basis_descriptors(space: Union[SpaceId, str], catalog: Optional[Catalog] = None) -> List[Descriptor]:
    """The printed ordering of a space's basis as descriptors."""
    catalog = catalog or load_catalog()
    space = _resolve_space(space, catalog)
    descriptors: List[Descriptor] = []
    for entry in catalog.spaces[space.label]["layout"]:
        kind = entry["kind"]
        dilation = int(entry.get("dilation", 1))
        if kind == "Ek":
            descriptors.append(EisensteinDescriptor(int(entry["weight"]), "1", "1", dilation, normalized=True))
        elif kind == "Ekchi":
            descriptors.append(EisensteinDescriptor(int(entry["weight"]), entry["chi"], entry["psi"], dilation))
        else:
            form = catalog.form(entry["form"])
            descriptors.append(EtaComboDescriptor(form.name, form.combination, dilation))
    return descriptors


def coefficient_matrix(basis: Sequence[BasisElement], n_max: int) -> np.ndarray:
    """
    Rows n = 0..n_max, one column per basis element, exact Fraction entries.
    """
    for element in basis:
        if element.series.prec <= n_max:
            raise ValueError(
                f"Basis element {element.index} ({element.label}) has precision {element.series.prec}, "
                f"need more than {n_max}"
            )
    matrix = np.empty((n_max + 1, len(basis)), dtype=object)
    for j, element in enumerate(basis):
        for n in range(n_max + 1):
            matrix[n, j] = element.series[n]
    return matrix


def build_basis(space: Union[SpaceId, str], prec: int, descriptors: Optional[Sequence[Descriptor]] = None,
                check_rank: bool = True, catalog: Optional[Catalog] = None) -> List[BasisElement]:
    """
    Build the ordered basis of a space at the given precision.

    Args:
        space: SpaceId or its label
        prec: Number of coefficients per element; at least dimension + 8
        descriptors: Replacement descriptor list (defaults to the printed layout)
        check_rank: Verify that the elements are linearly independent
        catalog: Catalog to read layouts from

    Returns:
        List[BasisElement]: Elements indexed from 1

    Raises:
        RankDeficient: If the coefficient matrix over n < prec has rank below the dimension
    """
    catalog = catalog or load_catalog()
    space = _resolve_space(space, catalog)
    if prec < space.dimension + 8:
        raise ValueError(f"Precision {prec} is too small for space {space.label}; need at least {space.dimension + 8}")
    if descriptors is None:
        descriptors = basis_descriptors(space, catalog)
    if len(descriptors) != space.dimension:
        raise ValueError(f"Space {space.label} needs {space.dimension} descriptors, got {len(descriptors)}")

    basis = [BasisElement(i + 1, d, d.expand(prec)) for i, d in enumerate(descriptors)]
    for element in basis:
        if element.descriptor.is_cusp and element.series[0] != 0:
            raise ValueError(f"Cusp form {element.label} has nonzero constant term {element.series[0]}")

    if check_rank:
        matrix = coefficient_matrix(basis, prec - 1)
        found = rank(matrix)
        if found < space.dimension:
            dependent = dependent_columns(matrix)
            logger.warning(f"Space {space.label}: rank {found} < dimension {space.dimension}; dependent columns {dependent}")
            raise RankDeficient(space.label, found, dependent)
    logger.info(f"Built basis for space {space.label}: dimension {space.dimension}, precision {prec}")
    return basis


def constant_terms(basis: Sequence[BasisElement]) -> List[Fraction]:
    return [element.series[0] for element in basis]
