"""
Flavor diagram of D(G): group-element rows (grouped by conjugacy class)
against G-irrep column blocks, each square owned by one anyon flavor.
"""
import logging
from functools import lru_cache
from typing import Dict, FrozenSet, Iterable, List, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from errors import AttributionMismatch, UnknownLabel, VacuumForbidden
from group_core import (
    FiniteGroup,
    centralizer,
    character_table,
    conjugacy_classes,
    restriction_matrix,
)
from modular_data import anyon_dims, double_anyons

logger = logging.getLogger(__name__)


class Square(BaseModel):
    model_config = ConfigDict(frozen=True)

    anyon: int
    flavor: str


class Column(BaseModel):
    model_config = ConfigDict(frozen=True)

    irrep: int
    slot: int


class FlavorDiagram(BaseModel):
    model_config = ConfigDict(frozen=True)

    group: FiniteGroup
    rows: Tuple[Tuple[int, int], ...]  # (class index, element index)
    columns: Tuple[Column, ...]
    squares: Tuple[Tuple[Square, ...], ...]
    anyon_names: Tuple[str, ...]

    def count(self, anyon: int) -> int:
        return sum(sq.anyon == anyon for row in self.squares for sq in row)


class ForbidSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    forbidden_classes: FrozenSet[int] = frozenset()
    forbidden_irreps: FrozenSet[int] = frozenset()

    def is_empty(self) -> bool:
        return not self.forbidden_classes and not self.forbidden_irreps


class SurvivalResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    surviving: Tuple[int, ...]
    remaining: Dict[int, int]
    predicted_dims: Dict[int, float]
    fully_forbidden: Tuple[int, ...]
    partially_forbidden: Dict[int, int] = Field(default_factory=dict)  # anyon -> removed squares


class DiagramExport(BaseModel):
    group: str
    rows: List[str]
    columns: List[str]
    cells: List[List[str]]


@lru_cache(maxsize=None)
def build_diagram(G: FiniteGroup) -> FlavorDiagram:
    """The |G|x|G| flavor grid with each square's owning anyon."""
    anyons = double_anyons(G)
    owner = {(a.class_index, a.irrep_index): i for i, a in enumerate(anyons)}
    table = character_table(G)

    columns = [Column(irrep=gamma, slot=s)
               for gamma, d in enumerate(table.dims) for s in range(d * d)]
    rows, grid = [], []
    for k, cls in enumerate(conjugacy_classes(G)):
        local = character_table(centralizer(G, cls.representative).as_group)
        mult = restriction_matrix(G, centralizer(G, cls.representative))
        row = []
        for gamma, d in enumerate(table.dims):
            fill = []
            for j, local_dim in enumerate(local.dims):
                fill.extend([owner[(k, j)]] * (int(mult[gamma, j]) * local_dim * d))
            if len(fill) != d * d:
                raise AttributionMismatch(
                    f"block {table.names[gamma]} in class {cls.name} has {len(fill)} slots, expected {d * d}")
            row.extend(fill)
        for g in cls.members:
            rows.append((k, g))
            grid.append(list(row))

    # anyons spread over several irrep blocks get a 1-based tag per block
    blocks: Dict[int, List[int]] = {}
    for row in grid:
        for col, a in zip(columns, row):
            if col.irrep not in blocks.setdefault(a, []):
                blocks[a].append(col.irrep)
    names = [a.display_name for a in anyons]
    squares = []
    for row in grid:
        cells = []
        for col, a in zip(columns, row):
            owned = sorted(blocks[a])
            tag = names[a] if len(owned) == 1 else f"{names[a]}{owned.index(col.irrep) + 1}"
            cells.append(Square(anyon=a, flavor=tag))
        squares.append(tuple(cells))

    diagram = FlavorDiagram(group=G, rows=tuple(rows), columns=tuple(columns),
                            squares=tuple(squares), anyon_names=tuple(names))
    expected = anyon_dims(G) ** 2
    for a in range(len(anyons)):
        if diagram.count(a) != int(round(expected[a])):
            raise AttributionMismatch(
                f"anyon {names[a]} owns {diagram.count(a)} squares, expected {int(round(expected[a]))}")
    return diagram


def projector_images(G: FiniteGroup) -> Tuple[Dict[str, List[str]], Dict[str, List[str]]]:
    """Flux map (class -> anyons) and charge map (G-irrep -> flavors)."""
    diagram = build_diagram(G)
    anyons = double_anyons(G)
    classes = conjugacy_classes(G)
    flux = {cls.name: [a.display_name for a in anyons if a.class_index == k]
            for k, cls in enumerate(classes)}
    table = character_table(G)
    charge: Dict[str, List[str]] = {}
    for gamma, name in enumerate(table.names):
        seen = {}
        for row in diagram.squares:
            for col, sq in zip(diagram.columns, row):
                if col.irrep == gamma:
                    seen.setdefault(sq.flavor, sq.anyon)
        charge[name] = sorted(seen, key=lambda f: (seen[f], f))
    return flux, charge


def spec_from_names(G: FiniteGroup, classes: Iterable[str] = (), irreps: Iterable[str] = ()) -> ForbidSpec:
    """Forbid spec from class and irrep names; unknown names raise UnknownLabel."""
    class_names = [c.name for c in conjugacy_classes(G)]
    irrep_names = list(character_table(G).names)
    forbidden_classes, forbidden_irreps = set(), set()
    for name in classes:
        if name not in class_names:
            raise UnknownLabel(f"unknown class '{name}' (known: {', '.join(class_names[1:])})")
        forbidden_classes.add(class_names.index(name))
    for name in irreps:
        if name not in irrep_names:
            raise UnknownLabel(f"unknown irrep '{name}' (known: {', '.join(irrep_names[1:])})")
        forbidden_irreps.add(irrep_names.index(name))
    spec = ForbidSpec(forbidden_classes=frozenset(forbidden_classes),
                      forbidden_irreps=frozenset(forbidden_irreps))
    check_spec(spec)
    return spec


def check_spec(spec: ForbidSpec) -> None:
    """Reject specs that forbid the trivial class or irrep."""
    if 0 in spec.forbidden_classes or 0 in spec.forbidden_irreps:
        raise VacuumForbidden("the trivial class and the trivial irrep cannot be forbidden")


def spec_names(G: FiniteGroup, spec: ForbidSpec) -> List[str]:
    """Display names of a spec's forbidden classes then irreps."""
    classes = conjugacy_classes(G)
    names = character_table(G).names
    return [classes[k].name for k in sorted(spec.forbidden_classes)] + \
        [names[i] for i in sorted(spec.forbidden_irreps)]


def survivors(diagram: FlavorDiagram, spec: ForbidSpec) -> SurvivalResult:
    """Anyons left after forbidding, with remaining squares and predicted dims."""
    check_spec(spec)
    n = len(diagram.anyon_names)
    original = np.zeros(n, dtype=int)
    remaining = np.zeros(n, dtype=int)
    for (k, _), row in zip(diagram.rows, diagram.squares):
        for col, sq in zip(diagram.columns, row):
            original[sq.anyon] += 1
            if k not in spec.forbidden_classes and col.irrep not in spec.forbidden_irreps:
                remaining[sq.anyon] += 1
    surviving = tuple(a for a in range(n) if remaining[a] > 0)
    return SurvivalResult(
        surviving=surviving,
        remaining={a: int(remaining[a]) for a in surviving},
        predicted_dims={a: float(np.sqrt(remaining[a])) for a in surviving},
        fully_forbidden=tuple(a for a in range(n) if remaining[a] == 0),
        partially_forbidden={a: int(original[a] - remaining[a])
                             for a in surviving if remaining[a] < original[a]},
    )


def export_diagram(diagram: FlavorDiagram) -> DiagramExport:
    """Grid and projector images as a DiagramExport."""
    G = diagram.group
    irrep_names = character_table(G).names
    return DiagramExport(
        group=G.name,
        rows=[G.elements[g] for _, g in diagram.rows],
        columns=[f"{irrep_names[c.irrep]}#{c.slot + 1}" for c in diagram.columns],
        cells=[[sq.flavor for sq in row] for row in diagram.squares],
    )
