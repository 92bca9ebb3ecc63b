"""
Finite groups from Cayley tables: conjugacy classes, centralizers,
character tables and irrep restriction multiplicities.
"""
import json
import logging
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from config import ANYON_TOL, INT_RESIDUAL, MAX_GROUP_ORDER
from errors import (
    GroupError,
    GroupTooLarge,
    NoIdentity,
    NonAssociative,
    NonIntegerMultiplicity,
    NotLatinSquare,
    OrthogonalityFailure,
)
from presets import get_preset, get_preset_table

logger = logging.getLogger(__name__)


class GroupFile(BaseModel):
    """On-disk group format: {"name", "elements", "table"}."""
    name: str = "G"
    elements: List[str] = Field(min_length=1)
    table: List[List[int]]

    @field_validator("elements")
    @classmethod
    def names_unique(cls, v):
        if len(set(v)) != len(v):
            raise ValueError("element names must be unique")
        return v


class FiniteGroup(BaseModel):
    model_config = ConfigDict(frozen=True)

    name: str
    elements: Tuple[str, ...]
    table: Tuple[Tuple[int, ...], ...]
    identity: int
    inverse: Tuple[int, ...]
    irrep_names: Optional[Tuple[str, ...]] = None
    anyon_names: Optional[Tuple[str, ...]] = None

    @property
    def order(self) -> int:
        return len(self.elements)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]


class ConjugacyClass(BaseModel):
    model_config = ConfigDict(frozen=True)

    representative: int
    members: Tuple[int, ...]
    name: str

    @property
    def size(self) -> int:
        return len(self.members)


class Subgroup(BaseModel):
    model_config = ConfigDict(frozen=True)

    parent: FiniteGroup
    members: Tuple[int, ...]
    as_group: FiniteGroup

    def local_index(self, element: int) -> int:
        """Position of a parent element inside as_group."""
        return self.members.index(element)


class CharacterTable(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    group: FiniteGroup
    classes: Tuple[ConjugacyClass, ...]
    names: Tuple[str, ...]
    dims: Tuple[int, ...]
    values: np.ndarray  # irreps x classes, complex
    class_of: Tuple[int, ...]  # element index -> class index

    def character(self, irrep: int, element: int) -> complex:
        return complex(self.values[irrep, self.class_of[element]])

    def index_of(self, name: str) -> int:
        return self.names.index(name)

    @property
    def trivial(self) -> int:
        return 0


def load_group(table: Sequence[Sequence[int]], names: Sequence[str], name: str = "G",
               irrep_names: Optional[Sequence[str]] = None,
               anyon_names: Optional[Sequence[str]] = None) -> FiniteGroup:
    """Validate a Cayley table and return the group with identity and inverses."""
    n = len(names)
    if len(set(names)) != n:
        raise GroupError("element names must be unique", names=list(names))
    arr = np.asarray(table, dtype=int)
    if arr.shape != (n, n):
        raise GroupError(f"table must be {n}x{n}, got shape {arr.shape}")
    if arr.min() < 0 or arr.max() >= n:
        raise GroupError("table entries must lie in [0, order)")

    full = np.arange(n)
    for i in range(n):
        if not np.array_equal(np.sort(arr[i]), full):
            raise NotLatinSquare(f"row {names[i]} is not a permutation", row=i)
        if not np.array_equal(np.sort(arr[:, i]), full):
            raise NotLatinSquare(f"column {names[i]} is not a permutation", column=i)

    identity = None
    for e in range(n):
        if np.array_equal(arr[e], full) and np.array_equal(arr[:, e], full):
            identity = e
            break
    if identity is None:
        raise NoIdentity("no element acts as a two-sided identity")

    left = arr[arr]  # left[i, j, k] = (g_i g_j) g_k
    right = arr[full[:, None, None], arr[None, :, :]]  # g_i (g_j g_k)
    bad = np.argwhere(left != right)
    if len(bad):
        i, j, k = (int(x) for x in bad[0])
        raise NonAssociative(
            f"({names[i]}·{names[j]})·{names[k]} != {names[i]}·({names[j]}·{names[k]})",
            witness=(i, j, k),
        )

    inverse = tuple(int(np.flatnonzero(arr[i] == identity)[0]) for i in range(n))
    return FiniteGroup(
        name=name,
        elements=tuple(names),
        table=tuple(tuple(int(x) for x in row) for row in arr),
        identity=identity,
        inverse=inverse,
        irrep_names=tuple(irrep_names) if irrep_names else None,
        anyon_names=tuple(anyon_names) if anyon_names else None,
    )


def load_preset(name: str) -> FiniteGroup:
    preset = get_preset(name)
    if preset is None:
        raise GroupError(f"unknown preset group '{name}'")
    return load_group(get_preset_table(name), preset["elements"], name=preset["name"],
                      irrep_names=preset["irrep_names"], anyon_names=preset["anyon_names"])


def load_group_file(path: str) -> FiniteGroup:
    try:
        with open(path) as f:
            data = GroupFile.model_validate(json.load(f))
    except (OSError, ValueError) as e:
        raise GroupError(f"cannot read group file {path}: {e}") from e
    return load_group(data.table, data.elements, name=data.name)


def resolve_group(source: str) -> FiniteGroup:
    """Preset name or path to a group JSON file."""
    if get_preset(source) is not None:
        return load_preset(source)
    return load_group_file(source)


@lru_cache(maxsize=None)
def conjugacy_classes(G: FiniteGroup) -> Tuple[ConjugacyClass, ...]:
    seen = set()
    classes = []
    for g in range(G.order):
        if g in seen:
            continue
        orbit = sorted({G.mul(G.mul(z, g), G.inverse[z]) for z in range(G.order)})
        seen.update(orbit)
        rep = orbit[0]
        classes.append(ConjugacyClass(representative=rep, members=tuple(orbit),
                                      name="C" + G.elements[rep]))
    classes.sort(key=lambda c: (G.identity not in c.members, c.members[0]))
    return tuple(classes)


def class_index_map(G: FiniteGroup) -> Tuple[int, ...]:
    owner = [0] * G.order
    for k, cls in enumerate(conjugacy_classes(G)):
        for m in cls.members:
            owner[m] = k
    return tuple(owner)


def subgroup(G: FiniteGroup, members: Sequence[int], name: str) -> Subgroup:
    members = tuple(sorted(set(members)))
    local = {m: i for i, m in enumerate(members)}
    try:
        table = [[local[G.mul(a, b)] for b in members] for a in members]
    except KeyError as e:
        raise GroupError(f"{name} is not closed under multiplication") from e
    as_group = load_group(table, [G.elements[m] for m in members], name=name)
    return Subgroup(parent=G, members=members, as_group=as_group)


@lru_cache(maxsize=None)
def centralizer(G: FiniteGroup, g: int) -> Subgroup:
    """{z : zg = gz}. Called the normalizer N_g in the physics literature."""
    members = [z for z in range(G.order) if G.mul(z, g) == G.mul(g, z)]
    return subgroup(G, members, name=f"N_{G.elements[g]}")


def _class_multiplication(G: FiniteGroup, classes, owner) -> np.ndarray:
    """c[i, j, k] = #{(a, b) in C_i x C_j : ab = rep(C_k)}."""
    k = len(classes)
    c = np.zeros((k, k, k))
    for i, cls in enumerate(classes):
        for a in cls.members:
            for kk, target in enumerate(classes):
                b = G.mul(G.inverse[a], target.representative)
                c[i, owner[b], kk] += 1
    return c


def _joint_eigenvectors(mats: np.ndarray) -> np.ndarray:
    """Eigenvectors of a generic combination; columns of the result."""
    k = mats.shape[0]
    for attempt in range(8):
        weights = np.sqrt(np.arange(2, k + 2) + attempt * k) / (np.arange(k) + 1.0)
        combo = np.tensordot(weights, mats, axes=1)
        vals, vecs = np.linalg.eig(combo)
        gaps = np.abs(vals[:, None] - vals[None, :]) + np.eye(k)
        if gaps.min() > 1e-6:
            return vecs
        logger.debug("class-sum combination degenerate on attempt %d", attempt)
    raise OrthogonalityFailure("class-sum matrices could not be jointly diagonalized")


def _snap(z: complex) -> complex:
    re, im = z.real, z.imag
    if abs(re - round(re)) < ANYON_TOL:
        re = float(round(re))
    if abs(im - round(im)) < ANYON_TOL:
        im = float(round(im))
    return complex(re, im)


def default_irrep_names(dims: Sequence[int], values: np.ndarray) -> List[str]:
    names = []
    counters: Dict[str, int] = {}
    for i, d in enumerate(dims):
        if i == 0:
            base = "Gamma1"
        elif d == 1 and np.allclose(values[i].imag, 0, atol=ANYON_TOL):
            base = "Gamma-1"
        elif d == 1:
            base = "Gamma_c"
        else:
            base = f"Gamma{d}"
        counters[base] = counters.get(base, 0) + 1
        names.append(base if counters[base] == 1 else f"{base}_{counters[base]}")
    return names


@lru_cache(maxsize=None)
def character_table(G: FiniteGroup) -> CharacterTable:
    """Burnside's method on the class-sum multiplication matrices."""
    if G.order > MAX_GROUP_ORDER:
        raise GroupTooLarge(f"group order {G.order} exceeds bound {MAX_GROUP_ORDER}")
    classes = conjugacy_classes(G)
    owner = class_index_map(G)
    sizes = np.array([c.size for c in classes], dtype=float)
    mats = _class_multiplication(G, classes, owner)
    vecs = _joint_eigenvectors(mats)

    rows = []
    for col in range(vecs.shape[1]):
        w = vecs[:, col] / vecs[0, col]  # central character, w[identity class] = 1
        dim_sq = G.order / np.sum(np.abs(w) ** 2 / sizes)
        dim = int(round(np.sqrt(dim_sq)))
        if abs(np.sqrt(dim_sq) - dim) > INT_RESIDUAL:
            raise OrthogonalityFailure(f"irrep dimension {np.sqrt(dim_sq)} is not an integer")
        rows.append((dim, np.array([_snap(x) for x in w * dim / sizes])))

    def sort_key(row):
        dim, chi = row
        trivial = np.allclose(chi, 1, atol=ANYON_TOL)
        return (not trivial, dim, tuple((-round(v.real, 9), -round(v.imag, 9)) for v in chi))

    rows.sort(key=sort_key)
    dims = tuple(d for d, _ in rows)
    values = np.array([chi for _, chi in rows], dtype=complex)

    gram = (values * sizes) @ values.conj().T
    if not np.allclose(gram, G.order * np.eye(len(rows)), atol=1e-6):
        raise OrthogonalityFailure("row orthogonality violated", gram=gram.tolist())
    cols = values.conj().T @ values
    if not np.allclose(cols, np.diag(G.order / sizes), atol=1e-6):
        raise OrthogonalityFailure("column orthogonality violated")

    if G.irrep_names and len(G.irrep_names) == len(rows):
        names = tuple(G.irrep_names)
    else:
        names = tuple(default_irrep_names(dims, values))
    return CharacterTable(group=G, classes=classes, names=names, dims=dims,
                          values=values, class_of=owner)


def restrict_multiplicity(G: FiniteGroup, irrep: int, H: Subgroup, h_irrep: int) -> int:
    """<Res_H Gamma, gamma> = (1/|H|) sum_h chi_Gamma(h) conj(chi_gamma(h))."""
    parent_table = character_table(G)
    local_table = character_table(H.as_group)
    total = 0j
    for local, h in enumerate(H.members):
        total += parent_table.character(irrep, h) * np.conj(local_table.character(h_irrep, local))
    value = total / len(H.members)
    m = int(round(value.real))
    if abs(value - m) > INT_RESIDUAL or m < 0:
        raise NonIntegerMultiplicity(
            f"multiplicity of {local_table.names[h_irrep]} in {parent_table.names[irrep]} is {value}")
    return m


def restriction_matrix(G: FiniteGroup, H: Subgroup) -> np.ndarray:
    """mult[Gamma, gamma] for every G-irrep and H-irrep."""
    n_parent = len(character_table(G).dims)
    n_local = len(character_table(H.as_group).dims)
    return np.array([[restrict_multiplicity(G, i, H, j) for j in range(n_local)]
                     for i in range(n_parent)], dtype=int)
