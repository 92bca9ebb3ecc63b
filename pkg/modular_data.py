"""
Modular data of quantum doubles D(G): anyon labels, S and T matrices,
Verlinde fusion, quantum dimensions, and validation of anyon theories.
"""
import logging
import string
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from config import ANYON_TOL, INT_RESIDUAL
from errors import NegativeFusion, NonIntegerFusion, NotUnitary
from group_core import (
    FiniteGroup,
    centralizer,
    character_table,
    conjugacy_classes,
)

logger = logging.getLogger(__name__)

VACUUM, CHARGEON, FLUXON, DYON = "vacuum", "chargeon", "fluxon", "dyon"


class AnyonLabel(BaseModel):
    model_config = ConfigDict(frozen=True)

    class_index: int
    irrep_index: int
    display_name: str
    kind: str


class AnyonTheory(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    name: str
    labels: Tuple[str, ...]
    S: np.ndarray
    T: Optional[np.ndarray] = None
    N: np.ndarray
    dims: np.ndarray
    total_dim: float
    anyons: Optional[Tuple[AnyonLabel, ...]] = None

    @property
    def size(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        return self.labels.index(label)


class TheoryExport(BaseModel):
    """JSON theory format; complex numbers as [re, im] pairs."""
    name: str
    labels: List[str]
    S: List[List[Tuple[float, float]]]
    T: Optional[List[Tuple[float, float]]] = None
    N: List[List[List[int]]]
    dims: List[float]
    total_dim: float


class ValidationReport(BaseModel):
    checks: Dict[str, bool] = Field(default_factory=dict)
    messages: Dict[str, str] = Field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def failed(self) -> List[str]:
        return [name for name, ok in self.checks.items() if not ok]


def _pairs(values: np.ndarray) -> list:
    return [(float(z.real), float(z.imag)) for z in np.asarray(values, dtype=complex)]


def export_theory(theory: AnyonTheory) -> TheoryExport:
    """JSON-ready copy of a theory with complex entries as (re, im) pairs."""
    return TheoryExport(
        name=theory.name,
        labels=list(theory.labels),
        S=[_pairs(row) for row in theory.S],
        T=_pairs(theory.T) if theory.T is not None else None,
        N=np.asarray(theory.N, dtype=int).tolist(),
        dims=[float(d) for d in theory.dims],
        total_dim=float(theory.total_dim),
    )


def theory_from_export(data: TheoryExport) -> AnyonTheory:
    """Inverse of export_theory."""
    S = np.array([[complex(re, im) for re, im in row] for row in data.S])
    T = np.array([complex(re, im) for re, im in data.T]) if data.T is not None else None
    return AnyonTheory(
        name=data.name,
        labels=tuple(data.labels),
        S=S,
        T=T,
        N=np.array(data.N, dtype=int),
        dims=np.array(data.dims, dtype=float),
        total_dim=data.total_dim,
    )


def default_anyon_names(n: int) -> List[str]:
    """A, B, C, ... with a numeric suffix past Z."""
    letters = string.ascii_uppercase
    if n <= len(letters):
        return list(letters[:n])
    return [f"{letters[i % 26]}{i // 26}" for i in range(n)]


@lru_cache(maxsize=None)
def double_anyons(G: FiniteGroup) -> Tuple[AnyonLabel, ...]:
    """(class, centralizer irrep) pairs in class order, then character-table order."""
    pairs = []
    for k, cls in enumerate(conjugacy_classes(G)):
        local = character_table(centralizer(G, cls.representative).as_group)
        for j in range(len(local.dims)):
            pairs.append((k, j))
    names = list(G.anyon_names) if G.anyon_names and len(G.anyon_names) == len(pairs) \
        else default_anyon_names(len(pairs))
    anyons = []
    for (k, j), name in zip(pairs, names):
        if k == 0:
            kind = VACUUM if j == 0 else CHARGEON
        else:
            kind = FLUXON if j == 0 else DYON
        anyons.append(AnyonLabel(class_index=k, irrep_index=j, display_name=name, kind=kind))
    return tuple(anyons)


def anyon_dims(G: FiniteGroup) -> np.ndarray:
    """|class| * dim(irrep) per anyon."""
    classes = conjugacy_classes(G)
    dims = []
    for a in double_anyons(G):
        cls = classes[a.class_index]
        local = character_table(centralizer(G, cls.representative).as_group)
        dims.append(cls.size * local.dims[a.irrep_index])
    return np.array(dims, dtype=float)


def _local_character(G: FiniteGroup, class_index: int, irrep: int):
    """chi_gamma as a function of parent element index (None outside the centralizer)."""
    rep = conjugacy_classes(G)[class_index].representative
    N = centralizer(G, rep)
    table = character_table(N.as_group)
    values = {h: table.character(irrep, i) for i, h in enumerate(N.members)}
    return rep, len(N.members), values


def smatrix_double(G: FiniteGroup) -> np.ndarray:
    """S matrix of D(G) from centralizer characters summed over commuting class members."""
    anyons = double_anyons(G)
    local = [_local_character(G, a.class_index, a.irrep_index) for a in anyons]
    n = len(anyons)
    S = np.zeros((n, n), dtype=complex)
    for a, (g, size_a, chi_a) in enumerate(local):
        g_inv = G.inverse[g]
        for b, (g2, size_b, chi_b) in enumerate(local):
            total = 0j
            for h in range(G.order):
                h_inv = G.inverse[h]
                conj_g2 = G.mul(G.mul(h, g2), h_inv)
                if conj_g2 not in chi_a:
                    continue
                total += chi_a[conj_g2] * chi_b[G.mul(G.mul(h_inv, g_inv), h)]
            S[a, b] = total / (size_a * size_b)
    if not np.allclose(S @ S.conj().T, np.eye(n), atol=1e-6):
        raise NotUnitary(f"S-matrix of D({G.name}) is not unitary")
    return S


def tmatrix_double(G: FiniteGroup) -> np.ndarray:
    """Topological spins chi(g)/chi(e) of each anyon."""
    T = []
    for a in double_anyons(G):
        g, _, chi = _local_character(G, a.class_index, a.irrep_index)
        T.append(chi[g] / chi[G.identity])
    return np.array(T, dtype=complex)


def verlinde_fusion(S: np.ndarray) -> np.ndarray:
    """Integer fusion tensor N[a, b, c] from S; raises NonIntegerFusion otherwise."""
    S = np.asarray(S, dtype=complex)
    row0 = S[0]
    if np.any(np.abs(row0.imag) > ANYON_TOL) or np.any(row0.real <= ANYON_TOL):
        raise NonIntegerFusion("row 0 of S must be strictly positive")
    raw = np.einsum("az,bz,cz->abc", S, S, S.conj() / row0[None, :])
    if np.max(np.abs(raw.imag)) > INT_RESIDUAL:
        a, b, c = np.unravel_index(np.argmax(np.abs(raw.imag)), raw.shape)
        raise NonIntegerFusion("complex fusion coefficient", witness=(int(a), int(b), int(c)),
                               value=complex(raw[a, b, c]))
    N = np.rint(raw.real)
    residual = np.abs(raw.real - N)
    if residual.max() > INT_RESIDUAL:
        a, b, c = np.unravel_index(np.argmax(residual), raw.shape)
        raise NonIntegerFusion(f"N[{a}][{b}][{c}] = {raw.real[a, b, c]:.6f} is not an integer",
                               witness=(int(a), int(b), int(c)))
    if N.min() < 0:
        a, b, c = np.argwhere(N < 0)[0]
        raise NegativeFusion(f"N[{a}][{b}][{c}] = {int(N[a, b, c])}", witness=(int(a), int(b), int(c)))
    return N.astype(int)


def quantum_dims(S: np.ndarray) -> Tuple[np.ndarray, float]:
    """Quantum dimensions S[0]/S[0,0] and total dimension 1/S[0,0]."""
    S = np.asarray(S, dtype=complex)
    dims = (S[0] / S[0, 0]).real
    return dims, float(1.0 / S[0, 0].real)


def antiparticles(N: np.ndarray) -> List[Optional[int]]:
    """ā for each a, or None when not unique."""
    result = []
    for a in range(N.shape[0]):
        partners = np.flatnonzero(N[a, :, 0] == 1)
        ok = len(partners) == 1 and np.count_nonzero(N[a, :, 0]) == 1
        result.append(int(partners[0]) if ok else None)
    return result


def build_double(G: FiniteGroup) -> AnyonTheory:
    """D(G) with anyons, S, T, fusion and dimensions."""
    anyons = double_anyons(G)
    S = smatrix_double(G)
    N = verlinde_fusion(S)
    dims, total = quantum_dims(S)
    logger.debug("built D(%s) with %d anyons", G.name, len(anyons))
    return AnyonTheory(
        name=f"D({G.name})",
        labels=tuple(a.display_name for a in anyons),
        S=S,
        T=tmatrix_double(G),
        N=N,
        dims=dims,
        total_dim=total,
        anyons=anyons,
    )


def theory_from_smatrix(name: str, labels: Sequence[str], S: np.ndarray,
                        T: Optional[np.ndarray] = None, N: Optional[np.ndarray] = None) -> AnyonTheory:
    """Wrap a bare S (and optional T, N) as a theory, inferring fusion by Verlinde."""
    S = np.asarray(S, dtype=complex)
    dims, total = quantum_dims(S)
    return AnyonTheory(
        name=name,
        labels=tuple(labels),
        S=S,
        T=None if T is None else np.asarray(T, dtype=complex),
        N=verlinde_fusion(S) if N is None else np.asarray(N, dtype=int),
        dims=dims,
        total_dim=total,
    )


def is_transpose_symmetric(S: np.ndarray, tol: float = ANYON_TOL) -> bool:
    """S^T = S, or S^T = conj(S) as the double construction gives for complex characters."""
    return bool(np.allclose(S, S.T, atol=tol) or np.allclose(S.conj(), S.T, atol=tol))


def validate_theory(theory: AnyonTheory, tol: float = ANYON_TOL) -> ValidationReport:
    """Run the modular-data consistency checks and collect the failures."""
    report = ValidationReport()
    S, N, dims = np.asarray(theory.S, dtype=complex), np.asarray(theory.N), np.asarray(theory.dims)
    n = S.shape[0]

    def check(name: str, ok: bool, message: str = ""):
        report.checks[name] = bool(ok)
        if not ok and message:
            report.messages[name] = message

    check("unitary", np.allclose(S @ S.conj().T, np.eye(n), atol=tol), "S S† != 1")
    check("transpose_symmetric", is_transpose_symmetric(S, tol), "S is neither symmetric nor Hermitian")
    row0 = S[0]
    positive = bool(np.all(np.abs(row0.imag) < tol) and np.all(row0.real > tol))
    check("positive_first_row", positive, "row 0 has non-positive entries")
    check("first_row_dims", positive and np.allclose(row0.real, dims / theory.total_dim, atol=tol),
          "S[0][a] != d_a / D")
    check("total_dim", abs(theory.total_dim ** 2 - float(np.sum(dims ** 2))) < 1e-6,
          "D^2 != sum d^2")

    if theory.T is not None:
        T = np.asarray(theory.T, dtype=complex)
        check("t_vacuum", abs(T[0] - 1) < tol, "T[0] != 1")
        check("t_unit_modulus", np.allclose(np.abs(T), 1, atol=tol), "|T[a]| != 1")

    check("vacuum_identity", np.array_equal(N[0], np.eye(n, dtype=int)), "N[0][a][b] != delta")
    anti = antiparticles(N)
    check("unique_antiparticle", all(x is not None for x in anti), "antiparticle not unique")

    lhs = np.outer(dims, dims)
    rhs = np.einsum("abc,c->ab", N, dims)
    bad = np.argwhere(np.abs(lhs - rhs) > 1e-6)
    check("dimension_product", len(bad) == 0,
          "d_a d_b != sum_c N_ab^c d_c at " + ", ".join(f"({theory.labels[a]},{theory.labels[b]})"
                                                         for a, b in bad[:4]))

    left = np.einsum("abe,ecd->abcd", N, N)
    right = np.einsum("bcf,afd->abcd", N, N)
    check("associativity", np.array_equal(left, right), "fusion is not associative")

    try:
        consistent = np.array_equal(verlinde_fusion(S), N)
    except (NonIntegerFusion, NegativeFusion) as e:
        consistent = False
        report.messages["verlinde"] = str(e)
    check("verlinde", consistent, report.messages.get("verlinde", "Verlinde output differs from N"))
    return report
