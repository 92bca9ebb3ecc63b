"""
Label-forbidding protocol: truncate fusion, reconstruct S from fusion
characters, condense proportional blocks, verify splitting against catalog
merge maps, and report the resulting phase transition.
"""
import json
import logging
import os
from functools import lru_cache
from itertools import combinations, product
from typing import Any, Dict, List, Literal, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from catalog import CatalogEntry, builtin_entries, find, find_relabeling
from config import ANYON_TOL, MAX_REPAIR_REMOVALS, PROPORTIONAL_TOL, SCRIPTS_DIR
from errors import (
    NegativeFusion,
    NoValidTheory,
    NonCommutingFusion,
    NonIntegerFusion,
    NonVanishingComplement,
    NotUnitary,
    ReconstructionFailed,
    ScriptStepFailed,
    UnknownTheory,
    VacuumForbidden,
)
from flavor_diagram import (
    ForbidSpec,
    SurvivalResult,
    build_diagram,
    check_spec,
    spec_from_names,
    spec_names,
    survivors,
)
from group_core import FiniteGroup, character_table, conjugacy_classes
from modular_data import (
    CHARGEON,
    DYON,
    AnyonTheory,
    build_double,
    is_transpose_symmetric,
    theory_from_smatrix,
    validate_theory,
    verlinde_fusion,
)
from tasks import run_parallel
from utils import matrix_diff, parse_matrix, parse_scalar

logger = logging.getLogger(__name__)

SOLUTION_CAP = 2000
NODE_CAP = 200_000
# comparisons on matrices assembled from eigenvectors and QR factors
MATCH_TOL = 10 * ANYON_TOL
VANISH_TOL = MATCH_TOL

StepKind = Literal["Forbid", "PartialForbid", "Condense", "Split", "SymmetryBreak", "CatalogMatch"]


# ---------------------------------------------------------------------------
# Types

class TruncatedFusion(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    labels: Tuple[str, ...]
    indices: Tuple[int, ...]  # positions in the parent theory
    N: np.ndarray


class ReconstructionHints(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    parent_S: Optional[np.ndarray] = None  # parent S restricted to the truncated labels
    dims: Dict[str, float] = Field(default_factory=dict)  # diagram-based dimension hints
    condensate: Tuple[str, ...] = ()  # labels fixed by every forbidden order-2 chargeon


class Reconstructed(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    kind: Literal["reconstructed"] = "reconstructed"
    labels: Tuple[str, ...]
    S: np.ndarray
    dims: np.ndarray


class Degenerate(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    kind: Literal["degenerate"] = "degenerate"
    labels: Tuple[str, ...]
    candidate: np.ndarray
    blocks: Tuple[Tuple[str, ...], ...]
    dims: np.ndarray
    method: Literal["characters", "hinted"] = "characters"

    @property
    def vacuum_block(self) -> Tuple[str, ...]:
        return next(b for b in self.blocks if self.labels[0] in b)


class Condensed(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    labels: Tuple[str, ...]
    S: np.ndarray
    discarded: Tuple[str, ...]


class SplitResult(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    ok: bool
    permutation: Optional[Tuple[int, ...]] = None  # reduced label -> merge group
    symmetric_block: Optional[np.ndarray] = None
    antisymmetric_block: Optional[np.ndarray] = None
    message: str = ""


class CatalogMatch(BaseModel):
    name: str
    display_name: str
    via: Literal["direct", "split"]
    relabeling: Dict[str, str]
    merge_map: Optional[List[List[str]]] = None
    correspondence_name: Optional[str] = None


class Stage(BaseModel):
    name: str
    labels: List[str]
    matrix: List[List[Tuple[float, float]]]


class ProcessStep(BaseModel):
    kind: StepKind
    summary: str
    payload: Dict[str, Any] = Field(default_factory=dict)


class Branch(BaseModel):
    labels: List[str]
    outcome: str
    message: str = ""


class FinalTheory(BaseModel):
    name: str
    display_name: str
    via: str
    correspondence: Dict[str, str]
    correspondence_name: Optional[str] = None


class PhaseReport(BaseModel):
    group: str
    spec: List[str]
    mode: Literal["automatic", "scripted"]
    steps: List[ProcessStep] = Field(default_factory=list)
    stages: List[Stage] = Field(default_factory=list)
    branches: List[Branch] = Field(default_factory=list)
    final: Optional[FinalTheory] = None
    notes: List[str] = Field(default_factory=list)

    def add(self, kind: str, summary: str, **payload):
        self.steps.append(ProcessStep(kind=kind, summary=summary, payload=payload))

    def stage(self, name: str, labels: Sequence[str], S: np.ndarray):
        self.stages.append(Stage(name=name, labels=list(labels), matrix=_matrix_pairs(S)))


class ScriptStep(BaseModel):
    kind: Literal["forbid", "partial_forbid", "reconstruct", "symmetry_break",
                  "condense", "split", "catalog_match"]
    labels: List[str] = Field(default_factory=list)
    project: List[str] = Field(default_factory=list)
    dims: Dict[str, Union[str, float]] = Field(default_factory=dict)
    blocks: List[List[str]] = Field(default_factory=list)
    expect: Optional[Literal["reconstructed", "degenerate"]] = None
    matrix: Optional[Dict[str, Any]] = None  # {"prefactor": "1/6", "rows": [[...]]}
    theory: Optional[str] = None
    merge_map: Optional[List[List[str]]] = None
    relabeling: Dict[str, str] = Field(default_factory=dict)
    correspondence: Optional[str] = None
    note: str = ""


class TransitionScript(BaseModel):
    group: str
    title: str
    classes: List[str] = Field(default_factory=list)
    irreps: List[str] = Field(default_factory=list)
    expected_final: str
    steps: List[ScriptStep]


class CellResult(BaseModel):
    spec: List[str]
    final: Optional[str] = None
    display_name: Optional[str] = None
    summary: str = ""
    error: Optional[str] = None
    script_final: Optional[str] = None


def _matrix_pairs(S: np.ndarray) -> List[List[Tuple[float, float]]]:
    return [[(float(z.real), float(z.imag)) for z in np.asarray(row, dtype=complex)] for row in S]


def stage_matrix(stage: Stage) -> np.ndarray:
    """Stage payload back to a complex matrix."""
    return np.array([[complex(re, im) for re, im in row] for row in stage.matrix])


@lru_cache(maxsize=None)
def double_theory(G: FiniteGroup) -> AnyonTheory:
    """Cached D(G) for a preset or loaded group."""
    return build_double(G)


# ---------------------------------------------------------------------------
# Truncation and reconstruction

def truncate_fusion(theory: AnyonTheory, surviving: Sequence[Union[int, str]]) -> TruncatedFusion:
    """Restrict the fusion tensor to the surviving labels; the vacuum must be among them."""
    idx = sorted({theory.index(s) if isinstance(s, str) else int(s) for s in surviving})
    if not idx or idx[0] != 0:
        raise VacuumForbidden("the vacuum must survive truncation")
    N = np.asarray(theory.N)[np.ix_(idx, idx, idx)]
    return TruncatedFusion(labels=tuple(theory.labels[i] for i in idx), indices=tuple(idx), N=N)


def _commuting(N: np.ndarray) -> Optional[Tuple[int, int]]:
    n = N.shape[0]
    for a in range(n):
        for b in range(a + 1, n):
            if not np.array_equal(N[a] @ N[b], N[b] @ N[a]):
                return a, b
    return None


def fusion_characters(N: np.ndarray) -> np.ndarray:
    """Rows are characters chi_z(a) of the commutative fusion ring, ordered by joint eigenvalue."""
    n = N.shape[0]
    mats = N.astype(float)
    for attempt in range(6):
        weights = np.sqrt(np.arange(2, n + 2) + 3.0 * attempt)
        combo = np.tensordot(weights, mats, axes=1)
        vals, vecs = np.linalg.eig(combo)
        gaps = np.abs(vals[:, None] - vals[None, :]) + np.eye(n)
        if gaps.min() > 1e-7:
            break
    else:
        raise ReconstructionFailed("joint spectrum of the fusion matrices is degenerate")
    order = sorted(range(n), key=lambda i: (round(vals[i].real, 9), round(vals[i].imag, 9)))
    chars = []
    for i in order:
        v = vecs[:, i]
        if abs(v[0]) < ANYON_TOL:
            raise ReconstructionFailed("eigenvector with vanishing vacuum component")
        chi = v / v[0]
        for a in range(n):
            if not np.allclose(mats[a] @ chi, chi[a] * chi, atol=1e-7):
                raise ReconstructionFailed("fusion matrices are not simultaneously diagonalizable")
        chars.append(chi)
    return np.array(chars)


def _assignments(chars: np.ndarray, d: np.ndarray, pf: int, injective: bool) -> List[Tuple[int, ...]]:
    """Maps label -> character with d_z chi_pi(z)(a) = d_a chi_pi(a)(z) (or its conjugate)."""
    n = len(d)
    found: Dict[Tuple[int, ...], None] = {}
    for hermitian in (False, True):
        pi = [pf] + [-1] * (n - 1)
        nodes = 0
        best = [0]

        def fits(z: int, j: int) -> bool:
            for a in range(1, z + 1):
                ja = j if a == z else pi[a]
                lhs = d[z] * chars[j][a]
                rhs = d[a] * chars[ja][z]
                if hermitian:
                    rhs = np.conj(rhs)
                if abs(lhs - rhs) > PROPORTIONAL_TOL:
                    return False
            return True

        def extend(z: int):
            nonlocal nodes
            nodes += 1
            if nodes > NODE_CAP or len(found) >= SOLUTION_CAP:
                return
            distinct = len(set(pi[:z]))
            if not injective and distinct + (n - z) < best[0]:
                return
            if z == n:
                if not injective:
                    if distinct == n:
                        return
                    best[0] = max(best[0], distinct)
                found[tuple(pi)] = None
                return
            used = set(pi[:z])
            fresh = [j for j in range(len(chars)) if j not in used]
            options = fresh if injective else fresh + sorted(used)
            for j in options:
                if fits(z, j):
                    pi[z] = j
                    extend(z + 1)
                    pi[z] = -1

        extend(1)
        if nodes > NODE_CAP:
            logger.debug("assignment search hit node cap (hermitian=%s)", hermitian)
    solutions = list(found)
    if not injective and solutions:
        top = max(len(set(s)) for s in solutions)
        solutions = [s for s in solutions if len(set(s)) == top]
    return solutions


def _overlap(S: np.ndarray, parent: Optional[np.ndarray]) -> float:
    if parent is None:
        return 0.0
    denom = np.linalg.norm(S) * np.linalg.norm(parent)
    return float(np.real(np.sum(S * np.conj(parent))) / denom) if denom else 0.0


def _hinted_candidate(fusion: TruncatedFusion, hints: ReconstructionHints) -> Degenerate:
    labels = fusion.labels
    block = [x for x in labels if x in hints.condensate]
    rest = [x for x in labels if x not in hints.condensate]
    if labels[0] not in block or len(block) < 2 or len(rest) != 1:
        raise NonCommutingFusion(
            "fusion slices do not commute and no hinted candidate applies",
            labels=list(labels), outside=rest)
    h = np.array([hints.dims.get(x, 1.0) if x in block else 0.0 for x in labels])
    weight = float(np.sum(h ** 2))
    r = labels.index(rest[0])
    h[r] = np.sqrt(weight)
    C = np.outer(h, h)
    C[r, r] = -h[r] ** 2
    S = C / np.sqrt(weight * float(np.sum(h ** 2)))
    return Degenerate(labels=labels, candidate=S, blocks=(tuple(block), (rest[0],)), dims=h,
                      method="hinted")


def reconstruct_smatrix(fusion: TruncatedFusion,
                        hints: Optional[ReconstructionHints] = None) -> Union[Reconstructed, Degenerate]:
    """Rebuild S from a truncated fusion ring, falling back to the hinted candidate for non-commuting rings."""
    hints = hints or ReconstructionHints()
    N = np.asarray(fusion.N, dtype=int)
    n = N.shape[0]
    clash = _commuting(N)
    if clash is not None:
        if hints.condensate:
            return _hinted_candidate(fusion, hints)
        a, b = clash
        raise NonCommutingFusion(f"N_{fusion.labels[a]} and N_{fusion.labels[b]} do not commute",
                                 witness=(fusion.labels[a], fusion.labels[b]))

    with np.errstate(all="ignore"):
        chars = fusion_characters(N)
    positive = [j for j in range(n)
                if np.all(np.abs(chars[j].imag) < 1e-7) and np.all(chars[j].real > ANYON_TOL)]
    if not positive:
        raise ReconstructionFailed("no Perron-Frobenius character")
    pf = max(positive, key=lambda j: float(np.sum(chars[j].real)))
    d = chars[pf].real

    def candidate(pi: Tuple[int, ...]) -> np.ndarray:
        return np.array([[d[z] * chars[pi[z]][a] for z in range(n)] for a in range(n)])

    bijective = _assignments(chars, d, pf, injective=True)
    scale = 1.0 / np.sqrt(float(np.sum(d ** 2)))
    ranked = sorted(bijective, key=lambda pi: -_overlap(candidate(pi), hints.parent_S))
    for pi in ranked:
        S = candidate(pi) * scale
        if not np.allclose(S @ S.conj().T, np.eye(n), atol=MATCH_TOL) or not is_transpose_symmetric(S, MATCH_TOL):
            continue
        try:
            if np.array_equal(verlinde_fusion(S), N):
                return Reconstructed(labels=fusion.labels, S=S, dims=d)
        except (NonIntegerFusion, NegativeFusion):
            continue

    partial = _assignments(chars, d, pf, injective=False)
    partial = [pi for pi in partial if len(set(pi)) < n]
    if partial:
        pi = max(partial, key=lambda p: _overlap(candidate(p), hints.parent_S))
        groups: Dict[int, List[str]] = {}
        for a, j in enumerate(pi):
            groups.setdefault(j, []).append(fusion.labels[a])
        blocks = tuple(tuple(g) for g in sorted(groups.values(), key=lambda g: fusion.labels.index(g[0])))
        vac = blocks[0]
        if len(vac) >= 2:
            vac_weight = float(sum(d[fusion.labels.index(x)] ** 2 for x in vac))
            S = candidate(pi) / np.sqrt(vac_weight * float(np.sum(d ** 2)))
            return Degenerate(labels=fusion.labels, candidate=S, blocks=blocks, dims=d)
    raise ReconstructionFailed("no symmetric S-matrix reproduces the truncated fusion",
                               labels=list(fusion.labels))


def proportional_blocks(S: np.ndarray, labels: Sequence[str]) -> Tuple[Tuple[str, ...], ...]:
    """Group labels whose rows are proportional within the relative tolerance."""
    n = S.shape[0]
    blocks: List[List[int]] = []
    for a in range(n):
        for block in blocks:
            r = S[block[0]]
            c = np.vdot(r, S[a]) / np.vdot(r, r)
            if np.linalg.norm(S[a] - c * r) <= PROPORTIONAL_TOL * np.linalg.norm(S[a]):
                block.append(a)
                break
        else:
            blocks.append([a])
    return tuple(tuple(labels[i] for i in b) for b in blocks)


# ---------------------------------------------------------------------------
# Condensation and splitting

def _block_basis(weights: np.ndarray) -> np.ndarray:
    """Orthonormal basis of the block, first column along `weights`."""
    m = len(weights)
    w = weights / np.linalg.norm(weights)
    Q, _ = np.linalg.qr(np.column_stack([w, np.eye(m)[:, 1:]]))
    if np.vdot(Q[:, 0], w).real < 0:
        Q[:, 0] = -Q[:, 0]
    return Q


def _combination_name(names: Sequence[str], coeffs: np.ndarray) -> str:
    terms = []
    for name, c in zip(names, coeffs):
        if abs(c) < 1e-12:
            continue
        sign = "-" if c.real < 0 else "+"
        terms.append(f"{sign}{abs(c):.3f}{name}")
    return "(" + " ".join(terms).lstrip("+") + ")"


def condense(candidate: np.ndarray, blocks: Sequence[Sequence[str]], labels: Sequence[str]) -> Condensed:
    """Change basis so each proportional block collapses to one row, and require the complement to vanish."""
    S = np.asarray(candidate, dtype=complex)
    n = S.shape[0]
    labels = list(labels)
    covered = sorted(labels.index(x) for b in blocks for x in b)
    if covered != list(range(n)):
        blocks = list(blocks) + [(x,) for x in labels if all(x not in b for b in blocks)]
    blocks = sorted((tuple(b) for b in blocks), key=lambda b: labels.index(b[0]))
    if labels[0] not in blocks[0]:
        raise NonVanishingComplement("vacuum block missing from the partition")

    U = np.zeros((n, n), dtype=complex)
    kept, dropped, new_labels, discarded = [], [], [], []
    col = 0
    for block in blocks:
        idx = [labels.index(x) for x in block]
        if len(idx) == 1:
            U[idx[0], col] = 1
            kept.append(col)
            new_labels.append(block[0])
            col += 1
            continue
        ref = S[idx[0]]
        coeffs = []
        for i in idx:
            c = np.vdot(ref, S[i]) / np.vdot(ref, ref)
            if np.linalg.norm(S[i] - c * ref) > PROPORTIONAL_TOL * max(np.linalg.norm(S[i]), 1.0):
                raise NonVanishingComplement(f"rows {block[0]} and {labels[i]} are not proportional",
                                             block=list(block))
            coeffs.append(c.real)
        Q = _block_basis(np.array(coeffs))
        for j in range(len(idx)):
            U[idx, col] = Q[:, j]
            if j == 0:
                kept.append(col)
                new_labels.append(block[0] + "'")
            else:
                dropped.append(col)
                discarded.append(_combination_name(block, Q[:, j]))
            col += 1

    transformed = U.conj().T @ S @ U
    for c in dropped:
        worst = max(np.max(np.abs(transformed[c])), np.max(np.abs(transformed[:, c])))
        if worst > VANISH_TOL:
            raise NonVanishingComplement(
                f"complement {discarded[dropped.index(c)]} keeps entries up to {worst:.3g}",
                value=float(worst))
    reduced = transformed[np.ix_(kept, kept)]
    reduced = reduced / np.linalg.norm(reduced, axis=0)[None, :]
    if reduced[0, 0].real < 0:
        reduced = -reduced
    reduced[np.abs(reduced.imag) < 1e-14] = reduced[np.abs(reduced.imag) < 1e-14].real
    m = reduced.shape[0]
    if not np.allclose(reduced @ reduced.conj().T, np.eye(m), atol=MATCH_TOL):
        raise NotUnitary("condensed matrix is not unitary")
    if not is_transpose_symmetric(reduced, MATCH_TOL) or np.any(reduced[0].real <= ANYON_TOL):
        raise NotUnitary("condensed matrix lost symmetry or first-row positivity")
    return Condensed(labels=tuple(new_labels), S=reduced, discarded=tuple(discarded))


def split_check(reduced: np.ndarray, entry: CatalogEntry,
                merge_map: Optional[Sequence[Sequence[str]]] = None, tol: Optional[float] = None) -> SplitResult:
    """Check that `entry` splits into `reduced` plus an antisymmetric block under `merge_map`."""
    tol = MATCH_TOL if tol is None else tol
    merge_map = [list(g) for g in (merge_map or (entry.merge_maps[0] if entry.merge_maps else []))]
    flat = [x for g in merge_map for x in g]
    if sorted(flat) != sorted(entry.labels):
        return SplitResult(ok=False, message="merge map does not cover the catalog labels")
    n = entry.size
    sym_cols, anti_cols = [], []
    for g in merge_map:
        idx = [entry.index(x) for x in g]
        v = np.zeros(n)
        v[idx] = 1 / np.sqrt(len(idx))
        sym_cols.append(v)
        if len(idx) == 2:
            w = np.zeros(n)
            w[idx[0]], w[idx[1]] = 1 / np.sqrt(2), -1 / np.sqrt(2)
            anti_cols.append(w)
    U = np.column_stack(sym_cols + anti_cols)
    T = U.T @ entry.S @ U
    k = len(sym_cols)
    cross = max(np.max(np.abs(T[:k, k:]), initial=0.0), np.max(np.abs(T[k:, :k]), initial=0.0))
    if cross > tol:
        return SplitResult(ok=False, message=f"not block diagonal: cross term {cross:.3g}")
    sym, anti = T[:k, :k], T[k:, k:]
    if sym.shape != reduced.shape:
        return SplitResult(ok=False, symmetric_block=sym, antisymmetric_block=anti,
                           message=f"dimension mismatch: {reduced.shape[0]} vs {k}")
    perm = find_relabeling(np.asarray(reduced, dtype=complex), sym, tol=tol)
    if perm is None:
        return SplitResult(ok=False, symmetric_block=sym, antisymmetric_block=anti,
                           message="symmetric block differs from the reduced matrix")
    return SplitResult(ok=True, permutation=tuple(perm), symmetric_block=sym, antisymmetric_block=anti)


def _named_correspondence(entry: CatalogEntry, mapping: Dict[str, str]) -> Optional[str]:
    for name, table in entry.correspondences.items():
        if table == mapping:
            return name
    return None


def match_catalog(S: np.ndarray, labels: Sequence[str], T: Optional[np.ndarray] = None,
                  fusion: Optional[np.ndarray] = None,
                  entries: Optional[Sequence[CatalogEntry]] = None,
                  tol: Optional[float] = None) -> Optional[CatalogMatch]:
    """Identify S with a catalog entry, directly up to relabeling or through a merge-map split."""
    tol = MATCH_TOL if tol is None else tol
    entries = list(entries or builtin_entries())
    S = np.asarray(S, dtype=complex)
    n = S.shape[0]
    for entry in entries:
        if entry.size != n:
            continue
        perm = find_relabeling(S, entry.S, T, entry.T, tol=tol)
        if perm is None:
            continue
        if fusion is not None and entry.fusion is not None:
            permuted = entry.fusion[np.ix_(perm, perm, perm)]
            if not np.array_equal(permuted, fusion):
                continue
        relabeling = {labels[i]: entry.labels[p] for i, p in enumerate(perm)}
        return CatalogMatch(name=entry.name, display_name=entry.display_name, via="direct",
                            relabeling=relabeling,
                            correspondence_name=_named_correspondence(entry, relabeling))
    for entry in entries:
        for merge_map in entry.merge_maps:
            result = split_check(S, entry, merge_map, tol)
            if not result.ok:
                continue
            relabeling = {}
            for i, g in enumerate(result.permutation):
                group = merge_map[g]
                if len(group) == 1:
                    relabeling[labels[i]] = group[0]
                else:
                    relabeling[f"{labels[i]}_a"] = group[0]
                    relabeling[f"{labels[i]}_b"] = group[1]
            return CatalogMatch(name=entry.name, display_name=entry.display_name, via="split",
                                relabeling=relabeling, merge_map=[list(g) for g in merge_map],
                                correspondence_name=_named_correspondence(entry, relabeling))
    return None


# ---------------------------------------------------------------------------
# Planning helpers shared by run_auto and run_script

class Plan(BaseModel):
    labels: List[str]
    projected: List[str]
    plain_chargeons: List[str]
    hint_dims: Dict[str, float]
    flavor_loss: Dict[str, float]
    condensate: List[str]


def order_two_chargeons(theory: AnyonTheory, names: Sequence[str]) -> List[str]:
    """Forbidden abelian chargeons that are their own antiparticle."""
    result = []
    for name in names:
        a = theory.index(name)
        if theory.anyons is None or theory.anyons[a].kind != CHARGEON:
            continue
        if abs(theory.dims[a] - 1) < ANYON_TOL and theory.N[a, a, 0] == 1:
            result.append(name)
    return result


def indistinguishable(theory: AnyonTheory, b: str, survivors_: Sequence[str]) -> bool:
    """Parent S row of b equals the vacuum row on the survivors and b itself."""
    ib = theory.index(b)
    cols = [theory.index(x) for x in survivors_] + [ib]
    return bool(np.allclose(theory.S[ib, cols], theory.S[0, cols], atol=ANYON_TOL))


def plan_truncation(theory: AnyonTheory, surv: SurvivalResult, project: bool = True) -> Plan:
    """Decide which labels to keep, project out or condense for one forbidding pattern."""
    names = theory.labels
    surviving = [names[a] for a in surv.surviving]
    forbidden = [names[a] for a in surv.fully_forbidden]
    chargeons = order_two_chargeons(theory, forbidden)
    projected = [b for b in chargeons
                 if project and len(surviving) > 1 and indistinguishable(theory, b, surviving)]
    plain = [b for b in chargeons if b not in projected]

    hint_dims = {names[a]: d for a, d in surv.predicted_dims.items()}
    flavor_loss = {}
    original = {names[a]: float(theory.dims[a]) ** 2 for a in range(len(names))}
    remaining = {names[a]: sq for a, sq in surv.remaining.items()}
    fixed = []
    for x in surviving[1:]:
        ix = theory.index(x)
        if plain and all(theory.N[theory.index(b), ix, ix] >= 1 for b in plain):
            fixed.append(x)
            squares = min(remaining[x], original[x] / 2) if original[x] > 1 else remaining[x]
            if squares < remaining[x]:
                flavor_loss[x] = float(np.sqrt(squares))
                hint_dims[x] = float(np.sqrt(squares))
    for b in projected:
        hint_dims[b] = 1.0
    labels = [x for x in names if x in surviving or x in projected]
    condensate = [names[0]] + fixed if plain else []
    return Plan(labels=labels, projected=projected, plain_chargeons=plain, hint_dims=hint_dims,
                flavor_loss=flavor_loss, condensate=condensate)


def repair_order(theory: AnyonTheory, surv: SurvivalResult) -> List[str]:
    """Partially forbidden anyons to try removing, dyons first."""
    partial = list(surv.partially_forbidden)
    kinds = theory.anyons
    partial.sort(key=lambda a: (kinds[a].kind != DYON, a))
    return [theory.labels[a] for a in partial]


def hints_for(theory: AnyonTheory, labels: Sequence[str], plan: Plan) -> ReconstructionHints:
    """Parent S block, predicted dims and condensate restricted to labels."""
    idx = [theory.index(x) for x in labels]
    return ReconstructionHints(
        parent_S=np.asarray(theory.S)[np.ix_(idx, idx)],
        dims={x: plan.hint_dims[x] for x in labels if x in plan.hint_dims},
        condensate=tuple(x for x in plan.condensate if x in labels),
    )


def symmetry_breaks(labels: Sequence[str], dims: np.ndarray, hint_dims: Dict[str, float]) -> Dict[str, Tuple[float, float]]:
    """Labels whose reconstructed dimension falls below the diagram prediction."""
    out = {}
    for x, d in zip(labels, dims):
        if x in hint_dims and d < hint_dims[x] - 1e-6:
            out[x] = (hint_dims[x], float(d))
    return out


def condensed_breaks(labels: Sequence[str], S: np.ndarray,
                     before: Dict[str, float]) -> Dict[str, Tuple[float, float]]:
    """Surviving singletons whose dimension, read off the condensed S, drops below `before`."""
    dims = (np.asarray(S)[0] / np.asarray(S)[0, 0]).real
    return {x: (before[x], float(d)) for x, d in zip(labels, dims)
            if x in before and d < before[x] - 1e-6}


def _break_step(breaks: Dict[str, Tuple[float, float]], after_condensation: bool = False) -> Tuple[str, str, dict]:
    summary = "spontaneous symmetry breaking" + (" after condensation" if after_condensation else "")
    return ("SymmetryBreak",
            summary + ": " + ", ".join(f"d_{x} {p:.4g} -> {r:.4g}" for x, (p, r) in breaks.items()),
            {"dims": {x: {"predicted": p, "reconstructed": r} for x, (p, r) in breaks.items()},
             "stage": "condensed" if after_condensation else "reconstructed"})


def _fmt_dims(values: Dict[str, float]) -> str:
    return ", ".join(f"{k}={v:.4g}" for k, v in values.items())


# ---------------------------------------------------------------------------
# Automatic protocol

def _attempt(theory: AnyonTheory, labels: List[str], plan: Plan, report: PhaseReport,
             entries: Sequence[CatalogEntry]) -> Optional[Tuple[List[Tuple[str, str, dict]], FinalTheory, List[Stage]]]:
    """One branch; returns (steps, final, stages) or None after recording the failure."""
    steps: List[Tuple[str, str, dict]] = []
    stages: List[Stage] = []
    fusion = truncate_fusion(theory, labels)
    try:
        outcome = reconstruct_smatrix(fusion, hints_for(theory, labels, plan))
    except ReconstructionFailed as e:
        report.branches.append(Branch(labels=labels, outcome="reconstruction failed", message=str(e)))
        return None

    stage_labels = list(fusion.labels)
    if isinstance(outcome, Reconstructed):
        if plan.projected:
            report.branches.append(Branch(labels=labels, outcome="projection rejected",
                                          message=f"{', '.join(plan.projected)} stays distinguishable"))
            return None
        S, dims = outcome.S, outcome.dims
        stages.append(Stage(name="reconstructed", labels=stage_labels, matrix=_matrix_pairs(S)))
        check = validate_theory(theory_from_smatrix("reconstructed", stage_labels, S, N=fusion.N))
        if not check.passed:
            report.branches.append(Branch(labels=labels, outcome="validation failed",
                                          message=", ".join(check.failed())))
            return None
        final_labels, fusion_for_match = stage_labels, fusion.N
    else:
        dims = outcome.dims
        stages.append(Stage(name=f"degenerate candidate ({outcome.method})", labels=stage_labels,
                            matrix=_matrix_pairs(outcome.candidate)))
        vac = outcome.vacuum_block
        if any(b not in vac for b in plan.projected):
            report.branches.append(Branch(labels=labels, outcome="projection rejected",
                                          message="forbidden chargeon outside the vacuum block"))
            return None
        multi = [b for b in outcome.blocks if len(b) > 1]
        try:
            condensed = condense(outcome.candidate, outcome.blocks, fusion.labels)
        except (NonVanishingComplement, NotUnitary) as e:
            report.branches.append(Branch(labels=labels, outcome="condensation failed", message=str(e)))
            return None
        S = condensed.S
        final_labels, fusion_for_match = list(condensed.labels), None
        projected = [b for b in vac if b in plan.projected]
        if projected:
            steps.append(("PartialForbid",
                          f"{', '.join(projected)} forbidden with its antisymmetric flavor: "
                          f"indistinguishable from the vacuum, only the symmetric combination survives",
                          {"labels": projected, "mechanism": "projection"}))
        for block in multi:
            condensing = [x for x in block if x not in plan.projected and x != fusion.labels[0]]
            if not condensing and block == vac:
                continue
            steps.append(("Condense", f"{', '.join(condensing or block)} condense"
                          + (" to the vacuum" if block == vac else ""),
                          {"block": list(block), "discarded": list(condensed.discarded)}))
        stages.append(Stage(name="condensed", labels=final_labels, matrix=_matrix_pairs(S)))

    breaks = symmetry_breaks(fusion.labels, dims, plan.hint_dims)
    if breaks:
        steps.insert(0, _break_step(breaks))

    match = match_catalog(S, final_labels, fusion=fusion_for_match, entries=entries)
    if match is None:
        report.branches.append(Branch(labels=labels, outcome="no catalog match"))
        return None
    if match.via == "split":
        steps.append(("Split", f"split against {match.display_name} merge map",
                      {"merge_map": match.merge_map, "relabeling": match.relabeling}))
    elif isinstance(outcome, Degenerate):
        # a split target re-reads dimensions per half, so only direct matches qualify
        late = condensed_breaks(final_labels, S, dict(zip(fusion.labels, map(float, dims))))
        if late:
            steps.append(_break_step(late, after_condensation=True))
    steps.append(("CatalogMatch", f"identified as {match.display_name}",
                  {"theory": match.name, "relabeling": match.relabeling,
                   "correspondence": match.correspondence_name}))
    final = FinalTheory(name=match.name, display_name=match.display_name, via=match.via,
                        correspondence=match.relabeling, correspondence_name=match.correspondence_name)
    return steps, final, stages


def run_auto(G: FiniteGroup, spec: ForbidSpec,
             entries: Optional[Sequence[CatalogEntry]] = None) -> PhaseReport:
    """Forbid the named labels and search for a catalog endpoint, recording every attempt."""
    check_spec(spec)
    theory = double_theory(G)
    entries = list(entries or builtin_entries())
    surv = survivors(build_diagram(G), spec)
    report = PhaseReport(group=G.name, spec=spec_names(G, spec), mode="automatic")
    names = theory.labels

    if surv.fully_forbidden:
        report.add("Forbid", "forbid " + ", ".join(names[a] for a in surv.fully_forbidden),
                   labels=[names[a] for a in surv.fully_forbidden])
    if surv.partially_forbidden:
        report.add("PartialForbid", "diagram dims " + _fmt_dims(
            {names[a]: surv.predicted_dims[a] for a in surv.partially_forbidden}),
                   removed_squares={names[a]: n for a, n in surv.partially_forbidden.items()},
                   predicted_dims={names[a]: surv.predicted_dims[a] for a in surv.partially_forbidden})

    order = repair_order(theory, surv)
    removals = [()] + [tuple(c) for k in range(1, MAX_REPAIR_REMOVALS + 1) for c in combinations(order, k)]
    plans = [plan_truncation(theory, surv, project=True)]
    if plans[0].projected:
        plans.append(plan_truncation(theory, surv, project=False))

    for plan in plans:
        for removed in removals:
            labels = [x for x in plan.labels if x not in removed]
            result = _attempt(theory, labels, plan, report, entries)
            if result is None:
                continue
            steps, final, stages = result
            if plan.flavor_loss:
                report.add("PartialForbid", "antisymmetric flavors lost under forbidden "
                           + ", ".join(plan.plain_chargeons) + ": " + _fmt_dims(plan.flavor_loss),
                           labels=list(plan.flavor_loss), dims=plan.flavor_loss)
            if removed:
                report.add("PartialForbid", "induced full forbiddance of " + ", ".join(removed)
                           + " (only antisymmetric charge flavors remain)",
                           labels=list(removed), mechanism="repair")
            for kind, summary, payload in steps:
                report.add(kind, summary, **payload)
            report.stages.extend(stages)
            report.final = final
            _annotate(report, labels, plan)
            return report
    raise NoValidTheory(f"no valid theory for spec {{{', '.join(report.spec)}}}", report=report)


def _annotate(report: PhaseReport, labels: Sequence[str], plan: Plan):
    if report.final.name == "trivial" and report.spec:
        report.notes.append("only the vacuum survives; cell extrapolated beyond the tabulated diagram")
    if not report.spec:
        report.notes.append("no transition")
    hinted = any(s.name.startswith("degenerate candidate (hinted)") for s in report.stages)
    if hinted:
        report.notes.append("non-abelian anyons condense; intermediate subspace dimensions are not "
                            "tracked, only the final identification is verified")
    if report.final.name == "z2" and any(s.kind == "Condense" for s in report.steps):
        report.notes.append("Z2 (with multiplicity); the two-label endpoint is the semion model")


# ---------------------------------------------------------------------------
# Scripted protocol

def _check_matrix(actual: np.ndarray, expected_spec: Dict[str, Any], index: int, what: str):
    expected = parse_matrix(expected_spec)
    if expected.shape != actual.shape or not np.allclose(actual, expected, atol=1e-9):
        raise ScriptStepFailed(f"step {index}: {what} differs from the claimed matrix", index,
                               diff=matrix_diff(actual, expected))


def run_script(G: FiniteGroup, spec: ForbidSpec, script: TransitionScript,
               entries: Optional[Sequence[CatalogEntry]] = None) -> PhaseReport:
    """Replay a transition script step by step, checking each claimed matrix against the computed one."""
    check_spec(spec)
    theory = double_theory(G)
    entries = list(entries or builtin_entries())
    surv = survivors(build_diagram(G), spec)
    names = theory.labels
    report = PhaseReport(group=G.name, spec=spec_names(G, spec), mode="scripted")
    fully = {names[a] for a in surv.fully_forbidden}
    partial = {names[a] for a in surv.partially_forbidden}

    labels = [names[a] for a in surv.surviving]
    plan: Optional[Plan] = None
    current: Optional[Union[Reconstructed, Degenerate]] = None
    S, S_labels, fusion_N = None, None, None
    if not script.steps or script.steps[0].kind != "forbid":
        if fully:
            raise ScriptStepFailed("first step must forbid the diagram's fully forbidden anyons", 0)
        plan = plan_truncation(theory, surv, project=False)

    def ensure_outcome(i: int):
        nonlocal current, S, S_labels, fusion_N, plan
        if current is None:
            plan = plan or plan_truncation(theory, surv, project=False)
            fusion = truncate_fusion(theory, labels)
            try:
                current = reconstruct_smatrix(fusion, hints_for(theory, labels, plan))
            except ReconstructionFailed as e:
                raise ScriptStepFailed(f"step {i}: reconstruction failed: {e}", i) from e
            if isinstance(current, Reconstructed):
                S, S_labels, fusion_N = current.S, list(current.labels), fusion.N
                report.stage("reconstructed", S_labels, S)
            else:
                report.stage(f"degenerate candidate ({current.method})", current.labels, current.candidate)
        return current

    for i, step in enumerate(script.steps):
        if step.kind == "forbid":
            if i == 0:
                if set(step.labels) | set(step.project) != fully:
                    raise ScriptStepFailed(
                        f"step 0 forbids {sorted(set(step.labels) | set(step.project))}, "
                        f"diagram forbids {sorted(fully)}", 0)
                plan = plan_truncation(theory, surv, project=bool(step.project))
                if sorted(plan.projected) != sorted(step.project):
                    raise ScriptStepFailed(f"step 0: {step.project} cannot be projected out", 0)
                labels = list(plan.labels)
                report.add("Forbid", "forbid " + ", ".join(step.labels), labels=list(step.labels))
            else:
                bad = [x for x in step.labels if x not in partial]
                if bad:
                    raise ScriptStepFailed(f"step {i}: {bad} are not partially forbidden", i)
                labels = [x for x in labels if x not in step.labels]
                current = None
                report.add("PartialForbid", "induced full forbiddance of " + ", ".join(step.labels),
                           labels=list(step.labels), mechanism="repair")
        elif step.kind == "partial_forbid":
            plan = plan or plan_truncation(theory, surv, project=False)
            claimed = {x: parse_scalar(v).real for x, v in step.dims.items()}
            for x, value in claimed.items():
                if abs(plan.hint_dims.get(x, -1) - value) > 1e-9:
                    raise ScriptStepFailed(
                        f"step {i}: dimension hint for {x} is {plan.hint_dims.get(x)}, script claims {value}", i)
            report.add("PartialForbid", step.note or "flavor loss " + _fmt_dims(claimed),
                       labels=list(claimed), dims=claimed)
        elif step.kind == "reconstruct":
            outcome = ensure_outcome(i)
            if step.expect and outcome.kind != step.expect:
                raise ScriptStepFailed(f"step {i}: expected {step.expect}, got {outcome.kind}", i)
            if step.blocks and isinstance(outcome, Degenerate):
                multi = [list(b) for b in outcome.blocks if len(b) > 1]
                if sorted(map(sorted, multi)) != sorted(map(sorted, step.blocks)):
                    raise ScriptStepFailed(f"step {i}: proportional blocks {multi}, script claims {step.blocks}", i)
            if step.matrix:
                actual = outcome.S if isinstance(outcome, Reconstructed) else outcome.candidate
                _check_matrix(actual, step.matrix, i, "reconstructed matrix")
        elif step.kind == "symmetry_break":
            outcome = ensure_outcome(i)
            after_condensation = S is not None and isinstance(outcome, Degenerate)
            if after_condensation:
                breaks = condensed_breaks(S_labels, S, dict(zip(outcome.labels, map(float, outcome.dims))))
            else:
                breaks = symmetry_breaks(outcome.labels, outcome.dims, plan.hint_dims)
            claimed = {x: parse_scalar(v).real for x, v in step.dims.items()}
            for x, value in claimed.items():
                if x not in breaks or abs(breaks[x][1] - value) > 1e-9:
                    raise ScriptStepFailed(f"step {i}: no symmetry breaking of {x} to {value}", i)
            kind, summary, payload = _break_step({x: breaks[x] for x in claimed}, after_condensation)
            report.add(kind, summary, **payload)
        elif step.kind == "condense":
            outcome = ensure_outcome(i)
            if not isinstance(outcome, Degenerate):
                raise ScriptStepFailed(f"step {i}: nothing to condense, S was reconstructed", i)
            try:
                condensed = condense(outcome.candidate, step.blocks, outcome.labels)
            except (NonVanishingComplement, NotUnitary) as e:
                raise ScriptStepFailed(f"step {i}: {e}", i) from e
            if step.matrix:
                _check_matrix(condensed.S, step.matrix, i, "condensed matrix")
            projected = [x for b in step.blocks for x in b if x in plan.projected]
            if projected:
                report.add("PartialForbid", f"{', '.join(projected)} forbidden with its antisymmetric flavor",
                           labels=projected, mechanism="projection")
            condensing = [x for b in step.blocks for x in b[1:] if x not in plan.projected]
            if condensing:
                report.add("Condense", f"{', '.join(condensing)} condense",
                           blocks=step.blocks, discarded=list(condensed.discarded))
            S, S_labels, fusion_N = condensed.S, list(condensed.labels), None
            report.stage("condensed", S_labels, S)
        elif step.kind == "split":
            if S is None:
                raise ScriptStepFailed(f"step {i}: split needs a condensed matrix", i)
            try:
                entry = find(step.theory, entries)
            except UnknownTheory as e:
                raise ScriptStepFailed(f"step {i}: {e}", i) from e
            result = split_check(S, entry, step.merge_map)
            if not result.ok:
                raise ScriptStepFailed(f"step {i}: split against {entry.display_name} failed: {result.message}", i)
            report.add("Split", f"split against {entry.display_name} merge map",
                       merge_map=step.merge_map or [list(g) for g in entry.merge_maps[0]],
                       permutation=list(result.permutation))
        elif step.kind == "catalog_match":
            if S is None:
                ensure_outcome(i)
                if S is None:
                    raise ScriptStepFailed(f"step {i}: candidate is degenerate, condense first", i)
            match = match_catalog(S, S_labels, fusion=fusion_N, entries=entries)
            if match is None or match.name != step.theory:
                got = match.name if match else "no match"
                raise ScriptStepFailed(f"step {i}: expected {step.theory}, matched {got}", i)
            if step.relabeling and any(match.relabeling.get(k) != v for k, v in step.relabeling.items()):
                raise ScriptStepFailed(f"step {i}: relabeling {match.relabeling} differs from script", i)
            if step.correspondence and match.correspondence_name != step.correspondence:
                raise ScriptStepFailed(f"step {i}: correspondence is not '{step.correspondence}'", i)
            report.add("CatalogMatch", f"identified as {match.display_name}", theory=match.name,
                       relabeling=match.relabeling, correspondence=match.correspondence_name)
            report.final = FinalTheory(name=match.name, display_name=match.display_name, via=match.via,
                                       correspondence=match.relabeling,
                                       correspondence_name=match.correspondence_name)
    if report.final is None:
        if script.steps:
            raise ScriptStepFailed("script ended without a catalog match", len(script.steps))
        match = match_catalog(theory.S, names, T=theory.T, fusion=theory.N, entries=entries)
        if match is not None:
            report.final = FinalTheory(name=match.name, display_name=match.display_name, via=match.via,
                                       correspondence=match.relabeling)
            report.notes.append("no transition")
    if report.final is None or report.final.name != script.expected_final:
        raise ScriptStepFailed(f"script expected {script.expected_final}, "
                               f"ended at {report.final.name if report.final else 'nothing'}",
                               len(script.steps))
    return report


# ---------------------------------------------------------------------------
# Script files and the phase diagram sweep

def load_scripts(group_name: str, directory: Optional[str] = None) -> List[TransitionScript]:
    """Bundled or user transition scripts for a group, sorted by file name."""
    folder = os.path.join(directory or SCRIPTS_DIR, group_name.lower())
    if not os.path.isdir(folder):
        return []
    scripts = []
    for filename in sorted(os.listdir(folder)):
        if filename.endswith(".json"):
            with open(os.path.join(folder, filename)) as f:
                scripts.append(TransitionScript.model_validate(json.load(f)))
    return scripts


def script_spec(G: FiniteGroup, script: TransitionScript) -> ForbidSpec:
    """Forbid spec named by a script's classes and irreps."""
    return spec_from_names(G, script.classes, script.irreps)


def all_specs(G: FiniteGroup) -> List[ForbidSpec]:
    """Every forbidding pattern of non-trivial classes and irreps, smallest first."""
    n_classes = len(conjugacy_classes(G))
    n_irreps = len(character_table(G).dims)
    labels = [("c", k) for k in range(1, n_classes)] + [("i", k) for k in range(1, n_irreps)]
    specs = []
    for mask in product((False, True), repeat=len(labels)):
        chosen = [lab for lab, on in zip(labels, mask) if on]
        specs.append(ForbidSpec(forbidden_classes=frozenset(k for t, k in chosen if t == "c"),
                                forbidden_irreps=frozenset(k for t, k in chosen if t == "i")))
    specs.sort(key=lambda s: (len(s.forbidden_classes) + len(s.forbidden_irreps),
                              sorted(s.forbidden_classes), sorted(s.forbidden_irreps)))
    return specs


def _spec_key(spec: ForbidSpec) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    return tuple(sorted(spec.forbidden_classes)), tuple(sorted(spec.forbidden_irreps))


def enumerate_diagram(G: FiniteGroup, max_workers: Optional[int] = None) -> List[CellResult]:
    """Run every cell of the phase diagram, scripted where a script exists."""
    specs = all_specs(G)
    scripts = {_spec_key(script_spec(G, s)): s for s in load_scripts(G.name)}

    def evaluate(spec: ForbidSpec) -> CellResult:
        cell = CellResult(spec=spec_names(G, spec))
        try:
            report = run_auto(G, spec)
            cell.final = report.final.name
            cell.display_name = report.final.display_name
            cell.summary = " > ".join(s.kind for s in report.steps) or "none"
        except NoValidTheory as e:
            cell.error = str(e)
            return cell
        script = scripts.get(_spec_key(spec))
        if script is not None:
            try:
                cell.script_final = run_script(G, spec, script).final.name
            except ScriptStepFailed as e:
                cell.error = f"script failed: {e}"
            if cell.script_final and cell.script_final != cell.final:
                cell.error = f"script ends at {cell.script_final}, automatic run at {cell.final}"
        return cell

    if len(specs) > 2 ** 8:
        raise ValueError("too many nontrivial labels for a full sweep")
    return run_parallel(evaluate, specs, max_workers=max_workers)
