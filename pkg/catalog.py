"""
Reference anyon theories and exact relabeling search.
"""
import json
import logging
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from config import ANYON_TOL
from errors import UnknownTheory
from modular_data import TheoryExport, quantum_dims

logger = logging.getLogger(__name__)

OMEGA = np.exp(2j * np.pi / 3)


class CatalogEntry(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    name: str
    display_name: str
    labels: Tuple[str, ...]
    S: np.ndarray
    T: Optional[np.ndarray] = None
    fusion: Optional[np.ndarray] = None
    dims: np.ndarray
    # each map is a list of label groups (singletons or pairs) covering all labels
    merge_maps: Tuple[Tuple[Tuple[str, ...], ...], ...] = ()
    correspondences: Dict[str, Dict[str, str]] = Field(default_factory=dict)
    notes: str = ""

    @property
    def size(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        return self.labels.index(label)


def fusion_from_rules(labels: Sequence[str], rules: Dict[str, str]) -> np.ndarray:
    """Fusion tensor from rules like {"D*D": "A+C+F"}; vacuum rules implied, symmetric."""
    n = len(labels)
    pos = {name: i for i, name in enumerate(labels)}
    N = np.zeros((n, n, n), dtype=int)
    for a in range(n):
        N[0, a, a] = N[a, 0, a] = 1
    for product, outcome in rules.items():
        a, b = (pos[x.strip()] for x in product.split("*"))
        for c in outcome.split("+"):
            N[a, b, pos[c.strip()]] += 1
            if a != b:
                N[b, a, pos[c.strip()]] += 1
    return N


def _entry(name, display_name, labels, S, T=None, fusion=None, **extra) -> CatalogEntry:
    S = np.asarray(S, dtype=complex)
    dims, _ = quantum_dims(S)
    return CatalogEntry(name=name, display_name=display_name, labels=tuple(labels), S=S,
                        T=None if T is None else np.asarray(T, dtype=complex),
                        fusion=fusion, dims=dims, **extra)


D_S3_RULES = {
    "B*B": "A", "B*C": "C", "B*D": "E", "B*E": "D", "B*F": "F", "B*G": "G", "B*H": "H",
    "C*C": "A+B+C", "C*D": "D+E", "C*E": "D+E", "C*F": "G+H", "C*G": "F+H", "C*H": "F+G",
    "D*D": "A+C+F+G+H", "D*E": "B+C+F+G+H", "D*F": "D+E", "D*G": "D+E", "D*H": "D+E",
    "E*E": "A+C+F+G+H", "E*F": "D+E", "E*G": "D+E", "E*H": "D+E",
    "F*F": "A+B+F", "F*G": "H+C", "F*H": "G+C",
    "G*G": "A+B+G", "G*H": "F+C",
    "H*H": "A+B+H",
}

D_S3_S = np.array([
    [1, 1, 2, 3, 3, 2, 2, 2],
    [1, 1, 2, -3, -3, 2, 2, 2],
    [2, 2, 4, 0, 0, -2, -2, -2],
    [3, -3, 0, 3, -3, 0, 0, 0],
    [3, -3, 0, -3, 3, 0, 0, 0],
    [2, 2, -2, 0, 0, 4, -2, -2],
    [2, 2, -2, 0, 0, -2, 4, -2],
    [2, 2, -2, 0, 0, -2, -2, 4],
]) / 6.0


def _d_s3() -> CatalogEntry:
    labels = list("ABCDEFGH")
    return _entry("d_s3", "D(S3)", labels, D_S3_S,
                  T=[1, 1, 1, 1, -1, 1, OMEGA, OMEGA.conjugate()],
                  fusion=fusion_from_rules(labels, D_S3_RULES))


# D(Z3) labels as (flux f, charge c); e_c carries chi(y^k) = omega^(c k)
D_Z3_LABELS = ["1", "e1", "e2", "m1", "e1m1", "e2m1", "m2", "e1m2", "e2m2"]
_D_Z3_FC = [(0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (1, 2), (2, 0), (2, 1), (2, 2)]


def _d_z3() -> CatalogEntry:
    S = np.array([[OMEGA ** (c * f2) * OMEGA ** (-c2 * f) / 3 for f2, c2 in _D_Z3_FC]
                  for f, c in _D_Z3_FC])
    T = [OMEGA ** (c * f) for f, c in _D_Z3_FC]
    n = len(_D_Z3_FC)
    fusion = np.zeros((n, n, n), dtype=int)
    for a, (f, c) in enumerate(_D_Z3_FC):
        for b, (f2, c2) in enumerate(_D_Z3_FC):
            fusion[a, b, _D_Z3_FC.index(((f + f2) % 3, (c + c2) % 3))] = 1
    flavor_split = {"A'": "1", "C_a": "e1", "C_b": "e2", "F_a": "m1", "F_b": "m2",
                "G_a": "e1m1", "G_b": "e2m2", "H_a": "e2m1", "H_b": "e1m2"}
    merge = (("1",), ("e1", "e2"), ("m1", "m2"), ("e1m1", "e2m2"), ("e2m1", "e1m2"))
    return _entry("d_z3", "D(Z3)", D_Z3_LABELS, S, T=T, fusion=fusion,
                  merge_maps=(merge,), correspondences={"flavor_split": flavor_split})


def _d_z2() -> CatalogEntry:
    labels = ["1", "e", "m", "em"]
    S = 0.5 * np.array([[1, 1, 1, 1], [1, 1, -1, -1], [1, -1, 1, -1], [1, -1, -1, 1]])
    rules = {"e*e": "1", "m*m": "1", "em*em": "1", "e*m": "em", "e*em": "m", "m*em": "e"}
    return _entry("d_z2", "D(Z2)", labels, S, T=[1, 1, 1, -1],
                  fusion=fusion_from_rules(labels, rules))


def su2k_fusion(level: int) -> np.ndarray:
    """SU(2)_k: j1 x j2 = |j1-j2|, ..., min(j1+j2, k-j1-j2), indices are 2j."""
    n = level + 1
    N = np.zeros((n, n, n), dtype=int)
    for a in range(n):
        for b in range(n):
            for c in range(abs(a - b), min(a + b, 2 * level - a - b) + 1, 2):
                N[a, b, c] = 1
    return N


def su2k_smatrix(level: int) -> np.ndarray:
    n = level + 1
    idx = np.arange(n)
    return np.sqrt(2.0 / (level + 2)) * np.sin(np.pi * np.outer(idx + 1, idx + 1) / (level + 2))


def _su2_4() -> CatalogEntry:
    labels = ["J0", "J1/2", "J1", "J3/2", "J2"]
    return _entry("su2_4", "SU(2)_4", labels, su2k_smatrix(4), fusion=su2k_fusion(4),
                  notes="T not stored; matched on S and fusion")


def _z3() -> CatalogEntry:
    labels = ["1", "e1", "e2"]
    S = np.array([[1, 1, 1], [1, OMEGA, OMEGA ** 2], [1, OMEGA ** 2, OMEGA]]) / np.sqrt(3)
    fusion = np.zeros((3, 3, 3), dtype=int)
    for a in range(3):
        for b in range(3):
            fusion[a, b, (a + b) % 3] = 1
    return _entry("z3", "Z3", labels, S, fusion=fusion,
                  merge_maps=((("1",), ("e1", "e2")),),
                  notes="flux sector of D(Z3)")


def _z2() -> CatalogEntry:
    labels = ["1", "s"]
    S = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
    return _entry("z2", "Z2", labels, S, fusion=fusion_from_rules(labels, {"s*s": "1"}))


def _trivial() -> CatalogEntry:
    return _entry("trivial", "trivial", ["1"], [[1.0]], T=[1], fusion=np.ones((1, 1, 1), dtype=int))


@lru_cache(maxsize=1)
def builtin_entries() -> Tuple[CatalogEntry, ...]:
    return (_d_s3(), _d_z3(), _d_z2(), _su2_4(), _z3(), _z2(), _trivial())


def find(name: str, entries: Optional[Sequence[CatalogEntry]] = None) -> CatalogEntry:
    for entry in entries or builtin_entries():
        if entry.name == name.lower():
            return entry
    raise UnknownTheory(f"no catalog theory named '{name}'")


def all_of_size(n: int, entries: Optional[Sequence[CatalogEntry]] = None) -> List[CatalogEntry]:
    return [e for e in entries or builtin_entries() if e.size == n]


def load_entry(path: str) -> CatalogEntry:
    """Extra entry from a theory export JSON file."""
    with open(path) as f:
        data = TheoryExport.model_validate(json.load(f))
    S = np.array([[complex(re, im) for re, im in row] for row in data.S])
    T = [complex(re, im) for re, im in data.T] if data.T is not None else None
    logger.info("loaded catalog entry %s from %s", data.name, path)
    return _entry(data.name.lower(), data.name, data.labels, S, T=T,
                  fusion=np.array(data.N, dtype=int))


def entry_export(entry: CatalogEntry) -> TheoryExport:
    fusion = entry.fusion if entry.fusion is not None else np.zeros((entry.size,) * 3, dtype=int)
    dims = [float(d) for d in entry.dims]
    return TheoryExport(
        name=entry.display_name,
        labels=list(entry.labels),
        S=[[(float(z.real), float(z.imag)) for z in row] for row in entry.S],
        T=None if entry.T is None else [(float(z.real), float(z.imag)) for z in entry.T],
        N=fusion.tolist(),
        dims=dims,
        total_dim=float(np.sqrt(sum(d * d for d in dims))),
    )


def find_relabeling(source: np.ndarray, target: np.ndarray,
                    source_t: Optional[np.ndarray] = None, target_t: Optional[np.ndarray] = None,
                    tol: float = ANYON_TOL) -> Optional[List[int]]:
    """First vacuum-fixing permutation p (lexicographic) with source[i][j] = target[p[i]][p[j]]."""
    n = source.shape[0]
    if target.shape[0] != n:
        return None
    use_t = source_t is not None and target_t is not None
    perm: List[int] = []
    used = [False] * n

    def fits(i: int, j: int) -> bool:
        if abs(source[i, i] - target[j, j]) > tol:
            return False
        if use_t and abs(source_t[i] - target_t[j]) > tol:
            return False
        for k, pk in enumerate(perm):
            if abs(source[i, k] - target[j, pk]) > tol or abs(source[k, i] - target[pk, j]) > tol:
                return False
        return True

    def extend() -> bool:
        i = len(perm)
        if i == n:
            return True
        candidates = [0] if i == 0 else range(1, n)
        for j in candidates:
            if used[j] or not fits(i, j):
                continue
            perm.append(j)
            used[j] = True
            if extend():
                return True
            perm.pop()
            used[j] = False
        return False

    return list(perm) if extend() else None
