# presets/config.py
from typing import Callable, Dict, List


def _cyclic_table(n: int) -> List[List[int]]:
    return [[(i + j) % n for j in range(n)] for i in range(n)]


# S3 elements as words x^a y^b, using y x = x y^-1 (from x^2 = y^3 = e, xyx = y^2).
# Order e, x, xy, xy2, y, y2 puts C_x ahead of C_y.
_S3_WORDS = [(0, 0), (1, 0), (1, 1), (1, 2), (0, 1), (0, 2)]


def _s3_table() -> List[List[int]]:
    index = {word: i for i, word in enumerate(_S3_WORDS)}
    table = []
    for a, b in _S3_WORDS:
        row = []
        for c, d in _S3_WORDS:
            exponent = (b * (-1) ** c + d) % 3
            row.append(index[((a + c) % 2, exponent)])
        table.append(row)
    return table


PRESET_GROUPS: Dict[str, dict] = {
    "z2": {
        "name": "Z2",
        "elements": ["e", "x"],
        "table": lambda: _cyclic_table(2),
        "irrep_names": ["Gamma1", "Gamma-1"],
        "anyon_names": ["1", "e", "m", "em"],
    },
    "z3": {
        "name": "Z3",
        "elements": ["e", "y", "y2"],
        "table": lambda: _cyclic_table(3),
        "irrep_names": ["Gamma1", "Gamma_w", "Gamma_wbar"],
        "anyon_names": ["1", "e1", "e2", "m1", "e1m1", "e2m1", "m2", "e1m2", "e2m2"],
    },
    "s3": {
        "name": "S3",
        "elements": ["e", "x", "xy", "xy2", "y", "y2"],
        "table": _s3_table,
        "irrep_names": ["Gamma1", "Gamma-1", "Gamma2"],
        "anyon_names": ["A", "B", "C", "D", "E", "F", "G", "H"],
    },
}


def preset_names() -> List[str]:
    """Names accepted wherever a group source is expected."""
    return sorted(PRESET_GROUPS)


def get_preset(name: str) -> dict:
    """Get full config for a preset, or None when unknown."""
    return PRESET_GROUPS.get((name or "").lower())


def get_preset_table(name: str) -> List[List[int]]:
    """Build the Cayley table for a preset."""
    builder: Callable[[], List[List[int]]] = PRESET_GROUPS[name.lower()]["table"]
    return builder()
