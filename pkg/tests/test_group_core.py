import numpy as np
import pytest

from errors import GroupTooLarge, NoIdentity, NonAssociative, NotLatinSquare
from group_core import (
    centralizer,
    character_table,
    conjugacy_classes,
    load_group,
    load_group_file,
    resolve_group,
    restriction_matrix,
)
from modular_data import build_double, validate_theory

OMEGA = np.exp(2j * np.pi / 3)


def test_s3_presentation(s3):
    assert s3.order == 6
    assert s3.elements == ("e", "x", "xy", "xy2", "y", "y2")
    x, y = s3.elements.index("x"), s3.elements.index("y")
    assert s3.mul(x, x) == s3.identity
    assert s3.mul(y, s3.mul(y, y)) == s3.identity
    # x y x = y^-1
    assert s3.mul(s3.mul(x, y), x) == s3.inverse[y]


def test_s3_classes(s3):
    classes = conjugacy_classes(s3)
    assert [c.name for c in classes] == ["Ce", "Cx", "Cy"]
    assert [c.size for c in classes] == [1, 3, 2]


def test_centralizers(s3):
    assert len(centralizer(s3, 0).members) == 6
    assert len(centralizer(s3, s3.elements.index("x")).members) == 2
    assert len(centralizer(s3, s3.elements.index("y")).members) == 3


def test_s3_character_table(s3):
    table = character_table(s3)
    assert table.names == ("Gamma1", "Gamma-1", "Gamma2")
    assert table.dims == (1, 1, 2)
    np.testing.assert_allclose(table.values, [[1, 1, 1], [1, -1, 1], [2, 0, -1]], atol=1e-12)


def test_z3_character_order(z3):
    table = character_table(z3)
    np.testing.assert_allclose(table.values[1], [1, OMEGA, OMEGA.conjugate()], atol=1e-12)
    np.testing.assert_allclose(table.values[2], [1, OMEGA.conjugate(), OMEGA], atol=1e-12)


def test_restriction_multiplicities(s3):
    # Gamma2 restricted to N_x = Z2 is Gamma1 + Gamma-1; to N_y = Z3 it is w + wbar
    mx = restriction_matrix(s3, centralizer(s3, s3.elements.index("x")))
    np.testing.assert_array_equal(mx, [[1, 0], [0, 1], [1, 1]])
    my = restriction_matrix(s3, centralizer(s3, s3.elements.index("y")))
    np.testing.assert_array_equal(my, [[1, 0, 0], [1, 0, 0], [0, 1, 1]])


def test_rejects_non_latin():
    with pytest.raises(NotLatinSquare):
        load_group([[0, 1], [0, 1]], ["a", "b"])


def test_rejects_missing_identity():
    # a * b = -a - b mod 3
    with pytest.raises(NoIdentity):
        load_group([[0, 2, 1], [2, 1, 0], [1, 0, 2]], ["a", "b", "c"])


def test_rejects_non_associative():
    # Latin square with identity 0 that is not associative
    table = [
        [0, 1, 2, 3, 4],
        [1, 0, 3, 4, 2],
        [2, 4, 0, 1, 3],
        [3, 2, 4, 0, 1],
        [4, 3, 1, 2, 0],
    ]
    with pytest.raises(NonAssociative) as info:
        load_group(table, list("abcde"))
    assert len(info.value.context["witness"]) == 3


def test_group_file_roundtrip(tmp_path):
    path = tmp_path / "z2.json"
    path.write_text('{"name": "Z2", "elements": ["e", "x"], "table": [[0, 1], [1, 0]]}')
    G = load_group_file(str(path))
    assert G.order == 2 and G.identity == 0
    assert resolve_group(str(path)).elements == ("e", "x")


def test_group_too_large(monkeypatch):
    import group_core

    monkeypatch.setattr(group_core, "MAX_GROUP_ORDER", 2)
    n = 3
    G = load_group([[(a + b) % n for b in range(n)] for a in range(n)], ["0", "1", "2"], name="Z3big")
    with pytest.raises(GroupTooLarge):
        character_table(G)


def matrix_group(name, generators):
    """Cayley table of the matrix group generated by `generators`, identity first."""
    def key(M):
        return tuple(np.round(M, 6).ravel().tolist())

    elements = [np.eye(generators[0].shape[0], dtype=complex)]
    index = {key(elements[0]): 0}
    i = 0
    while i < len(elements):
        for g in generators:
            M = elements[i] @ g
            if key(M) not in index:
                index[key(M)] = len(elements)
                elements.append(M)
        i += 1
    table = [[index[key(A @ B)] for B in elements] for A in elements]
    return load_group(table, [f"g{k}" for k in range(len(elements))], name=name)


def permutation_matrix(perm):
    return np.eye(len(perm), dtype=complex)[list(perm)]


def rotation(angle):
    return np.array([[np.cos(angle), -np.sin(angle)], [np.sin(angle), np.cos(angle)]], dtype=complex)


REFLECTION = np.diag([1, -1]).astype(complex)

EXTRA_GROUPS = {
    "D4": (8, [rotation(np.pi / 2), REFLECTION]),
    "Q8": (8, [np.diag([1j, -1j]), np.array([[0, 1], [-1, 0]], dtype=complex)]),
    "A4": (12, [permutation_matrix([1, 2, 0, 3]), permutation_matrix([1, 0, 3, 2])]),
    "D6": (12, [rotation(np.pi / 3), REFLECTION]),
}


@pytest.fixture(scope="module", params=sorted(EXTRA_GROUPS))
def extra_group(request):
    order, generators = EXTRA_GROUPS[request.param]
    G = matrix_group(request.param, generators)
    assert G.order == order
    return G


def element_order(G, g):
    k, h = 1, g
    while h != G.identity:
        h, k = G.mul(h, g), k + 1
    return k


def test_character_table_orthogonality(extra_group):
    G = extra_group
    table = character_table(G)
    classes = conjugacy_classes(G)
    assert len(table.dims) == len(classes)
    assert sum(d * d for d in table.dims) == G.order
    sizes = np.array([c.size for c in classes])
    gram = (table.values * sizes) @ table.values.conj().T
    np.testing.assert_allclose(gram, G.order * np.eye(len(classes)), atol=1e-9)


def test_restriction_reconstructs_irrep_dims(extra_group):
    G = extra_group
    dims = np.array(character_table(G).dims)
    for cls in conjugacy_classes(G):
        H = centralizer(G, cls.representative)
        local_dims = np.array(character_table(H.as_group).dims)
        np.testing.assert_array_equal(restriction_matrix(G, H) @ local_dims, dims)


def test_same_class_centralizers_agree(extra_group):
    G = extra_group
    for cls in conjugacy_classes(G):
        shapes = set()
        for g in cls.members:
            H = centralizer(G, g)
            shapes.add(tuple(sorted(element_order(G, h) for h in H.members)))
        assert len(shapes) == 1, cls.name


def test_double_of_extra_group_validates(extra_group):
    theory = build_double(extra_group)
    report = validate_theory(theory)
    assert report.passed, report.messages
    assert np.sum(np.asarray(theory.dims) ** 2) == pytest.approx(extra_group.order ** 2)
