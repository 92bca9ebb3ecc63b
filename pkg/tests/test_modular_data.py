import numpy as np
import pytest

from catalog import D_S3_RULES, D_S3_S, find, fusion_from_rules
from errors import NonIntegerFusion
from group_core import centralizer, character_table, conjugacy_classes
from modular_data import (
    CHARGEON,
    DYON,
    FLUXON,
    VACUUM,
    antiparticles,
    build_double,
    double_anyons,
    export_theory,
    smatrix_double,
    theory_from_export,
    theory_from_smatrix,
    validate_theory,
    verlinde_fusion,
)


def brute_force_smatrix(G):
    """Direct double sum over commuting pairs of class members."""
    classes = conjugacy_classes(G)
    anyons = double_anyons(G)

    def conjugator(g, rep):
        return next(x for x in range(G.order)
                    if G.mul(G.mul(x, rep), G.inverse[x]) == g)

    def local_char(a, element):
        rep = classes[a.class_index].representative
        N = centralizer(G, rep)
        table = character_table(N.as_group)
        return table.character(a.irrep_index, N.local_index(element))

    n = len(anyons)
    S = np.zeros((n, n), dtype=complex)
    for i, a in enumerate(anyons):
        ra = classes[a.class_index].representative
        for j, b in enumerate(anyons):
            rb = classes[b.class_index].representative
            total = 0j
            for g in classes[a.class_index].members:
                xg = conjugator(g, ra)
                for h in classes[b.class_index].members:
                    if G.mul(g, h) != G.mul(h, g):
                        continue
                    xh = conjugator(h, rb)
                    total += (local_char(a, G.mul(G.mul(G.inverse[xg], h), xg))
                              * local_char(b, G.mul(G.mul(G.inverse[xh], G.inverse[g]), xh)))
            S[i, j] = total / G.order
    return S


def test_s3_anyons(s3_theory):
    np.testing.assert_allclose(s3_theory.dims, [1, 1, 2, 3, 3, 2, 2, 2])
    kinds = [a.kind for a in s3_theory.anyons]
    assert kinds == [VACUUM, CHARGEON, CHARGEON, FLUXON, DYON, FLUXON, DYON, DYON]
    assert s3_theory.labels == tuple("ABCDEFGH")
    assert s3_theory.total_dim == pytest.approx(6.0)


def test_s3_smatrix(s3_theory):
    np.testing.assert_allclose(s3_theory.S, D_S3_S, atol=1e-9)


def test_s3_tmatrix(s3_theory):
    w = np.exp(2j * np.pi / 3)
    np.testing.assert_allclose(s3_theory.T, [1, 1, 1, 1, -1, 1, w, w.conjugate()], atol=1e-9)


def test_s3_fusion_table(s3_theory):
    expected = fusion_from_rules(list("ABCDEFGH"), D_S3_RULES)
    np.testing.assert_array_equal(s3_theory.N, expected)
    np.testing.assert_array_equal(verlinde_fusion(D_S3_S), expected)


def test_z3_smatrix_is_hermitian_dft(z3):
    S = smatrix_double(z3)
    np.testing.assert_allclose(S, find("d_z3").S, atol=1e-9)
    np.testing.assert_allclose(S.conj(), S.T, atol=1e-12)


W, WB = np.exp(2j * np.pi / 3), np.exp(-2j * np.pi / 3)
DZ3_ORDER = ["1", "e1", "e2", "m1", "m2", "e1m1", "e2m1", "e1m2", "e2m2"]
DZ3_LITERAL = np.array([
    [1, 1, 1, 1, 1, 1, 1, 1, 1],
    [1, 1, 1, W, WB, W, W, WB, WB],
    [1, 1, 1, WB, W, WB, WB, W, W],
    [1, WB, W, 1, 1, WB, W, WB, W],
    [1, W, WB, 1, 1, W, WB, W, WB],
    [1, WB, W, W, WB, 1, WB, W, 1],
    [1, WB, W, WB, W, W, 1, 1, WB],
    [1, W, WB, W, WB, WB, 1, 1, W],
    [1, W, WB, WB, W, 1, W, WB, 1],
]) / 3


def test_z3_double_matches_literal_table(z3):
    theory = build_double(z3)
    idx = [theory.index(x) for x in DZ3_ORDER]
    np.testing.assert_allclose(np.asarray(theory.S)[np.ix_(idx, idx)], DZ3_LITERAL, atol=1e-9)


def test_z2_double(z2):
    theory = build_double(z2)
    assert theory.labels == ("1", "e", "m", "em")
    np.testing.assert_allclose(theory.S, find("d_z2").S, atol=1e-9)


@pytest.mark.parametrize("preset", ["s3", "z2", "z3"])
def test_brute_force_oracle(preset, request):
    G = request.getfixturevalue(preset)
    np.testing.assert_allclose(smatrix_double(G), brute_force_smatrix(G), atol=1e-12)


def test_antiparticles(s3_theory):
    assert antiparticles(s3_theory.N) == list(range(8))


def test_validation_passes(s3_theory):
    report = validate_theory(s3_theory)
    assert report.passed, report.messages


def test_validation_flags_bad_twist(s3_theory):
    T = np.array(s3_theory.T)
    T[0] = -1
    broken = s3_theory.model_copy(update={"T": T})
    report = validate_theory(broken)
    assert not report.checks["t_vacuum"]
    assert "t_vacuum" in report.failed()


def test_validation_flags_duplicated_row(s3_theory):
    S = np.array(s3_theory.S)
    S[2] = S[1]
    report = validate_theory(s3_theory.model_copy(update={"S": S}))
    assert not report.checks["unitary"]


def test_validation_flags_dimension_product(s3_theory):
    N = np.array(s3_theory.N)
    D, A = s3_theory.index("D"), s3_theory.index("A")
    N[D, D, A] = 2
    report = validate_theory(s3_theory.model_copy(update={"N": N}))
    assert not report.checks["dimension_product"]
    assert "(D,D)" in report.messages["dimension_product"]


def test_verlinde_rejects_non_integer():
    theta = 0.3
    S = np.array([[np.cos(theta), np.sin(theta)], [np.sin(theta), -np.cos(theta)]])
    with pytest.raises(NonIntegerFusion):
        verlinde_fusion(S)


def test_theory_from_smatrix_infers_fusion():
    S = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
    theory = theory_from_smatrix("z2", ["1", "s"], S)
    assert theory.N[1, 1, 0] == 1
    assert validate_theory(theory).passed


def test_export_roundtrip(s3_theory):
    data = export_theory(s3_theory)
    again = theory_from_export(type(data).model_validate_json(data.model_dump_json()))
    np.testing.assert_array_equal(again.S, s3_theory.S)
    np.testing.assert_array_equal(again.N, s3_theory.N)
    assert again.labels == s3_theory.labels
