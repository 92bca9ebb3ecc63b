import pytest

from errors import UnknownLabel, VacuumForbidden
from flavor_diagram import (
    ForbidSpec,
    build_diagram,
    export_diagram,
    projector_images,
    spec_from_names,
    spec_names,
    survivors,
)
from forbid_engine import all_specs
from group_core import character_table


def test_square_counts(s3_diagram):
    assert len(s3_diagram.rows) * len(s3_diagram.columns) == 36
    assert [s3_diagram.count(a) for a in range(8)] == [1, 1, 4, 9, 9, 4, 4, 4]


def test_flux_images(s3):
    flux, _ = projector_images(s3)
    assert flux == {"Ce": ["A", "B", "C"], "Cx": ["D", "E"], "Cy": ["F", "G", "H"]}


def test_charge_images_with_flavor_tags(s3):
    _, charge = projector_images(s3)
    assert charge["Gamma1"] == ["A", "D1", "F1"]
    assert charge["Gamma-1"] == ["B", "E1", "F2"]
    assert charge["Gamma2"] == ["C", "D2", "E2", "G", "H"]


def test_export_layout(s3_diagram):
    export = export_diagram(s3_diagram)
    assert export.rows == ["e", "x", "xy", "xy2", "y", "y2"]
    assert export.columns[:2] == ["Gamma1#1", "Gamma-1#1"]
    assert export.cells[0] == ["A", "B", "C", "C", "C", "C"]
    assert export.cells[4] == ["F1", "F2", "G", "G", "H", "H"]


def test_survivors_forbid_cx(s3, s3_diagram):
    result = survivors(s3_diagram, spec_from_names(s3, classes=["Cx"]))
    assert result.fully_forbidden == (3, 4)
    assert result.surviving == (0, 1, 2, 5, 6, 7)
    assert result.partially_forbidden == {}


def test_survivors_forbid_gamma_minus(s3, s3_diagram):
    result = survivors(s3_diagram, spec_from_names(s3, irreps=["Gamma-1"]))
    assert result.fully_forbidden == (1,)
    # E keeps its Gamma2 squares, F keeps its Gamma1 squares
    assert result.partially_forbidden == {4: 3, 5: 2}
    assert result.predicted_dims[5] == pytest.approx(2 ** 0.5)


def test_survivors_everything(s3, s3_diagram):
    spec = spec_from_names(s3, ["Cx", "Cy"], ["Gamma-1", "Gamma2"])
    assert survivors(s3_diagram, spec).surviving == (0,)


def test_empty_spec(s3_diagram):
    result = survivors(s3_diagram, ForbidSpec())
    assert result.surviving == tuple(range(8))
    assert ForbidSpec().is_empty()


def test_vacuum_cannot_be_forbidden(s3, s3_diagram):
    with pytest.raises(VacuumForbidden):
        spec_from_names(s3, classes=["Ce"])
    with pytest.raises(VacuumForbidden):
        survivors(s3_diagram, ForbidSpec(forbidden_irreps=frozenset({0})))


def test_unknown_label(s3):
    with pytest.raises(UnknownLabel):
        spec_from_names(s3, irreps=["Gamma7"])


def test_spec_names_order(s3):
    spec = spec_from_names(s3, ["Cy", "Cx"], ["Gamma2"])
    assert spec_names(s3, spec) == ["Cx", "Cy", "Gamma2"]


@pytest.mark.parametrize("preset", ["z2", "z3", "s3"])
def test_remaining_squares_form_a_rectangle(preset, request):
    G = request.getfixturevalue(preset)
    diagram = build_diagram(G)
    dims = character_table(G).dims
    for spec in all_specs(G):
        result = survivors(diagram, spec)
        rows = sum(1 for k, _ in diagram.rows if k not in spec.forbidden_classes)
        columns = sum(1 for c in diagram.columns if c.irrep not in spec.forbidden_irreps)
        assert sum(result.remaining.values()) == rows * columns
        assert columns == sum(d * d for i, d in enumerate(dims) if i not in spec.forbidden_irreps)


@pytest.mark.parametrize("preset", ["z2", "z3"])
def test_abelian_predicted_dims_are_trivial(preset, request):
    G = request.getfixturevalue(preset)
    diagram = build_diagram(G)
    for spec in all_specs(G):
        result = survivors(diagram, spec)
        assert set(result.predicted_dims.values()) <= {1.0}
        assert not result.partially_forbidden
