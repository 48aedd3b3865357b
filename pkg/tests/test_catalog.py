import pytest

from qdiff import catalog
from qdiff.algebra import dcp_check, diamond_check, format_qalg, parse_qalg
from qdiff.errors import InvalidAlgebra
from qdiff.ring import ONE, Q

LAMBDA = Q - Q ** -1


def test_two_by_two_quantum_matrices():
    spec = catalog.aiii(2)
    assert len(spec.relations()) == 6
    for pair in [(2, 1), (3, 1), (4, 2), (4, 3)]:
        assert spec.b(*pair) == Q ** -1 and not spec.tails[pair]
    assert spec.b(3, 2) == ONE and not spec.tails[(3, 2)]
    assert spec.b(4, 1) == ONE
    assert spec.tails[(4, 1)] == {(2, 3): -LAMBDA}
    assert spec.names == ["Z1_1", "Z1_2", "Z2_1", "Z2_2"]


def test_heisenberg_space_tails():
    spec = catalog.fq(2)
    assert spec.names == ["z0", "z1", "z1*", "z0*"]
    # z0* z0 = z0 z0* - (q^2 - 1) z1 z1*
    assert spec.alpha[(4, 1)] == 0
    assert spec.tails[(4, 1)] == {(2, 3): -(Q ** 2 - 1)}
    assert spec.alpha[(3, 2)] == 0 and not spec.tails[(3, 2)]
    assert spec.alpha[(2, 1)] == 1


def test_symmetric_algebra():
    spec = catalog.symmetric(3)
    assert all(a == 0 for a in spec.alpha.values())
    assert not any(spec.tails.values())


@pytest.mark.parametrize(
    "make",
    [lambda: catalog.aiii(2), lambda: catalog.aiii(3), lambda: catalog.fq(2), lambda: catalog.fq(3), catalog.quantum_plane],
)
def test_validated_families_pass_both_checks(make):
    spec = make()
    assert dcp_check(spec).passed
    assert diamond_check(spec).passed


def test_ci_reports_overlaps():
    assert catalog.ci(2).diamond_report.passed
    assert catalog.ci(3).diamond_report.passed
    report = catalog.ci(4).diamond_report
    assert len(report.failures) == 12


@pytest.mark.parametrize(
    "family, param",
    [("aiii", 2), ("aiii", 3), ("ci", 3), ("fq", 2), ("fq", 3), ("quantum_plane", None), ("symmetric", 4)],
)
def test_round_trip_through_text(family, param):
    spec = catalog.make_family(family, param)
    text = format_qalg(spec)
    again = parse_qalg(text)
    assert again == spec
    assert format_qalg(again) == text


def test_family_errors():
    with pytest.raises(InvalidAlgebra):
        catalog.make_family("diii", 2)
    with pytest.raises(InvalidAlgebra):
        catalog.make_family("aiii")
    with pytest.raises(InvalidAlgebra):
        catalog.make_family("quantum_plane", 2)
    with pytest.raises(InvalidAlgebra):
        catalog.aiii(0)


def test_matrix_positions():
    assert catalog.aiii_index(2, 3, 3) == 6
    assert catalog.aiii_position(6, 3) == (2, 3)
