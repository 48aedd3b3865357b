from fractions import Fraction

import pytest

from qdiff import catalog, diffop
from qdiff.algebra import pbw_basis
from qdiff.diffop import (
    apply_d,
    covariant_lift_check,
    derivative_operator,
    k_operators,
    mq2_closed_form,
    path_operator,
    path_structure,
    paths,
    poisson_bracket,
    q_derivative,
)
from qdiff.dual import PolyRep, star_unlabeled
from qdiff.errors import WrongAlgebra
from qdiff.ring import ONE, Q, QCoeff

LAMBDA = Q - Q ** -1


def z(*exps, coeff=ONE):
    return PolyRep.monomial(exps, coeff)


def test_derivative_examples(mq2):
    assert q_derivative(mq2, 1, z(2, 1, 0, 0)) == z(1, 1, 0, 0, coeff=2)
    assert q_derivative(mq2, 2, z(1, 1, 0, 0)) == z(1, 0, 0, 0, coeff=Q ** -1)
    assert q_derivative(mq2, 4, z(0, 1, 1, 0)) == z(1, 0, 0, 0, coeff=-LAMBDA)
    assert not q_derivative(mq2, 3, PolyRep.constant(4))


def test_projector_route_agrees(mq2, fq2):
    for spec in (mq2, fq2):
        for g in range(1, spec.n + 1):
            a = derivative_operator(spec, g)
            b = derivative_operator(spec, g, method="projector")
            for d in range(4):
                assert a.matrix(d) == b.matrix(d)


def test_f1_routes_agree(mq2):
    for g in (2, 4):
        a = derivative_operator(mq2, g, scheme="f1")
        b = derivative_operator(mq2, g, scheme="f1", method="projector")
        for d in range(4):
            assert a.matrix(d) == b.matrix(d)


def test_derivative_is_linear(mq2):
    f = z(1, 1, 1, 0, coeff=Q) + z(0, 2, 0, 1)
    g = z(0, 1, 1, 1)
    lhs = q_derivative(mq2, 4, f.scale(3) + g)
    assert lhs == q_derivative(mq2, 4, f).scale(3) + q_derivative(mq2, 4, g)


def test_derivatives_on_the_quantum_plane(plane):
    # the derivative along the first generator ignores the second
    assert q_derivative(plane, 1, z(2, 3)) == z(1, 3, coeff=2)
    assert q_derivative(plane, 2, z(1, 1)) == z(1, 0, coeff=Q ** -1)


def test_closed_form_examples(mq2):
    assert mq2_closed_form(1, (2, 1, 0, 0)) == z(1, 1, 0, 0, coeff=2)
    assert mq2_closed_form(4, (0, 0, 0, 1)) == PolyRep.constant(4)
    expected = z(1, 1, 1, 0, coeff=Q ** -2) + z(2, 0, 0, 1, coeff=(Q ** -3 - Q) / 2)
    assert mq2_closed_form(4, (1, 1, 1, 1)) == expected == q_derivative(mq2, 4, z(1, 1, 1, 1))


def test_closed_form_refuses_other_algebras(mq3):
    with pytest.raises(WrongAlgebra):
        mq2_closed_form(1, (1, 0, 0, 0), spec=mq3)
    with pytest.raises(WrongAlgebra):
        diffop.closed_form_check(catalog.fq(2))


def test_closed_forms_and_structures_agree(mq2):
    report = diffop.closed_form_check(mq2, 4)
    assert report.passed
    assert "differs from D4 on" in report.notes[0]


def test_k_operator_examples(mq2):
    assert k_operators(mq2, "K", 1, z(3, 0, 0, 0)) == z(3, 0, 0, 0, coeff=Q ** -3)
    assert k_operators(mq2, "K", (2, 1), PolyRep.constant(4)) == PolyRep.constant(4)
    assert k_operators(mq2, "O", (1, 1), PolyRep.constant(4)) == z(1, 0, 0, 0, coeff=-(Q ** -1 - Q ** -3))
    kcal = k_operators(mq2, "Kcal", 1, z(1, 0, 0, 0))
    assert kcal == z(2, 0, 0, 0, coeff=-Q * (1 - Q ** -4) / 2)
    with pytest.raises(WrongAlgebra):
        k_operators(catalog.fq(2), "K", (1, 1), PolyRep.constant(4))


def test_o_is_kcal_after_k_squared(mq2):
    for beta in pbw_basis(mq2, 3):
        f = PolyRep.monomial(beta)
        assert k_operators(mq2, "O", 1, f) == k_operators(mq2, "Kcal", 1, k_operators(mq2, "K", 1, f, power=2))


def test_structured_operator_display():
    assert str(path_structure(2, 2, 2)) == "1q^2 * O[1,1] d[1,2] d[2,1] + K[1,2] K[2,1] d[2,2]"
    assert path_structure(2, 2, 2).factor_strings() == ["O[1,1] d[1,2] d[2,1]", "K[1,2] K[2,1] d[2,2]"]
    assert str(path_structure(2, 1, 2, literal=True)) == "K[1,1]^-1 d[1,2]"


def test_path_sets():
    assert paths(2, 1, 1) == ([], [((1,), (1,))])
    assert paths(2, 1, 2) == ([((1,), (2,))], [])
    assert paths(2, 2, 2) == ([((1, 2), (2, 1))], [((2,), (2,))])
    down, up = paths(3, 3, 3)
    assert len(down) == 3 and len(up) == 3


def test_path_operator_examples(mq2):
    assert str(path_operator(mq2, 1, 1).structured) == "d[1,1]"
    assert str(path_operator(mq2, 1, 2).structured) == "K[1,1] d[1,2]"
    op = path_operator(mq2, 2, 2)
    assert op.agrees_with_structure(4)


def test_path_operator_needs_quantum_matrices(plane):
    with pytest.raises(WrongAlgebra):
        path_operator(plane, 1, 1)


def test_path_formula_on_three_by_three(mq3):
    assert diffop.path_check(mq3, 2).passed


def test_printed_path_reading_disagrees_with_duality(mq2):
    report = diffop.path_check(mq2, 3, literal=True)
    assert [r.passed for r in report.results] == [True, False, False, False]


def test_lowest_order_terms():
    report = diffop.lowest_order_check(3)
    assert report.passed
    assert "(2, 2)" in report.notes[0]


def test_row_commutation_identity(mq3):
    assert diffop.difform_check(mq3, samples=40).passed
    assert not diffop.difform_check(mq3, samples=40, literal=True).passed


def test_wave_operator(mq2):
    report = diffop.wave_operator_check(mq2, 4)
    assert report.passed
    assert [r.label for r in report.results][:3] == ["box(z1 z4) = 1", "box(z2 z3) = -q", "box(z1) = 0"]


def test_opposite_relations(mq2):
    assert diffop.opposite_relations_check(mq2, 3).passed


def test_poisson_examples(mq2):
    z1, z2, z3 = (PolyRep.variable(4, i) for i in (1, 2, 3))
    f = z1 + z2 * z3
    assert not poisson_bracket(mq2, f, f)
    assert poisson_bracket(mq2, z2, z1) == z(1, 1, 0, 0)
    lhs = poisson_bracket(mq2, z1, star_unlabeled(mq2, z2, z3))
    rhs = poisson_bracket(mq2, z1, z2) * z3 + z2 * poisson_bracket(mq2, z1, z3)
    assert lhs == rhs


def test_poisson_vanishes_when_commutative():
    spec = catalog.symmetric(3)
    zs = [PolyRep.variable(3, i) for i in (1, 2, 3)]
    assert all(not poisson_bracket(spec, a, b) for a in zs for b in zs)
    assert diffop.poisson_check(spec).passed


def test_covariant_lift_examples(mq2):
    const = PolyRep.constant(4, Fraction(5))
    assert covariant_lift_check(mq2, "AF", const).passed
    af = covariant_lift_check(mq2, "AF", z(0, 1, 1, 0))
    assert af.passed and len(af.results) == 4
    bg = covariant_lift_check(mq2, "BG", z(0, 1, 1, 0))
    assert bg.passed
    assert diffop._bg_components(z(0, 1, 1, 0), 3) == [z(0, 1, 1, 0), PolyRep.constant(4), PolyRep._wrap(4, {})]


def test_covariant_lifts_need_the_q_squared_factor(mq2):
    f = z(0, 1, 1, 0)
    assert diffop._O_hat(f, literal=True) == z(1, 0, 0, 0, coeff=-(Q ** -1 - Q ** -3))
    assert not covariant_lift_check(mq2, "AF", f, literal=True).passed
    assert not covariant_lift_check(mq2, "BG", f, literal=True).passed


def test_printed_third_lift_component_differs(mq2):
    report = covariant_lift_check(mq2, "AF", z(0, 2, 2, 1))
    assert report.passed
    assert report.notes == ["printed component 3 differs from the recursion"]


def test_matrix_export(mq2):
    text = derivative_operator(mq2, 4).export(2)
    assert "z1^1 z2^1z3^1 -1q^1+1q^-1" in text.splitlines()


def test_classical_derivative():
    assert apply_d(z(3, 1), 1) == z(2, 1, coeff=3)
