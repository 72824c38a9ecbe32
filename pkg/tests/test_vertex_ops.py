from fractions import Fraction

import pytest

from hilbcalc.fock import FockVector, create, heisenberg, unit_class
from hilbcalc.vertex_ops import (OperatorSum, apply_operator, apply_to_vacuum, b_class,
                                 boundary_apply, chern_apply, chern_class, chern_commutator,
                                 heisenberg_derivative, normal_order, op_commutator,
                                 operator_to_json, shape_violations, single, virasoro_apply)

VAC = FockVector.vacuum()


def mono(model, *factors):
    """a_{-r1}(c1) a_{-r2}(c2) ... |0> from (r, name) pairs."""
    v = VAC
    for r, name in reversed(factors):
        v = create(model, r, model.cls(name), v)
    return v


def test_normal_order_moves_annihilators_right():
    assert normal_order((-1, 2)) == {((-1, 2), 0): 1}
    out = normal_order((1, -1))
    assert out == {((-1, 1), 0): 1, ((), 1): -1}


def test_single_operator_matches_fock_action(P2):
    h = P2.cls("h")
    v = mono(P2, (1, "1"), (2, "p"))
    for n in (-2, -1, 1, 2):
        assert apply_operator(P2, single(P2, n, h), v) == heisenberg(P2, n, h, v)


def test_commutator_of_heisenberg_operators(P2):
    one, p = P2.cls("1"), P2.cls("p")
    br = op_commutator(P2, single(P2, 2, one), single(P2, -2, p))
    assert apply_to_vacuum(P2, br) == VAC * -2


def test_virasoro_on_creator(P2):
    # [L_n(a), a_m(b)] = -m a_{n+m}(ab); L_{-1} kills nothing it should not
    h, one = P2.cls("h"), P2.cls("1")
    v = mono(P2, (1, "1"))
    assert virasoro_apply(P2, -1, one, VAC) == FockVector()
    assert virasoro_apply(P2, -1, h, v) == mono(P2, (2, "h"))


def test_derivative_of_creator_on_vacuum(P2):
    # a'_{-2}(h)|0> = a_{-1}a_{-1}(tau_2 h)|0> + a_{-2}(K h)|0>, expanded by hand:
    # tau_2 h = h(x)p + p(x)h and K h = -3p
    op = heisenberg_derivative(P2, -2, P2.cls("h"), 2)
    expected = mono(P2, (1, "h"), (1, "p")) * 2 + mono(P2, (2, "p")) * -3
    assert apply_to_vacuum(P2, op) == expected


def test_boundary_of_fundamental_class(P2, abelian):
    # hand expansion of d on 1_{X^[2]} = a_{-1}(1)^2|0>/2 gives -a_{-2}(1)|0>/2
    for m in (P2, abelian):
        assert boundary_apply(m, unit_class(m, 2)) == mono(m, (2, "1")) * Fraction(-1, 2)
    assert boundary_apply(P2, unit_class(P2, 1)) == FockVector()


def test_chern_degree_zero_is_the_divisor_class(P2):
    h = P2.cls("h")
    assert chern_class(P2, 0, h, 1) == mono(P2, (1, "h"))
    assert chern_class(P2, 0, P2.cls("1"), 3) == unit_class(P2, 3) * 3


def test_chern_zero_commutator_scales_by_r(P2):
    h = P2.cls("h")
    for r in (1, 2, 3):
        op = chern_commutator(P2, 0, P2.cls("1"), r, h)
        assert apply_to_vacuum(P2, op) == mono(P2, (r, "h")) * r


def test_second_nested_commutator(P2):
    # [[G_1(a), a_{-1}(b)], a_{-1}(c)] = -a_{-2}(abc)
    op = chern_commutator(P2, 1, P2.cls("h"), 1, P2.cls("1"))
    br = op_commutator(P2, op, single(P2, -1, P2.cls("h")))
    assert apply_to_vacuum(P2, br) == mono(P2, (2, "p")) * -1


def test_cup_with_generator_on_x1(P2):
    # X^[1] = X, G_k(a, 1) = a td-twisted components; G_0 is multiplication
    v = mono(P2, (1, "h"))
    assert chern_apply(P2, 0, P2.cls("h"), v) == mono(P2, (1, "p"))


def test_b_classes(P2):
    assert b_class(P2, 0, P2.cls("h"), 2) == mono(P2, (1, "1"), (1, "h"))
    assert b_class(P2, 2, P2.cls("h"), 2) == FockVector()


@pytest.mark.parametrize("k,r", [(0, 1), (1, 1), (1, 2), (2, 1), (2, 2)])
def test_commutator_shape(P2, abelian, k, r):
    for m, a, b in ((P2, "h", "h"), (abelian, "e1", "e2")):
        op = chern_commutator(m, k, m.cls(a), r, m.cls(b))
        assert shape_violations(m, op, k, r, m.cls(a), m.cls(b)) == []


def test_operator_json(P2):
    op = chern_commutator(P2, 0, P2.cls("1"), 2, P2.cls("h"))
    rows = operator_to_json(P2, op)
    assert rows == [{"indices": [-2], "class": {"h": "2"}, "coeff": "1"}]
