from fractions import Fraction
import random

import pytest

from hilbcalc.cup_product import (chern_in_b_basis, cup, evaluate, evaluate_b, integral,
                                  intersection, key_from_partitions, to_g_basis,
                                  verify_universal_shape)
from hilbcalc.fock import FockVector, create, enumerate_monomials, pad, unit_class
from hilbcalc.suites import random_homogeneous
from hilbcalc.vertex_ops import chern_class

from conftest import builtin

VAC = FockVector.vacuum()


def mono(model, *factors):
    v = VAC
    for r, name in reversed(factors):
        v = create(model, r, model.cls(name), v)
    return v


def test_point_class_integrates_to_one(P2):
    assert integral(P2, mono(P2, (1, "p"), (1, "p")), 2) == 1
    assert integral(P2, unit_class(P2, 2), 2) == 0


def test_divisor_square_on_x2(P2):
    # D_h pulls back to h1 + h2 on X^2; (h1 + h2)^2 = p1 + p2 + 2 h1 h2
    D = mono(P2, (1, "1"), (1, "h"))
    assert cup(P2, D, D) == mono(P2, (1, "1"), (1, "p")) + mono(P2, (1, "h"), (1, "h"))


def test_divisor_fourth_power(P2):
    # int over X^(2) of (h1 + h2)^4 = (1/2) * 6 = 3
    assert intersection(P2, [(0, "h")] * 4, 2) == 3
    assert intersection(P2, [(0, "h")] * 2, 1) == 1


def test_degree_mismatch_gives_zero(P2):
    assert intersection(P2, [(1, "h"), (1, "h"), (0, "p")], 2) == 0


def test_unit_is_neutral(P2, abelian):
    rng = random.Random(11)
    for m in (P2, abelian):
        for n in (1, 2, 3):
            v = random_homogeneous(m, rng, n)
            assert cup(m, unit_class(m, n), v) == v
            assert cup(m, v, unit_class(m, n)) == v


def test_weight_one_is_the_surface_ring(abelian):
    for i in range(abelian.rank):
        for j in range(abelian.rank):
            a = FockVector({((1, i),): 1})
            b = FockVector({((1, j),): 1})
            prod = abelian.mul(abelian.cls(i), abelian.cls(j))
            assert cup(abelian, a, b) == FockVector({((1, k),): c for k, c in prod.items()})


def test_cup_rejects_mixed_weights(P2):
    with pytest.raises(ValueError):
        cup(P2, mono(P2, (1, "h")), mono(P2, (2, "h")))


@pytest.mark.parametrize("name", ["P2", "Abelianlike"])
def test_g_basis_reproduces_classes(name):
    m = builtin(name)
    for w in range(1, 4):
        for key in enumerate_monomials(m, w):
            P = to_g_basis(m, key)
            for n in (w, w + 1):
                assert evaluate(m, P, n) == pad(m, _class_vector(m, key), n)


def _class_vector(m, key):
    from hilbcalc.cup_product import key_sign
    return FockVector({key: key_sign(m, key)})


def test_key_from_partitions(abelian):
    e1, e2 = abelian.index("e1"), abelian.index("e2")
    key = key_from_partitions(abelian, {e2: [1], e1: [2, 1]})
    assert sorted(key) == list(key) and len(key) == 3


@pytest.mark.parametrize("k", [0, 1, 2, 3])
def test_chern_through_b_classes(P2, k):
    h = P2.cls("h")
    Q = chern_in_b_basis(P2, k, h)
    for n in range(1, 5):
        assert evaluate_b(P2, Q, n) == chern_class(P2, k, h, n)


@pytest.mark.parametrize("gens", [
    [(0, "h")], [(1, "h"), (0, "h")], [(2, "1"), (1, "p")], [(1, "h"), (1, "h"), (2, "1")],
])
def test_universal_shape(P2, gens):
    assert verify_universal_shape(P2, gens) == []


def test_universal_shape_odd(abelian):
    assert verify_universal_shape(abelian, [(1, "e1"), (2, "e2"), (0, "e13")]) == []
