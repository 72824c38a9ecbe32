import json
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from hilbcalc import CohClass, ModelError, load_model, validate
from hilbcalc.surface import (format_rational, model_from_json, model_to_json, parse_rational,
                              tau_push, tensor_absorb, tensor_contract, tensor_integrate_slot)

from conftest import BUILTINS, builtin


@pytest.mark.parametrize("name,rank,betti", [
    ("P2", 3, [1, 0, 1, 0, 1]),
    ("P1xP1", 4, [1, 0, 2, 0, 1]),
    ("K3like", 24, [1, 0, 22, 0, 1]),
    ("Abelianlike", 16, [1, 4, 6, 4, 1]),
])
def test_builtin_models_load_and_validate(name, rank, betti):
    m = builtin(name)
    assert m.rank == rank
    assert [sum(1 for b in m.basis if b.degree == d) for d in range(5)] == betti
    assert validate(m) == []


def test_p2_ring_by_hand(P2):
    h, p = P2.cls("h"), P2.cls("p")
    assert P2.mul(h, h) == p
    assert P2.mul(h, p) == CohClass()
    assert P2.integrate(p) == 1
    assert P2.canonical_class == h * -3
    assert P2.euler_class == p * 3


def test_p1xp1_canonical_and_pairing(P1xP1):
    names = [b.name for b in P1xP1.basis]
    K = P1xP1.canonical_class
    assert P1xP1.integrate(P1xP1.mul(K, K)) == 8
    assert P1xP1.integrate(P1xP1.euler_class) == 4
    assert len(names) == 4


def test_k3_and_abelian_invariants(K3, abelian):
    assert not K3.canonical_class and not abelian.canonical_class
    assert K3.integrate(K3.euler_class) == 24
    assert abelian.integrate(abelian.euler_class) == 0


def test_odd_classes_anticommute(abelian):
    e1, e2 = abelian.cls("e1"), abelian.cls("e2")
    assert abelian.mul(e1, e2) == abelian.mul(e2, e1) * -1
    assert not abelian.mul(e1, e1)


@pytest.mark.parametrize("name", BUILTINS)
def test_diagonal_self_intersection_is_euler_class(name):
    m = builtin(name)
    diag = tensor_contract(m, tau_push(m, 2, CohClass.basis(m.unit)), 1, 2)
    assert CohClass({k[0]: c for k, c in diag.terms.items()}) == m.euler_class


def test_tau_push_first_terms(P2):
    # tau_2(p) = p (x) p, and tau_1 is the identity
    assert tau_push(P2, 2, P2.cls("p")).terms == {(2, 2): 1}
    assert tau_push(P2, 1, P2.cls("h")).terms == {(1,): 1}
    assert tau_push(P2, 0, P2.cls("p")).value == 1


def test_absorb_then_integrate(P2):
    T = tau_push(P2, 3, P2.cls("1"))
    lhs = tensor_integrate_slot(P2, T, 3, P2.cls("h"))
    assert lhs == tau_push(P2, 2, P2.cls("h"))
    assert tensor_absorb(P2, tau_push(P2, 2, P2.cls("1")), 1, P2.cls("p")) == tau_push(P2, 2, P2.cls("p"))


def test_json_round_trip(P2):
    doc = model_to_json(P2)
    again = model_from_json(json.loads(json.dumps(doc)))
    assert model_to_json(again) == doc
    assert again.fingerprint() == P2.fingerprint()


def test_schema_errors():
    with pytest.raises(ModelError, match="schema"):
        model_from_json({"name": "x"})


def test_axiom_violation_is_named():
    doc = model_to_json(builtin("P2"))
    doc["integral"] = {"p": "2"}
    with pytest.raises(ModelError, match="point class"):
        load_model(doc)


def test_commutativity_violation_is_named():
    doc = model_to_json(builtin("P1xP1"))
    names = [b["name"] for b in doc["basis"] if b["degree"] == 2]
    doc["mult"] = [r for r in doc["mult"] if not (r["i"] == names[0] and r["j"] == names[1])]
    with pytest.raises(ModelError, match="super-commutativity"):
        load_model(doc)


@given(st.fractions(max_denominator=1000))
def test_rational_strings_round_trip(q):
    assert parse_rational(format_rational(q)) == q


def test_integers_print_bare():
    assert format_rational(Fraction(0)) == "0"
    assert format_rational(Fraction(-3)) == "-3"
    assert format_rational(Fraction(1, 2)) == "1/2"
