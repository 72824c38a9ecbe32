from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from hilbcalc.fock import (FockVector, annihilate, create, dimension_table, enumerate_monomials,
                           gottsche_series, heisenberg, monomial_from_factors, pad, pairing,
                           unit_class, vector_from_json, vector_to_json)

from conftest import BUILTINS, builtin

VAC = FockVector.vacuum()


def test_annihilator_against_creator(P2):
    # [a_n(a), a_{-n}(b)] = -n int(ab) on the vacuum
    one, p, h = P2.cls("1"), P2.cls("p"), P2.cls("h")
    assert annihilate(P2, 1, p, create(P2, 1, one, VAC)) == VAC * -1
    assert annihilate(P2, 2, one, create(P2, 2, p, VAC)) == VAC * -2
    assert annihilate(P2, 3, h, create(P2, 3, h, VAC)) == VAC * -3
    assert not annihilate(P2, 1, h, create(P2, 1, one, VAC))


def test_annihilator_counts_repeats(P2):
    one, p = P2.cls("1"), P2.cls("p")
    v = create(P2, 1, one, create(P2, 1, one, VAC))
    assert annihilate(P2, 1, p, v) == create(P2, 1, one, VAC) * -2


def test_odd_creators_anticommute(abelian):
    e1, e2 = abelian.cls("e1"), abelian.cls("e2")
    v12 = create(abelian, 1, e1, create(abelian, 1, e2, VAC))
    v21 = create(abelian, 1, e2, create(abelian, 1, e1, VAC))
    assert v12 == v21 * -1
    assert not create(abelian, 2, e1, create(abelian, 2, e1, VAC))
    assert create(abelian, 1, e1, create(abelian, 2, e1, VAC))


def test_canonicalization_sign(abelian):
    i1, i3 = abelian.index("e1"), abelian.index("e3")
    s, mono = monomial_from_factors(abelian, [(1, i3), (1, i1)])
    assert s == -1 and mono == ((1, i1), (1, i3))
    s, _ = monomial_from_factors(abelian, [(2, i1), (2, i1)])
    assert s == 0


def test_fundamental_class(P2):
    u = P2.unit
    assert unit_class(P2, 2) == FockVector({((1, u), (1, u)): Fraction(1, 2)})
    assert unit_class(P2, 0) == VAC
    v = FockVector({((2, P2.index("h")),): 1})
    assert pad(P2, v, 3) == FockVector({((1, u), (2, P2.index("h"))): 1})


def test_pairing_of_unit_and_point(P2):
    one, p = P2.cls("1"), P2.cls("p")
    assert pairing(P2, create(P2, 1, one, VAC), create(P2, 1, p, VAC)) == 1
    assert pairing(P2, create(P2, 2, one, VAC), create(P2, 2, p, VAC)) == -2


@pytest.mark.parametrize("name,n,betti", [
    ("P2", 2, [1, 0, 2, 0, 3, 0, 2, 0, 1]),
    ("P2", 3, [1, 0, 2, 0, 5, 0, 6, 0, 5, 0, 2, 0, 1]),
    ("K3like", 2, [1, 0, 23, 0, 276, 0, 23, 0, 1]),
])
def test_known_betti_numbers(name, n, betti):
    assert dimension_table(builtin(name), n)[n] == betti


@pytest.mark.parametrize("name", BUILTINS)
def test_monomial_count_matches_product_formula(name):
    m = builtin(name)
    table = dimension_table(m, 6)
    series = gottsche_series(m, 6)
    for n in range(7):
        assert [abs(x) for x in series[n]] == table[n]
        assert sum(1 for _ in enumerate_monomials(m, n)) == sum(table[n])


def test_abelian_euler_characteristic_vanishes(abelian):
    table = dimension_table(abelian, 4)
    for n in range(1, 5):
        assert sum((-1) ** i * d for i, d in enumerate(table[n])) == 0


def _vectors(model, max_weight=4):
    monos = [m for n in range(max_weight + 1) for m in enumerate_monomials(model, n)]
    return st.dictionaries(st.sampled_from(monos), st.fractions(max_denominator=20),
                           max_size=4).map(FockVector)


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_json_round_trip(data):
    m = builtin("Abelianlike")
    v = data.draw(_vectors(m))
    assert vector_from_json(m, vector_to_json(m, v)) == v


@settings(max_examples=40, deadline=None)
@given(st.data(), st.integers(-3, 3), st.integers(-3, 3))
def test_heisenberg_relation_property(data, n, k):
    m = builtin("Abelianlike")
    v = data.draw(_vectors(m, 3))
    x = data.draw(st.integers(0, m.rank - 1))
    y = data.draw(st.integers(0, m.rank - 1))
    a, b = m.cls(x), m.cls(y)
    sign = -1 if m.parity(x) and m.parity(y) else 1
    lhs = heisenberg(m, n, a, heisenberg(m, k, b, v)) - heisenberg(m, k, b, heisenberg(m, n, a, v)) * sign
    scalar = -n * m.integrate(m.mul(a, b)) if n + k == 0 and n else 0
    assert lhs == v * scalar
