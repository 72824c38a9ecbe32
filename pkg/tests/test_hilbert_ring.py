import io
from fractions import Fraction

import pytest

from hilbcalc import CohClass, ModelError
from hilbcalc import hilbert_ring as hr
from hilbcalc.suites import permuted_copy

from conftest import builtin

# a_{1,h} * a_{1,h} on P2, expanded by hand on X^[2]: the divisor D_h pulls back to
# h1 + h2 on X x X, and (h1 + h2)^2 = (p1 + p2) + 2 h1 h2 is the pullback of
# a_{-1}(1)a_{-1}(p)|0> + a_{-1}(h)^2|0>.  Padding with a_{-1}(1) leaves this unchanged.
P2_H_SQUARED = {(("h", 1), ("h", 1)): Fraction(1), (("p", 1),): Fraction(1)}


def key(model, *pairs):
    return tuple(sorted((r, model.index(c)) for c, r in pairs))


def test_worked_p2_entry(P2):
    got = hr.structure_constants(P2, key(P2, ("h", 1)), key(P2, ("h", 1)))
    assert got == {key(P2, *k): v for k, v in P2_H_SQUARED.items()}


def test_unit_part_entry(P2):
    # a_{1,1} = a_{-1}(1) 1_{-(n-1)}|0> = n 1_{X^[n]}; a_{1,1} * a_{1,1} = n^2 = n + n(n-1), and a_{{1:(1,1)}}(n) = n(n-1)
    got = hr.structure_constants(P2, key(P2, ("1", 1)), key(P2, ("1", 1)))
    assert got == {key(P2, ("1", 1)): 1, key(P2, ("1", 1), ("1", 1)): 1}


@pytest.mark.parametrize("name", ["P2", "Abelianlike"])
def test_stability_small(name):
    m = builtin(name)
    keys = hr.enumerate_keys(m, 2, 1)[:12]
    for rho in keys:
        for sigma in keys:
            if hr.weight(rho) + hr.weight(sigma) <= 3:
                n = hr.weight(rho) + hr.weight(sigma)
                assert hr.verify_stability(m, rho, sigma, [n, n + 1, n + 2]) == []
                assert hr.table_problems(m, rho, sigma) == []


def test_odd_square_vanishes(abelian):
    e1 = key(abelian, ("e1", 1))
    assert hr.structure_constants(abelian, e1, e1) == {}


def test_table_round_trip(P2):
    buf = io.StringIO()
    count = hr.write_table(P2, 3, buf)
    table = hr.read_table(P2, buf.getvalue().splitlines())
    assert len(table) == count
    for (rho, sigma), d in table.items():
        assert d == hr.structure_constants(P2, rho, sigma)


def test_table_order_is_deterministic(P2):
    a, b = io.StringIO(), io.StringIO()
    hr.write_table(P2, 3, a)
    hr.write_table(P2, 3, b)
    assert a.getvalue() == b.getvalue()


def test_key_json(abelian):
    k = key(abelian, ("e1", 2), ("e1", 1), ("p", 1))
    assert hr.key_from_json(abelian, hr.key_to_json(abelian, k)) == k


@pytest.mark.parametrize("name", ["P2", "P1xP1", "Abelianlike"])
def test_generator_transition_small(name):
    report = hr.generator_transition(builtin(name), 3)
    assert report.ok, report.problems


def test_permuted_transport(P1xP1):
    Y, phi = permuted_copy(P1xP1)
    assert hr.transport_isomorphism(P1xP1, Y, phi, 3) == []


def test_k_mismatch_rejected(P2, P1xP1):
    with pytest.raises(ModelError, match="K\\^2"):
        hr.transport_isomorphism(P2, P1xP1, [CohClass.basis(i) for i in range(3)], 2)


def test_non_multiplicative_map_rejected(P1xP1):
    # swapping a ruling class with the point breaks degrees
    phi = [CohClass.basis(i) for i in range(P1xP1.rank)]
    phi[1], phi[3] = phi[3], phi[1]
    assert hr.check_isomorphism(P1xP1, P1xP1, phi)


def test_union_coefficient_carries_koszul_sign(abelian):
    # a_{1,e2} a_{1,e1} = a_{-1}(e2)a_{-1}(e1) 1 |0> + ... = -a_{{e1:(1), e2:(1)}} + ...
    e1, e2 = key(abelian, ("e1", 1)), key(abelian, ("e2", 1))
    u = hr.union_key(e1, e2)
    assert hr.structure_constants(abelian, e1, e2)[u] == 1
    assert hr.structure_constants(abelian, e2, e1)[u] == -1
    assert hr.union_sign(abelian, e2, e1) == -1
