"""Acceptance suite: one test per criterion, each printing a single PASS/FAIL line.

Run directly (``python tests/test_acceptance.py``) for just the summary lines, or
through pytest, where the lines are repeated in the terminal summary.
"""
from fractions import Fraction
import sys

import pytest

from hilbcalc import hilbert_ring as hr
from hilbcalc.fock import FockVector, unit_class
from hilbcalc.suites import run_suite
from hilbcalc.vertex_ops import boundary_apply

from conftest import BUILTINS, builtin

RESULTS = {}

# Hand-expansion oracles for criterion 13.
#
# a_{1,h} * a_{1,h} on P2: at n = 2 the class a_{-1}(1)a_{-1}(h)|0> is the divisor D_h,
# pulling back to h1 + h2 on X x X.  (h1 + h2)^2 = (p1 + p2) + 2 h1 h2, the pullback of
# a_{-1}(1)a_{-1}(p)|0> + a_{-1}(h)^2|0>.  Both sides are padded identically for n > 2.
P2_H_SQUARED = {(("h", 1), ("h", 1)): Fraction(1), (("p", 1),): Fraction(1)}
# d(1_{X^[2]}) with 1_{X^[2]} = a_{-1}(1)^2|0>/2: a'_{-1}(1)|0> = -L_{-1}(1)|0> = 0, so
# d(1_{X^[2]}) = [a'_{-1}(1), a_{-1}(1)]|0>/2 = [-L_{-1}(1), a_{-1}(1)]|0>/2 = -a_{-2}(1)|0>/2.
BOUNDARY_OF_UNIT_2 = Fraction(-1, 2)
# The value -a_{-2}(1)|0> that is sometimes quoted, kept to document the discrepancy.
BOUNDARY_OF_UNIT_2_AS_STATED = Fraction(-1)


def record(number, title, models, failures):
    status = "PASS" if not failures else "FAIL"
    line = f"{status} criterion {number:2d}: {title} [{', '.join(models)}]"
    if failures:
        line += f" ({len(failures)} failures, first: {failures[0]['check']}: {failures[0]['detail'][:120]})"
    RESULTS[number] = line
    print(line)
    return failures


def check(number, title, suite, models, **kwargs):
    failures = []
    for name in models:
        failures += run_suite(suite, builtin(name), **kwargs)
    record(number, title, models, failures)
    assert failures == []


def test_criterion_01_heisenberg():
    check(1, "Heisenberg commutation relations", "heisenberg", BUILTINS)


def test_criterion_02_virasoro_and_derivative():
    check(2, "Virasoro and derivative identities", "virasoro", BUILTINS)


def test_criterion_03_chern_commutators():
    check(3, "Chern character commutators", "chern", BUILTINS)


def test_criterion_04_pushforward():
    check(4, "diagonal pushforward identities", "pushforward", BUILTINS)


def test_criterion_05_leading_terms():
    check(5, "leading-term constants", "leading-terms", BUILTINS)


def test_criterion_06_round_trips():
    check(6, "basis conversion round trips", "round-trips", BUILTINS)


def test_criterion_07_ring_axioms():
    check(7, "ring axioms of the cup product", "ring-axioms", BUILTINS)


def test_criterion_08_stability():
    check(8, "stability of structure constants", "stability", ("P2", "Abelianlike"))


def test_criterion_09_shape():
    check(9, "universal shape of Chern products", "shape", BUILTINS)


def test_criterion_10_generators():
    check(10, "generator transition is unitriangular", "generators", BUILTINS)


def test_criterion_11_transport():
    check(11, "transport along basis permutations", "transport", BUILTINS)


def test_criterion_12_dimensions():
    check(12, "monomial counts match the product formula", "dimensions", BUILTINS)


def test_criterion_13_worked_constants():
    P2 = builtin("P2")
    failures = run_suite("worked-constants", P2)
    h = ((1, P2.index("h")),)
    want = {tuple(sorted((r, P2.index(c)) for c, r in key)): v for key, v in P2_H_SQUARED.items()}
    got = hr.structure_constants(P2, h, h)
    if got != want:
        failures.append({"check": "P2 entry a_{1,h}^2", "detail": str(got)})
    for name in ("P2", "Abelianlike"):
        m = builtin(name)
        d = boundary_apply(m, unit_class(m, 2))
        if d != FockVector({((2, m.unit),): BOUNDARY_OF_UNIT_2}):
            failures.append({"check": f"boundary of 1 on {name}^[2]", "detail": str(d)})
    record(13, "worked constants against hand expansions", ("P2", "Abelianlike"), failures)
    assert failures == []


# Two commonly quoted forms that disagree with direct computation and with the hand
# expansions above.  They are asserted literally here and expected to fail.

@pytest.mark.xfail(strict=True, reason="d(1_{X^[2]}) is -1/2 a_{-2}(1)|0>, not -a_{-2}(1)|0>")
def test_boundary_constant_as_stated():
    P2 = builtin("P2")
    d = boundary_apply(P2, unit_class(P2, 2))
    assert d == FockVector({((2, P2.unit),): BOUNDARY_OF_UNIT_2_AS_STATED})


@pytest.mark.xfail(strict=True, reason="with odd classes the union coefficient is a Koszul sign")
def test_union_coefficient_one_as_stated():
    m = builtin("Abelianlike")
    e1, e2 = ((1, m.index("e1")),), ((1, m.index("e2")),)
    assert hr.structure_constants(m, e2, e1)[hr.union_key(e1, e2)] == 1


if __name__ == "__main__":
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                pass
    sys.exit(0 if all(line.startswith("PASS") for line in RESULTS.values()) else 1)
