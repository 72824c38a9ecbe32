"""Named verification suites.

Each suite takes a surface model and returns a list of failure records
(dicts with ``suite``, ``check`` and ``detail``); an empty list means every
identity held exactly.  Random choices come from a seeded generator so runs
are reproducible.
"""
from __future__ import annotations

import random
from fractions import Fraction
from math import comb, factorial, prod

from . import cup_product as cp
from . import fock
from . import hilbert_ring as hr
from . import surface as sm
from . import vertex_ops as vo
from .fock import FockVector
from .surface import CohClass, ModelError, SurfaceModel


class Recorder:
    def __init__(self, suite: str):
        self.suite = suite
        self.failures = []

    def check(self, ok: bool, check: str, detail="") -> bool:
        if not ok:
            self.failures.append({"suite": self.suite, "check": check, "detail": str(detail)})
        return ok


# -- random data -------------------------------------------------------------------------

def random_monomial(model: SurfaceModel, rng: random.Random, n: int) -> tuple:
    while True:
        mono, left = (), n
        dead = False
        while left:
            r = rng.randint(1, left)
            res = fock.insert(model, mono, r, rng.randrange(model.rank))
            if res is None:
                dead = True
                break
            mono, left = res[1], left - r
        if not dead:
            return mono


def random_vector(model: SurfaceModel, rng: random.Random, max_weight: int, terms: int = 3,
                  min_weight: int = 0) -> FockVector:
    out = {}
    for _ in range(terms):
        mono = random_monomial(model, rng, rng.randint(min_weight, max_weight))
        fock.accumulate(out, mono, Fraction(rng.choice([-3, -2, -1, 1, 2, 3]), rng.choice([1, 1, 2, 3])))
    return FockVector(out)


def _monomials_by_degree(model: SurfaceModel, n: int) -> dict:
    memo = model._memo.setdefault("mono_by_degree", {})
    if n not in memo:
        table = {}
        for m in fock.enumerate_monomials(model, n):
            table.setdefault(fock.mono_degree(model, m), []).append(m)
        memo[n] = table
    return memo[n]


def random_homogeneous(model: SurfaceModel, rng: random.Random, n: int, degree: int | None = None,
                       terms: int = 2) -> FockVector:
    table = _monomials_by_degree(model, n)
    if degree is None:
        degree = rng.choice(sorted(table))
    out = {}
    for _ in range(terms):
        fock.accumulate(out, rng.choice(table[degree]), Fraction(rng.randint(1, 4), rng.choice([1, 2])))
    return FockVector(out)


def basis_pairs(model: SurfaceModel, rng: random.Random, limit: int) -> list:
    pairs = [(a, b) for a in range(model.rank) for b in range(model.rank)]
    return pairs if len(pairs) <= limit else rng.sample(pairs, limit)


def super_bracket(A, B, pa: int, pb: int, v: FockVector) -> FockVector:
    """[A, B] v for operators given as functions with parities pa, pb."""
    sign = -1 if pa and pb else 1
    return A(B(v)) - B(A(v)) * sign


def ad_boundary(model: SurfaceModel, k: int, f, v: FockVector) -> FockVector:
    """(ad d)^k (f) v = sum_j C(k, j) (-1)^j d^{k-j} f d^j v (d is even)."""
    out = FockVector()
    dv = v
    for j in range(k + 1):
        w = f(dv)
        for _ in range(k - j):
            w = vo.boundary_apply(model, w)
        out = out + w * ((-1) ** j * comb(k, j))
        dv = vo.boundary_apply(model, dv)
    return out


def nested_action(model: SurfaceModel, f, fpar: int, ops, v: FockVector) -> FockVector:
    """[...[f, a_{n1}(b_c1)], ..., a_{nj}(b_cj)] v for ops = [(n1, c1), ...]."""
    if not ops:
        return f(v)
    n, c = ops[-1]
    inner_par = (fpar + sum(model.parity(cc) for _, cc in ops[:-1])) & 1

    def inner(x):
        return nested_action(model, f, fpar, ops[:-1], x)

    def a(x):
        return fock.heisenberg(model, n, CohClass.basis(c), x)

    return super_bracket(inner, a, inner_par, model.parity(c), v)


# -- 1. Heisenberg relations --------------------------------------------------------------

def suite_heisenberg(model: SurfaceModel, seed: int = 1, vectors: int = 50, max_weight: int = 6,
                     index_bound: int = 4) -> list:
    rec = Recorder("heisenberg")
    rng = random.Random(seed)
    P = model.pairing_matrix()
    idx = [i for i in range(-index_bound, index_bound + 1) if i]
    ops = [(n, a) for n in idx for a in range(model.rank)]
    for _ in range(vectors):
        v = random_vector(model, rng, max_weight).terms
        single = {op: fock.heisenberg_basis(model, op[0], op[1], v) for op in ops}
        for n, a in ops:
            for m, b in ops:
                lhs = fock.heisenberg_basis(model, n, a, single[(m, b)])
                rhs_part = fock.heisenberg_basis(model, m, b, single[(n, a)])
                sign = -1 if model.parity(a) and model.parity(b) else 1
                for mono, c in rhs_part.items():
                    fock.accumulate(lhs, mono, -sign * c)
                expect = {}
                if n + m == 0 and P[a][b]:
                    expect = {mono: -n * P[a][b] * c for mono, c in v.items()}
                if not rec.check(lhs == expect, "[a_n, a_m] = -n delta int",
                                 f"n={n} m={m} a={a} b={b}"):
                    return rec.failures
    return rec.failures


# -- 2. Virasoro, derivatives, boundary ---------------------------------------------------

def suite_virasoro(model: SurfaceModel, seed: int = 2, vectors: int = 6, max_weight: int = 5,
                   index_bound: int = 3) -> list:
    rec = Recorder("virasoro")
    rng = random.Random(seed)
    for _ in range(vectors):
        v = random_vector(model, rng, max_weight, terms=2)
        w = v.max_weight()
        for a, b in basis_pairs(model, rng, 6):
            A, B = CohClass.basis(a), CohClass.basis(b)
            for n in range(-index_bound, index_bound + 1):
                for m in range(-index_bound, index_bound + 1):
                    if not m:
                        continue
                    lhs = super_bracket(lambda x: vo.virasoro_apply(model, n, A, x),
                                        lambda x: fock.heisenberg(model, m, B, x),
                                        model.parity(a), model.parity(b), v)
                    rhs = fock.heisenberg(model, n + m, model.mul(A, B), v) * (-m) if n + m else FockVector()
                    rec.check(lhs == rhs, "[L_n, a_m] = -m a_{n+m}", f"n={n} m={m} a={a} b={b}")
        for a in rng.sample(range(model.rank), min(model.rank, 4)):
            A = CohClass.basis(a)
            for n in range(-index_bound, index_bound + 1):
                if not n:
                    continue
                lhs = (vo.boundary_apply(model, fock.heisenberg(model, n, A, v))
                       - fock.heisenberg(model, n, A, vo.boundary_apply(model, v)))
                rhs = vo.apply_operator(model, vo.heisenberg_derivative(model, n, A, w + abs(n) + 1), v)
                rec.check(lhs == rhs, "[d, a_n] = n L_n - n(|n|-1)/2 a_n(K)", f"n={n} a={a}")
        # derivative of a random monomial operator against the boundary bracket
        for _ in range(3):
            length = rng.randint(1, 3)
            idx = [rng.choice([-3, -2, -1, 1, 2, 3]) for _ in range(length)]
            op = vo.monomial_operator(idx, CohClass.basis(rng.randrange(model.rank)), model)
            deriv = vo.op_derivative(model, op, w)
            lhs = vo.apply_operator(model, deriv, v)
            rhs = (vo.boundary_apply(model, vo.apply_operator(model, op, v))
                   - vo.apply_operator(model, op, vo.boundary_apply(model, v)))
            rec.check(lhs == rhs, "op_derivative matches [d, A]", f"indices={idx}")
        for k in range(3):
            a = rng.randrange(model.rank)
            A = CohClass.basis(a)
            lhs = vo.boundary_apply(model, vo.chern_apply(model, k, A, v))
            rhs = vo.chern_apply(model, k, A, vo.boundary_apply(model, v))
            rec.check(lhs == rhs, "[d, G_k] = 0", f"k={k} a={a}")
    return rec.failures


# -- 3. Chern character commutators ---------------------------------------------------

def suite_chern(model: SurfaceModel, seed: int = 3, vectors: int = 6, max_weight: int = 3) -> list:
    rec = Recorder("chern")
    rng = random.Random(seed)
    for _ in range(vectors):
        v = random_vector(model, rng, max_weight, terms=2)
        w = v.max_weight()
        for k in range(4):
            for a, b in basis_pairs(model, rng, 3):
                A, B = CohClass.basis(a), CohClass.basis(b)
                lhs = super_bracket(lambda x: vo.chern_apply(model, k, A, x),
                                    lambda x: fock.create(model, 1, B, x),
                                    model.parity(a), model.parity(b), v)
                rhs = ad_boundary(model, k, lambda x: fock.create(model, 1, model.mul(A, B), x), v)
                rhs = rhs * Fraction(1, factorial(k))
                rec.check(lhs == rhs, "[G_k, a_{-1}] = a_{-1}^{(k)}/k!", f"k={k} a={a} b={b}")
                op = vo.chern_commutator(model, k, A, 1, B, budget=w)
                rec.check(vo.apply_operator(model, op, v) == lhs, "chern_commutator acts as the bracket",
                          f"k={k} a={a} b={b}")
        for k in range(3):
            a = rng.randrange(model.rank)
            f = (lambda kk, aa: (lambda x: vo.chern_apply(model, kk, CohClass.basis(aa), x)))(k, a)
            for _ in range(2):
                ns = [0]
                while sum(ns) == 0:
                    ns = [rng.choice([-3, -2, -1, 1, 2]) for _ in range(k + 1)]
                cs = [rng.randrange(model.rank) for _ in range(k + 1)]
                lhs = nested_action(model, f, model.parity(a), list(zip(ns, cs)), v)
                cls = CohClass.basis(a)
                for c in cs:
                    cls = model.mul(cls, CohClass.basis(c))
                rhs = fock.heisenberg(model, sum(ns), cls, v) * (-prod(ns))
                rec.check(lhs == rhs, "(k+1)-fold bracket of G_k", f"k={k} a={a} ns={ns} cs={cs}")
                ms = [-rng.randint(1, 2) for _ in range(k + 2)]
                cs2 = [rng.randrange(model.rank) for _ in range(k + 2)]
                van = nested_action(model, f, model.parity(a), list(zip(ms, cs2)), v)
                rec.check(not van, "(k+2)-fold bracket of G_k vanishes", f"k={k} ms={ms} cs={cs2}")
    for k in range(3):
        for r in range(1, 4):
            for a, b in basis_pairs(model, rng, 4):
                A, B = CohClass.basis(a), CohClass.basis(b)
                op = vo.chern_commutator(model, k, A, r, B)
                bad = vo.shape_violations(model, op, k, r, A, B)
                rec.check(not bad, "commutator shape", f"k={k} r={r} a={a} b={b} {bad[:2]}")
    return rec.failures


# -- 4. Pushforward identities ----------------------------------------------------------------

def suite_pushforward(model: SurfaceModel, max_arity: int = 3, seed: int = 4) -> list:
    rec = Recorder("pushforward")
    rng = random.Random(seed)
    basis = [CohClass.basis(i) for i in range(model.rank)]
    e = model.euler_class
    for a in range(model.rank):
        A = basis[a]
        rec.check(sm.tau_push(model, 0, A) == sm.TensorClass.scalar(model.integrate(A)),
                  "k = 0 gives the integral", a)
        rec.check(sm.tau_push(model, 1, A) == sm.TensorClass(1, {(a,): 1}), "k = 1 is the identity", a)
        for k in range(1, max_arity + 1):
            T = sm.tau_push(model, k, A)
            for key in _tuples(model.rank, k):
                want = model.integrate(_product(model, [A] + [basis[i] for i in key]))
                if not rec.check(sm.tensor_pairing(model, T, key) == want, "pairing characterization",
                                 f"k={k} a={a} key={key}"):
                    break
            for b in range(model.rank):
                B = basis[b]
                AB = model.mul(A, B)
                for j in range(1, k + 1):
                    rec.check(sm.tensor_absorb(model, T, j, B) == sm.tau_push(model, k, AB),
                              "absorb into a slot", f"k={k} j={j} a={a} b={b}")
                    rec.check(sm.tensor_integrate_slot(model, T, j, B) == sm.tau_push(model, k - 1, AB),
                              "absorb and integrate a slot", f"k={k} j={j} a={a} b={b}")
            for j in range(1, k + 1):
                for u in range(1, max_arity + 1):
                    rec.check(sm.tensor_refine(model, T, j, u) == sm.tau_push(model, k + u - 1, A),
                              "refine a slot", f"k={k} j={j} u={u} a={a}")
            if k >= 2:
                eA = model.mul(e, A)
                for j in range(1, k):
                    rec.check(sm.tensor_contract(model, T, j, j + 1) == sm.tau_push(model, k - 1, eA),
                              "Euler contraction of adjacent slots", f"k={k} j={j} a={a}")
    # the reordering correction, as an identity of actions
    for _ in range(25):
        v = random_vector(model, rng, 4, terms=2)
        idx = [rng.choice([-2, -1, 1, 2]) for _ in range(rng.randint(2, 3))]
        j = rng.randint(1, len(idx) - 1)
        if rng.random() < 0.5:
            idx[j] = -idx[j - 1]
        g = basis[rng.randrange(model.rank)]
        before = vo.apply_operator(model, vo.monomial_operator(idx, g, model), v)
        after = FockVector()
        for ind, cls in vo.reorder(model, idx, g, j):
            after = after + vo.apply_operator(model, vo.monomial_operator(ind, cls, model), v)
        direct = FockVector(fock.apply_tensor_terms(model, tuple(idx), model.tau_terms(len(idx), g), v.terms))
        rec.check(before == direct, "normal ordering preserves the operator", idx)
        rec.check(after == before, "transposition with Euler correction", f"{idx} j={j}")
    return rec.failures


def _tuples(b: int, k: int):
    if k == 0:
        yield ()
        return
    for t in _tuples(b, k - 1):
        for i in range(b):
            yield t + (i,)


def _product(model, classes):
    out = CohClass.basis(model.unit)
    for c in classes:
        out = model.mul(out, c)
    return out


# -- 5. Leading-term constants ----------------------------------------------------------

def suite_leading_terms(model: SurfaceModel, seed: int = 5, samples: int = 2) -> list:
    rec = Recorder("leading-terms")
    rng = random.Random(seed)
    for s in range(1, 4):
        for ks in _tuples(3, s):
            for _ in range(samples):
                alphas = [rng.randrange(model.rank) for _ in range(s)]
                n = sum(k + 1 for k in ks)
                gens = [(k, CohClass.basis(a)) for k, a in zip(ks, alphas)]
                factors = [(k + 1, a) for k, a in zip(ks, alphas)]
                sign, mono = fock.monomial_from_factors(model, factors)
                want = prod(Fraction((-1) ** k, factorial(k + 1)) for k in ks) if sign else Fraction(0)
                stable = cp.stable_product_of_chern(model, gens)
                got = stable.get(mono, Fraction(0)) * sign if sign else Fraction(0)
                rec.check(got == want, "leading coefficient of a Chern product",
                          f"ks={ks} alphas={alphas} got {got}")
                if (1, model.unit) not in factors:
                    # no padding ambiguity: read the same constant off the class on X^[n]
                    v = cp.product_of_chern(model, gens, sum(k + 1 for k in ks))
                    got = v.coeff(mono) * sign if sign else Fraction(0)
                    rec.check(got == want, "leading coefficient on X^[n]",
                              f"ks={ks} alphas={alphas} got {got}")
    for key in hr.enumerate_keys(model, 4, 1):
        if rng.random() > 0.3 and model.rank > 4:
            continue
        P = cp.to_g_basis(model, key)
        word = tuple(sorted(((r - 1, c) for r, c in key), key=lambda g: (g[1], g[0])))
        want = prod((-1) ** (r - 1) * factorial(r) for r, _ in key)
        rec.check(P.terms.get(word) == want, "leading coefficient of a class in Chern generators",
                  f"key={key} got {P.terms.get(word)}")
    return rec.failures


# -- 6. Basis conversion round trips ------------------------------------------------------

def suite_round_trips(model: SurfaceModel, max_weight: int = 4, max_k: int = 3, seed: int = 6,
                      fraction: float | None = None) -> list:
    rec = Recorder("round-trips")
    rng = random.Random(seed)
    keys = hr.enumerate_keys(model, max_weight)
    if fraction is not None:
        keys = [k for k in keys if weight_of(k) <= 2 or rng.random() < fraction]
    for key in keys:
        P = cp.to_g_basis(model, key)
        target = cp.class_key_vector(model, key)
        for n in range(weight_of(key), weight_of(key) + 3):
            got = cp.evaluate(model, P, n)
            rec.check(got == cp.evaluate_stable(model, target, n), "class from Chern generators",
                      f"key={key} n={n}")
    for k in range(max_k + 1):
        for a in range(model.rank):
            A = CohClass.basis(a)
            Bp = cp.chern_in_b_basis(model, k, A)
            top = Bp.terms.get(((k, a),))
            rec.check(top == Fraction((-1) ** k, factorial(k + 1)), "top B coefficient", f"k={k} a={a}")
            for n in (k + 1, k + 2):
                rec.check(cp.evaluate_b(model, Bp, n) == vo.chern_class(model, k, A, n),
                          "Chern character from B-classes", f"k={k} a={a} n={n}")
    return rec.failures


def weight_of(key) -> int:
    return fock.weight(key)


# -- 7. Ring axioms on X^[n] ----------------------------------------------------------------

def suite_ring_axioms(model: SurfaceModel, seed: int = 7, pairs: int = 30, triples: int = 15) -> list:
    rec = Recorder("ring-axioms")
    rng = random.Random(seed)
    for i in range(pairs):
        n = 1 + i % 4
        A = random_homogeneous(model, rng, n)
        B = random_homogeneous(model, rng, n)
        da = fock.mono_degree(model, next(iter(A.terms)))
        db = fock.mono_degree(model, next(iter(B.terms)))
        AB, BA = cp.cup(model, A, B), cp.cup(model, B, A)
        rec.check(AB == BA * (-1) ** (da * db), "graded commutativity", f"n={n}")
        rec.check(fock.vector_degrees(model, AB) <= {da + db}, "degrees add", f"n={n}")
        rec.check(cp.cup(model, fock.unit_class(model, n), A) == A, "unit", f"n={n}")
    for i in range(triples):
        n = 1 + i % 3
        A, B, C = (random_homogeneous(model, rng, n) for _ in range(3))
        left = cp.cup(model, cp.cup(model, A, B), C) if cp.cup(model, A, B) else FockVector()
        BC = cp.cup(model, B, C)
        right = cp.cup(model, A, BC) if BC else FockVector()
        rec.check(left == right, "associativity", f"n={n}")
    for a in range(model.rank):
        for b in range(model.rank):
            A = FockVector.monomial(((1, a),))
            B = FockVector.monomial(((1, b),))
            want = FockVector({((1, c),): v for c, v in model.mul(CohClass.basis(a), CohClass.basis(b)).items()})
            rec.check(cp.cup(model, A, B) == want, "weight-one cup is the surface product", f"{a},{b}")
    return rec.failures


# -- 8. Stability of structure constants ----------------------------------------------------

def suite_stability(model: SurfaceModel, max_weight: int = 5) -> list:
    rec = Recorder("stability")
    # The swapped entry (sigma, rho) is checked against (rho, sigma) by table_problems.
    keys = hr.enumerate_keys(model, max_weight - 1, 1)
    for i, rho in enumerate(keys):
        for sigma in keys[i:]:
            if weight_of(rho) + weight_of(sigma) > max_weight:
                continue
            nstar = weight_of(rho) + weight_of(sigma)
            bad = hr.verify_stability(model, rho, sigma, [nstar, nstar + 1, nstar + 2])
            rec.check(not bad, "table reproduces the cup product", f"{rho} {sigma} {bad}")
            bad = hr.table_problems(model, rho, sigma)
            rec.check(not bad, "table laws", f"{rho} {sigma} {bad}")
    return rec.failures


# -- 9. Shape of Chern products ------------------------------------------------------------

def suite_shape(model: SurfaceModel, seed: int = 9, samples: int = 2) -> list:
    rec = Recorder("shape")
    rng = random.Random(seed)
    for s in range(1, 4):
        for ks in _tuples(3, s):
            for _ in range(samples):
                gens = [(k, CohClass.basis(rng.randrange(model.rank))) for k in ks]
                bad = cp.verify_universal_shape(model, gens)
                rec.check(not bad, "universal shape", f"{ks} {bad[:2]}")
                n = sum(k + 1 for k in ks) + 1
                stable = cp.stable_product_of_chern(model, gens)
                rec.check(cp.evaluate_stable(model, stable, n) == cp.product_of_chern(model, gens, n),
                          "stable product evaluates to the product", f"{ks} n={n}")
    return rec.failures


# -- 10. Generator basis ------------------------------------------------------------------------

def suite_generators(model: SurfaceModel, max_weight: int = 5) -> list:
    rec = Recorder("generators")
    report = hr.generator_transition(model, max_weight)
    rec.check(report.ok, "transition matrix is unitriangular", report.problems[:3])
    if report.ok:
        # spot-check the inverse on a few rows
        for nu in list(report.inverse)[:: max(1, len(report.inverse) // 20)]:
            acc = {}
            for g, c in report.inverse[nu].items():
                for mu, v in report.forward[g].items():
                    fock.accumulate(acc, mu, c * v)
            rec.check(acc == {nu: 1}, "inverse transition", nu)
    return rec.failures


# -- 11. Transport -----------------------------------------------------------------------------

def permuted_copy(model: SurfaceModel) -> tuple:
    """A copy of the model with the non-unit basis reversed, and the map to it."""
    order = [model.unit] + [i for i in reversed(range(model.rank)) if i != model.unit]
    doc = sm.model_to_json(model)
    names = [b.name for b in model.basis]
    doc = dict(doc)
    doc["name"] = model.name + "-permuted"
    doc["basis"] = [next(b for b in sm.model_to_json(model)["basis"] if b["name"] == names[i]) for i in order]
    Y = sm.model_from_json(doc)
    phi = [CohClass.basis(Y.index(names[i])) for i in range(model.rank)]
    return Y, phi


def suite_transport(model: SurfaceModel, max_weight: int = 4) -> list:
    rec = Recorder("transport")
    ident = [CohClass.basis(i) for i in range(model.rank)]
    rec.check(hr.transport_isomorphism(model, model, ident, max_weight) == [], "identity transport")
    Y, phi = permuted_copy(model)
    bad = hr.transport_isomorphism(model, Y, phi, max_weight)
    rec.check(bad == [], "permuted basis transport", bad[:3])
    P2, Q = sm.load_model("builtin:P2"), sm.load_model("builtin:P1xP1")
    try:
        hr.transport_isomorphism(P2, Q, [CohClass.basis(i) for i in range(P2.rank)], 2)
        rec.check(False, "K-mismatched pair must be rejected")
    except ModelError as exc:
        rec.check("K^2" in str(exc), "rejection names the canonical class", exc)
    return rec.failures


# -- 12. Dimensions -------------------------------------------------------------------------------

def suite_dimensions(model: SurfaceModel, max_n: int = 8) -> list:
    rec = Recorder("dimensions")
    table = fock.dimension_table(model, max_n)
    series = fock.gottsche_series(model, max_n)
    for n in range(max_n + 1):
        rec.check(table[n] == series[n], "monomial counts match the product formula", f"n={n}")
    for n in range(min(max_n, 4) + 1):
        counts = [0] * (4 * max_n + 1)
        for m in fock.enumerate_monomials(model, n):
            counts[fock.mono_degree(model, m)] += 1
        rec.check(counts == table[n], "enumeration matches counting", f"n={n}")
    return rec.failures


# -- 13. Worked constants ---------------------------------------------------------------------

# a_{1,h} a_{1,h} on P2, expanded by hand: G_0(h) acts on 1_{-1} a_{-1}(h)|0> by the
# Leibniz rule, each a_{-1}(x) becoming a_{-1}(h x).
P2_WORKED_ENTRY = {(("h", 1), ("h", 1)): Fraction(1), (("p", 1),): Fraction(1)}
# d(1_{X^[2]}) by hand: d(1/2 a_{-1}(1)^2|0>) = 1/2 a_{-1}'(1) a_{-1}(1)|0> because
# a_{-1}'(1)|0> = 0, and [a_{-1}'(1), a_{-1}(1)] = [-L_{-1}(1), a_{-1}(1)] = -a_{-2}(1).
BOUNDARY_OF_UNIT_2 = Fraction(-1, 2)


def suite_worked_constants(model: SurfaceModel) -> list:
    rec = Recorder("worked-constants")
    P2 = sm.load_model("builtin:P2")
    h = P2.index("h")
    got = hr.structure_constants(P2, ((1, h),), ((1, h),))
    want = {tuple(sorted((r, P2.index(c)) for c, r in key)): v for key, v in P2_WORKED_ENTRY.items()}
    rec.check(got == want, "P2 table entry a_{1,h}^2", got)
    d = vo.boundary_apply(model, fock.unit_class(model, 2))
    rec.check(d == FockVector({((2, model.unit),): BOUNDARY_OF_UNIT_2}), "boundary of the unit on X^[2]", d)
    return rec.failures


SUITES = {
    "heisenberg": suite_heisenberg,
    "virasoro": suite_virasoro,
    "chern": suite_chern,
    "pushforward": suite_pushforward,
    "leading-terms": suite_leading_terms,
    "round-trips": suite_round_trips,
    "ring-axioms": suite_ring_axioms,
    "stability": suite_stability,
    "shape": suite_shape,
    "generators": suite_generators,
    "transport": suite_transport,
    "dimensions": suite_dimensions,
    "worked-constants": suite_worked_constants,
}


def run_suite(name: str, model: SurfaceModel, **kwargs) -> list:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    return SUITES[name](model, **kwargs)
