"""Cup products on X^[n] through Chern character classes.

A *stable vector* is a dict ``key -> coeff`` where each key is a canonical
monomial (it may contain a_{-1}(1_X) factors of its own) and stands for the
padded class p_key(n) = 1_{-(n - |key|)} key|0> at every n at once.  Chern
operators act on stable vectors with n-independent coefficients, which is how
every universal expansion below is computed.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import factorial

from .fock import (FockVector, accumulate, create_basis, insert, mono_degree, monomial_from_factors,
                   pad, unit_class, weight)
from .surface import CohClass, SurfaceModel
from .vertex_ops import chern_apply, nested_vacuum


# -- keys -----------------------------------------------------------------------------------

def key_from_partitions(model: SurfaceModel, parts: dict) -> tuple:
    """Canonical monomial of a partition-valued function ``{class index: [parts]}``.

    Raises ValueError when an odd class has a repeated part.
    """
    factors = []
    for c in sorted(parts):
        ps = sorted(parts[c])
        if model.parity(c) and len(set(ps)) != len(ps):
            raise ValueError(f"partition of odd class {model.basis[c].name} must be strict")
        factors.extend((r, c) for r in ps)
    return tuple(sorted(factors))


def key_partitions(key: tuple) -> dict:
    out = {}
    for r, c in key:
        out.setdefault(c, []).append(r)
    return out


def key_sign(model: SurfaceModel, key: tuple) -> int:
    """Sign s with a_rho(n) = s * p_key(n): the Koszul sign of reordering the
    class-major product (classes in basis order, parts ascending) into
    canonical order."""
    factors = sorted(key, key=lambda f: (f[1], f[0]))
    sign, mono = monomial_from_factors(model, factors)
    return sign


def key_degree(model: SurfaceModel, key: tuple) -> int:
    return mono_degree(model, key)


def class_key_vector(model: SurfaceModel, key: tuple) -> dict:
    """The stable vector of a_rho."""
    return {tuple(key): Fraction(key_sign(model, key))}


def evaluate_stable(model: SurfaceModel, stable: dict, n: int) -> FockVector:
    """Concrete class at weight n of a stable vector."""
    return pad(model, FockVector(stable), n)


def stable_from_fock(model: SurfaceModel, v: FockVector) -> dict:
    """Read a weight-n vector as a stable vector by moving all a_{-1}(1_X)
    factors into the padding.  Valid at that fixed n only."""
    u = (1, model.unit)
    out = {}
    for mono, c in v.terms.items():
        t = mono.count(u)
        stripped = tuple(f for f in mono if f != u)
        accumulate(out, stripped, c * factorial(t))
    return out


# -- Chern operators on stable vectors ------------------------------------------

def _stable_chern_key(model: SurfaceModel, k: int, c: int, key: tuple) -> dict:
    memo = model._memo.setdefault("stable_chern", {})
    mkey = (k, c, key)
    if mkey in memo:
        return memo[mkey]
    s = model.parity(c)
    par = [model.parity(d) for _, d in key]
    b = len(key)
    u = (1, model.unit)
    grouped = {}
    for size in range(0, min(k + 1, b) + 1):
        for pos in combinations(range(b), size):
            rest_pos = [p for p in range(b) if p not in pos]
            exp = 0
            if s:
                exp += sum(par[p] for p in rest_pos)
            for p in pos:
                if par[p]:
                    exp += sum(par[l] for l in rest_pos if l > p)
            sign = -1 if exp & 1 else 1
            chosen = tuple(key[p] for p in pos)
            rest = tuple(key[p] for p in rest_pos)
            for j in range(0, k + 2 - size):
                if j + size == 0:
                    continue
                tag = ((u,) * j + chosen, rest)
                grouped[tag] = grouped.get(tag, 0) + Fraction(sign, factorial(j))
    out = {}
    for (chosen, rest), mult in grouped.items():
        if not mult:
            continue
        cur = nested_vacuum(model, k, c, chosen).terms
        for r, d in reversed(rest):
            cur = create_basis(model, r, d, cur)
            if not cur:
                break
        for m, val in cur.items():
            accumulate(out, m, mult * val)
    memo[mkey] = out
    return out


def stable_chern_apply(model: SurfaceModel, k: int, alpha: CohClass, stable: dict) -> dict:
    """G_k(alpha) cup (-) on a stable vector."""
    out = {}
    for c, ca in alpha.items():
        for key, coef in stable.items():
            for m, val in _stable_chern_key(model, k, c, key).items():
                accumulate(out, m, ca * coef * val)
    return out


# -- G-polynomials --------------------------------------------------------------------

class GPolynomial:
    """Super-commutative polynomial in generators ``(k, c)`` standing for G_k(b_c).

    Monomials are tuples of generators sorted by ``(c, k)``; odd generators
    (odd b_c) anticommute and square to zero.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {m: Fraction(v) for m, v in (terms or {}).items() if v}

    def items(self):
        return self.terms.items()

    def __eq__(self, other):
        return isinstance(other, GPolynomial) and self.terms == other.terms

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        return f"GPolynomial({self.terms})"


def canonical_generators(model: SurfaceModel, gens) -> tuple:
    """Sort a generator word by (c, k) with Koszul signs; returns (sign, word)."""
    word = list(gens)
    sign = 1
    for i in range(1, len(word)):
        j = i
        while j > 0 and (word[j - 1][1], word[j - 1][0]) > (word[j][1], word[j][0]):
            if model.parity(word[j][1]) and model.parity(word[j - 1][1]):
                sign = -sign
            word[j - 1], word[j] = word[j], word[j - 1]
            j -= 1
    for a, b in zip(word, word[1:]):
        if a == b and model.parity(a[1]):
            return 0, None
    return sign, tuple(word)


def poly_mul(model: SurfaceModel, P: GPolynomial, Q: GPolynomial) -> GPolynomial:
    out = {}
    for a, ca in P.terms.items():
        for b, cb in Q.terms.items():
            sign, word = canonical_generators(model, a + b)
            if sign:
                accumulate(out, word, sign * ca * cb)
    return GPolynomial(out)


def stable_generator_product(model: SurfaceModel, word: tuple) -> dict:
    """The stable vector of G_{k1}(b_c1) ... G_{ks}(b_cs) (applied right to left)."""
    memo = model._memo.setdefault("stable_gprod", {})
    if word in memo:
        return memo[word]
    if not word:
        res = {(): Fraction(1)}
    else:
        k, c = word[0]
        res = stable_chern_apply(model, k, CohClass.basis(c), stable_generator_product(model, word[1:]))
    memo[word] = res
    return res


def to_g_basis_key(model: SurfaceModel, key: tuple) -> GPolynomial:
    """GPolynomial whose value at every n is p_key(n)."""
    memo = model._memo.setdefault("to_g", {})
    key = tuple(key)
    if key in memo:
        return memo[key]
    residual = {key: Fraction(1)}
    poly = {}
    while residual:
        top = max(weight(m) for m in residual)
        for m in sorted(x for x in residual if weight(x) == top):
            coef = residual.get(m)
            if not coef:
                continue
            sign, word = canonical_generators(model, [(r - 1, c) for r, c in m])
            if not sign:
                raise ArithmeticError(f"repeated odd factor in key {m}")
            prod = stable_generator_product(model, word)
            lead = prod.get(m, 0)
            if not lead:
                raise ArithmeticError(f"generator product {word} misses its leading key")
            factor = coef / lead
            accumulate(poly, word, factor)
            for mm, val in prod.items():
                accumulate(residual, mm, -factor * val)
            if residual.get(m):
                raise ArithmeticError("leading key did not cancel")
        if any(weight(m) >= top for m in residual):
            raise ArithmeticError("residual weight failed to descend")
    res = GPolynomial(poly)
    memo[key] = res
    return res


def to_g_basis(model: SurfaceModel, key: tuple) -> GPolynomial:
    """GPolynomial whose value at every n is the class a_rho(n)."""
    P = to_g_basis_key(model, key)
    s = key_sign(model, key)
    return GPolynomial({m: v * s for m, v in P.terms.items()})


def evaluate_word(model: SurfaceModel, word: tuple, v: FockVector) -> FockVector:
    for k, c in reversed(word):
        v = chern_apply(model, k, CohClass.basis(c), v)
        if not v:
            break
    return v


def evaluate(model: SurfaceModel, P: GPolynomial, n: int, v: FockVector | None = None) -> FockVector:
    """Value of a G-polynomial at weight n (optionally multiplied into ``v``)."""
    if v is None:
        v = unit_class(model, n)
    out = FockVector()
    for word, coef in P.terms.items():
        out = out + evaluate_word(model, word, v) * coef
    return out


def evaluate_stable_poly(model: SurfaceModel, P: GPolynomial) -> dict:
    out = {}
    for word, coef in P.terms.items():
        for m, v in stable_generator_product(model, word).items():
            accumulate(out, m, coef * v)
    return out


# -- Chern characters in terms of B-classes --------------------------------------

class BPolynomial(GPolynomial):
    """Super-commutative polynomial in generators ``(m, c)`` standing for B_m(b_c)."""

    def __repr__(self):
        return f"BPolynomial({self.terms})"


def chern_in_b_basis_basis(model: SurfaceModel, k: int, c: int) -> BPolynomial:
    """G_k(b_c) as a polynomial in the classes B_m(b_d)."""
    memo = model._memo.setdefault("g_in_b", {})
    if (k, c) in memo:
        return memo[(k, c)]
    P = to_g_basis_key(model, ((k + 1, c),))
    lead = P.terms[((k, c),)]
    out = {((k, c),): 1 / lead}
    for word, coef in P.terms.items():
        if word == ((k, c),):
            continue
        # substitute each generator by its own B-expansion
        prod = BPolynomial({(): Fraction(1)})
        for kk, cc in word:
            prod = BPolynomial(poly_mul(model, prod, chern_in_b_basis_basis(model, kk, cc)).terms)
        for m, v in prod.terms.items():
            accumulate(out, m, -coef * v / lead)
    res = BPolynomial(out)
    memo[(k, c)] = res
    return res


def chern_in_b_basis(model: SurfaceModel, k: int, alpha: CohClass) -> BPolynomial:
    out = {}
    for c, ca in alpha.items():
        for m, v in chern_in_b_basis_basis(model, k, c).terms.items():
            accumulate(out, m, ca * v)
    return BPolynomial(out)


def evaluate_b(model: SurfaceModel, P: BPolynomial, n: int) -> FockVector:
    """Value at weight n: each B-word becomes the cup product of its B-classes."""
    out = FockVector()
    for word, coef in P.terms.items():
        G = GPolynomial({(): 1})
        for m, c in word:
            G = poly_mul(model, G, to_g_basis_key(model, ((m + 1, c),)))
        out = out + evaluate(model, G, n) * coef
    return out


# -- cup products and intersection numbers -----------------------------------

def g_polynomial_of(model: SurfaceModel, v: FockVector) -> GPolynomial:
    """A G-polynomial equal to v at v's weight."""
    out = {}
    for key, c in stable_from_fock(model, v).items():
        for word, val in to_g_basis_key(model, key).terms.items():
            accumulate(out, word, c * val)
    return GPolynomial(out)


def cup(model: SurfaceModel, A: FockVector, B: FockVector, n: int | None = None) -> FockVector:
    """A cup B on X^[n]."""
    if not A or not B:
        return FockVector()
    wa, wb = A.weights(), B.weights()
    if len(wa) != 1 or wa != wb or (n is not None and wa != {n}):
        raise ValueError(f"cup needs two classes of one weight, got {sorted(wa)} and {sorted(wb)}")
    n = wa.pop()
    return evaluate(model, g_polynomial_of(model, A), n, B)


def point_monomial(model: SurfaceModel, n: int) -> tuple:
    return ((1, model.point_class),) * n


def integral(model: SurfaceModel, v: FockVector, n: int) -> Fraction:
    """int over X^[n]: a_{-1}(pt)^n|0> spans the top degree and integrates to 1."""
    return v.coeff(point_monomial(model, n))


def product_of_chern(model: SurfaceModel, gens, n: int) -> FockVector:
    """prod_i G_{k_i}(alpha_i, n) as a class."""
    v = unit_class(model, n)
    for k, a in reversed(list(gens)):
        v = chern_apply(model, k, a, v)
        if not v:
            break
    return v


def intersection(model: SurfaceModel, gens, n: int) -> Fraction:
    """< prod G_{k_i}(alpha_i, n) > on X^[n]; zero unless the degrees add to 4n."""
    gens = [(k, model.cls(a)) for k, a in gens]
    total = 0
    for k, a in gens:
        d = model.class_degree(a)
        if d is None:
            raise ValueError("intersection needs homogeneous classes")
        total += 2 * k + d
    if total != 4 * n:
        return Fraction(0)
    return integral(model, product_of_chern(model, gens, n), n)


def stable_product_of_chern(model: SurfaceModel, gens) -> dict:
    v = {(): Fraction(1)}
    for k, a in reversed(list(gens)):
        v = stable_chern_apply(model, k, a, v)
    return v


def verify_universal_shape(model: SurfaceModel, gens) -> list:
    """Check every key of prod G_{k_i}(alpha_i) against the universal shape.

    Returns a list of violation strings (empty when all keys conform): weight
    at most sum(k_i + 1), factor count at most sum(k_i + 2), degree equal to
    sum(2 k_i + |alpha_i|), and the unique top-weight key with coefficient
    prod (-1)^{k_i} / (k_i + 1)!.
    """
    gens = [(k, model.cls(a)) for k, a in gens]
    bound = sum(k + 1 for k, _ in gens)
    fbound = sum(k + 2 for k, _ in gens)
    degree = 0
    for k, a in gens:
        d = model.class_degree(a)
        if d is None:
            raise ValueError("shape check needs homogeneous classes")
        degree += 2 * k + d
    stable = stable_product_of_chern(model, gens)
    bad = []
    for key, c in stable.items():
        if weight(key) > bound:
            bad.append(f"key {key}: weight {weight(key)} exceeds {bound}")
        if len(key) > fbound:
            bad.append(f"key {key}: {len(key)} factors exceed {fbound}")
        if key_degree(model, key) != degree:
            bad.append(f"key {key}: degree {key_degree(model, key)} != {degree}")
    top = {key: c for key, c in stable.items() if weight(key) == bound}
    if all(len(a.items()) == 1 for _, a in gens):
        expected = Fraction(1)
        factors = []
        for k, a in gens:
            (c, ca), = a.items()
            expected *= ca * Fraction((-1) ** k, factorial(k + 1))
            factors.append((k + 1, c))
        sign, lead = monomial_from_factors(model, factors)
        want = {lead: expected * sign} if sign else {}
        if top != want:
            bad.append(f"top-weight part {top} != {want}")
    return bad
