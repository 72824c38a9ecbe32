"""Operator calculus over the Heisenberg algebra.

Every operator handled here is a sum of terms a_{n1} ... a_{nk}(tau_{k*} g)
for a class g on the surface.  Such a term is stored as ``indices -> g``:
the tensor is always a diagonal pushforward, so the class is enough to
recover it, and reorderings only ever multiply g by powers of e_X.  Stored
index tuples are sorted ascending, which is the normal order.  Arity 0 is
the scalar int(g) and is kept as a multiple of the point class.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import factorial

from .fock import FockVector, accumulate, apply_tensor_terms, create_basis, pad, unit_class, weight
from .surface import CohClass, SurfaceModel, format_rational


class OperatorSum:
    """Normal-ordered sum of indexed diagonal operators, ``indices -> CohClass``."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {k: v for k, v in (terms or {}).items() if v}

    def items(self):
        return self.terms.items()

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return isinstance(other, OperatorSum) and self.terms == other.terms

    def __add__(self, other):
        d = dict(self.terms)
        for k, v in other.terms.items():
            d[k] = d[k] + v if k in d else v
        return OperatorSum(d)

    def __sub__(self, other):
        return self + other * -1

    def __mul__(self, scalar):
        return OperatorSum({k: v * scalar for k, v in self.terms.items()})

    __rmul__ = __mul__

    def __repr__(self):
        return f"OperatorSum({self.terms})"


def _add_term(acc: dict, indices: tuple, g: CohClass, model: SurfaceModel) -> None:
    if not g:
        return
    if not indices:
        val = model.integrate(g)
        if not val:
            return
        g = CohClass.basis(model.point_class, val)
    if indices in acc:
        s = acc[indices] + g
        if s:
            acc[indices] = s
        else:
            del acc[indices]
    else:
        acc[indices] = g


def positive_load(indices) -> int:
    return sum(i for i in indices if i > 0)


def monomial_operator(indices, g: CohClass, model: SurfaceModel) -> OperatorSum:
    """a_{n1} ... a_{nk}(tau_{k*} g) in the order given, rewritten in normal order."""
    acc = {}
    for key, coef in normal_order(tuple(indices)).items():
        idx, e_pow = key
        cls = g
        for _ in range(e_pow):
            cls = model.mul(model.euler_class, cls)
        _add_term(acc, idx, cls * coef, model)
    return OperatorSum(acc)


# -- reordering -------------------------------------------------------------------------

@lru_cache(maxsize=None)
def normal_order(indices: tuple) -> dict:
    """Rewrite a_{n1} ... a_{nk}(tau_{k*} g) in ascending index order.

    Returns ``{(sorted_indices, e_power): coeff}``: each transposition of a
    descent (x, y) costs a correction -x * delta_{x+y} that drops both slots
    and multiplies g by e_X.
    """
    for j in range(len(indices) - 1):
        x, y = indices[j], indices[j + 1]
        if x > y:
            break
    else:
        return {(indices, 0): Fraction(1)}
    out = {}
    swapped = indices[:j] + (y, x) + indices[j + 2:]
    for key, c in normal_order(swapped).items():
        out[key] = out.get(key, 0) + c
    if x + y == 0:
        for (idx, e), c in normal_order(indices[:j] + indices[j + 2:]).items():
            key = (idx, e + 1)
            out[key] = out.get(key, 0) - x * c
    return {k: v for k, v in out.items() if v}


def reorder(model: SurfaceModel, indices, g: CohClass, j: int) -> OperatorSum:
    """Swap slots j, j+1 (1-based) of a_{n1} ... a_{nk}(tau_{k*} g).

    The result expresses the same operator with those two slots exchanged,
    plus the correction -n_j delta_{n_j + n_{j+1}} on the remaining slots with
    g replaced by e_X g.  The output is left in the swapped (not normal)
    order, so terms are returned as a list of ``(indices, class)``.
    """
    indices = tuple(indices)
    if not 1 <= j < len(indices):
        raise ValueError("swap position out of range")
    x, y = indices[j - 1], indices[j]
    terms = [(indices[:j - 1] + (y, x) + indices[j + 1:], g)]
    if x + y == 0:
        rest = indices[:j - 1] + indices[j + 1:]
        terms.append((rest, model.mul(model.euler_class, g) * (-x)))
    return terms


# -- applying operators ---------------------------------------------------------------

def apply_operator(model: SurfaceModel, op: OperatorSum, v: FockVector) -> FockVector:
    out = {}
    for indices, g in op.terms.items():
        res = apply_tensor_terms(model, indices, model.tau_terms(len(indices), g), v.terms)
        for m, c in res.items():
            accumulate(out, m, c)
    return FockVector(out)


def apply_to_vacuum(model: SurfaceModel, op: OperatorSum) -> FockVector:
    """Only pure-creation terms survive on |0>."""
    pure = OperatorSum({k: g for k, g in op.terms.items() if all(i < 0 for i in k)})
    return apply_operator(model, pure, FockVector.vacuum())


# -- commutators and derivatives --------------------------------------------------

def op_commutator(model: SurfaceModel, A: OperatorSum, B: OperatorSum) -> OperatorSum:
    """Super-bracket [A, B] by pairwise contraction of one index from each side."""
    acc = {}
    for ns, alpha in A.terms.items():
        for ms, beta in B.terms.items():
            ab = None
            for t, n in enumerate(ns):
                others = ns[:t] + ns[t + 1:]
                for j, m in enumerate(ms):
                    if n + m:
                        continue
                    if ab is None:
                        ab = model.mul(alpha, beta)
                        if not ab:
                            break
                    combined = ms[:j] + others + ms[j + 1:]
                    for (idx, e), c in normal_order(combined).items():
                        g = ab
                        for _ in range(e):
                            g = model.mul(model.euler_class, g)
                        _add_term(acc, idx, g * (-n * c), model)
                if ab is not None and not ab:
                    break
    return OperatorSum(acc)


def prune(op: OperatorSum, budget: int | None) -> OperatorSum:
    """Drop terms whose positive indices exceed ``budget``.

    Such terms kill every vector of weight at most ``budget`` and survive no
    sequence of brackets with creation operators of total weight ``budget``.
    """
    if budget is None:
        return op
    return OperatorSum({k: g for k, g in op.terms.items() if positive_load(k) <= budget})


def op_derivative(model: SurfaceModel, A: OperatorSum, budget: int) -> OperatorSum:
    """[d, A]: each slot is split into a normal-ordered pair, plus a K_X term.

    The splitting sum is infinite; terms whose positive load exceeds
    ``budget`` are discarded, which is exact for any later use at weight at
    most ``budget``.
    """
    acc = {}
    K = model.canonical_class
    for ns, g in A.terms.items():
        top = max([budget] + [abs(i) for i in ns]) + 1
        for j, n in enumerate(ns):
            head, tail = ns[:j], ns[j + 1:]
            # splittings m1 + m2 = n, both nonzero, as sorted pairs (p, q)
            for p in range(-(top + abs(n)), n // 2 + 1):
                q = n - p
                if p == 0 or q == 0:
                    continue
                mult = 1 if p == q else 2
                coef = Fraction(-n, 2) * mult
                for (idx, e), c in normal_order(head + (p, q) + tail).items():
                    if positive_load(idx) > budget:
                        continue
                    cls = g
                    for _ in range(e):
                        cls = model.mul(model.euler_class, cls)
                    _add_term(acc, idx, cls * (coef * c), model)
            kcoef = -Fraction(n * (abs(n) - 1), 2)
            if kcoef and positive_load(ns) <= budget:
                _add_term(acc, ns, model.mul(K, g) * kcoef, model)
    return OperatorSum(acc)


def derivative_power(model: SurfaceModel, A: OperatorSum, k: int, budget: int) -> OperatorSum:
    for _ in range(k):
        A = op_derivative(model, A, budget)
    return A


def single(model: SurfaceModel, n: int, a: CohClass) -> OperatorSum:
    """a_n(a) as an operator sum."""
    acc = {}
    _add_term(acc, (n,), a, model)
    return OperatorSum(acc)


def virasoro_operator(model: SurfaceModel, n: int, a: CohClass, bound: int) -> OperatorSum:
    """L_n(a) = -1/2 sum_m :a_m a_{n-m}:(tau_{2*} a), restricted to |m| <= bound."""
    acc = {}
    for m in range(-bound, bound + 1):
        p, q = m, n - m
        if p == 0 or q == 0 or p > q:
            continue
        mult = 1 if p == q else 2
        _add_term(acc, (p, q), a * (Fraction(-1, 2) * mult), model)
    return OperatorSum(acc)


def virasoro_apply(model: SurfaceModel, n: int, a: CohClass, v: FockVector) -> FockVector:
    """L_n(a) v, truncated to the splittings that can act on v."""
    bound = v.max_weight() + abs(n)
    return apply_operator(model, virasoro_operator(model, n, a, bound), v)


def heisenberg_derivative(model: SurfaceModel, n: int, a: CohClass, bound: int) -> OperatorSum:
    """a_n'(a) = n L_n(a) - n(|n|-1)/2 a_n(K a), splittings restricted to |m| <= bound."""
    op = virasoro_operator(model, n, a, bound) * n
    kc = Fraction(n * (abs(n) - 1), 2)
    if kc:
        op = op - single(model, n, model.mul(model.canonical_class, a)) * kc
    return op


def boundary_apply(model: SurfaceModel, v: FockVector) -> FockVector:
    """The boundary operator d, by the Leibniz rule over creation factors."""
    out = {}
    deriv_cache = {}
    for mono, coef in v.terms.items():
        for i, (r, c) in enumerate(mono):
            suffix = {mono[i + 1:]: Fraction(1)}
            w = weight(mono[i + 1:])
            key = (r, c, w)
            if key not in deriv_cache:
                deriv_cache[key] = heisenberg_derivative(model, -r, CohClass.basis(c), w + r)
            cur = apply_operator(model, deriv_cache[key], FockVector(suffix)).terms
            for rr, cc in reversed(mono[:i]):
                cur = create_basis(model, rr, cc, cur)
                if not cur:
                    break
            for m, val in cur.items():
                accumulate(out, m, coef * val)
    return FockVector(out)


# -- Chern character operators ------------------------------------------------------------

def _chern_memo(model: SurfaceModel) -> dict:
    return model._memo.setdefault("chern_commutator", {})


def chern_commutator_basis(model: SurfaceModel, k: int, c: int, r: int, d: int,
                           budget: int) -> OperatorSum:
    """[G_k(b_c), a_{-r}(b_d)], keeping terms of positive load at most ``budget``."""
    memo = _chern_memo(model)
    key = (k, c, r, d, budget)
    if key in memo:
        return memo[key]
    if r == 1:
        start = single(model, -1, model.mul(CohClass.basis(c), CohClass.basis(d)))
        res = derivative_power(model, start, k, budget) * Fraction(1, factorial(k))
    else:
        n = r - 1
        beta = CohClass.basis(d)
        first = chern_commutator_basis(model, k, c, 1, model.unit, budget + n)
        first = op_derivative(model, first, budget + n)
        part1 = op_commutator(model, first, single(model, -n, beta))
        inner = chern_commutator_basis(model, k, c, n, d, budget + 1)
        bound = max((abs(i) for idx in inner.terms for i in idx), default=0)
        dprime = heisenberg_derivative(model, -1, CohClass.basis(model.unit), bound + 1)
        part2 = op_commutator(model, dprime, inner)
        res = prune(part1 + part2, budget) * Fraction(-1, n)
    memo[key] = res
    return res


def chern_commutator(model: SurfaceModel, k: int, alpha: CohClass, r: int, beta: CohClass,
                     budget: int | None = None) -> OperatorSum:
    """[G_k(alpha), a_{-r}(beta)] as an operator sum.

    Without a budget, terms are kept up to positive load r + k + 1, which
    includes every term the shape bound allows.
    """
    if r < 1:
        raise ValueError("r must be positive")
    if budget is None:
        budget = r + k + 1
    out = OperatorSum()
    for c, ca in alpha.items():
        for d, cb in beta.items():
            out = out + chern_commutator_basis(model, k, c, r, d, budget) * (ca * cb)
    return out


def nested_vacuum(model: SurfaceModel, k: int, c: int, factors: tuple) -> FockVector:
    """[...[G_k(b_c), a_{-r1}(b_d1)], ..., a_{-ri}(b_di)] |0> for factors ((r1, d1), ...)."""
    memo = model._memo.setdefault("nested_vacuum", {})
    key = (k, c, factors)
    if key in memo:
        return memo[key]
    remaining = sum(r for r, _ in factors[1:])
    r1, d1 = factors[0]
    op = chern_commutator_basis(model, k, c, r1, d1, remaining)
    for i, (r, d) in enumerate(factors[1:], start=1):
        remaining -= r
        op = prune(op_commutator(model, op, single(model, -r, CohClass.basis(d))), remaining)
        if not op:
            break
    res = apply_to_vacuum(model, op)
    memo[key] = res
    return res


def _chern_apply_basis_mono(model: SurfaceModel, k: int, c: int, mono: tuple) -> dict:
    memo = model._memo.setdefault("chern_apply", {})
    key = (k, c, mono)
    if key in memo:
        return memo[key]
    s = model.parity(c)
    par = [model.parity(d) for _, d in mono]
    out = {}
    b = len(mono)
    seen = {}
    for size in range(1, min(k + 1, b) + 1):
        for pos in combinations(range(b), size):
            chosen = tuple(mono[p] for p in pos)
            rest_pos = [p for p in range(b) if p not in pos]
            exp = 0
            if s:
                exp += sum(par[p] for p in rest_pos)
            for p in pos:
                if par[p]:
                    exp += sum(par[l] for l in rest_pos if l > p)
            sign = -1 if exp & 1 else 1
            rest = tuple(mono[p] for p in rest_pos)
            tag = (chosen, rest)
            seen[tag] = seen.get(tag, 0) + sign
    for (chosen, rest), mult in seen.items():
        if not mult:
            continue
        cur = nested_vacuum(model, k, c, chosen).terms
        for r, d in reversed(rest):
            cur = create_basis(model, r, d, cur)
            if not cur:
                break
        for m, val in cur.items():
            accumulate(out, m, mult * val)
    memo[key] = out
    return out


def chern_apply(model: SurfaceModel, k: int, alpha: CohClass, v: FockVector) -> FockVector:
    """Cup product with G_k(alpha, n) on every weight-n component of v."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    out = {}
    for c, ca in alpha.items():
        for mono, coef in v.terms.items():
            for m, val in _chern_apply_basis_mono(model, k, c, mono).items():
                accumulate(out, m, ca * coef * val)
    return FockVector(out)


def chern_class(model: SurfaceModel, k: int, alpha: CohClass, n: int) -> FockVector:
    """G_k(alpha, n) as a class on X^[n]."""
    return chern_apply(model, k, alpha, unit_class(model, n))


def b_class(model: SurfaceModel, i: int, alpha: CohClass, n: int) -> FockVector:
    """B_i(alpha, n) = 1_{-(n-i-1)} a_{-(i+1)}(alpha)|0>, zero for i >= n."""
    if i >= n or i < 0:
        return FockVector()
    base = FockVector(create_basis_class(model, i + 1, alpha))
    return pad(model, base, n)


def create_basis_class(model: SurfaceModel, r: int, alpha: CohClass) -> dict:
    out = {}
    for c, ca in alpha.items():
        for m, v in create_basis(model, r, c, {(): Fraction(1)}).items():
            accumulate(out, m, ca * v)
    return out


# -- shape checks and serialization -----------------------------------------------

def shape_violations(model: SurfaceModel, op: OperatorSum, k: int, r: int,
                     alpha: CohClass, beta: CohClass) -> list:
    """Terms of [G_k(alpha), a_{-r}(beta)] breaking the index-sum or arity/degree law.

    A term a_{m1} ... a_{mj}(tau g) is admissible when the indices sum to -r and
    g lies in degree |alpha beta| + 2t with j = k + 1 - t and 0 <= t <= 2.
    """
    ab = model.mul(alpha, beta)
    base = model.class_degree(ab)
    bad = []
    for idx, g in op.terms.items():
        if sum(idx) != -r:
            bad.append((idx, "index sum"))
            continue
        if base is None:
            continue
        if not idx:
            # a scalar: int(g) with g the point multiple; compare degree via arity
            t = k + 1
            if t > 2:
                bad.append((idx, "too many canonical-class absorptions"))
            continue
        deg = model.class_degree(g)
        if deg is None:
            bad.append((idx, "inhomogeneous class"))
            continue
        t = (deg - base) // 2
        if (deg - base) % 2 or not 0 <= t <= 2 or len(idx) != k + 1 - t:
            bad.append((idx, "arity/degree"))
    return bad


def operator_to_json(model: SurfaceModel, op: OperatorSum) -> list:
    names = [b.name for b in model.basis]
    rows = []
    for idx, g in sorted(op.terms.items()):
        rows.append({"indices": list(idx),
                     "class": {names[i]: format_rational(c) for i, c in g.items()},
                     "coeff": "1"})
    return rows
