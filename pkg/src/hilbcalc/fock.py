"""The Fock space H = sum_n H*(X^[n]) over canonical Heisenberg monomials.

A monomial is a tuple of creation factors ``(r, c)`` standing for
``a_{-r}(b_c)``, sorted by ``(r, c)`` and applied to the vacuum.  Even factors
may repeat; a repeated odd factor is the zero vector and is never stored.
All Koszul signs are produced by :func:`insert`, the single insertion routine.
"""
from __future__ import annotations

from bisect import bisect_left, bisect_right
from fractions import Fraction
from math import comb, factorial

from .surface import CohClass, SurfaceModel, TensorClass, format_rational, parse_rational

VACUUM = ()


class FockVector:
    """Sparse rational combination of canonical monomials.  Treated as immutable."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        if terms is None:
            self.terms = {}
        else:
            self.terms = {m: Fraction(c) for m, c in dict(terms).items() if c}

    @classmethod
    def vacuum(cls) -> "FockVector":
        return cls({VACUUM: 1})

    @classmethod
    def monomial(cls, mono, coeff=1) -> "FockVector":
        return cls({tuple(mono): coeff})

    def items(self):
        return self.terms.items()

    def coeff(self, mono) -> Fraction:
        return self.terms.get(tuple(mono), Fraction(0))

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        return isinstance(other, FockVector) and self.terms == other.terms

    def __add__(self, other: "FockVector") -> "FockVector":
        d = dict(self.terms)
        for m, c in other.terms.items():
            d[m] = d.get(m, 0) + c
        return FockVector(d)

    def __sub__(self, other: "FockVector") -> "FockVector":
        d = dict(self.terms)
        for m, c in other.terms.items():
            d[m] = d.get(m, 0) - c
        return FockVector(d)

    def __neg__(self):
        return self * -1

    def __mul__(self, scalar) -> "FockVector":
        scalar = Fraction(scalar)
        if not scalar:
            return FockVector()
        return FockVector({m: c * scalar for m, c in self.terms.items()})

    __rmul__ = __mul__

    def weights(self) -> set:
        return {weight(m) for m in self.terms}

    def max_weight(self) -> int:
        return max((weight(m) for m in self.terms), default=0)

    def __repr__(self):
        if not self.terms:
            return "FockVector(0)"
        parts = []
        for m, c in sorted(self.terms.items()):
            ops = "".join(f"a-{r}(b{i})" for r, i in m)
            parts.append(f"{c}*{ops or '1'}|0>")
        return "FockVector(" + " + ".join(parts) + ")"


def accumulate(acc: dict, mono, coeff) -> None:
    v = acc.get(mono, 0) + coeff
    if v:
        acc[mono] = v
    else:
        acc.pop(mono, None)


# -- monomial bookkeeping --------------------------------------------------------

def weight(mono) -> int:
    return sum(r for r, _ in mono)


def mono_degree(model: SurfaceModel, mono) -> int:
    return sum(2 * (r - 1) + model.degree(c) for r, c in mono)


def mono_parity(model: SurfaceModel, mono) -> int:
    return sum(model.degree(c) for _, c in mono) & 1


def vector_degrees(model: SurfaceModel, v: FockVector) -> set:
    return {mono_degree(model, m) for m in v.terms}


def insert(model: SurfaceModel, mono: tuple, r: int, c: int):
    """Left-multiply the monomial by a_{-r}(b_c).

    Returns ``(sign, new_mono)`` or ``None`` when an odd factor repeats.
    """
    f = (r, c)
    if model.parity(c):
        pos = bisect_left(mono, f)
        if pos < len(mono) and mono[pos] == f:
            return None
        odd = 0
        for _, cc in mono[:pos]:
            odd += model.basis[cc].degree
        sign = -1 if odd & 1 else 1
    else:
        pos = bisect_right(mono, f)
        sign = 1
    return sign, mono[:pos] + (f,) + mono[pos:]


def monomial_from_factors(model: SurfaceModel, factors) -> tuple:
    """Canonicalize a product a_{-r1}(c1) a_{-r2}(c2) ... |0> given in that order.

    Returns ``(sign, mono)``; sign 0 means the product vanishes.
    """
    mono = VACUUM
    sign = 1
    for r, c in reversed(list(factors)):
        res = insert(model, mono, r, c)
        if res is None:
            return 0, None
        s, mono = res
        sign *= s
    return sign, mono


# -- Heisenberg actions ---------------------------------------------------------------

def create_basis(model: SurfaceModel, r: int, c: int, terms: dict) -> dict:
    out = {}
    for mono, coef in terms.items():
        res = insert(model, mono, r, c)
        if res is not None:
            accumulate(out, res[1], res[0] * coef)
    return out


def annihilate_basis(model: SurfaceModel, r: int, x: int, terms: dict) -> dict:
    """a_r(b_x) with r > 0 applied to a sparse dict of monomials."""
    P = model.pairing_matrix()[x]
    px = model.parity(x)
    out = {}
    for mono, coef in terms.items():
        odd = 0
        i = 0
        n = len(mono)
        while i < n:
            s, c = mono[i]
            j = i + 1
            while j < n and mono[j] == mono[i]:
                j += 1
            if s == r and P[c]:
                val = -r * P[c] * (j - i) * coef
                if px and odd & 1:
                    val = -val
                accumulate(out, mono[:i] + mono[i + 1:], val)
            odd += model.basis[c].degree * (j - i)
            i = j
    return out


def heisenberg_basis(model: SurfaceModel, n: int, x: int, terms: dict) -> dict:
    """a_n(b_x) for any integer n (a_0 acts as zero)."""
    if n < 0:
        return create_basis(model, -n, x, terms)
    if n > 0:
        return annihilate_basis(model, n, x, terms)
    return {}


def _linear(model, n, a: CohClass, v: FockVector) -> FockVector:
    out = {}
    for x, cx in a.items():
        for m, c in heisenberg_basis(model, n, x, v.terms).items():
            accumulate(out, m, cx * c)
    return FockVector(out)


def create(model: SurfaceModel, r: int, a: CohClass, v: FockVector) -> FockVector:
    """a_{-r}(a) v."""
    if r < 1:
        raise ValueError("creation index must be positive")
    return _linear(model, -r, a, v)


def annihilate(model: SurfaceModel, r: int, a: CohClass, v: FockVector) -> FockVector:
    """a_r(a) v."""
    if r < 1:
        raise ValueError("annihilation index must be positive")
    return _linear(model, r, a, v)


def heisenberg(model: SurfaceModel, n: int, a: CohClass, v: FockVector) -> FockVector:
    """a_n(a) v for any integer n."""
    return _linear(model, n, a, v)


def apply_tensor_terms(model: SurfaceModel, ms, tensor_terms: dict, terms: dict) -> dict:
    """sum_j a_{m1}(t_j1) ... a_{mk}(t_jk) applied to ``terms`` (rightmost first)."""
    out = {}
    if not ms:
        scalar = tensor_terms.get((), 0)
        if scalar:
            for m, c in terms.items():
                accumulate(out, m, scalar * c)
        return out
    # the annihilators that act before any creation need that much weight
    need = 0
    for m in reversed(ms):
        if m < 0:
            break
        need += m
    if need:
        terms = {m: c for m, c in terms.items() if weight(m) >= need}
        if not terms:
            return out
    for key, coef in tensor_terms.items():
        cur = terms
        for m, x in zip(reversed(ms), reversed(key)):
            cur = heisenberg_basis(model, m, x, cur)
            if not cur:
                break
        for mono, c in cur.items():
            accumulate(out, mono, coef * c)
    return out


def apply_indexed_monomial(model: SurfaceModel, ms, T: TensorClass, v: FockVector) -> FockVector:
    """a_{m1} ... a_{mk}(T) v by Kunneth expansion of T."""
    ms = tuple(ms)
    if len(ms) != T.arity:
        raise ValueError(f"{len(ms)} indices for a tensor of arity {T.arity}")
    if any(m == 0 for m in ms):
        raise ValueError("Heisenberg indices must be nonzero")
    return FockVector(apply_tensor_terms(model, ms, T.terms, v.terms))


# -- form, padding, dimensions --------------------------------------------------------

def pairing(model: SurfaceModel, u: FockVector, v: FockVector) -> Fraction:
    """The super-symmetric form with (|0>, |0>) = 1.

    Each creation factor of ``u`` is moved across as its adjoint
    a_{-r}(c)^dagger = (-1)^r a_r(c), with sign (-1)^{|c| |rest of u|}.
    """
    total = Fraction(0)
    for mono, cu in u.terms.items():
        sign = 1
        cur = v.terms
        rest_par = mono_parity(model, mono)
        for r, c in mono:
            pc = model.parity(c)
            rest_par ^= pc
            if pc and rest_par:
                sign = -sign
            if r & 1:
                sign = -sign
            cur = annihilate_basis(model, r, c, cur)
            if not cur:
                break
        total += sign * cu * cur.get(VACUUM, 0)
    return total


def padding_monomial(model: SurfaceModel, k: int) -> tuple:
    return ((1, model.unit),) * k


def pad(model: SurfaceModel, v: FockVector, n: int) -> FockVector:
    """Multiply each weight-w term by 1_{-(n-w)} = a_{-1}(1_X)^{n-w}/(n-w)!."""
    u = model.unit
    out = {}
    for mono, c in v.terms.items():
        k = n - weight(mono)
        if k < 0:
            continue
        pos = bisect_right(mono, (1, u))
        accumulate(out, mono[:pos] + ((1, u),) * k + mono[pos:], c / factorial(k))
    return FockVector(out)


def unit_class(model: SurfaceModel, n: int) -> FockVector:
    """The fundamental class 1_{X^[n]}."""
    return pad(model, FockVector.vacuum(), n)


def letters(model: SurfaceModel, n: int) -> list:
    return [(r, c) for r in range(1, n + 1) for c in range(model.rank)]


def enumerate_monomials(model: SurfaceModel, n: int):
    """Yield every canonical monomial of weight n, in canonical order."""
    lets = letters(model, n)

    def rec(start, remaining, prefix):
        if remaining == 0:
            yield tuple(prefix)
            return
        for idx in range(start, len(lets)):
            r, c = lets[idx]
            if r > remaining:
                break
            prefix.append((r, c))
            nxt = idx + 1 if model.parity(c) else idx
            yield from rec(nxt, remaining - r, prefix)
            prefix.pop()

    yield from rec(0, n, [])


def dimension_table(model: SurfaceModel, nmax: int) -> list:
    """table[n][i] = number of canonical monomials of weight n and degree i."""
    table = [[0] * (4 * nmax + 1) for _ in range(nmax + 1)]
    table[0][0] = 1
    for r in range(1, nmax + 1):
        for c in range(model.rank):
            deg = 2 * (r - 1) + model.degree(c)
            if model.parity(c):
                for w in range(nmax, r - 1, -1):
                    for i in range(4 * nmax, deg - 1, -1):
                        table[w][i] += table[w - r][i - deg]
            else:
                for w in range(r, nmax + 1):
                    for i in range(deg, 4 * nmax + 1):
                        table[w][i] += table[w - r][i - deg]
    return table


def graded_dimension(model: SurfaceModel, n: int, i: int) -> int:
    if n < 0 or i < 0 or i > 4 * n:
        return 0
    return dimension_table(model, n)[n][i]


def betti_numbers(model: SurfaceModel) -> list:
    b = [0] * 5
    for x in model.basis:
        b[x.degree] += 1
    return b


def gottsche_series(model: SurfaceModel, nmax: int) -> list:
    """Coefficients [n][i] of prod_{m>=1} prod_d (1 - (-1)^d t^{2m-2+d} q^m)^{-(-1)^d b_d}."""
    b = betti_numbers(model)
    D = 4 * nmax
    series = [[Fraction(0)] * (D + 1) for _ in range(nmax + 1)]
    series[0][0] = Fraction(1)
    for m in range(1, nmax + 1):
        for d in range(5):
            if not b[d]:
                continue
            sd = (-1) ** d
            e = -sd * b[d]
            tdeg = 2 * m - 2 + d
            # (1 + x)^e with x = -sd t^tdeg q^m, generalized binomial series
            factor = []
            k = 0
            while k * m <= nmax:
                coef = Fraction(1)
                for j in range(k):
                    coef = coef * (e - j) / (j + 1)
                factor.append(coef * (-sd) ** k)
                k += 1
            new = [[Fraction(0)] * (D + 1) for _ in range(nmax + 1)]
            for w in range(nmax + 1):
                for i in range(D + 1):
                    s = series[w][i]
                    if not s:
                        continue
                    for k, coef in enumerate(factor):
                        ww, ii = w + k * m, i + k * tdeg
                        if ww > nmax or ii > D:
                            break
                        if coef:
                            new[ww][ii] += s * coef
            series = new
    return [[int(x) for x in row] for row in series]


# -- serialization ------------------------------------------------------------------------

def vector_to_json(model: SurfaceModel, v: FockVector) -> list:
    names = [b.name for b in model.basis]
    return [{"factors": [{"r": r, "c": names[c]} for r, c in m], "coeff": format_rational(coef)}
            for m, coef in sorted(v.terms.items())]


def vector_from_json(model: SurfaceModel, doc: list) -> FockVector:
    """Factors may be given in any order; they are canonicalized with Koszul signs."""
    out = {}
    for entry in doc:
        factors = []
        for f in entry["factors"]:
            r = int(f["r"])
            if r < 1:
                raise ValueError(f"creation index must be positive, got {r}")
            factors.append((r, model.index(f["c"]) if isinstance(f["c"], str) else int(f["c"])))
        sign, mono = monomial_from_factors(model, factors)
        if sign:
            accumulate(out, mono, sign * parse_rational(str(entry.get("coeff", "1"))))
    return FockVector(out)


def binomial(n: int, k: int) -> int:
    return comb(n, k) if 0 <= k <= n else 0
