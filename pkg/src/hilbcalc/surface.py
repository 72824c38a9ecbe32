"""Finite ring models of the cohomology H*(X) of a surface.

A model is a graded super-commutative algebra with a distinguished basis,
a linear integral supported in degree 4, a canonical class, an Euler class
and a point class.  Everything is exact over the rationals.

Tensors on X^k are sparse maps from k-tuples of basis indices to rationals.
The Koszul convention for pairings on X^k is

    <a_1 x ... x a_k, b_1 x ... x b_k> = (-1)^{sum_{i<j} |b_i||a_j|} prod int(a_i b_i)

and the diagonal pushforwards are built so that this pairing against
``tau_push(k, a)`` reproduces ``int(a b_1 ... b_k)``.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from itertools import product
from pathlib import Path
from typing import Iterable, Mapping

from .linalg import invert

BUILTIN_MODELS = ("P2", "P1xP1", "K3like", "Abelianlike")


class ModelError(ValueError):
    """Schema or axiom violation in a surface model."""


def parse_rational(text) -> Fraction:
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise ModelError(f"rational must be a 'p/q' string, got {text!r}")
    if "." in text or "e" in text.lower():
        raise ModelError(f"rational must be decimal-free, got {text!r}")
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ModelError(f"bad rational {text!r}") from exc


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class BasisClass:
    index: int
    name: str
    degree: int

    @property
    def parity(self) -> int:
        return self.degree % 2


class CohClass:
    """A class in H*(X): sparse map basis index -> rational, zeros dropped."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, Fraction] | Iterable = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        clean = {}
        for i, c in items:
            c = Fraction(c)
            if c:
                clean[i] = clean.get(i, 0) + c
        self._terms = tuple(sorted((i, c) for i, c in clean.items() if c))
        self._hash = None

    @classmethod
    def basis(cls, i: int, coeff=1) -> "CohClass":
        return cls({i: Fraction(coeff)})

    def items(self):
        return self._terms

    def coeff(self, i: int) -> Fraction:
        for j, c in self._terms:
            if j == i:
                return c
        return Fraction(0)

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        return isinstance(other, CohClass) and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._terms)
        return self._hash

    def __add__(self, other: "CohClass") -> "CohClass":
        d = dict(self._terms)
        for i, c in other._terms:
            d[i] = d.get(i, 0) + c
        return CohClass(d)

    def __sub__(self, other: "CohClass") -> "CohClass":
        return self + other * -1

    def __neg__(self):
        return self * -1

    def __mul__(self, scalar) -> "CohClass":
        scalar = Fraction(scalar)
        return CohClass((i, c * scalar) for i, c in self._terms)

    __rmul__ = __mul__

    def __repr__(self):
        if not self._terms:
            return "CohClass(0)"
        return "CohClass(" + " + ".join(f"{c}*b{i}" for i, c in self._terms) + ")"


class TensorClass:
    """Sparse element of H*(X^k); arity 0 is a bare scalar."""

    __slots__ = ("arity", "terms")

    def __init__(self, arity: int, terms: Mapping[tuple, Fraction] | None = None):
        self.arity = arity
        self.terms = {}
        for key, c in (terms or {}).items():
            if len(key) != arity:
                raise ValueError(f"tensor key {key} does not have arity {arity}")
            if c:
                self.terms[key] = self.terms.get(key, 0) + Fraction(c)
        self.terms = {k: c for k, c in self.terms.items() if c}

    @classmethod
    def scalar(cls, value) -> "TensorClass":
        return cls(0, {(): Fraction(value)})

    @property
    def value(self) -> Fraction:
        """The scalar of an arity-0 tensor."""
        if self.arity:
            raise ValueError("only arity-0 tensors are scalars")
        return self.terms.get((), Fraction(0))

    def __eq__(self, other):
        return (isinstance(other, TensorClass) and self.arity == other.arity
                and self.terms == other.terms)

    def __add__(self, other: "TensorClass") -> "TensorClass":
        if self.arity != other.arity:
            raise ValueError("arity mismatch")
        d = dict(self.terms)
        for k, c in other.terms.items():
            d[k] = d.get(k, 0) + c
        return TensorClass(self.arity, d)

    def __mul__(self, scalar) -> "TensorClass":
        return TensorClass(self.arity, {k: c * scalar for k, c in self.terms.items()})

    __rmul__ = __mul__

    def __repr__(self):
        return f"TensorClass({self.arity}, {self.terms})"


@dataclass(frozen=True, eq=False)
class SurfaceModel:
    name: str
    basis: tuple
    mult: dict           # (i, j) -> {k: Fraction}
    integral: dict       # i -> Fraction, degree-4 basis classes only
    canonical_class: CohClass
    euler_class: CohClass
    point_class: int
    _memo: dict = field(default_factory=dict, repr=False, compare=False)

    # -- basic data ---------------------------------------------------------

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def unit(self) -> int:
        return next(b.index for b in self.basis if b.degree == 0)

    def degree(self, i: int) -> int:
        return self.basis[i].degree

    def parity(self, i: int) -> int:
        return self.basis[i].degree & 1

    def index(self, name: str) -> int:
        for b in self.basis:
            if b.name == name:
                return b.index
        raise KeyError(f"no basis class named {name!r} in model {self.name}")

    def cls(self, spec) -> CohClass:
        """Coerce a basis name, index, mapping or CohClass into a CohClass."""
        if isinstance(spec, CohClass):
            return spec
        if isinstance(spec, str):
            return CohClass.basis(self.index(spec))
        if isinstance(spec, int):
            return CohClass.basis(spec)
        if isinstance(spec, Mapping):
            return CohClass({(self.index(k) if isinstance(k, str) else k): parse_rational(v)
                             if isinstance(v, str) else Fraction(v) for k, v in spec.items()})
        raise TypeError(f"cannot interpret {spec!r} as a cohomology class")

    def class_degree(self, a: CohClass) -> int | None:
        """Degree of a homogeneous class, None for inhomogeneous or zero."""
        degs = {self.degree(i) for i, _ in a.items()}
        return degs.pop() if len(degs) == 1 else None

    def fingerprint(self) -> str:
        if "fingerprint" not in self._memo:
            blob = json.dumps(model_to_json(self), sort_keys=True, separators=(",", ":"))
            self._memo["fingerprint"] = hashlib.sha256(blob.encode()).hexdigest()
        return self._memo["fingerprint"]

    # -- ring structure -----------------------------------------------------

    def mul_basis(self, i: int, j: int) -> dict:
        return self.mult.get((i, j), {})

    def mul(self, a: CohClass, b: CohClass) -> CohClass:
        out = {}
        for i, ca in a.items():
            for j, cb in b.items():
                for k, c in self.mult.get((i, j), {}).items():
                    out[k] = out.get(k, 0) + ca * cb * c
        return CohClass(out)

    def integrate(self, a: CohClass) -> Fraction:
        return sum((c * self.integral.get(i, 0) for i, c in a.items()), Fraction(0))

    def pairing_matrix(self) -> list:
        """P[i][j] = int(b_i b_j)."""
        if "P" not in self._memo:
            b = self.rank
            P = [[Fraction(0)] * b for _ in range(b)]
            for (i, j), prod_ in self.mult.items():
                P[i][j] = sum((c * self.integral.get(k, 0) for k, c in prod_.items()), Fraction(0))
            self._memo["P"] = P
        return self._memo["P"]

    def pairing_inverse(self) -> list:
        if "Pinv" not in self._memo:
            self._memo["Pinv"] = invert(self.pairing_matrix())
        return self._memo["Pinv"]

    def tensor_sign(self, key: tuple, slot: int, p: int) -> int:
        """(-1)^{p * sum of parities of key entries after ``slot`` (0-based)}."""
        if not p:
            return 1
        s = sum(self.basis[i].degree for i in key[slot + 1:]) & 1
        return -1 if s else 1

    # -- diagonal pushforwards ---------------------------------------------

    def _tau2_basis(self, c: int) -> dict:
        """tau_{2*}(b_c) as {(i, j): coeff}: T = M^c P^{-1} with M^c_{il} = [b_i](b_c b_l)."""
        memo = self._memo.setdefault("tau2", {})
        if c not in memo:
            b = self.rank
            Pinv = self.pairing_inverse()
            M = [[Fraction(0)] * b for _ in range(b)]
            for l in range(b):
                for i, coef in self.mul_basis(c, l).items():
                    M[i][l] += coef
            out = {}
            for i in range(b):
                row = M[i]
                for j in range(b):
                    v = sum((row[l] * Pinv[l][j] for l in range(b) if row[l]), Fraction(0))
                    if v:
                        out[(i, j)] = v
            memo[c] = out
        return memo[c]

    def tau_basis(self, k: int, c: int) -> dict:
        """tau_{k*}(b_c) for k >= 1 as a dict of k-tuples; cached."""
        memo = self._memo.setdefault("tau", {})
        key = (k, c)
        if key not in memo:
            if k == 1:
                memo[key] = {(c,): Fraction(1)}
            elif k == 2:
                memo[key] = self._tau2_basis(c)
            else:
                out = {}
                for t, coef in self.tau_basis(k - 1, c).items():
                    for (x, y), c2 in self._tau2_basis(t[-1]).items():
                        nk = t[:-1] + (x, y)
                        out[nk] = out.get(nk, 0) + coef * c2
                memo[key] = {kk: v for kk, v in out.items() if v}
        return memo[key]

    def tau_terms(self, k: int, a: CohClass) -> dict:
        """tau_{k*}(a) as a plain dict; k = 0 gives {(): int a}."""
        if k == 0:
            v = self.integrate(a)
            return {(): v} if v else {}
        out = {}
        for c, coef in a.items():
            for t, v in self.tau_basis(k, c).items():
                out[t] = out.get(t, 0) + coef * v
        return {t: v for t, v in out.items() if v}


# -- module-level operations --------------------------------------------------

def mul(model: SurfaceModel, a: CohClass, b: CohClass) -> CohClass:
    return model.mul(a, b)


def integrate(model: SurfaceModel, a: CohClass) -> Fraction:
    return model.integrate(a)


def tau_push(model: SurfaceModel, k: int, a: CohClass) -> TensorClass:
    if k < 0:
        raise ValueError("k must be nonnegative")
    return TensorClass(k, model.tau_terms(k, a))


def tensor_absorb(model: SurfaceModel, T: TensorClass, j: int, b: CohClass) -> TensorClass:
    """Multiply slot ``j`` (1-based) by ``b`` on the right, with the Koszul sign
    of ``b`` passing the later slots."""
    if not 1 <= j <= T.arity:
        raise IndexError(f"slot {j} out of range for arity {T.arity}")
    out = {}
    for key, coef in T.terms.items():
        for bi, cb in b.items():
            sign = model.tensor_sign(key, j - 1, model.parity(bi))
            for k, c in model.mul_basis(key[j - 1], bi).items():
                nk = key[:j - 1] + (k,) + key[j:]
                out[nk] = out.get(nk, 0) + sign * coef * cb * c
    return TensorClass(T.arity, out)


def tensor_integrate_slot(model: SurfaceModel, T: TensorClass, j: int, b: CohClass) -> TensorClass:
    """Absorb ``b`` into slot ``j`` and integrate that slot out (arity drops by one)."""
    absorbed = tensor_absorb(model, T, j, b)
    out = {}
    for key, coef in absorbed.terms.items():
        v = model.integral.get(key[j - 1], 0)
        if v:
            nk = key[:j - 1] + key[j:]
            out[nk] = out.get(nk, 0) + coef * v
    return TensorClass(T.arity - 1, out)


def tensor_refine(model: SurfaceModel, T: TensorClass, j: int, u: int) -> TensorClass:
    """Replace slot ``j`` by tau_{u*} of its entry (arity grows by u - 1)."""
    if not 1 <= j <= T.arity:
        raise IndexError(f"slot {j} out of range for arity {T.arity}")
    if u < 1:
        raise ValueError("refinement order must be positive")
    out = {}
    for key, coef in T.terms.items():
        for sub, c in model.tau_basis(u, key[j - 1]).items():
            nk = key[:j - 1] + sub + key[j:]
            out[nk] = out.get(nk, 0) + coef * c
    return TensorClass(T.arity + u - 1, out)


def tensor_contract(model: SurfaceModel, T: TensorClass, j: int, j2: int) -> TensorClass:
    """Multiply slots ``j`` and ``j2`` together into slot ``min(j, j2)``.

    Slot ``j2`` is first moved next to slot ``j`` with its Koszul sign.
    """
    if T.arity < 2 or j == j2 or not (1 <= j <= T.arity and 1 <= j2 <= T.arity):
        raise IndexError(f"bad contraction slots ({j}, {j2}) for arity {T.arity}")
    lo, hi = min(j, j2), max(j, j2)
    out = {}
    for key, coef in T.terms.items():
        # move slot hi leftwards to sit right after lo
        between = sum(model.degree(i) for i in key[lo:hi - 1])
        sign = -1 if (between * model.degree(key[hi - 1])) & 1 else 1
        for k, c in model.mul_basis(key[lo - 1], key[hi - 1]).items():
            nk = key[:lo - 1] + (k,) + key[lo:hi - 1] + key[hi:]
            out[nk] = out.get(nk, 0) + sign * coef * c
    return TensorClass(T.arity - 1, out)


def tensor_pairing(model: SurfaceModel, T: TensorClass, key: tuple) -> Fraction:
    """<T, b_{i1} x ... x b_{ik}> on X^k with the module's Koszul convention."""
    P = model.pairing_matrix()
    total = Fraction(0)
    for a, coef in T.terms.items():
        v = coef
        for i in range(len(a)):
            v *= P[a[i]][key[i]]
            if not v:
                break
        if not v:
            continue
        e = 0
        for i in range(len(a)):
            for jj in range(i + 1, len(a)):
                e += model.degree(key[i]) * model.degree(a[jj])
        total += -v if e & 1 else v
    return total


# -- loading and validation -----------------------------------------------------

def model_from_json(doc: dict) -> SurfaceModel:
    for fld in ("name", "basis", "mult", "integral", "canonical_class", "euler_class",
                "point_class"):
        if fld not in doc:
            raise ModelError(f"schema: missing field {fld!r}")
    names = []
    basis = []
    for idx, entry in enumerate(doc["basis"]):
        if not isinstance(entry, dict) or "name" not in entry or "degree" not in entry:
            raise ModelError(f"schema: basis entry {idx} needs 'name' and 'degree'")
        deg = entry["degree"]
        if not isinstance(deg, int) or not 0 <= deg <= 4:
            raise ModelError(f"schema: basis class {entry['name']!r} has degree {deg!r}")
        if entry["name"] in names:
            raise ModelError(f"schema: duplicate basis name {entry['name']!r}")
        names.append(entry["name"])
        basis.append(BasisClass(idx, entry["name"], deg))

    def idx_of(name):
        if name not in names:
            raise ModelError(f"schema: unknown basis class {name!r}")
        return names.index(name)

    mult = {}
    for entry in doc["mult"]:
        try:
            i, j, k = (idx_of(entry[f]) if isinstance(entry[f], str) else int(entry[f])
                       for f in ("i", "j", "k"))
            c = parse_rational(entry["c"])
        except KeyError as exc:
            raise ModelError(f"schema: mult entry {entry!r} lacks {exc}") from exc
        if c:
            row = mult.setdefault((i, j), {})
            row[k] = row.get(k, 0) + c
    integral = {idx_of(n): parse_rational(v) for n, v in doc["integral"].items()}

    def coh(d):
        return CohClass({idx_of(n): parse_rational(v) for n, v in d.items()})

    if not isinstance(doc["point_class"], str):
        raise ModelError("schema: point_class must be a basis name")
    return SurfaceModel(
        name=doc["name"],
        basis=tuple(basis),
        mult=mult,
        integral=integral,
        canonical_class=coh(doc["canonical_class"]),
        euler_class=coh(doc["euler_class"]),
        point_class=idx_of(doc["point_class"]),
    )


def model_to_json(model: SurfaceModel) -> dict:
    names = [b.name for b in model.basis]
    mult = []
    for (i, j) in sorted(model.mult):
        for k, c in sorted(model.mult[(i, j)].items()):
            mult.append({"i": names[i], "j": names[j], "k": names[k], "c": format_rational(c)})

    def coh(a):
        return {names[i]: format_rational(c) for i, c in a.items()}

    return {
        "name": model.name,
        "basis": [{"name": b.name, "degree": b.degree} for b in model.basis],
        "mult": mult,
        "integral": {names[i]: format_rational(c) for i, c in sorted(model.integral.items())},
        "canonical_class": coh(model.canonical_class),
        "euler_class": coh(model.euler_class),
        "point_class": names[model.point_class],
    }


def load_model(source) -> SurfaceModel:
    """Load from a path, a ``builtin:NAME`` string, a bare builtin name, or a dict.

    Raises ModelError on schema or axiom violations.
    """
    if isinstance(source, dict):
        doc = source
    else:
        text = str(source)
        name = text[len("builtin:"):] if text.startswith("builtin:") else text
        if name in BUILTIN_MODELS and not Path(text).exists():
            doc = json.loads(resources.files("hilbcalc.models").joinpath(f"{name}.json")
                             .read_text(encoding="utf-8"))
        else:
            try:
                doc = json.loads(Path(text).read_text(encoding="utf-8"))
            except json.JSONDecodeError as exc:
                raise ModelError(f"schema: not valid JSON ({exc})") from exc
    model = model_from_json(doc)
    problems = validate(model)
    if problems:
        raise ModelError("; ".join(problems))
    return model


def validate(model: SurfaceModel) -> list:
    """Check every ring-model axiom; returns a list of failure messages."""
    errs = []
    names = [b.name for b in model.basis]
    b = model.rank
    deg0 = [x for x in model.basis if x.degree == 0]
    if len(deg0) != 1:
        return [f"unit: need exactly one degree-0 basis class, found {len(deg0)}"]
    u = deg0[0].index
    if model.degree(model.point_class) != 4:
        errs.append(f"point class {names[model.point_class]} is not of degree 4")
    for (i, j), row in model.mult.items():
        for k in row:
            if not (0 <= i < b and 0 <= j < b and 0 <= k < b):
                errs.append(f"mult: index out of range in ({i},{j})->{k}")
                return errs
            if model.degree(k) != model.degree(i) + model.degree(j):
                errs.append(f"degree additivity fails: {names[i]}*{names[j]} has a "
                            f"component on {names[k]}")
    for i in range(b):
        for side, prod_ in (("left", model.mul_basis(u, i)), ("right", model.mul_basis(i, u))):
            if prod_ != {i: 1}:
                errs.append(f"unit law ({side}) fails for {names[i]}")
    for i in range(b):
        for j in range(b):
            pij = model.mul_basis(i, j)
            pji = model.mul_basis(j, i)
            s = -1 if (model.degree(i) * model.degree(j)) & 1 else 1
            if pij != {k: s * c for k, c in pji.items()}:
                errs.append(f"super-commutativity fails for ({names[i]}, {names[j]})")
    for i in range(b):
        if model.parity(i) and model.mul_basis(i, i):
            errs.append(f"square of odd class {names[i]} does not vanish")
    for i, j, k in product(range(b), repeat=3):
        left = model.mul(model.mul(CohClass.basis(i), CohClass.basis(j)), CohClass.basis(k))
        right = model.mul(CohClass.basis(i), model.mul(CohClass.basis(j), CohClass.basis(k)))
        if left != right:
            errs.append(f"associativity fails for ({names[i]}, {names[j]}, {names[k]})")
    for i, v in model.integral.items():
        if model.degree(i) != 4 and v:
            errs.append(f"integral of {names[i]} must vanish (degree {model.degree(i)} < 4)")
    if model.integral.get(model.point_class, 0) != 1:
        errs.append("point class not normalized: integral of the point class must be 1")
    if errs:
        return errs
    try:
        invert(model.pairing_matrix())
    except ZeroDivisionError:
        errs.append("Poincare pairing is degenerate")
        return errs
    K = model.canonical_class
    if any(model.degree(i) != 2 for i, _ in K.items()):
        errs.append("canonical class must be of pure degree 2")
    e = model.euler_class
    if any(model.degree(i) != 4 for i, _ in e.items()):
        errs.append("Euler class must be of pure degree 4")
    diag = tensor_contract(model, tau_push(model, 2, CohClass.basis(u)), 1, 2)
    if CohClass({k[0]: c for k, c in diag.terms.items()}) != e:
        errs.append("Euler class disagrees with the self-intersection of the diagonal")
    return errs
