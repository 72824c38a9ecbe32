"""The stable ring spanned by the classes a_rho: structure constants,
stability checks, the generator basis and transport along surface maps."""
from __future__ import annotations

import json
from fractions import Fraction

from .cup_product import (class_key_vector, cup, evaluate_stable, key_from_partitions,
                          key_partitions, key_sign, stable_chern_apply, to_g_basis_key)
from .fock import (FockVector, accumulate, create_basis, enumerate_monomials, mono_degree,
                   monomial_from_factors, weight)
from .linalg import invert
from .surface import CohClass, ModelError, SurfaceModel, format_rational, parse_rational


# -- keys ---------------------------------------------------------------------------------

def key_order(key: tuple):
    parts = key_partitions(key)
    return (weight(key), [(c, tuple(parts[c])) for c in sorted(parts)])


def enumerate_keys(model: SurfaceModel, max_weight: int, min_weight: int = 0) -> list:
    """All partition-valued keys with min_weight <= |rho| <= max_weight, in report order."""
    keys = [k for n in range(min_weight, max_weight + 1) for k in enumerate_monomials(model, n)]
    return sorted(keys, key=key_order)


def key_to_json(model: SurfaceModel, key: tuple) -> list:
    parts = key_partitions(key)
    return [{"c": model.basis[c].name, "parts": parts[c]} for c in sorted(parts)]


def key_from_json(model: SurfaceModel, doc: list) -> tuple:
    return key_from_partitions(model, {model.index(e["c"]): [int(p) for p in e["parts"]]
                                       for e in doc})


# -- products in the stable ring ----------------------------------------------------------

def stable_mul(model: SurfaceModel, A: dict, B: dict) -> dict:
    """Product of two stable vectors (keys are padded monomials)."""
    out = {}
    for key, ca in A.items():
        poly = to_g_basis_key(model, key)
        for word, cw in poly.terms.items():
            cur = B
            for k, c in reversed(word):
                cur = stable_chern_apply(model, k, CohClass.basis(c), cur)
                if not cur:
                    break
            for m, v in cur.items():
                accumulate(out, m, ca * cw * v)
    return out


def to_class_basis(model: SurfaceModel, stable: dict) -> dict:
    """Rewrite a stable vector in the a_nu basis."""
    return {key: c * key_sign(model, key) for key, c in stable.items()}


def from_class_basis(model: SurfaceModel, coeffs: dict) -> dict:
    return {key: c * key_sign(model, key) for key, c in coeffs.items()}


def structure_constants(model: SurfaceModel, rho: tuple, sigma: tuple) -> dict:
    """d_{rho sigma}^nu with a_rho a_sigma = sum_nu d^nu a_nu at every n."""
    memo = model._memo.setdefault("structure", {})
    key = (tuple(rho), tuple(sigma))
    if key not in memo:
        prod = stable_mul(model, class_key_vector(model, rho), class_key_vector(model, sigma))
        memo[key] = to_class_basis(model, prod)
    return memo[key]


def union_key(rho: tuple, sigma: tuple) -> tuple:
    return tuple(sorted(rho + sigma))


def evaluate_classes(model: SurfaceModel, coeffs: dict, n: int) -> FockVector:
    """sum_nu c^nu a_nu(n)."""
    return evaluate_stable(model, from_class_basis(model, coeffs), n)


def verify_stability(model: SurfaceModel, rho: tuple, sigma: tuple, ns) -> list:
    """Compare the table against a direct cup product at each n.

    Returns mismatch descriptions; each check is an equality of classes on X^[n].
    """
    table = structure_constants(model, rho, sigma)
    problems = []
    for n in ns:
        if n < weight(rho) + weight(sigma):
            problems.append(f"n={n} is below |rho|+|sigma|")
            continue
        A = evaluate_classes(model, {rho: Fraction(1)}, n)
        B = evaluate_classes(model, {sigma: Fraction(1)}, n)
        direct = cup(model, A, B) if A and B else FockVector()
        if direct != evaluate_classes(model, table, n):
            problems.append(f"n={n}: table disagrees with the cup product")
    return problems


def union_sign(model: SurfaceModel, rho: tuple, sigma: tuple) -> int:
    """Expected d_{rho sigma}^{rho u sigma}: the Koszul sign of merging the class-major
    products of rho and sigma into that of rho u sigma (1 unless odd classes cross)."""
    def class_major(key):
        return sorted(key, key=lambda f: (f[1], f[0]))
    s, _ = monomial_from_factors(model, class_major(rho) + class_major(sigma))
    return s * key_sign(model, union_key(rho, sigma)) if s else 0


def table_problems(model: SurfaceModel, rho: tuple, sigma: tuple) -> list:
    """Weight filtration, signed unit top coefficient and super-commutativity of one entry."""
    d = structure_constants(model, rho, sigma)
    top = weight(rho) + weight(sigma)
    out = []
    u = union_key(rho, sigma)
    for nu, c in d.items():
        if weight(nu) > top:
            out.append(f"nu {nu} exceeds the weight bound")
        elif weight(nu) == top and nu != u:
            out.append(f"nu {nu} has top weight but is not the union")
    # a repeated odd factor makes the union vanish, and union_sign is then 0
    want = union_sign(model, rho, sigma)
    if d.get(u, 0) != want:
        out.append(f"coefficient of the union is {d.get(u, 0)}, expected {want}")
    sign = -1 if (mono_degree(model, rho) * mono_degree(model, sigma)) & 1 else 1
    other = structure_constants(model, sigma, rho)
    if other != {k: v * sign for k, v in d.items()}:
        out.append("super-commutativity fails")
    return out


def table_records(model: SurfaceModel, max_weight: int) -> list:
    """One record per ordered pair (rho, sigma) with |rho| + |sigma| <= max_weight,
    rho and sigma nonempty, in report order."""
    keys = enumerate_keys(model, max_weight - 1, 1)
    records = []
    for rho in keys:
        for sigma in keys:
            if weight(rho) + weight(sigma) > max_weight:
                continue
            d = structure_constants(model, rho, sigma)
            records.append({
                "rho": key_to_json(model, rho),
                "sigma": key_to_json(model, sigma),
                "terms": [{"nu": key_to_json(model, nu), "d": format_rational(c)}
                          for nu, c in sorted(d.items(), key=lambda kv: key_order(kv[0]))],
            })
    return records


def write_table(model: SurfaceModel, max_weight: int, fh) -> int:
    records = table_records(model, max_weight)
    for rec in records:
        fh.write(json.dumps(rec, separators=(",", ":")) + "\n")
    return len(records)


def read_table(model: SurfaceModel, lines) -> dict:
    out = {}
    for line in lines:
        if not line.strip():
            continue
        rec = json.loads(line)
        rho, sigma = key_from_json(model, rec["rho"]), key_from_json(model, rec["sigma"])
        out[(rho, sigma)] = {key_from_json(model, t["nu"]): parse_rational(t["d"])
                             for t in rec["terms"]}
    return out


# -- the generator basis ---------------------------------------------------------------------

def generator_product(model: SurfaceModel, gens: tuple) -> dict:
    """prod a_{(r,c)} over the factors of ``gens`` (class-major order), in the a_nu basis."""
    memo = model._memo.setdefault("generator_product", {})
    gens = tuple(sorted(gens, key=lambda f: (f[1], f[0])))
    if gens in memo:
        return memo[gens]
    if not gens:
        stable = {(): Fraction(1)}
    else:
        rest = from_class_basis(model, generator_product(model, gens[1:]))
        stable = stable_mul(model, class_key_vector(model, (gens[0],)), rest)
    res = to_class_basis(model, stable)
    memo[gens] = res
    return res


class TransitionReport:
    def __init__(self, forward: dict, inverse: dict, problems: list):
        self.forward = forward      # generator monomial -> {nu: coeff}
        self.inverse = inverse      # nu -> {generator monomial: coeff}
        self.problems = problems

    @property
    def ok(self) -> bool:
        return not self.problems


def generator_transition(model: SurfaceModel, max_weight: int) -> TransitionReport:
    """Expand every generator monomial of weight <= max_weight in the a_nu basis.

    Generator monomials and keys share one index set; the matrix must be
    unitriangular for the weight filtration.  The inverse is found by
    back-substitution along increasing weight.
    """
    if max_weight < 1:
        raise ValueError("max_weight must be at least 1")
    keys = enumerate_keys(model, max_weight)
    forward = {}
    problems = []
    for g in keys:
        row = generator_product(model, g)
        forward[g] = row
        if row.get(g) != 1:
            problems.append(f"generator monomial {g}: diagonal entry {row.get(g)}")
        for nu in row:
            if nu != g and weight(nu) >= weight(g):
                problems.append(f"generator monomial {g}: entry {nu} not below the diagonal")
                break
    inverse = {}
    if not problems:
        for nu in keys:
            acc = {nu: Fraction(1)}
            for mu, c in forward[nu].items():
                if mu == nu:
                    continue
                for g, v in inverse[mu].items():
                    accumulate(acc, g, -c * v)
            inverse[nu] = acc
    return TransitionReport(forward, inverse, problems)


# -- transport along a surface isomorphism ------------------------------------------------

def _image(phi: list, c: int) -> CohClass:
    return phi[c]


def check_isomorphism(X: SurfaceModel, Y: SurfaceModel, phi) -> list:
    """Reasons why ``phi`` (image of each X basis class) is not an admissible map."""
    def k2(M):
        return M.integrate(M.mul(M.canonical_class, M.canonical_class))

    if k2(X) != k2(Y):
        return [f"canonical classes cannot match: K^2 is {k2(X)} on {X.name} "
                f"and {k2(Y)} on {Y.name}"]
    bx = sorted(b.degree for b in X.basis)
    by = sorted(b.degree for b in Y.basis)
    if bx != by:
        return [f"Betti numbers differ between {X.name} and {Y.name}"]
    phi = [Y.cls(p) for p in phi]
    if len(phi) != X.rank:
        return [f"phi has {len(phi)} images for {X.rank} basis classes"]
    problems = []
    for i, img in enumerate(phi):
        if img and Y.class_degree(img) != X.degree(i):
            problems.append(f"phi does not preserve the degree of {X.basis[i].name}")
    if problems:
        return problems

    def apply(a: CohClass) -> CohClass:
        out = CohClass()
        for i, c in a.items():
            out = out + phi[i] * c
        return out

    if apply(CohClass.basis(X.unit)) != CohClass.basis(Y.unit):
        problems.append("phi does not send the unit to the unit")
    for i in range(X.rank):
        for j in range(X.rank):
            lhs = apply(X.mul(CohClass.basis(i), CohClass.basis(j)))
            rhs = Y.mul(phi[i], phi[j])
            if lhs != rhs:
                problems.append(f"phi is not multiplicative on ({X.basis[i].name}, {X.basis[j].name})")
    for i in range(X.rank):
        if X.integrate(CohClass.basis(i)) != Y.integrate(phi[i]):
            problems.append(f"phi does not preserve the integral of {X.basis[i].name}")
    if apply(X.canonical_class) != Y.canonical_class:
        problems.append("phi does not send K_X to K_Y")
    # invertibility: the images must span
    try:
        invert([[phi[i].coeff(j) for j in range(Y.rank)] for i in range(X.rank)])
    except ZeroDivisionError:
        problems.append("phi is not invertible")
    return problems


def transport_stable(X: SurfaceModel, Y: SurfaceModel, phi, stable: dict) -> dict:
    """Image of a stable vector under the map induced on creation factors."""
    phi = [Y.cls(p) for p in phi]
    out = {}
    for key, coef in stable.items():
        cur = {(): Fraction(coef)}
        for r, c in reversed(key):
            nxt = {}
            for d, cd in phi[c].items():
                for m, v in create_basis(Y, r, d, cur).items():
                    accumulate(nxt, m, cd * v)
            cur = nxt
        for m, v in cur.items():
            accumulate(out, m, v)
    return out


def transport_isomorphism(X: SurfaceModel, Y: SurfaceModel, phi, max_weight: int) -> list:
    """Check that structure tables correspond under phi up to |rho|+|sigma| <= max_weight.

    Raises ModelError when phi is not an admissible isomorphism; otherwise
    returns the list of mismatching pairs (empty when transport holds).
    """
    bad = check_isomorphism(X, Y, phi)
    if bad:
        raise ModelError("; ".join(bad))
    keys = enumerate_keys(X, max_weight - 1, 1)
    problems = []
    for rho in keys:
        for sigma in keys:
            if weight(rho) + weight(sigma) > max_weight:
                continue
            lhs = transport_stable(X, Y, phi, from_class_basis(X, structure_constants(X, rho, sigma)))
            A = transport_stable(X, Y, phi, class_key_vector(X, rho))
            B = transport_stable(X, Y, phi, class_key_vector(X, sigma))
            if lhs != stable_mul(Y, A, B):
                problems.append((rho, sigma))
    return problems
