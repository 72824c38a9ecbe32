"""Command-line interface: ``hilbcalc <command> [options]``.

Exit codes: 0 success, 1 validation or assertion failure, 2 usage or input error.
"""
from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import __version__
from . import cup_product as cp
from . import hilbert_ring as hr
from . import suites
from . import vertex_ops as vo
from .cache import DiskCache
from .fock import vector_from_json, vector_to_json
from .surface import (CohClass, ModelError, format_rational, load_model, model_from_json,
                      model_to_json, parse_rational, validate)


class UsageError(Exception):
    pass


# -- helpers -----------------------------------------------------------------------------------

def _load(source: str):
    try:
        return load_model(source)
    except FileNotFoundError as exc:
        raise UsageError(f"model file not found: {exc.filename}") from exc
    except ModelError as exc:
        raise UsageError(f"invalid model: {exc}") from exc


def _read_json(path: str):
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text(encoding="utf-8")
        return json.loads(text)
    except FileNotFoundError as exc:
        raise UsageError(f"file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON ({exc})") from exc


def _class(model, text: str) -> CohClass:
    """A class given as a basis name or a JSON object {name: "p/q"}."""
    text = text.strip()
    try:
        if text.startswith("{"):
            return model.cls({k: parse_rational(v) for k, v in json.loads(text).items()})
        return model.cls(text)
    except (KeyError, ValueError) as exc:
        raise UsageError(f"bad class {text!r}: {exc}") from exc


def _emit(args, payload, pretty: str | None = None) -> None:
    if args.format == "pretty" and pretty is not None:
        text = pretty
    else:
        text = json.dumps(payload, indent=None if args.format == "json" else 2)
    if args.out:
        Path(args.out).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)


def _pretty_vector(model, rows) -> str:
    if not rows:
        return "0"
    parts = []
    for row in rows:
        ops = " ".join(f"a_-{f['r']}({f['c']})" for f in row["factors"]) or "1"
        parts.append(f"{row['coeff']} * {ops}|0>")
    return "\n".join(parts)


def _cache(args) -> DiskCache:
    return DiskCache(args.cache_dir, enabled=not args.no_cache)


# -- commands ----------------------------------------------------------------------------------

def cmd_surface_check(args) -> int:
    try:
        if args.model.startswith("builtin:"):
            model = model_from_json(model_to_json(_load(args.model)))
        else:
            model = model_from_json(_read_json(args.model))
    except ModelError as exc:
        raise UsageError(str(exc)) from exc
    failures = [{"suite": "axioms", "check": msg, "detail": ""} for msg in validate(model)]
    if not failures:
        failures = suites.suite_pushforward(model, max_arity=3)
    ok = not failures
    _emit(args, {"model": model.name, "ok": ok, "failures": failures},
          f"{model.name}: {'ok' if ok else 'FAILED'}" +
          "".join(f"\n  {f['check']} {f['detail']}" for f in failures))
    return 0 if ok else 1


def _vector_arg(model, path: str):
    doc = _read_json(path)
    try:
        return vector_from_json(model, doc)
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"{path}: not a Fock vector ({exc})") from exc


def cmd_cup(args) -> int:
    model = _load(args.model)
    A = _vector_arg(model, args.A)
    B = _vector_arg(model, args.B)
    n = args.n
    for name, v in (("A", A), ("B", B)):
        w = v.weights()
        if len(w) > 1 or (n is not None and w and w != {n}):
            raise UsageError(f"{name} is not a class on X^[{n}]: weights {sorted(w)}")
    if n is None:
        weights = A.weights() | B.weights()
        if len(weights) > 1:
            raise UsageError(f"A and B have different weights {sorted(weights)}")
        n = weights.pop() if weights else 0

    def compute():
        return vector_to_json(model, cp.cup(model, A, B) if A and B else A * 0)

    rows = _cache(args).cached(model.fingerprint(), "cup",
                               [n, vector_to_json(model, A), vector_to_json(model, B)], compute)
    _emit(args, rows, _pretty_vector(model, rows))
    return 0


_worker_model = None


def _init_worker(doc):
    global _worker_model
    _worker_model = model_from_json(doc)


def _table_rows(task):
    rho_doc, sigma_docs = task
    model = _worker_model
    rho = hr.key_from_json(model, rho_doc)
    out = []
    for sdoc in sigma_docs:
        sigma = hr.key_from_json(model, sdoc)
        d = hr.structure_constants(model, rho, sigma)
        out.append([{"nu": hr.key_to_json(model, nu), "d": format_rational(c)}
                    for nu, c in sorted(d.items(), key=lambda kv: hr.key_order(kv[0]))])
    return out


def cmd_structure_constants(args) -> int:
    model = _load(args.model)
    W = args.maxweight
    if W < 2:
        raise UsageError("--maxweight must be at least 2")
    cache = _cache(args)
    keys = hr.enumerate_keys(model, W - 1, 1)
    tasks = []
    for rho in keys:
        sigmas = [s for s in keys if hr.weight(rho) + hr.weight(s) <= W]
        tasks.append((rho, sigmas))

    def record_key(rho, sigma):
        return cache.key(model.fingerprint(), "structure", [hr.key_to_json(model, rho),
                                                            hr.key_to_json(model, sigma)])

    results = {}
    todo = []
    for rho, sigmas in tasks:
        missing = []
        for sigma in sigmas:
            hit = cache.get(record_key(rho, sigma))
            if hit is None:
                missing.append(sigma)
            else:
                results[(rho, sigma)] = hit
        if missing:
            todo.append((rho, missing))
    if todo:
        jobs = [(hr.key_to_json(model, rho), [hr.key_to_json(model, s) for s in sigmas])
                for rho, sigmas in todo]
        if args.jobs and args.jobs > 1:
            with ProcessPoolExecutor(args.jobs, initializer=_init_worker,
                                     initargs=(model_to_json(model),)) as pool:
                outputs = list(pool.map(_table_rows, jobs))
        else:
            _init_worker(model_to_json(model))
            global _worker_model
            _worker_model = model
            outputs = [_table_rows(job) for job in jobs]
        for (rho, sigmas), rows in zip(todo, outputs):
            for sigma, terms in zip(sigmas, rows):
                results[(rho, sigma)] = terms
                cache.put(record_key(rho, sigma), terms)
    lines = []
    for rho, sigmas in tasks:
        for sigma in sigmas:
            lines.append(json.dumps({"rho": hr.key_to_json(model, rho),
                                     "sigma": hr.key_to_json(model, sigma),
                                     "terms": results[(rho, sigma)]}, separators=(",", ":")))
    text = "\n".join(lines) + ("\n" if lines else "")
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def cmd_verify(args) -> int:
    model = _load(args.model)
    if args.suite not in suites.SUITES:
        raise UsageError(f"unknown suite {args.suite!r}; choose from {', '.join(suites.SUITES)}")
    failures = suites.run_suite(args.suite, model)
    ok = not failures
    _emit(args, {"suite": args.suite, "model": model.name, "ok": ok, "failures": failures},
          f"{args.suite} on {model.name}: {'pass' if ok else 'FAIL'}" +
          "".join(f"\n  {f['check']}: {f['detail']}" for f in failures))
    return 0 if ok else 1


def _parse_gens(model, args) -> tuple:
    n = args.n
    gens = []
    if args.request:
        doc = _read_json(args.request)
        if n is None:
            n = doc.get("n")
        for g in doc.get("gens", []):
            alpha = g["alpha"]
            cls = model.cls(alpha if isinstance(alpha, str)
                            else {k: parse_rational(v) for k, v in alpha.items()})
            gens.append((int(g["k"]), cls))
    for text in args.gen or []:
        k, _, alpha = text.partition(":")
        if not alpha:
            raise UsageError(f"--gen expects K:CLASS, got {text!r}")
        gens.append((int(k), _class(model, alpha)))
    if n is None:
        raise UsageError("--n is required")
    return n, gens


def cmd_intersect(args) -> int:
    model = _load(args.model)
    n, gens = _parse_gens(model, args)
    for _, a in gens:
        if model.class_degree(a) is None:
            raise UsageError("intersection needs homogeneous classes")
    args_doc = [n, [[k, {model.basis[i].name: format_rational(c) for i, c in a.items()}]
                    for k, a in gens]]
    value = _cache(args).cached(model.fingerprint(), "intersect", args_doc,
                                lambda: format_rational(cp.intersection(model, gens, n)))
    if args.out:
        Path(args.out).write_text(value + "\n", encoding="utf-8")
    else:
        print(value)
    return 0


def cmd_expand_chern(args) -> int:
    model = _load(args.model)
    alpha = _class(model, args.alpha)
    beta = _class(model, args.beta) if args.beta else CohClass.basis(model.unit)
    if args.k < 0 or args.r < 1:
        raise UsageError("need k >= 0 and r >= 1")

    def compute():
        op = vo.chern_commutator(model, args.k, alpha, args.r, beta)
        return vo.operator_to_json(model, op)

    args_doc = [args.k, args.r, {model.basis[i].name: format_rational(c) for i, c in alpha.items()},
                {model.basis[i].name: format_rational(c) for i, c in beta.items()}]
    rows = _cache(args).cached(model.fingerprint(), "expand-chern", args_doc, compute)
    pretty = "\n".join(f"a{tuple(r['indices'])}(tau {r['class']})" for r in rows) or "0"
    _emit(args, rows, pretty)
    return 0


# -- parser -------------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--model", default="builtin:P2", help="model file or builtin:NAME")
    common.add_argument("--n", type=int, help="number of points")
    common.add_argument("--out", help="write output to this file")
    common.add_argument("--no-cache", action="store_true", help="bypass the disk cache")
    common.add_argument("--cache-dir", help="cache directory (default: $HILBCALC_CACHE)")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for tabulation")
    common.add_argument("--format", choices=("json", "pretty"), default="json")

    parser = argparse.ArgumentParser(prog="hilbcalc", description="Exact cohomology rings of "
                                     "Hilbert schemes of points on surfaces.")
    parser.add_argument("--version", action="version", version=f"hilbcalc {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("surface-check", parents=[common], help="validate a surface model")
    p.set_defaults(func=cmd_surface_check)

    p = sub.add_parser("cup", parents=[common], help="cup product of two classes")
    p.add_argument("A", help="Fock vector JSON file ('-' for stdin)")
    p.add_argument("B", help="Fock vector JSON file")
    p.set_defaults(func=cmd_cup)

    p = sub.add_parser("structure-constants", parents=[common], help="tabulate the stable ring")
    p.add_argument("--maxweight", type=int, default=3)
    p.set_defaults(func=cmd_structure_constants)

    p = sub.add_parser("verify", parents=[common], help="run a named verification suite")
    p.add_argument("suite", help=", ".join(suites.SUITES))
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("intersect", parents=[common], help="intersection number of Chern classes")
    p.add_argument("request", nargs="?", help='JSON file {"n":..,"gens":[{"k":..,"alpha":..}]}')
    p.add_argument("--gen", action="append", metavar="K:CLASS", help="generator G_K(CLASS)")
    p.set_defaults(func=cmd_intersect)

    p = sub.add_parser("expand-chern", parents=[common], help="expand [G_k(alpha), a_{-r}(beta)]")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--alpha", required=True, help="basis name or JSON object")
    p.add_argument("--r", type=int, default=1)
    p.add_argument("--beta", help="basis name or JSON object (default: the unit)")
    p.set_defaults(func=cmd_expand_chern)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"hilbcalc: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
