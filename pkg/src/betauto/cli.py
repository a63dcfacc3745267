"""Command-line front end.

    betauto <relations|structure|reduce|equiv|free|verify|oracle>
            --config FILE [flags]

Exit codes: 0 success, 1 input error, 2 construction blocked or capped,
3 oracle cross-check failure.  All outputs are deterministic.
"""

from __future__ import annotations

import argparse
import itertools
import json
import random
import sys
from pathlib import Path

from . import automata as au
from .numfield import BetaContext, NumFieldError, context_from_config
from .reducer import ReducerTable
from .relations import (
    Blocked,
    CapExceeded,
    RelAutomaton,
    build_relation_automaton,
    is_free,
    kenyon_criterion,
    mahler_nonfree_check,
    quick_free_sufficient,
    verify_power_identity,
    verify_relation,
)
from .structure import (
    build_multiplier,
    build_reduced_automaton,
    count_elements_bruteforce,
    growth,
)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_BLOCKED = 2
EXIT_CHECK_FAILED = 3


class InputError(Exception):
    pass


def _dump_json(path: Path, doc) -> None:
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def _emit(doc, as_json: bool, text: str) -> None:
    if as_json:
        print(json.dumps(doc, indent=2, sort_keys=True))
    else:
        print(text)


def _load_context(args) -> BetaContext:
    try:
        doc = json.loads(Path(args.config).read_text())
    except OSError as e:
        raise InputError(f"cannot read config: {e}") from e
    except json.JSONDecodeError as e:
        raise InputError(f"config is not valid JSON: {e}") from e
    try:
        ctx = context_from_config(doc)
    except NumFieldError as e:
        raise InputError(str(e)) from e
    if args.precision is not None:
        try:
            ctx = context_from_config({**doc, "precision": args.precision})
        except NumFieldError as e:
            raise InputError(str(e)) from e
    return ctx


def _build_rel(ctx: BetaContext, args) -> RelAutomaton:
    return build_relation_automaton(
        ctx, max_states=args.max_states, max_depth=args.max_depth,
        force=args.force)


def _word(ctx: BetaContext, s: str) -> list:
    """Split a word argument into digit names ('110' or '1,1,0')."""
    parts = s.split(",") if "," in s else list(s)
    for p in parts:
        if p not in ctx.digit_names:
            raise InputError(
                f"unknown digit {p!r} (digits: {', '.join(ctx.digit_names)})")
    return parts


# ---------------------------------------------------------------------------
# commands


def cmd_relations(args) -> int:
    ctx = _load_context(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    summary = {
        "caps": {"max_states": args.max_states, "max_depth": args.max_depth},
        "blocked_context": ctx.blocked,
        "inverted": ctx.inverted,
    }
    try:
        rel = _build_rel(ctx, args)
    except Blocked as e:
        summary.update({"status": "blocked", "message": str(e)})
        _dump_json(out / "summary.json", summary)
        print(f"blocked: {e}", file=sys.stderr)
        return EXIT_BLOCKED
    except CapExceeded as e:
        summary.update({
            "status": "capped", "message": str(e), "partial": e.stats,
            "note": ("exploration did not close under the caps; this does not "
                     "certify that the relation automaton is infinite"),
        })
        _dump_json(out / "summary.json", summary)
        print(f"capped: {e}", file=sys.stderr)
        return EXIT_BLOCKED
    summary.update({
        "status": "ok",
        "state_count": rel.n_states,
        "free": is_free(rel),
        "stats": rel.stats,
    })
    _dump_json(out / "relations.json", au.to_json(rel.automaton))
    (out / "relations.dot").write_text(au.to_dot(rel.automaton, "relations") + "\n")
    _dump_json(out / "summary.json", summary)
    _emit(summary, args.json,
          f"states={rel.n_states} free={summary['free']}")
    return EXIT_OK


def cmd_structure(args) -> int:
    ctx = _load_context(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    try:
        rel = _build_rel(ctx, args)
    except (Blocked, CapExceeded) as e:
        print(f"cannot build structure: {e}", file=sys.stderr)
        return EXIT_BLOCKED
    reduced = build_reduced_automaton(rel, args.order)
    _dump_json(out / "reduced.json", au.to_json(reduced))
    (out / "reduced.dot").write_text(au.to_dot(reduced, "reduced") + "\n")
    for g in ctx.digit_names:
        m = build_multiplier(rel, reduced, g)
        _dump_json(out / f"mult_{g}.json", au.to_json(m))
        (out / f"mult_{g}.dot").write_text(au.to_dot(m, f"mult_{g}") + "\n")
    candidate = None
    if args.candidate_pi:
        try:
            candidate = [int(c) for c in args.candidate_pi.split(",")]
        except ValueError as e:
            raise InputError(f"bad --candidate-pi: {e}") from e
    report = growth(reduced, N=args.N, candidate_pi=candidate)
    doc = report.to_json()
    _dump_json(out / "growth.json", doc)
    lam = doc["lambda"]
    _emit(doc, args.json,
          f"reduced_states={reduced.n_states} "
          f"lambda=[{lam['lo']:.10f},{lam['hi']:.10f}] "
          f"counts={','.join(doc['counts'][:8])}")
    return EXIT_OK


def _structure_parts(ctx, args):
    rel = _build_rel(ctx, args)
    reduced = build_reduced_automaton(rel, args.order)
    return rel, reduced


def cmd_reduce(args) -> int:
    ctx = _load_context(args)
    word = _word(ctx, args.word)
    try:
        rel, reduced = _structure_parts(ctx, args)
    except (Blocked, CapExceeded) as e:
        print(f"cannot reduce: {e}", file=sys.stderr)
        return EXIT_BLOCKED
    v = ReducerTable(rel, reduced).reduce(word)
    _emit({"input": word, "reduced": list(v)}, args.json, "".join(v))
    return EXIT_OK


def cmd_equiv(args) -> int:
    ctx = _load_context(args)
    u, v = _word(ctx, args.u), _word(ctx, args.v)
    verdict = verify_relation(ctx, u, v) if len(u) == len(v) else False
    _emit({"u": u, "v": v, "equivalent": verdict}, args.json,
          "equivalent" if verdict else "distinct")
    return EXIT_OK


def _kenyon_params(ctx: BetaContext):
    """(p, q) when the context is base 3 with constant digits {0, p, q},
    0 < p < q coprime; None otherwise."""
    import math

    if ctx.mode != "algebraic" or ctx.minpoly != (-3, 1) or ctx.inverted:
        return None
    vals = []
    for d in ctx.digits:
        c = d.coeffs
        if any(x != 0 for x in c[1:]) or c[0] != int(c[0]):
            return None
        vals.append(int(c[0]))
    vals.sort()
    if len(vals) != 3 or vals[0] != 0:
        return None
    p, q = vals[1], vals[2]
    if 0 < p < q and math.gcd(p, q) == 1:
        return p, q
    return None


def cmd_free(args) -> int:
    ctx = _load_context(args)
    reasons = []
    verdict = None  # True = free, False = non-free, None = unknown

    if quick_free_sufficient(ctx):
        verdict = True
        reasons.append("expanding-separation")
    kp = _kenyon_params(ctx)
    if kp is not None:
        k = kenyon_criterion(*kp)
        reasons.append(f"kenyon:{'free' if k else 'nonfree'}")
        if verdict is None:
            verdict = k
    if verdict is None and len(ctx.digits) == 2 and ctx.mode == "algebraic":
        if mahler_nonfree_check(ctx):
            verdict = False
            reasons.append("mahler<2")
    status = "ok"
    if verdict is None:
        try:
            rel = _build_rel(ctx, args)
            verdict = is_free(rel)
            reasons.append("relation-automaton")
        except (Blocked, CapExceeded) as e:
            status = "blocked" if isinstance(e, Blocked) else "capped"
            reasons.append(status)
    doc = {"free": verdict, "reasons": reasons, "status": status}
    _emit(doc, args.json,
          {True: "free", False: "non-free", None: "inconclusive"}[verdict]
          + " (" + ", ".join(reasons) + ")")
    return EXIT_OK if verdict is not None else EXIT_BLOCKED


def cmd_verify(args) -> int:
    ctx = _load_context(args)
    if args.identity:
        try:
            doc = json.loads(Path(args.identity).read_text())
            terms = [(int(s), int(k)) for s, k in doc["terms"]]
            rhs = [int(c) for c in doc["rhs_coeffs"]]
        except (OSError, json.JSONDecodeError, KeyError, TypeError, ValueError) as e:
            raise InputError(f"bad identity file: {e}") from e
        ok = verify_power_identity(ctx, terms, rhs)
    else:
        if args.u is None or args.v is None:
            raise InputError("verify needs two words or --identity FILE")
        u, v = _word(ctx, args.u), _word(ctx, args.v)
        if len(u) != len(v):
            raise InputError("words must have equal length")
        ok = verify_relation(ctx, u, v)
    _emit({"verified": ok}, args.json, "true" if ok else "false")
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def cmd_oracle(args) -> int:
    ctx = _load_context(args)
    n = args.n
    try:
        rel, reduced = _structure_parts(ctx, args)
    except (Blocked, CapExceeded) as e:
        print(f"cannot run oracle: {e}", file=sys.stderr)
        return EXIT_BLOCKED
    table = ReducerTable(rel, reduced)
    names = ctx.digit_names
    rng = random.Random(0)
    results = []

    def check(name, ok):
        results.append((name, ok))
        print(f"[{'PASS' if ok else 'FAIL'}] {name}")

    nb = min(n, 7)
    check(f"counting vs bruteforce (lengths 0..{nb})",
          au.count_series(reduced, nb) == count_elements_bruteforce(ctx, nb))

    na = min(n, 4)
    ok = True
    for ln in range(na + 1):
        for u in itertools.product(names, repeat=ln):
            for v in itertools.product(names, repeat=ln):
                got = au.accepts(rel.automaton,
                                 [au.PairLetter(a, b) for a, b in zip(u, v)])
                if got != verify_relation(ctx, u, v):
                    ok = False
    check(f"relation language vs exact arithmetic (lengths 0..{na})", ok)

    ok = True
    for _ in range(200):
        w = [rng.choice(names) for _ in range(rng.randint(0, max(n, 1)))]
        r = table.reduce(w)
        if table.reduce(r) != r or not table.equivalent(w, r) or len(r) != len(w):
            ok = False
    check("reduce: idempotent, length-preserving, round-trip", ok)

    t = au.trim(rel.automaton)
    check("relation automaton minimal (det + co-det + trimmed)",
          t.deterministic and au.is_codeterministic(t)
          and au.equivalent(t, au.minimize(t)))

    failed = [name for name, ok in results if not ok]
    print(f"{len(results) - len(failed)}/{len(results)} oracle checks passed")
    return EXIT_OK if not failed else EXIT_CHECK_FAILED


# ---------------------------------------------------------------------------


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="betauto",
        description="Relation automata and automatic structures of affine "
                    "digit semigroups.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", required=True, help="context config JSON")
        sp.add_argument("--out", default=".", help="output directory")
        sp.add_argument("--json", action="store_true",
                        help="machine-readable output on stdout")
        sp.add_argument("--order", default="lex", choices=["lex", "revlex"])
        sp.add_argument("--max-states", type=int, default=1_000_000)
        sp.add_argument("--max-depth", type=int, default=10_000)
        sp.add_argument("--precision", type=int, default=None)
        sp.add_argument("--force", action="store_true",
                        help="run a blocked context under the caps")
        return sp

    common(sub.add_parser("relations", help="build the relation automaton"))
    sp = common(sub.add_parser("structure", help="build reduced/multiplier automata and growth"))
    sp.add_argument("-N", type=int, default=20, help="counting series length")
    sp.add_argument("--candidate-pi", default=None,
                    help="comma-separated integer coefficients, constant first")
    sp = common(sub.add_parser("reduce", help="reduce a word"))
    sp.add_argument("word")
    sp = common(sub.add_parser("equiv", help="decide equivalence of two words"))
    sp.add_argument("u")
    sp.add_argument("v")
    common(sub.add_parser("free", help="freeness verdict"))
    sp = common(sub.add_parser("verify", help="verify a relation or identity"))
    sp.add_argument("u", nargs="?")
    sp.add_argument("v", nargs="?")
    sp.add_argument("--identity", default=None,
                    help="JSON file {terms: [[sign,k],...], rhs_coeffs: [...]}")
    sp = common(sub.add_parser("oracle", help="run brute-force cross-checks"))
    sp.add_argument("-n", type=int, default=4, help="max word length")
    return p


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    handler = {
        "relations": cmd_relations,
        "structure": cmd_structure,
        "reduce": cmd_reduce,
        "equiv": cmd_equiv,
        "free": cmd_free,
        "verify": cmd_verify,
        "oracle": cmd_oracle,
    }[args.command]
    try:
        return handler(args)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except NumFieldError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
