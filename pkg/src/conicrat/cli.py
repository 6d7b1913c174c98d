"""conicrat command line.

Exit codes: 0 finished (Unknown verdicts included), 1 bad input, 2 internal
consistency failure.
"""
from __future__ import annotations

import argparse
import hashlib
import itertools
import json
import os
import sys
from multiprocessing import Pool

from . import __version__
from .algebra.fields import FiniteField
from .algebra.parse import parse_elem, parse_field, parse_poly
from .algebra.poly import Poly
from .chatelet import ChateletInput, chatelet_verdict
from .errors import ConicratError, ConsistencyError, PreconditionError
from .fibers import s_invariant, s_invariant_bruteforce
from .param import Triple, parametrize, verify_triple
from .piclattice import (GroupAction, blow_down, blow_up, build_action, chatelet_cyclic, chatelet_diagonal,
                         chatelet_direct, cohomology, elementary_transformation, invariant_sublattice,
                         yrs_lattice)
from .verdict import AnalyzeOptions, analyze

EXIT_OK, EXIT_INPUT, EXIT_CONSISTENCY = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_INPUT)


def _emit(args, report):
    print(report.to_json(indent=2) if args.json else report.summary())


def _options(args) -> AnalyzeOptions:
    return AnalyzeOptions(seed=args.seed, witness_deg_bound=args.witness_deg_bound,
                          conic_search_bound=args.conic_search_bound)


# -- subcommands -------------------------------------------------------------------

def cmd_analyze(args):
    K = parse_field(args.field)
    _emit(args, analyze(parse_poly(args.p, K), parse_poly(args.q, K), _options(args)))


def cmd_chatelet(args):
    K = parse_field(args.field)
    inp = ChateletInput(parse_elem(args.a, K), parse_poly(args.p, K))
    _emit(args, chatelet_verdict(inp, args.seed, args.conic_search_bound))


def cmd_sinv(args):
    K = parse_field(args.field)
    P, Q = parse_poly(args.p, K), parse_poly(args.q, K)
    s = s_invariant(P, Q, args.seed)
    out = s.to_dict()
    if args.bruteforce:
        b = s_invariant_bruteforce(P, Q, args.bruteforce)
        out["bruteforce"] = dict(zip(("s1", "s2", "s3", "s4"), b.counts()))
        if b.counts() != s.counts():
            raise ConsistencyError(f"s-invariant {s.counts()} disagrees with the pointwise count {b.counts()}")
    if args.json:
        print(json.dumps(out, indent=2))
        return
    print(f"s = {s.total}  (s1={s.s1} s2={s.s2} s3={s.s3} s4={s.s4})")
    for f in s.fibers:
        mark = "*" if f.contributes else " "
        print(f" {mark} {f.kind:<11} {str(f.place):<20} residue {f.residue}  weight {f.weight}")
    if args.bruteforce:
        print("pointwise count agrees")


_CONSTRUCTIONS = {"direct": chatelet_direct, "diagonal": chatelet_diagonal, "cyclic": chatelet_cyclic}


def cmd_cohomology(args):
    if args.action:
        with open(args.action) as fh:
            act = GroupAction.from_dict(json.load(fh))
    elif args.blocks:
        blocks = [int(b) for b in args.blocks.split(",")]
        act = build_action(_CONSTRUCTIONS[args.construction](blocks))
    else:
        raise PreconditionError("give --action FILE or --blocks")
    res = cohomology(act)
    inv = invariant_sublattice(act)
    out = {"order": act.order, "rank": act.lattice.rank,
           "h_minus1": list(res["h_minus1"].factors), "h1": list(res["h1"].factors),
           "invariant_rank": len(inv)}
    if args.blocks:
        odd = any(b % 2 for b in blocks)
        j = max(len(blocks) - (2 if odd else 1), 0)
        out["closed_form"] = [2] * j
    if args.json:
        print(json.dumps(out, indent=2))
        return
    print(f"|G| = {out['order']}, rank {out['rank']}, invariant rank {out['invariant_rank']}")
    print(f"H^-1 = {res['h_minus1']}")
    print(f"H^1  = {res['h1']}")
    if "closed_form" in out:
        print("closed form (Z/2)^" + str(len(out["closed_form"])))


def _parse_ops(text):
    return [op.split() for op in text.replace(";", "\n").splitlines() if op.strip()]


def _class(L, spec):
    if spec in L.labels:
        return L.basis_vector(spec)
    try:
        return tuple(int(c) for c in spec.split(","))
    except ValueError:
        raise PreconditionError(f"unknown class {spec!r}; use a basis label or comma-separated coordinates")


def cmd_lattice(args):
    L = yrs_lattice(args.r, args.s)
    history = [("start", L)]
    for op in _parse_ops(args.ops or ""):
        name, rest = op[0].lower(), op[1:]
        if name == "blowup":
            L, _ = blow_up(L, rest[0] if rest else None)
        elif name == "blowdown":
            if not rest:
                raise PreconditionError("blowdown needs a class")
            L, _ = blow_down(L, _class(L, rest[0]))
        elif name in ("elem", "elementary"):
            F = _class(L, rest[0] if rest else "F")
            tang = [int(c) for c in rest[1].split(",")] if len(rest) > 1 else [0] * L.rank
            L = elementary_transformation(L, F, tang)
        else:
            raise PreconditionError(f"unknown lattice op {name!r} (blowup, blowdown, elem)")
        history.append((" ".join(op), L))
    if args.json:
        print(json.dumps([{"op": op, **Lx.to_dict(), "omega_squared": Lx.omega_squared(), "det": Lx.det()}
                          for op, Lx in history], indent=2))
        return
    for op, Lx in history:
        print(f"{op}: rank {Lx.rank}, det {Lx.det()}, Ω·Ω = {Lx.omega_squared()}")
    print("basis  " + " ".join(f"{lab:>4}" for lab in L.labels))
    for lab, row in zip(L.labels, L.gram.rows):
        print(f"{lab:<6} " + " ".join(f"{v:>4}" for v in row))
    print("Ω      " + " ".join(f"{v:>4}" for v in L.canonical))


def cmd_param_verify(args):
    K = parse_field(args.field)
    P, Q = parse_poly(args.p, K), parse_poly(args.q, K)
    t = Triple(parse_poly(args.a, K), parse_poly(args.b, K), parse_poly(args.c, K))
    ok = verify_triple(P, Q, t)
    out = {"identity": ok, **t.to_dict()}
    if ok:
        out["parametrization"] = parametrize(P, Q, t).to_dict()
    if args.json:
        print(json.dumps(out, indent=2))
    else:
        print(f"A^2 P + B^2 Q = C^2: {'holds' if ok else 'fails'}")
        if ok:
            par = out["parametrization"]
            print(f"y = {par['y']}\nz = {par['z']}\nu = {par['u']}")
    return EXIT_OK if ok else EXIT_INPUT


# -- sweep ----------------------------------------------------------------------

def _cache_key(field, P, Q, seed) -> str:
    raw = json.dumps([str(field), str(P), str(Q), __version__, seed])
    return hashlib.sha256(raw.encode()).hexdigest()[:24]


def _sweep_polys(K, dmin, dmax):
    """Squarefree polynomials with leading coefficient 1 or a fixed nonsquare.

    Scaling P or Q by a square changes nothing, so over a finite field these
    two leading coefficients cover every pair.
    """
    leads = [K.one, K.nonsquare()]
    out = []
    for d in range(dmin, dmax + 1):
        for tail in itertools.product(list(K.elements()), repeat=d):
            for lead in leads:
                p = Poly(K, list(tail) + [lead])
                if p.is_squarefree():
                    out.append(p)
    return out


def _sweep_one(job):
    field, P, Q, opts = job
    K = parse_field(field)
    P, Q = parse_poly(P, K), parse_poly(Q, K)
    try:
        r = analyze(P, Q, opts)
    except PreconditionError as exc:
        return {"P": str(P), "Q": str(Q), "skipped": str(exc)}
    except ConsistencyError as exc:
        return {"P": str(P), "Q": str(Q), "consistency_error": str(exc)}
    return {"P": str(P), "Q": str(Q), "s": r.s["total"] if r.s else None,
            "verdict": r.verdict.tag, "branch": r.verdict.branch, "witness": r.witness is not None}


def cmd_sweep(args):
    K = parse_field(args.field)
    if not isinstance(K, FiniteField):
        raise PreconditionError("sweep enumerates pairs over a finite field")
    polys = _sweep_polys(K, args.min_deg, args.max_deg)
    pairs = [(P, Q) for P in polys for Q in polys]
    if args.limit:
        pairs = pairs[:args.limit]
    done = set()
    if os.path.exists(args.out):
        with open(args.out) as fh:
            for line in fh:
                if line.strip():
                    done.add(json.loads(line)["key"])
    opts = _options(args)
    todo = [(_cache_key(K, P, Q, args.seed), P, Q) for P, Q in pairs]
    todo = [(k, P, Q) for k, P, Q in todo if k not in done]
    jobs = [(str(K), str(P), str(Q), opts) for _, P, Q in todo]
    tally, bad = {}, 0
    with open(args.out, "a") as fh:
        if args.jobs > 1:
            with Pool(args.jobs) as pool:
                results = pool.imap(_sweep_one, jobs, chunksize=16)
                bad, tally = _write(fh, todo, results, K, args.seed, tally)
        else:
            bad, tally = _write(fh, todo, map(_sweep_one, jobs), K, args.seed, tally)
    summary = {"pairs": len(pairs), "cached": len(pairs) - len(todo), "computed": len(todo),
               "verdicts": tally, "consistency_errors": bad}
    print(json.dumps(summary, indent=2) if args.json else
          f"{len(pairs)} pairs: {len(todo)} computed, {len(pairs) - len(todo)} cached; "
          f"verdicts {tally}; consistency errors {bad}")
    return EXIT_CONSISTENCY if bad else EXIT_OK


def _write(fh, todo, results, K, seed, tally):
    bad = 0
    for (key, _, _), rec in zip(todo, results):
        rec = {"key": key, "field": str(K), "seed": seed, "version": __version__, **rec}
        fh.write(json.dumps(rec, sort_keys=True) + "\n")
        tag = rec.get("verdict", "skipped" if "skipped" in rec else "error")
        tally[tag] = tally.get(tag, 0) + 1
        bad += "consistency_error" in rec
    fh.flush()
    return bad, tally


# -- entry point -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit JSON instead of text")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--witness-deg-bound", type=int, default=1,
                        help="degree bound for the triple search (negative disables it)")
    common.add_argument("--conic-search-bound", type=int, default=30)
    common.add_argument("--jobs", type=int, default=1)

    ap = _Parser(prog="conicrat", description="Rationality of conic bundles z^2 = P(x) y^2 + Q(x).")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    p = sub.add_parser("analyze", parents=[common], help="verdict for z^2 = P y^2 + Q")
    p.add_argument("--field", required=True)
    p.add_argument("--p", required=True)
    p.add_argument("--q", required=True)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("chatelet", parents=[common], help="verdict for z^2 = a y^2 + P")
    p.add_argument("--field", required=True)
    p.add_argument("--a", required=True)
    p.add_argument("--p", required=True)
    p.set_defaults(func=cmd_chatelet)

    p = sub.add_parser("sinv", parents=[common], help="degenerate fibers and the s-invariant")
    p.add_argument("--field", required=True)
    p.add_argument("--p", required=True)
    p.add_argument("--q", required=True)
    p.add_argument("--bruteforce", type=int, default=0, metavar="D",
                   help="cross-check by counting points over extensions of degree <= D")
    p.set_defaults(func=cmd_sinv)

    p = sub.add_parser("cohomology", parents=[common], help="H^-1 and H^1 of a Picard lattice action")
    p.add_argument("--action", help="JSON file with a serialized group action")
    p.add_argument("--blocks", help="Chatelet root blocks, e.g. 2,2,3")
    p.add_argument("--construction", choices=sorted(_CONSTRUCTIONS), default="diagonal")
    p.set_defaults(func=cmd_cohomology)

    p = sub.add_parser("lattice", parents=[common], help="blow-ups, blow-downs, elementary transformations")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--ops", default="", help='e.g. "blowup; blowdown E1; elem F 0,0,0"')
    p.set_defaults(func=cmd_lattice)

    p = sub.add_parser("sweep", parents=[common], help="exhaustive analysis over a finite field")
    p.add_argument("--field", required=True)
    p.add_argument("--min-deg", type=int, default=1)
    p.add_argument("--max-deg", type=int, default=2)
    p.add_argument("--limit", type=int, default=0)
    p.add_argument("--out", required=True, help="JSON-lines cache file")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("param-verify", parents=[common], help="check a triple and print its parametrization")
    p.add_argument("--field", required=True)
    p.add_argument("--p", required=True)
    p.add_argument("--q", required=True)
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--c", required=True)
    p.set_defaults(func=cmd_param_verify)
    return ap


def run(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # usage errors, --help, --version
        return exc.code if isinstance(exc.code, int) else EXIT_INPUT
    try:
        rc = args.func(args)
    except ConsistencyError as exc:
        print(f"consistency failure: {exc}", file=sys.stderr)
        return EXIT_CONSISTENCY
    except (ConicratError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK if rc is None else rc


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
