"""Command-line front end.

Every subcommand prints one JSON document (or DOT for ``poset --format dot``).
Exit codes: 2 for usage errors, 3 for domain errors, 4 when a search bound runs out.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction

import mpmath

from .arith import (InvalidModulusError, NotInZkError, UnsupportedPrimeError, factorize,
                    format_zk, full_divisors, parse_zk, sample_zk, to_base_k)
from .confining import (Bound, BoundExhausted, Domain, UnsupportedSubsetError, condition_b_report,
                        get_subset, strictness_report, verify_condition_a, verify_condition_c)
from .group import BSGroup, GroupElement, parse_character
from .plane import (DEFAULT_DPS, InvalidPointError, PlanePoint, act as plane_act, basepoint,
                    busemann_estimate as plane_estimate, busemann_exact, distance as plane_distance,
                    orbit_density_check, random_point, sm_generating_set)
from .structures import bns_complement, export_poset, in_bns
from .tree import BassSerreTree, OutOfWindowError
from .words import (Truncation, WordContext, WordError, eval_word, normal_form, word_length_bfs,
                    word_length_tau, four_point_delta)

EXIT_USAGE, EXIT_DOMAIN, EXIT_BOUND = 2, 3, 4

DOMAIN_ERRORS = (InvalidModulusError, NotInZkError, UnsupportedPrimeError, UnsupportedSubsetError,
                 InvalidPointError, OutOfWindowError, WordError)


class UsageError(Exception):
    pass


def _load(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed JSON {text!r}: {exc.msg}") from None


def _element(G: BSGroup, text: str) -> GroupElement:
    data = _load(text)
    if not isinstance(data, dict) or "z" not in data and "r" not in data:
        raise UsageError(f"an element is {{\"r\": \"a/b\", \"z\": [...]}}, got {text!r}")
    try:
        r = Fraction(str(data.get("r", "0")))
    except ValueError:
        raise UsageError(f"bad rational {data.get('r')!r}") from None
    z = data.get("z", [0] * G.n)
    if not isinstance(z, list) or len(z) != G.n or not all(isinstance(c, int) for c in z):
        raise UsageError(f"z must be a list of {G.n} integers")
    return G.element(r, z)


def _elem_json(g: GroupElement) -> dict:
    return {"r": format_zk(g.r), "z": list(g.z)}


def _mp(x, digits: int) -> str:
    return mpmath.nstr(x, digits, strip_zeros=False)


def _context(args) -> WordContext:
    G = BSGroup(args.k)
    Q = get_subset(G, args.subset)
    return WordContext(G, Q, parse_character(args.character, G))


def _truncation(args) -> Truncation:
    return Truncation(args.q_exp, args.q_num, args.z_box, args.depth)


# -- subcommands ----------------------------------------------------------------------------


def cmd_factor(args):
    f = factorize(args.k)
    return {"k": f.k, "primes": [[p, m] for p, m in f.primes], "full_divisors": full_divisors(f)}


def cmd_expand(args):
    f = factorize(args.k)
    x = parse_zk(args.value, f)
    return {"k": f.k, "value": format_zk(x), "expansion": to_base_k(x, f).format(args.delimiter)}


def cmd_mul(args):
    G = BSGroup(args.k)
    return _elem_json(G.multiply(_element(G, args.g), _element(G, args.h)))


def cmd_inv(args):
    G = BSGroup(args.k)
    return _elem_json(G.inverse(_element(G, args.g)))


def cmd_confining(args):
    G = BSGroup(args.k)
    Q = get_subset(G, args.subset)
    rho = parse_character(args.character, G)
    domain = Domain(Bound(args.num, args.exp), args.box)
    rng = random.Random(args.seed)
    samples = [sample_zk(rng, G.fact, args.num, args.exp) for _ in range(args.samples)]
    reports = [
        verify_condition_a(Q, rho, domain),
        condition_b_report(Q, rho, samples),
        verify_condition_c(Q, rho, Bound(args.num, args.exp)),
        strictness_report(Q, rho),
    ]
    return {"k": G.k, "reports": [r.to_json() for r in reports]}


def cmd_wordlen(args):
    ctx = _context(args)
    g = _element(ctx.G, args.element)
    out = {"k": ctx.G.k, "subset": ctx.Q.name, "character": ctx.rho.to_json(),
           "element": _elem_json(g)}
    if args.oracle in ("tau", "both"):
        out["tau"] = word_length_tau(ctx, g, args.lattice_bound).to_json()
    exhausted = False
    if args.oracle in ("bfs", "both"):
        res = word_length_bfs(ctx, g, _truncation(args))
        out["bfs"] = res.to_json()
        exhausted = res.length is None
    return out, (EXIT_BOUND if exhausted else 0)


def cmd_normalform(args):
    ctx = _context(args)
    text = sys.stdin.read() if args.word == "-" else open(args.word).read()
    word = ctx.word_from_json(_load(text))
    nf = normal_form(ctx, word)
    return {"k": ctx.G.k, "subset": ctx.Q.name, "input_length": len(word),
            "output_length": len(nf), "value": _elem_json(eval_word(ctx, word)), **nf.to_json()}


def cmd_tree(args):
    G = BSGroup(args.k)
    T = BassSerreTree(G, args.i)
    out = {"k": G.k, "tree": args.i, "op": args.tree_op}
    if args.tree_op == "act":
        out["result"] = T.act(_element(G, args.element), T.parse_vertex(_load(args.vertex))).to_json()
    elif args.tree_op == "dist":
        out["result"] = T.distance(T.parse_vertex(_load(args.u)), T.parse_vertex(_load(args.v)))
    elif args.tree_op == "busemann":
        g = _element(G, args.element)
        depth = args.depth if args.depth is not None else T.busemann_depth(g)
        out["result"] = T.busemann(g)
        out["estimate"] = T.busemann_estimate(g, depth)
        out["depth"] = depth
    else:
        g = _element(G, args.element)
        out["result"] = T.element_type(g)
        out["translation_length"] = T.translation_length(g)
    return out


def cmd_plane(args):
    G = BSGroup(args.k)
    dps = args.precision_digits
    digits = min(dps, 30)
    out = {"k": G.k, "op": args.plane_op, "precision_digits": dps}
    with mpmath.workdps(dps):
        if args.plane_op == "act":
            w = PlanePoint.from_json(_load(args.point), dps) if args.point else basepoint(dps)
            out["result"] = plane_act(G, _element(G, args.element), w).to_json(digits)
        elif args.plane_op == "dist":
            u = PlanePoint.from_json(_load(args.u), dps)
            v = PlanePoint.from_json(_load(args.v), dps)
            out["result"] = _mp(plane_distance(u, v), digits)
        elif args.plane_op == "busemann":
            g = _element(G, args.element)
            exact = busemann_exact(G, g)
            out["exact"] = str(exact)
            out["result"] = _mp(exact.evalf(dps), digits)
            out["estimate"] = _mp(plane_estimate(G, g, args.T, dps), digits)
            out["T"] = args.T
        elif args.plane_op == "smgen":
            D = mpmath.mpf(args.D) if args.D is not None else 2 * mpmath.log(G.k) + 1
            entries = sm_generating_set(G, D, args.num, args.exp, args.box, dps)
            out["D"] = _mp(D, digits)
            out["count"] = len(entries)
            out["result"] = [{**_elem_json(e.element), "displacement": _mp(e.displacement, 20),
                              "borderline": e.borderline} for e in entries]
        else:
            if args.seed is None:
                raise UsageError("density needs --seed")
            rng = random.Random(args.seed)
            pts = [random_point(rng, G.k, dps) for _ in range(args.samples)]
            rep = orbit_density_check(G, pts, args.exp, args.box, dps)
            out["result"] = rep.to_json()
            out["seed"] = args.seed
            out["samples"] = args.samples
    return out


def cmd_poset(args):
    doc = export_poset(args.k, args.format)
    return doc if doc.endswith("\n") else doc + "\n"


def cmd_bns(args):
    G = BSGroup(args.k)
    out = {"complement": [[int(c) for c in ch.values] for ch in bns_complement(G)]}
    if args.character:
        chi = parse_character(args.character, G)
        out["character"] = chi.to_json()
        out["in_bns"] = in_bns(chi, G)
    return out


def cmd_delta(args):
    if args.seed is None:
        raise UsageError("delta needs --seed")
    G = BSGroup(args.k)
    rng = random.Random(args.seed)
    if args.model == "tree":
        T = BassSerreTree(G, args.i)
        W = T.window(2)
        pts = [W.vertex_at(rng.randrange(len(W))) for _ in range(args.points)]
        delta = four_point_delta(pts, T.distance, args.samples, rng)
        value = str(delta)
    else:
        dps = args.precision_digits
        with mpmath.workdps(dps):
            base = basepoint(dps)
            pts = []
            for _ in range(args.points):
                g = GroupElement(sample_zk(rng, G.fact, 20, 2),
                                 tuple(rng.randint(-3, 3) for _ in range(G.n)))
                pts.append(plane_act(G, g, base))
            delta = four_point_delta(pts, plane_distance, args.samples, rng)
            value = _mp(delta, 20)
    return {"k": G.k, "model": args.model, "points": args.points, "samples": args.samples,
            "seed": args.seed, "delta": value}


# -- parser --------------------------------------------------------------------------------


def _add_context(p):
    p.add_argument("--subset", required=True)
    p.add_argument("--character", required=True)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gbs", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name, func, **kw):
        p = sub.add_parser(name, **kw)
        p.add_argument("--k", type=int, required=True)
        p.set_defaults(func=func)
        return p

    command("factor", cmd_factor, help="factorization and full divisors")
    p = command("expand", cmd_expand, help="base-k expansion")
    p.add_argument("--value", required=True)
    p.add_argument("--delimiter", default=":")
    p = command("mul", cmd_mul, help="product of two elements")
    p.add_argument("g")
    p.add_argument("h")
    p = command("inv", cmd_inv, help="inverse of an element")
    p.add_argument("g")

    conf = sub.add_parser("confining", help="confining-subset verifiers")
    csub = conf.add_subparsers(dest="confining_op", required=True)
    p = csub.add_parser("check")
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=cmd_confining)
    _add_context(p)
    p.add_argument("--num", type=int, default=100)
    p.add_argument("--exp", type=int, default=3)
    p.add_argument("--box", type=int, default=4)
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)

    def word_flags(p):
        _add_context(p)
        p.add_argument("--q-exp", type=int, default=1)
        p.add_argument("--q-num", type=int, default=5)
        p.add_argument("--z-box", type=int, default=1)
        p.add_argument("--depth", type=int, default=6)

    p = command("wordlen", cmd_wordlen, help="word length over Q u Z_rho")
    word_flags(p)
    p.add_argument("--element", required=True)
    p.add_argument("--oracle", choices=["tau", "bfs", "both"], default="both")
    p.add_argument("--lattice-bound", type=int, default=6)
    p = command("normalform", cmd_normalform, help="rewrite a word into tau-form")
    _add_context(p)
    p.add_argument("--word", required=True, help="JSON word file, or - for stdin")

    tree = sub.add_parser("tree", help="the Bass-Serre tree T_i")
    tsub = tree.add_subparsers(dest="tree_op", required=True)
    for op in ("act", "dist", "busemann", "type"):
        p = tsub.add_parser(op)
        p.add_argument("--k", type=int, required=True)
        p.add_argument("--i", type=int, default=1)
        p.set_defaults(func=cmd_tree)
        if op == "dist":
            p.add_argument("--u", required=True)
            p.add_argument("--v", required=True)
        else:
            p.add_argument("--element", required=True)
        if op == "act":
            p.add_argument("--vertex", default='{"x": "0", "h": 0}')
        if op == "busemann":
            p.add_argument("--depth", type=int)

    plane = sub.add_parser("plane", help="the upper half-plane model")
    psub = plane.add_subparsers(dest="plane_op", required=True)
    for op in ("act", "dist", "busemann", "smgen", "density"):
        p = psub.add_parser(op)
        p.add_argument("--k", type=int, required=True)
        p.add_argument("--precision-digits", type=int, default=DEFAULT_DPS)
        p.set_defaults(func=cmd_plane)
        if op == "act":
            p.add_argument("--element", required=True)
            p.add_argument("--point")
        elif op == "dist":
            p.add_argument("--u", required=True)
            p.add_argument("--v", required=True)
        elif op == "busemann":
            p.add_argument("--element", required=True)
            p.add_argument("--T", type=float, default=30.0)
        elif op == "smgen":
            p.add_argument("--D", type=str)
            p.add_argument("--num", type=int, default=10)
            p.add_argument("--exp", type=int, default=1)
            p.add_argument("--box", type=int, default=1)
        else:
            p.add_argument("--samples", type=int, default=100)
            p.add_argument("--seed", type=int)
            p.add_argument("--exp", type=int, default=6)
            p.add_argument("--box", type=int, default=2)

    p = command("poset", cmd_poset, help="poset of hyperbolic structures")
    p.add_argument("--format", choices=["dot", "json"], default="json")
    p = command("bns", cmd_bns, help="BNS invariant")
    p.add_argument("--character")
    p = command("delta", cmd_delta, help="four-point delta estimate")
    p.add_argument("--model", choices=["tree", "plane"], required=True)
    p.add_argument("--i", type=int, default=1)
    p.add_argument("--points", type=int, default=40)
    p.add_argument("--samples", type=int, default=2000)
    p.add_argument("--seed", type=int)
    p.add_argument("--precision-digits", type=int, default=DEFAULT_DPS)
    return parser


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    code = 0
    try:
        result = args.func(args)
        if isinstance(result, tuple):
            result, code = result
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BoundExhausted as exc:
        print(f"bound exhausted: {exc}", file=sys.stderr)
        return EXIT_BOUND
    except DOMAIN_ERRORS as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except ValueError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    if isinstance(result, str):
        out.write(result)
    else:
        out.write(json.dumps(result) + "\n")
    return code


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
