"""Command-line front end for generalized Markov cluster algebras.

Subcommands print cluster variables and matrices, resolve skein overlaps,
run verification suites, list the integer Markov tree and export data.

Exit codes: 0 success, 1 identity failure, 2 usage error.
"""
import argparse
import json
import os
import sys

from . import cluster as cl
from . import matrices as mx
from . import poset as po
from . import skein as sk
from . import verify as vf
from .farey import Frac, NotInterior, NotReduced, parity, triple_of

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
DEFAULT_MAX_DEPTH = 10
FAMILIES = ("cohn", "mm", "dual-cohn", "dual-mm", "mwm")
_DUAL = {"cohn": "dual-cohn", "mm": "dual-mm"}
_MATRIX_FN = {
    "cohn": mx.combinatorial_C,
    "mm": mx.combinatorial_M,
    "dual-cohn": mx.dual_C,
    "dual-mm": mx.dual_M,
    "mwm": mx.mwm,
}


class UsageError(Exception):
    pass


# argument helpers -----------------------------------------------------------

def parse_k(s):
    try:
        parts = [int(v) for v in s.split(",")]
    except ValueError:
        raise UsageError("--k expects three integers a,b,c, got %r" % s)
    if len(parts) != 3 or min(parts) < 0:
        raise UsageError("--k expects three nonnegative integers a,b,c, got %r" % s)
    return po.KParams(*parts)


def parse_frac(s):
    try:
        return Frac.parse(s)
    except NotReduced:
        raise UsageError("fraction %s is not reduced" % s)
    except ValueError:
        raise UsageError("bad fraction %r (expected p/q)" % s)


def max_depth():
    raw = os.environ.get("MCL_MAX_DEPTH", "")
    try:
        return int(raw) if raw else DEFAULT_MAX_DEPTH
    except ValueError:
        raise UsageError("MCL_MAX_DEPTH must be an integer, got %r" % raw)


def check_depth(depth):
    cap = max_depth()
    if depth < 0:
        raise UsageError("--depth must be nonnegative")
    if depth > cap:
        raise UsageError("--depth %d exceeds MCL_MAX_DEPTH=%d" % (depth, cap))
    return depth


def dump(obj):
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def emit(text, out=None):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def load_poset(path):
    try:
        with open(path) as fh:
            return po.FencePoset.from_json(fh.read())
    except OSError as e:
        raise UsageError("cannot read %s: %s" % (path, e.strerror))
    except (ValueError, KeyError, TypeError) as e:
        raise UsageError("%s is not a fence poset JSON: %s" % (path, e))


def _family(args):
    fam = args.family
    if getattr(args, "dual", False):
        if fam not in _DUAL:
            raise UsageError("--dual applies to cohn and mm only")
        fam = _DUAL[fam]
    return fam


# commands -------------------------------------------------------------------

def variable(args):
    f, k = parse_frac(args.frac), parse_k(args.k)
    try:
        return cl.cluster_variable(args.branch, f, k, principal=args.principal)
    except ValueError as e:
        raise UsageError(str(e))


def cmd_var(args):
    f, k = parse_frac(args.frac), parse_k(args.k)
    val = variable(args)
    if args.json:
        emit(dump({"branch": args.branch, "frac": str(f), "k": list(k),
                   "principal": args.principal, "value": val.to_json_obj(), "text": str(val)}), args.out)
    else:
        emit("x_{%d,%s} = %s\n" % (args.branch, f, val), args.out)
    return EXIT_OK


def matrix_for(family, f, k):
    try:
        return _MATRIX_FN[family](f, k)
    except (ValueError, KeyError) as e:
        raise UsageError("%s matrix undefined at %s: %s" % (family, f, e))


def cmd_matrix(args):
    f, k = parse_frac(args.frac), parse_k(args.k)
    fam = _family(args)
    m = matrix_for(fam, f, k)
    if args.json:
        emit(dump({"family": fam, "frac": str(f), "k": list(k), "matrix": m.to_json_obj(), "text": str(m)}), args.out)
    else:
        emit("%s_{%s} = %s\n" % (fam, f, m), args.out)
    return EXIT_OK


def cmd_triple(args):
    f, k = parse_frac(args.farey), parse_k(args.k)
    fam = _family(args)
    if fam == "mwm":
        raise UsageError("mwm has no triple structure")
    try:
        fracs = triple_of(f)
    except NotInterior as e:
        raise UsageError(str(e))
    t = mx.combinatorial_triple(fracs, k, fam)
    validate = mx.validate_cgc if t.kind == "cgc" else mx.validate_cmm
    try:
        kappas = validate(t)
        report = {"valid": True, "kappas": list(kappas), "expected_kappas": [parity(g, k) for g in fracs]}
        ok = report["kappas"] == report["expected_kappas"]
    except (mx.ValidationFailed, ArithmeticError) as e:
        report = {"valid": False, "reason": str(e)}
        ok = False
    if args.json:
        emit(dump({"family": fam, "k": list(k), "fracs": [str(g) for g in fracs],
                   "matrices": [m.to_json_obj() for m in t], "validation": report}), args.out)
    else:
        lines = ["%s_{%s} = %s" % (fam, g, m) for g, m in zip(fracs, t)]
        lines.append("valid: %s" % ok)
        emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_skein(args):
    inputs = [load_poset(p) for p in args.input]
    kind = args.kind
    if kind in (sk.CROSSING, sk.GRAFT) and len(inputs) != 2:
        raise UsageError("%s needs two input posets" % kind)
    if kind == sk.KISS and len(inputs) != 1:
        raise UsageError("kiss needs one input poset")
    p1 = inputs[0]
    p2 = inputs[1] if len(inputs) > 1 else None
    overlaps = sk.find_overlaps(p1, p2, kind)
    out = {"kind": kind, "overlaps": [o.to_json_obj() for o in overlaps]}
    ok = True
    if args.resolve:
        if not overlaps:
            out["resolution"] = None
            out["verdict"] = "no overlap"
        else:
            try:
                res = sk.resolve(kind, p1, p2, overlaps[0])
            except sk.InvalidOverlap as e:
                raise UsageError(str(e))
            ok = res.holds()
            if ok and all(len(p) <= args.oracle_max for p in inputs):
                ok = res.holds(oracle=True)
            out["resolution"] = res.to_json_obj()
            out["verdict"] = "identity holds" if ok else "identity FAILS"
    if args.json or args.resolve:
        emit(dump(out), args.out)
    else:
        lines = ["%d %s overlap(s)" % (len(overlaps), kind)]
        lines += [json.dumps(o.to_json_obj(), sort_keys=True) for o in overlaps]
        emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_verify(args):
    depth = check_depth(args.depth)
    ks = vf.CANONICAL_K
    if args.k == "all":
        ks = vf.ALL_K
    elif args.k:
        ks = (parse_k(args.k),)
    try:
        report = vf.run_suite(args.suite, depth, ks, jobs=args.jobs)
    except vf.SuiteUnknown:
        raise UsageError("unknown suite %r; choose from %s" % (args.suite, ", ".join(vf.SUITES)))
    if args.json:
        emit(dump(report.to_json_obj(timing=args.timing)), args.out)
    else:
        lines = ["%s: %d instances, %d checks, %d failures" % (
            report.suite, report.instances, report.checks, len(report.failures))]
        for fl in report.failures:
            lines.append("FAIL %s: %s: %s != %s" % (fl["instance"], fl["identity"], fl["lhs"], fl["rhs"]))
        if args.timing:
            lines.append("wall time %.2fs" % report.wall_time)
        emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_markov(args):
    k = parse_k(args.k)
    depth = check_depth(args.depth)
    nodes = cl.markov_tree(k, depth)
    rows, bad = [], 0
    for n in nodes:
        lhs, rhs = cl.gm_lhs_rhs(*n.values, po.KParams(*n.kappas))
        holds = lhs == rhs
        bad += not holds
        rows.append({"word": n.word, "fracs": [str(f) for f in n.fracs],
                     "triple": list(n.values), "kappas": list(n.kappas), "gm": holds})
    if args.json:
        emit(dump({"k": list(k), "depth": depth, "nodes": rows, "failures": bad}), args.out)
    else:
        lines = ["%-10s %s%s" % (r["word"], tuple(r["triple"]), "" if r["gm"] else "  GM FAILS") for r in rows]
        emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK if not bad else EXIT_FAIL


def cmd_export(args):
    f, k = parse_frac(args.frac), parse_k(args.k)
    mode = po.PRINCIPAL if args.principal else po.TRIVIAL
    if args.kind == "poset":
        if f.q == 0 and args.variant in ("P", "tilde", "circ"):
            raise UsageError("1/0 has no arc poset")
        builders = {
            "P": lambda: po.build_P(f, k, mode),
            "H": lambda: po.build_H(k, mode),
            "tilde": lambda: po.build_tilde(f, k, mode),
            "circ": lambda: po.build_circ(f, k, mode),
        }
        try:
            p = builders[args.variant]()
        except ValueError as e:
            raise UsageError(str(e))
        name = "P" if args.variant == "H" else "P_%d_%d" % (f.p, f.q)
        text = p.to_dot(name) if args.format == "dot" else dump(p.to_json_obj())
    elif args.format == "dot":
        raise UsageError("dot export is only available for posets")
    elif args.kind == "matrix":
        fam = _family(args)
        m = matrix_for(fam, f, k)
        text = dump({"family": fam, "frac": str(f), "k": list(k), "matrix": m.to_json_obj()})
    else:
        val = variable(args)
        text = dump({"branch": args.branch, "frac": str(f), "k": list(k),
                     "principal": args.principal, "value": val.to_json_obj()})
    try:
        emit(text, args.out)
    except OSError as e:
        raise UsageError("cannot write %s: %s" % (args.out, e.strerror))
    return EXIT_OK


# parser ---------------------------------------------------------------------

def build_parser():
    ap = argparse.ArgumentParser(prog="markov-cluster", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, frac=True):
        p.add_argument("--k", default="0,0,0", help="k1,k2,k3 (default 0,0,0)")
        if frac:
            p.add_argument("--frac", required=True, help="fraction p/q")
        p.add_argument("--json", action="store_true", help="machine-readable output")
        p.add_argument("--out", help="write output to FILE")

    p = sub.add_parser("var", help="cluster variable x_{branch,p/q}")
    common(p)
    p.add_argument("--branch", type=int, default=1, choices=(1, 2, 3))
    p.add_argument("--principal", action="store_true", help="principal coefficients")
    p.set_defaults(func=cmd_var)

    p = sub.add_parser("matrix", help="combinatorial matrix of a fraction")
    common(p)
    p.add_argument("--family", choices=FAMILIES, default="cohn")
    p.add_argument("--dual", action="store_true", help="use the dual family")
    p.set_defaults(func=cmd_matrix)

    p = sub.add_parser("triple", help="matrix triple at a Farey vertex with validation")
    common(p, frac=False)
    p.add_argument("--farey", required=True, help="middle fraction of the Farey triple")
    p.add_argument("--family", choices=FAMILIES[:4], default="cohn")
    p.add_argument("--dual", action="store_true")
    p.set_defaults(func=cmd_triple)

    p = sub.add_parser("skein", help="find and resolve overlaps of fence posets")
    p.add_argument("--kind", choices=sk.KINDS, required=True)
    p.add_argument("--input", nargs="+", required=True, metavar="JSON")
    p.add_argument("--resolve", action="store_true", help="resolve the first overlap and check the identity")
    p.add_argument("--oracle-max", type=int, default=18, help="also check by ideal enumeration up to this size")
    p.add_argument("--json", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_skein)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("suite", help=", ".join(vf.SUITES))
    p.add_argument("--depth", type=int, default=3)
    p.add_argument("--k", default=None, help="a,b,c or 'all' (default: sorted k in {0,1,2}^3)")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--timing", action="store_true", help="report wall time")
    p.add_argument("--json", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("markov", help="integer Markov tree at x = 1")
    p.add_argument("--k", default="0,0,0")
    p.add_argument("--depth", type=int, default=3)
    p.add_argument("--json", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_markov)

    p = sub.add_parser("export", help="export a poset, matrix or variable")
    p.add_argument("kind", choices=("poset", "matrix", "var"))
    common(p)
    p.add_argument("--format", choices=("json", "dot"), default="json")
    p.add_argument("--variant", choices=("P", "H", "tilde", "circ"), default="P", help="poset variant")
    p.add_argument("--family", choices=FAMILIES, default="cohn")
    p.add_argument("--dual", action="store_true")
    p.add_argument("--branch", type=int, default=1, choices=(1, 2, 3))
    p.add_argument("--principal", action="store_true")
    p.set_defaults(func=cmd_export)
    return ap


def main(argv=None):
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as e:
        sys.stderr.write("error: %s\n" % e)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
