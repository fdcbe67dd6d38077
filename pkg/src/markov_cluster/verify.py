"""Verification suites: exhaustive identity checks over Farey-tree vertices.

A suite turns (depth, k list, options) into a list of instances. Each
instance is an id plus a thunk that returns (identity, lhs, rhs) rows; a
row fails when lhs != rhs. Instances run on a thread pool and the report
is sorted by instance id, so output does not depend on scheduling.
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import product
import random
import time

from . import cluster as cl
from . import matrices as mx
from . import poset as po
from . import skein as sk
from .farey import Frac, parity, parity_index, walk
from .laurent import LaurentPoly, ONE, X1, X2, lp_div_exact, lp_specialize

CANONICAL_K = tuple(po.KParams(*t) for t in product(range(3), repeat=3) if t[0] <= t[1] <= t[2])
ALL_K = tuple(po.KParams(*t) for t in product(range(3), repeat=3))

_AT_ONE = {"x1": 1, "x2": 1, "x3": 1}


class SuiteUnknown(KeyError):
    pass


@dataclass
class VerifyReport:
    suite: str
    instances: int = 0
    checks: int = 0
    failures: list = field(default_factory=list)
    wall_time: float = 0.0

    @property
    def ok(self):
        return not self.failures

    def to_json_obj(self, timing=False):
        out = {"suite": self.suite, "instances": self.instances, "checks": self.checks,
               "failures": self.failures, "ok": self.ok}
        if timing:
            out["wall_time"] = round(self.wall_time, 3)
        return out


def _ser(v):
    if isinstance(v, LaurentPoly):
        return str(v)
    if isinstance(v, mx.Mat2):
        return str(v)
    if isinstance(v, mx.MatTriple):
        return "(%s, %s, %s)" % tuple(str(m) for m in v)
    return repr(v)


def _vertices(depth):
    return [(w, t) for w, t in walk(depth)]


def _fractions(depth, interior=True):
    """Distinct fractions appearing in Farey triples up to depth."""
    seen = set()
    for _, t in walk(depth):
        for f in t:
            if f.q == 0 or (interior and f.p == 0):
                continue
            seen.add(f)
    return sorted(seen, key=lambda f: (f.p * 1.0 / f.q, f.q))


def _kid(k):
    return "k=%s" % k


# suites -----------------------------------------------------------------

def suite_gm_equation(depth, ks, opts):
    out = []
    for k in ks:
        for w, t in _vertices(depth):
            def run(k=k, t=t):
                xs = [cl.cluster_variable(1, f, k) for f in t]
                vals = [lp_specialize(x, _AT_ONE).constant_term() for x in xs]
                kap = tuple(parity(f, k) for f in t)
                # the k attached to each entry multiplies the product of the other two
                lhs, rhs = cl.gm_lhs_rhs(*vals, po.KParams(*kap))
                return [
                    ("GM equation at x=1", lhs, rhs),
                    ("Markov invariant on cluster",
                     _invariant(xs, kap), cl.markov_invariant(k)),
                ]
            out.append(("%s %s" % (_kid(k), t), run))
    return out


def _invariant(xs, kap):
    a, b, c = xs
    ka, kb, kc = kap
    return lp_div_exact(a * a + b * b + c * c + ka * b * c + kb * a * c + kc * a * b, a * b * c)


def suite_poset_vs_mutation(depth, ks, opts):
    out = []
    for k in ks:
        for f in _fractions(depth, interior=False):
            def run(k=k, f=f):
                rows = [
                    ("poset formula = Vieta recursion", cl.poset_variable(1, f, k), cl.cluster_variable(1, f, k)),
                    ("Vieta recursion = seed mutation", cl.cluster_variable(1, f, k), cl.mutation_variable(1, f, k)),
                ]
                for b in (2, 3):
                    rows.append(("branch %d poset formula" % b, cl.poset_variable(b, f, k), cl.cluster_variable(b, f, k)))
                if opts.get("principal"):
                    prin = cl.mutation_variable(1, f, k, principal=True)
                    rows.append(("principal poset formula", cl.poset_variable(1, f, k, po.PRINCIPAL), prin))
                    rows.append(("separation formula", cl.separation_formula(1, f, k), prin))
                return rows
            out.append(("%s %s" % (_kid(k), f), run))
    return out


def suite_cohn(depth, ks, opts):
    out = []
    for k in ks:
        M = mx.markov_M(k)
        for w, t in _vertices(depth):
            def run(k=k, t=t, w=w, M=M):
                rows = []
                for f in t:
                    C = mx.combinatorial_C(f, k)
                    rows.append(("det C_%s" % f, C.det(), ONE))
                    rows.append(("tr C_%s" % f, C.trace(), M * C.b - parity(f, k)))
                    rows.append(("(1,2)-entry of C_%s" % f, C.b, cl.cluster_variable(1, f, k)))
                l, m, r = t
                Cl, Cm, Cr = (mx.combinatorial_C(f, k) for f in t)
                rows.append(("C_mid = C_left C_right - S", Cm, Cl @ Cr - mx.comb_S(m, k)))
                tree = mx.comb_tree_vertex(k, w, "cohn")
                rows.append(("combinatorial Cohn tree vertex", tree, mx.combinatorial_triple(t, k, "cohn")))
                kap = mx.validate_cgc(tree)
                trs = [m_.trace() for m_ in tree]
                rows.append(("traces solve the second GM equation", cl.check_second_GM(*trs, kap), True))
                if m.q and m.p:
                    rows.append(("band identity X_circ = M x - k",
                                 po.xmono(po.circ_g_vector(m)) * po.weight_poly(po.build_circ(m, k)),
                                 M * cl.cluster_variable(1, m, k) - parity(m, k)))
                return rows
            out.append(("%s %s" % (_kid(k), w or "root"), run))
    return out


def suite_mm(depth, ks, opts):
    out = []
    for k in ks:
        for w, t in _vertices(depth):
            def run(k=k, t=t, w=w):
                rows = []
                for f in t:
                    Mf = mx.combinatorial_M(f, k)
                    rows.append(("M_%s = psi_M^-1(C)" % f, Mf, mx.psi(mx.markov_M(k), mx.combinatorial_C(f, k), k, inverse=True)))
                    rows.append(("tr M_%s = -k" % f, Mf.trace(), LaurentPoly.const(-parity(f, k))))
                    rows.append(("det M_%s" % f, Mf.det(), ONE))
                tree = mx.comb_tree_vertex(k, w, "mm")
                rows.append(("combinatorial MM tree vertex", tree, mx.combinatorial_triple(t, k, "mm")))
                X, Y, Z = tree
                rows.append(("XYZ = T", X @ Y @ Z, mx.T_matrix(k)))
                rows.append(("MM triple validates", mx.is_valid(tree), True))
                if not w:
                    root = mx.cmm_root(mx.COMB_SIGMA, lp_div_exact(X1, X2), k)
                    rows.append(("MM tree root is CMM tree (1 3 2), x1/x2", tree, root))
                return rows
            out.append(("%s %s" % (_kid(k), w or "root"), run))
    return out


def suite_psi_phi(depth, ks, opts):
    out = []
    for k in ks:
        g = mx.decomposition_g(mx.COMB_SIGMA, k)
        for w, t in _vertices(depth):
            def run(k=k, w=w, g=g):
                rows = []
                cgc = mx.comb_tree_vertex(k, w, "cohn")
                dec = mx.mm_decompose(cgc, mx.COMB_SIGMA)
                rows.append(("Phi(MM decomposition) = triple", mx.phi(dec), cgc))
                rows.append(("MM decomposition validates", mx.is_valid(dec), True))
                step = lambda s: mx.Psi_triple(g, mx.phi(s), inverse=True)
                rows.append(("(Psi^-1 Phi)^2 = id on CMM triple", _strip(step(step(dec))), _strip(dec)))
                back = lambda s: mx.phi(mx.Psi_triple(g, s, inverse=True))
                rows.append(("(Phi Psi^-1)^2 = id on CGC triple", _strip(back(back(cgc))), _strip(cgc)))
                for m in cgc:
                    rows.append(("psi_g psi_g^-1 = id", mx.psi(g, mx.psi(g, m, k, inverse=True), k), m))
                mm = mx.Psi_triple(mx.markov_M(k), cgc, inverse=True)
                rows.append(("Psi_M^-1 maps Cohn tree to MM tree", _strip(mm), _strip(mx.comb_tree_vertex(k, w, "mm"))))
                return rows
            out.append(("%s %s" % (_kid(k), w or "root"), run))
    return out


def _strip(t):
    return (t.first, t.middle, t.last)


def suite_skein(depth, ks, opts):
    out = [("examples", _skein_examples)]
    for k in ks:
        for f in _fractions(depth):
            for mode in (po.TRIVIAL, po.PRINCIPAL):
                def run(k=k, f=f, mode=mode):
                    P = po.build_P(f, k, mode)
                    H = po.build_H(k, mode)
                    g = sk.resolve_graft(P, H)
                    rows = [("graft P with H gives P-tilde", g.first[0], po.build_tilde(f, k, mode)),
                            ("graft identity", g.lhs(), g.rhs())]
                    h = len(P)
                    kf = parity(f, k)
                    if kf and h >= 4:
                        # asymmetry of P realized as a kissing resolution in the dual
                        res, Q, back, resid = sk.asymmetry_resolution(P, kf)
                        other = po.slice_(P, 2, h) if P.dirs[0] == "D" else po.slice_(P, 1, h - 1)
                        rows.append(("asymmetry kissing resolution", res.lhs(), res.rhs()))
                        rows.append(("asymmetry split", po.W(Q), po.W(back) + resid))
                        rows.append(("asymmetry back piece", po.W(back), po.W(other)))
                        if mode == po.TRIVIAL:
                            gc = po.circ_g_vector(f)
                            expect = po.xmono(tuple(-v for v in gc)) * kf
                            if P.dirs[0] == "U":
                                # the sub-fence P[2, h] misses P(1), whose weight drops out
                                expect = expect * P.weights[0].inverse_monomial()
                            rows.append(("asymmetry residual", resid, expect))
                    return rows
                out.append(("%s %s %s" % (_kid(k), f, mode), run))
    samples = opts.get("samples", 30)
    for kind in sk.KINDS:
        for i in range(samples):
            def run(kind=kind, i=i):
                rng = random.Random("%s-%d" % (kind, i))
                p1, p2, o = sk.planted_instance(kind, rng, principal=bool(i % 2))
                res = sk.resolve(kind, p1, p2, o)
                return [("%s identity (DP)" % kind, res.lhs(), res.rhs()),
                        ("%s identity (ideal enumeration)" % kind,
                         res.lhs(po.brute_force_weight), res.rhs(po.brute_force_weight))]
            out.append(("planted %s %03d" % (kind, i), run))
    return out


def _skein_examples():
    rows = []
    p1, p2 = sk.example_crossing()
    o = sk.find_overlaps(p1, p2, sk.CROSSING)
    want = sk.OverlapSpec(sk.CROSSING, 3, 4, 3, 4)
    rows.append(("crossing overlap at [3,4] found", want in o, True))
    res = sk.resolve_crossing(p1, p2, want)
    count = lambda p: lp_specialize(po.weight_poly(p), _AT_ONE).constant_term()
    counts = [count(p) for p in (p1, p2) + res.first + res.second]
    rows.append(("ideal counts", counts, [12, 7, 7, 11, 7, 1]))
    rows.append(("crossing identity", res.lhs(), res.rhs()))
    k = po.KParams(0, 2, 3)
    P = po.build_P(Frac(2, 3), k, po.TRIVIAL)
    g = sk.resolve_graft(P, po.build_H(k))
    rows.append(("graft example trivial Z", g.z, ONE))
    gp = sk.resolve_graft(po.build_P(Frac(2, 3), k, po.PRINCIPAL), po.build_H(k, po.PRINCIPAL))
    rows.append(("graft example principal identity", gp.lhs(), gp.rhs()))
    ws = [LaurentPoly.var("y%d" % i) if i <= 3 else LaurentPoly.monomial(x=(i - 3, 0, 0)) for i in range(1, 6)]
    ws[3] = ws[0]
    kp = sk.example_kiss(ws)
    kr = sk.resolve_reverse_kissing(kp, sk.find_overlaps(kp, kind=sk.KISS)[0])
    rows.append(("kissing example residual", po.weight_poly(kp) - po.weight_poly(kr.first[0]), ws[2] * ws[3] * ws[4]))
    gpair, walk_ = sk.example_walk()
    rows.append(("walk poset g-vector", sk.walk_g_vector(gpair, walk_), (2, -1, 0)))
    return rows


def _off_middle(ws):
    """Drop the central pair (even length) or element (odd length)."""
    h = len(ws)
    m = h // 2
    return tuple(ws[:m - 1 + h % 2]) + tuple(ws[m + 1:])


def gvector_rows(f, k):
    """g-vector closed forms, the parity rule and the principal grading."""
    g = po.arc_g_vector(f)
    seed, pos = cl.seed_for(1, f, k, principal=False)
    gc = po.circ_g_vector(f)
    return [
        ("g of P = closed form", po.g_vec(po.build_P(f, k)), g),
        ("closed form = mutation g-vector", g, seed.g_vector(pos)),
        ("g of P-circ = g + (1,-1,-1)", po.g_vec(po.build_circ(f, k)), (g[0] + 1, g[1] - 1, g[2] - 1)),
        ("g circ closed form", gc, (g[0] + 1, g[1] - 1, g[2] - 1)),
        ("coordinate sums", (sum(g), sum(gc)), (1, 0)),
        ("parity rule", parity_index(f), pos),
        ("grading of principal variable", cl.grading(cl.mutation_variable(1, f, k, principal=True), k), g),
    ]


def suite_gvectors(depth, ks, opts):
    out = []
    for k in ks:
        for f in _fractions(depth):
            out.append(("%s %s" % (_kid(k), f), lambda k=k, f=f: gvector_rows(f, k)))
        for w, t in _vertices(depth):
            l, m, r = t
            if l.p == 0 or r.q == 0:
                continue

            def run(l=l, m=m, r=r):
                gl, gm, gr = (po.arc_g_vector(f) for f in (l, m, r))
                cl_, cm, cr = (po.circ_g_vector(f) for f in (l, m, r))
                return [("g additivity over Farey triple", gm, tuple(a + b + c for a, b, c in zip(gl, gr, (1, -1, -1)))),
                        ("g circ additivity", cm, tuple(a + b for a, b in zip(cl_, cr)))]
            out.append(("%s %s" % (_kid(k), t), run))
    return out


def asymmetry_rows(f, k):
    """Asymmetry lemma, element count, size parity and palindromicity."""
    P = po.build_P(f, k)
    kf = parity(f, k)
    extra = po.xmono(tuple(-v for v in po.circ_g_vector(f))) * kf
    W = po.W
    h = len(P)
    return [
        ("W(~R) = W(~L) + k x^-g", W(P, "~R"), W(P, "~L") + extra),
        ("W(L) = W(R) + k x^-g", W(P, "L"), W(P, "R") + extra),
        ("W(L,~R) = W(R,~L) + k x^-g", W(P, "L", "~R"), W(P, "R", "~L") + extra),
        ("element count", po.element_count(f, k), (h, len(po.build_tilde(f, k)))),
        ("size odd iff k_f = 0", h % 2 == 1, kf == 0),
        ("palindromic labels", P.labels, tuple(reversed(P.labels))),
        ("palindromic weights off the middle", _off_middle(P.weights), _off_middle(P.weights[::-1])),
    ]


def suite_asymmetry(depth, ks, opts):
    out = []
    for k in ks:
        for f in _fractions(depth):
            out.append(("%s %s" % (_kid(k), f), lambda k=k, f=f: asymmetry_rows(f, k)))
        for w, t in _vertices(depth):
            l, m, r = t
            if r.q == 0:
                continue
            for mode in (po.TRIVIAL, po.PRINCIPAL):
                def run(k=k, l=l, m=m, r=r, mode=mode):
                    return [("Farey poset decomposition", po.farey_decomposition(l, r, k, mode), po.build_P(m, k, mode))]
                out.append(("%s %s %s" % (_kid(k), t, mode), run))
    return out


def product_weight_rows(f, k):
    """Product of all weights, and of the first half when k_f > 0."""
    gc = po.circ_g_vector(f)
    P = po.build_P(f, k)
    Pp = po.build_P(f, k, po.PRINCIPAL)
    rows = [
        ("product of all weights", po.product_of_weights(P), po.xmono(tuple(-2 * v for v in gc))),
        ("principal product of all weights", po.product_of_weights(Pp),
         po.Y_monomial(f, k) * po.xmono(tuple(-2 * v for v in gc))),
    ]
    kf = parity(f, k)
    if kf:
        h = len(P)
        rows.append(("half product", po.product_of_weights(P, 1, h // 2),
                     po.xmono(tuple(-v for v in gc)) * kf))
        half_y = LaurentPoly.monomial(y=tuple(_half(e) for e in _y_exps(po.Y_monomial(f, k))))
        rows.append(("principal half product", po.product_of_weights(Pp, 1, h // 2),
                     half_y * po.xmono(tuple(-v for v in gc)) * kf))
    return rows


def suite_product_weights(depth, ks, opts):
    out = []
    for k in ks:
        for f in _fractions(depth):
            out.append(("%s %s" % (_kid(k), f), lambda k=k, f=f: product_weight_rows(f, k)))
        samples = opts.get("samples", 30)
        gp = sk.gentle_pair_for(k)
        for i in range(samples):
            def run(k=k, gp=gp, i=i):
                rng = random.Random("walk-%s-%d" % (k, i))
                w = random_walk(gp, rng, rng.randint(0, 10))
                p = sk.walk_to_poset(gp, w)
                a = rng.randint(1, len(p))
                b = rng.randint(a, len(p))
                rows = [("walk subposet product of weights", po.product_of_weights(p, a, b),
                         sk.product_of_weights_formula(gp, w, a, b))]
                for o in sk.find_overlaps(p, kind=sk.KISS):
                    d = sk.decompose_X(gp, w, o)
                    rows.append(("X decomposition at %s" % (o.to_json_obj(),), d.X, d.X34 + d.lam * d.X56))
                return rows
            out.append(("%s walk %03d" % (_kid(k), i), run))
    return out


def _y_exps(m):
    (_, y, _), = m.items()
    return y


def _half(e):
    return e / 2


def random_walk(gp, rng, n):
    """Random admissible walk of length at most n."""
    w = sk.Walk(rng.choice(gp.vertices), ())
    for _ in range(n):
        cands = [(a.name, 1) for a in sk._extend(gp, w, True, 1)] + [(a.name, -1) for a in sk._extend(gp, w, True, -1)]
        if not cands:
            break
        w = sk.Walk(w.start, w.steps + (rng.choice(cands),))
    return w


SUITES = {
    "gm-equation": suite_gm_equation,
    "poset-vs-mutation": suite_poset_vs_mutation,
    "cohn-identities": suite_cohn,
    "mm-identities": suite_mm,
    "psi-phi": suite_psi_phi,
    "skein": suite_skein,
    "gvectors": suite_gvectors,
    "asymmetry": suite_asymmetry,
    "product-weights": suite_product_weights,
}


def run_suite(name, depth, ks=CANONICAL_K, jobs=1, **opts):
    if name not in SUITES:
        raise SuiteUnknown(name)
    start = time.perf_counter()
    instances = SUITES[name](depth, ks, opts)
    report = VerifyReport(name, len(instances))

    def evaluate(item):
        iid, thunk = item
        try:
            rows = thunk()
        except ArithmeticError as e:
            return iid, 1, [{"instance": iid, "identity": "exception", "lhs": type(e).__name__, "rhs": str(e)}]
        fails = [{"instance": iid, "identity": ident, "lhs": _ser(a), "rhs": _ser(b)} for ident, a, b in rows if a != b]
        return iid, len(rows), fails

    if jobs > 1:
        with ThreadPoolExecutor(jobs) as pool:
            results = list(pool.map(evaluate, instances))
    else:
        results = [evaluate(it) for it in instances]
    for iid, n, fails in sorted(results, key=lambda r: r[0]):
        report.checks += n
        report.failures.extend(fails)
    report.wall_time = time.perf_counter() - start
    return report
