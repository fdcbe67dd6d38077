"""Cohn-type (CGC) and Markov-monodromy (CMM) matrices over Laurent
polynomials: initial families, trees, the combinatorial families built
from fence posets, and the maps relating the two kinds of triples.

Permutations are given in one-line notation as tuples (s1, s2, s3) with
s_i = sigma(i).
"""
from dataclasses import dataclass
from functools import lru_cache

from .cluster import markov_invariant
from .farey import Frac, INF, ROOT, ZERO as F_ZERO, mediant, parity
from .laurent import LaurentPoly, Mat2, ONE, ZERO, lp_div_exact, lp_specialize, xvar
from .poset import IN, OUT, KParams, arc_g_vector, build_H, build_P, build_tilde, circ_g_vector, endpoint_table, weight_poly, xmono


class ValidationFailed(ValueError):
    """A matrix or triple violates the defining conditions."""


class NotReachable(ValueError):
    """Tree descent did not end at an initial family."""


@dataclass(frozen=True)
class MatTriple:
    """Three matrices with the k context. ``kind`` is "cgc" or "cmm"."""

    first: Mat2
    middle: Mat2
    last: Mat2
    k: KParams
    kind: str = "cgc"

    def __iter__(self):
        return iter((self.first, self.middle, self.last))

    def entries12(self):
        return (self.first.b, self.middle.b, self.last.b)


@lru_cache(maxsize=None)
def markov_M(k):
    return markov_invariant(k)


def _x(i):
    return xvar(i)


def _lift(v):
    return v if isinstance(v, LaurentPoly) else LaurentPoly.const(v)


def complete(a, b, d):
    """Matrix [[a, b], [c, d]] with c fixed by det = 1."""
    a, b, d = _lift(a), _lift(b), _lift(d)
    return Mat2(a, b, lp_div_exact(a * d - ONE, b), d)


def compose(s, t):
    """(s o t)(i) = s(t(i)) in one-line notation."""
    return tuple(s[t[i] - 1] for i in range(3))


SWAP_23 = (1, 3, 2)


# S matrices ------------------------------------------------------------

def s_from_kappa(kappa, k):
    kappa = _lift(kappa)
    return Mat2(kappa, ZERO, kappa * markov_M(k), kappa)


def s_matrix(P, k):
    """[[kappa, 0], [kappa M, kappa]] with kappa = M p12 - tr(P)."""
    return s_from_kappa(markov_M(k) * P.b - P.trace(), k)


def T_matrix(k):
    return Mat2.of(-1, 0, markov_M(k), -1)


# initial families -----------------------------------------------------

def cgc_initial(sigma, f, k):
    """(P_sigma(f), Q_sigma(f), R_sigma(f)) for one-line sigma."""
    f = _lift(f)
    a, b, c = (_x(s) for s in sigma)
    ka, kb, kc = (k.k(s) for s in sigma)
    P = complete(f, a, lp_div_exact(-f * b * c + kb * a * c + kc * a * b + a * a + b * b + c * c, b * c))
    Q = complete(lp_div_exact(f * b + ka * b + c, a), b,
                 lp_div_exact(-f * b * c + kc * a * b + a * a + b * b, a * c))
    R = complete(lp_div_exact(f * b * c + ka * b * c + kb * a * c + a * a + c * c, a * b), c,
                 lp_div_exact(-f * b * c + b * b, a * b))
    return MatTriple(P, Q, R, k, "cgc")


def cmm_initial(sigma, f, k):
    """(X_sigma(f), Y_sigma(f), Z_sigma(f)) for one-line sigma."""
    f = _lift(f)
    a, b, c = (_x(s) for s in sigma)
    ka, kb, kc = (k.k(s) for s in sigma)
    X = complete(f, a, -f - ka)
    Y = complete(lp_div_exact(f * b - kb * a - c, a), b, lp_div_exact(-f * b + c, a))
    Z = complete(lp_div_exact(f * b * c - kc * a * b - kb * a * c - a * a - c * c, a * b), c,
                 lp_div_exact(-f * b * c + kb * a * c + a * a + c * c, a * b))
    return MatTriple(X, Y, Z, k, "cmm")


def cgc_root(sigma, f, k):
    """Root of the CGC tree: built from the initial family at sigma o (2 3)."""
    P, Q, R = cgc_initial(compose(sigma, SWAP_23), f, k)
    return MatTriple(P, P @ Q - s_matrix(R, k), Q, k, "cgc")


def cmm_root(sigma, f, k):
    X, Y, Z = cmm_initial(compose(sigma, SWAP_23), f, k)
    return MatTriple(X, Y @ Z @ Y.inv(), Y, k, "cmm")


# tree rules ----------------------------------------------------------

def cgc_children(t):
    P, Q, R = t
    k = t.k
    left = MatTriple(P, P @ Q - s_matrix(R, k), Q, k, "cgc")
    right = MatTriple(Q, Q @ R - s_matrix(P, k), R, k, "cgc")
    return left, right


def cgc_inverse_children(t):
    """Inverses of the two child rules: (P, R, P^-1 (R + S_R)) and
    ((P + S_P) R^-1, P, R)."""
    P, Q, R = t
    k = t.k
    left = MatTriple(P, R, P.inv() @ (R + s_matrix(R, k)), k, "cgc")
    right = MatTriple((P + s_matrix(P, k)) @ R.inv(), P, R, k, "cgc")
    return left, right


def cmm_children(t):
    X, Y, Z = t
    Yi = Y.inv()
    return (MatTriple(X, Y @ Z @ Yi, Y, t.k, "cmm"),
            MatTriple(Y, Yi @ X @ Y, Z, t.k, "cmm"))


def cmm_inverse_children(t):
    X, Y, Z = t
    return (MatTriple(X, Z, Z.inv() @ Y @ Z, t.k, "cmm"),
            MatTriple(X @ Y @ X.inv(), X, Z, t.k, "cmm"))


def tree_vertex(root, word):
    """Follow an L/R word from ``root`` using the matching child rule."""
    step = cgc_children if root.kind == "cgc" else cmm_children
    t = root
    for ch in word:
        t = step(t)[0 if ch == "L" else 1]
    return t


# validation ----------------------------------------------------------

def _kappa_values(k):
    return set(k)


def _integral(m):
    return all(e.is_integral() and not e.uses_y() for e in (m.a, m.b, m.c, m.d))


def cgc_kappa(P, k):
    """Check the CGC matrix conditions that can be read off the entries and
    return the k-value attached to p12.

    Checked: det 1, integral Laurent entries, tr = M p12 - kappa with kappa
    one of k1, k2, k3. Being a cluster variable is checked at triple level.
    """
    if P.det() != ONE:
        raise ValidationFailed("det != 1")
    if not _integral(P):
        raise ValidationFailed("entries are not integral Laurent polynomials")
    kappa = markov_M(k) * P.b - P.trace()
    if not (kappa.is_zero() or (len(kappa.terms) == 1 and kappa.constant_term() in _kappa_values(k))):
        raise ValidationFailed("trace is not M p12 - k")
    return kappa.constant_term()


def cmm_kappa(X, k):
    if X.det() != ONE:
        raise ValidationFailed("det != 1")
    if not _integral(X):
        raise ValidationFailed("entries are not integral Laurent polynomials")
    tr = X.trace()
    kappa = -tr.constant_term()
    if tr != LaurentPoly.const(-kappa) or kappa not in _kappa_values(k):
        raise ValidationFailed("trace is not -k")
    return kappa


def cluster_consistent(a, b, c, kappas, k):
    """Necessary condition for (a, b, c) to be a cluster: the Markov
    invariant evaluated on it with the attached k-values equals M."""
    ka, kb, kc = kappas
    num = a * a + b * b + c * c + ka * b * c + kb * a * c + kc * a * b
    return num == markov_M(k) * a * b * c


def validate_cgc(t):
    """Raise ValidationFailed unless t is a CGC triple; returns the kappas."""
    k = t.k
    P, Q, R = t
    kappas = tuple(cgc_kappa(m, k) for m in t)
    if Q != P @ R - s_matrix(Q, k):
        raise ValidationFailed("Q != PR - S_Q")
    if not cluster_consistent(P.b, Q.b, R.b, kappas, k):
        raise ValidationFailed("(1,2)-entries do not form a cluster")
    return kappas


def validate_cmm(t):
    k = t.k
    X, Y, Z = t
    kappas = tuple(cmm_kappa(m, k) for m in t)
    if X @ Y @ Z != T_matrix(k):
        raise ValidationFailed("XYZ != T")
    if not cluster_consistent(X.b, Y.b, Z.b, kappas, k):
        raise ValidationFailed("(1,2)-entries do not form a cluster")
    return kappas


def is_valid(t):
    try:
        (validate_cgc if t.kind == "cgc" else validate_cmm)(t)
    except (ValidationFailed, ArithmeticError):
        return False
    return True


# psi, Psi, Phi -------------------------------------------------------

def psi(g, M, k, inverse=False):
    """psi_g(M) = [[1,0],[M-g,1]] swap(M) [[1,0],[g,1]]; inverse on request.

    swap(M) exchanges the diagonal entries.
    """
    g = _lift(g)
    mm = markov_M(k)
    sw = Mat2(M.d, M.b, M.c, M.a)
    if inverse:
        return Mat2.of(1, 0, -g, 1) @ sw @ Mat2.of(1, 0, g - mm, 1)
    return Mat2.of(1, 0, mm - g, 1) @ sw @ Mat2.of(1, 0, g, 1)


def psi_M_inverse(M, k):
    """Closed form of psi_g^-1 at g = M."""
    mm = markov_M(k)
    return Mat2(M.d, M.b, M.c - mm * M.d, M.a - mm * M.b)


def Psi_triple(g, t, inverse=False):
    kind = t.kind
    if inverse:
        kind = "cmm" if kind == "cgc" else "cgc"
    else:
        kind = "cgc" if kind == "cmm" else "cmm"
    a, b, c = (psi(g, m, t.k, inverse) for m in t)
    return MatTriple(a, b, c, t.k, kind)


def phi(t):
    """(X, Y, Z) -> (-(YZ)^-1, -(XZ)^-1, -(XY)^-1)."""
    X, Y, Z = t
    kind = "cgc" if t.kind == "cmm" else "cmm"
    return MatTriple(-(Y @ Z).inv(), -(X @ Z).inv(), -(X @ Y).inv(), t.k, kind)


def decomposition_g(sigma, k):
    """The psi parameter k_sigma(1) / x_sigma(1)."""
    s1 = sigma[0]
    return LaurentPoly.monomial(x=tuple(-1 if i == s1 - 1 else 0 for i in range(3)), c=k.k(s1)) if k.k(s1) else ZERO


def mm_decompose(t, sigma):
    """MM decomposition of a CGC triple lying in a tree with root
    permutation sigma: Psi_g^-1 o Phi o Psi_g^-1 with g = k_s1 / x_s1."""
    g = decomposition_g(sigma, t.k)
    out = Psi_triple(g, phi(Psi_triple(g, t, inverse=True)), inverse=True)
    out = MatTriple(out.first, out.middle, out.last, t.k, "cmm")
    if phi(out) != MatTriple(t.first, t.middle, t.last, t.k, "cgc"):
        raise ValidationFailed("decomposition does not recompose to the input")
    return out


# tree location ---------------------------------------------------------

def _size(p):
    return lp_specialize(p, {"x1": 1, "x2": 1, "x3": 1}).constant_term()


def _initial_index(p):
    for i in (1, 2, 3):
        if p == xvar(i):
            return i
    return None


def _root_match(t):
    """If t is cgc_root(sigma, f) for some sigma, f return them."""
    i, j = _initial_index(t.first.b), _initial_index(t.last.b)
    if i is None or j is None or i == j:
        return None
    m = 6 - i - j
    sigma = (i, m, j)
    f = t.first.a
    try:
        cand = cgc_root(sigma, f, t.k)
    except ArithmeticError:
        return None
    if cand == MatTriple(t.first, t.middle, t.last, t.k, "cgc"):
        return sigma, f
    return None


def locate_in_tree(t, max_steps=10000):
    """(sigma, f, word) with tree_vertex(cgc_root(sigma, f), word) == t.

    Descends with the inverse rules, choosing the direction by comparing
    the (1,2)-entries at x = 1.
    """
    word = []
    cur = t
    for _ in range(max_steps):
        hit = _root_match(cur)
        if hit is not None:
            return hit[0], hit[1], "".join(reversed(word))
        a, c = _size(cur.first.b), _size(cur.last.b)
        if a < c:
            cur = cgc_inverse_children(cur)[0]
            word.append("L")
        elif a > c:
            cur = cgc_inverse_children(cur)[1]
            word.append("R")
        else:
            raise NotReachable("tie |a| = |c| away from a root")
    raise NotReachable("descent did not terminate")


# combinatorial families -------------------------------------------------

def _as_frac(f):
    return f if isinstance(f, Frac) else Frac.parse(f)


def alpha(k):
    """W(H; R, not L)."""
    return weight_poly(build_H(k), L=OUT, R=IN)


def comb_f(k):
    """Parameter of the CGC tree that carries the combinatorial triples."""
    x1, x2, x3 = _x(1), _x(2), _x(3)
    return lp_div_exact(k.k2 * x1 * x3 + x3 * x3 + k.k1 * x2 * x3 + x2 * x2, x1 * x2)


COMB_SIGMA = (3, 1, 2)  # the cycle (1 3 2)


def _c01(k):
    x1, x2, x3 = _x(1), _x(2), _x(3)
    inner = lp_div_exact(k.k2 * x1 * x3 + x3 * x3 + k.k1 * x2 * x3, x1 * x1)
    a = lp_div_exact(x1 * (inner * x1 * x1 + x2 * x2), x2 * x1 * x1)
    c = lp_div_exact(x1 * x1 * inner, x2 * x2 * x3)
    return Mat2(a, x3, c, lp_div_exact(x1, x2))


def _c10(k):
    t = build_tilde(INF, k)
    x1, x2, x3 = _x(1), _x(2), _x(3)
    r = lp_div_exact(x1, x3)
    return Mat2(r * weight_poly(t, L=OUT, R=IN),
                x2 * weight_poly(t, L=OUT, R=OUT),
                -lp_div_exact(x1 * x1, x2 * x3 * x3) * weight_poly(t, L=IN, R=IN),
                -r * weight_poly(t, L=IN, R=OUT))


@lru_cache(maxsize=1024)
def combinatorial_C(f, k):
    """Combinatorial Cohn matrix C_{p/q} built from P-tilde."""
    f = _as_frac(f)
    if f == F_ZERO:
        return _c01(k)
    if f == INF:
        return _c10(k)
    t = build_tilde(f, k)
    g = arc_g_vector(f)
    gc = circ_g_vector(f)
    g21 = tuple(2 * gc[i] - g[i] for i in range(3))
    e = endpoint_table(t)
    return Mat2(xmono(gc) * (e[False, True] + e[True, True]),
                xmono(g) * (e[False, False] + e[True, False]),
                xmono(g21) * e[False, True],
                xmono(gc) * e[False, False])


@lru_cache(maxsize=1024)
def combinatorial_M(f, k):
    """Combinatorial MM matrix M_{p/q} from the arc poset P."""
    f = _as_frac(f)
    x1, x2, x3 = _x(1), _x(2), _x(3)
    if f == F_ZERO:
        r = lp_div_exact(x1, x2)
        c = -lp_div_exact(x1 * x1 + k.k3 * x1 * x2 + x2 * x2, x2 * x2 * x3)
        return Mat2(r, x3, c, -r - k.k3)
    if f == INF:
        return Mat2.of(-k.k2, x2, -lp_div_exact(ONE, x2), 0)
    p = build_P(f, k)
    g = arc_g_vector(f)
    gc = circ_g_vector(f)
    g21 = tuple(2 * gc[i] - g[i] for i in range(3))
    e = endpoint_table(p)
    return Mat2(xmono(gc) * (e[False, False] + e[False, True]),
                xmono(g) * (e[False, False] + e[False, True] + e[True, False] + e[True, True]),
                -xmono(g21) * e[False, False],
                -xmono(gc) * (e[False, False] + e[True, False]))


@lru_cache(maxsize=1024)
def dual_C(f, k):
    """Dual combinatorial Cohn matrix from the counterclockwise P-tilde."""
    f = _as_frac(f)
    x1, x2, x3 = _x(1), _x(2), _x(3)
    if f == F_ZERO:
        al = alpha(k)
        kx = lp_div_exact(k.k3 * x2, x1)
        r = lp_div_exact(x1, x2)
        # the (2,1) entry is fixed by det = 1
        return complete(-r * kx, x3, r * (ONE + al))
    if f == INF:
        inner = lp_div_exact(k.k3 * x1 * x2 + x2 * x2 + k.k1 * x2 * x3, x1 * x1)
        r = lp_div_exact(x1, x3)
        return Mat2(r, x2, lp_div_exact(x1 * x1, x2 * x3 * x3) * inner,
                    r * (inner + lp_div_exact(x3 * x3, x1 * x1)))
    t = build_tilde(f, k, dual=True)
    g = arc_g_vector(f)
    gc = circ_g_vector(f)
    g21 = tuple(2 * gc[i] - g[i] for i in range(3))
    return Mat2(xmono(gc) * weight_poly(t, L=IN, R=IN),
                xmono(g) * weight_poly(t, R=IN),
                xmono(g21) * weight_poly(t, L=IN, R=OUT),
                xmono(gc) * weight_poly(t, R=OUT))


@lru_cache(maxsize=1024)
def dual_M(f, k):
    """Dual combinatorial MM matrix: psi_0^-1 of the dual Cohn matrix."""
    return psi(ZERO, dual_C(f, k), k, inverse=True)


def dual_M_formula(f, k):
    """Poset form of the dual MM matrix for 0 < p/q < infinity."""
    f = _as_frac(f)
    p = build_P(f, k)
    g = arc_g_vector(f)
    gc = circ_g_vector(f)
    g21 = tuple(2 * gc[i] - g[i] for i in range(3))
    return Mat2(-xmono(gc) * weight_poly(p, L=IN),
                xmono(g) * weight_poly(p),
                -xmono(g21) * weight_poly(p, L=IN, R=IN),
                xmono(gc) * weight_poly(p, R=IN))


def mwm(f, k):
    """Musiker-Williams-Markov matrix for 0 < p/q < infinity."""
    f = _as_frac(f)
    if f.p == 0 or f.q == 0:
        raise ValueError("the MWM matrix is defined for 0 < p/q < infinity")
    p = build_P(f, k)
    g = arc_g_vector(f)
    gc = circ_g_vector(f)
    g21 = tuple(2 * gc[i] - g[i] for i in range(3))
    return Mat2(-xmono(gc) * weight_poly(p, L=IN),
                xmono(g) * weight_poly(p),
                xmono(g21) * weight_poly(p, L=IN, R=OUT),
                -xmono(gc) * weight_poly(p, R=OUT))


def comb_S(f, k):
    """S matrix attached to the fraction f."""
    return s_from_kappa(parity(_as_frac(f), k), k)


def combinatorial_triple(triple, k, family="cohn"):
    """(C_a, C_b, C_c) or (M_a, M_b, M_c) for a Farey triple."""
    fn = {"cohn": combinatorial_C, "mm": combinatorial_M, "dual-cohn": dual_C, "dual-mm": dual_M}[family]
    kind = "cgc" if family in ("cohn", "dual-cohn") else "cmm"
    a, b, c = triple
    return MatTriple(fn(a, k), fn(b, k), fn(c, k), k, kind)


def comb_cgc_root(k):
    return combinatorial_triple(ROOT, k, "cohn")


def comb_mm_root(k):
    return combinatorial_triple(ROOT, k, "mm")


@lru_cache(maxsize=1024)
def comb_tree_vertex(k, word, family="cohn"):
    """Vertex of the combinatorial Cohn or MM tree at an L/R word, built
    from its cached parent."""
    if not word:
        return comb_cgc_root(k) if family == "cohn" else comb_mm_root(k)
    parent = comb_tree_vertex(k, word[:-1], family)
    step = cgc_children if family == "cohn" else cmm_children
    return step(parent)[0 if word[-1] == "L" else 1]


def comb_cgc_children(t, fracs):
    """Children of a combinatorial Cohn triple at Farey triple ``fracs``,
    using the S matrix of each new fraction."""
    a, b, c = fracs
    P, Q, R = t
    k = t.k
    left = MatTriple(P, P @ Q - comb_S(mediant(a, b), k), Q, k, "cgc")
    right = MatTriple(Q, Q @ R - comb_S(mediant(b, c), k), R, k, "cgc")
    return left, right


def comb_mm_children(t):
    """Children of a combinatorial MM triple: (X, Y Z Y^-1, Y) and
    (Y, Y^-1 X Y, Z)."""
    return cmm_children(t)
