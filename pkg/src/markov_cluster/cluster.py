"""Rank-3 generalized cluster algebras A(k1,k2,k3): seeds, mutation,
fraction-labeled cluster variables and their g-, c- and F-data.
"""
from dataclasses import dataclass
import threading

from .farey import Frac, ROOT, children, parity, path_to, triple_of
from .laurent import LaurentPoly, ONE, X1, X2, X3, lp_div_exact, permute_vars
from .poset import KParams, TRIVIAL, arc_g_vector, build_P, weight_poly, xmono

_SIGN = ((0, -1, 1), (1, 0, -1), (-1, 1, 0))


def exchange_matrix(k):
    """Initial exchange matrix: b_ij = s_ij * 2 / d_j for the cyclic sign
    pattern s. This reproduces the four cases of the setting (all k zero,
    k1 = k2 = 0, k1 = 0, all k positive) and extends to unsorted k."""
    return tuple(tuple(_SIGN[i][j] * 2 // k.d(j + 1) for j in range(3)) for i in range(3))


def exchange_poly_coeffs(k, i):
    """Coefficients (z_0, ..., z_d) of Z_i."""
    return (1, 1) if k.k(i) == 0 else (1, k.k(i), 1)


def _pos(v):
    return v if v > 0 else 0


@dataclass(frozen=True)
class Seed:
    """Labeled seed with principal-coefficient bookkeeping.

    ``C[i][j]`` and ``G[i][j]`` are entry i of the j-th c- and g-vector.
    ``F`` holds the F-polynomials, tracked by specializing x to 1.
    """

    x: tuple
    B: tuple
    k: KParams
    C: tuple
    G: tuple
    principal: bool = False

    def c_vector(self, j):
        return tuple(self.C[i][j - 1] for i in range(3))

    def g_vector(self, j):
        return tuple(self.G[i][j - 1] for i in range(3))

    def F(self, j):
        """F-polynomial of the j-th variable: x set to 1 in the principal variable."""
        if not self.principal:
            raise ValueError("F-polynomials need principal coefficients")
        return self.x[j - 1].specialize({"x1": 1, "x2": 1, "x3": 1})


_IDENTITY = ((1, 0, 0), (0, 1, 0), (0, 0, 1))


def initial_seed(k, principal=False):
    return Seed((X1, X2, X3), exchange_matrix(k), k, _IDENTITY, _IDENTITY, principal)


def _y_monomial(c):
    return LaurentPoly.monomial(y=c)


def mutate(s, kd):
    """Seed mutation in direction kd (1-based)."""
    m = kd - 1
    k = s.k
    d = k.d(kd)
    B = s.B
    ck = s.c_vector(kd)
    # exchange binomial/trinomial with tropical normalization
    minus = ONE
    plus = ONE
    for i in range(3):
        b = B[i][m]
        if b > 0:
            plus = plus * s.x[i] ** b
        elif b < 0:
            minus = minus * s.x[i] ** (-b)
    if s.principal:
        yk = _y_monomial(ck)
        trop = _y_monomial(tuple(d * min(0, c) for c in ck))
    else:
        yk = ONE
        trop = ONE
    coeffs = exchange_poly_coeffs(k, kd)
    num = LaurentPoly()
    for e, z in enumerate(coeffs):
        num = num + (yk * plus) ** e * minus ** (d - e) * z
    num = num * trop.inverse_monomial()
    new_x = lp_div_exact(num, s.x[m])
    x = tuple(new_x if i == m else s.x[i] for i in range(3))
    # matrix mutation
    B2 = tuple(
        tuple(
            -B[i][j] if (i == m or j == m)
            else B[i][j] + d * (_pos(B[i][m]) * B[m][j] + B[i][m] * _pos(-B[m][j]))
            for j in range(3)
        )
        for i in range(3)
    )
    # c-vectors
    cols = []
    for j in range(3):
        cj = s.c_vector(j + 1)
        if j == m:
            cols.append(tuple(-v for v in ck))
        else:
            b = B[m][j]
            cols.append(tuple(cj[i] + _pos(d * b) * ck[i] + d * b * _pos(-ck[i]) for i in range(3)))
    C2 = tuple(tuple(cols[j][i] for j in range(3)) for i in range(3))
    # g-vectors: sign-coherent recursion, with the sign of the c-vector
    B0 = exchange_matrix(k)
    eps = 1 if any(v > 0 for v in ck) else -1
    gk = [-s.G[i][m] for i in range(3)]
    for i in range(3):
        coef = _pos(-eps * d * B[i][m])
        if coef:
            for r in range(3):
                gk[r] += coef * s.G[r][i]
    for j in range(3):
        coef = _pos(-eps * d * s.C[j][m])
        if coef:
            for r in range(3):
                gk[r] -= coef * B0[r][j]
    G2 = tuple(tuple(gk[i] if j == m else s.G[i][j] for j in range(3)) for i in range(3))
    return Seed(x, B2, k, C2, G2, s.principal)


def grading(p, k):
    """Z^3-degree of a homogeneous principal Laurent polynomial:
    deg x_i = e_i, deg y_i = -(column i of the initial exchange matrix)."""
    B0 = exchange_matrix(k)
    degs = set()
    for xe, ye, _ in p.items():
        degs.add(tuple(xe[r] - sum(ye[i] * B0[r][i] for i in range(3)) for r in range(3)))
    if len(degs) != 1:
        raise ValueError("polynomial is not homogeneous")
    return degs.pop()


# Markov invariant and Diophantine checks ------------------------------------

def markov_invariant(k):
    num = (X1 * X1 + X2 * X2 + X3 * X3 + X2 * X3 * k.k1 + X1 * X3 * k.k2 + X1 * X2 * k.k3)
    return lp_div_exact(num, X1 * X2 * X3)


def gm_lhs_rhs(a, b, c, k):
    lhs = a * a + b * b + c * c + k.k1 * b * c + k.k2 * a * c + k.k3 * a * b
    rhs = (3 + k.k1 + k.k2 + k.k3) * a * b * c
    return lhs, rhs


def check_GM(a, b, c, k):
    """x^2+y^2+z^2+k1yz+k2xz+k3xy = (3+k1+k2+k3)xyz."""
    lhs, rhs = gm_lhs_rhs(a, b, c, k)
    return lhs == rhs


def check_second_GM(a, b, c, k):
    """x^2+y^2+z^2+(2k1+k2k3)x+(2k2+k1k3)y+(2k3+k1k2)z
    +k1^2+k2^2+k3^2+2k1k2k3 = xyz."""
    k1, k2, k3 = k
    lhs = (a * a + b * b + c * c + (2 * k1 + k2 * k3) * a + (2 * k2 + k1 * k3) * b
           + (2 * k3 + k1 * k2) * c + (k1 * k1 + k2 * k2 + k3 * k3 + 2 * k1 * k2 * k3))
    return lhs == a * b * c


# fraction labeling ----------------------------------------------------------

# branch b is branch 1 with variables shifted by b - 1
def _shift_perm(s):
    return {i: (i - 1 + s) % 3 + 1 for i in (1, 2, 3)}


def _rotated_k(k, s):
    return KParams(*(k.k((i - 1 + s) % 3 + 1) for i in (1, 2, 3)))


def _check_branch(branch):
    if branch not in (1, 2, 3):
        raise ValueError("branch must be 1, 2 or 3")


_memo_lock = threading.Lock()
_memo = {}


def _vieta_branch1(f, k):
    key = (f, k)
    hit = _memo.get(key)
    if hit is not None:
        return hit
    if f == Frac(0, 1):
        val = X3
    elif f == Frac(1, 0):
        val = X2
    else:
        u, _, v = triple_of(f)
        xu = _vieta_branch1(u, k)
        xv = _vieta_branch1(v, k)
        # the other common Farey neighbour of u and v; for 1/1 it is the
        # initial variable x1
        xw = X1 if f == Frac(1, 1) else _vieta_branch1(Frac(abs(v.p - u.p), abs(v.q - u.q)), k)
        kf = parity(f, k)
        val = lp_div_exact(xu * xu + xu * xv * kf + xv * xv, xw)
    with _memo_lock:
        _memo.setdefault(key, val)
    return _memo[key]


def cluster_variable(branch, f, k, principal=False):
    """x_{branch, f} in A(k).

    Coefficient-free variables use the memoized Vieta recursion over Farey
    triples; principal-coefficient variables are obtained by mutation.
    """
    _check_branch(branch)
    if principal:
        return mutation_variable(branch, f, k, principal=True)
    s = branch - 1
    val = _vieta_branch1(f, _rotated_k(k, s))
    return permute_vars(val, _shift_perm(s)) if s else val


# root permutations of the labeling trees: (1 3 2), id, (1 2 3)
_ROOT_SIGMA = {1: (3, 1, 2), 2: (1, 2, 3), 3: (2, 3, 1)}


def seed_path(branch, f):
    """Mutation directions from the initial seed to a seed containing
    x_{branch, f}, and the position of that variable in the final seed."""
    _check_branch(branch)
    tau = _ROOT_SIGMA[branch]
    dirs = [branch]
    if f == Frac(0, 1):
        return dirs, tau[0]
    if f == Frac(1, 0):
        return dirs, tau[2]
    for ch in path_to(f):
        if ch == "L":
            dirs.append(tau[2])
            tau = (tau[0], tau[2], tau[1])
        else:
            dirs.append(tau[0])
            tau = (tau[1], tau[0], tau[2])
    return dirs, tau[1]


def seed_for(branch, f, k, principal=False):
    dirs, pos = seed_path(branch, f)
    s = initial_seed(k, principal)
    for d in dirs:
        s = mutate(s, d)
    return s, pos


def mutation_variable(branch, f, k, principal=False):
    s, pos = seed_for(branch, f, k, principal)
    return s.x[pos - 1]


def g_vector(branch, f):
    """Closed-form g-vector of x_{branch, f}; branch 1 at 0/1 is (0,0,1)."""
    _check_branch(branch)
    if f.q == 0:
        raise ValueError("1/0 is only a tree label; its g-vector is not given by the closed form")
    g1 = arc_g_vector(f)
    s = branch - 1
    out = [0, 0, 0]
    perm = _shift_perm(s)
    for i in range(3):
        out[perm[i + 1] - 1] = g1[i]
    return tuple(out)


def c_matrix(path, k):
    """C-matrix after mutating the initial seed along ``path``."""
    s = initial_seed(k)
    for d in path:
        s = mutate(s, d)
    return s.C


def f_polynomial(branch, f, k):
    """F-polynomial: the principal-coefficient variable at x = 1."""
    return mutation_variable(branch, f, k, principal=True).specialize({"x1": 1, "x2": 1, "x3": 1})


def separation_formula(branch, f, k):
    """x^g F(y-hat) with y-hat_i = y_i prod_j x_j^{b_ji}; equals the
    principal variable when the separation formula holds."""
    F = f_polynomial(branch, f, k)
    B0 = exchange_matrix(k)
    yhat = {}
    for i in (1, 2, 3):
        mono = LaurentPoly.monomial(x=tuple(B0[j][i - 1] for j in range(3)), y=tuple(1 if r == i - 1 else 0 for r in range(3)))
        yhat["y%d" % i] = mono
    return xmono(g_vector(branch, f)) * F.specialize(yhat)


def poset_variable(branch, f, k, mode=TRIVIAL):
    """x^{g_f} W(P_f), relabeled cyclically for branches 2 and 3."""
    _check_branch(branch)
    if f.q == 0:
        raise ValueError("1/0 has no arc poset")
    s = branch - 1
    kk = _rotated_k(k, s)
    if f.p == 0:
        val = X3
    else:
        val = xmono(arc_g_vector(f)) * weight_poly(build_P(f, kk, mode))
    return permute_vars(val, _shift_perm(s)) if s else val


def clear_memo():
    with _memo_lock:
        _memo.clear()


# integer Markov tree -------------------------------------------------------

@dataclass(frozen=True)
class MarkovNode:
    word: str
    fracs: tuple
    values: tuple
    kappas: tuple


def markov_tree(k, depth):
    """Branch-1 cluster triples at x = 1 as integers, generation 0..depth.

    The first node is the initial cluster (1, 1, 1); generation 0 is the
    root Farey triple. Each step is an integer Vieta jump
    x_new = (x_a^2 + kappa x_a x_b + x_b^2) / x_replaced.
    """
    nodes = [MarkovNode("initial", (), (1, 1, 1), tuple(k))]
    # x_{0/1} = x3, x_{1/1} = (x2^2 + k1 x2 x3 + x3^2)/x1, x_{1/0} = x2
    root = (1, 2 + k.k1, 1)
    layer = [("", ROOT, root)]
    for _ in range(depth + 1):
        nxt = []
        for word, t, (a, b, c) in layer:
            nodes.append(MarkovNode(word or "root", tuple(t), (a, b, c), tuple(parity(f, k) for f in t)))
            lt, rt = children(t)
            nxt.append((word + "L", lt, (a, _jump(a, b, c, parity(lt.middle, k)), b)))
            nxt.append((word + "R", rt, (b, _jump(b, c, a, parity(rt.middle, k)), c)))
        layer = nxt
    return nodes


def _jump(u, v, w, kappa):
    num = u * u + kappa * u * v + v * v
    q, r = divmod(num, w)
    if r:
        raise ArithmeticError("Vieta jump not integral: %d / %d" % (num, w))
    return q
