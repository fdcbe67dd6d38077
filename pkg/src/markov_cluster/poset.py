"""Labeled, weighted fence posets attached to arcs of rational slope.

A fence is stored in chronological order: ``elements[i]`` is P(i+1) and
``dirs[i]`` is "U" when P(i+1) < P(i+2), "D" when P(i+1) > P(i+2). A
circular fence carries one extra entry in ``dirs`` relating the last
element to the first ("U" means R < L).
"""
from dataclasses import dataclass
from fractions import Fraction
import json

from .farey import Frac, parity_index
from . import _flint
from .laurent import LaurentPoly, ONE, ZERO

TRIVIAL = "trivial"
PRINCIPAL = "principal"


@dataclass(frozen=True)
class KParams:
    k1: int
    k2: int
    k3: int

    def __post_init__(self):
        if min(self.k1, self.k2, self.k3) < 0:
            raise ValueError("k values must be nonnegative")

    @classmethod
    def parse(cls, s):
        parts = [int(v) for v in str(s).split(",")]
        if len(parts) != 3:
            raise ValueError("expected three comma-separated integers")
        return cls(*parts)

    def __getitem__(self, i):
        return (self.k1, self.k2, self.k3)[i]

    def __iter__(self):
        return iter((self.k1, self.k2, self.k3))

    def k(self, i):
        """k_i for i in {1,2,3}."""
        return self[i - 1]

    def d(self, i):
        """Degree of the exchange polynomial Z_i: 1 if k_i = 0, else 2."""
        return 1 if self[i - 1] == 0 else 2

    @property
    def ds(self):
        return (self.d(1), self.d(2), self.d(3))

    def __str__(self):
        return "%d,%d,%d" % (self.k1, self.k2, self.k3)


@dataclass(frozen=True)
class Element:
    label: int
    weight: LaurentPoly


@dataclass(frozen=True)
class FencePoset:
    elements: tuple = ()
    dirs: tuple = ()
    circular: bool = False

    def __post_init__(self):
        n = len(self.elements)
        expect = n if (self.circular and n) else max(n - 1, 0)
        if len(self.dirs) != expect:
            raise ValueError("fence with %d elements needs %d dirs, got %d" % (n, expect, len(self.dirs)))
        if any(d not in ("U", "D") for d in self.dirs):
            raise ValueError("dirs must be 'U' or 'D'")

    def __len__(self):
        return len(self.elements)

    @property
    def labels(self):
        return tuple(e.label for e in self.elements)

    @property
    def weights(self):
        return tuple(e.weight for e in self.elements)

    def close(self):
        """Circular version with the relation L > R added."""
        if self.circular:
            return self
        return FencePoset(self.elements, self.dirs + ("U",), True)

    def covers(self):
        """Set of (lower, upper) index pairs of cover relations."""
        n = len(self.elements)
        out = []
        for i, d in enumerate(self.dirs):
            j = (i + 1) % n
            out.append((i, j) if d == "U" else (j, i))
        return out

    def to_json_obj(self):
        return {
            "elements": [{"label": e.label, "weight": e.weight.to_json_obj()} for e in self.elements],
            "dirs": list(self.dirs),
            "circular": self.circular,
        }

    def to_json(self):
        return json.dumps(self.to_json_obj(), separators=(",", ":"))

    @classmethod
    def from_json_obj(cls, obj):
        elems = tuple(Element(int(e["label"]), LaurentPoly.from_json_obj(e["weight"])) for e in obj["elements"])
        return cls(elems, tuple(obj["dirs"]), bool(obj.get("circular", False)))

    @classmethod
    def from_json(cls, s):
        return cls.from_json_obj(json.loads(s))

    def to_dot(self, name="P"):
        lines = ["digraph %s {" % name, "  rankdir=LR;"]
        for i, e in enumerate(self.elements):
            lines.append('  n%d [label="x_%d\\n%s"];' % (i, e.label, e.weight))
        for lo, hi in self.covers():
            lines.append("  n%d -> n%d;" % (lo, hi))
        lines.append("}")
        return "\n".join(lines) + "\n"


EMPTY = FencePoset()


def fence(labels, weights, dirs, circular=False):
    return FencePoset(tuple(Element(l, w) for l, w in zip(labels, weights)), tuple(dirs), circular)


class IndexOutOfRange(IndexError):
    pass


def concat(a, b, d):
    """a then b with R_a < L_b (d = "U") or R_a > L_b (d = "D")."""
    if a.circular or b.circular:
        raise ValueError("cannot concatenate circular fences")
    if not a.elements:
        return b
    if not b.elements:
        return a
    return FencePoset(a.elements + b.elements, a.dirs + (d,) + b.dirs)


def up(*parts):
    """parts[0] / parts[1] / ... joined by Up relations."""
    out = EMPTY
    for p in parts:
        out = concat(out, p, "U")
    return out


def down(*parts):
    out = EMPTY
    for p in parts:
        out = concat(out, p, "D")
    return out


def reverse(p):
    """Same poset read in the opposite chronological order."""
    if p.circular:
        raise ValueError("reverse of a circular fence is not defined here")
    flip = {"U": "D", "D": "U"}
    return FencePoset(tuple(reversed(p.elements)), tuple(flip[d] for d in reversed(p.dirs)))


def opposite(p):
    """Dual poset with every weight inverted.

    Order ideals of the dual are complements of ideals of p, so
    W(p) = prod(weights) * W(opposite(p)).
    """
    if p.circular:
        raise ValueError("opposite of a circular fence is not defined here")
    flip = {"U": "D", "D": "U"}
    elems = tuple(Element(e.label, e.weight.inverse_monomial()) for e in p.elements)
    return FencePoset(elems, tuple(flip[d] for d in p.dirs))

def slice_(p, i, j):
    """P[i, j] with 1-based inclusive indices; P[i, i-1] is empty."""
    n = len(p)
    if j == i - 1 and 1 <= i <= n + 1:
        return EMPTY
    if not (1 <= i <= j <= n):
        raise IndexOutOfRange("slice [%d,%d] of fence of size %d" % (i, j, n))
    return FencePoset(p.elements[i - 1:j], p.dirs[i - 1:j - 1])


# weights ---------------------------------------------------------------

_HAT = {1: (0, 1, -1), 2: (-1, 0, 1), 3: (1, -1, 0)}


def xhat(i, k, mode=TRIVIAL, power=1):
    """x-hat_i raised to ``power``, decorated with y in principal mode."""
    x = tuple(power * e for e in _HAT[i])
    y = [0, 0, 0]
    if mode == PRINCIPAL:
        y[i - 1] = Fraction(power, 2) if k.k(i) == 0 else power
    return LaurentPoly.monomial(x=x, y=y)


def single_weight(i, k, mode):
    return xhat(i, k, mode, 2)


def pair_weights(i, k, mode):
    """(weight of the smaller, weight of the larger) of a doubled element."""
    base = xhat(i, k, mode)
    return base * k.k(i), base * Fraction(1, k.k(i))


# geometry --------------------------------------------------------------

def _floor(v):
    return v.numerator // v.denominator


def _crossings(a, b):
    """Crossings of the open segment a->b with the lattice, in travel order.

    Each crossing is (t, label, point, endpoint1, endpoint2).
    """
    ax, ay = a
    bx, by = b
    dx, dy = bx - ax, by - ay
    found = []

    def at(t):
        return (ax + t * dx, ay + t * dy)

    if dx:
        lo, hi = sorted((ax, bx))
        for i in range(_floor(lo), _floor(hi) + 1):
            t = (i - ax) / dx
            if 0 < t < 1:
                px, py = at(t)
                j = _floor(py)
                found.append((t, 2, (px, py), (i, j), (i, j + 1)))
    if dy:
        lo, hi = sorted((ay, by))
        for j in range(_floor(lo), _floor(hi) + 1):
            t = (j - ay) / dy
            if 0 < t < 1:
                px, py = at(t)
                i = _floor(px)
                found.append((t, 3, (px, py), (i, j), (i + 1, j)))
    s0, s1 = ax + ay, bx + by
    if s1 != s0:
        lo, hi = sorted((s0, s1))
        for n in range(_floor(lo), _floor(hi) + 1):
            t = (n - s0) / (s1 - s0)
            if 0 < t < 1:
                px, py = at(t)
                i = _floor(px)
                found.append((t, 1, (px, py), (i, n - i), (i + 1, n - i - 1)))
    found.sort(key=lambda c: c[0])
    ts = [c[0] for c in found]
    if len(set(ts)) != len(ts):
        raise ValueError("segment passes through a lattice point")
    return [(c[1], c[2], c[3], c[4], (dx, dy)) for c in found]


def _cross(d, v):
    return d[0] * v[1] - d[1] * v[0]


def _is_right(d, point, e):
    return _cross(d, (e[0] - point[0], e[1] - point[1])) < 0


def _dist2(u, v):
    return (u[0] - v[0]) ** 2 + (u[1] - v[1]) ** 2


def _run_algorithm(crossings, k, mode):
    """Apply the construction rules to an ordered crossing list.

    Returns (labels, weights, dirs).
    """
    labels, weights, dirs = [], [], []
    prev = None
    for label, point, e1, e2, d in crossings:
        if prev is not None:
            pe = {prev[2], prev[3]}
            shared = pe & {e1, e2}
            if len(shared) != 1:
                raise ValueError("consecutive crossed segments do not share an endpoint")
            dirs.append("D" if _is_right(d, prev[1], next(iter(shared))) else "U")
        if k.k(label) == 0:
            labels.append(label)
            weights.append(single_weight(label, k, mode))
        else:
            right, left = (e1, e2) if _is_right(d, point, e1) else (e2, e1)
            small, large = pair_weights(label, k, mode)
            labels += [label, label]
            # strictly closer to the right endpoint: first > second
            if _dist2(point, right) < _dist2(point, left):
                weights += [large, small]
                dirs.append("D")
            else:
                weights += [small, large]
                dirs.append("U")
        prev = (label, point, e1, e2)
    return labels, weights, dirs


def poset_of_path(points, k, mode=TRIVIAL):
    """Fence obtained from the polygonal path through ``points``."""
    crossings = []
    pts = [(Fraction(x), Fraction(y)) for x, y in points]
    for a, b in zip(pts, pts[1:]):
        crossings += _crossings(a, b)
    labels, weights, dirs = _run_algorithm(crossings, k, mode)
    return fence(labels, weights, dirs)


def build_P(f, k, mode=TRIVIAL):
    """The fence of the arc from (0,0) to (q,p)."""
    if not isinstance(f, Frac):
        f = Frac.parse(f)
    if f.q == 0:
        raise ValueError("1/0 has no arc poset; use build_P_one_zero")
    if f.p == 0:
        return EMPTY
    return poset_of_path([(0, 0), (f.q, f.p)], k, mode)


def build_H(k, mode=TRIVIAL, dual=False):
    """The chain from a half turn around a lattice point.

    Clockwise (default) it reads x3, x1, x2 from the top down; the
    counterclockwise version reads x2, x1, x3 from the bottom up.
    """
    labels, weights, dirs = [], [], []
    order = (2, 1, 3) if dual else (3, 1, 2)
    step = "U" if dual else "D"
    for i in order:
        if k.k(i) == 0:
            labels.append(i)
            weights.append(single_weight(i, k, mode))
        else:
            small, large = pair_weights(i, k, mode)
            labels += [i, i]
            weights += [small, large] if dual else [large, small]
    dirs = [step] * (len(labels) - 1)
    return fence(labels, weights, dirs)


def _flip_middle(p, f, k):
    """Swap the relation inside the doubled middle pair of P_f."""
    i = parity_index(f)
    if k.k(i) == 0 or not len(p):
        return p
    h = len(p)
    m = h // 2  # middle pair is elements m, m+1 (1-based)
    elems = list(p.elements)
    dirs = list(p.dirs)
    a, b = elems[m - 1], elems[m]
    elems[m - 1], elems[m] = Element(a.label, b.weight), Element(b.label, a.weight)
    dirs[m - 1] = "D" if dirs[m - 1] == "U" else "U"
    return FencePoset(tuple(elems), tuple(dirs))


def build_tilde(f, k, mode=TRIVIAL, dual=False):
    """P-tilde: the arc followed by a clockwise half turn, i.e. P up H.

    With ``dual`` the middle doubled pair takes the opposite relation and
    the half turn is counterclockwise, attached by a Down relation.
    """
    if not isinstance(f, Frac):
        f = Frac.parse(f)
    if f.q == 0:
        return build_tilde_one_zero(k, mode)
    if f.p == 0:
        if dual:
            raise ValueError("the dual poset at 0/1 is not defined; use the explicit matrix")
        eps = Fraction(1, 1000)
        return poset_of_path([(eps, eps), (1 + eps, eps)], k, mode)
    p = build_P(f, k, mode)
    if dual:
        return concat(_flip_middle(p, f, k), build_H(k, mode, dual=True), "D")
    return concat(p, build_H(k, mode), "U")


def build_circ(f, k, mode=TRIVIAL):
    """P-circle: P-tilde with the extra relation L > R."""
    return build_tilde(f, k, mode).close()


def build_P_one_zero(k, mode=TRIVIAL):
    """Fence of the segment (0,1) - (2,0)."""
    return poset_of_path([(0, 1), (2, 0)], k, mode)


def build_tilde_one_zero(k, mode=TRIVIAL):
    return concat(build_P_one_zero(k, mode), build_H(k, mode), "D")


def element_count(f, k):
    """(h, h-tilde) from the closed form."""
    d1, d2, d3 = k.ds
    p, q = f.p, f.q
    h = d1 * (q + p - 1) + d2 * (q - 1) + d3 * (p - 1)
    return h, h + d1 + d2 + d3


# g-vectors -------------------------------------------------------------

def _neighbors(p):
    """For each index: (lower covers, upper covers)."""
    n = len(p)
    lower = [[] for _ in range(n)]
    upper = [[] for _ in range(n)]
    for lo, hi in p.covers():
        lower[hi].append(lo)
        upper[lo].append(hi)
    return lower, upper


def g_vec(p):
    """-a + b + r: minimal elements, strictly maximal elements, leaves.

    The leaf vector counts the chronological endpoints L and R (a single
    element counts as both); leaves labeled x2, x3, x1 feed coordinates
    1, 2, 3 respectively. Circular fences have no leaves.
    """
    if not len(p):
        raise ValueError("g-vector of the empty poset is a convention; see arc_g_vector")
    lower, upper = _neighbors(p)
    g = [0, 0, 0]
    for i, e in enumerate(p.elements):
        if not lower[i]:
            g[e.label - 1] -= 1
        if not upper[i] and len(lower[i]) >= 2:
            g[e.label - 1] += 1
    if not p.circular:
        leaf_slot = {2: 0, 3: 1, 1: 2}
        for e in (p.elements[0], p.elements[-1]):
            g[leaf_slot[e.label]] += 1
    return tuple(g)


def arc_g_vector(f):
    """g-vector of the arc poset P_f, with the 0/1 convention (0,0,1)."""
    return (f.q - f.p - 1, -f.q + 1, f.p + 1)


def circ_g_vector(f):
    g = arc_g_vector(f)
    return (g[0] + 1, g[1] - 1, g[2] - 1)


# weight generating functions ------------------------------------------

FREE, IN, OUT = "free", "in", "out"


def _allowed(state, want):
    return want == FREE or (want == IN) == state


def weight_poly(p, L=FREE, R=FREE):
    """Sum of wt(I) over order ideals I meeting the L/R membership constraints.

    Linear two-state transfer along the fence. Circular fences are handled
    by fixing the membership of L and checking the closing relation at R.
    """
    n = len(p)
    if n == 0:
        return ZERO if IN in (L, R) else ONE
    if _use_flint(p):
        table = endpoint_table(p)
        return sum((v for (l_in, r_in), v in table.items() if _allowed(l_in, L) and _allowed(r_in, R)), ZERO)
    w = p.weights
    total = ZERO
    for l_in in (False, True):
        if not _allowed(l_in, L):
            continue
        v_out, v_in = (ZERO, w[0]) if l_in else (ONE, ZERO)
        for i in range(n - 1):
            if p.dirs[i] == "U":
                v_out, v_in = v_out + v_in, v_in * w[i + 1]
            else:
                v_out, v_in = v_out, (v_out + v_in) * w[i + 1]
        if n == 1:
            # L and R are the same element
            if R != FREE and (R == IN) != l_in:
                continue
            total = total + (v_in if l_in else v_out)
            continue
        for r_in, val in ((False, v_out), (True, v_in)):
            if not _allowed(r_in, R):
                continue
            if p.circular:
                closing = p.dirs[-1]
                # "U": R < L, so L in I forces R in I
                if closing == "U" and l_in and not r_in:
                    continue
                if closing == "D" and r_in and not l_in:
                    continue
            total = total + val
    return total


# fences at least this long run their endpoint DP inside flint
FLINT_FENCE_SIZE = 12


def _use_flint(p):
    return (_flint.AVAILABLE and len(p) >= FLINT_FENCE_SIZE
            and all(len(w.terms) == 1 for w in p.weights))


def endpoint_table(p):
    """Map (L in I, R in I) to the sum of wt(I) over those order ideals.

    One DP pass per state of L gives all four endpoint-constrained sums,
    which is what the matrix entries need.
    """
    n = len(p)
    if n == 0:
        raise ValueError("empty fence has no endpoints")
    if _use_flint(p):
        out = {key: LaurentPoly(t) for key, t in
               _flint.fence_endpoint_sums([w.terms for w in p.weights], p.dirs).items()}
        return _close(p, out)
    w = p.weights
    out = {}
    for l_in in (False, True):
        v_out, v_in = (ZERO, w[0]) if l_in else (ONE, ZERO)
        for i in range(n - 1):
            if p.dirs[i] == "U":
                v_out, v_in = v_out + v_in, v_in * w[i + 1]
            else:
                v_out, v_in = v_out, (v_out + v_in) * w[i + 1]
        if n == 1:
            out[(l_in, l_in)] = v_in if l_in else v_out
            out[(l_in, not l_in)] = ZERO
            continue
        out[(l_in, False)], out[(l_in, True)] = v_out, v_in
    return _close(p, out)


def _close(p, out):
    """Drop the endpoint states a circular fence's closing relation forbids."""
    if p.circular and len(p) > 1:
        if p.dirs[-1] == "U":
            out[(True, False)] = ZERO
        else:
            out[(False, True)] = ZERO
    return out


def W(p, *constraints):
    """Shorthand: W(p, "L", "~R") etc."""
    kw = {}
    for c in constraints:
        neg = c.startswith("~")
        kw[c.lstrip("~")] = OUT if neg else IN
    return weight_poly(p, **kw)


def order_ideals(p):
    """Enumerate every order ideal as a sorted tuple of indices.

    Independent of the fence structure: builds the full comparability
    relation from the covers and does a backtracking search that only
    adds an element once everything below it is present.
    """
    n = len(p)
    below = [set() for _ in range(n)]
    for lo, hi in p.covers():
        below[hi].add(lo)
    # transitive closure
    changed = True
    while changed:
        changed = False
        for i in range(n):
            extra = set()
            for j in below[i]:
                extra |= below[j]
            if not extra <= below[i]:
                below[i] |= extra
                changed = True
    if any(i in below[i] for i in range(n)):
        raise ValueError("relations contain a cycle")
    out = []
    members = []

    def search(i):
        if i == n:
            s = set(members)
            if all(below[j] <= s for j in s):
                out.append(tuple(members))
            return
        search(i + 1)
        members.append(i)
        # prune: anything already excluded that lies below i
        if all(j in members or j > i for j in below[i]):
            search(i + 1)
        members.pop()

    search(0)
    return out


def brute_force_weight(p, L=FREE, R=FREE):
    """Oracle for weight_poly by explicit ideal enumeration."""
    n = len(p)
    total = ZERO
    for ideal in order_ideals(p):
        s = set(ideal)
        if n and not _allowed(0 in s, L):
            continue
        if n and not _allowed(n - 1 in s, R):
            continue
        if not n and IN in (L, R):
            continue
        term = ONE
        for i in ideal:
            term = term * p.elements[i].weight
        total = total + term
    return total


def product_of_weights(p, i=1, j=None):
    """Product of the weights of P[i, j] (1-based, inclusive)."""
    j = len(p) if j is None else j
    out = ONE
    for e in p.elements[i - 1:j]:
        out = out * e.weight
    return out


def xmono(g):
    return LaurentPoly.monomial(x=tuple(g))


def Y_monomial(f, k):
    """y1^{d1(q+p-1)} y2^{d2(q-1)} y3^{d3(p-1)}."""
    d1, d2, d3 = k.ds
    p, q = f.p, f.q
    return LaurentPoly.monomial(y=(d1 * (q + p - 1), d2 * (q - 1), d3 * (p - 1)))


def X_of(p):
    """x^g * W(P)."""
    return xmono(g_vec(p)) * weight_poly(p)


def christoffel_word(f):
    """Christoffel word of p/q in (0,1] read off P-tilde with all k = 0.

    Each maximal chronologically decreasing run of covers contributes A
    (one step) or B (two steps).
    """
    if not (0 < f.p <= f.q):
        raise ValueError("Christoffel word defined for 0 < p/q <= 1")
    t = build_tilde(f, KParams(0, 0, 0))
    word = []
    run = 0
    for d in t.dirs + ("U",):
        if d == "D":
            run += 1
        elif run:
            word.append("A" if run == 1 else "B")
            run = 0
    return "".join(word)


def farey_decomposition(left, right, k, mode=TRIVIAL):
    """P of the mediant of a Farey pair (left < right) rebuilt from smaller pieces.

    Interior case: rev(P_right) down rev(H) down rev(P_left). When left is
    0/1 the mediant poset is the reverse of P-tilde_{0/1} up P_right.
    """
    if left == Frac(0, 1):
        return reverse(up(build_tilde(left, k, mode), build_P(right, k, mode)))
    return down(reverse(build_P(right, k, mode)), reverse(build_H(k, mode)), reverse(build_P(left, k, mode)))
