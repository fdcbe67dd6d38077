"""Reduced fractions, Farey triples and Stern-Brocot navigation."""
from dataclasses import dataclass
from math import gcd


class NotReduced(ValueError):
    """Fraction is not in lowest terms."""


class NotInterior(ValueError):
    """0/1 and 1/0 are not the middle of any Farey triple."""


@dataclass(frozen=True, order=False)
class Frac:
    """Nonnegative reduced fraction p/q; 1/0 is the point at infinity."""

    p: int
    q: int

    def __post_init__(self):
        if self.p < 0 or self.q < 0 or (self.p, self.q) == (0, 0):
            raise ValueError("invalid fraction %d/%d" % (self.p, self.q))
        if gcd(self.p, self.q) != 1:
            raise NotReduced("%d/%d is not reduced" % (self.p, self.q))

    @classmethod
    def parse(cls, s):
        p, _, q = str(s).partition("/")
        return cls(int(p), int(q) if q else 1)

    def __str__(self):
        return "%d/%d" % (self.p, self.q)

    def __lt__(self, other):
        return self.p * other.q < other.p * self.q

    def __le__(self, other):
        return self.p * other.q <= other.p * self.q

    def is_boundary(self):
        return (self.p, self.q) in ((0, 1), (1, 0))


ZERO = Frac(0, 1)
ONE = Frac(1, 1)
INF = Frac(1, 0)


def det2(f, g):
    """ad - bc for f = a/b, g = c/d."""
    return f.p * g.q - f.q * g.p


def mediant(f, g):
    return Frac(f.p + g.p, f.q + g.q)


def parity_index(f):
    """Index i in {1,2,3} with k_f = k_i (branch-1 labeling)."""
    if f.p % 2 and f.q % 2:
        return 1
    if f.p % 2:
        return 2
    return 3


def parity(f, k):
    """The exchange coefficient attached to f: k1 if p,q odd; k2 if p odd,
    q even; k3 if p even, q odd."""
    return k[parity_index(f) - 1]


@dataclass(frozen=True)
class FareyTriple:
    left: Frac
    middle: Frac
    right: Frac

    def __iter__(self):
        return iter((self.left, self.middle, self.right))

    def is_valid(self):
        a, b, c = self.left, self.middle, self.right
        dets_ok = abs(det2(a, b)) == abs(det2(b, c)) == abs(det2(c, a)) == 1
        return dets_ok and a < b < c

    def __str__(self):
        return "(%s, %s, %s)" % (self.left, self.middle, self.right)


ROOT = FareyTriple(ZERO, ONE, INF)


def children(t):
    """Left and right mediant children of a Farey-tree vertex."""
    a, c, e = t
    return (FareyTriple(a, mediant(a, c), c), FareyTriple(c, mediant(c, e), e))


def path_to(f):
    """L/R word leading from the root to the triple whose middle is f."""
    if f.is_boundary():
        raise NotInterior("%s has no Farey triple" % f)
    word = []
    t = ROOT
    while t.middle != f:
        if f < t.middle:
            t = children(t)[0]
            word.append("L")
        else:
            t = children(t)[1]
            word.append("R")
    return "".join(word)


def follow(word, t=ROOT):
    for ch in word:
        t = children(t)[0 if ch == "L" else 1]
    return t


def triple_of(f):
    """Unique Farey-tree triple with middle entry f."""
    return follow(path_to(f))


def walk(depth):
    """Yield (word, triple) for every vertex of generation 0..depth."""
    layer = [("", ROOT)]
    for _ in range(depth + 1):
        nxt = []
        for word, t in layer:
            yield word, t
            l, r = children(t)
            nxt.append((word + "L", l))
            nxt.append((word + "R", r))
        layer = nxt


def fractions_up_to(n):
    """All reduced p/q in [0, inf) with p + q <= n, q >= 1, sorted."""
    out = [Frac(p, q) for q in range(1, n + 1) for p in range(0, n + 1 - q) if gcd(p, q) == 1]
    return sorted(out, key=lambda f: (f.p / f.q, f.q))
