"""Exact Laurent polynomials in x1, x2, x3 (integer exponents) and
y1, y2, y3 (half-integer exponents), plus 2x2 matrices over them.

Coefficients are ints or Fractions. An exponent vector is stored packed into
one Python integer: six 20-bit slots, with y exponents doubled so that every
slot is an integer. Packed keys add like exponent vectors once the doubled
offset is removed, which keeps multiplication to one integer add per pair.
"""
from dataclasses import dataclass
from fractions import Fraction
import json

try:
    from ._kernel import mul_terms, add_terms
    KERNEL = "cython"
except ImportError:  # pragma: no cover - depends on build
    from ._kernel_py import mul_terms, add_terms
    KERNEL = "python"

from . import _flint

VARS = ("x1", "x2", "x3", "y1", "y2", "y3")
_BITS = 20
_HALF = 1 << (_BITS - 1)
_MASK = (1 << _BITS) - 1
_OFFSET = sum(_HALF << (_BITS * i) for i in range(6))


class NotDivisible(ArithmeticError):
    """No exact Laurent quotient exists."""


class NotUnimodular(ArithmeticError):
    """Matrix inverse requested for a matrix whose determinant is not 1."""


def _pack(raw):
    """Pack six integer slots (y already doubled)."""
    key = 0
    for i, e in enumerate(raw):
        if not -_HALF < e < _HALF:
            raise OverflowError("exponent out of range")
        key |= (e + _HALF) << (_BITS * i)
    return key


def _unpack(key):
    return tuple(((key >> (_BITS * i)) & _MASK) - _HALF for i in range(6))


def _norm(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


def _coerce_coeff(c):
    if isinstance(c, bool):
        return int(c)
    if isinstance(c, (int, Fraction)):
        return _norm(c)
    if isinstance(c, str):
        return _norm(Fraction(c))
    raise TypeError("coefficient must be int, Fraction or str, got %r" % type(c))


class LaurentPoly:
    """Immutable exact Laurent polynomial.

    Build with LaurentPoly.const, LaurentPoly.var, LaurentPoly.monomial or
    by arithmetic on those. The mapping self.terms goes from packed exponent
    keys to nonzero coefficients and must not be mutated.
    """

    __slots__ = ("terms", "_hash")

    def __init__(self, terms=None):
        self.terms = terms if terms is not None else {}
        self._hash = None

    # construction
    @classmethod
    def const(cls, c):
        c = _coerce_coeff(c)
        return cls({_OFFSET: c} if c else {})

    @classmethod
    def monomial(cls, x=(0, 0, 0), y=(0, 0, 0), c=1):
        """c * x^x * y^y; y entries may be halves (Fraction or str)."""
        c = _coerce_coeff(c)
        if not c:
            return cls()
        raw = list(x) + [_double(v) for v in y]
        return cls({_pack(raw): c})

    @classmethod
    def var(cls, name):
        i = VARS.index(name)
        raw = [0] * 6
        raw[i] = 2 if i >= 3 else 1
        return cls({_pack(raw): 1})

    @classmethod
    def from_dict(cls, d):
        """From {(x1,x2,x3,y1,y2,y3): coeff}, y given as true (half) values."""
        out = {}
        for exp, c in d.items():
            exp = tuple(exp) + (0,) * (6 - len(exp))
            key = _pack(list(exp[:3]) + [_double(v) for v in exp[3:]])
            out[key] = out.get(key, 0) + _coerce_coeff(c)
        return cls({k: _norm(v) for k, v in out.items() if v})

    # inspection
    def items(self):
        """Yield (x_exp, y_exp, coeff) with y_exp as Fractions."""
        for key, c in self.terms.items():
            raw = _unpack(key)
            yield raw[:3], tuple(Fraction(v, 2) for v in raw[3:]), c

    def is_zero(self):
        return not self.terms

    def is_monomial(self):
        return len(self.terms) == 1

    def is_integral(self):
        """True if all coefficients are integers and all y exponents whole."""
        for key, c in self.terms.items():
            if not isinstance(c, int):
                return False
            if any(v % 2 for v in _unpack(key)[3:]):
                return False
        return True

    def has_nonnegative_coeffs(self):
        return all(c > 0 for c in self.terms.values())

    def constant_term(self):
        return self.terms.get(_OFFSET, 0)

    def uses_y(self):
        return any(_unpack(k)[3:] != (0, 0, 0) for k in self.terms)

    def __len__(self):
        return len(self.terms)

    # arithmetic
    def _lift(self, other):
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return LaurentPoly.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        if not other.terms:
            return self
        if not self.terms:
            return other
        return LaurentPoly(add_terms(self.terms, other.terms, 1))

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return LaurentPoly(add_terms(self.terms, other.terms, -1))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = _norm(other)
            if not other:
                return LaurentPoly()
            return LaurentPoly({k: _norm(c * other) for k, c in self.terms.items()})
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        if not self.terms or not other.terms:
            return LaurentPoly()
        if _flint.AVAILABLE and len(self.terms) * len(other.terms) >= _flint.MUL_THRESHOLD:
            return LaurentPoly(_flint.mul_terms(self.terms, other.terms))
        return LaurentPoly(mul_terms(self.terms, other.terms, _OFFSET))

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            return self.inverse_monomial() ** (-n)
        result = LaurentPoly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def inverse_monomial(self):
        if len(self.terms) != 1:
            raise NotDivisible("only monomials are invertible")
        (key, c), = self.terms.items()
        return LaurentPoly({2 * _OFFSET - key: _norm(Fraction(1) / c)})

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (Fraction(1) / other)
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return lp_div_exact(self, other)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly.const(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    # evaluation
    def at_one(self):
        """Value at x = y = 1 (the |a| of a cluster variable)."""
        return _norm(sum(self.terms.values(), 0))

    def specialize(self, assignment):
        return lp_specialize(self, assignment)

    # serialization
    def sorted_items(self):
        rows = []
        for key, c in self.terms.items():
            raw = _unpack(key)
            rows.append((raw, c))
        rows.sort(key=lambda r: r[0])
        return rows

    def to_json_obj(self):
        terms = []
        for raw, c in self.sorted_items():
            c = Fraction(c)
            terms.append({
                "c": "%d/%d" % (c.numerator, c.denominator),
                "x": list(raw[:3]),
                "y": ["%d/2" % v for v in raw[3:]],
            })
        return {"terms": terms}

    def to_json(self):
        return json.dumps(self.to_json_obj(), separators=(",", ":"))

    @classmethod
    def from_json_obj(cls, obj):
        out = {}
        for t in obj["terms"]:
            raw = list(t["x"]) + [_double(Fraction(v)) for v in t["y"]]
            out[_pack(raw)] = _coerce_coeff(Fraction(t["c"]))
        return cls({k: v for k, v in out.items() if v})

    @classmethod
    def from_json(cls, s):
        return cls.from_json_obj(json.loads(s))

    def __repr__(self):
        return "LaurentPoly(%s)" % self

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for raw, c in reversed(self.sorted_items()):
            mono = []
            for i, e in enumerate(raw):
                if not e:
                    continue
                if i >= 3:
                    e = Fraction(e, 2)
                mono.append(VARS[i] if e == 1 else "%s^%s" % (VARS[i], _fmt(e)))
            body = "*".join(mono)
            if not body:
                parts.append(_fmt(c))
            elif c == 1:
                parts.append(body)
            elif c == -1:
                parts.append("-" + body)
            else:
                parts.append("%s*%s" % (_fmt(c), body))
        return " + ".join(parts).replace("+ -", "- ")


def _fmt(v):
    v = Fraction(v)
    if v.denominator == 1:
        return str(v.numerator)
    return "(%d/%d)" % (v.numerator, v.denominator)


def _double(v):
    v = Fraction(v) * 2
    if v.denominator != 1:
        raise ValueError("y exponents must be half-integers")
    return v.numerator


# named variables
X1, X2, X3 = (LaurentPoly.var(n) for n in VARS[:3])
Y1, Y2, Y3 = (LaurentPoly.var(n) for n in VARS[3:])
ONE = LaurentPoly.const(1)
ZERO = LaurentPoly()


def xvar(i):
    return (X1, X2, X3)[i - 1]


def yvar(i):
    return (Y1, Y2, Y3)[i - 1]


def lp_arith(a, b, op):
    """Ring operation op in {'add', 'sub', 'mul'}."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError("unknown op %r" % op)


def _grlex(raw):
    return (sum(raw), raw)


def lp_div_exact(num, den):
    """Exact quotient num/den in the Laurent ring, or raise NotDivisible.

    Both sides are shifted by monomials so that every variable has minimum
    exponent 0; a Laurent quotient then exists iff the polynomial quotient
    exists, which grlex leading-term division decides.
    """
    if den.is_zero():
        raise ZeroDivisionError("division by zero polynomial")
    if num.is_zero():
        return LaurentPoly()
    if den.is_monomial():
        return num * den.inverse_monomial()
    if _flint.AVAILABLE:
        out = _flint.div_terms(num.terms, den.terms)
        if out is None:
            raise NotDivisible("polynomial quotient is not exact")
        return LaurentPoly(out)
    nrows = {_unpack(k): c for k, c in num.terms.items()}
    drows = {_unpack(k): c for k, c in den.terms.items()}
    nmin = [min(r[i] for r in nrows) for i in range(6)]
    dmin = [min(r[i] for r in drows) for i in range(6)]
    nrows = {tuple(e - m for e, m in zip(r, nmin)): c for r, c in nrows.items()}
    drows = {tuple(e - m for e, m in zip(r, dmin)): c for r, c in drows.items()}
    dlead = max(drows, key=_grlex)
    dcoef = Fraction(drows[dlead])
    quot = {}
    rem = dict(nrows)
    while rem:
        lead = max(rem, key=_grlex)
        shift = tuple(a - b for a, b in zip(lead, dlead))
        if min(shift) < 0:
            raise NotDivisible("leading term not divisible")
        c = _norm(rem[lead] / dcoef)
        quot[shift] = c
        for r, dc in drows.items():
            key = tuple(a + b for a, b in zip(r, shift))
            v = rem.get(key, 0) - c * dc
            if v:
                rem[key] = v
            else:
                rem.pop(key, None)
    offset = [a - b for a, b in zip(nmin, dmin)]
    return LaurentPoly({
        _pack([e + o for e, o in zip(r, offset)]): c for r, c in quot.items()
    })


def lp_specialize(p, assignment):
    """Substitute variables by rationals or Laurent polynomials.

    ``assignment`` maps names from VARS to int, Fraction or LaurentPoly.
    For y variables the substituted value is raised to the stored
    (possibly half) exponent, which requires a monomial or perfect square
    when the exponent is odd in halves; rationals must be exact squares.
    """
    idx = {VARS.index(n): v for n, v in assignment.items()}
    for i, v in idx.items():
        if isinstance(v, (int, Fraction)) and v == 0:
            for key in p.terms:
                if _unpack(key)[i] < 0:
                    raise ZeroDivisionError("zero substituted for %s with negative exponent" % VARS[i])
    out = LaurentPoly()
    cache = {}
    for key, c in p.terms.items():
        raw = list(_unpack(key))
        term = LaurentPoly.const(c)
        for i, v in idx.items():
            e = raw[i]
            raw[i] = 0
            if not e:
                continue
            term = term * _power(v, e, i >= 3, cache, i)
        out = out + term * LaurentPoly({_pack(raw): 1})
    return out


def _power(v, e, half, cache, i):
    """v^(e/2) if half else v^e."""
    ck = (i, e)
    if ck in cache:
        return cache[ck]
    if half:
        if e % 2 == 0:
            res = _power(v, e // 2, False, cache, -1 - i)
        else:
            res = _power(_sqrt(v), e, False, cache, -10 - i)
    elif isinstance(v, LaurentPoly):
        res = v ** e
    else:
        res = LaurentPoly.const(Fraction(v) ** e)
    cache[ck] = res
    return res


def _sqrt(v):
    if isinstance(v, LaurentPoly):
        if not v.is_monomial():
            raise ValueError("half power of a non-monomial")
        (key, c), = v.terms.items()
        raw = _unpack(key)
        if any(e % 2 for e in raw[:3]):
            raise ValueError("half power of an odd monomial")
        root_c = _sqrt(c).constant_term()
        return LaurentPoly({_pack([e // 2 for e in raw[:3]] + [e // 2 for e in raw[3:]]): root_c})
    f = Fraction(v)
    n, d = _isqrt(f.numerator), _isqrt(f.denominator)
    if n is None or d is None:
        raise ValueError("rational %s is not a perfect square" % f)
    return LaurentPoly.const(Fraction(n, d))


def _isqrt(n):
    if n < 0:
        return None
    import math
    r = math.isqrt(n)
    return r if r * r == n else None


@dataclass(frozen=True)
class Mat2:
    """2x2 matrix over LaurentPoly, entries [[a, b], [c, d]]."""

    a: LaurentPoly
    b: LaurentPoly
    c: LaurentPoly
    d: LaurentPoly

    @classmethod
    def of(cls, a, b, c, d):
        lift = lambda v: v if isinstance(v, LaurentPoly) else LaurentPoly.const(v)
        return cls(lift(a), lift(b), lift(c), lift(d))

    @classmethod
    def identity(cls):
        return cls.of(1, 0, 0, 1)

    def rows(self):
        return ((self.a, self.b), (self.c, self.d))

    def __matmul__(self, o):
        return mat2_mul(self, o)

    def __add__(self, o):
        return Mat2(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)

    def __sub__(self, o):
        return Mat2(self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d)

    def __neg__(self):
        return Mat2(-self.a, -self.b, -self.c, -self.d)

    def scale(self, s):
        return Mat2(self.a * s, self.b * s, self.c * s, self.d * s)

    def det(self):
        return mat2_det(self)

    def trace(self):
        return mat2_trace(self)

    def inv(self):
        return mat2_inv(self)

    def to_json_obj(self):
        return [[self.a.to_json_obj(), self.b.to_json_obj()],
                [self.c.to_json_obj(), self.d.to_json_obj()]]

    def __str__(self):
        return "[[%s, %s], [%s, %s]]" % (self.a, self.b, self.c, self.d)


def _entries(m):
    return (m.a.terms, m.b.terms, m.c.terms, m.d.terms)


def _large(m, n):
    size = lambda x: max(len(x.a.terms), len(x.b.terms), len(x.c.terms), len(x.d.terms))
    return _flint.AVAILABLE and size(m) * size(n) >= _flint.MUL_THRESHOLD


def mat2_mul(m, n):
    if _large(m, n):
        plans = [[(1, 0, 4), (1, 1, 6)], [(1, 0, 5), (1, 1, 7)],
                 [(1, 2, 4), (1, 3, 6)], [(1, 2, 5), (1, 3, 7)]]
        return Mat2(*(LaurentPoly(t) for t in _flint.combine(_entries(m) + _entries(n), plans)))
    return Mat2(m.a * n.a + m.b * n.c, m.a * n.b + m.b * n.d,
                m.c * n.a + m.d * n.c, m.c * n.b + m.d * n.d)


def mat2_det(m):
    if _large(m, m):
        (t,) = _flint.combine(_entries(m), [[(1, 0, 3), (-1, 1, 2)]])
        return LaurentPoly(t)
    return m.a * m.d - m.b * m.c


def mat2_trace(m):
    return m.a + m.d


def mat2_inv(m):
    """Adjugate inverse; only valid for det = 1."""
    if mat2_det(m) != ONE:
        raise NotUnimodular("determinant is not 1")
    return Mat2(m.d, -m.b, -m.c, m.a)


def permute_vars(p, perm):
    """Rename x_i -> x_perm[i] and y_i -> y_perm[i] (perm maps 1..3 to 1..3)."""
    out = {}
    for key, c in p.terms.items():
        raw = _unpack(key)
        new = [0] * 6
        for i in range(3):
            j = perm[i + 1] - 1
            new[j] = raw[i]
            new[3 + j] = raw[3 + i]
        out[_pack(new)] = c
    return LaurentPoly(out)


def x_exponent_range(p):
    """Per-variable (min, max) x exponents, useful for grading checks."""
    rows = [_unpack(k) for k in p.terms]
    return [(min(r[i] for r in rows), max(r[i] for r in rows)) for i in range(3)]


def exponents(p):
    """List of (x_exp, doubled y_exp, coeff) triples."""
    out = []
    for key, c in p.terms.items():
        raw = _unpack(key)
        out.append((raw[:3], raw[3:], c))
    return out
