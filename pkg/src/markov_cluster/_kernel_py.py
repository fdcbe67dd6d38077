"""Pure-Python fallback for the polynomial multiplication kernel.

Exponent vectors are packed into a single integer (see laurent._pack), so
multiplying two monomials is one integer addition followed by removing the
doubled offset. Fraction coefficients are cleared to a common denominator
before the inner loop so that it runs on ints only. Results are normalized:
integral coefficients come back as int, zeros are dropped.
"""
from fractions import Fraction
from math import lcm


def _clear(values):
    """Return (int numerators, common denominator)."""
    den = 1
    for v in values:
        if type(v) is Fraction:
            den = lcm(den, v.denominator)
    if den == 1:
        return values, 1
    return [v.numerator * (den // v.denominator) if type(v) is Fraction else v * den
            for v in values], den


def _finish(out, den):
    if den == 1:
        return {k: c for k, c in out.items() if c}
    res = {}
    for k, c in out.items():
        if c:
            if c % den:
                res[k] = Fraction(c, den)
            else:
                res[k] = c // den
    return res


def mul_terms(a, b, offset):
    """Multiply two packed term dictionaries.

    ``offset`` is the packed representation of the zero exponent vector;
    it is subtracted once from every key sum.
    """
    if len(a) < len(b):
        a, b = b, a
    av, da = _clear(list(a.values()))
    bv, db = _clear(list(b.values()))
    ak = list(a.keys())
    pairs = list(zip(ak, av))
    out = {}
    get = out.get
    for kb, cb in zip(b.keys(), bv):
        shift = kb - offset
        for ka, ca in pairs:
            key = ka + shift
            out[key] = get(key, 0) + ca * cb
    return _finish(out, da * db)


def add_terms(a, b, sign):
    """Return a + sign * b as a new normalized dictionary."""
    av, da = _clear(list(a.values()))
    bv, db = _clear(list(b.values()))
    den = lcm(da, db)
    fa, fb = den // da, sign * (den // db)
    out = {k: c * fa for k, c in zip(a.keys(), av)}
    get = out.get
    for k, c in zip(b.keys(), bv):
        out[k] = get(k, 0) + c * fb
    return _finish(out, den)
