# cython: boundscheck=False, wraparound=False
"""Compiled polynomial multiplication kernel.

Same contract as _kernel_py: keys are packed exponent integers, values are
int or Fraction coefficients, results are normalized. Fractions are cleared
to a common denominator first so the typed inner loop sees ints only;
arithmetic stays on Python objects so results remain exact.
"""
from fractions import Fraction
from math import lcm


cdef tuple _clear(list values):
    cdef object den = 1
    cdef object v
    for v in values:
        if type(v) is Fraction:
            den = lcm(den, v.denominator)
    if den == 1:
        return values, 1
    return [v.numerator * (den // v.denominator) if type(v) is Fraction else v * den
            for v in values], den


cdef dict _finish(dict out, object den):
    cdef dict res = {}
    cdef object k, c, q
    if den == 1:
        for k, c in out.items():
            if c:
                res[k] = c
        return res
    for k, c in out.items():
        if c:
            if c % den:
                res[k] = Fraction(c, den)
            else:
                res[k] = c // den
    return res


def mul_terms(dict a, dict b, object offset):
    cdef dict out = {}
    cdef list ak, av, bk, bv
    cdef Py_ssize_t i, j, na, nb
    cdef object shift, key, c, cb, old, da, db
    if len(a) < len(b):
        a, b = b, a
    ak = list(a.keys())
    bk = list(b.keys())
    av, da = _clear(list(a.values()))
    bv, db = _clear(list(b.values()))
    na = len(ak)
    nb = len(bk)
    for j in range(nb):
        shift = bk[j] - offset
        cb = bv[j]
        for i in range(na):
            key = ak[i] + shift
            c = av[i] * cb
            old = out.get(key)
            if old is None:
                out[key] = c
            else:
                out[key] = old + c
    return _finish(out, da * db)


def add_terms(dict a, dict b, object sign):
    cdef list av, bv, bk
    cdef object da, db, den, fa, fb, k, c, old
    cdef dict out
    cdef Py_ssize_t i
    av, da = _clear(list(a.values()))
    bv, db = _clear(list(b.values()))
    den = lcm(da, db)
    fa = den // da
    fb = sign * (den // db)
    out = {k: c * fa for k, c in zip(a.keys(), av)}
    bk = list(b.keys())
    for i in range(len(bk)):
        k = bk[i]
        old = out.get(k)
        if old is None:
            out[k] = bv[i] * fb
        else:
            out[k] = old + bv[i] * fb
    return _finish(out, den)
