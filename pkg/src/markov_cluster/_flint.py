"""Optional python-flint backend for large products and exact quotients.

Term dictionaries are moved into flint's sparse multivariate integer
polynomials after shifting every exponent slot to start at 0 and clearing
denominators. Small operands stay on the dictionary kernel, where the
conversion overhead would dominate.
"""
from fractions import Fraction
from math import gcd, lcm

try:
    import flint
    from flint.utils.flint_exceptions import DomainError
    _CTX = flint.fmpz_mpoly_ctx.get(("e", 6), "lex")
    _CTX5 = flint.fmpz_mpoly_ctx.get(("e", 5), "lex")
    AVAILABLE = True
except ImportError:  # pragma: no cover - optional dependency
    flint = None
    AVAILABLE = False

_BITS = 20
_HALF = 1 << (_BITS - 1)
_MASK = (1 << _BITS) - 1
_SHIFTS = tuple(_BITS * i for i in range(6))

# product size (terms x terms) above which flint is used
MUL_THRESHOLD = 4096


def _columns(terms):
    keys = list(terms)
    return [[(k >> s) & _MASK for k in keys] for s in _SHIFTS]


def _denominator(terms):
    den = 1
    for c in terms.values():
        if type(c) is Fraction:
            den = lcm(den, c.denominator)
    return den


# slots kept when the x3 exponent is implied by homogeneity in x
_PROJECTED = (0, 1, 3, 4, 5)


def _x_degree(cols):
    """Common x-degree of all terms, or None if the terms are not homogeneous."""
    degs = {a + b + c for a, b, c in zip(cols[0], cols[1], cols[2])}
    return degs.pop() - 3 * _HALF if len(degs) == 1 else None


def _encode(terms, cols, mins, den, project):
    """flint poly of ``terms`` shifted by ``mins`` and scaled by ``den``."""
    slots = _PROJECTED if project else range(6)
    cols = [[v - mins[i] for v in cols[i]] if mins[i] else cols[i] for i in slots]
    vals = terms.values()
    if den != 1:
        vals = [c.numerator * (den // c.denominator) if type(c) is Fraction else c * den for c in vals]
    return (_CTX5 if project else _CTX).from_dict(dict(zip(zip(*cols), vals)))


def _to_flint(terms):
    """Return (flint poly, slot minima, common denominator)."""
    cols = _columns(terms)
    mins = [min(c) for c in cols]
    return _encode(terms, cols, mins, _denominator(terms), False), [m - _HALF for m in mins], _denominator(terms)


def _from_flint(poly, mins, den, degree=None):
    """Term dictionary of poly / den shifted back by ``mins`` (true exponents).

    With ``degree`` given, poly lives on the projected slots and the x3
    exponent of each term is degree minus its x1 and x2 exponents.
    """
    slots = _PROJECTED if degree is not None else range(6)
    base = 0
    for i in range(6):
        base += ((mins[i] if i in slots else 0) + _HALF) << _SHIFTS[i]
    monoms = poly.monoms()
    if not monoms:
        return {}
    keys = [base] * len(monoms)
    cols = list(zip(*monoms))
    if degree is not None:
        x1 = [int(e) for e in cols[0]]
        x2 = [int(e) for e in cols[1]]
        rest = degree - mins[0] - mins[1]
        keys = [k + (rest - a - b << _SHIFTS[2]) for k, a, b in zip(keys, x1, x2)]
    for col, i, deg in zip(cols, slots, poly.degrees()):
        if deg > 0:
            keys = [k + (int(e) << _SHIFTS[i]) for k, e in zip(keys, col)]
    coeffs = [int(c) for c in poly.coeffs()]
    if den == 1:
        return dict(zip(keys, coeffs))
    return {k: Fraction(c, den) if c % den else c // den for k, c in zip(keys, coeffs)}


def combine(operands, plans):
    """Evaluate sums of signed products of term dictionaries in flint.

    ``plans`` holds one list of (sign, i, j) per output, meaning the sum of
    sign * operands[i] * operands[j]. Every operand is converted once, with
    exponent minima and denominator shared by all operands, so products of
    different pairs can be added without leaving flint. When every operand
    is homogeneous in x and each output sums products of one degree, the
    dependent x3 slot is dropped, which lets flint work on a denser layout.
    """
    live = [i for i, t in enumerate(operands) if t]
    if not live:
        return [{} for _ in plans]
    cols = {i: _columns(operands[i]) for i in live}
    mins = [min(min(cols[i][s]) for i in live) for s in range(6)]
    den = 1
    for i in live:
        den = lcm(den, _denominator(operands[i]))
    degs = {i: _x_degree(cols[i]) for i in live}
    out_degs = []
    for plan in plans:
        ds = {degs[i] + degs[j] for _, i, j in plan if i in degs and j in degs
              and degs[i] is not None and degs[j] is not None}
        out_degs.append(ds.pop() if len(ds) == 1 else None)
    project = None not in degs.values() and all(
        d is not None or not any(i in degs and j in degs for _, i, j in plan)
        for d, plan in zip(out_degs, plans))
    polys = {i: _encode(operands[i], cols[i], mins, den, project) for i in live}
    ctx = _CTX5 if project else _CTX
    true_mins = [2 * (m - _HALF) for m in mins]
    out = []
    for plan, deg in zip(plans, out_degs):
        acc = ctx.from_dict({})
        for sign, i, j in plan:
            if i in polys and j in polys:
                prod = polys[i] * polys[j]
                acc = acc + prod if sign > 0 else acc - prod
        out.append(_from_flint(acc, true_mins, den * den, deg if project else None))
    return out


def mul_terms(a, b):
    ca, cb = _columns(a), _columns(b)
    ma, mb = [min(c) for c in ca], [min(c) for c in cb]
    da, db = _denominator(a), _denominator(b)
    ga, gb = _x_degree(ca), _x_degree(cb)
    project = ga is not None and gb is not None
    fa = _encode(a, ca, ma, da, project)
    fb = _encode(b, cb, mb, db, project)
    mins = [x + y - 2 * _HALF for x, y in zip(ma, mb)]
    return _from_flint(fa * fb, mins, da * db, ga + gb if project else None)


def div_terms(a, b):
    """Exact Laurent quotient a / b, or None when it does not exist."""
    fa, ma, da = _to_flint(a)
    fb, mb, db = _to_flint(b)
    content = 0
    for c in fb.coeffs():
        content = gcd(content, int(c))
    if content != 1:
        fb = fb / content
    try:
        q = fa / fb
    except DomainError:
        return None
    mins = [x - y for x, y in zip(ma, mb)]
    out = _from_flint(q, mins, 1)
    scale = Fraction(db, da * content)
    if scale == 1:
        return out
    res = {}
    for k, c in out.items():
        v = c * scale
        res[k] = v.numerator if v.denominator == 1 else v
    return res


def fence_endpoint_sums(weights, dirs):
    """Order-ideal sums of a linear fence split by membership of both ends.

    ``weights`` are monomial term dictionaries and ``dirs`` the U/D
    relations. Every weight is lifted to D * S * w with one common monomial S
    and denominator D making all of them integer polynomials; the "out"
    transitions carry the same factor, so after n elements every state is
    scaled by (D S)^n, which is removed once at the end.
    """
    raws = []
    for w in weights:
        (key, c), = w.items()
        raws.append(([((key >> s) & _MASK) - _HALF for s in _SHIFTS], c))
    low = [min(0, min(r[i] for r, _ in raws)) for i in range(6)]
    den = 1
    for _, c in raws:
        if type(c) is Fraction:
            den = lcm(den, c.denominator)
    lift = []
    for r, c in raws:
        exps = tuple(e - m for e, m in zip(r, low))
        lift.append(_CTX.from_dict({exps: int(c * den)}))
    step = _CTX.from_dict({tuple(-m for m in low): den})
    zero = _CTX.from_dict({})
    n = len(weights)
    out = {}
    for l_in in (False, True):
        v_out, v_in = (zero, lift[0]) if l_in else (step, zero)
        for i in range(n - 1):
            if dirs[i] == "U":
                v_out, v_in = (v_out + v_in) * step, v_in * lift[i + 1]
            else:
                v_out, v_in = v_out * step, (v_out + v_in) * lift[i + 1]
        mins = [n * m for m in low]
        out[(l_in, False)] = _from_flint(v_out, mins, den ** n)
        out[(l_in, True)] = _from_flint(v_in, mins, den ** n)
    return out
