from fractions import Fraction

from hypothesis import HealthCheck, settings, strategies as st

from markov_cluster.laurent import LaurentPoly
from markov_cluster.poset import fence

settings.register_profile("repo", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("repo")

coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=4).filter(lambda c: c != 0)
small = st.integers(-3, 3)


@st.composite
def monomials(draw, principal=True):
    x = tuple(draw(small) for _ in range(3))
    y = tuple(Fraction(draw(st.integers(-4, 4)), 2) for _ in range(3)) if principal else (0, 0, 0)
    return LaurentPoly.monomial(x=x, y=y, c=draw(coeffs))


@st.composite
def polys(draw, max_terms=4, principal=True):
    out = LaurentPoly()
    for _ in range(draw(st.integers(0, max_terms))):
        out = out + draw(monomials(principal))
    return out


@st.composite
def fences(draw, max_size=10, principal=False, circular=False):
    n = draw(st.integers(1 if circular else 0, max_size))
    labels = [draw(st.integers(1, 3)) for _ in range(n)]
    weights = []
    for _ in range(n):
        x = tuple(draw(small) for _ in range(3))
        y = tuple(draw(st.integers(0, 2)) for _ in range(3)) if principal else (0, 0, 0)
        weights.append(LaurentPoly.monomial(x=x, y=y, c=draw(st.sampled_from((1, 1, 2, 3)))))
    ndirs = n if circular else max(n - 1, 0)
    dirs = [draw(st.sampled_from("UD")) for _ in range(ndirs)]
    return fence(labels, weights, dirs, circular)
