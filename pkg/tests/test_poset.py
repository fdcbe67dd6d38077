from itertools import product

import pytest
from hypothesis import given, strategies as st

from markov_cluster import poset as po
from markov_cluster.farey import Frac, fractions_up_to, triple_of
from markov_cluster.laurent import LaurentPoly, ONE, X1, X2, X3
from conftest import fences

F = Frac.parse
K023 = po.KParams(0, 2, 3)
KS = [po.KParams(*t) for t in product(range(3), repeat=3)]


def hat(i):
    return {1: X2 * X3 ** -1, 2: X3 * X1 ** -1, 3: X1 * X2 ** -1}[i]


def test_kparams():
    k = po.KParams.parse("0,2,3")
    assert k == K023
    assert k.ds == (1, 2, 2)
    assert po.KParams(0, 0, 0).ds == (1, 1, 1)


def test_P_two_thirds():
    P = po.build_P(F("2/3"), K023)
    assert len(P) == 10
    assert P.labels == (1, 2, 2, 1, 3, 3, 1, 2, 2, 1)
    assert po.element_count(F("2/3"), K023) == (10, 15)
    assert len(po.build_tilde(F("2/3"), K023)) == 15


def test_P_zero_is_empty():
    assert len(po.build_P(F("0/1"), K023)) == 0
    assert po.weight_poly(po.EMPTY) == ONE


def test_H_chain():
    H = po.build_H(K023)
    # listed from the top down
    assert H.labels == (3, 3, 1, 2, 2)
    assert set(H.dirs) == {"D"}
    bottom_up = H.weights[::-1]
    assert bottom_up == (2 * hat(2), hat(2) / 2, hat(1) ** 2, 3 * hat(3), hat(3) / 3)
    Hp = po.build_H(K023, po.PRINCIPAL)
    assert Hp.weights[2] == hat(1) ** 2 * LaurentPoly.var("y1")


def test_tilde_is_P_up_H():
    f = F("2/3")
    assert po.build_tilde(f, K023) == po.up(po.build_P(f, K023), po.build_H(K023))


def test_tilde_one_zero_all_positive():
    t = po.build_tilde_one_zero(po.KParams(1, 1, 1))
    assert len(t) == 8


def test_g_vectors_of_example():
    assert po.g_vec(po.build_P(F("2/3"), K023)) == (0, -2, 3)
    assert po.g_vec(po.build_circ(F("2/3"), K023)) == (1, -3, 2)


def test_christoffel():
    assert po.christoffel_word(F("2/3")) == "ABB"


@pytest.mark.parametrize("k2", [0, 1, 2])
def test_asymmetry_example(k2):
    P = po.build_P(F("1/2"), po.KParams(1, k2, 0))
    diff = po.W(P, "~R") - po.W(P, "~L")
    assert diff == k2 * hat(1) ** 2 * hat(2)


def test_product_of_weights_examples():
    for k in KS:
        for f in fractions_up_to(8):
            if f.p == 0:
                continue
            P = po.build_P(f, k)
            gc = po.circ_g_vector(f)
            assert po.product_of_weights(P) == po.xmono(tuple(-2 * v for v in gc))
            Pp = po.build_P(f, k, po.PRINCIPAL)
            assert po.product_of_weights(Pp) == po.Y_monomial(f, k) * po.xmono(tuple(-2 * v for v in gc))


def test_farey_decomposition_example():
    k = po.KParams(0, 1, 2)
    l, m, r = triple_of(F("2/3"))
    expect = po.down(po.reverse(po.build_P(r, k)), po.reverse(po.build_H(k)), po.reverse(po.build_P(l, k)))
    assert po.build_P(m, k) == expect
    assert po.farey_decomposition(l, r, k) == expect


def test_slices_and_empty_conventions():
    P = po.build_P(F("2/3"), K023)
    assert len(po.slice_(P, 1, 0)) == 0
    assert po.slice_(P, 1, 10) == P
    assert po.slice_(P, 3, 4).labels == (2, 1)


def test_json_and_dot():
    P = po.build_P(F("2/3"), K023, po.PRINCIPAL)
    assert po.FencePoset.from_json(P.to_json()) == P
    dot = P.to_dot()
    assert dot.count("[label=") == 10
    assert dot == P.to_dot()


def test_fence_validation():
    with pytest.raises(ValueError):
        po.fence([1, 2], [ONE, ONE], "UU")
    with pytest.raises(ValueError):
        po.fence([1, 2], [ONE, ONE], "X")


@given(fences(max_size=12))
def test_dp_matches_enumeration(p):
    assert po.weight_poly(p) == po.brute_force_weight(p)


@given(fences(max_size=10, principal=True), st.sampled_from([po.FREE, po.IN, po.OUT]),
       st.sampled_from([po.FREE, po.IN, po.OUT]))
def test_dp_matches_enumeration_constrained(p, L, R):
    assert po.weight_poly(p, L, R) == po.brute_force_weight(p, L, R)


@given(fences(max_size=10, circular=True).filter(lambda p: set(p.dirs) == {"U", "D"}))
def test_circular_dp_matches_enumeration(p):
    assert po.weight_poly(p) == po.brute_force_weight(p)


@given(st.one_of(fences(max_size=9, principal=True),
                 fences(max_size=9, circular=True).filter(lambda p: set(p.dirs) == {"U", "D"})))
def test_endpoint_table_matches_enumeration(p):
    if len(p) == 0:
        return
    table = po.endpoint_table(p)
    for (l_in, r_in), v in table.items():
        L = po.IN if l_in else po.OUT
        R = po.IN if r_in else po.OUT
        assert v == po.brute_force_weight(p, L, R)


@given(fences(max_size=10, principal=True))
def test_opposite_complements_ideals(p):
    assert po.weight_poly(p) == po.product_of_weights(p) * po.weight_poly(po.opposite(p))


@given(fences(max_size=10))
def test_ideal_count_splits_on_an_endpoint(p):
    if len(p):
        assert po.W(p) == po.W(p, "L") + po.W(p, "~L")


@given(fences(max_size=8), fences(max_size=8))
def test_concat_reverse(a, b):
    if len(a) and len(b):
        assert po.reverse(po.up(a, b)) == po.down(po.reverse(b), po.reverse(a))
        assert po.weight_poly(po.reverse(a)) == po.weight_poly(a)


@pytest.mark.parametrize("k", [po.KParams(2, 2, 2), po.KParams(0, 1, 2), po.KParams(2, 0, 1)])
@pytest.mark.parametrize("mode", [po.TRIVIAL, po.PRINCIPAL])
def test_flint_endpoint_dp_matches_python_dp(k, mode, monkeypatch):
    # long fences with half-integer scalars exercise the scaled flint DP
    from markov_cluster import _flint
    if not _flint.AVAILABLE:
        pytest.skip("python-flint not installed")
    for f in (Frac(5, 8), Frac(7, 4), Frac(3, 10)):
        for p in (po.build_tilde(f, k, mode), po.build_circ(f, k, mode)):
            assert len(p) >= po.FLINT_FENCE_SIZE
            fast = po.endpoint_table(p)
            monkeypatch.setattr(po, "FLINT_FENCE_SIZE", 10 ** 6)
            assert po.endpoint_table(p) == fast
            monkeypatch.setattr(po, "FLINT_FENCE_SIZE", 12)
