import random
from itertools import product

import pytest
from hypothesis import given

from markov_cluster import poset as po
from markov_cluster import skein as sk
from markov_cluster.farey import Frac, fractions_up_to, parity
from markov_cluster.laurent import LaurentPoly, ONE, lp_specialize
from conftest import fences

KS = [po.KParams(*t) for t in product(range(3), repeat=3)]
AT_ONE = {"x1": 1, "x2": 1, "x3": 1}


def count(p):
    return lp_specialize(po.weight_poly(p), AT_ONE).constant_term()


def test_crossing_example():
    p1, p2 = sk.example_crossing()
    want = sk.OverlapSpec(sk.CROSSING, 3, 4, 3, 4)
    assert want in sk.find_overlaps(p1, p2, sk.CROSSING)
    res = sk.resolve_crossing(p1, p2, want)
    counts = [count(p) for p in (p1, p2) + res.first + res.second]
    assert counts == [12, 7, 7, 11, 7, 1]
    assert 12 * 7 == 7 * 11 + 1 * 7
    assert res.holds(oracle=True)


def test_graft_example():
    k = po.KParams(0, 2, 3)
    f = Frac(2, 3)
    g = sk.resolve_graft(po.build_P(f, k), po.build_H(k))
    assert g.z == ONE
    assert g.first[0] == po.build_tilde(f, k)
    assert g.holds()
    gp = sk.resolve_graft(po.build_P(f, k, po.PRINCIPAL), po.build_H(k, po.PRINCIPAL))
    assert gp.holds()
    P = po.build_P(f, k, po.PRINCIPAL)
    assert gp.second == (po.slice_(P, 1, 9), po.EMPTY)
    # the printed Z has y3^3; the identity holds with the product of all H weights
    assert gp.z == LaurentPoly.monomial(y=(1, 2, 2))


def test_kissing_example():
    ws = [LaurentPoly.var("y%d" % i) if i <= 3 else LaurentPoly.monomial(x=(i - 3, 0, 0)) for i in range(1, 6)]
    ws[3] = ws[0]
    p = sk.example_kiss(ws)
    o = sk.find_overlaps(p, kind=sk.KISS)
    assert o[0] == sk.OverlapSpec(sk.KISS, 2, 4, r=1)
    res = sk.resolve_reverse_kissing(p, o[0])
    assert res.second == (po.EMPTY,)
    assert po.weight_poly(p) - po.weight_poly(res.first[0]) == ws[2] * ws[3] * ws[4]


def test_kissing_needs_equal_weights():
    ws = [LaurentPoly.monomial(x=(i, 0, 0)) for i in range(1, 6)]
    p = sk.example_kiss(ws)
    assert not sk.is_reverse_kissing(p, 1, 2, 4)
    with pytest.raises(sk.InvalidOverlap):
        sk.resolve_reverse_kissing(p, sk.OverlapSpec(sk.KISS, 2, 4, r=1))


def test_walk_example():
    gp, w = sk.example_walk()
    assert gp.is_gentle() and gp.is_orbifold_type()
    assert sk.walk_g_vector(gp, w) == (2, -1, 0)
    p = sk.walk_to_poset(gp, w)
    o = sk.find_overlaps(p, kind=sk.KISS)[0]
    lam = [2, 3, 5, 2, 7]
    d = sk.decompose_X(gp, w, o, scalars=lam)
    x3 = LaurentPoly.var("x3")
    assert d.X - d.X34 == lam[2] * lam[3] * lam[4] * x3


def test_bad_overlaps_rejected():
    p1, p2 = sk.example_crossing()
    with pytest.raises(sk.InvalidOverlap):
        sk.resolve_crossing(p1, p2, sk.OverlapSpec(sk.CROSSING, 1, 3, 1, 3))
    with pytest.raises(sk.InvalidOverlap):
        sk.resolve_graft(po.EMPTY, p1)
    with pytest.raises(ValueError):
        sk.find_overlaps(p1, p2, "braid")


@pytest.mark.parametrize("kind", sk.KINDS)
@pytest.mark.parametrize("principal", [False, True])
def test_planted_instances(kind, principal):
    rng = random.Random("%s-%s" % (kind, principal))
    for _ in range(200):
        p1, p2, o = sk.planted_instance(kind, rng, principal=principal)
        assert len(p1) <= 18 and (p2 is None or len(p2) <= 18)
        if kind != sk.GRAFT:
            assert o in sk.find_overlaps(p1, p2, kind)
        res = sk.resolve(kind, p1, p2, o)
        assert res.lhs() == res.rhs()
        assert res.lhs(po.brute_force_weight) == res.rhs(po.brute_force_weight)


@given(fences(max_size=9, principal=True), fences(max_size=9, principal=True))
def test_graft_holds_for_any_pair(a, b):
    if len(a) and len(b):
        assert sk.resolve_graft(a, b).holds()


@given(fences(max_size=8), fences(max_size=8))
def test_every_found_crossing_resolves(a, b):
    for o in sk.find_overlaps(a, b, sk.CROSSING)[:3]:
        assert sk.resolve_crossing(a, b, o).holds()


@given(fences(max_size=12))
def test_every_found_kiss_resolves(p):
    for o in sk.find_overlaps(p, kind=sk.KISS):
        assert sk.resolve_reverse_kissing(p, o).holds()


def test_asymmetry_as_kissing_resolution():
    for k in KS:
        for f in fractions_up_to(9):
            kf = parity(f, k)
            P = po.build_P(f, k)
            if not kf or len(P) < 4:
                continue
            res, Q, back, resid = sk.asymmetry_resolution(P, kf)
            other = po.slice_(P, 2, len(P)) if P.dirs[0] == "D" else po.slice_(P, 1, len(P) - 1)
            assert res.holds()
            assert po.W(Q) == po.W(back) + resid
            assert po.W(back) == po.W(other)


def test_resolution_json():
    p1, p2 = sk.example_crossing()
    res = sk.resolve(sk.CROSSING, p1, p2, sk.OverlapSpec(sk.CROSSING, 3, 4, 3, 4))
    obj = res.to_json_obj()
    assert obj["kind"] == sk.CROSSING
    assert [po.FencePoset.from_json_obj(p) for p in obj["first"]] == list(res.first)


def test_product_of_weights_formula_on_random_walks():
    rng = random.Random(11)
    for k in (po.KParams(0, 0, 0), po.KParams(0, 1, 1), po.KParams(1, 1, 1), po.KParams(2, 0, 1)):
        gp = sk.gentle_pair_for(k)
        for _ in range(60):
            w = sk.Walk(rng.choice(gp.vertices), ())
            for _ in range(rng.randint(0, 8)):
                ext = [(a.name, 1) for a in sk._extend(gp, w, True, 1)] + \
                      [(a.name, -1) for a in sk._extend(gp, w, True, -1)]
                if not ext:
                    break
                w = sk.Walk(w.start, w.steps + (rng.choice(ext),))
            p = sk.walk_to_poset(gp, w)
            j = rng.randint(1, len(p))
            m = rng.randint(j, len(p))
            assert po.product_of_weights(p, j, m) == sk.product_of_weights_formula(gp, w, j, m)
