from fractions import Fraction
from itertools import combinations

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from mzvassoc.ncpoly import (
    AlphabetMismatch,
    NCPoly,
    TensorPoly,
    concat,
    coproduct_shuffle,
    coproduct_stuffle,
    is_grouplike,
    pairing,
    pi1,
    pi_X,
    pi_Y,
    series_exp,
    series_inverse,
    series_log,
    shuffle,
    shuffle_regularize_word,
    stuffle,
    stuffle_regularize_word,
    trailing_x0_decomposition,
)
from mzvassoc.words import words_up_to

F = Fraction


def X(text):
    return NCPoly.word(text, "X")


def Y(text):
    return NCPoly.word(text, "Y")


def brute_shuffle(u, v):
    """Place u's letters at every subset of positions."""
    n = len(u) + len(v)
    out = {}
    for pos in combinations(range(n), len(u)):
        w, iu, iv = [], 0, 0
        for i in range(n):
            if i in pos:
                w.append(u[iu]); iu += 1
            else:
                w.append(v[iv]); iv += 1
        out[tuple(w)] = out.get(tuple(w), 0) + 1
    return out


def test_spec_examples():
    assert concat(X("x0"), X("x1")) == X("x0x1")
    assert pairing(X("x0x1") * 2 + X("x1"), (1,)) == 1
    assert concat(NCPoly.one("X"), X("x0x1")) == X("x0x1")
    assert shuffle(X("x0"), X("x1")) == X("x0x1") + X("x1x0")
    assert shuffle(X("x1"), X("x0x1")) == X("x1x0x1") + X("x0x1x1") * 2
    assert stuffle(Y("y1"), Y("y1")) == Y("y1,y1") * 2 + Y("y2")
    assert stuffle(Y("y2"), Y("y1")) == Y("y2,y1") + Y("y1,y2") + Y("y3")
    assert stuffle(NCPoly.one("Y"), Y("y2,y1")) == Y("y2,y1")


def test_alphabet_mismatch():
    with pytest.raises(AlphabetMismatch):
        concat(X("x0"), Y("y1"))


def test_shuffle_against_interleavings():
    words = words_up_to("X", 4)
    for u in words:
        for v in words:
            assert shuffle(X_of(u), X_of(v)).terms == brute_shuffle(u, v)


def X_of(w):
    return NCPoly("X", {w: Fraction(1)})


def Y_of(w, alphabet="Y"):
    return NCPoly(alphabet, {w: Fraction(1)})


@pytest.mark.parametrize("alphabet,prod", [("X", shuffle), ("Y", stuffle)])
def test_commutative_associative(alphabet, prod):
    words = words_up_to(alphabet, 5)
    for u in words:
        for v in words:
            if _wt(alphabet, u) + _wt(alphabet, v) > 5:
                continue
            assert prod(Y_of(u, alphabet), Y_of(v, alphabet)) == prod(Y_of(v, alphabet), Y_of(u, alphabet))
    small = words_up_to(alphabet, 2)
    for u in small:
        for v in small:
            for w in small:
                a, b, c = (Y_of(x, alphabet) for x in (u, v, w))
                assert prod(prod(a, b), c) == prod(a, prod(b, c))


def _wt(alphabet, w):
    return len(w) if alphabet == "X" else sum(w)


def test_coproduct_examples():
    d = coproduct_shuffle(X("x0x1"))
    assert d.terms == {((0, 1), ()): 1, ((0,), (1,)): 1, ((1,), (0,)): 1, ((), (0, 1)): 1}
    d = coproduct_stuffle(Y("y2"))
    assert d.terms == {((2,), ()): 1, ((), (2,)): 1, ((1,), (1,)): 1}
    assert d.coefficient((1,), (1,)) == pairing(stuffle(Y("y1"), Y("y1")), (2,)) == 1


@pytest.mark.parametrize("alphabet,prod,cop", [("X", shuffle, coproduct_shuffle),
                                               ("Y", stuffle, coproduct_stuffle)])
def test_coproduct_duality(alphabet, prod, cop):
    words = words_up_to(alphabet, 5)
    for w in words:
        d = cop(Y_of(w, alphabet))
        for u in words:
            for v in words:
                if _wt(alphabet, u) + _wt(alphabet, v) != _wt(alphabet, w):
                    continue
                assert d.coefficient(u, v) == pairing(prod(Y_of(u, alphabet), Y_of(v, alphabet)), w)


def test_y0_stuffle_and_coproduct_duality():
    from mzvassoc.words import words_of_degree
    words = words_of_degree(4)
    for w in words:
        d = coproduct_stuffle(Y_of(w, "Y0"))
        for u in words:
            for v in words:
                if len(u) + len(v) < len(w):
                    continue
                assert d.coefficient(u, v) == pairing(stuffle(Y_of(u, "Y0"), Y_of(v, "Y0")), w)


def test_pi1_examples():
    assert pi1("y1") == Y("y1")
    assert pi1("y2") == Y("y2") - Y("y1,y1") / 2
    assert not pi1("y1,y1")


def test_pi1_image_is_orthogonal_to_products():
    """<pi1(w) | u st v> = 0: primitives pair to zero with quasi-shuffle products."""
    words = [w for w in words_up_to("Y", 5) if w]
    for w in words:
        p = pi1(Y_of(w))
        for u in words:
            for v in words:
                if sum(u) + sum(v) == sum(w):
                    prod = stuffle(Y_of(u), Y_of(v))
                    assert sum((c * p.coefficient(x) for x, c in prod.terms.items()), F(0)) == 0


def test_pi1_kills_symmetrized_products_not_stuffles():
    a, b = pi1("y2"), pi1("y1")
    assert not pi1(concat(a, b) + concat(b, a))
    assert not pi1(concat(a, a))
    # a quasi-shuffle product is not in the kernel: y1 st y1 = 2 y1y1 + y2
    assert pi1(stuffle(Y("y1"), Y("y1"))) == Y("y2") - Y("y1,y1") / 2


def test_pi1_fixes_primitives():
    for w in [w for w in words_up_to("Y", 4) if w]:
        p = pi1(Y_of(w))
        assert pi1(p) == p


def test_exp_log():
    e = series_exp(X("x0"), 2)
    assert e == NCPoly.one("X") + X("x0") + X("x0x0") / 2
    p = X("x0x1")
    assert series_log(series_exp(p, 4), 4) == p
    q = X("x0") * F(1, 3) - X("x1x0") + X("x0x1x1") * 2
    assert series_log(series_exp(q, 5), 5) == q.truncate(5)


def test_exp_prefactor_example():
    with mpmath.workdps(30):
        g, z2 = mpmath.euler, mpmath.zeta(2)
        p = NCPoly("Y", {(1,): g, (1, 1): -z2 / 2})
        e = series_exp(p, 2)
        assert abs(e.coefficient((1, 1)) - (g ** 2 - z2) / 2) < 1e-25
        assert abs(e.coefficient((1, 1)) + mpmath.mpf("0.655878071520253881077")) < 1e-18


def test_inverse():
    s = series_exp(X("x0") + X("x1x0") * 3, 4)
    inv = series_inverse(s, 4)
    assert concat(s, inv, 4) == NCPoly.one("X", 4)


def test_grouplike_examples():
    assert is_grouplike(series_exp(X("x0"), 4), "shuffle", 4).ok
    from mzvassoc.analytic import harmonic_series
    assert is_grouplike(harmonic_series(20, 4), "stuffle", 4).ok
    rep = is_grouplike(NCPoly.one("X") + X("x0x1"), "shuffle", 2)
    assert not rep.ok


def test_pi_projections():
    assert pi_Y(X("x0x1")) == Y("y2")
    assert not pi_Y(X("x1x0"))
    for w in words_up_to("Y", 5):
        assert pi_Y(pi_X(Y_of(w))) == Y_of(w)
    for w in words_up_to("X", 5):
        if not w or w[-1] == 1:
            assert pi_X(pi_Y(X_of(w))) == X_of(w)


def _expand_shuffle_reg(terms):
    out = NCPoly.zero("X")
    for (u, i, j), c in terms:
        p = X_of(u)
        for _ in range(i):
            p = shuffle(p, X("x0"))
        for _ in range(j):
            p = shuffle(p, X("x1"))
        out = out + p * c
    return out


def test_shuffle_regularization_reconstructs():
    for w in words_up_to("X", 5):
        terms = shuffle_regularize_word(w)
        for (u, i, j), _ in terms:
            assert not u or (u[0] == 0 and u[-1] == 1)
        assert _expand_shuffle_reg(terms) == X_of(w)


def test_stuffle_regularization_reconstructs():
    for w in words_up_to("Y", 5):
        out = NCPoly.zero("Y")
        for (u, j), c in stuffle_regularize_word(w):
            assert not u or u[0] != 1
            p = Y_of(u)
            for _ in range(j):
                p = stuffle(p, Y("y1"))
            out = out + p * c
        assert out == Y_of(w)


def test_trailing_x0_decomposition():
    for w in words_up_to("X", 5):
        out = NCPoly.zero("X")
        for (u, i), c in trailing_x0_decomposition(w):
            assert not u or u[-1] == 1
            p = X_of(u)
            for _ in range(i):
                p = shuffle(p, X("x0"))
            out = out + p * c
        assert out == X_of(w)


def test_json_round_trip():
    p = Y("y2,y1") / 2 - Y("y3") * 7
    assert NCPoly.from_json(p.to_json()) == p
    obj = p.to_json_obj()
    assert obj["alphabet"] == "Y"
    assert {"word": "y2,y1", "num": "1", "den": "2"} in obj["terms"]


coef = st.fractions(min_value=-5, max_value=5, max_denominator=7)


@st.composite
def polys(draw, alphabet="X", max_weight=3):
    words = words_up_to(alphabet, max_weight)
    chosen = draw(st.lists(st.sampled_from(words), max_size=4))
    return NCPoly(alphabet, {w: draw(coef) for w in chosen})


@settings(max_examples=60, deadline=None)
@given(polys(), polys(), polys())
def test_shuffle_bilinear_and_distributive(p, q, r):
    assert shuffle(p, q + r) == shuffle(p, q) + shuffle(p, r)


@settings(max_examples=60, deadline=None)
@given(polys("Y"), polys("Y"))
def test_stuffle_coproduct_is_multiplicative(p, q):
    """Delta(pq) = Delta(p) Delta(q) for the concatenation product on tensors."""
    dp, dq = coproduct_stuffle(p), coproduct_stuffle(q)
    prod = {}
    for (a, b), c in dp.terms.items():
        for (e, f), d in dq.terms.items():
            prod[(a + e, b + f)] = prod.get((a + e, b + f), 0) + c * d
    prod = {k: v for k, v in prod.items() if v != 0}
    assert coproduct_stuffle(concat(p, q)).terms == prod


@settings(max_examples=40, deadline=None)
@given(coef, coef, coef, coef, coef)
def test_exp_of_lie_element_is_grouplike(c1, c2, c3, c4, c5):
    from mzvassoc.ncpoly import bracket
    a = X("x0") * c1 + X("x1") * c2
    b = X("x0") * c3 + X("x1") * c4
    lie = a + bracket(a, b) + bracket(bracket(a, b), a) * c5
    assert is_grouplike(series_exp(lie, 4), "shuffle", 4).ok
