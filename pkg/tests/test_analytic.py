from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from mzvassoc.analytic import (
    DivergentWord,
    DomainError,
    EvalConfig,
    ToleranceError,
    euler_gamma,
    extrapolate,
    h_eval,
    h_neg_eval,
    h_values,
    li_eval,
    li_neg_eval,
    li_parametric,
    li_taylor_coefficients,
    zeta_convergent,
)
from mzvassoc.ncpoly import NCPoly, shuffle
from mzvassoc.words import decode_x, words_up_to

F = Fraction
HALF = mpmath.mpf(1) / 2

# 50 digits of Euler's constant, typed in independently of the library
EULER_50 = "0.57721566490153286060651209008240243104215933593992"


@pytest.fixture(autouse=True)
def high_precision():
    with mpmath.workdps(60):
        yield


def test_li_examples():
    # series routes stop at the configured tolerance, 1e-25 by default
    assert abs(li_eval("x1", 0.5) - mpmath.log(2)) < 1e-25
    ref = mpmath.pi ** 2 / 12 - mpmath.log(2) ** 2 / 2
    assert abs(li_eval("x0x1", 0.5) - ref) < 1e-25
    assert abs(li_eval("x0x1", 0.5) - mpmath.mpf("0.5822405")) < 1e-7
    assert abs(li_eval("x0x0", mpmath.e ** -1) - HALF) < 1e-40


def test_li_against_mpmath_polylog():
    for n in range(1, 5):
        w = (0,) * (n - 1) + (1,)
        assert abs(li_eval(w, 0.3) - mpmath.polylog(n, mpmath.mpf(0.3))) < 1e-25
    tight = EvalConfig(prec=60, tolerance=1e-45)
    assert abs(li_eval("x0x0x1", 0.3, tight) - mpmath.polylog(3, mpmath.mpf(0.3))) < 1e-45


def test_li_brute_force_depth_two():
    """Li_{2,1}(z) = sum_{n>m>0} z^n / (n^2 m) against a direct double loop."""
    z = F(1, 3)
    total, inner = F(0), F(0)
    for n in range(1, 80):
        total += z ** n / n ** 2 * inner
        inner += F(1, n)
    assert abs(li_eval("x0x1x1", mpmath.mpf(1) / 3) - mpmath.mpf(total.numerator) / total.denominator) < 1e-30


def test_li_word_ending_in_x0():
    """x1x0 = x1 sh x0 - x0x1."""
    z = 0.4
    lhs = li_eval("x1x0", z)
    rhs = li_eval("x1", z) * li_eval("x0", z) - li_eval("x0x1", z)
    assert abs(lhs - rhs) < 1e-40


def test_li_bound_reported():
    v, b = li_eval("x0x1", 0.5, with_bound=True)
    assert b <= 1e-25 * (1 + 1e-10)
    assert abs(v - mpmath.polylog(2, HALF)) <= b


def test_h_examples():
    assert h_eval("y1", 3) == F(11, 6)
    assert h_eval("y2,y1", 2) == F(1, 4)
    for w in words_up_to("Y", 3):
        if w:
            assert h_eval(w, 0) == 0


def test_h_brute_force():
    def brute(s, n):
        if not s:
            return F(1)
        return sum((F(1, m ** s[0]) * brute(s[1:], m - 1) for m in range(1, n + 1)), F(0))
    for w in words_up_to("Y", 4):
        for n in (0, 1, 5, 9):
            assert h_eval(w, n) == brute(w, n)


def test_h_neg_examples():
    assert h_neg_eval("y1", 4) == 10
    for n in range(8):
        assert h_neg_eval("y0", n) == n
        assert h_neg_eval("y0,y0", n) == n * (n - 1) // 2


def test_li_neg_examples():
    assert abs(li_neg_eval("y2", 0.5) - 6) < 1e-20
    z = mpmath.mpf("0.3")
    assert abs(li_neg_eval("y0", 0.3) - z / (1 - z)) < 1e-14
    assert abs(li_neg_eval("y1", 0.3) - z / (1 - z) ** 2) < 1e-14


def test_parametric_examples():
    assert abs(li_parametric((1,), (0,), 0.5) - mpmath.log(2)) < 1e-20
    ref = mpmath.nsum(lambda n: HALF ** n / (n - HALF), [1, mpmath.inf])
    assert abs(li_parametric((1,), (HALF,), 0.5) - ref) < 1e-14
    assert abs(li_parametric((1,), (HALF,), 0.5) - mpmath.mpf("1.2464505")) < 1e-6
    assert abs(li_parametric((1, 1), (0, 0), 0.5) - mpmath.log(2) ** 2 / 2) < 1e-20


def test_parametric_brute_force_depth_two():
    t1, t2 = F(1, 3), F(-1, 4)
    z = F(1, 2)
    total, inner = F(0), F(0)
    for n in range(1, 90):
        total += z ** n / ((n - t1) ** 2) * inner
        inner += 1 / (n - t2)
    v = li_parametric((2, 1), (mpmath.mpf(1) / 3, -mpmath.mpf(1) / 4), 0.5)
    assert abs(v - mpmath.mpf(total.numerator) / total.denominator) < 1e-20


@pytest.mark.parametrize("w", [w for w in words_up_to("X", 4) if w and w[-1] == 1])
def test_parametric_at_zero_matches_li(w):
    s = decode_x(w)
    assert abs(li_parametric(s, (0,) * len(s), 0.3) - li_eval(w, 0.3)) < 1e-10


@pytest.mark.parametrize("w", [w for w in words_up_to("X", 3) if w and w[-1] == 1])
def test_taylor_relation(w):
    """Taylor coefficients of Li_w(z)/(1-z) are H_w(0..m)."""
    m = 12
    c = li_taylor_coefficients(w, m)
    partial = [sum(c[: n + 1], F(0)) for n in range(m + 1)]
    assert partial == list(h_values(decode_x(w), m))


def test_taylor_coefficients_match_numeric_li():
    c = li_taylor_coefficients("x0x1x1", 60)
    z = F(1, 4)
    approx = sum((ck * z ** k for k, ck in enumerate(c)), F(0))
    assert abs(li_eval("x0x1x1", 0.25) - mpmath.mpf(approx.numerator) / approx.denominator) < 1e-30


@pytest.mark.parametrize("w", [(0, 1), (0, 0, 1), (0, 1, 1)])
def test_abel_limit(w):
    """Li_w(1 - eps) -> zeta(w); fit corrections eps^a log^b eps on eps in [1e-3, 1e-2]."""
    cfg = EvalConfig(prec=30, tolerance=1e-15)
    eps = [mpmath.mpf(10) ** (-2 - k / mpmath.mpf(7)) for k in range(8)]
    ys = [li_eval(w, 1 - float(e), cfg) for e in eps]
    limit = extrapolate(eps, ys, 2, 2)
    assert abs(limit - zeta_convergent(decode_x(w))) < 1e-4
    # the raw value at eps = 1e-3 is still visibly off, so the fit matters
    assert abs(ys[-1] - zeta_convergent(decode_x(w))) > 1e-4


def test_zeta_examples():
    with mpmath.workdps(60):
        assert abs(zeta_convergent("y2") - mpmath.pi ** 2 / 6) < 1e-45
        assert abs(zeta_convergent("y2,y1") - mpmath.zeta(3)) < 1e-45
    assert abs(zeta_convergent("y2") - mpmath.mpf("1.6449341")) < 1e-7
    with pytest.raises(DivergentWord, match="divergent"):
        zeta_convergent("y1")
    with pytest.raises(DivergentWord):
        zeta_convergent("x1x0")


def test_zeta_against_classical_evaluations():
    z = mpmath.zeta
    pi = mpmath.pi
    known = {
        (3, 1): pi ** 4 / 360,
        (2, 2): pi ** 4 / 120,
        (2, 1, 1): z(4),
        (4, 1): 2 * z(5) - z(2) * z(3),
        (3, 2): 3 * z(2) * z(3) - mpmath.mpf(11) / 2 * z(5),
        (2, 3): mpmath.mpf(9) / 2 * z(5) - 2 * z(2) * z(3),
    }
    for s, ref in known.items():
        assert abs(zeta_convergent(s) - ref) < 1e-45, s


def test_zeta_duality_and_stuffle():
    # zeta(3,1,2) = zeta(2,3,1) by duality; zeta(2)^2 = 2 zeta(2,2) + zeta(4)
    assert abs(zeta_convergent((3, 1, 2)) - zeta_convergent((2, 3, 1))) < 1e-40
    z2 = zeta_convergent((2,))
    assert abs(z2 ** 2 - 2 * zeta_convergent((2, 2)) - zeta_convergent((4,))) < 1e-40


def test_zeta_bound():
    v, b = zeta_convergent((3,), with_bound=True)
    assert b < 1e-40


def test_euler_gamma():
    assert abs(euler_gamma(50) - mpmath.mpf(EULER_50)) < 1e-48
    with mpmath.workdps(60):
        assert abs(euler_gamma(50) - mpmath.euler) < 1e-45


def test_domain_errors():
    with pytest.raises(DomainError):
        li_eval("x1", 1.0)
    with pytest.raises(DomainError):
        li_eval("x1", -0.2)
    with pytest.raises(DomainError):
        li_parametric((1,), (1,), 0.5)
    with pytest.raises(DomainError):
        li_parametric((1, 2), (0,), 0.5)


def test_truncation_reported():
    with pytest.raises(ToleranceError):
        li_eval("x0x1", 0.9999, EvalConfig(truncation=100))


def test_config_invariants():
    with pytest.raises(ValueError):
        EvalConfig(prec=10)
    with pytest.raises(ValueError):
        EvalConfig(truncation=5)


short_x = st.lists(st.sampled_from([0, 1]), min_size=1, max_size=3).map(tuple)


@settings(max_examples=30, deadline=None)
@given(short_x, short_x, st.sampled_from([0.3, 0.5]))
def test_shuffle_character_property(u, v, z):
    prod = shuffle(NCPoly("X", {u: F(1)}), NCPoly("X", {v: F(1)}))
    lhs = sum((c * li_eval(w, z) for w, c in prod.terms.items()), mpmath.mpf(0))
    assert abs(lhs - li_eval(u, z) * li_eval(v, z)) < 1e-10
