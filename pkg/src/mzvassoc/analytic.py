"""Polylogarithms, harmonic sums and convergent multiple zeta values.

Polylogarithms are evaluated on 0 < z < 1 from their nested power series with
an explicit geometric tail bound.  Words ending in x0 are first rewritten as
sum c * u sh x0^{sh i} with u in X*x1, and Li is a shuffle character with
Li_{x0} = log z.

Convergent zeta values split the nested sum at a cut-off N,

    zeta(s1..sr) = sum_j T_{s1..sj}(N) * H_{s(j+1)..sr}(N),

where T is the nested tail over indices > N.  Each tail has an asymptotic
expansion in pure powers of 1/N with rational coefficients (Euler-Maclaurin
applied layer by layer; s1 >= 2 keeps every exponent >= 2), which is summed
directly.  A second cut-off N/2 gives an independent error estimate.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import mpmath

from .ncpoly import (
    NCPoly,
    shuffle_regularize_word,
    stuffle_regularize_word,
    to_mpf,
    trailing_x0_decomposition,
)
from .words import Word, decode_x, format_word, parse_word, words_up_to

EULER_GAMMA_50 = "0.57721566490153286060651209008240243104215933593992"


class DomainError(ValueError):
    """Argument outside the domain where the evaluation route is valid."""


class DivergentWord(DomainError):
    pass


class ToleranceError(ArithmeticError):
    """Requested accuracy not reached within the configured truncation."""


@dataclass(frozen=True)
class EvalConfig:
    prec: int = 50
    truncation: int = 200_000
    tail_method: str = "euler-maclaurin"
    tolerance: float = 1e-25
    zeta_cutoff: int = 200

    def __post_init__(self):
        if self.prec < 30:
            raise ValueError("working precision must be at least 30 digits")
        if self.truncation < 10:
            raise ValueError("series truncation must be at least 10")

    def with_(self, **kw) -> "EvalConfig":
        return replace(self, **kw)


DEFAULT = EvalConfig()


def _letters(w, alphabet: str) -> tuple:
    if isinstance(w, Word):
        return w.letters
    if isinstance(w, str):
        return parse_word(w, alphabet)[1]
    return tuple(w)


# -- polylogarithms -------------------------------------------------------------

def _check_z(z):
    if not 0 < z < 1:
        raise DomainError(f"series route needs 0 < z < 1, got {z}")


def _series_terms_needed(z: float, depth: int, tol: float, grow: float = 0.0) -> int:
    """Smallest N whose geometric tail bound is below tol.

    The bound for terms z^m (1 + log m)^(depth-1) m^grow is the (N+1)-th term
    divided by 1 - z (1 + 1/(N+1))^(depth-1+grow).
    """
    lz = math.log(z)
    n = 8
    while True:
        rho = z * (1 + 1 / (n + 1)) ** (max(depth - 1, 0) + grow)
        if rho < 1:
            log_term = (n + 1) * lz + max(depth - 1, 0) * math.log1p(math.log(n + 1)) \
                + grow * math.log(n + 1)
            bound = math.exp(log_term) / (1 - rho)
            if bound < tol:
                return n
        n = int(n * 1.25) + 1


def _nested_li(s: tuple, z, n_terms: int, shifts: tuple | None = None):
    """sum_{n1>...>nr>0} z^n1 / prod (n_i - t_i)^s_i, first n_terms outer terms."""
    r = len(s)
    shifts = shifts or (0,) * r
    vals = [mpmath.mpf(0)] * (r + 1)
    vals[r] = mpmath.mpf(1)
    total = mpmath.mpf(0)
    zp = mpmath.mpf(1)
    for m in range(1, n_terms + 1):
        zp *= z
        total += zp * vals[1] / (m - shifts[0]) ** s[0]
        for j in range(1, r):
            vals[j] += vals[j + 1] / (m - shifts[j]) ** s[j]
    return total


def _li_convergent(letters: tuple, z, cfg: EvalConfig):
    """Li_w(z) for w in X*x1 (nonempty); returns (value, bound)."""
    s = decode_x(letters)
    n = _series_terms_needed(float(z), len(s), cfg.tolerance)
    if n > cfg.truncation:
        raise ToleranceError(f"{n} terms needed, truncation is {cfg.truncation}")
    return _nested_li(s, z, n), mpmath.mpf(cfg.tolerance)


def li_eval(w, z, cfg: EvalConfig = DEFAULT, with_bound: bool = False):
    """Li_w(z) for any X word and 0 < z < 1."""
    _check_z(z)
    letters = _letters(w, "X")
    with mpmath.workdps(cfg.prec + 10):
        z = mpmath.mpf(z)
        logz = mpmath.log(z)
        total, bound = mpmath.mpf(0), mpmath.mpf(0)
        for (u, i), c in trailing_x0_decomposition(letters):
            if u:
                v, b = _li_cached(u, z, cfg)
            else:
                v, b = mpmath.mpf(1), mpmath.mpf(0)
            weight_i = logz ** i
            total += to_mpf(c) * v * weight_i
            bound += abs(to_mpf(c) * weight_i) * b
    if with_bound:
        return +total, bound
    return +total


_LI_CACHE: dict = {}


def _li_cached(u: tuple, z, cfg: EvalConfig):
    key = (u, z, cfg.prec, cfg.tolerance)
    if key not in _LI_CACHE:
        _LI_CACHE[key] = _li_convergent(u, z, cfg)
    return _LI_CACHE[key]


def polylog_series(z, max_weight: int, cfg: EvalConfig = DEFAULT) -> NCPoly:
    """L(z) = sum Li_w(z) w over X words of length <= max_weight."""
    terms = {w: li_eval(w, z, cfg) for w in words_up_to("X", max_weight)}
    return NCPoly("X", terms, max_weight)


def li_taylor_coefficients(w, m: int) -> list[Fraction]:
    """Exact Taylor coefficients c_0..c_m of Li_w for w in X*x1."""
    s = decode_x(_letters(w, "X"))
    r = len(s)
    out = [Fraction(0)]
    vals = [Fraction(0)] * (r + 1)
    vals[r] = Fraction(1)
    for n in range(1, m + 1):
        out.append(vals[1] / Fraction(n) ** s[0])
        for j in range(1, r):
            vals[j] += vals[j + 1] / Fraction(n) ** s[j]
    return out


# -- harmonic sums -------------------------------------------------------------

@lru_cache(maxsize=None)
def _h_table(s: tuple, n_max: int, negative: bool) -> tuple:
    """(H_s(0), ..., H_s(n_max)) exactly; negative=True uses n^{+s}."""
    r = len(s)
    if r == 0:
        return (Fraction(1),) * (n_max + 1) if not negative else (1,) * (n_max + 1)
    one = 1 if negative else Fraction(1)
    vals = [0 * one] * (r + 1)
    vals[r] = one
    out = [0 * one]
    for m in range(1, n_max + 1):
        for j in range(0, r):
            f = m ** s[j] if negative else Fraction(1, m ** s[j])
            vals[j] += vals[j + 1] * f
        out.append(vals[0])
    return tuple(out)


def h_eval(w, n: int) -> Fraction:
    """H_w(n) = sum_{n >= n1 > ... > nr > 0} 1/(n1^s1 ... nr^sr), exactly."""
    if n < 0:
        raise DomainError("n must be >= 0")
    return _h_table(_letters(w, "Y"), n, False)[n]


def h_values(w, n_max: int) -> tuple:
    return _h_table(_letters(w, "Y"), n_max, False)


def h_neg_eval(w, n: int) -> int:
    """H^-_w(n) = sum_{n >= n1 > ... > nr > 0} n1^s1 ... nr^sr for w in Y0*."""
    if n < 0:
        raise DomainError("n must be >= 0")
    return _h_table(_letters(w, "Y0"), n, True)[n]


def h_neg_values(w, n_max: int) -> tuple:
    return _h_table(_letters(w, "Y0"), n_max, True)


def harmonic_series(n: int, max_weight: int) -> NCPoly:
    """H(n) = sum H_w(n) w over Y words of weight <= max_weight, exact."""
    return NCPoly("Y", {w: h_eval(w, n) for w in words_up_to("Y", max_weight)}, max_weight)


def harmonic_series_mpf(n: int, max_weight: int, cfg: EvalConfig = DEFAULT) -> NCPoly:
    with mpmath.workdps(cfg.prec + 10):
        terms = {w: _h_float(w, n) for w in words_up_to("Y", max_weight)}
    return NCPoly("Y", terms, max_weight)


def _h_float(s: tuple, n: int):
    r = len(s)
    if r == 0:
        return mpmath.mpf(1)
    vals = [mpmath.mpf(0)] * (r + 1)
    vals[r] = mpmath.mpf(1)
    for m in range(1, n + 1):
        mm = mpmath.mpf(m)
        for j in range(r):
            vals[j] += vals[j + 1] / mm ** s[j]
    return vals[0]


def li_neg_eval(w, z, cfg: EvalConfig = DEFAULT, with_bound: bool = False):
    """Li^-_w(z) = sum n1^s1 ... nr^sr z^n1 (truncated, geometric tail bound)."""
    _check_z(z)
    s = _letters(w, "Y0")
    if not s:
        return (mpmath.mpf(1), mpmath.mpf(0)) if with_bound else mpmath.mpf(1)
    degree = sum(s) + len(s)
    n = _series_terms_needed(float(z), 1, cfg.tolerance, grow=degree - 1)
    if n > cfg.truncation:
        raise ToleranceError(f"{n} terms needed, truncation is {cfg.truncation}")
    with mpmath.workdps(cfg.prec + 10):
        z = mpmath.mpf(z)
        r = len(s)
        vals = [mpmath.mpf(0)] * (r + 1)
        vals[r] = mpmath.mpf(1)
        total = mpmath.mpf(0)
        zp = mpmath.mpf(1)
        for m in range(1, n + 1):
            zp *= z
            total += zp * vals[1] * mpmath.mpf(m) ** s[0]
            for j in range(1, r):
                vals[j] += vals[j + 1] * mpmath.mpf(m) ** s[j]
        # terms are bounded by z^m m^(degree-1), hence the tail bound used for n
        bound = mpmath.mpf(cfg.tolerance)
    return (+total, bound) if with_bound else +total


def li_parametric(s: Sequence[int], t: Sequence, z, cfg: EvalConfig = DEFAULT, with_bound: bool = False):
    """sum_{n1>...>nr>0} z^n1 / prod (n_i - t_i)^s_i for |t_i| < 1, 0 < z < 1."""
    _check_z(z)
    s, t = tuple(s), tuple(t)
    if len(s) != len(t) or not s:
        raise DomainError("need one shift per index and at least one index")
    if any(abs(x) >= 1 for x in t):
        raise DomainError("shifts must satisfy |t_i| < 1")
    if any(x < 1 for x in s):
        raise DomainError("indices must be positive")
    tau = max(abs(float(x)) for x in t)
    # 1/(n - t) <= 1/(1 - tau) * (1/n) * (1 + tau/(1-tau)) ; fold the constant into tol
    scale = (1 / (1 - tau)) ** len(s) * (1 + math.log(1 / (1 - tau))) ** (len(s) - 1)
    n = _series_terms_needed(float(z), len(s), cfg.tolerance / scale)
    if n > cfg.truncation:
        raise ToleranceError(f"{n} terms needed, truncation is {cfg.truncation}")
    with mpmath.workdps(cfg.prec + 10):
        shifts = tuple(mpmath.mpf(x) if not isinstance(x, Fraction) else to_mpf(x) for x in t)
        value = _nested_li(s, mpmath.mpf(z), n, shifts)
    return (+value, mpmath.mpf(cfg.tolerance)) if with_bound else +value


# -- convergent zeta values -----------------------------------------------------

@lru_cache(maxsize=None)
def _bernoulli(n: int) -> Fraction:
    b = [Fraction(1)]
    for m in range(1, n + 1):
        b.append(-sum(math.comb(m + 1, k) * b[k] for k in range(m)) / (m + 1))
    return b[n]


@lru_cache(maxsize=None)
def _tail_power(a: int, order: int) -> tuple:
    """Asymptotic expansion of sum_{n>N} n^-a (a >= 2) as ((exponent, coeff), ...)."""
    out = {a - 1: Fraction(1, a - 1), a: Fraction(-1, 2)}
    k = 1
    while a + 2 * k - 1 <= order:
        rising = math.prod(range(a, a + 2 * k - 1))
        out[a + 2 * k - 1] = out.get(a + 2 * k - 1, 0) + _bernoulli(2 * k) / math.factorial(2 * k) * rising
        k += 1
    return tuple(sorted((e, c) for e, c in out.items() if e <= order and c != 0))


@lru_cache(maxsize=None)
def nested_tail_expansion(s: tuple, order: int) -> tuple:
    """T_{s1..sj}(N) = sum_{n1>...>nj>N} prod n_i^-s_i as ((exponent, coeff), ...).

    Needs s1 >= 2.  Built from the innermost index outwards:
    T_{s1..sj}(N) = sum_{nj>N} nj^-sj T_{s1..s(j-1)}(nj).
    """
    if s[0] < 2:
        raise DivergentWord("nested tail needs s1 >= 2")
    series = {0: Fraction(1)}
    for sj in s:
        nxt: dict = {}
        for e, c in series.items():
            for e2, c2 in _tail_power(e + sj, order):
                nxt[e2] = nxt.get(e2, 0) + c * c2
        series = {e: c for e, c in nxt.items() if e <= order}
    return tuple(sorted(series.items()))


def _eval_expansion(exp: tuple, n: int):
    total = mpmath.mpf(0)
    last = mpmath.mpf(0)
    inv = 1 / mpmath.mpf(n)
    for e, c in exp:
        term = to_mpf(c) * inv ** e
        total += term
        last = abs(term)
    return total, last


def _zeta_at_cutoff(s: tuple, n: int, order: int):
    r = len(s)
    # suffix harmonic sums H_{s(j+1)..sr}(n) for j = 0..r
    suffix = [_h_float(s[j:], n) for j in range(r + 1)]
    total = suffix[0]
    err = mpmath.mpf(0)
    for j in range(1, r + 1):
        tail, last = _eval_expansion(nested_tail_expansion(s[:j], order), n)
        total += tail * suffix[j]
        err += last * abs(suffix[j])
    return total, err


def is_convergent_y(letters: tuple) -> bool:
    return not letters or letters[0] != 1


def is_convergent_x(letters: tuple) -> bool:
    return not letters or (letters[0] == 0 and letters[-1] == 1)


def _as_y(w) -> tuple:
    if isinstance(w, Word):
        if w.alphabet == "X":
            if not is_convergent_x(w.letters):
                raise DivergentWord(f"divergent word {format_word('X', w.letters)}")
            return decode_x(w.letters)
        return w.letters
    if isinstance(w, str):
        alpha, letters = parse_word(w)
        return _as_y(Word(alpha, letters))
    return tuple(w)


def zeta_convergent(w, cfg: EvalConfig = DEFAULT, with_bound: bool = False):
    """zeta(w) for w in Y* - y1Y* (or x0X*x1), to about cfg.prec digits."""
    s = _as_y(w)
    if not is_convergent_y(s):
        raise DivergentWord(f"divergent word {format_word('Y', s)}")
    if any(x < 1 for x in s):
        raise DomainError("zeta_convergent takes positive indices")
    value, bound = _zeta_cached(s, cfg.prec, cfg.zeta_cutoff)
    if bound > max(cfg.tolerance, 10.0 ** (-cfg.prec + 8)):
        raise ToleranceError(f"zeta{s}: error estimate {mpmath.nstr(bound, 3)} above tolerance")
    return (value, bound) if with_bound else value


@lru_cache(maxsize=None)
def _zeta_cached(s: tuple, prec: int, cutoff: int):
    if not s:
        return mpmath.mpf(1), mpmath.mpf(0)
    with mpmath.workdps(prec + 15):
        order = _expansion_order(cutoff, prec, sum(s))
        v1, e1 = _zeta_at_cutoff(s, cutoff, order)
        v2, e2 = _zeta_at_cutoff(s, cutoff // 2, order)
        bound = max(abs(v1 - v2), e1) + mpmath.mpf(10) ** (-prec - 5)
        return +v1, bound


def _expansion_order(cutoff: int, prec: int, wt: int) -> int:
    # the k-th Bernoulli term of a tail of total weight wt is roughly
    # (2k + wt)^wt / (2 pi N)^2k; stop once it is below 10^-prec at N/2
    k = 1
    while 2 * k * math.log10(math.pi * cutoff) - (wt + 2) * math.log10(2 * k + wt) < prec + 10:
        k += 1
    return 2 * k + wt + 2


@lru_cache(maxsize=None)
def euler_gamma(prec: int = 50, cutoff: int = 200):
    """Euler's constant from H_1(N) - log N - 1/(2N) + sum B_2k / (2k N^2k)."""
    with mpmath.workdps(prec + 15):
        n = mpmath.mpf(cutoff)
        value = _h_float((1,), cutoff) - mpmath.log(n) - 1 / (2 * n)
        k = 1
        while True:
            term = to_mpf(_bernoulli(2 * k)) / (2 * k * n ** (2 * k))
            value += term
            if abs(term) < mpmath.mpf(10) ** (-prec - 10) or k > 400:
                break
            k += 1
        ref = mpmath.mpf(EULER_GAMMA_50)
        if abs(value - ref) > mpmath.mpf(10) ** -40:
            raise ArithmeticError("Euler constant disagrees with the stored reference")
        return +value


# -- regularized values of arbitrary words ---------------------------------------

def zeta_shuffle_word(w, cfg: EvalConfig = DEFAULT):
    """Shuffle-regularized value: zeta_sh(x0) = zeta_sh(x1) = 0, zeta on x0X*x1."""
    letters = _letters(w, "X")
    total = mpmath.mpf(0)
    with mpmath.workdps(cfg.prec + 10):
        for (u, i, j), c in shuffle_regularize_word(letters):
            if i or j:
                continue
            total += to_mpf(c) * zeta_convergent(decode_x(u), cfg)
    return +total


def zeta_stuffle_word(w, cfg: EvalConfig = DEFAULT):
    """Quasi-shuffle-regularized value with zeta_st(y1) = 0."""
    letters = _letters(w, "Y")
    total = mpmath.mpf(0)
    with mpmath.workdps(cfg.prec + 10):
        for (u, j), c in stuffle_regularize_word(letters):
            if j:
                continue
            total += to_mpf(c) * zeta_convergent(u, cfg)
    return +total


def gamma_word(w, cfg: EvalConfig = DEFAULT):
    """Finite-part character gamma_w: quasi-shuffle character with gamma_y1 = Euler's constant."""
    letters = _letters(w, "Y")
    g = euler_gamma(cfg.prec)
    total = mpmath.mpf(0)
    with mpmath.workdps(cfg.prec + 10):
        for (u, j), c in stuffle_regularize_word(letters):
            total += to_mpf(c) * zeta_convergent(u, cfg) * g ** j
    return +total


# -- extrapolation ------------------------------------------------------------------

def extrapolate(xs: Sequence, ys: Sequence, max_power: int, max_log: int):
    """Least-squares fit y = c0 + sum_{1<=a<=A, 0<=b<=B} c_ab x^a log(x)^b; returns c0.

    Used for limits x -> 0+ whose corrections are powers of x times powers of
    log x (z -> 1 with x = 1 - z, or n -> oo with x = 1/n).
    """
    rows = []
    for x in xs:
        x = mpmath.mpf(x)
        lx = mpmath.log(x)
        row = [mpmath.mpf(1)]
        for a in range(1, max_power + 1):
            for b in range(max_log + 1):
                row.append(x ** a * lx ** b)
        rows.append(row)
    if len(rows) < len(rows[0]):
        raise ValueError("not enough samples for the requested model")
    a = mpmath.matrix(rows)
    y = mpmath.matrix([mpmath.mpf(v) for v in ys])
    sol, res = mpmath.qr_solve(a, y)
    return sol[0]


def li_ratexpr(e, z, cfg: EvalConfig = DEFAULT):
    """Li of sum c (a x0)^* sh (b x1)^* sh w, i.e. sum c z^a (1-z)^-b Li_w(z)."""
    if e.alphabet != "X":
        raise DomainError("Li takes an expression over X")
    _check_z(z)
    with mpmath.workdps(cfg.prec + 10):
        zz = mpmath.mpf(z)
        total = mpmath.mpf(0)
        for (stars, word), c in e.terms.items():
            factor = to_mpf(c)
            for letter, a in stars:
                factor *= zz ** to_mpf(a) if letter == 0 else (1 - zz) ** (-to_mpf(a))
            if word:
                factor *= li_eval(word, zz, cfg)
            total += factor
    return +total
