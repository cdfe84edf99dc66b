"""Regularization at non-positive indices.

For w = y_s1...y_sr in Y0*, Li^-_w(z) = sum n1^s1...nr^sr z^n1 is a polynomial
p in t = (1-z)^-1 of degree D = (w) + |w|.  Since sum_n C(n+k, k) z^n =
(1-z)^-(k+1), the coefficients of p are exactly the coordinates of the
harmonic sum H^-_w(n) in the basis {C(n+k, k)}; that is how p is computed here
(D+1 exact values, one exact linear solve).

From p:  R_w = sum p_k (k x1)^*,  zeta_sh(-s) = p(1),  gamma_{-s} = p~(1).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product as iproduct

import mpmath

from . import exact
from .analytic import (
    DEFAULT,
    DomainError,
    EvalConfig,
    gamma_word,
    h_neg_values,
    zeta_shuffle_word,
)
from .bases import mrs_factorize
from .ncpoly import NCPoly, is_grouplike, pi_Y, to_mpf
from .ratexpr import OneVarPoly, RatExpr, UnsupportedExpression, lambda_inv, lambda_map, pi_Y_stars
from .words import Word, degree, format_word, parse_word, words_of_degree, words_up_to


def _letters(w, alphabet="Y0") -> tuple:
    if isinstance(w, Word):
        return w.letters
    if isinstance(w, str):
        return parse_word(w, alphabet)[1]
    return tuple(w)


# -- p, R, C^-, B^- ------------------------------------------------------------

@lru_cache(maxsize=None)
def _p(w: tuple) -> OneVarPoly:
    d = degree(w)
    values = h_neg_values(w, d)
    matrix = [[math.comb(n + k, k) for k in range(d + 1)] for n in range(d + 1)]
    sol = exact.solve(matrix, [[v] for v in values])
    return OneVarPoly(tuple(row[0] for row in sol))


def p_of_word(w) -> OneVarPoly:
    """The polynomial p with Li^-_w(z) = p((1-z)^-1)."""
    return _p(_letters(w))


def r_of_word(w) -> RatExpr:
    """R_w = p-check(x1^*) = sum p_k (k x1)^*."""
    return lambda_inv(p_of_word(w))


def c_minus(w) -> Fraction:
    """prod over nonempty suffixes v of 1/((v) + |v|)."""
    w = _letters(w)
    if not w:
        raise DomainError("C^- needs a nonempty word")
    out = Fraction(1)
    for i in range(len(w)):
        out /= degree(w[i:])
    return out


def b_minus(w) -> Fraction:
    w = _letters(w)
    return math.factorial(degree(w)) * c_minus(w)


def neg_zeta(s) -> tuple[int, Fraction]:
    """(zeta_sh(-s1,...,-sr), gamma_{-s1,...,-sr}) = (p(1), p~(1))."""
    s = tuple(int(x) for x in s)
    if any(x < 0 for x in s):
        raise DomainError("indices must be non-negative")
    p = _p(s)
    v = p(1)
    return int(v), p.tilde()(1)


def top_product(u, v) -> RatExpr:
    """R_{u T v} realized through lambda: lambda^-1(lambda(R_u) lambda(R_v))."""
    return lambda_inv(p_of_word(u) * p_of_word(v))


@dataclass(frozen=True)
class NegIndexRecord:
    word: tuple
    degree: int
    p: OneVarPoly
    r: RatExpr
    c_minus: Fraction
    b_minus: Fraction
    zeta_sh: int
    gamma: Fraction

    @classmethod
    def of(cls, w) -> "NegIndexRecord":
        w = _letters(w)
        p = _p(w)
        return cls(w, degree(w), p, lambda_inv(p), c_minus(w) if w else Fraction(1),
                   b_minus(w) if w else Fraction(1), int(p(1)), p.tilde()(1))

    def to_json_obj(self) -> dict:
        return {
            "word": format_word("Y0", self.word),
            "degree": self.degree,
            "p": self.p.to_json_obj(),
            "R": self.r.to_json_obj(),
            "c_minus": str(self.c_minus),
            "b_minus": str(self.b_minus),
            "zeta_sh": str(self.zeta_sh),
            "gamma": str(self.gamma),
        }


# -- the printed Stirling-number formula ------------------------------------------

@lru_cache(maxsize=None)
def stirling2(k: int, j: int) -> int:
    if k == j:
        return 1
    if j == 0 or j > k:
        return 0
    return j * stirling2(k - 1, j) + stirling2(k - 1, j - 1)


def _rho(k: int) -> OneVarPoly:
    """lambda(rho_k); (x1^*)^{sh m} = (m x1)^* maps to t^m."""
    if k == 0:
        return OneVarPoly((Fraction(-1), Fraction(1)))
    out = OneVarPoly(())
    for j in range(1, k + 1):
        c = stirling2(k, j) * math.factorial(j) ** 2
        for l in range(j + 1):
            coef = Fraction(c * (-1) ** l, math.factorial(l) * math.factorial(j - l))
            out = out + OneVarPoly.monomial(j - l + 1, coef)
    return out


def _stirling_p(s: tuple) -> OneVarPoly:
    total = OneVarPoly(())

    def rec(i: int, budget: int, coef: int, acc: OneVarPoly):
        nonlocal total
        if i == len(s):
            total = total + acc * OneVarPoly((Fraction(coef),))
            return
        top = budget + s[i]
        for k in range(top + 1):
            rec(i + 1, top - k, coef * math.comb(top, k), acc * _rho(k))

    rec(0, 0, 1, OneVarPoly((Fraction(1),)))
    return total


@dataclass
class StirlingReport:
    word: tuple
    printed: OneVarPoly
    reference: OneVarPoly
    p1_agrees: bool
    ptilde1_agrees: bool
    mismatched_degrees: list = field(default_factory=list)

    @property
    def agrees(self) -> bool:
        return self.p1_agrees and self.ptilde1_agrees

    def to_json_obj(self) -> dict:
        return {
            "word": format_word("Y0", self.word),
            "printed_R": lambda_inv(self.printed).to_json_obj(),
            "reference_R": lambda_inv(self.reference).to_json_obj(),
            "printed_p1": str(self.printed(1)),
            "reference_p1": str(self.reference(1)),
            "printed_ptilde1": str(self.printed.tilde()(1)),
            "reference_ptilde1": str(self.reference.tilde()(1)),
            "p1_agrees": self.p1_agrees,
            "ptilde1_agrees": self.ptilde1_agrees,
            "mismatched_star_coefficients": self.mismatched_degrees,
        }


def r_stirling_formula(w) -> tuple[RatExpr, StirlingReport]:
    """Evaluate the closed Stirling-number formula for R_w and compare with r_of_word."""
    s = _letters(w)
    printed = _stirling_p(s)
    ref = _p(s)
    n = max(len(printed.coeffs), len(ref.coeffs))
    coef = lambda q, k: q.coeffs[k] if k < len(q.coeffs) else Fraction(0)
    mism = [k for k in range(n) if coef(printed, k) != coef(ref, k)]
    report = StirlingReport(s, printed, ref, printed(1) == ref(1),
                            printed.tilde()(1) == ref.tilde()(1), mism)
    return lambda_inv(printed), report


# -- extended characters ----------------------------------------------------------

def zeta_sh_extended(e, cfg: EvalConfig = DEFAULT):
    """zeta_sh on Q<X> sh Q[x1^*]: (t x1)^* -> 1, words via shuffle regularization."""
    if isinstance(e, NCPoly):
        e = RatExpr.from_poly(e)
    if e.alphabet != "X":
        raise UnsupportedExpression("zeta_sh takes an expression over X")
    total = mpmath.mpf(0)
    with mpmath.workdps(cfg.prec + 10):
        for (stars, word), c in e.terms.items():
            if any(letter != 1 for letter, _ in stars):
                raise UnsupportedExpression("only x1-stars are in the domain of zeta_sh")
            total += to_mpf(c) * (zeta_shuffle_word(word, cfg) if word else 1)
    return +total


def zeta_sh_exact(e: RatExpr) -> Fraction:
    """zeta_sh on Q[x1^*], exactly: sum of the coefficients."""
    return sum(e.star_coefficients(1).values(), Fraction(0))


def gamma_star(t, cfg: EvalConfig = DEFAULT):
    """gamma((t y1)^*) = 1/Gamma(1+t)."""
    with mpmath.workdps(cfg.prec + 10):
        return +mpmath.rgamma(1 + to_mpf(t))


def gamma_char(e, cfg: EvalConfig = DEFAULT):
    """gamma on Q<Y> st Q[y1^*]: (t y1)^* -> 1/Gamma(1+t), y1 -> Euler's constant."""
    if isinstance(e, NCPoly):
        e = RatExpr.from_poly(e)
    if e.alphabet != "Y":
        raise UnsupportedExpression("gamma takes an expression over Y")
    total = mpmath.mpf(0)
    with mpmath.workdps(cfg.prec + 10):
        for (stars, word), c in e.terms.items():
            f = to_mpf(c)
            for _, t in stars:
                f *= gamma_star(t, cfg)
            if word:
                f *= gamma_word(word, cfg)
            total += f
    return +total


def gamma_exact(e: RatExpr) -> Fraction:
    """gamma on Q[y1^*] with integer parameters: (k y1)^* -> 1/k!."""
    out = Fraction(0)
    for k, c in e.star_coefficients(1).items():
        if k.denominator != 1 or k < 0:
            raise UnsupportedExpression("exact gamma needs non-negative integer parameters")
        out += c / math.factorial(int(k))
    return out


# -- generating series -------------------------------------------------------------

def binomial_in_n(k: int) -> OneVarPoly:
    """C(n+k, k) as a polynomial in n."""
    out = OneVarPoly((Fraction(1),))
    for i in range(1, k + 1):
        out = out * OneVarPoly((Fraction(i, 1), Fraction(1)))
    return out * OneVarPoly((Fraction(1, math.factorial(k)),))


def upsilon_coefficient(w) -> OneVarPoly:
    """H_{pi_Y(R_w)}(n) as an exact polynomial in n."""
    p = p_of_word(w)
    out = OneVarPoly(())
    for k, c in enumerate(p.coeffs):
        if c:
            out = out + binomial_in_n(k) * OneVarPoly((c,))
    return out


def series_upsilon(max_weight: int) -> dict:
    """{Y word of weight <= N: polynomial in n}."""
    return {w: upsilon_coefficient(w) for w in words_up_to("Y", max_weight)}


def upsilon_at(n: int, max_weight: int) -> NCPoly:
    terms = {w: q(n) for w, q in series_upsilon(max_weight).items()}
    return NCPoly("Y", terms, max_weight)


class BiPoly:
    """Polynomial in t = (1-z)^-1 and L = log z: {(i, j): coefficient of t^i L^j}."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict | None = None):
        self.terms = {k: v for k, v in (terms or {}).items() if v != 0}

    @classmethod
    def from_t(cls, p: OneVarPoly) -> "BiPoly":
        return cls({(i, 0): c for i, c in enumerate(p.coeffs)})

    def __add__(self, other):
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return BiPoly(out)

    def __sub__(self, other):
        return self + BiPoly({k: -v for k, v in other.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, BiPoly):
            return BiPoly({k: v * other for k, v in self.terms.items()})
        out: dict = {}
        for (a, b), u in self.terms.items():
            for (c, d), v in other.terms.items():
                out[(a + c, b + d)] = out.get((a + c, b + d), 0) + u * v
        return BiPoly(out)

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, BiPoly) and self.terms == other.terms

    def __bool__(self):
        return bool(self.terms)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for (i, j), c in sorted(self.terms.items(), reverse=True):
            mono = "*".join(x for x in (f"t^{i}" if i else "", f"log(z)^{j}" if j else "") if x)
            parts.append(f"{c}" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)

    def evaluate(self, z):
        t = 1 / (1 - mpmath.mpf(z))
        lz = mpmath.log(z)
        return sum((to_mpf(c) * t ** i * lz ** j for (i, j), c in self.terms.items()), mpmath.mpf(0))


def lambda_coefficient(w: tuple) -> BiPoly:
    """<Lambda | w> = Li_{R_{pi_Y(w)}}, with <Lambda | x0> = log z."""
    if w == (0,):
        return BiPoly({(0, 1): Fraction(1)})
    img = pi_Y(NCPoly("X", {w: Fraction(1)}))
    out = BiPoly()
    for u, c in img.terms.items():
        out = out + BiPoly.from_t(p_of_word(u)) * c
    return out


def series_lambda(max_length: int) -> dict:
    return {w: lambda_coefficient(w) for w in words_up_to("X", max_length)}


@dataclass
class LambdaGroupLikeReport:
    ok: bool
    pairs_checked: int
    failures: list

    def to_json_obj(self) -> dict:
        return {"ok": self.ok, "pairs_checked": self.pairs_checked,
                "failures": [{"u": format_word("X", u), "v": format_word("X", v),
                              "product": str(a), "shuffle_value": str(b)}
                             for u, v, a, b in self.failures[:20]]}


def lambda_grouplike_report(max_length: int) -> LambdaGroupLikeReport:
    """Exact test of <L|u><L|v> = <L|u sh v> on the symbolic coefficients."""
    from .ncpoly import shuffle

    coeffs = series_lambda(max_length)
    words = [w for w in words_up_to("X", max_length) if w]
    failures, checked = [], 0
    for u in words:
        for v in words:
            if len(u) + len(v) > max_length or u > v:
                continue
            checked += 1
            lhs = coeffs[u] * coeffs[v]
            rhs = BiPoly()
            for x, c in shuffle(NCPoly.word(u, "X"), NCPoly.word(v, "X")).terms.items():
                rhs = rhs + coeffs[x] * c
            if lhs != rhs:
                failures.append((u, v, lhs, rhs))
    return LambdaGroupLikeReport(not failures, checked, failures)


def series_zminus_gamma(max_weight: int) -> NCPoly:
    """Z^-_gamma = sum gamma(pi_Y(R_w)) w = sum p~_w(1) w over Y words, exact."""
    return NCPoly("Y", {w: _p(w).tilde()(1) for w in words_up_to("Y", max_weight)}, max_weight)


def series_zminus_sh(max_length: int) -> NCPoly:
    """Z^-_sh = sum zeta_sh(R_{pi_Y(w)}) w over X words, exact; <.|x0> = zeta_sh(x0) = 0."""
    terms = {}
    for w in words_up_to("X", max_length):
        if w == (0,):
            continue
        img = pi_Y(NCPoly("X", {w: Fraction(1)}))
        terms[w] = sum((c * _p(u)(1) for u, c in img.terms.items()), Fraction(0))
    return NCPoly("X", terms, max_length)


def zminus_report(max_weight: int) -> dict:
    """Z^- series with group-like tests and Lyndon exponents."""
    zg = series_zminus_gamma(max_weight)
    zs = series_zminus_sh(max_weight)
    rg = is_grouplike(zg, "stuffle", max_weight)
    rs = is_grouplike(zs, "shuffle", max_weight)
    out = {"zminus_gamma": zg.to_json_obj(), "zminus_gamma_grouplike": rg.to_json_obj(),
           "zminus_sh": zs.to_json_obj(), "zminus_sh_grouplike": rs.to_json_obj()}
    if rg.ok:
        exps = mrs_factorize(zg, "stuffle", max_weight, check=False)
        out["zminus_gamma_lyndon_exponents"] = {format_word("Y", l): str(c) for l, c in exps.items()}
    return out


# -- asymptotics -------------------------------------------------------------------

@dataclass
class AsymptoticReport:
    word: tuple
    degree: int
    c_minus: Fraction
    b_minus: Fraction
    h_ratios: list
    li_ratios: list

    def to_json_obj(self) -> dict:
        return {
            "word": format_word("Y0", self.word),
            "degree": self.degree,
            "c_minus": str(self.c_minus),
            "b_minus": str(self.b_minus),
            "h_ratios": [{"N": n, "ratio": mpmath.nstr(r, 12), "rel_error": mpmath.nstr(e, 3)}
                         for n, r, e in self.h_ratios],
            "li_ratios": [{"M": m, "ratio": mpmath.nstr(r, 12), "rel_error": mpmath.nstr(e, 3)}
                          for m, r, e in self.li_ratios],
        }


def cminus_asymptotic_check(w, n_list=(10**2, 10**3, 10**4)) -> AsymptoticReport:
    """H^-_w(N)/N^D against C^-_w, and Li^-_w(1-1/M)(1/M)^D against B^-_w.

    Li^-_w at z = 1 - 1/M is p(M), exact once p is known.
    """
    w = _letters(w)
    d = degree(w)
    c, b = c_minus(w), b_minus(w)
    table = h_neg_values(w, max(n_list))
    h_rat, l_rat = [], []
    p = _p(w)
    for n in n_list:
        r = Fraction(table[n], n ** d)
        h_rat.append((n, to_mpf(r), abs(to_mpf(r / c - 1))))
        q = p(Fraction(n)) / Fraction(n) ** d
        l_rat.append((n, to_mpf(q), abs(to_mpf(q / b - 1))))
    return AsymptoticReport(w, d, c, b, h_rat, l_rat)


def records_up_to(max_degree: int) -> list[NegIndexRecord]:
    return [NegIndexRecord.of(w) for w in words_of_degree(max_degree)]
