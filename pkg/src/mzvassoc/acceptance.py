"""Acceptance criteria as plain functions, shared by the test suite and `selftest`.

Each check returns a :class:`CriterionResult`; ``quick=True`` lowers the weight
bounds (weight <= 3, cut-offs <= 10^3) for a fast smoke run.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from . import analytic, bases, kzode, negreg
from .ncpoly import NCPoly, TensorPoly, coproduct_stuffle, pairing, pi1, shuffle, stuffle
from .ratexpr import OneVarPoly, RatExpr, eta_map, lambda_map, pi_Y_stars
from .words import degree, format_word, words_of_degree, words_of_weight, words_up_to


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] criterion {self.number:2d} {self.name}: {self.detail} ({self.seconds:.2f} s)"

    def to_json_obj(self) -> dict:
        return {"criterion": self.number, "name": self.name, "passed": self.passed,
                "detail": self.detail, "seconds": round(self.seconds, 3)}


def _timed(number: int, name: str, budget: float):
    def wrap(fn):
        def run(quick: bool = False) -> CriterionResult:
            t0 = time.perf_counter()
            ok, detail = fn(quick)
            dt = time.perf_counter() - t0
            if dt > budget:
                ok, detail = False, f"{detail}; runtime {dt:.1f} s over budget {budget} s"
            return CriterionResult(number, name, ok, detail, dt)
        run.number = number
        run.__name__ = fn.__name__
        return run
    return wrap


@_timed(1, "negative-index ground truth", 1.0)
def criterion_1(quick=False):
    zs, g = negreg.neg_zeta((1,))
    r = negreg.r_of_word((1,))
    expected_r = RatExpr.star(1, 2) - RatExpr.star(1, 1)
    poly = lambda_map(r)
    ok = (zs, g) == (0, Fraction(-1, 2)) and r == expected_r and poly == OneVarPoly((0, -1, 1))
    return ok, f"negzeta 1 = ({zs}, {g}); R_y1 = {r}; Li_R = {poly}"


@_timed(2, "exact character suites", 30.0)
def criterion_2(quick=False):
    wmax, nmax = (3, 30) if quick else (4, 30)
    words = words_up_to("Y", wmax)
    bad = []
    for i, u in enumerate(words):
        hu = analytic.h_values(u, nmax)
        for v in words[i:]:
            hv = analytic.h_values(v, nmax)
            prod = stuffle(NCPoly.word(u, "Y"), NCPoly.word(v, "Y"))
            tables = [(analytic.h_values(x, nmax), c) for x, c in prod.terms.items()]
            for n in range(nmax + 1):
                if sum(c * t[n] for t, c in tables) != hu[n] * hv[n]:
                    bad.append((u, v, n))
    dmax, nneg = (4, 20) if quick else (5, 20)
    neg_words = words_of_degree(dmax)
    bad_neg = []
    for i, u in enumerate(neg_words):
        hu = analytic.h_neg_values(u, nneg)
        for v in neg_words[i:]:
            hv = analytic.h_neg_values(v, nneg)
            prod = stuffle(NCPoly.word(u, "Y0"), NCPoly.word(v, "Y0"))
            tables = [(analytic.h_neg_values(x, nneg), c) for x, c in prod.terms.items()]
            for n in range(nneg + 1):
                if sum(c * t[n] for t, c in tables) != hu[n] * hv[n]:
                    bad_neg.append((u, v, n))
    ok = not bad and not bad_neg
    return ok, (f"H: {len(words)} words, weight <= {wmax}, n <= {nmax}; "
                f"H^-: {len(neg_words)} words, degree <= {dmax}, n <= {nneg}; "
                f"failures {len(bad)} + {len(bad_neg)}")


@_timed(3, "numeric shuffle character", 30.0)
def criterion_3(quick=False):
    lmax = 2 if quick else 3
    words = [w for w in words_up_to("X", lmax) if w]
    worst, where = 0.0, None
    cfg = analytic.DEFAULT
    for z in (0.3, 0.5):
        li = lambda w: analytic.li_eval(w, z, cfg)
        for i, u in enumerate(words):
            for v in words[i:]:
                prod = shuffle(NCPoly.word(u, "X"), NCPoly.word(v, "X"))
                lhs = sum((c * li(x) for x, c in prod.terms.items()), mpmath.mpf(0))
                r = abs(lhs - li(u) * li(v))
                if r > worst:
                    worst, where = r, (u, v, z)
    ok = worst < 1e-10
    loc = "" if where is None else f" at ({format_word('X', where[0])}, {format_word('X', where[1])}, z={where[2]})"
    return ok, f"max residual {mpmath.nstr(worst, 3)}{loc}, tolerance 1e-10"


def _duality_failures(alphabet: str, prim, dual, wmax: int) -> tuple[int, int]:
    bad = checked = 0
    for n in range(1, wmax + 1):
        block = words_of_weight(alphabet, n)
        duals = {v: dual(v) for v in block}
        for u in block:
            pu = prim(u)
            for v in block:
                checked += 1
                if pairing(pu, duals[v]) != (1 if u == v else 0):
                    bad += 1
    return bad, checked


@_timed(4, "PBW duality", 60.0)
def criterion_4(quick=False):
    wmax = 3 if quick else 5
    b1, c1 = _duality_failures("X", bases.basis_P, bases.basis_S, wmax)
    b2, c2 = _duality_failures("Y", bases.basis_Pi, bases.basis_Sigma, wmax)
    return b1 + b2 == 0, f"<P|S>: {b1}/{c1} off; <Pi|Sigma>: {b2}/{c2} off (weight <= {wmax}, exact)"


@_timed(5, "primitivity of pi1", 30.0)
def criterion_5(quick=False):
    wmax = 3 if quick else 5
    bad = []
    words = [w for w in words_up_to("Y", wmax) if w]
    for w in words:
        p = pi1(NCPoly.word(w, "Y"))
        if coproduct_stuffle(p) != TensorPoly.primitive_image(p):
            bad.append(format_word("Y", w))
    return not bad, f"{len(words)} words of weight <= {wmax}; non-primitive: {bad or 'none'}"


@_timed(6, "zeta numerics", 60.0)
def criterion_6(quick=False):
    with mpmath.workdps(60):
        z2 = analytic.zeta_convergent((2,))
        e1 = abs(z2 - mpmath.pi ** 2 / 6)
        e2 = abs(analytic.zeta_convergent((2, 1)) - analytic.zeta_convergent((3,)))
    ok = e1 < 1e-8 and e2 < 1e-6
    return ok, f"|zeta(2) - pi^2/6| = {mpmath.nstr(e1, 3)}; |zeta(2,1) - zeta(3)| = {mpmath.nstr(e2, 3)}"


@_timed(7, "negative-index engine", 120.0)
def criterion_7(quick=False):
    dmax = 4 if quick else 6
    big_n = 10 ** 3 if quick else 10 ** 4
    problems = []
    words = [w for w in words_of_degree(dmax) if w]
    for w in words:
        d = degree(w)
        rec = negreg.NegIndexRecord.of(w)
        name = format_word("Y0", w)
        if lambda_map(rec.r) != rec.p:
            problems.append(f"{name}: lambda(R) != p")
        if rec.p.degree != d:
            problems.append(f"{name}: deg p = {rec.p.degree} != {d}")
        if Fraction(rec.p(1)).denominator != 1:
            problems.append(f"{name}: p(1) not an integer")
        if rec.p.lead != rec.b_minus:
            problems.append(f"{name}: lead {rec.p.lead} != B^- {rec.b_minus}")
        s = pi_Y_stars(rec.r)
        hn = analytic.h_neg_values(w, 20)
        if any(eta_map(s, n) != hn[n] for n in range(21)):
            problems.append(f"{name}: H_piY(R) != H^-")
        rep = negreg.cminus_asymptotic_check(w, (big_n,))
        if rep.h_ratios[0][2] > 0.01:
            problems.append(f"{name}: H^-/N^D off by {mpmath.nstr(rep.h_ratios[0][2], 3)}")
    return not problems, (f"{len(words)} words with degree <= {dmax}, N = {big_n}; "
                          f"problems: {problems[:5] or 'none'}")


@_timed(8, "Stirling-formula cross-check", 60.0)
def criterion_8(quick=False):
    dmax = 3 if quick else 5
    words = [w for w in words_of_degree(dmax) if w]
    disagree, coeff_level = [], 0
    for w in words:
        _, rep = negreg.r_stirling_formula(w)
        if rep.mismatched_degrees:
            coeff_level += 1
        if not rep.agrees:
            disagree.append(f"{format_word('Y0', w)} (p~(1): printed {rep.printed.tilde()(1)}, "
                            f"reference {rep.reference.tilde()(1)})")
    detail = (f"{len(words)} words, degree <= {dmax}; coefficient-level mismatches in {coeff_level}; "
              f"p(1)/p~(1) disagreements in {len(disagree)}")
    if disagree:
        detail += ": " + "; ".join(disagree[:4]) + (" ..." if len(disagree) > 4 else "")
    return not disagree, detail


@_timed(9, "KZ solver", 300.0)
def criterion_9(quick=False):
    wmax = 3 if quick else 4
    worst = 0.0
    for z in (0.3, 0.5, 0.7):
        sol = kzode.solve_de(z, wmax)
        for w in words_up_to("X", wmax):
            if w:
                worst = max(worst, abs(sol[w] - float(analytic.li_eval(w, z))))
    t = kzode.t_series(1e-4, 3)
    t_err = max(abs(float(t.coefficient(w)) - (1.0 if not w else 0.0)) for w in words_up_to("X", 3))
    ok = worst < 1e-8 and t_err < 1e-3
    return ok, f"max |<L|w> - Li_w| = {worst:.2e} (tol 1e-8); max |T(1e-4) - 1| = {t_err:.2e} (tol 1e-3)"


@_timed(10, "associator constancy", 300.0)
def criterion_10(quick=False):
    rep = kzode.associator_numeric(3, (0.3, 0.5, 0.7), compare=False)
    with mpmath.workdps(30):
        e = abs(abs(rep.phi[(0, 1)]) - float(analytic.zeta_convergent((2,))))
    ok = rep.max_spread < 1e-6 and e < 1e-5
    return ok, f"max spread {rep.max_spread:.2e} (tol 1e-6); ||<Phi|x0x1>| - zeta(2)| = {e:.2e} (tol 1e-5)"


@_timed(11, "bridge equation", 300.0)
def criterion_11(quick=False):
    wmax = 3 if quick else 4
    rep = kzode.bridge_check(wmax)
    return rep.ok, (f"weight <= {wmax}: max bridge residual {mpmath.nstr(rep.max_residual, 3)} (tol 1e-5); "
                    f"renormalization limit residual {mpmath.nstr(rep.max_limit_residual, 3)} (tol 1e-3)")


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
            criterion_7, criterion_8, criterion_9, criterion_10, criterion_11]


def run_all(quick: bool = False) -> list[CriterionResult]:
    return [c(quick) for c in CRITERIA]
