"""Noncommutative differential equations on (0, 1) and the KZ associator.

dG = (x0/z + x1/(1-z)) G.  The solution L normalized by L(z) ~ exp(x0 log z) at
0 is built letter by letter:

    <L|x0^n>  = log(z)^n / n!
    <L|x1 u>  = int_0^z <L|u>(s) ds/(1-s)
    <L|x0 u>  = int_0^z <L|u>(s) ds/s        (u not a power of x0)

Integrals run in sigma = log s, on Gauss-Legendre panels graded toward the
endpoint, and are truncated at log z - 50 (the neglected piece is below
e^-50 times a power of 50).  Quadrature is float64, enough for the 1e-8 targets.

G1, normalized at 1, is obtained from the substitution z -> 1-z, which maps the
equation to itself with x0 -> -x1, x1 -> -x0:  <G1(z)|w> = (-1)^|w| <L(1-z)|swap(w)>.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import mpmath
import numpy as np
from numpy.polynomial import legendre

from .analytic import (
    DEFAULT,
    DomainError,
    EvalConfig,
    euler_gamma,
    extrapolate,
    harmonic_series_mpf,
    li_eval,
    zeta_convergent,
    zeta_shuffle_word,
    zeta_stuffle_word,
)
from .bases import basis_S, basis_Sigma, mrs_reconstruct
from .ncpoly import NCPoly, concat, is_grouplike, pi_Y, series_exp, series_inverse, to_mpf
from .words import format_word, lyndon_words, words_up_to

KINDS = ("1/z", "1/(1-z)", "1")
TRUNCATION_DEPTH = 50.0
NODES = 24


class QuadratureError(ArithmeticError):
    pass


@dataclass(frozen=True)
class Multiplier:
    """sum c * letter * f(z) with f one of 1/z, 1/(1-z), 1."""
    terms: tuple  # ((letter, kind, coeff), ...)

    def __post_init__(self):
        for letter, kind, _ in self.terms:
            if letter not in (0, 1):
                raise ValueError("multipliers use the letters x0, x1")
            if kind not in KINDS:
                raise ValueError(f"unknown rational function {kind!r}")

    @classmethod
    def kz(cls) -> "Multiplier":
        return cls(((0, "1/z", 1), (1, "1/(1-z)", 1)))

    @classmethod
    def zero(cls) -> "Multiplier":
        return cls(())

    def scaled(self, c) -> "Multiplier":
        return Multiplier(tuple((l, k, c * v) for l, k, v in self.terms))


@dataclass
class PathSolution:
    max_weight: int
    base_point: float
    endpoint: float
    coeffs: dict
    normalization: str = "plain"
    metadata: dict = field(default_factory=dict)

    def __getitem__(self, w):
        return self.coeffs.get(tuple(w), 0.0)

    def series(self) -> NCPoly:
        return NCPoly("X", {w: float(c) for w, c in self.coeffs.items()}, self.max_weight)

    def to_json_obj(self) -> dict:
        return {
            "max_weight": self.max_weight,
            "base_point": repr(self.base_point),
            "endpoint": repr(self.endpoint),
            "normalization": self.normalization,
            "terms": [{"word": format_word("X", w), "value": repr(float(c))}
                      for w, c in sorted(self.coeffs.items(), key=lambda kv: (len(kv[0]), kv[0]))],
            **self.metadata,
        }


# -- panel quadrature --------------------------------------------------------------

@lru_cache(maxsize=None)
def _rule(p: int):
    """Nodes on [-1, 1] and matrices: values -> integral from -1 to each node / to 1."""
    x, _ = legendre.leggauss(p)
    v = legendre.legvander(x, p - 1)
    inv = np.linalg.inv(v)
    cols_at_nodes = np.empty((p, p))
    cols_at_end = np.empty(p)
    for j in range(p):
        e = np.zeros(p)
        e[j] = 1.0
        anti = legendre.legint(e, lbnd=-1)
        cols_at_nodes[:, j] = legendre.legval(x, anti)
        cols_at_end[j] = legendre.legval(1.0, anti)
    return x, cols_at_nodes @ inv, cols_at_end @ inv


class Grid:
    """Panels on [a, b] with cumulative spectral integration."""

    def __init__(self, breaks: Sequence[float], p: int = NODES):
        self.breaks = np.asarray(breaks, dtype=float)
        x, self.q_nodes, self.q_end = _rule(p)
        lo, hi = self.breaks[:-1], self.breaks[1:]
        self.half = (hi - lo) / 2
        self.nodes = ((lo + hi) / 2)[:, None] + self.half[:, None] * x[None, :]

    def integrate(self, f: np.ndarray) -> tuple[np.ndarray, float]:
        """Cumulative integral from the first break: (values at nodes, total)."""
        local = (f @ self.q_nodes.T) * self.half[:, None]
        full = (f @ self.q_end) * self.half
        offset = np.concatenate(([0.0], np.cumsum(full)[:-1]))
        return local + offset[:, None], float(np.sum(full))


def _graded_breaks(lo: float, hi: float, ratio: float = 1.5, max_len: float = 2.0) -> list:
    """Breaks on [lo, hi] (hi < 0) graded geometrically toward the singularity at 0."""
    d_end = -hi
    pts = [hi]
    d = d_end
    while -pts[-1] < -lo:
        step = min(d * (ratio - 1), max_len)
        d += step
        pts.append(max(-d, lo))
    return sorted(pts)


def _check_z(z):
    if not 0 < z < 1:
        raise DomainError(f"path endpoint must lie in (0, 1), got {z}")


# -- the G0-normalized solution -------------------------------------------------------

def _solve_on_grid(z: float, max_weight: int):
    tau_end = math.log(z)
    grid = Grid(_graded_breaks(tau_end - TRUNCATION_DEPTH, tau_end))
    tau = grid.nodes
    kernel1 = 1.0 / np.expm1(-tau)  # e^s/(1-e^s) in s = log of the variable
    vals = {(): np.ones_like(tau)}
    ends = {(): 1.0}
    for n in range(1, max_weight + 1):
        for w in words_up_to("X", n):
            if len(w) != n:
                continue
            u = w[1:]
            if all(a == 0 for a in w):
                vals[w] = tau ** n / math.factorial(n)
                ends[w] = tau_end ** n / math.factorial(n)
            elif w[0] == 1:
                vals[w], ends[w] = grid.integrate(vals[u] * kernel1)
            else:
                vals[w], ends[w] = grid.integrate(vals[u])
    return ends


def solve_de(z: float, max_weight: int, cfg: EvalConfig = DEFAULT) -> PathSolution:
    """L(z) to length max_weight, normalized by L ~ exp(x0 log z) at 0."""
    _check_z(z)
    if max_weight > 8:
        raise DomainError("solve_de is meant for weights up to 8")
    ends = _solve_on_grid(float(z), max_weight)
    return PathSolution(max_weight, 0.0, float(z), ends, "G0")


def _swap_sign(w: tuple) -> tuple:
    return tuple(1 - a for a in w)


def g1_solution(z: float, max_weight: int, cfg: EvalConfig = DEFAULT) -> PathSolution:
    """G1(z) = theta(L(1-z)), theta: x0 -> -x1, x1 -> -x0."""
    _check_z(z)
    base = _solve_on_grid(1.0 - float(z), max_weight)
    coeffs = {w: (-1) ** len(w) * base[_swap_sign(w)] for w in base}
    return PathSolution(max_weight, 1.0, float(z), coeffs, "G1")


def exp_letter(letter: int, c: float, max_weight: int) -> NCPoly:
    return NCPoly("X", {(letter,) * n: c ** n / math.factorial(n) for n in range(max_weight + 1)}, max_weight)


def t_series(z: float, max_weight: int) -> NCPoly:
    """T(z) = L(z) exp(-x0 log z); tends to 1 as z -> 0."""
    L = solve_de(z, max_weight).series()
    return concat(L, exp_letter(0, -math.log(z), max_weight), max_weight)


# -- general two-sided equation --------------------------------------------------------

def _kind_values(kind: str, s: np.ndarray) -> np.ndarray:
    if kind == "1/z":
        return 1.0 / s
    if kind == "1/(1-z)":
        return 1.0 / (1.0 - s)
    return np.ones_like(s)


def solve_de2(m1: Multiplier, m2: Multiplier, s0: dict, z0: float, z: float,
              max_weight: int, cfg: EvalConfig = DEFAULT) -> PathSolution:
    """dS = M1 S + S M2 on [z0, z] with S(z0) = s0, by Picard iteration.

    The coefficient of w only involves shorter words, so the iteration is exact
    after max_weight rounds; each round is a panel quadrature.
    """
    _check_z(z0)
    _check_z(z)
    if z == z0:
        return PathSolution(max_weight, z0, z, {w: float(s0.get(w, 0.0)) for w in words_up_to("X", max_weight)})
    n_panels = max(4, int(abs(z - z0) / 0.05) + 1)
    breaks = np.linspace(z0, z, n_panels + 1)
    grid = Grid(breaks)
    s = grid.nodes
    f1 = [(l, _kind_values(k, s) * float(c)) for l, k, c in m1.terms]
    f2 = [(l, _kind_values(k, s) * float(c)) for l, k, c in m2.terms]
    vals, ends = {}, {}
    for n in range(0, max_weight + 1):
        for w in words_up_to("X", n):
            if len(w) != n:
                continue
            start = float(s0.get(w, 0.0))
            integrand = np.zeros_like(s)
            if w:
                for l, f in f1:
                    if w[0] == l:
                        integrand = integrand + f * vals[w[1:]]
                for l, f in f2:
                    if w[-1] == l:
                        integrand = integrand + f * vals[w[:-1]]
            cum, total = grid.integrate(integrand)
            vals[w] = start + cum
            ends[w] = start + total
    return PathSolution(max_weight, float(z0), float(z), ends, "plain")


# -- associator ---------------------------------------------------------------------

@dataclass
class AssociatorReport:
    max_weight: int
    probes: list
    phi: dict
    spread: dict
    max_spread: float
    zeta_comparison: dict = field(default_factory=dict)

    def to_json_obj(self) -> dict:
        return {
            "max_weight": self.max_weight,
            "probes": [repr(p) for p in self.probes],
            "convention": "Phi = G1^-1 G0, so that G0 = G1 Phi; <Phi|x0x1> = +zeta(2)",
            "max_spread": repr(self.max_spread),
            "terms": [{"word": format_word("X", w), "value": repr(v),
                       "spread": repr(self.spread[w]),
                       **({"Z_sh": mpmath.nstr(self.zeta_comparison[w], 15)}
                          if w in self.zeta_comparison else {})}
                      for w, v in sorted(self.phi.items(), key=lambda kv: (len(kv[0]), kv[0]))],
        }


def associator_at(z: float, max_weight: int) -> NCPoly:
    g0 = solve_de(z, max_weight).series()
    g1 = g1_solution(z, max_weight).series()
    return concat(series_inverse(g1, max_weight), g0, max_weight)


def associator_numeric(max_weight: int, probes: Iterable[float] = (0.3, 0.5, 0.7),
                       cfg: EvalConfig = DEFAULT, compare: bool = True) -> AssociatorReport:
    probes = list(probes)
    samples = [associator_at(z, max_weight) for z in probes]
    words = words_up_to("X", max_weight)
    phi, spread = {}, {}
    for w in words:
        vals = [float(s.coefficient(w)) for s in samples]
        phi[w] = sum(vals) / len(vals)
        spread[w] = max(vals) - min(vals)
    cmp = {}
    if compare:
        cmp = {w: zeta_shuffle_word(w, cfg) for w in words}
    return AssociatorReport(max_weight, probes, phi, spread, max(spread.values()), cmp)


# -- Z series and the bridge ------------------------------------------------------------

def _pair_value(p: NCPoly, value_of_word) -> object:
    total = mpmath.mpf(0)
    for w, c in p.terms.items():
        total += to_mpf(c) * value_of_word(w)
    return total


def build_Z(side: str, max_weight: int, cfg: EvalConfig = DEFAULT) -> NCPoly:
    """Z_sh, Z_st or Z_gamma as ordered products of exponentials over Lyndon words."""
    with mpmath.workdps(cfg.prec + 10):
        if side == "shuffle":
            exps = {l.letters: _pair_value(basis_S(l), lambda w: zeta_shuffle_word(w, cfg))
                    for l in lyndon_words("X", max_weight) if len(l.letters) > 1}
            return mrs_reconstruct(exps, "shuffle", max_weight)
        if side in ("stuffle", "gamma"):
            exps = {l.letters: _pair_value(basis_Sigma(l), lambda w: zeta_stuffle_word(w, cfg))
                    for l in lyndon_words("Y", max_weight) if l.letters != (1,)}
            z = mrs_reconstruct(exps, "stuffle", max_weight)
            if side == "stuffle":
                return z
            g = euler_gamma(cfg.prec)
            pre = NCPoly("Y", {(1,) * n: g ** n / math.factorial(n) for n in range(max_weight + 1)}, max_weight)
            return concat(pre, z, max_weight)
    raise ValueError(f"unknown side {side!r}")


def bridge_prefactor(max_weight: int, cfg: EvalConfig = DEFAULT) -> NCPoly:
    """B(y1) = exp(gamma y1 - sum_{k>=2} (-y1)^k zeta(k)/k)."""
    with mpmath.workdps(cfg.prec + 10):
        terms = {(1,): euler_gamma(cfg.prec)}
        for k in range(2, max_weight + 1):
            terms[(1,) * k] = -(-1) ** k * zeta_convergent((k,), cfg) / k
        return series_exp(NCPoly("Y", terms, max_weight), max_weight)


def renormalized_H(n: int, max_weight: int, cfg: EvalConfig = DEFAULT) -> NCPoly:
    """exp(sum_k H_{y_k}(n) (-y1)^k / k) H(n)."""
    with mpmath.workdps(cfg.prec + 10):
        h = harmonic_series_mpf(n, max_weight, cfg)
        log_pre = NCPoly("Y", {(1,) * k: h.coefficient((k,)) * (-1) ** k / k
                               for k in range(1, max_weight + 1)}, max_weight)
        return concat(series_exp(log_pre, max_weight), h, max_weight)


@dataclass
class BridgeReport:
    max_weight: int
    residuals: dict
    max_residual: float
    limit_residuals: dict
    max_limit_residual: float
    samples: list
    tol: float
    limit_tol: float

    @property
    def ok(self) -> bool:
        return self.max_residual < self.tol and self.max_limit_residual < self.limit_tol

    def to_json_obj(self) -> dict:
        return {
            "max_weight": self.max_weight,
            "ok": self.ok,
            "tol": repr(self.tol),
            "limit_tol": repr(self.limit_tol),
            "max_residual": mpmath.nstr(self.max_residual, 3),
            "max_limit_residual": mpmath.nstr(self.max_limit_residual, 3),
            "limit_samples": self.samples,
            "terms": [{"word": format_word("Y", w),
                       "bridge_residual": mpmath.nstr(self.residuals[w], 3),
                       "limit_residual": mpmath.nstr(self.limit_residuals[w], 3)}
                      for w in sorted(self.residuals, key=lambda w: (sum(w), len(w), [-a for a in w]))],
        }


DEFAULT_SAMPLES = (100, 150, 200, 300, 400, 500, 600, 700, 800, 900, 1000)


def bridge_check(max_weight: int, cfg: EvalConfig = DEFAULT, tol: float = 1e-5,
                 limit_tol: float = 1e-3, samples: Sequence[int] = DEFAULT_SAMPLES) -> BridgeReport:
    """Z_gamma = B(y1) pi_Y(Z_sh), and the n -> oo limit of the renormalized H(n)."""
    with mpmath.workdps(cfg.prec + 10):
        zsh = build_Z("shuffle", max_weight, cfg)
        target = pi_Y(zsh)
        zg = build_Z("gamma", max_weight, cfg)
        rhs = concat(bridge_prefactor(max_weight, cfg), target, max_weight)
        words = words_up_to("Y", max_weight)
        res = {w: abs(to_mpf(zg.coefficient(w)) - to_mpf(rhs.coefficient(w))) for w in words}
        series = [renormalized_H(n, max_weight, cfg) for n in samples]
        lim_res = {}
        for w in words:
            ys = [to_mpf(s.coefficient(w)) for s in series]
            xs = [mpmath.mpf(1) / n for n in samples]
            limit = extrapolate(xs, ys, 2, max(sum(w) - 1, 0)) if w else ys[-1]
            lim_res[w] = abs(limit - to_mpf(target.coefficient(w)))
    return BridgeReport(max_weight, res, max(res.values()), lim_res, max(lim_res.values()),
                        list(samples), tol, limit_tol)
