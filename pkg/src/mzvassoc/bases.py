"""PBW bases {P_w}, {Pi_w} and their dual families {S_w}, {Sigma_w}.

P_l, Pi_l are Lie brackets along the standard factorization of a Lyndon word;
for an arbitrary word, P_w (resp. Pi_w) is the concatenation product along the
decreasing Lyndon factorization.  S_w follows the classical recursion; Sigma_w
is *defined* as the dual family of {Pi_w}, obtained by inverting the pairing
matrix of each weight block.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from itertools import groupby

from . import exact
from .ncpoly import (
    NCPoly,
    bracket,
    concat,
    is_grouplike,
    pairing,
    pi1,
    series_exp,
    shuffle,
    stuffle,
    to_mpf,
)
from .words import (
    Word,
    WordError,
    format_word,
    is_lyndon,
    lyndon_factorization,
    lyndon_words,
    order_key,
    parse_word,
    standard_factorization,
    weight,
    words_of_weight,
)

SIDES = {"shuffle": "X", "stuffle": "Y"}


def _letters(w, alphabet: str) -> tuple:
    if isinstance(w, Word):
        if w.alphabet != alphabet:
            raise WordError(f"expected a word over {alphabet}, got {w.alphabet}")
        return w.letters
    if isinstance(w, str):
        alpha, letters = parse_word(w, alphabet)
        if alpha != alphabet:
            raise WordError(f"expected a word over {alphabet}, got {alpha}")
        return letters
    return tuple(w)


@lru_cache(maxsize=None)
def _pbw(alphabet: str, w: tuple) -> NCPoly:
    if not w:
        return NCPoly.one(alphabet)
    if is_lyndon(alphabet, w):
        if len(w) == 1:
            if alphabet == "X":
                return NCPoly(alphabet, {w: Fraction(1)})
            return pi1(NCPoly("Y", {w: Fraction(1)}))
        u, v = standard_factorization(alphabet, w)
        return bracket(_pbw(alphabet, u), _pbw(alphabet, v))
    out = NCPoly.one(alphabet)
    for l in lyndon_factorization(alphabet, w):
        out = concat(out, _pbw(alphabet, l))
    return out


def basis_P(w) -> NCPoly:
    return _pbw("X", _letters(w, "X"))


def basis_Pi(w) -> NCPoly:
    return _pbw("Y", _letters(w, "Y"))


@lru_cache(maxsize=None)
def _S(w: tuple) -> NCPoly:
    if not w:
        return NCPoly.one("X")
    if is_lyndon("X", w):
        return concat(NCPoly("X", {w[:1]: Fraction(1)}), _S(w[1:]))
    out = NCPoly.one("X")
    denom = 1
    for _, grp in groupby(lyndon_factorization("X", w)):
        grp = list(grp)
        denom *= math.factorial(len(grp))
        for l in grp:
            out = shuffle(out, _S(l))
    return out / denom


def basis_S(w) -> NCPoly:
    """S_l = x S_u for a Lyndon l = xu; S_w = S_l1^{sh i1} sh ... / (i1! ...)."""
    return _S(_letters(w, "X"))


@lru_cache(maxsize=None)
def dual_block(alphabet: str, n: int) -> dict:
    """Dual family of the PBW basis on the weight-n block: word -> NCPoly."""
    words = sorted(words_of_weight(alphabet, n), key=lambda w: order_key(alphabet, w))
    index = {w: i for i, w in enumerate(words)}
    m = [[Fraction(0)] * len(words) for _ in words]
    for i, u in enumerate(words):
        for x, c in _pbw(alphabet, u).terms.items():
            m[i][index[x]] = c
    try:
        inv = exact.inverse(m)
    except exact.SingularMatrix as exc:
        raise ArithmeticError(f"PBW pairing block of weight {n} on {alphabet} is singular") from exc
    # <Pi_u | Sigma_v> = sum_x M[u][x] C[v][x] = delta  =>  C = (M^-1)^T
    return {v: NCPoly(alphabet, {x: inv[xi][vi] for xi, x in enumerate(words)})
            for vi, v in enumerate(words)}


def basis_Sigma(w) -> NCPoly:
    w = _letters(w, "Y")
    if not w:
        return NCPoly.one("Y")
    return dual_block("Y", weight("Y", w))[w]


def basis(kind: str, w) -> NCPoly:
    return {"P": basis_P, "S": basis_S, "Pi": basis_Pi, "Sigma": basis_Sigma}[kind](w)


# -- Lyndon-ordered factorization of group-like series -----------------------------

def _side(side: str):
    if side == "shuffle":
        return "X", basis_P, basis_S
    if side == "stuffle":
        return "Y", basis_Pi, basis_Sigma
    raise ValueError(f"unknown side {side!r}")


class NotGroupLike(ValueError):
    pass


def mrs_factorize(S: NCPoly, side: str, max_weight: int, tol=None, check: bool = True) -> dict:
    """Exponents of S = prod_{l decreasing} exp(c_l B_l): returns {Lyndon word: c_l}.

    c_l = <S | S_l> on the shuffle side, <S | Sigma_l> on the quasi-shuffle side.
    """
    alphabet, _, dual = _side(side)
    if S.alphabet != alphabet:
        raise WordError(f"{side} factorization needs a series over {alphabet}")
    if check:
        report = is_grouplike(S, side, max_weight, tol)
        if not report.ok:
            u, v = report.worst_pair
            raise NotGroupLike(f"not group-like at ({format_word(alphabet, u)}, "
                               f"{format_word(alphabet, v)}), residual {report.max_residual}")
    return {l.letters: pairing(S, dual(l)) for l in lyndon_words(alphabet, max_weight)}


def mrs_reconstruct(exponents: dict, side: str, max_weight: int) -> NCPoly:
    """prod over Lyndon words, largest on the left, of exp(c_l B_l), truncated."""
    alphabet, prim, _ = _side(side)
    ordered = sorted(exponents, key=lambda l: order_key(alphabet, l), reverse=True)
    out = NCPoly.one(alphabet, max_weight)
    for l in ordered:
        c = exponents[l]
        if c == 0 or weight(alphabet, l) > max_weight:
            continue
        factor = series_exp(prim(l).scale(c).truncate(max_weight), max_weight)
        out = concat(out, factor, max_weight)
    return out


def grouplike_from_exponents(exponents: dict, side: str, max_weight: int) -> NCPoly:
    return mrs_reconstruct(exponents, side, max_weight)
