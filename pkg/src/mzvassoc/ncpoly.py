"""Noncommutative polynomials and weight-truncated series over X, Y or Y0.

Coefficients are exact :class:`fractions.Fraction` for all algebraic work; the
numeric layers store :class:`mpmath.mpf` values in the same container.  Words
are kept as plain tuples of letter indices inside :class:`NCPoly`, the alphabet
lives on the polynomial.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Mapping

import mpmath

from .words import (
    Word,
    WordError,
    check_alphabet,
    check_letters,
    format_word,
    graded_key,
    parse_word,
    weight,
    words_up_to,
)


class AlphabetMismatch(ValueError):
    pass


def to_mpf(c):
    if isinstance(c, Fraction):
        return mpmath.mpf(c.numerator) / c.denominator
    return mpmath.mpf(c)


def _mul(a, b):
    try:
        return a * b
    except TypeError:
        return to_mpf(a) * to_mpf(b)


def _add(a, b):
    try:
        return a + b
    except TypeError:
        return to_mpf(a) + to_mpf(b)


def _is_zero(c) -> bool:
    return c == 0


class NCPoly:
    """Finite map word -> coefficient, optionally truncated at a weight."""

    __slots__ = ("alphabet", "terms", "max_weight")

    def __init__(self, alphabet: str, terms: Mapping | None = None, max_weight: int | None = None):
        self.alphabet = check_alphabet(alphabet)
        self.max_weight = max_weight
        clean = {}
        for w, c in (terms or {}).items():
            if isinstance(w, Word):
                if w.alphabet != alphabet:
                    raise AlphabetMismatch(f"{w} is not over {alphabet}")
                w = w.letters
            else:
                w = tuple(w)
            if _is_zero(c):
                continue
            if max_weight is not None and weight(alphabet, w) > max_weight:
                continue
            clean[w] = _add(clean[w], c) if w in clean else c
        self.terms = {w: c for w, c in clean.items() if not _is_zero(c)}

    # -- construction ------------------------------------------------------
    @classmethod
    def one(cls, alphabet: str, max_weight: int | None = None) -> "NCPoly":
        return cls(alphabet, {(): Fraction(1)}, max_weight)

    @classmethod
    def zero(cls, alphabet: str, max_weight: int | None = None) -> "NCPoly":
        return cls(alphabet, {}, max_weight)

    @classmethod
    def word(cls, w, alphabet: str | None = None, coeff=Fraction(1)) -> "NCPoly":
        if isinstance(w, str):
            alphabet, letters = parse_word(w, alphabet)
        elif isinstance(w, Word):
            alphabet, letters = w.alphabet, w.letters
        else:
            if alphabet is None:
                raise WordError("alphabet required for a raw letter tuple")
            letters = check_letters(alphabet, w)
        return cls(alphabet, {letters: coeff})

    # -- basic protocol ----------------------------------------------------
    def coefficient(self, w) -> object:
        if isinstance(w, str):
            w = parse_word(w, self.alphabet)[1]
        elif isinstance(w, Word):
            w = w.letters
        return self.terms.get(tuple(w), Fraction(0))

    def __getitem__(self, w):
        return self.coefficient(w)

    def __iter__(self):
        return iter(self.sorted_items())

    def __len__(self):
        return len(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def sorted_items(self):
        return sorted(self.terms.items(), key=lambda kv: graded_key(self.alphabet, kv[0]))

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = NCPoly(self.alphabet, {(): Fraction(other)})
        if not isinstance(other, NCPoly):
            return NotImplemented
        return self.alphabet == other.alphabet and self.terms == other.terms

    def __hash__(self):
        return hash((self.alphabet, frozenset(self.terms.items())))

    def __repr__(self):
        return f"NCPoly({self.alphabet!r}, {self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for w, c in self.sorted_items():
            parts.append(f"{c}*{format_word(self.alphabet, w)}")
        return " + ".join(parts)

    def _check(self, other: "NCPoly"):
        if self.alphabet != other.alphabet:
            raise AlphabetMismatch(f"alphabets differ: {self.alphabet} vs {other.alphabet}")

    def _trunc(self, other: "NCPoly | None" = None, max_weight: int | None = None):
        bounds = [b for b in (self.max_weight, other.max_weight if other else None, max_weight) if b is not None]
        return min(bounds) if bounds else None

    # -- linear structure --------------------------------------------------
    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = NCPoly.one(self.alphabet) * other
        self._check(other)
        terms = dict(self.terms)
        for w, c in other.terms.items():
            terms[w] = _add(terms[w], c) if w in terms else c
        return NCPoly(self.alphabet, terms, self._trunc(other))

    __radd__ = __add__

    def __neg__(self):
        return NCPoly(self.alphabet, {w: -c for w, c in self.terms.items()}, self.max_weight)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "NCPoly":
        return NCPoly(self.alphabet, {w: _mul(c, v) for w, v in self.terms.items()}, self.max_weight)

    def __mul__(self, other):
        if isinstance(other, NCPoly):
            return concat(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __truediv__(self, c):
        if isinstance(c, int):
            c = Fraction(c)
        return self.scale(1 / c)

    def truncate(self, max_weight: int) -> "NCPoly":
        return NCPoly(self.alphabet, self.terms, max_weight)

    def constant_term(self):
        return self.terms.get((), Fraction(0))

    def map_coefficients(self, f: Callable) -> "NCPoly":
        return NCPoly(self.alphabet, {w: f(c) for w, c in self.terms.items()}, self.max_weight)

    def to_mpf(self) -> "NCPoly":
        return self.map_coefficients(to_mpf)

    def is_exact(self) -> bool:
        return all(isinstance(c, (int, Fraction)) for c in self.terms.values())

    def max_term_weight(self) -> int:
        return max((weight(self.alphabet, w) for w in self.terms), default=0)

    # -- serialization -----------------------------------------------------
    def to_json_obj(self) -> dict:
        out = []
        for w, c in self.sorted_items():
            entry = {"word": format_word(self.alphabet, w)}
            if isinstance(c, (int, Fraction)):
                c = Fraction(c)
                entry["num"] = str(c.numerator)
                entry["den"] = str(c.denominator)
            else:
                entry["value"] = mpmath.nstr(c, mpmath.mp.dps)
            out.append(entry)
        return {"alphabet": self.alphabet, "terms": out}

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())

    @classmethod
    def from_json_obj(cls, obj: dict) -> "NCPoly":
        alphabet = obj["alphabet"]
        terms = {}
        for t in obj["terms"]:
            _, letters = parse_word(t["word"], alphabet)
            if "num" in t:
                terms[letters] = Fraction(int(t["num"]), int(t["den"]))
            else:
                terms[letters] = mpmath.mpf(t["value"])
        return cls(alphabet, terms)

    @classmethod
    def from_json(cls, text: str) -> "NCPoly":
        return cls.from_json_obj(json.loads(text))


def pairing(p: NCPoly, w) -> object:
    """<p | w> for a word w, or the bilinear pairing of two polynomials."""
    if isinstance(w, NCPoly):
        p._check(w)
        total = Fraction(0)
        small, big = (p, w) if len(p) <= len(w) else (w, p)
        for u, c in small.terms.items():
            if u in big.terms:
                total = _add(total, _mul(c, big.terms[u]))
        return total
    return p.coefficient(w)


def concat(p: NCPoly, q: NCPoly, max_weight: int | None = None) -> NCPoly:
    p._check(q)
    bound = p._trunc(q, max_weight)
    terms: dict = {}
    alpha = p.alphabet
    for u, a in p.terms.items():
        wu = weight(alpha, u)
        if bound is not None and wu > bound:
            continue
        for v, b in q.terms.items():
            if bound is not None and wu + weight(alpha, v) > bound:
                continue
            w = u + v
            c = _mul(a, b)
            terms[w] = _add(terms[w], c) if w in terms else c
    return NCPoly(alpha, terms, bound)


# -- shuffle and quasi-shuffle -------------------------------------------------

@lru_cache(maxsize=None)
def _shuffle_words(u: tuple, v: tuple) -> tuple:
    if not u:
        return ((v, 1),)
    if not v:
        return ((u, 1),)
    out: dict = {}
    a, b = u[0], v[0]
    for w, c in _shuffle_words(u[1:], v):
        key = (a,) + w
        out[key] = out.get(key, 0) + c
    for w, c in _shuffle_words(u, v[1:]):
        key = (b,) + w
        out[key] = out.get(key, 0) + c
    return tuple(out.items())


@lru_cache(maxsize=None)
def _stuffle_words(u: tuple, v: tuple) -> tuple:
    if not u:
        return ((v, 1),)
    if not v:
        return ((u, 1),)
    out: dict = {}
    a, b = u[0], v[0]
    for w, c in _stuffle_words(u[1:], v):
        key = (a,) + w
        out[key] = out.get(key, 0) + c
    for w, c in _stuffle_words(u, v[1:]):
        key = (b,) + w
        out[key] = out.get(key, 0) + c
    for w, c in _stuffle_words(u[1:], v[1:]):
        key = (a + b,) + w
        out[key] = out.get(key, 0) + c
    return tuple(out.items())


def _bilinear(p: NCPoly, q: NCPoly, on_words, max_weight: int | None) -> NCPoly:
    p._check(q)
    bound = p._trunc(q, max_weight)
    alpha = p.alphabet
    terms: dict = {}
    for u, a in p.terms.items():
        wu = weight(alpha, u)
        for v, b in q.terms.items():
            if bound is not None and wu + weight(alpha, v) > bound:
                continue
            ab = _mul(a, b)
            for w, m in on_words(u, v):
                c = _mul(ab, m)
                terms[w] = _add(terms[w], c) if w in terms else c
    return NCPoly(alpha, terms, bound)


def shuffle(p: NCPoly, q: NCPoly, max_weight: int | None = None) -> NCPoly:
    """Shuffle product, bilinear; valid on every alphabet."""
    return _bilinear(p, q, _shuffle_words, max_weight)


def stuffle(p: NCPoly, q: NCPoly, max_weight: int | None = None) -> NCPoly:
    """Quasi-shuffle product on Y or Y0 (contraction y_i, y_j -> y_{i+j})."""
    if p.alphabet == "X":
        raise AlphabetMismatch("quasi-shuffle is defined on Y and Y0 only")
    return _bilinear(p, q, _stuffle_words, max_weight)


def product(kind: str) -> Callable[[NCPoly, NCPoly], NCPoly]:
    return {"shuffle": shuffle, "stuffle": stuffle}[kind]


def power(p: NCPoly, n: int, prod: Callable = concat, max_weight: int | None = None) -> NCPoly:
    out = NCPoly.one(p.alphabet, max_weight)
    for _ in range(n):
        out = prod(out, p, max_weight=max_weight)
    return out


# -- coproducts ----------------------------------------------------------------

@dataclass
class TensorPoly:
    """Finite map (u, v) -> coefficient representing sum c u (x) v."""

    alphabet: str
    terms: dict

    def coefficient(self, u, v):
        if isinstance(u, Word):
            u = u.letters
        if isinstance(v, Word):
            v = v.letters
        return self.terms.get((tuple(u), tuple(v)), Fraction(0))

    def __eq__(self, other):
        if not isinstance(other, TensorPoly):
            return NotImplemented
        return self.alphabet == other.alphabet and self.terms == other.terms

    def __sub__(self, other: "TensorPoly") -> "TensorPoly":
        terms = dict(self.terms)
        for k, c in other.terms.items():
            terms[k] = terms.get(k, 0) - c
        return TensorPoly(self.alphabet, {k: c for k, c in terms.items() if c != 0})

    def __str__(self):
        if not self.terms:
            return "0"
        items = sorted(self.terms.items(), key=lambda kv: (graded_key(self.alphabet, kv[0][0]),
                                                           graded_key(self.alphabet, kv[0][1])))
        return " + ".join(f"{c}*{format_word(self.alphabet, u)}(x){format_word(self.alphabet, v)}"
                          for (u, v), c in items)

    @classmethod
    def primitive_image(cls, p: NCPoly) -> "TensorPoly":
        """p (x) 1 + 1 (x) p."""
        terms: dict = {}
        for w, c in p.terms.items():
            for key in ((w, ()), ((), w)):
                terms[key] = terms.get(key, 0) + c
        return cls(p.alphabet, {k: c for k, c in terms.items() if c != 0})


def _letter_coproduct(alphabet: str, a: int, contracting: bool) -> list:
    out = [((a,), (), 1), ((), (a,), 1)]
    if contracting:
        lo = 0 if alphabet == "Y0" else 1
        out += [((i,), (a - i,), 1) for i in range(lo, a - lo + 1)]
    return out


def _coproduct(p: NCPoly, contracting: bool) -> TensorPoly:
    terms: dict = {}
    for w, c in p.terms.items():
        acc = {((), ()): 1}
        for a in w:
            nxt: dict = {}
            for (u, v), m in acc.items():
                for du, dv, k in _letter_coproduct(p.alphabet, a, contracting):
                    key = (u + du, v + dv)
                    nxt[key] = nxt.get(key, 0) + m * k
            acc = nxt
        for key, m in acc.items():
            terms[key] = terms.get(key, 0) + c * m
    return TensorPoly(p.alphabet, {k: c for k, c in terms.items() if c != 0})


def coproduct_shuffle(p: NCPoly) -> TensorPoly:
    """Concatenation morphism with every letter primitive."""
    return _coproduct(p, contracting=False)


def coproduct_stuffle(p: NCPoly) -> TensorPoly:
    """Concatenation morphism with y_s -> y_s(x)1 + 1(x)y_s + sum_{i+j=s} y_i(x)y_j."""
    if p.alphabet == "X":
        raise AlphabetMismatch("quasi-shuffle coproduct is defined on Y and Y0 only")
    return _coproduct(p, contracting=True)


# -- pi_1 ----------------------------------------------------------------------

def _splittings(w: tuple, k: int) -> dict:
    """Coefficients of Delta^(k)(w) restricted to tensors with all slots nonempty,
    returned as the concatenation u1...uk -> multiplicity."""
    states = {tuple(() for _ in range(k)): 1}
    for a in w:
        nxt: dict = {}
        for slots, m in states.items():
            for parts in _weak_compositions(a, k):
                new = tuple(s + ((x,) if x else ()) for s, x in zip(slots, parts))
                nxt[new] = nxt.get(new, 0) + m
        states = nxt
    out: dict = {}
    for slots, m in states.items():
        if all(slots):
            key = sum(slots, ())
            out[key] = out.get(key, 0) + m
    return out


@lru_cache(maxsize=None)
def _weak_compositions_all(a: int, k: int) -> tuple:
    if k == 1:
        return ((a,),)
    return tuple((first,) + rest for first in range(a + 1)
                 for rest in _weak_compositions_all(a - first, k - 1))


def _weak_compositions(a: int, k: int) -> tuple:
    """Ways to spread the index a of a letter over k slots (a >= 1, so never all zero)."""
    return _weak_compositions_all(a, k)


@lru_cache(maxsize=None)
def _pi1_word(w: tuple) -> tuple:
    out: dict = {}
    for k in range(1, sum(w) + 1):
        coeff = Fraction((-1) ** (k - 1), k)
        for u, m in _splittings(w, k).items():
            out[u] = out.get(u, 0) + coeff * m
    return tuple((u, c) for u, c in out.items() if c != 0)


def pi1(p) -> NCPoly:
    """The Eulerian-type projector onto primitives of the quasi-shuffle Hopf algebra.

    pi1(w) = sum_k (-1)^(k-1)/k sum_{u1..uk nonempty} <w|u1 * ... * uk> u1...uk,
    where * is the quasi-shuffle.  Since <w|u1*...*uk> is the coefficient of
    u1(x)...(x)uk in the k-fold coproduct of w, it is enumerated letter by
    letter: each y_s is split as a weak composition of s over the k slots.
    """
    if isinstance(p, (str, Word)):
        p = NCPoly.word(p, "Y")
    if p.alphabet != "Y":
        raise AlphabetMismatch("pi1 is defined on Y")
    terms: dict = {}
    for w, c in p.terms.items():
        if not w:
            raise ValueError("pi1 is undefined on the empty word")
        for u, m in _pi1_word(w):
            terms[u] = _add(terms.get(u, 0), _mul(c, m))
    return NCPoly("Y", terms)


# -- letter projections X <-> Y --------------------------------------------------

def pi_Y(p: NCPoly) -> NCPoly:
    """x0^(s1-1)x1...x0^(sr-1)x1 -> y_s1...y_sr; words ending in x0 are killed."""
    if p.alphabet != "X":
        raise AlphabetMismatch("pi_Y takes an X polynomial")
    terms: dict = {}
    for w, c in p.terms.items():
        if w and w[-1] == 0:
            continue
        out, run = [], 0
        for a in w:
            if a == 0:
                run += 1
            else:
                out.append(run + 1)
                run = 0
        key = tuple(out)
        terms[key] = _add(terms.get(key, 0), c)
    mw = p.max_weight
    return NCPoly("Y", terms, mw)


def pi_X(p: NCPoly) -> NCPoly:
    if p.alphabet == "X":
        raise AlphabetMismatch("pi_X takes a Y polynomial")
    terms: dict = {}
    for w, c in p.terms.items():
        if 0 in w:
            raise AlphabetMismatch("y0 has no X encoding")
        letters = []
        for s in w:
            letters.extend([0] * (s - 1))
            letters.append(1)
        terms[tuple(letters)] = c
    return NCPoly("X", terms, p.max_weight)


# -- exp / log -----------------------------------------------------------------

def series_exp(p: NCPoly, max_weight: int, prod: Callable = concat) -> NCPoly:
    """exp(p) truncated at max_weight; needs <p|1> = 0."""
    if not _is_zero(p.constant_term()):
        raise ValueError("exp needs a series without constant term")
    p = p.truncate(max_weight)
    out = NCPoly.one(p.alphabet, max_weight)
    term = NCPoly.one(p.alphabet, max_weight)
    n = 1
    while True:
        term = prod(term, p, max_weight=max_weight) / n
        if not term:
            break
        out = out + term
        n += 1
    return out


def series_log(p: NCPoly, max_weight: int, prod: Callable = concat) -> NCPoly:
    """log(p) truncated at max_weight; needs <p|1> = 1."""
    if p.constant_term() != 1:
        raise ValueError("log needs a series with constant term 1")
    q = (p - NCPoly.one(p.alphabet)).truncate(max_weight)
    out = NCPoly.zero(p.alphabet, max_weight)
    term = NCPoly.one(p.alphabet, max_weight)
    n = 1
    while True:
        term = prod(term, q, max_weight=max_weight)
        if not term:
            break
        out = out + term * Fraction((-1) ** (n - 1), n)
        n += 1
    return out


def series_inverse(p: NCPoly, max_weight: int) -> NCPoly:
    """Neumann series (1 + r)^-1 = sum (-r)^k, exact at the truncation weight."""
    c0 = p.constant_term()
    if c0 != 1:
        raise ValueError("inverse implemented for constant term 1")
    r = (p - NCPoly.one(p.alphabet)).truncate(max_weight)
    out = NCPoly.one(p.alphabet, max_weight)
    term = NCPoly.one(p.alphabet, max_weight)
    while True:
        term = concat(term, -r, max_weight)
        if not term:
            break
        out = out + term
    return out


def bracket(p: NCPoly, q: NCPoly, max_weight: int | None = None) -> NCPoly:
    return concat(p, q, max_weight) - concat(q, p, max_weight)


# -- group-likeness -------------------------------------------------------------

@dataclass
class GroupLikeReport:
    alphabet: str
    ok: bool
    kind: str
    max_weight: int
    pairs_checked: int
    max_residual: object
    worst_pair: tuple | None

    def to_json_obj(self) -> dict:
        worst = None
        if self.worst_pair is not None:
            worst = [format_word(self.alphabet, w) for w in self.worst_pair]
        return {
            "grouplike": self.ok,
            "coproduct": self.kind,
            "max_weight": self.max_weight,
            "pairs_checked": self.pairs_checked,
            "max_residual": mpmath.nstr(to_mpf(self.max_residual), 6) if self.max_residual is not None else None,
            "worst_pair": worst,
        }


def is_grouplike(S: NCPoly, kind: str, max_weight: int, tol=None) -> GroupLikeReport:
    """Check <S|u><S|v> = <S|u * v> for all nonempty u, v with total weight <= max_weight.

    ``kind`` is ``"shuffle"`` or ``"stuffle"``.  Exact coefficients are compared
    exactly; otherwise the residual must stay below ``tol``.
    """
    c0 = S.constant_term()
    if tol is None and S.is_exact():
        if c0 != 1:
            raise ValueError("group-like series need constant term 1")
    elif abs(to_mpf(c0) - 1) > (tol if tol is not None else 0):
        raise ValueError("group-like series need constant term 1")
    on_words = _shuffle_words if kind == "shuffle" else _stuffle_words
    if kind == "stuffle" and S.alphabet == "X":
        raise AlphabetMismatch("quasi-shuffle check needs a Y series")
    alpha = S.alphabet
    if alpha == "Y0":
        raise ValueError("group-likeness check enumerates words by weight; use Y or X")
    words = words_up_to(alpha, max_weight, include_empty=False)
    exact = tol is None
    worst = Fraction(0) if exact else mpmath.mpf(0)
    worst_pair, count = None, 0
    for i, u in enumerate(words):
        wu = weight(alpha, u)
        for v in words[i:]:
            if wu + weight(alpha, v) > max_weight:
                continue
            count += 1
            lhs = _mul(S.coefficient(u), S.coefficient(v))
            rhs = Fraction(0)
            for w, m in on_words(u, v):
                rhs = _add(rhs, _mul(m, S.coefficient(w)))
            res = abs(_add(lhs, -rhs))
            if not exact:
                res = to_mpf(res)
            if res > worst:
                worst, worst_pair = res, (u, v)
    ok = worst == 0 if exact else worst <= tol
    return GroupLikeReport(alpha, ok, kind, max_weight, count, worst, worst_pair)


# -- regularization of divergent words -------------------------------------------

@lru_cache(maxsize=None)
def _leading_run(w: tuple, letter: int, contracting: bool) -> tuple:
    """Write w = sum c * (u * letter^{*j}) with u not starting with ``letter``.

    ``*`` is the shuffle (or quasi-shuffle when ``contracting``).  If w has a
    leading run of length k, then letter * letter^(k-1)v contains w exactly k
    times and every other word it contains has a shorter leading run.
    Returns items ((u, j), c).
    """
    k = 0
    while k < len(w) and w[k] == letter:
        k += 1
    if k == 0:
        return (((w, 0), Fraction(1)),)
    rest = w[1:]
    on_words = _stuffle_words if contracting else _shuffle_words
    out: dict = {}
    for (u, j), c in _leading_run(rest, letter, contracting):
        out[(u, j + 1)] = out.get((u, j + 1), 0) + c / k
    for v, m in on_words((letter,), rest):
        if v == w:
            continue
        for key, c in _leading_run(v, letter, contracting):
            out[key] = out.get(key, 0) - c * m / k
    return tuple((key, c) for key, c in out.items() if c != 0)


@lru_cache(maxsize=None)
def shuffle_regularize_word(w: tuple) -> tuple:
    """Write an X word as sum c * u sh x0^{sh i} sh x1^{sh j}, u in x0X*x1 or empty.

    Returns items ((u, i, j), c).  Trailing x0 are removed first (leading-run
    recursion on the reversed word; the shuffle commutes with reversal), then
    leading x1.
    """
    out: dict = {}
    for (ur, i), c in _leading_run(tuple(reversed(w)), 0, False):
        u1 = tuple(reversed(ur))
        for (u, j), d in _leading_run(u1, 1, False):
            key = (u, i, j)
            out[key] = out.get(key, 0) + c * d
    return tuple((k, c) for k, c in out.items() if c != 0)


def stuffle_regularize_word(w: tuple) -> tuple:
    """Write a Y word as sum c * u qsh y1^{qsh j} with u not starting with y1."""
    return _leading_run(tuple(w), 1, True)


def trailing_x0_decomposition(w: tuple) -> tuple:
    """Write an X word as sum c * u sh x0^{sh i} with u in X*x1 or empty."""
    return tuple(((tuple(reversed(ur)), i), c)
                 for (ur, i), c in _leading_run(tuple(reversed(w)), 0, False))
