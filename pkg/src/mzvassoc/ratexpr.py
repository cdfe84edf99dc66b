"""Rational series built from starred letters, and one-variable polynomials.

A :class:`RatExpr` is a finite combination of terms

    coeff * (a x0)^* sh (b x1)^* sh w

with ``w`` a word.  Same-letter stars merge, (a x)^* sh (b x)^* = ((a+b) x)^*,
so each term carries at most one star per letter and (0 x)^* = 1 is dropped.
Over Y only (b y1)^* atoms are allowed.

Elements of Z[x1^*] are kept in the basis {(k x1)^*}, on which the map
``lambda_map`` (R -> Li_R as a polynomial in t = (1-z)^-1) is diagonal.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .ncpoly import NCPoly, shuffle, stuffle
from .words import format_word, graded_key, parse_word


class UnsupportedExpression(ValueError):
    pass


_STAR_LETTERS = {"X": (0, 1), "Y": (1,)}


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


class RatExpr:
    """Finite sum of coeff * stars sh word; stars is a frozenset of (letter, c)."""

    __slots__ = ("alphabet", "terms")

    def __init__(self, alphabet: str = "X", terms: dict | None = None):
        if alphabet not in _STAR_LETTERS:
            raise UnsupportedExpression(f"starred expressions live over X or Y, not {alphabet}")
        self.alphabet = alphabet
        clean: dict = {}
        for (stars, word), c in (terms or {}).items():
            merged: dict = {}
            for letter, s in stars:
                if letter not in _STAR_LETTERS[alphabet]:
                    raise UnsupportedExpression(f"star on letter {letter} is outside the supported fragment")
                merged[letter] = merged.get(letter, Fraction(0)) + _frac(s)
            key = (tuple(sorted((l, s) for l, s in merged.items() if s != 0)), tuple(word))
            clean[key] = clean.get(key, Fraction(0)) + c
        self.terms = {k: c for k, c in clean.items() if c != 0}

    # -- constructors -------------------------------------------------------
    @classmethod
    def one(cls, alphabet: str = "X") -> "RatExpr":
        return cls(alphabet, {((), ()): Fraction(1)})

    @classmethod
    def star(cls, letter: int, c=1, alphabet: str = "X") -> "RatExpr":
        """(c x)^*."""
        return cls(alphabet, {(((letter, _frac(c)),), ()): Fraction(1)})

    @classmethod
    def from_poly(cls, p: NCPoly) -> "RatExpr":
        return cls(p.alphabet, {((), w): c for w, c in p.terms.items()})

    @classmethod
    def star_power(cls, letter: int, a, i: int, alphabet: str = "X") -> "RatExpr":
        """Concatenation power ((a x)^*)^i = (a x)^* sh (1 + a x)^(i-1)."""
        if i < 1:
            raise UnsupportedExpression("star powers start at 1")
        a = _frac(a)
        terms = {}
        for k in range(i):
            c = math.comb(i - 1, k) * a ** k
            terms[(((letter, a),), (letter,) * k)] = c
        return cls(alphabet, terms)

    # -- algebra ------------------------------------------------------------
    def __add__(self, other: "RatExpr") -> "RatExpr":
        self._check(other)
        terms = dict(self.terms)
        for k, c in other.terms.items():
            terms[k] = terms.get(k, 0) + c
        return RatExpr(self.alphabet, terms)

    def __neg__(self):
        return RatExpr(self.alphabet, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, c):
        if isinstance(c, RatExpr):
            raise TypeError("use shuffle_product for products of rational expressions")
        return RatExpr(self.alphabet, {k: v * _frac(c) for k, v in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, RatExpr):
            return NotImplemented
        return self.alphabet == other.alphabet and self.terms == other.terms

    def __hash__(self):
        return hash((self.alphabet, frozenset(self.terms.items())))

    def _check(self, other):
        if other.alphabet != self.alphabet:
            raise UnsupportedExpression("mixing X and Y rational expressions")

    def shuffle_product(self, other: "RatExpr") -> "RatExpr":
        """Shuffle on X, quasi-shuffle on Y (stars merge additively on X).

        Over Y the only star is (b y1)^*; the quasi-shuffle of two such stars
        leaves the y1-star fragment, so it is rejected.
        """
        self._check(other)
        terms: dict = {}
        for (s1, w1), c1 in self.terms.items():
            for (s2, w2), c2 in other.terms.items():
                if self.alphabet == "Y" and s1 and s2:
                    raise UnsupportedExpression("quasi-shuffle of two y1-stars leaves Q[y1^*]")
                prod = (shuffle if self.alphabet == "X" else stuffle)(
                    NCPoly(self.alphabet, {w1: Fraction(1)}), NCPoly(self.alphabet, {w2: Fraction(1)}))
                if self.alphabet == "Y" and (s1 or s2) and (w1 or w2):
                    raise UnsupportedExpression("quasi-shuffle of a y1-star with a word is not normalized here")
                for w, m in prod.terms.items():
                    key = (s1 + s2, w)
                    terms[key] = terms.get(key, 0) + c1 * c2 * m
        return RatExpr(self.alphabet, {k: c for k, c in terms.items()})

    def shuffle_power(self, n: int) -> "RatExpr":
        out = RatExpr.one(self.alphabet)
        for _ in range(n):
            out = out.shuffle_product(self)
        return out

    def normalize(self) -> "RatExpr":
        """Normal form: merged stars, collected coefficients.  Idempotent."""
        return RatExpr(self.alphabet, self.terms)

    # -- views ----------------------------------------------------------------
    def sorted_items(self):
        return sorted(self.terms.items(),
                      key=lambda kv: (kv[0][0], graded_key(self.alphabet, kv[0][1])))

    def star_coefficients(self, letter: int = 1) -> dict:
        """For a combination of pure (k x)^* atoms: {k: coefficient}."""
        out = {}
        for (stars, word), c in self.terms.items():
            if word:
                raise UnsupportedExpression("term carries a word factor")
            if any(l != letter for l, _ in stars):
                raise UnsupportedExpression("term carries a star on another letter")
            k = stars[0][1] if stars else Fraction(0)
            out[k] = out.get(k, 0) + c
        return out

    def __str__(self):
        if not self.terms:
            return "0"
        name = "x" if self.alphabet == "X" else "y"
        parts = []
        for (stars, word), c in self.sorted_items():
            atoms = [f"({s}{name}{l})*" for l, s in stars]
            if word:
                atoms.append(format_word(self.alphabet, word))
            parts.append(f"{c}*" + (" sh ".join(atoms) if atoms else "1"))
        return " + ".join(parts)

    __repr__ = __str__

    def to_json_obj(self) -> dict:
        name = "x" if self.alphabet == "X" else "y"
        terms = []
        for (stars, word), c in self.sorted_items():
            terms.append({
                "stars": [{"letter": f"{name}{l}", "c": str(s)} for l, s in stars],
                "word": format_word(self.alphabet, word),
                "num": str(c.numerator),
                "den": str(c.denominator),
            })
        return {"terms": terms}

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())

    @classmethod
    def from_json_obj(cls, obj: dict) -> "RatExpr":
        alphabet = None
        terms = {}
        for t in obj["terms"]:
            stars = []
            for st in t["stars"]:
                alphabet = alphabet or ("X" if st["letter"][0] == "x" else "Y")
                stars.append((int(st["letter"][1:]), Fraction(st["c"])))
            alpha, word = parse_word(t["word"], alphabet)
            alphabet = alphabet or alpha
            terms[(tuple(stars), word)] = Fraction(int(t["num"]), int(t["den"]))
        return cls(alphabet or "X", terms)


def star_shuffle_normalize(e: RatExpr) -> RatExpr:
    return e.normalize()


# -- one-variable polynomials ----------------------------------------------------

@dataclass(frozen=True)
class OneVarPoly:
    """p(t) = sum p_k t^k with exact rational coefficients (index = degree)."""

    coeffs: tuple = ()

    def __post_init__(self):
        c = [_frac(x) for x in self.coeffs]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @classmethod
    def monomial(cls, k: int, c=1) -> "OneVarPoly":
        return cls((0,) * k + (c,))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def valuation(self) -> int | None:
        return next((k for k, c in enumerate(self.coeffs) if c != 0), None)

    @property
    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __call__(self, t):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def tilde(self) -> "OneVarPoly":
        """Exponential transform: sum p_k / k! t^k."""
        return OneVarPoly(tuple(c / math.factorial(k) for k, c in enumerate(self.coeffs)))

    def check(self) -> "OneVarPoly":
        """sum k! p_k t^k, i.e. sum p_k t^{sh k}."""
        return OneVarPoly(tuple(c * math.factorial(k) for k, c in enumerate(self.coeffs)))

    def __add__(self, other: "OneVarPoly") -> "OneVarPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return OneVarPoly(tuple(x + y for x, y in zip(a, b)))

    def __neg__(self):
        return OneVarPoly(tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, OneVarPoly):
            return OneVarPoly(tuple(c * _frac(other) for c in self.coeffs))
        if not self.coeffs or not other.coeffs:
            return OneVarPoly(())
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return OneVarPoly(tuple(out))

    __rmul__ = __mul__

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            mono = "" if k == 0 else ("t" if k == 1 else f"t^{k}")
            if mono and abs(c) == 1:
                s = ("-" if c < 0 else "+") + mono
            else:
                s = ("-" if c < 0 else "+") + str(abs(c)) + ("*" + mono if mono else "")
            parts.append(s)
        out = " ".join(parts)
        return out[1:] if out.startswith("+") else out

    def to_json_obj(self) -> list:
        return [str(c) for c in self.coeffs]


# -- lambda, eta and the check-substitution ----------------------------------------

def lambda_map(r: RatExpr) -> OneVarPoly:
    """Z[x1^*] -> Z[t], (k x1)^* -> t^k, where t stands for (1-z)^-1."""
    if r.alphabet != "X":
        raise UnsupportedExpression("lambda takes an expression over X")
    coeffs = r.star_coefficients(1)
    out: dict = {}
    for k, c in coeffs.items():
        if k.denominator != 1 or k < 0:
            raise UnsupportedExpression(f"(k x1)^* with k={k} is not in Z[x1^*]")
        out[int(k)] = out.get(int(k), 0) + c
    if not out:
        return OneVarPoly(())
    return OneVarPoly(tuple(out.get(k, 0) for k in range(max(out) + 1)))


def lambda_inv(p: OneVarPoly) -> RatExpr:
    terms = {}
    for k, c in enumerate(p.coeffs):
        if c == 0:
            continue
        stars = ((1, Fraction(k)),) if k else ()
        terms[(stars, ())] = c
    return RatExpr("X", terms)


def pcheck_substitute(p: OneVarPoly) -> RatExpr:
    """p-check evaluated at x1^*: sum p_k (x1^*)^{sh k} = sum p_k (k x1)^*."""
    return lambda_inv(p)


def pi_Y_stars(r: RatExpr) -> RatExpr:
    """pi_Y on Z[x1^*]: (k x1)^* -> (k y1)^*, coefficientwise on the geometric series."""
    coeffs = r.star_coefficients(1)
    terms = {}
    for k, c in coeffs.items():
        terms[(((1, k),) if k else (), ())] = c
    return RatExpr("Y", terms)


def binomial_q(n: int, k) -> Fraction:
    """H_{(k y1)^*}(n) = prod_{m<=n} (1 + k/m); equals C(n+k, k) for integer k."""
    k = _frac(k)
    if k.denominator == 1 and k >= 0:
        return Fraction(math.comb(n + int(k), int(k)))
    acc = Fraction(1)
    for m in range(1, n + 1):
        acc *= 1 + k / m
    return acc


def eta_map(s: RatExpr, n: int) -> Fraction:
    """Evaluate H_S(n) for S in Q[y1^*] given as a combination of (k y1)^*."""
    if s.alphabet != "Y":
        raise UnsupportedExpression("eta takes an expression over Y")
    return sum((c * binomial_q(n, k) for k, c in s.star_coefficients(1).items()), Fraction(0))


def eta_coefficients(s: RatExpr) -> dict:
    """Coefficients of H_S in the basis {C(n+k, k)}."""
    return dict(s.star_coefficients(1))
