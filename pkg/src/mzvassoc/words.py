"""Alphabets, words, orderings and Lyndon machinery.

Three alphabets are supported:

* ``"X"``  -- letters x0 < x1, stored as the integers 0 and 1;
* ``"Y"``  -- letters y1 > y2 > y3 > ..., stored as their positive index;
* ``"Y0"`` -- letters y0 > y1 > y2 > ..., stored as their non-negative index.

Note the reversed order on Y/Y0: y1 is the *largest* letter of Y.  Every
lexicographic comparison in the package goes through :func:`order_key`.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

ALPHABETS = ("X", "Y", "Y0")

Letters = tuple  # tuple[int, ...]


class WordError(ValueError):
    pass


def check_alphabet(alphabet: str) -> str:
    if alphabet not in ALPHABETS:
        raise WordError(f"unknown alphabet {alphabet!r}")
    return alphabet


def check_letters(alphabet: str, letters: Iterable[int]) -> Letters:
    letters = tuple(int(a) for a in letters)
    if alphabet == "X":
        bad = [a for a in letters if a not in (0, 1)]
    elif alphabet == "Y":
        bad = [a for a in letters if a < 1]
    else:
        bad = [a for a in letters if a < 0]
    if bad:
        raise WordError(f"letters {bad} are not in alphabet {alphabet}")
    return letters


def letter_weight(alphabet: str, a: int) -> int:
    return 1 if alphabet == "X" else a


def weight(alphabet: str, letters: Sequence[int]) -> int:
    """Length on X, sum of indices on Y and Y0."""
    if alphabet == "X":
        return len(letters)
    return sum(letters)


def degree(letters: Sequence[int]) -> int:
    """(w) + |w| for a Y0 word."""
    return sum(letters) + len(letters)


def order_key(alphabet: str, letters: Sequence[int]) -> tuple:
    """Key whose natural tuple order is the lexicographic order on words."""
    if alphabet == "X":
        return tuple(letters)
    return tuple(-a for a in letters)


def graded_key(alphabet: str, letters: Sequence[int]) -> tuple:
    return (weight(alphabet, letters), len(letters), order_key(alphabet, letters))


@dataclass(frozen=True, order=False)
class Word:
    alphabet: str
    letters: Letters = ()

    def __post_init__(self):
        check_alphabet(self.alphabet)
        object.__setattr__(self, "letters", check_letters(self.alphabet, self.letters))

    @property
    def weight(self) -> int:
        return weight(self.alphabet, self.letters)

    @property
    def length(self) -> int:
        return len(self.letters)

    def __len__(self):
        return len(self.letters)

    def __bool__(self):
        return bool(self.letters)

    def __add__(self, other: "Word") -> "Word":
        if other.alphabet != self.alphabet:
            raise WordError("cannot concatenate words over different alphabets")
        return Word(self.alphabet, self.letters + other.letters)

    def __lt__(self, other: "Word") -> bool:
        if other.alphabet != self.alphabet:
            raise WordError("cannot compare words over different alphabets")
        return order_key(self.alphabet, self.letters) < order_key(other.alphabet, other.letters)

    def __le__(self, other: "Word") -> bool:
        return self == other or self < other

    def __str__(self):
        return format_word(self.alphabet, self.letters)

    def __repr__(self):
        return f"Word({self.alphabet!r}, {str(self)!r})"

    @classmethod
    def parse(cls, text: str, alphabet: str | None = None) -> "Word":
        alpha, letters = parse_word(text, alphabet)
        return cls(alpha, letters)


def format_word(alphabet: str, letters: Sequence[int]) -> str:
    if not letters:
        return "1"
    if alphabet == "X":
        return "".join(f"x{a}" for a in letters)
    return ",".join(f"y{a}" for a in letters)


def parse_word(text: str, alphabet: str | None = None) -> tuple[str, Letters]:
    """Parse ``"x0x1x1"``, ``"y2,y1"`` or ``"1"``.

    A Y word is tagged ``"Y0"`` when it contains y0 or when ``alphabet`` says so.
    """
    s = text.strip().replace(" ", "")
    if s in ("1", ""):
        return (alphabet or "X"), ()
    if s[0] == "x":
        if alphabet not in (None, "X"):
            raise WordError(f"{text!r} is an X word, expected {alphabet}")
        parts = s.split("x")[1:]
        try:
            letters = tuple(int(p) for p in parts)
        except ValueError:
            raise WordError(f"cannot parse X word {text!r}") from None
        return "X", check_letters("X", letters)
    if s[0] == "y":
        try:
            letters = tuple(int(p[1:]) for p in s.split(",") if p[0] == "y")
        except (ValueError, IndexError):
            raise WordError(f"cannot parse Y word {text!r}") from None
        if len(letters) != len(s.split(",")):
            raise WordError(f"cannot parse Y word {text!r}")
        if alphabet is None:
            alphabet = "Y0" if 0 in letters else "Y"
        if alphabet == "X":
            raise WordError(f"{text!r} is a Y word, expected X")
        return alphabet, check_letters(alphabet, letters)
    raise WordError(f"cannot parse word {text!r}")


# -- encodings ---------------------------------------------------------------

def encode_x(multiindex: Sequence[int]) -> Word:
    """(s1,...,sr) -> x0^(s1-1) x1 ... x0^(sr-1) x1."""
    letters: list[int] = []
    for s in multiindex:
        if s < 1:
            raise WordError("X encoding needs positive indices")
        letters.extend([0] * (s - 1))
        letters.append(1)
    return Word("X", tuple(letters))


def decode_x(word: Word | Sequence[int]) -> tuple[int, ...]:
    letters = word.letters if isinstance(word, Word) else tuple(word)
    if letters and letters[-1] != 1:
        raise WordError("not y-encodable: word ends in x0")
    out = []
    run = 0
    for a in letters:
        if a == 0:
            run += 1
        else:
            out.append(run + 1)
            run = 0
    return tuple(out)


def encode_y(multiindex: Sequence[int]) -> Word:
    multiindex = tuple(multiindex)
    return Word("Y0" if 0 in multiindex else "Y", multiindex)


def decode_y(word: Word) -> tuple[int, ...]:
    return tuple(word.letters)


# -- Lyndon words ------------------------------------------------------------

def is_lyndon(alphabet: str, letters: Sequence[int]) -> bool:
    """Brute-force test: strictly smaller than every proper suffix."""
    if not letters:
        return False
    k = order_key(alphabet, letters)
    return all(k < k[i:] for i in range(1, len(k)))


def _sorted_letters(alphabet: str, max_weight: int) -> list[int]:
    if alphabet == "X":
        return [0, 1]
    if alphabet == "Y":
        return sorted(range(1, max_weight + 1), key=lambda a: -a)
    raise WordError("Lyndon enumeration by weight is only defined on X and Y")


def lyndon_words(alphabet: str, max_weight: int) -> list[Word]:
    """All Lyndon words of weight <= max_weight, increasing lexicographically.

    Uses Duval's next-Lyndon-word iteration on the letters of weight at most
    ``max_weight``, ranked by the alphabet order; words of too large a weight
    are filtered out.
    """
    if max_weight < 1:
        raise WordError("max_weight must be >= 1")
    letters = _sorted_letters(alphabet, max_weight)
    k = len(letters)
    n = max_weight  # every letter has weight >= 1, so length <= weight
    out = []
    w = [-1]
    while w:
        w[-1] += 1
        word = tuple(letters[i] for i in w)
        if weight(alphabet, word) <= max_weight:
            out.append(Word(alphabet, word))
        m = len(w)
        while len(w) < n:
            w.append(w[len(w) - m])
        while w and w[-1] == k - 1:
            w.pop()
    return out


def lyndon_factorization(alphabet: str, letters: Sequence[int]) -> list[Letters]:
    """Chen-Fox-Lyndon factorization l1 >= l2 >= ... (Duval)."""
    key = order_key(alphabet, letters)
    letters = tuple(letters)
    n = len(letters)
    i = 0
    out = []
    while i < n:
        j, k = i + 1, i
        while j < n and key[k] <= key[j]:
            k = i if key[k] < key[j] else k + 1
            j += 1
        while i <= k:
            out.append(letters[i:i + j - k])
            i += j - k
    return out


def standard_factorization(alphabet: str, letters: Sequence[int]) -> tuple[Letters, Letters]:
    """Split a Lyndon word l = uv with v its longest proper Lyndon suffix."""
    letters = tuple(letters)
    if len(letters) < 2 or not is_lyndon(alphabet, letters):
        raise WordError(f"{format_word(alphabet, letters)} is not a Lyndon word of length >= 2")
    for i in range(1, len(letters)):
        if is_lyndon(alphabet, letters[i:]):
            return letters[:i], letters[i:]
    raise AssertionError("unreachable: the last letter is always Lyndon")


# -- enumeration ---------------------------------------------------------------

def words_of_weight(alphabet: str, n: int) -> list[Letters]:
    """All words of exactly weight n (X: length n; Y: compositions of n)."""
    if alphabet == "X":
        return list(itertools.product((0, 1), repeat=n))
    if alphabet == "Y":
        return list(_compositions(n))
    raise WordError("weight does not bound the number of Y0 words; use words_of_degree")


def _compositions(n: int) -> Iterator[Letters]:
    if n == 0:
        yield ()
        return
    for first in range(1, n + 1):
        for rest in _compositions(n - first):
            yield (first,) + rest


def words_up_to(alphabet: str, max_weight: int, include_empty: bool = True) -> list[Letters]:
    out = []
    for n in range(0 if include_empty else 1, max_weight + 1):
        out.extend(sorted(words_of_weight(alphabet, n), key=lambda w: order_key(alphabet, w)))
    return out


def words_of_degree(max_degree: int, include_empty: bool = True) -> list[Letters]:
    """Y0 words w with (w)+|w| <= max_degree."""
    out = []
    for d in range(0 if include_empty else 1, max_degree + 1):
        out.extend(tuple(c - 1 for c in comp) for comp in _compositions(d))
    return out
