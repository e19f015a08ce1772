"""Sparse exact linear combinations of words.

Words are plain ``str`` objects whose characters are alphabet symbols; the
empty string is the empty word (the unit). An :class:`Elem` is a finite
rational combination of words, a :class:`TensorElem` a rational combination
of k-tuples of words (k = 2 gives ``A ⊗ A``).

Both are immutable and kept in canonical form: zero coefficients are
dropped and terms are stored in length-lexicographic order, where letters
compare by their position in the alphabet.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import AlphabetMismatch, BadAlphabet, BadArtifact, UnknownSymbol

MAX_ALPHABET = 10
DEFAULT_MAX_DEGREE = 8
EMPTY_DISPLAY = "e"

Word = str


def as_rational(value) -> Fraction:
    """Coerce ``value`` to an exact :class:`Fraction`.

    Accepts ints, Fractions and strings such as ``"3"`` or ``"-1/2"``.
    Floats are rejected: nothing in the algebra is allowed to be inexact.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("bool is not a coefficient")
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"coefficient must be exact, got {type(value).__name__}")


def format_rational(q: Fraction) -> str:
    return str(q)


@dataclass(frozen=True)
class Alphabet:
    letters: str
    _index: Mapping[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        letters = self.letters
        if not isinstance(letters, str):
            letters = "".join(letters)
            object.__setattr__(self, "letters", letters)
        if not letters:
            raise BadAlphabet("alphabet must be nonempty")
        if len(letters) > MAX_ALPHABET:
            raise BadAlphabet(f"alphabet has {len(letters)} symbols, cap is {MAX_ALPHABET}")
        if len(set(letters)) != len(letters):
            raise BadAlphabet(f"duplicate symbols in alphabet {letters!r}")
        object.__setattr__(self, "_index", MappingProxyType({c: i for i, c in enumerate(letters)}))

    def __len__(self) -> int:
        return len(self.letters)

    def __contains__(self, symbol) -> bool:
        return symbol in self._index

    def __str__(self) -> str:
        return self.letters

    def key(self, word: Word) -> tuple:
        """Sort key giving length-lexicographic order."""
        idx = self._index
        return (len(word), tuple(idx[c] for c in word))

    def check(self, word: Word) -> Word:
        for pos, c in enumerate(word):
            if c not in self._index:
                raise UnknownSymbol(pos, c)
        return word

    def words(self, max_degree: int, min_degree: int = 0) -> Iterator[Word]:
        """All words with ``min_degree <= len <= max_degree`` in canonical order."""
        for n in range(min_degree, max_degree + 1):
            for letters in itertools.product(self.letters, repeat=n):
                yield "".join(letters)


def word_parse(text: str, alphabet: Alphabet) -> Word:
    return alphabet.check(text)


def show_word(word: Word) -> str:
    return word if word else EMPTY_DISPLAY


def _format_terms(items, show_key) -> str:
    parts = []
    for key, c in items:
        label = show_key(key)
        if c == 1:
            s = label
        elif c == -1:
            s = "-" + label
        else:
            s = f"{c}*{label}"
        if parts:
            parts.append(f"- {s[1:]}" if s.startswith("-") else f"+ {s}")
        else:
            parts.append(s)
    return " ".join(parts) if parts else "0"


class Elem:
    """An element of the free vector space on words over ``alphabet``."""

    __slots__ = ("alphabet", "_terms")

    def __init__(self, alphabet: Alphabet, terms: Mapping[Word, object] | Iterable = ()):
        if isinstance(terms, Mapping):
            items = terms.items()
        else:
            items = terms
        acc: dict[Word, Fraction] = {}
        for w, c in items:
            alphabet.check(w)
            acc[w] = acc.get(w, 0) + as_rational(c)
        self.alphabet = alphabet
        self._terms = _canonical(alphabet, acc)

    @classmethod
    def _raw(cls, alphabet: Alphabet, acc: dict) -> Elem:
        # trusted constructor: words already validated, coefficients Fractions
        obj = object.__new__(cls)
        obj.alphabet = alphabet
        obj._terms = _canonical(alphabet, acc)
        return obj

    @classmethod
    def word(cls, alphabet: Alphabet, w: Word, coeff=1) -> Elem:
        return cls(alphabet, {w: coeff})

    @classmethod
    def zero(cls, alphabet: Alphabet) -> Elem:
        return cls._raw(alphabet, {})

    @property
    def terms(self) -> Mapping[Word, Fraction]:
        return MappingProxyType(self._terms)

    def items(self):
        return self._terms.items()

    def __iter__(self):
        return iter(self._terms.items())

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def degree(self) -> int:
        """Largest word length present, -1 for the zero element."""
        return max((len(w) for w in self._terms), default=-1)

    def _same(self, other: Elem):
        if not isinstance(other, Elem):
            raise TypeError(f"expected Elem, got {type(other).__name__}")
        if other.alphabet != self.alphabet:
            raise AlphabetMismatch(f"{self.alphabet.letters!r} vs {other.alphabet.letters!r}")

    def __add__(self, other: Elem) -> Elem:
        self._same(other)
        acc = dict(self._terms)
        for w, c in other._terms.items():
            acc[w] = acc.get(w, 0) + c
        return Elem._raw(self.alphabet, acc)

    def __sub__(self, other: Elem) -> Elem:
        return self + (-1) * other

    def __neg__(self) -> Elem:
        return (-1) * self

    def __mul__(self, scalar) -> Elem:
        q = as_rational(scalar)
        return Elem._raw(self.alphabet, {w: q * c for w, c in self._terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, Elem):
            return NotImplemented
        return self.alphabet == other.alphabet and self._terms == other._terms

    def __hash__(self):
        return hash((self.alphabet.letters, tuple(self._terms.items())))

    def __str__(self) -> str:
        return _format_terms(self._terms.items(), show_word)

    def __repr__(self) -> str:
        return f"Elem({self.alphabet.letters!r}, {self})"

    def to_json(self) -> dict:
        return {
            "alphabet": self.alphabet.letters,
            "terms": [{"word": w, "coeff": format_rational(c)} for w, c in self._terms.items()],
        }

    @classmethod
    def from_json(cls, data) -> Elem:
        if isinstance(data, str):
            data = json.loads(data)
        try:
            alphabet = Alphabet(data["alphabet"])
            pairs = [(t["word"], as_rational(t["coeff"])) for t in data["terms"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise BadArtifact(f"not an element: {exc}") from None
        return cls(alphabet, pairs)


def _canonical(alphabet: Alphabet, acc: dict) -> dict:
    key = alphabet.key
    return {w: c for w, c in sorted(acc.items(), key=lambda t: key(t[0])) if c != 0}


class TensorElem:
    """A rational combination of ``arity``-tuples of words."""

    __slots__ = ("alphabet", "arity", "_terms")

    def __init__(self, alphabet: Alphabet, terms: Mapping | Iterable = (), arity: int = 2):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[tuple, Fraction] = {}
        for key, c in items:
            key = tuple(key)
            if len(key) != arity:
                raise ValueError(f"tensor key {key!r} does not have arity {arity}")
            for w in key:
                alphabet.check(w)
            acc[key] = acc.get(key, 0) + as_rational(c)
        self.alphabet = alphabet
        self.arity = arity
        self._terms = _canonical_tensor(alphabet, acc)

    @classmethod
    def _raw(cls, alphabet: Alphabet, acc: dict, arity: int) -> TensorElem:
        obj = object.__new__(cls)
        obj.alphabet = alphabet
        obj.arity = arity
        obj._terms = _canonical_tensor(alphabet, acc)
        return obj

    @property
    def terms(self) -> Mapping[tuple, Fraction]:
        return MappingProxyType(self._terms)

    def items(self):
        return self._terms.items()

    def __iter__(self):
        return iter(self._terms.items())

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def _same(self, other):
        if not isinstance(other, TensorElem):
            raise TypeError(f"expected TensorElem, got {type(other).__name__}")
        if other.alphabet != self.alphabet:
            raise AlphabetMismatch(f"{self.alphabet.letters!r} vs {other.alphabet.letters!r}")
        if other.arity != self.arity:
            raise ValueError(f"arity {self.arity} vs {other.arity}")

    def __add__(self, other: TensorElem) -> TensorElem:
        self._same(other)
        acc = dict(self._terms)
        for k, c in other._terms.items():
            acc[k] = acc.get(k, 0) + c
        return TensorElem._raw(self.alphabet, acc, self.arity)

    def __sub__(self, other: TensorElem) -> TensorElem:
        return self + (-1) * other

    def __neg__(self) -> TensorElem:
        return (-1) * self

    def __mul__(self, scalar) -> TensorElem:
        q = as_rational(scalar)
        return TensorElem._raw(self.alphabet, {k: q * c for k, c in self._terms.items()}, self.arity)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, TensorElem):
            return NotImplemented
        return (self.alphabet == other.alphabet and self.arity == other.arity
                and self._terms == other._terms)

    def __hash__(self):
        return hash((self.alphabet.letters, self.arity, tuple(self._terms.items())))

    def map_factor(self, index: int, fn) -> TensorElem:
        """Apply a linear map to one tensor factor.

        ``fn(word)`` may return an :class:`Elem` (arity is unchanged) or a
        :class:`TensorElem` of arity k, which is spliced in place of the
        factor so the result has arity ``self.arity + k - 1``.
        """
        acc: dict[tuple, Fraction] = {}
        new_arity = None
        cache: dict[Word, object] = {}
        for key, c in self._terms.items():
            w = key[index]
            if w not in cache:
                cache[w] = fn(w)
            image = cache[w]
            if isinstance(image, Elem):
                inner = (((v,), d) for v, d in image.items())
                k = 1
            else:
                inner = image.items()
                k = image.arity
            new_arity = self.arity + k - 1
            for sub, d in inner:
                nk = key[:index] + tuple(sub) + key[index + 1:]
                acc[nk] = acc.get(nk, 0) + c * d
        return TensorElem._raw(self.alphabet, acc, new_arity or self.arity)

    def contract(self, fn) -> Elem:
        """Collapse each key with ``fn(*words) -> Elem`` and sum (e.g. a product)."""
        acc: dict[Word, Fraction] = {}
        for key, c in self._terms.items():
            for w, d in fn(*key).items():
                acc[w] = acc.get(w, 0) + c * d
        return Elem._raw(self.alphabet, acc)

    def __str__(self) -> str:
        return _format_terms(self._terms.items(), lambda k: "⊗".join(show_word(w) for w in k))

    def __repr__(self) -> str:
        return f"TensorElem({self.alphabet.letters!r}, {self})"

    def to_json(self) -> dict:
        if self.arity == 2:
            terms = [{"left": l, "right": r, "coeff": format_rational(c)}
                     for (l, r), c in self._terms.items()]
        else:
            terms = [{"factors": list(k), "coeff": format_rational(c)}
                     for k, c in self._terms.items()]
        return {"alphabet": self.alphabet.letters, "terms": terms}

    @classmethod
    def from_json(cls, data) -> TensorElem:
        if isinstance(data, str):
            data = json.loads(data)
        try:
            alphabet = Alphabet(data["alphabet"])
            pairs = []
            for t in data["terms"]:
                key = tuple(t["factors"]) if "factors" in t else (t["left"], t["right"])
                pairs.append((key, as_rational(t["coeff"])))
        except (KeyError, TypeError, ValueError) as exc:
            raise BadArtifact(f"not a tensor element: {exc}") from None
        arity = len(pairs[0][0]) if pairs else 2
        return cls(alphabet, pairs, arity=arity)


def _canonical_tensor(alphabet: Alphabet, acc: dict) -> dict:
    key = alphabet.key
    return {k: c for k, c in sorted(acc.items(), key=lambda t: tuple(key(w) for w in t[0])) if c != 0}


def elem_combine(pairs: Sequence[tuple[object, Elem]]) -> Elem:
    """Return ``sum(c * a for c, a in pairs)`` in canonical form."""
    if not pairs:
        raise ValueError("elem_combine needs at least one pair to fix the alphabet")
    alphabet = pairs[0][1].alphabet
    acc: dict[Word, Fraction] = {}
    for c, a in pairs:
        if a.alphabet != alphabet:
            raise AlphabetMismatch(f"{alphabet.letters!r} vs {a.alphabet.letters!r}")
        q = as_rational(c)
        for w, d in a.items():
            acc[w] = acc.get(w, 0) + q * d
    return Elem._raw(alphabet, acc)


def tensor_of(a: Elem, b: Elem) -> TensorElem:
    if a.alphabet != b.alphabet:
        raise AlphabetMismatch(f"{a.alphabet.letters!r} vs {b.alphabet.letters!r}")
    acc = {(u, v): c * d for u, c in a.items() for v, d in b.items()}
    return TensorElem._raw(a.alphabet, acc, 2)


def coeff_of(a: Elem, w: Word) -> Fraction:
    return a._terms.get(w, Fraction(0))


def grade_project(a: Elem, n: int) -> Elem:
    if n < 0:
        raise ValueError("degree must be >= 0")
    return Elem._raw(a.alphabet, {w: c for w, c in a.items() if len(w) == n})
