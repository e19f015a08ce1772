"""The two graded-dual bialgebra structures on words.

``SHUFFLE_DECONCAT``
    product = shuffle, coproduct = deconcatenation.
``CONCAT_DESHUFFLE``
    product = concatenation, coproduct = deshuffle (unshuffle).

Both share unit ``c -> c*e``, counit "coefficient of the empty word" and the
antipode ``w -> (-1)^|w| reverse(w)``.

On a one-letter alphabet ``{x}`` the shuffle structure is the divided-power
polynomial ring: ``Δ(x^n) = Σ x^i ⊗ x^(n-i)`` with ``x^i ⧢ x^j = C(i+j, i) x^(i+j)``.
"""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

from .errors import AlphabetMismatch, DegreeCapExceeded
from .words import DEFAULT_MAX_DEGREE, Alphabet, Elem, TensorElem, Word, as_rational


class Kind(enum.Enum):
    SHUFFLE_DECONCAT = "deconcat"
    CONCAT_DESHUFFLE = "deshuffle"


@lru_cache(maxsize=65536)
def _shuffle_counts(u: Word, v: Word) -> tuple:
    # row[j] after processing i letters of u holds Counter of shuffles of u[:i], v[:j]
    prev = [Counter({v[:j]: 1}) for j in range(len(v) + 1)]
    for i in range(1, len(u) + 1):
        cur = [Counter({u[:i]: 1})]
        a = u[i - 1]
        for j in range(1, len(v) + 1):
            b = v[j - 1]
            cell = Counter()
            for w, c in prev[j].items():
                cell[w + a] += c
            for w, c in cur[j - 1].items():
                cell[w + b] += c
            cur.append(cell)
        prev = cur
    return tuple(prev[len(v)].items())


def shuffle_counts(u: Word, v: Word) -> dict[Word, int]:
    """Multiplicity of each interleaving of ``u`` and ``v``."""
    return dict(_shuffle_counts(u, v))


@lru_cache(maxsize=65536)
def _deshuffle_counts(w: Word) -> tuple:
    n = len(w)
    acc = Counter()
    for k in range(n + 1):
        for picked in combinations(range(n), k):
            chosen = set(picked)
            left = "".join(w[i] for i in picked)
            right = "".join(w[i] for i in range(n) if i not in chosen)
            acc[(left, right)] += 1
    return tuple(acc.items())


@dataclass(frozen=True)
class HopfStructure:
    kind: Kind
    alphabet: Alphabet
    max_degree: int = DEFAULT_MAX_DEGREE

    def __post_init__(self):
        if isinstance(self.alphabet, str):
            object.__setattr__(self, "alphabet", Alphabet(self.alphabet))
        if isinstance(self.kind, str):
            object.__setattr__(self, "kind", Kind(self.kind))
        if self.max_degree < 0:
            raise ValueError("max_degree must be >= 0")

    @classmethod
    def shuffle_deconcat(cls, alphabet, max_degree: int = DEFAULT_MAX_DEGREE) -> HopfStructure:
        return cls(Kind.SHUFFLE_DECONCAT, alphabet, max_degree)

    @classmethod
    def concat_deshuffle(cls, alphabet, max_degree: int = DEFAULT_MAX_DEGREE) -> HopfStructure:
        return cls(Kind.CONCAT_DESHUFFLE, alphabet, max_degree)

    def dual(self) -> HopfStructure:
        other = (Kind.CONCAT_DESHUFFLE if self.kind is Kind.SHUFFLE_DECONCAT
                 else Kind.SHUFFLE_DECONCAT)
        return HopfStructure(other, self.alphabet, self.max_degree)

    # -- helpers -----------------------------------------------------------

    def _cap(self, degree: int):
        if degree > self.max_degree:
            raise DegreeCapExceeded(degree, self.max_degree)

    def _check(self, a):
        if a.alphabet != self.alphabet:
            raise AlphabetMismatch(f"{a.alphabet.letters!r} vs {self.alphabet.letters!r}")

    def word(self, text: str) -> Word:
        return self.alphabet.check(text)

    def elem(self, terms) -> Elem:
        """Build an element from a word, a mapping, or an :class:`Elem`."""
        if isinstance(terms, Elem):
            self._check(terms)
            return terms
        if isinstance(terms, str):
            return Elem(self.alphabet, {terms: 1})
        return Elem(self.alphabet, terms)

    def basis(self, max_degree: int | None = None):
        return self.alphabet.words(self.max_degree if max_degree is None else max_degree)

    # -- word-level operations ----------------------------------------------

    def shuffle(self, u: Word, v: Word) -> Elem:
        self.word(u), self.word(v)
        self._cap(len(u) + len(v))
        return Elem._raw(self.alphabet, {w: Fraction(c) for w, c in _shuffle_counts(u, v)})

    def concat(self, u: Word, v: Word) -> Word:
        self.word(u), self.word(v)
        self._cap(len(u) + len(v))
        return u + v

    def deconcat(self, w: Word) -> TensorElem:
        self.word(w)
        acc = {(w[:i], w[i:]): Fraction(1) for i in range(len(w) + 1)}
        return TensorElem._raw(self.alphabet, acc, 2)

    def deshuffle(self, w: Word) -> TensorElem:
        self.word(w)
        self._cap(len(w))
        return TensorElem._raw(self.alphabet, {k: Fraction(c) for k, c in _deshuffle_counts(w)}, 2)

    def antipode_closed(self, w: Word) -> Elem:
        self.word(w)
        return Elem._raw(self.alphabet, {w[::-1]: Fraction((-1) ** len(w))})

    def mul_words(self, u: Word, v: Word) -> Elem:
        if self.kind is Kind.SHUFFLE_DECONCAT:
            return self.shuffle(u, v)
        return Elem._raw(self.alphabet, {self.concat(u, v): Fraction(1)})

    def comul_word(self, w: Word) -> TensorElem:
        if self.kind is Kind.SHUFFLE_DECONCAT:
            return self.deconcat(w)
        return self.deshuffle(w)

    # -- linear extensions -----------------------------------------------------

    def product(self, a: Elem, b: Elem) -> Elem:
        self._check(a), self._check(b)
        acc: dict[Word, Fraction] = {}
        for u, c in a.items():
            for v, d in b.items():
                for w, e in self.mul_words(u, v).items():
                    acc[w] = acc.get(w, 0) + c * d * e
        return Elem._raw(self.alphabet, acc)

    def product_all(self, factors) -> Elem:
        """Iterated product of a sequence of words or elements, left to right."""
        out = self.unit(1)
        for f in factors:
            out = self.product(out, self.elem(f))
        return out

    def coproduct(self, a: Elem) -> TensorElem:
        self._check(a)
        acc: dict[tuple, Fraction] = {}
        for w, c in a.items():
            for k, d in self.comul_word(w).items():
                acc[k] = acc.get(k, 0) + c * d
        return TensorElem._raw(self.alphabet, acc, 2)

    def iterated_coproduct(self, a: Elem, arity: int) -> TensorElem:
        """``Δ^(arity-1)``: split into ``arity`` tensor factors (coassociative)."""
        if arity < 1:
            raise ValueError("arity must be >= 1")
        self._check(a)
        t = TensorElem._raw(self.alphabet, {(w,): c for w, c in a.items()}, 1)
        for _ in range(arity - 1):
            t = t.map_factor(t.arity - 1, self.comul_word)
        return t

    def tensor_product(self, s: TensorElem, t: TensorElem) -> TensorElem:
        """Factorwise product on ``A^{⊗k}``: ``(a⊗b)(c⊗d) = ac ⊗ bd``."""
        self._check(s), self._check(t)
        if s.arity != t.arity:
            raise ValueError(f"arity {s.arity} vs {t.arity}")
        acc: dict[tuple, Fraction] = {}
        for k1, c in s.items():
            for k2, d in t.items():
                partial = {(): c * d}
                for u, v in zip(k1, k2):
                    prods = self.mul_words(u, v).items()
                    partial = {key + (w,): x * e for key, x in partial.items() for w, e in prods}
                for key, x in partial.items():
                    acc[key] = acc.get(key, 0) + x
        return TensorElem._raw(self.alphabet, acc, s.arity)

    def antipode(self, a: Elem) -> Elem:
        self._check(a)
        return Elem._raw(self.alphabet, {w[::-1]: c * (-1) ** len(w) for w, c in a.items()})

    def counit(self, a: Elem) -> Fraction:
        return a.terms.get("", Fraction(0))

    def unit(self, c=1) -> Elem:
        return Elem._raw(self.alphabet, {"": as_rational(c)})


def counit(a: Elem) -> Fraction:
    return a.terms.get("", Fraction(0))


def unit(alphabet: Alphabet, c=1) -> Elem:
    return Elem._raw(alphabet, {"": as_rational(c)})
