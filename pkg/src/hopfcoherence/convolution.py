"""Convolution algebra of linear maps on a Hopf structure.

Maps are stored extensionally as tables ``word -> Elem`` on the whole basis
up to a degree cap. Convolution is ``f * g = m ∘ (f ⊗ g) ∘ Δ`` and its
two-sided identity is ``u ∘ ε`` (the unit impulse). The antipode is the
convolution inverse of the identity; :func:`coherence_check` verifies
``m(id ⊗ S)Δ = u ε`` word by word.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping

from .errors import BadArtifact, DegreeCapExceeded, StructureMismatch
from .structures import HopfStructure
from .words import Elem, Word, show_word


@dataclass(frozen=True, eq=False)
class LinMap:
    structure: HopfStructure
    images: Mapping[Word, Elem]
    max_degree: int
    name: str = "f"

    @classmethod
    def from_function(cls, structure: HopfStructure, fn: Callable[[Word], Elem],
                      max_degree: int | None = None, name: str = "f") -> LinMap:
        d = structure.max_degree if max_degree is None else max_degree
        if d > structure.max_degree:
            raise DegreeCapExceeded(d, structure.max_degree)
        return cls(structure, {w: fn(w) for w in structure.basis(d)}, d, name)

    @classmethod
    def identity(cls, structure: HopfStructure, max_degree: int | None = None) -> LinMap:
        return cls.from_function(structure, lambda w: Elem._raw(structure.alphabet, {w: Fraction(1)}),
                                 max_degree, "id")

    @classmethod
    def closed_antipode(cls, structure: HopfStructure, max_degree: int | None = None) -> LinMap:
        return cls.from_function(structure, structure.antipode_closed, max_degree, "S")

    def __call__(self, a: Elem | Word) -> Elem:
        if isinstance(a, str):
            a = self.structure.elem(a)
        return linmap_apply(self, a)

    def is_graded(self) -> bool:
        """True when every basis word maps into its own degree."""
        return all(all(len(v) == len(w) for v in img.terms) for w, img in self.images.items())

    def equals(self, other: LinMap, max_degree: int | None = None) -> bool:
        d = min(self.max_degree, other.max_degree) if max_degree is None else max_degree
        return all(self.images[w] == other.images[w] for w in self.structure.basis(d))

    def restrict(self, max_degree: int) -> LinMap:
        if max_degree > self.max_degree:
            raise DegreeCapExceeded(max_degree, self.max_degree)
        imgs = {w: img for w, img in self.images.items() if len(w) <= max_degree}
        return LinMap(self.structure, imgs, max_degree, self.name)


def linmap_apply(f: LinMap, a: Elem) -> Elem:
    f.structure._check(a)
    acc: dict[Word, Fraction] = {}
    for w, c in a.items():
        if len(w) > f.max_degree:
            raise DegreeCapExceeded(len(w), f.max_degree)
        for v, d in f.images[w].items():
            acc[v] = acc.get(v, 0) + c * d
    return Elem._raw(a.alphabet, acc)


def _same_structure(f: LinMap, g: LinMap):
    if f.structure != g.structure:
        raise StructureMismatch(f"{f.name} and {g.name} live on different structures")
    if f.max_degree != g.max_degree:
        raise StructureMismatch(f"{f.name} has cap {f.max_degree}, {g.name} has {g.max_degree}")


def convolve_word(f: LinMap, g: LinMap, w: Word) -> Elem:
    """``m((f ⊗ g)(Δ w))`` for a single basis word."""
    H = f.structure
    acc: dict[Word, Fraction] = {}
    for (left, right), c in H.comul_word(w).items():
        for v, d in H.product(f.images[left], g.images[right]).items():
            acc[v] = acc.get(v, 0) + c * d
    return Elem._raw(H.alphabet, acc)


def convolve(f: LinMap, g: LinMap) -> LinMap:
    _same_structure(f, g)
    images = {w: convolve_word(f, g, w) for w in f.structure.basis(f.max_degree)}
    return LinMap(f.structure, images, f.max_degree, f"({f.name}*{g.name})")


def conv_unit(structure: HopfStructure, max_degree: int | None = None) -> LinMap:
    zero = Elem.zero(structure.alphabet)
    one = structure.unit(1)
    return LinMap.from_function(structure, lambda w: zero if w else one, max_degree, "uε")


def antipode_solve(structure: HopfStructure, max_degree: int | None = None) -> LinMap:
    """Solve ``m(id ⊗ S)Δ = uε`` for ``S`` degree by degree.

    The split ``e ⊗ w`` of ``Δ(w)`` contributes ``S(w)`` itself and every
    other split pairs ``S`` with a strictly shorter word, so

        S(w) = -Σ_{(p, s) ≠ (e, w)} c · m(p, S(s)).
    """
    d = structure.max_degree if max_degree is None else max_degree
    if d > structure.max_degree:
        raise DegreeCapExceeded(d, structure.max_degree)
    A = structure.alphabet
    S: dict[Word, Elem] = {}
    for w in structure.basis(d):
        if not w:
            S[w] = structure.unit(1)
            continue
        acc: dict[Word, Fraction] = {}
        for (p, s), c in structure.comul_word(w).items():
            if p == "":
                assert s == w and c == 1, "graded connectedness violated"
                continue
            for v, e in structure.product(Elem._raw(A, {p: Fraction(1)}), S[s]).items():
                acc[v] = acc.get(v, 0) - c * e
        S[w] = Elem._raw(A, acc)
    return LinMap(structure, S, d, "S")


@dataclass(frozen=True)
class CoherenceReport:
    per_word_defect: Mapping[Word, Elem]
    passed: bool
    max_defect_degree: int | None = None
    checked: int = field(default=0)

    @property
    def defects(self) -> dict[Word, Elem]:
        return {w: r for w, r in self.per_word_defect.items() if not r.is_zero()}

    @property
    def min_defect_degree(self) -> int | None:
        return min((len(w) for w in self.defects), default=None)

    def to_json(self) -> dict:
        return {
            "pass": self.passed,
            "defects": [{"word": w, "residual": r.to_json()} for w, r in self.defects.items()],
        }

    @classmethod
    def from_json(cls, data) -> CoherenceReport:
        if isinstance(data, str):
            data = json.loads(data)
        try:
            defects = {d["word"]: Elem.from_json(d["residual"]) for d in data["defects"]}
            passed = bool(data["pass"])
        except (KeyError, TypeError) as exc:
            raise BadArtifact(f"not a coherence report: {exc}") from None
        top = max((len(w) for w in defects), default=None)
        return cls(defects, passed, top, len(defects))

    def summary(self) -> str:
        if self.passed:
            return f"PASS ({self.checked} basis words, max defect 0)"
        bad = self.defects
        worst = ", ".join(f"{show_word(w)}: {r}" for w, r in list(bad.items())[:3])
        return (f"FAIL ({self.checked} basis words, {len(bad)} defects, "
                f"lowest defect degree {self.min_defect_degree}; {worst})")


def coherence_check(structure: HopfStructure, S: LinMap, max_degree: int) -> CoherenceReport:
    """Evaluate ``m(id ⊗ S)Δ(w) - uε(w)`` on every basis word up to ``max_degree``."""
    if max_degree > S.max_degree:
        raise DegreeCapExceeded(max_degree, S.max_degree)
    if S.structure != structure:
        raise StructureMismatch("antipode candidate lives on a different structure")
    A = structure.alphabet
    residuals: dict[Word, Elem] = {}
    for w in structure.basis(max_degree):
        acc: dict[Word, Fraction] = {}
        for (p, s), c in structure.comul_word(w).items():
            for v, e in structure.product(Elem._raw(A, {p: Fraction(1)}), S.images[s]).items():
                acc[v] = acc.get(v, 0) + c * e
        if not w:
            acc[""] = acc.get("", 0) - 1
        residuals[w] = Elem._raw(A, acc)
    bad = [len(w) for w, r in residuals.items() if not r.is_zero()]
    return CoherenceReport(residuals, not bad, max(bad, default=None), len(residuals))


def diagram_paths(structure: HopfStructure, S: LinMap, w: Word) -> tuple[Elem, Elem, Elem]:
    """The three routes around the antipode square, evaluated at ``w``.

    Returns ``(m(S⊗id)Δ w, m(id⊗S)Δ w, u ε w)``.
    """
    ident = LinMap.identity(structure, S.max_degree)
    top = convolve_word(S, ident, w)
    bottom = convolve_word(ident, S, w)
    middle = structure.unit(1) if not w else Elem.zero(structure.alphabet)
    return top, bottom, middle
