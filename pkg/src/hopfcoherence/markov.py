"""Hopf-power maps and the riffle-shuffle Markov chains they induce.

``Ψ^a = m^(a-1) ∘ Δ^(a-1)``. On the shuffle/deconcatenation structure,
``Ψ^a(w) / a^|w|`` for a word of distinct letters is the distribution of the
Gilbert-Shannon-Reeds a-shuffle applied to the deck ``w``: cut into ``a``
packets (the iterated deconcatenation), then riffle them together (the
iterated shuffle).

Spectra are computed exactly: characteristic polynomial by Hessenberg
reduction over the rationals, eigenvalues by exhaustive rational-root search.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from math import lcm
from typing import Sequence

import numpy as np

from .errors import BadArtifact, DeckTooLarge, NoConvergence, NotStochastic
from .structures import HopfStructure, Kind
from .words import Alphabet, Elem, Word, as_rational, format_rational

MAX_DECK = 6
DECK_LETTERS = "abcdef"


def hopf_power(a: int, structure: HopfStructure, w: Word | Elem) -> Elem:
    """``Ψ^a`` applied to a word or element."""
    if a < 1:
        raise ValueError("power must be >= 1")
    x = structure.elem(w)
    if a == 1:
        return x
    split = structure.iterated_coproduct(x, a)
    cache: dict[tuple, Elem] = {}

    def multiply(*words):
        if words not in cache:
            cache[words] = structure.product_all(words)
        return cache[words]

    return split.contract(multiply)


def _matrix(rows) -> tuple[tuple[Fraction, ...], ...]:
    return tuple(tuple(as_rational(x) for x in row) for row in rows)


@dataclass(frozen=True)
class MarkovChain:
    """Exact row-stochastic matrix over an explicit list of states."""

    states: tuple[str, ...]
    P: tuple[tuple[Fraction, ...], ...]
    arity: int | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        P = _matrix(self.P)
        object.__setattr__(self, "P", P)
        n = len(self.states)
        if len(P) != n or any(len(row) != n for row in P):
            raise NotStochastic(f"matrix shape does not match {n} states")
        for i, row in enumerate(P):
            if any(x < 0 for x in row):
                raise NotStochastic(f"negative entry in row {i}")
            if sum(row) != 1:
                raise NotStochastic(f"row {i} sums to {sum(row)}")

    def __len__(self) -> int:
        return len(self.states)

    def is_doubly_stochastic(self) -> bool:
        return all(sum(col) == 1 for col in zip(*self.P))

    def trace(self) -> Fraction:
        return sum((self.P[i][i] for i in range(len(self))), Fraction(0))

    def to_array(self) -> np.ndarray:
        return np.array([[float(x) for x in row] for row in self.P])

    def entry(self, src: str, dst: str) -> Fraction:
        return self.P[self.states.index(src)][self.states.index(dst)]

    def to_json(self) -> dict:
        return {"states": list(self.states),
                "P": [[format_rational(x) for x in row] for row in self.P]}

    @classmethod
    def from_json(cls, data) -> MarkovChain:
        if isinstance(data, str):
            data = json.loads(data)
        try:
            return cls(tuple(data["states"]), data["P"])
        except (KeyError, TypeError, ValueError) as exc:
            raise BadArtifact(f"not a Markov chain: {exc}") from None


def riffle_chain(n: int, a: int) -> MarkovChain:
    """The GSR a-shuffle on a deck of ``n`` distinct cards, built from ``Ψ^a``."""
    if n > MAX_DECK:
        raise DeckTooLarge(f"deck of {n} cards exceeds cap {MAX_DECK}")
    if n < 1:
        raise ValueError("deck must have at least one card")
    if a < 1:
        raise ValueError("arity must be >= 1")
    letters = DECK_LETTERS[:n]
    H = HopfStructure(Kind.SHUFFLE_DECONCAT, Alphabet(letters), max(n, 1))
    states = tuple("".join(p) for p in permutations(letters))
    index = {s: i for i, s in enumerate(states)}
    scale = Fraction(1, a ** n)
    rows = []
    for s in states:
        row = [Fraction(0)] * len(states)
        for w, c in hopf_power(a, H, s).items():
            row[index[w]] = c * scale
        rows.append(row)
    return MarkovChain(states, rows, arity=a)


# -- exact linear algebra ---------------------------------------------------------


def matmul(A: Sequence[Sequence[Fraction]], B: Sequence[Sequence[Fraction]]) -> list[list[Fraction]]:
    Bt = list(zip(*B))
    return [[sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in Bt] for row in A]


def charpoly(M: Sequence[Sequence]) -> list[Fraction]:
    """Coefficients (constant term first) of ``det(xI - M)``, exactly.

    Reduces to upper Hessenberg form by rational similarity transforms, then
    expands the determinant with the standard three-term recurrence.
    """
    H = [[as_rational(x) for x in row] for row in M]
    n = len(H)
    for m in range(1, n - 1):
        piv = next((i for i in range(m, n) if H[i][m - 1] != 0), None)
        if piv is None:
            continue
        if piv != m:
            H[piv], H[m] = H[m], H[piv]
            for row in H:
                row[piv], row[m] = row[m], row[piv]
        inv = 1 / H[m][m - 1]
        for i in range(m + 1, n):
            u = H[i][m - 1] * inv
            if u == 0:
                continue
            ri, rm = H[i], H[m]
            for j in range(m - 1, n):
                ri[j] -= u * rm[j]
            for row in H:
                row[m] += u * row[i]
    # p[k] = char poly of leading k x k block
    p: list[list[Fraction]] = [[Fraction(1)]]
    for k in range(1, n + 1):
        prev = p[k - 1]
        cur = [Fraction(0)] + prev  # x * p_{k-1}
        h = H[k - 1][k - 1]
        for i, c in enumerate(prev):
            cur[i] -= h * c
        t = Fraction(1)
        for i in range(k - 1, 0, -1):
            t *= H[i][i - 1]
            if t == 0:
                break
            coef = t * H[i - 1][k - 1]
            for j, c in enumerate(p[i - 1]):
                cur[j] -= coef * c
        p.append(cur)
    return p[n]


def poly_eval(coeffs: Sequence[Fraction], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def poly_divide_root(coeffs: Sequence[Fraction], r: Fraction) -> tuple[list[Fraction], Fraction]:
    """Synthetic division by ``(x - r)``; returns (quotient, remainder)."""
    n = len(coeffs) - 1
    q = [Fraction(0)] * n
    carry = Fraction(0)
    for k in range(n, 0, -1):
        carry = coeffs[k] + carry * r
        q[k - 1] = carry
    return q, coeffs[0] + carry * r


def solve_exact(A: Sequence[Sequence[Fraction]], b: Sequence[Fraction]) -> list[Fraction]:
    """Gauss-Jordan elimination over the rationals; ``A`` must be nonsingular."""
    n = len(A)
    M = [[as_rational(x) for x in row] + [as_rational(y)] for row, y in zip(A, b)]
    for col in range(n):
        piv = next((i for i in range(col, n) if M[i][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular system")
        M[col], M[piv] = M[piv], M[col]
        inv = 1 / M[col][col]
        M[col] = [x * inv for x in M[col]]
        for i in range(n):
            if i != col and M[i][col] != 0:
                f = M[i][col]
                M[i] = [x - f * y for x, y in zip(M[i], M[col])]
    return [row[n] for row in M]


def stationary_exact(chain: MarkovChain) -> list[Fraction]:
    """Solve ``πP = π`` with ``Σπ = 1`` (unique for irreducible chains)."""
    n = len(chain)
    A = [[chain.P[j][i] - (1 if i == j else 0) for j in range(n)] for i in range(n)]
    A[-1] = [Fraction(1)] * n
    b = [Fraction(0)] * (n - 1) + [Fraction(1)]
    return solve_exact(A, b)


# -- spectra ------------------------------------------------------------------


@dataclass(frozen=True)
class Spectrum:
    eigenvalues: dict[Fraction, int]
    characteristic_polynomial: tuple[Fraction, ...]
    stationary: tuple[Fraction, ...] | None
    residual: tuple[Fraction, ...] = (Fraction(1),)

    @property
    def complete(self) -> bool:
        """True when every root of the characteristic polynomial is rational."""
        return len(self.residual) == 1

    def to_json(self) -> dict:
        out = {
            "eigenvalues": [{"value": format_rational(v), "multiplicity": m}
                            for v, m in self.eigenvalues.items()],
            "stationary": (None if self.stationary is None
                           else [format_rational(x) for x in self.stationary]),
        }
        if not self.complete:
            out["residual"] = [format_rational(c) for c in self.residual]
        return out

    @classmethod
    def from_json(cls, data) -> Spectrum:
        if isinstance(data, str):
            data = json.loads(data)
        try:
            eig = {Fraction(e["value"]): int(e["multiplicity"]) for e in data["eigenvalues"]}
            st = data["stationary"]
            stationary = None if st is None else tuple(Fraction(x) for x in st)
            residual = tuple(Fraction(c) for c in data.get("residual", ["1"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise BadArtifact(f"not a spectrum: {exc}") from None
        # rebuild the characteristic polynomial from the roots and residual
        poly = list(residual)
        for v, m in eig.items():
            for _ in range(m):
                poly = [(poly[i - 1] if i > 0 else 0) - v * (poly[i] if i < len(poly) else 0)
                        for i in range(len(poly) + 1)]
        return cls(eig, tuple(Fraction(c) for c in poly), stationary, residual)


ROOT_SEARCH_LIMIT = 10 ** 7


def spectrum_exact(chain: MarkovChain) -> Spectrum:
    """Exact characteristic polynomial, rational eigenvalues and stationary vector.

    With ``D`` the common denominator of the entries, ``D·P`` is an integer
    matrix whose characteristic polynomial is monic with integer
    coefficients, so every rational eigenvalue of ``P`` is ``m/D`` for an
    integer ``m`` dividing the lowest nonzero coefficient. Since a
    stochastic matrix has spectral radius 1, ``|m| <= D`` as well; searching
    those candidates finds every rational eigenvalue (the search is skipped
    when ``D`` exceeds ``ROOT_SEARCH_LIMIT``). Anything left over is returned
    in ``Spectrum.residual``.
    """
    n = len(chain)
    D = lcm(*(x.denominator for row in chain.P for x in row))
    scaled = [[x * D for x in row] for row in chain.P]
    q = charpoly(scaled)  # integer coefficients
    # det(xI - P) = D^-n det(D x I - D P)
    poly = [c * Fraction(D) ** (k - n) for k, c in enumerate(q)]

    eig: dict[Fraction, int] = {}
    rest = list(q)
    zeros = 0
    while len(rest) > 1 and rest[0] == 0:
        rest = rest[1:]
        zeros += 1
    if zeros:
        eig[Fraction(0)] = zeros
    if len(rest) > 1:
        low = int(rest[0])
        cands = [d for d in range(1, D + 1) if low % d == 0] if D <= ROOT_SEARCH_LIMIT else []
        for m in sorted({s * d for d in cands for s in (1, -1)}, reverse=True):
            r = Fraction(m)
            while len(rest) > 1:
                quot, rem = poly_divide_root(rest, r)
                if rem != 0:
                    break
                rest = quot
                eig[r / D] = eig.get(r / D, 0) + 1
    residual = [c * Fraction(D) ** (k - len(rest) + 1) for k, c in enumerate(rest)]
    try:
        stationary = tuple(stationary_exact(chain))
    except ZeroDivisionError:
        stationary = None
    ordered = dict(sorted(eig.items(), key=lambda t: -t[0]))
    return Spectrum(ordered, tuple(poly), stationary, tuple(residual))


def stirling_cycle(n: int, k: int) -> int:
    """Unsigned Stirling number of the first kind: permutations of n with k cycles."""
    table = [[0] * (n + 1) for _ in range(n + 1)]
    table[0][0] = 1
    for i in range(1, n + 1):
        for j in range(1, i + 1):
            table[i][j] = table[i - 1][j - 1] + (i - 1) * table[i - 1][j]
    return table[n][k] if 0 <= k <= n else 0


def riffle_expected_spectrum(n: int, a: int) -> dict[Fraction, int]:
    """``a^-i`` with multiplicity ``c(n, n-i)`` for ``i = 0..n-1``."""
    return {Fraction(1, a ** i): stirling_cycle(n, n - i) for i in range(n)}


# -- repeated squaring --------------------------------------------------------------


def repeated_square(chain: MarkovChain, k: int) -> MarkovChain:
    """The chain with matrix ``P^(2^k)``, by ``k`` exact squarings."""
    if k < 0:
        raise ValueError("k must be >= 0")
    P = [list(row) for row in chain.P]
    for _ in range(k):
        P = matmul(P, P)
    return MarkovChain(chain.states, P, arity=chain.arity)


def stationary_by_squaring(chain: MarkovChain | np.ndarray, tolerance: float = 1e-12,
                           max_squarings: int = 64) -> np.ndarray:
    """Dominant left eigenvector by squaring ``P`` until all rows agree.

    Stops once the column-wise spread between rows and the change of the row
    maxima since the previous squaring are both below ``tolerance``. A
    periodic or reducible chain never reaches a common row and raises
    :class:`NoConvergence` after ``max_squarings`` squarings.
    """
    P = chain.to_array() if isinstance(chain, MarkovChain) else np.asarray(chain, dtype=float)
    prev_max = P.max(axis=1)
    for _ in range(max_squarings):
        P = P @ P
        row_max = P.max(axis=1)
        spread = float(np.max(P.max(axis=0) - P.min(axis=0)))
        change = float(np.max(np.abs(row_max - prev_max)))
        if spread < tolerance and change < tolerance:
            return P[0].copy()
        prev_max = row_max
    raise NoConvergence(f"rows still disagree after {max_squarings} squarings")


def squarings_to_converge(chain: MarkovChain, tolerance: float = 1e-12, max_squarings: int = 64) -> int:
    """Number of squarings :func:`stationary_by_squaring` needs."""
    for k in range(1, max_squarings + 1):
        try:
            stationary_by_squaring(chain, tolerance, k)
        except NoConvergence:
            continue
        return k
    raise NoConvergence(f"rows still disagree after {max_squarings} squarings")
