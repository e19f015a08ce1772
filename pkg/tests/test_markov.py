from fractions import Fraction
from itertools import permutations

import numpy as np
import pytest
import sympy

from conftest import gsr_row
from hopfcoherence import (DeckTooLarge, HopfStructure, MarkovChain, NoConvergence, Spectrum,
                           hopf_power, repeated_square, riffle_chain, spectrum_exact,
                           stationary_by_squaring)
from hopfcoherence.markov import (charpoly, matmul, riffle_expected_spectrum, squarings_to_converge,
                                  stirling_cycle)


def cycle_count(p):
    seen, cycles = set(), 0
    for i in range(len(p)):
        if i not in seen:
            cycles += 1
            j = i
            while j not in seen:
                seen.add(j)
                j = p[j]
    return cycles


def test_psi_one_is_identity(sh):
    for w in ["", "a", "abba"]:
        assert hopf_power(1, sh, w) == sh.elem(w)


def test_psi_two_on_one_letter_words():
    H = HopfStructure.shuffle_deconcat("a", 10)
    for n in range(11):
        assert hopf_power(2, H, "a" * n) == H.elem({"a" * n: 2 ** n})


@pytest.mark.parametrize("a,b", [(2, 2), (2, 3), (3, 2), (3, 3)])
def test_power_rule(a, b):
    H = HopfStructure.shuffle_deconcat("ab", 10)
    for w in H.basis(5 if a * b <= 6 else 4):
        assert hopf_power(a, H, hopf_power(b, H, w)) == hopf_power(a * b, H, w)


def test_mass_conservation():
    H = HopfStructure.shuffle_deconcat("abcd", 8)
    for a in (2, 3):
        for w in ["", "a", "ab", "cab", "dcab"]:
            assert sum(hopf_power(a, H, w).terms.values()) == a ** len(w)


def test_riffle_small_chains():
    assert riffle_chain(2, 2).P == ((Fraction(3, 4), Fraction(1, 4)), (Fraction(1, 4), Fraction(3, 4)))
    assert riffle_chain(3, 2).entry("abc", "abc") == Fraction(1, 2)
    c = riffle_chain(4, 2)
    assert all(sum(row) == 1 for row in c.P) and c.is_doubly_stochastic()


@pytest.mark.parametrize("n,a", [(2, 2), (3, 2), (3, 3), (4, 2), (4, 3)])
def test_riffle_matches_gsr_enumeration(n, a):
    chain = riffle_chain(n, a)
    for i, s in enumerate(chain.states):
        row = gsr_row(s, a)
        assert {t: chain.P[i][j] for j, t in enumerate(chain.states) if chain.P[i][j]} == row


def test_chain_algebra_agreement():
    chain = riffle_chain(3, 3)
    H = HopfStructure.shuffle_deconcat("abc")
    for i, s in enumerate(chain.states):
        psi = hopf_power(3, H, s)
        assert {t: chain.P[i][j] for j, t in enumerate(chain.states) if chain.P[i][j]} == \
            {w: c / 27 for w, c in psi.terms.items()}


def test_deck_cap():
    with pytest.raises(DeckTooLarge):
        riffle_chain(7, 2)


def test_stirling_numbers_by_brute_force():
    for n in range(1, 6):
        counts = {}
        for p in permutations(range(n)):
            k = cycle_count(p)
            counts[k] = counts.get(k, 0) + 1
        assert {k: stirling_cycle(n, k) for k in range(1, n + 1)} == counts


@pytest.mark.parametrize("seed", range(4))
def test_charpoly_against_sympy(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 7))
    M = [[Fraction(int(rng.integers(-5, 6)), int(rng.integers(1, 4))) for _ in range(n)] for _ in range(n)]
    x = sympy.Symbol("x")
    expected = sympy.Matrix(n, n, lambda i, j: sympy.Rational(M[i][j].numerator, M[i][j].denominator)).charpoly(x)
    coeffs = [Fraction(int(c.p), int(c.q)) for c in reversed(expected.all_coeffs())]
    assert charpoly(M) == coeffs


def test_charpoly_needs_pivoting():
    M = [[0, 1, 0], [0, 0, 1], [1, 0, 0]]
    assert charpoly(M) == [-1, 0, 0, 1]


@pytest.mark.parametrize("n", [2, 3, 4])
def test_riffle_spectrum(n):
    chain = riffle_chain(n, 2)
    spec = spectrum_exact(chain)
    x = sympy.Symbol("x")
    oracle = sympy.Matrix([[sympy.Rational(q.numerator, q.denominator) for q in row] for row in chain.P]).charpoly(x)
    assert list(spec.characteristic_polynomial) == [Fraction(int(c.p), int(c.q)) for c in reversed(oracle.all_coeffs())]
    assert spec.complete
    assert spec.eigenvalues == riffle_expected_spectrum(n, 2)
    assert sum(spec.eigenvalues.values()) == len(chain)
    assert sum(v * m for v, m in spec.eigenvalues.items()) == chain.trace()
    assert spec.stationary == tuple(Fraction(1, len(chain)) for _ in chain.states)


def test_spectrum_examples():
    assert spectrum_exact(riffle_chain(2, 2)).eigenvalues == {1: 1, Fraction(1, 2): 1}
    assert spectrum_exact(riffle_chain(3, 2)).eigenvalues == {1: 1, Fraction(1, 2): 3, Fraction(1, 4): 2}
    assert spectrum_exact(riffle_chain(3, 3)).eigenvalues == riffle_expected_spectrum(3, 3)


def test_spectrum_of_general_chain():
    chain = MarkovChain(("x", "y"), [[0, 1], [Fraction(1, 2), Fraction(1, 2)]])
    spec = spectrum_exact(chain)
    assert spec.eigenvalues == {1: 1, Fraction(-1, 2): 1}
    assert spec.stationary == (Fraction(1, 3), Fraction(2, 3))
    # x^3 - x^2/2 - 1/2 = (x - 1)(x^2 + x/2 + 1/2): the complex pair stays in the residual
    odd = MarkovChain(("x", "y", "z"), [[0, 1, 0], [0, 0, 1], [Fraction(1, 2), 0, Fraction(1, 2)]])
    spec = spectrum_exact(odd)
    assert spec.eigenvalues == {1: 1}
    assert not spec.complete and len(spec.residual) == 3


def test_spectrum_json_roundtrip():
    spec = spectrum_exact(riffle_chain(3, 2))
    again = Spectrum.from_json(spec.to_json())
    assert again.to_json() == spec.to_json()
    assert again.characteristic_polynomial == spec.characteristic_polynomial


def test_repeated_square_exact():
    c = riffle_chain(3, 2)
    assert repeated_square(c, 0) == c
    naive = [list(r) for r in c.P]
    for _ in range(3):
        naive = matmul(naive, naive)
    assert repeated_square(c, 3).P == tuple(tuple(r) for r in naive)


def test_two_state_closed_form():
    # P^m = Π + (1/2)^m (I - Π), Π = all 1/2
    c = riffle_chain(2, 2)
    for k in (1, 4, 10):
        m = 2 ** k
        off = Fraction(1, 2) - Fraction(1, 2) ** (m + 1)
        P = repeated_square(c, k).P
        assert P[0][1] == off and P[0][0] == 1 - off
    assert all(abs(x - Fraction(1, 2)) <= Fraction(1, 2 ** 10) for row in P for x in row)


def test_three_card_squaring_decay():
    P = repeated_square(riffle_chain(3, 2), 12).P
    assert max(abs(x - Fraction(1, 6)) for row in P for x in row) <= Fraction(1, 2 ** 40)


def test_stationary_by_squaring():
    pi = stationary_by_squaring(riffle_chain(3, 2), 1e-12)
    assert np.max(np.abs(pi - 1 / 6)) < 1e-12
    pi = stationary_by_squaring(riffle_chain(4, 2), 1e-10)
    assert pi.shape == (24,) and np.max(np.abs(pi - 1 / 24)) < 1e-10
    assert squarings_to_converge(riffle_chain(3, 2), 1e-12) <= 12


def test_stationary_agrees_with_exact():
    chain = MarkovChain(("x", "y"), [[Fraction(1, 3), Fraction(2, 3)], [Fraction(1, 2), Fraction(1, 2)]])
    exact = spectrum_exact(chain).stationary
    assert np.allclose(stationary_by_squaring(chain, 1e-13), [float(x) for x in exact], atol=1e-12)


@pytest.mark.parametrize("P", [[[1, 0], [0, 1]], [[0, 1], [1, 0]]])
def test_no_convergence(P):
    with pytest.raises(NoConvergence):
        stationary_by_squaring(MarkovChain(("x", "y"), P), 1e-12)


def test_chain_json_roundtrip():
    c = riffle_chain(3, 2)
    assert MarkovChain.from_json(c.to_json()) == c
    assert c.to_json()["P"][0][0] == "1/2"
