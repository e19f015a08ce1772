"""Recovering the antipode from the identity and checking m(id⊗S)Δ = uε.

Run with ``python demos/antipode_and_coherence.py``.
"""
from hopfcoherence import (HopfStructure, LinMap, antipode_solve, coherence_check, conv_unit,
                           convolve, diagram_paths)

H = HopfStructure.shuffle_deconcat("ab", 6)

# Solve for S degree by degree and compare with (-1)^|w| reverse(w).
S = antipode_solve(H, 6)
for w in ["a", "ab", "aab", "abba"]:
    print(f"S({w}) = {S(w)}")
print("matches closed form to degree 6:", S.equals(LinMap.closed_antipode(H, 6)))

# S is the two-sided convolution inverse of the identity.
ident = LinMap.identity(H, 6)
print("S * id = uε:", convolve(S, ident).equals(conv_unit(H, 6)))
print("id * S = uε:", convolve(ident, S).equals(conv_unit(H, 6)))

# Coherence over every basis word up to degree 6.
print(coherence_check(H, S, 6).summary())

# A wrong candidate shows where coherence first breaks.
bad = coherence_check(H, ident, 3)
print(bad.summary())
print("defect on 'a':", bad.per_word_defect["a"])

# The three paths around the diagram for one word.
top, bottom, middle = diagram_paths(H, S, "aba")
print("paths on aba:", top, "|", bottom, "|", middle)

# The same machinery works for the dual structure.
cd = H.dual()
print(coherence_check(cd, antipode_solve(cd, 5), 5).summary())
