"""Riffle shuffles as Hopf powers: exact spectra and mixing by repeated squaring.

Run with ``python demos/riffle_spectra.py``.
"""
import numpy as np

from hopfcoherence import HopfStructure, hopf_power, riffle_chain, spectrum_exact, stationary_by_squaring
from hopfcoherence.markov import repeated_square, riffle_expected_spectrum

H = HopfStructure.shuffle_deconcat("abc")

# Ψ² of a three-card deck, before normalization by 2^3.
print("Ψ²(abc) =", hopf_power(2, H, "abc"))

# One GSR 2-shuffle on three cards, as an exact transition matrix.
chain = riffle_chain(3, 2)
for s, row in zip(chain.states, chain.P):
    print(s, " ".join(f"{str(p):>4}" for p in row))

for n in (2, 3, 4):
    spec = spectrum_exact(riffle_chain(n, 2))
    shown = ", ".join(f"{v}×{m}" for v, m in sorted(spec.eigenvalues.items(), reverse=True))
    print(f"n={n}: {shown}  (expected {spec.eigenvalues == riffle_expected_spectrum(n, 2)})")

# Squaring P k times is 2^k shuffles; rows converge to the uniform distribution.
for k in (1, 3, 6):
    P = repeated_square(chain, k).to_array()
    print(f"after {2 ** k:3d} shuffles, max |P - 1/6| = {np.max(np.abs(P - 1 / 6)):.2e}")
print("stationary:", stationary_by_squaring(chain))
