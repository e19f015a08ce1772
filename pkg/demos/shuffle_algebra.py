"""Shuffle and deshuffle Hopf algebras on words.

Run with ``python demos/shuffle_algebra.py``.
"""
from hopfcoherence import HopfStructure

sh = HopfStructure.shuffle_deconcat("ab")
cd = sh.dual()

# The shuffle product counts every order-preserving interleaving.
print("ab ⧢ ab =", sh.shuffle("ab", "ab"))
print("ab ⧢ ba =", sh.shuffle("ab", "ba"))

# Deconcatenation splits a word into prefix/suffix pairs,
# deshuffle splits it into complementary subwords.
print("Δ(aba), deconcat  =", sh.deconcat("aba"))
print("Δ(aba), deshuffle =", cd.deshuffle("aba"))

# On a single letter the shuffle algebra is the divided power algebra:
# x^i ⧢ x^j = C(i+j, i) x^(i+j).
x = HopfStructure.shuffle_deconcat("x")
for i, j in [(1, 1), (2, 1), (2, 2), (3, 2)]:
    print(f"x^{i} ⧢ x^{j} =", x.shuffle("x" * i, "x" * j))

# Applying Δ again on either factor gives the same triple tensor.
once = x.deconcat("xx")
print("(id⊗Δ)Δ(xx) =", once.map_factor(1, x.deconcat))
print("(Δ⊗id)Δ(xx) =", once.map_factor(0, x.deconcat))

# Elements serialize to a stable JSON form.
print(sh.shuffle("a", "b").to_json())
