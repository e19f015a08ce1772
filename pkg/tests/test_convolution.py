import random
from fractions import Fraction

import pytest

from hopfcoherence import (CoherenceReport, Elem, HopfStructure, LinMap, StructureMismatch,
                           antipode_solve, coherence_check, conv_unit, convolve, diagram_paths,
                           linmap_apply)
from hopfcoherence.errors import DegreeCapExceeded


@pytest.fixture(params=["shuffle", "concat"])
def H(request):
    if request.param == "shuffle":
        return HopfStructure.shuffle_deconcat("ab", 6)
    return HopfStructure.concat_deshuffle("ab", 6)


def random_graded_map(H, d, seed, name="r"):
    rng = random.Random(seed)

    def image(w):
        if not w:
            return H.elem({"": rng.randint(-2, 2)})
        same = list(H.alphabet.words(len(w), len(w)))
        picks = rng.sample(same, min(3, len(same)))
        return H.elem({v: Fraction(rng.randint(-3, 3), rng.randint(1, 2)) for v in picks})

    return LinMap.from_function(H, image, d, name)


def test_apply(H):
    ident = LinMap.identity(H, 4)
    x = H.elem({"aabb": 4, "abab": 2})
    assert linmap_apply(ident, x) == x
    assert linmap_apply(conv_unit(H, 4), H.elem({"": 3, "ab": 1})) == H.elem({"": 3})
    assert LinMap.closed_antipode(H, 4)("ab") == H.elem("ba")
    with pytest.raises(DegreeCapExceeded):
        linmap_apply(ident, H.elem("aaaaa"))


def test_unit_impulse_is_identity_for_convolution(H):
    ident = LinMap.identity(H, 6)
    assert convolve(conv_unit(H, 6), ident).equals(ident)
    S = LinMap.closed_antipode(H, 5)
    assert convolve(S, conv_unit(H, 5)).equals(S)
    assert convolve(conv_unit(H, 5), S).equals(S)
    assert conv_unit(H, 3)("") == H.elem("")
    assert conv_unit(H, 3)("ab").is_zero()


def test_id_conv_s_kills_letters(H):
    ident, S = LinMap.identity(H, 3), LinMap.closed_antipode(H, 3)
    assert convolve(ident, S)("a").is_zero()


def test_id_conv_id_on_ab():
    # m(id⊗id)Δ(ab) = ab⧢e + a⧢b + e⧢ab = ab + (ab + ba) + ab
    H = HopfStructure.shuffle_deconcat("ab", 4)
    ident = LinMap.identity(H, 4)
    assert convolve(ident, ident)("ab") == H.elem({"ab": 3, "ba": 1})


def test_convolution_associative(H):
    f, g, h = (random_graded_map(H, 4, s, n) for s, n in ((1, "f"), (2, "g"), (3, "h")))
    assert convolve(convolve(f, g), h).equals(convolve(f, convolve(g, h)))


def test_two_sided_unit_on_random_maps(H):
    f = random_graded_map(H, 5, 7)
    u = conv_unit(H, 5)
    assert convolve(u, f).equals(f) and convolve(f, u).equals(f)


def test_structure_mismatch():
    a = LinMap.identity(HopfStructure.shuffle_deconcat("ab", 4), 3)
    b = LinMap.identity(HopfStructure.concat_deshuffle("ab", 4), 3)
    with pytest.raises(StructureMismatch):
        convolve(a, b)


def test_antipode_solve_matches_closed_form(H):
    S = antipode_solve(H, 6)
    assert S.equals(LinMap.closed_antipode(H, 6))
    assert S("") == H.elem("")
    assert S("a") == -H.elem("a")


def test_antipode_is_convolution_inverse(H):
    S, ident, u = antipode_solve(H, 5), LinMap.identity(H, 5), conv_unit(H, 5)
    assert convolve(S, ident).equals(u) and convolve(ident, S).equals(u)


def test_coherence_pass(H):
    report = coherence_check(H, LinMap.closed_antipode(H, 6), 6)
    assert report.passed and report.checked == 127 and report.max_defect_degree is None
    assert coherence_check(H, LinMap.closed_antipode(H, 0), 0).passed


def test_coherence_wrong_antipode():
    H = HopfStructure.shuffle_deconcat("ab", 6)
    report = coherence_check(H, LinMap.identity(H, 2), 2)
    assert not report.passed
    assert report.min_defect_degree == 1
    assert report.per_word_defect["a"] == H.elem({"a": 2})
    assert report.per_word_defect[""].is_zero()
    assert report.to_json()["defects"][0]["word"] == "a"


def test_antipode_uniqueness(H):
    """Perturbing the true antipode on any single word breaks coherence at that degree."""
    S = antipode_solve(H, 4)
    rng = random.Random(0)
    for w in rng.sample(list(H.basis(4)), 8):
        images = dict(S.images)
        images[w] = images[w] + H.elem({w[::-1]: 1})
        bad = LinMap(H, images, 4, "S'")
        report = coherence_check(H, bad, 4)
        assert not report.passed and report.min_defect_degree == len(w)


def test_diagram_paths_agree(H):
    S = antipode_solve(H, 5)
    for w in H.basis(5):
        top, bottom, middle = diagram_paths(H, S, w)
        assert top == bottom == middle


def test_report_json_roundtrip():
    H = HopfStructure.shuffle_deconcat("ab", 4)
    report = coherence_check(H, LinMap.identity(H, 2), 2)
    data = report.to_json()
    assert CoherenceReport.from_json(data).to_json() == data
    assert coherence_check(H, LinMap.closed_antipode(H, 3), 3).to_json() == {"pass": True, "defects": []}


def test_graded_flag(H):
    assert LinMap.identity(H, 3).is_graded()
    assert not LinMap.from_function(H, lambda w: H.elem(""), 2).is_graded()
    assert Elem.zero(H.alphabet) == conv_unit(H, 2)("ab")
