import io
import json

import pytest

from hopfcoherence.cli import run


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def test_shuffle_golden():
    assert call("shuffle", "--alphabet", "ab", "--left", "ab", "--right", "ab") == (0, "4*aabb + 2*abab\n", "")


def test_coherence_golden():
    code, out, _ = call("coherence", "--alphabet", "ab", "--max-degree", "6")
    assert code == 0 and out == "PASS (127 basis words, max defect 0)\n"
    code, out, _ = call("coherence", "--alphabet", "ab", "--max-degree", "2", "--antipode", "identity")
    assert code == 0 and out.startswith("FAIL")


def test_riffle_spectrum_golden():
    code, out, _ = call("riffle", "--cards", "3", "--arity", "2", "--spectrum")
    assert code == 0
    assert out.splitlines()[0] == "eigenvalues: 1×1, 1/2×3, 1/4×2"


def test_json_outputs_are_schema_stable():
    _, out, _ = call("shuffle", "--alphabet", "ab", "--left", "ab", "--right", "ab", "--format", "json")
    assert json.loads(out) == {"alphabet": "ab", "terms": [{"word": "aabb", "coeff": "4"},
                                                           {"word": "abab", "coeff": "2"}]}
    _, out, _ = call("coherence", "--alphabet", "ab", "--max-degree", "3", "--format", "json")
    assert json.loads(out) == {"pass": True, "defects": []}
    _, out, _ = call("riffle", "--cards", "3", "--spectrum", "--format", "json")
    data = json.loads(out)
    assert data["eigenvalues"] == [{"value": "1", "multiplicity": 1}, {"value": "1/2", "multiplicity": 3},
                                   {"value": "1/4", "multiplicity": 2}]
    assert data["stationary"] == ["1/6"] * 6


def test_other_commands():
    assert call("coproduct", "--alphabet", "x", "--word", "xx")[1] == "e⊗xx + x⊗x + xx⊗e\n"
    assert call("coproduct", "--alphabet", "ab", "--word", "ab", "--mode", "deshuffle")[1] == \
        "e⊗ab + a⊗b + b⊗a + ab⊗e\n"
    assert call("antipode", "--alphabet", "ab", "--word", "aab")[1] == "-baa\n"
    assert call("antipode", "--alphabet", "ab", "--word", "aab", "--solve")[1] == "-baa\n"
    assert call("antipode", "--alphabet", "ab", "--word", "")[1] == "e\n"
    assert call("power", "--alphabet", "ab", "--word", "ab", "--power", "2")[1] == "3*ab + ba\n"
    assert call("psd", "--matrix", "2,1;1,2")[1] == "symmetry defect 0; eigenvalues 1 3; copying\n"


@pytest.mark.parametrize("argv", [
    ("shuffle", "--alphabet", "ab", "--left", "ac", "--right", "b"),
    ("riffle", "--cards", "9"),
    ("shuffle", "--alphabet", "ab", "--left", "aaaaa", "--right", "bbbb", "--max-degree", "8"),
    ("spectrum", "--input", "/nonexistent.json"),
])
def test_domain_errors_exit_1(argv):
    code, out, err = call(*argv)
    assert code == 1 and out == ""
    assert err.startswith("error: ") and err.count("\n") == 1 and "Traceback" not in err


@pytest.mark.parametrize("argv", [(), ("shuffle", "--bogus"), ("riffle", "--cards", "x"), ("nope",)])
def test_usage_errors_exit_2(argv, capsys):
    assert call(*argv)[0] == 2


def test_determinism():
    argv = ("riffle", "--cards", "4", "--format", "json")
    assert call(*argv) == call(*argv)


def roundtrip(tmp_path, produce, consume):
    code, out, _ = call(*produce, "--format", "json")
    assert code == 0
    path = tmp_path / "artifact.json"
    path.write_text(out, encoding="utf-8")
    code, again, err = call(*consume, "--input", str(path), "--format", "json")
    assert code == 0, err
    assert again == out


def test_roundtrip_elem(tmp_path):
    roundtrip(tmp_path, ("shuffle", "--alphabet", "ab", "--left", "ab", "--right", "ba"), ("shuffle",))


def test_roundtrip_tensor(tmp_path):
    roundtrip(tmp_path, ("coproduct", "--alphabet", "ab", "--word", "aba", "--mode", "deshuffle"),
              ("coproduct",))


def test_roundtrip_chain_and_spectrum(tmp_path):
    roundtrip(tmp_path, ("riffle", "--cards", "3"), ("riffle",))
    roundtrip(tmp_path, ("riffle", "--cards", "3", "--spectrum"), ("spectrum",))


def test_roundtrip_coherence(tmp_path):
    roundtrip(tmp_path, ("coherence", "--alphabet", "ab", "--max-degree", "2", "--antipode", "identity"),
              ("coherence",))


def test_roundtrip_psd(tmp_path):
    roundtrip(tmp_path, ("psd", "--matrix", "1,5;0,2"), ("psd",))


def test_input_feeds_operations(tmp_path):
    _, out, _ = call("riffle", "--cards", "3", "--format", "json")
    path = tmp_path / "chain.json"
    path.write_text(out, encoding="utf-8")
    assert call("spectrum", "--input", str(path))[1].startswith("eigenvalues: 1×1, 1/2×3, 1/4×2")
    _, out, _ = call("shuffle", "--alphabet", "ab", "--left", "a", "--right", "b", "--format", "json")
    path.write_text(out, encoding="utf-8")
    assert call("antipode", "--input", str(path))[1] == "ab + ba\n"


def test_train_bigram_and_checkpoint(tmp_path):
    corpus = tmp_path / "cycle.txt"
    corpus.write_text("abc" * 20 + "\n", encoding="utf-8")
    ckpt = tmp_path / "model.json"
    code, out, err = call("train", "--corpus", str(corpus), "--alphabet", "abc", "--epochs", "5",
                          "--dim", "4", "--out", str(ckpt), "--format", "json")
    assert code == 0, err
    log = [json.loads(line) for line in out.splitlines()]
    assert [r["epoch"] for r in log] == list(range(6))
    first = ckpt.read_text(encoding="utf-8")
    code, echoed, _ = call("train", "--input", str(ckpt), "--epochs", "0", "--format", "json")
    assert code == 0 and echoed == first
    code, out, _ = call("bigram", "--corpus", str(corpus), "--alphabet", "abc", "--format", "json")
    assert json.loads(out)["P"][0] == ["0", "1", "0"]
    code, out, _ = call("psd", "--input", str(ckpt))
    assert code == 0 and out.startswith("head 0 OV:")
