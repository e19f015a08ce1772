"""Command-line entry point.

Exit status: 0 on success, 1 on a domain error (one line on stderr), 2 on
a usage error. ``--format json`` output is canonical and byte-stable; every
JSON artifact can be fed back through ``--input``.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .convolution import CoherenceReport, LinMap, antipode_solve, coherence_check
from .errors import BadArtifact, HopfError
from .markov import MarkovChain, Spectrum, hopf_power, riffle_chain, spectrum_exact
from .structures import HopfStructure, Kind
from .transformer import (Corpus, PSDReport, ToyModel, bigram_fit, model_init, psd_check,
                          train)
from .words import DEFAULT_MAX_DEGREE, Alphabet, Elem, TensorElem, format_rational


def _dump(obj) -> str:
    return json.dumps(obj, ensure_ascii=False) + "\n"


def _read_input(path: str):
    try:
        text = Path(path).read_text(encoding="utf-8") if path != "-" else sys.stdin.read()
    except OSError as exc:
        raise BadArtifact(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise BadArtifact(f"{path} is not JSON: {exc.msg}") from None


def artifact_kind(data) -> str:
    if isinstance(data, list):
        return "matrix"
    if not isinstance(data, dict):
        return "unknown"
    if "states" in data and "P" in data:
        return "chain"
    if "eigenvalues" in data and "stationary" in data:
        return "spectrum"
    if "pass" in data and "defects" in data:
        return "coherence"
    if "W_E" in data:
        return "checkpoint"
    if "symmetryDefect" in data:
        return "psd"
    if "matrix" in data:
        return "matrix"
    if "terms" in data:
        terms = data["terms"]
        if terms and ("left" in terms[0] or "factors" in terms[0]):
            return "tensor"
        return "elem"
    return "unknown"


def _expect(data, *kinds):
    kind = artifact_kind(data)
    if kind not in kinds:
        raise BadArtifact(f"expected {' or '.join(kinds)} JSON, got {kind}")
    return kind


def _structure(args, degree_needed: int = 0) -> HopfStructure:
    kind = Kind.SHUFFLE_DECONCAT if args.mode == "deconcat" else Kind.CONCAT_DESHUFFLE
    cap = max(args.max_degree or DEFAULT_MAX_DEGREE, degree_needed)
    return HopfStructure(kind, Alphabet(args.alphabet), cap)


def _operand(args, flag: str = "word") -> tuple[HopfStructure, Elem]:
    if args.input:
        data = _read_input(args.input)
        _expect(data, "elem")
        x = Elem.from_json(data)
        args.alphabet = x.alphabet.letters
        H = _structure(args, max(x.degree(), 0))
        return H, x
    if args.alphabet is None:
        raise BadArtifact("--alphabet is required without --input")
    word = getattr(args, flag)
    if word is None:
        raise BadArtifact(f"--{flag} is required without --input")
    H = _structure(args, len(word))
    return H, H.elem(H.word(word))


# -- subcommands ---------------------------------------------------------------------


def cmd_shuffle(args):
    if args.input:
        data = _read_input(args.input)
        _expect(data, "elem")
        left = Elem.from_json(data)
        H = HopfStructure(Kind.SHUFFLE_DECONCAT, left.alphabet, args.max_degree or DEFAULT_MAX_DEGREE)
        out = left if args.right is None else H.product(left, H.elem(H.word(args.right)))
    else:
        if args.alphabet is None or args.left is None or args.right is None:
            raise BadArtifact("shuffle needs --alphabet, --left and --right (or --input)")
        need = len(args.left) + len(args.right)
        H = HopfStructure(Kind.SHUFFLE_DECONCAT, Alphabet(args.alphabet),
                          args.max_degree or max(DEFAULT_MAX_DEGREE, need))
        out = H.shuffle(H.word(args.left), H.word(args.right))
    return out.to_json(), str(out)


def cmd_coproduct(args):
    if args.input:
        data = _read_input(args.input)
        if _expect(data, "elem", "tensor") == "tensor":
            t = TensorElem.from_json(data)
            return t.to_json(), str(t)
    H, x = _operand(args)
    t = H.coproduct(x)
    return t.to_json(), str(t)


def cmd_antipode(args):
    H, x = _operand(args)
    if args.solve:
        S = antipode_solve(H, max(x.degree(), 0))
        out = S(x)
    else:
        out = H.antipode(x)
    return out.to_json(), str(out)


def cmd_coherence(args):
    if args.input:
        report = CoherenceReport.from_json(_read_input(args.input))
        return report.to_json(), report.summary()
    if args.alphabet is None:
        raise BadArtifact("--alphabet is required without --input")
    d = args.max_degree if args.max_degree is not None else 6
    H = _structure(args, d)
    if args.antipode == "closed":
        S = LinMap.closed_antipode(H, d)
    elif args.antipode == "solve":
        S = antipode_solve(H, d)
    else:
        S = LinMap.identity(H, d)
    report = coherence_check(H, S, d)
    return report.to_json(), report.summary()


def cmd_power(args):
    H, x = _operand(args)
    out = hopf_power(args.power, H, x)
    return out.to_json(), str(out)


def _chain_text(chain: MarkovChain) -> str:
    width = max(len(format_rational(x)) for row in chain.P for x in row)
    width = max(width, max(len(s) for s in chain.states))
    head = " " * width + " " + " ".join(s.rjust(width) for s in chain.states)
    rows = [s.rjust(width) + " " + " ".join(format_rational(x).rjust(width) for x in row)
            for s, row in zip(chain.states, chain.P)]
    return "\n".join([head] + rows)


def _spectrum_text(spec: Spectrum) -> str:
    eig = ", ".join(f"{format_rational(v)}×{m}" for v, m in spec.eigenvalues.items())
    lines = [f"eigenvalues: {eig}"]
    if spec.stationary is not None:
        lines.append("stationary: " + " ".join(format_rational(x) for x in spec.stationary))
    if not spec.complete:
        lines.append("unresolved factor: " + " ".join(format_rational(c) for c in spec.residual))
    return "\n".join(lines)


def _load_chain(args) -> MarkovChain:
    if args.input:
        data = _read_input(args.input)
        _expect(data, "chain")
        return MarkovChain.from_json(data)
    if args.cards is None:
        raise BadArtifact("--cards is required without --input")
    return riffle_chain(args.cards, args.arity)


def cmd_riffle(args):
    chain = _load_chain(args)
    if args.spectrum:
        spec = spectrum_exact(chain)
        return spec.to_json(), _spectrum_text(spec)
    return chain.to_json(), _chain_text(chain)


def cmd_spectrum(args):
    if args.input:
        data = _read_input(args.input)
        if _expect(data, "chain", "spectrum") == "spectrum":
            spec = Spectrum.from_json(data)
            return spec.to_json(), _spectrum_text(spec)
    spec = spectrum_exact(_load_chain(args))
    return spec.to_json(), _spectrum_text(spec)


def cmd_train(args):
    if args.input:
        data = _read_input(args.input)
        _expect(data, "checkpoint")
        model = ToyModel.from_json(data)
    else:
        model = None
    if args.corpus is None:
        if model is not None and args.epochs == 0:
            return model.to_json(), None, model
        raise BadArtifact("--corpus is required for training")
    if args.alphabet is None:
        raise BadArtifact("--alphabet is required with --corpus")
    corpus = Corpus.load(args.corpus, args.alphabet)
    if model is None:
        model = model_init(len(corpus.alphabet), args.dim, args.heads, args.seed)
    if model.vocab_size != len(corpus.alphabet):
        raise BadArtifact(f"checkpoint vocabulary {model.vocab_size} != alphabet size {len(corpus.alphabet)}")
    model, trace = train(model, corpus, args.epochs, args.rate, context=args.context,
                         freeze_heads=args.freeze_heads)
    text = "\n".join(f"epoch {r['epoch']}: defect {r['defect']:.6g} cross-entropy {r['crossEntropy']:.6g}"
                     for r in trace.records())
    return trace.records(), text, model


def cmd_bigram(args):
    if args.corpus is None or args.alphabet is None:
        raise BadArtifact("bigram needs --corpus and --alphabet")
    chain = bigram_fit(Corpus.load(args.corpus, args.alphabet))
    return chain.to_json(), _chain_text(chain)


def _psd_text(label: str, r: PSDReport) -> str:
    eig = " ".join(f"{x:.6g}" for x in r.eigenvalues)
    verdict = "copying" if r.copying else "not copying"
    return f"{label}symmetry defect {r.symmetry_defect:.3g}; eigenvalues {eig}; {verdict}"


def cmd_psd(args):
    if args.matrix is not None:
        rows = [[float(x) for x in row.split(",")] for row in args.matrix.split(";")]
        r = psd_check(rows, args.tolerance)
        return r.to_json(), _psd_text("", r)
    if not args.input:
        raise BadArtifact("psd needs --matrix or --input")
    data = _read_input(args.input)
    kind = _expect(data, "matrix", "checkpoint", "psd")
    if kind == "psd":
        eig = np.array(data["eigenvalues"], dtype=float)
        raw = np.array([complex(re, im) for re, im in data["rawEigenvalues"]])
        r = PSDReport(float(data["symmetryDefect"]), eig, raw, bool(data["copying"]))
        return r.to_json(), _psd_text("", r)
    if kind == "matrix":
        r = psd_check(data["matrix"] if isinstance(data, dict) else data, args.tolerance)
        return r.to_json(), _psd_text("", r)
    model = ToyModel.from_json(data)
    reports = [psd_check(ov, args.tolerance) for ov in model.W_OV]
    text = "\n".join(_psd_text(f"head {h} OV: ", r) for h, r in enumerate(reports))
    return {"heads": [r.to_json() for r in reports]}, text


# -- parser -----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hopfco", description="Exact Hopf-algebra and Hopf-coherence tools.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--out", help="write the result to this file instead of stdout")
    common.add_argument("--input", help="read a JSON artifact (use - for stdin)")
    algebra = argparse.ArgumentParser(add_help=False)
    algebra.add_argument("--alphabet")
    algebra.add_argument("--max-degree", type=int)
    algebra.add_argument("--mode", choices=("deconcat", "deshuffle"), default="deconcat",
                         help="deconcat: shuffle/deconcatenation; deshuffle: concatenation/deshuffle")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("shuffle", parents=[common, algebra], help="shuffle product of two words")
    p.add_argument("--left")
    p.add_argument("--right")
    p.set_defaults(func=cmd_shuffle)

    p = sub.add_parser("coproduct", parents=[common, algebra], help="coproduct of a word")
    p.add_argument("--word")
    p.set_defaults(func=cmd_coproduct)

    p = sub.add_parser("antipode", parents=[common, algebra], help="antipode of a word")
    p.add_argument("--word")
    p.add_argument("--solve", action="store_true", help="use the degree-recursive solver")
    p.set_defaults(func=cmd_antipode)

    p = sub.add_parser("coherence", parents=[common, algebra], help="check m(id⊗S)Δ = uε")
    p.add_argument("--antipode", choices=("closed", "solve", "identity"), default="closed")
    p.set_defaults(func=cmd_coherence)

    p = sub.add_parser("power", parents=[common, algebra], help="Hopf power map Ψ^a")
    p.add_argument("--word")
    p.add_argument("--power", type=int, default=2)
    p.set_defaults(func=cmd_power)

    chain = argparse.ArgumentParser(add_help=False)
    chain.add_argument("--cards", type=int)
    chain.add_argument("--arity", type=int, default=2)

    p = sub.add_parser("riffle", parents=[common, chain], help="GSR riffle-shuffle chain")
    p.add_argument("--spectrum", action="store_true")
    p.set_defaults(func=cmd_riffle)

    p = sub.add_parser("spectrum", parents=[common, chain], help="exact spectrum of a chain")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("train", parents=[common], help="train the toy attention-only model")
    p.add_argument("--corpus")
    p.add_argument("--alphabet")
    p.add_argument("--epochs", type=int, default=200)
    p.add_argument("--rate", type=float, default=0.1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dim", type=int, default=8)
    p.add_argument("--heads", type=int, default=1)
    p.add_argument("--context", type=int, default=8)
    p.add_argument("--freeze-heads", action="store_true", help="zero-layer mode: unit path only")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("bigram", parents=[common], help="maximum-likelihood bigram chain of a corpus")
    p.add_argument("--corpus")
    p.add_argument("--alphabet")
    p.set_defaults(func=cmd_bigram)

    p = sub.add_parser("psd", parents=[common], help="symmetry / positive-definiteness diagnostic")
    p.add_argument("--matrix", help='rows separated by ";", entries by ",", e.g. "2,1;1,2"')
    p.add_argument("--tolerance", type=float, default=1e-9)
    p.set_defaults(func=cmd_psd)
    return parser


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        result = args.func(args)
        if args.command == "train":
            payload, text, model = result
            if args.out:
                Path(args.out).write_text(_dump(model.to_json()), encoding="utf-8")
            if args.format == "json":
                out = "".join(_dump(r) for r in payload) if isinstance(payload, list) else _dump(payload)
            else:
                out = (text + "\n") if text else ""
            stdout.write(out)
            return 0
        payload, text = result
        out = _dump(payload) if args.format == "json" else text + "\n"
        if args.out:
            Path(args.out).write_text(out, encoding="utf-8")
        else:
            stdout.write(out)
    except (HopfError, ValueError) as exc:
        stderr.write(f"error: {exc}\n")
        return 1
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
