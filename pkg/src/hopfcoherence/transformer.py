"""Attention-only toy transformer with a unit path and a convolution path.

Conventions: residual vectors are rows. A token ``t`` enters the residual
stream as ``x = W_E[t]`` and leaves through ``x @ W_U``. Head ``h`` scores
``x_i @ W_QK[h] @ x_j`` (causally masked, row-softmaxed into ``A[h]``) and
writes ``(Σ_j A[h]_ij x_j) @ W_OV[h]`` back into the stream.

* unit path:        ``z_unit_i = x_i @ W_U``
* convolution path: ``z_conv_i = Σ_h (A[h] X)_i @ W_OV[h] @ W_U``

The training signal is the coherence defect, the mean squared distance
between ``softmax(z_unit + z_conv)`` and the one-hot next token. Updates
use the exact gradient of that defect, computed within the single layer.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from fractions import Fraction
from pathlib import Path

import numpy as np

from .errors import (BadArtifact, BadDimension, CorpusTooShort, EmptyContext,
                     LengthMismatch, UnknownSymbol)
from .markov import MarkovChain
from .words import Alphabet

COPY_THRESHOLD = 1e-9


@dataclass(frozen=True, eq=False)
class ToyModel:
    W_E: np.ndarray   # (vocab, d)
    W_U: np.ndarray   # (d, vocab)
    W_QK: np.ndarray  # (heads, d, d)
    W_OV: np.ndarray  # (heads, d, d)
    seed: int | None = None

    def __post_init__(self):
        V, d = self.W_E.shape
        if self.W_U.shape != (d, V):
            raise BadDimension(f"W_U has shape {self.W_U.shape}, expected {(d, V)}")
        if self.W_QK.ndim != 3 or self.W_QK.shape[1:] != (d, d):
            raise BadDimension(f"W_QK has shape {self.W_QK.shape}")
        if self.W_OV.shape != self.W_QK.shape:
            raise BadDimension(f"W_OV has shape {self.W_OV.shape}")

    @property
    def vocab_size(self) -> int:
        return self.W_E.shape[0]

    @property
    def d_model(self) -> int:
        return self.W_E.shape[1]

    @property
    def heads(self) -> int:
        return self.W_QK.shape[0]

    def params(self) -> dict[str, np.ndarray]:
        return {"W_E": self.W_E, "W_U": self.W_U, "W_QK": self.W_QK, "W_OV": self.W_OV}

    def with_params(self, **blocks) -> ToyModel:
        return replace(self, **blocks)

    def rebased(self, Q: np.ndarray) -> ToyModel:
        """Rotate the residual basis by an orthogonal ``Q`` (``x -> x Qᵀ``)."""
        return replace(
            self,
            W_E=self.W_E @ Q.T,
            W_U=Q @ self.W_U,
            W_QK=np.einsum("ab,hbc,dc->had", Q, self.W_QK, Q),
            W_OV=np.einsum("ab,hbc,dc->had", Q, self.W_OV, Q),
        )

    def to_json(self) -> dict:
        return {
            "vocab_size": self.vocab_size,
            "d_model": self.d_model,
            "heads": self.heads,
            "seed": self.seed,
            "W_E": self.W_E.tolist(),
            "W_U": self.W_U.tolist(),
            "W_QK": self.W_QK.tolist(),
            "W_OV": self.W_OV.tolist(),
        }

    @classmethod
    def from_json(cls, data) -> ToyModel:
        if isinstance(data, str):
            data = json.loads(data)
        try:
            V, d, H = data["vocab_size"], data["d_model"], data["heads"]
            qk = np.array(data["W_QK"], dtype=float).reshape(H, d, d)
            ov = np.array(data["W_OV"], dtype=float).reshape(H, d, d)
            return cls(np.array(data["W_E"], dtype=float).reshape(V, d),
                       np.array(data["W_U"], dtype=float).reshape(d, V),
                       qk, ov, data.get("seed"))
        except (KeyError, TypeError, ValueError) as exc:
            raise BadArtifact(f"not a model checkpoint: {exc}") from None


def model_init(vocab_size: int, d_model: int, heads: int, seed: int = 0) -> ToyModel:
    for name, v in (("vocab_size", vocab_size), ("d_model", d_model), ("heads", heads)):
        if v < 1:
            raise BadDimension(f"{name} must be >= 1, got {v}")
    rng = np.random.default_rng(seed)
    s = 1.0 / np.sqrt(d_model)
    W_E = rng.normal(0.0, s, (vocab_size, d_model))
    W_U = rng.normal(0.0, s, (d_model, vocab_size))
    W_QK = rng.normal(0.0, s, (heads, d_model, d_model))
    W_OV = rng.normal(0.0, s, (heads, d_model, d_model))
    return ToyModel(W_E, W_U, W_QK, W_OV, seed)


# -- corpus -----------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Corpus:
    tokens: np.ndarray
    alphabet: Alphabet
    source: str | None = None

    def __post_init__(self):
        toks = np.asarray(self.tokens, dtype=np.int64)
        if toks.ndim != 1 or toks.size == 0:
            raise CorpusTooShort("corpus must be a nonempty token sequence")
        if toks.min() < 0 or toks.max() >= len(self.alphabet):
            raise UnknownSymbol(int(np.argmax((toks < 0) | (toks >= len(self.alphabet)))))
        object.__setattr__(self, "tokens", toks)

    def __len__(self) -> int:
        return int(self.tokens.size)

    @classmethod
    def from_text(cls, text: str, alphabet: Alphabet | str, source: str | None = None) -> Corpus:
        alphabet = Alphabet(alphabet) if isinstance(alphabet, str) else alphabet
        # line breaks are layout, unless they are symbols
        text = "".join(c for c in text if c in alphabet or c not in "\r\n")
        alphabet.check(text)
        index = {c: i for i, c in enumerate(alphabet.letters)}
        return cls(np.array([index[c] for c in text], dtype=np.int64), alphabet, source)

    @classmethod
    def load(cls, path, alphabet: Alphabet | str) -> Corpus:
        path = Path(path)
        return cls.from_text(path.read_text(encoding="utf-8"), alphabet, str(path))

    def text(self) -> str:
        return "".join(self.alphabet.letters[t] for t in self.tokens)

    def windows(self, context: int) -> np.ndarray:
        """Non-overlapping ``context + 1`` windows; inputs ``[:, :-1]``, targets ``[:, 1:]``."""
        if len(self) < 2:
            raise CorpusTooShort("need at least two tokens")
        context = min(context, len(self) - 1)
        count = (len(self) - 1) // context
        idx = np.arange(count)[:, None] * context + np.arange(context + 1)[None, :]
        return self.tokens[idx]


def cycle_corpus(alphabet: Alphabet | str, length: int) -> Corpus:
    alphabet = Alphabet(alphabet) if isinstance(alphabet, str) else alphabet
    return Corpus(np.arange(length) % len(alphabet), alphabet, "cycle")


def sample_bigram_corpus(P: np.ndarray, length: int, seed: int = 0,
                         alphabet: Alphabet | str | None = None) -> Corpus:
    P = np.asarray(P, dtype=float)
    V = P.shape[0]
    alphabet = Alphabet(alphabet or "abcdefghij"[:V]) if not isinstance(alphabet, Alphabet) else alphabet
    rng = np.random.default_rng(seed)
    cdf = np.cumsum(P, axis=1)
    u = rng.random(length)
    toks = np.empty(length, dtype=np.int64)
    toks[0] = 0
    for i in range(1, length):
        toks[i] = min(int(np.searchsorted(cdf[toks[i - 1]], u[i], side="right")), V - 1)
    return Corpus(toks, alphabet, "bigram-sample")


# -- forward ---------------------------------------------------------------------


def _softmax(z: np.ndarray, axis: int = -1) -> np.ndarray:
    z = z - np.max(z, axis=axis, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=axis, keepdims=True)


def _as_batch(tokens) -> tuple[np.ndarray, bool]:
    t = np.asarray(tokens, dtype=np.int64)
    if t.ndim == 1:
        return t[None, :], True
    return t, False


def _attention(X: np.ndarray, W_QK: np.ndarray) -> np.ndarray:
    # X (B, T, d), W_QK (H, d, d) -> (B, H, T, T)
    T = X.shape[1]
    scores = np.einsum("bid,hde,bje->bhij", X, W_QK, X)
    mask = np.triu(np.ones((T, T), dtype=bool), k=1)
    scores = np.where(mask, -np.inf, scores)
    return _softmax(scores, axis=-1)


def qk_attention(model: ToyModel, tokens) -> np.ndarray:
    """Causal attention pattern per head: ``(heads, T, T)`` or ``(B, heads, T, T)``."""
    t, single = _as_batch(tokens)
    if t.shape[-1] < 1:
        raise EmptyContext("context must contain at least one token")
    A = _attention(model.W_E[t], model.W_QK)
    return A[0] if single else A


def path_unit(model: ToyModel, tokens) -> np.ndarray:
    t, single = _as_batch(tokens)
    if t.shape[-1] < 1:
        raise EmptyContext("context must contain at least one token")
    z = model.W_E[t] @ model.W_U
    return z[0] if single else z


def _conv_residual(model: ToyModel, X: np.ndarray, A: np.ndarray) -> np.ndarray:
    mixed = np.einsum("bhij,bjd->bhid", A, X)
    return np.einsum("bhid,hde->bie", mixed, model.W_OV)


def path_conv(model: ToyModel, tokens) -> np.ndarray:
    t, single = _as_batch(tokens)
    if t.shape[-1] < 1:
        raise EmptyContext("context must contain at least one token")
    X = model.W_E[t]
    z = _conv_residual(model, X, _attention(X, model.W_QK)) @ model.W_U
    return z[0] if single else z


def predict(model: ToyModel, tokens) -> np.ndarray:
    """Next-token distribution from both paths combined."""
    return _softmax(path_unit(model, tokens) + path_conv(model, tokens))


def _targets(tokens: np.ndarray, targets) -> np.ndarray:
    y = np.asarray(targets, dtype=np.int64)
    if y.ndim == 1:
        y = y[None, :]
    if y.shape != tokens.shape:
        raise LengthMismatch(f"{y.shape[-1]} targets for {tokens.shape[-1]} positions")
    return y


def position_defects(model: ToyModel, tokens, targets, freeze_heads: bool = False) -> np.ndarray:
    t, _ = _as_batch(tokens)
    y = _targets(t, targets)
    z = path_unit(model, t) if freeze_heads else path_unit(model, t) + path_conv(model, t)
    p = _softmax(z)
    onehot = np.eye(model.vocab_size)[y]
    return np.sum((p - onehot) ** 2, axis=-1)


def coherence_defect(model: ToyModel, tokens, targets, freeze_heads: bool = False) -> float:
    """Mean squared L2 distance between the combined prediction and the target."""
    return float(np.mean(position_defects(model, tokens, targets, freeze_heads)))


def cross_entropy(model: ToyModel, tokens, targets, freeze_heads: bool = False) -> float:
    t, _ = _as_batch(tokens)
    y = _targets(t, targets)
    z = path_unit(model, t) if freeze_heads else path_unit(model, t) + path_conv(model, t)
    z = z - z.max(axis=-1, keepdims=True)
    logp = z - np.log(np.exp(z).sum(axis=-1, keepdims=True))
    return float(-np.mean(np.take_along_axis(logp, y[..., None], axis=-1)))


# -- local update ------------------------------------------------------------------


def local_gradients(model: ToyModel, tokens, targets, *, freeze_heads: bool = False,
                    threshold: float = 0.0) -> dict[str, np.ndarray]:
    """Gradient of :func:`coherence_defect` with respect to every block.

    The output error at each position is pushed one step back along each
    path. The unit path hands it straight to ``W_U`` and ``W_E``; the
    convolution path hands it through ``W_OV`` to the attention pattern and
    from there to ``W_QK``, the split between the two falling out of their
    local derivatives. Positions whose defect is below ``threshold`` are
    treated as already coherent and contribute nothing.
    """
    t, _ = _as_batch(tokens)
    y = _targets(t, targets)
    B, T = t.shape
    N = B * T
    X = model.W_E[t]
    if freeze_heads:
        A = R = None
        resid = X
    else:
        A = _attention(X, model.W_QK)
        R = _conv_residual(model, X, A)
        resid = X + R
    p = _softmax(resid @ model.W_U)
    r = p - np.eye(model.vocab_size)[y]
    G = (2.0 / N) * (p * r - p * np.sum(p * r, axis=-1, keepdims=True))
    if threshold > 0:
        G = G * (np.sum(r * r, axis=-1, keepdims=True) >= threshold)

    grads = {"W_U": np.einsum("btd,btv->dv", resid, G)}
    dresid = G @ model.W_U.T          # (B, T, d)
    dX = dresid.copy()                # unit path share
    if freeze_heads:
        grads["W_QK"] = np.zeros_like(model.W_QK)
        grads["W_OV"] = np.zeros_like(model.W_OV)
    else:
        mixed = np.einsum("bhij,bjd->bhid", A, X)
        grads["W_OV"] = np.einsum("bhid,bie->hde", mixed, dresid)
        dmixed = np.einsum("bie,hde->bhid", dresid, model.W_OV)
        dA = np.einsum("bhid,bjd->bhij", dmixed, X)
        dX += np.einsum("bhij,bhid->bjd", A, dmixed)
        dS = A * (dA - np.sum(dA * A, axis=-1, keepdims=True))
        grads["W_QK"] = np.einsum("bhij,bid,bje->hde", dS, X, X)
        dX += np.einsum("bhij,bje,hde->bid", dS, X, model.W_QK)
        dX += np.einsum("bhij,bid,hde->bje", dS, X, model.W_QK)
    dW_E = np.zeros_like(model.W_E)
    np.add.at(dW_E, t.reshape(-1), dX.reshape(N, -1))
    grads["W_E"] = dW_E
    return grads


def update_step(model: ToyModel, batch, rate: float, *, targets=None, freeze_heads: bool = False,
                threshold: float = COPY_THRESHOLD) -> ToyModel:
    """One layer-local update on ``batch``.

    ``batch`` holds token windows of length ``T + 1`` (inputs ``[..., :-1]``,
    targets ``[..., 1:]``) unless ``targets`` is given separately.
    """
    if rate < 0:
        raise ValueError("rate must be nonnegative")
    b, _ = _as_batch(batch)
    if targets is None:
        tokens, targets = b[:, :-1], b[:, 1:]
    else:
        tokens = b
    g = local_gradients(model, tokens, targets, freeze_heads=freeze_heads, threshold=threshold)
    new = {k: v - rate * g[k] for k, v in model.params().items()}
    if freeze_heads:
        new["W_QK"], new["W_OV"] = model.W_QK, model.W_OV
    return model.with_params(**new)


@dataclass
class DefectTrace:
    defect: list[float] = field(default_factory=list)
    cross_entropy: list[float] = field(default_factory=list)

    def append(self, defect: float, ce: float):
        self.defect.append(defect)
        self.cross_entropy.append(ce)

    def records(self) -> list[dict]:
        return [{"epoch": i, "defect": d, "crossEntropy": c}
                for i, (d, c) in enumerate(zip(self.defect, self.cross_entropy))]

    def to_jsonl(self) -> str:
        return "".join(json.dumps(r) + "\n" for r in self.records())


def train(model: ToyModel, corpus: Corpus, epochs: int, rate: float, *, context: int = 8,
          freeze_heads: bool = False, threshold: float = COPY_THRESHOLD,
          log=None) -> tuple[ToyModel, DefectTrace]:
    """Full-batch training: one local update per epoch over all windows.

    The trace has ``epochs + 1`` entries; entry 0 is the untrained model.
    ``log`` is an optional writable stream receiving one JSON line per entry.
    """
    win = corpus.windows(context)
    tokens, targets = win[:, :-1], win[:, 1:]
    trace = DefectTrace()

    def record(m):
        trace.append(coherence_defect(m, tokens, targets, freeze_heads),
                     cross_entropy(m, tokens, targets, freeze_heads))
        if log is not None:
            log.write(json.dumps(trace.records()[-1]) + "\n")

    record(model)
    for _ in range(epochs):
        model = update_step(model, tokens, rate, targets=targets,
                            freeze_heads=freeze_heads, threshold=threshold)
        record(model)
    return model, trace


def unit_path_distribution(model: ToyModel) -> np.ndarray:
    """Row ``t``: next-token distribution from the unit path alone after token ``t``."""
    return _softmax(model.W_E @ model.W_U)


# -- bigrams and diagnostics -------------------------------------------------------


def bigram_fit(corpus: Corpus, vocab_size: int | None = None) -> MarkovChain:
    """Maximum-likelihood bigram transitions as an exact chain over the alphabet."""
    V = len(corpus.alphabet) if vocab_size is None else vocab_size
    if len(corpus) < 2:
        raise CorpusTooShort("need at least two tokens for a bigram")
    counts = np.zeros((V, V), dtype=np.int64)
    np.add.at(counts, (corpus.tokens[:-1], corpus.tokens[1:]), 1)
    rows = []
    for row in counts.tolist():
        total = sum(row)
        rows.append([Fraction(c, total) for c in row] if total else [Fraction(1, V)] * V)
    states = tuple(corpus.alphabet.letters[:V]) if V <= len(corpus.alphabet) else tuple(map(str, range(V)))
    return MarkovChain(states, rows)


@dataclass(frozen=True)
class PSDReport:
    symmetry_defect: float
    eigenvalues: np.ndarray          # of the symmetric part, ascending
    raw_eigenvalues: np.ndarray      # of the matrix itself
    copying: bool

    def to_json(self) -> dict:
        return {
            "symmetryDefect": self.symmetry_defect,
            "eigenvalues": self.eigenvalues.tolist(),
            "rawEigenvalues": [[z.real, z.imag] for z in self.raw_eigenvalues.tolist()],
            "copying": self.copying,
        }


def psd_check(matrix, tolerance: float = 1e-9) -> PSDReport:
    """Symmetry defect, spectrum of the symmetric part, and a copying verdict."""
    M = np.asarray(matrix, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise BadDimension(f"expected a square matrix, got shape {M.shape}")
    sym = 0.5 * (M + M.T)
    eig = np.linalg.eigvalsh(sym)
    raw = np.linalg.eigvals(M).astype(complex)
    raw = raw[np.lexsort((raw.imag, raw.real))]
    return PSDReport(float(np.linalg.norm(M - M.T)), eig, raw, bool(np.all(eig > tolerance)))
