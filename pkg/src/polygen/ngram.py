"""Count-based next-token baseline.

An order-n histogram model: the next token is drawn from the frequency of
tokens that followed the previous n tokens in the training corpus.  Contexts
are left-padded with SOS so generation can start from nothing; when the full
context was never seen, the oldest token is dropped until a seen context
remains (the order-0 histogram always exists), so no probability mass is ever
invented for unseen events.  Fit on the line-numbered scheme, the model
cannot emit the end token early: the end token only ever follows a
line-numbered row separator that was end-adjacent in training.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .datasets import LINE_NUMBERED, Sample, TokenSeq, Vocab, build_vocab, tokenize
from .errors import DataError, UsageError
from .rng import weighted_index

DEFAULT_ORDER = 10


@dataclass
class NGramModel:
    """Next-token count tables for every context length 0..n."""

    n: int
    vocab: Vocab
    counts: dict[tuple[int, ...], dict[int, int]]
    max_train_len: int

    @property
    def max_len(self) -> int:
        # guard for non-terminating samples; anything longer is ill-formed
        return self.max_train_len + 16

    def histogram(self, context: Sequence[int]) -> dict[int, int]:
        """Longest-match backoff: drop the oldest token until a table exists."""
        ctx = tuple(context[-self.n:]) if self.n else ()
        while True:
            hist = self.counts.get(ctx)
            if hist is not None:
                return hist
            if not ctx:
                raise DataError("empty model: order-0 histogram missing")
            ctx = ctx[1:]

    def save(self, path: str | Path) -> None:
        triples = [
            [list(ctx), tok, cnt]
            for ctx, hist in sorted(self.counts.items())
            for tok, cnt in sorted(hist.items())
        ]
        payload = {
            "format": "polygen-ngram-v1",
            "n": self.n,
            "scheme": self.vocab.scheme,
            "vocab": list(self.vocab.tokens),
            "max_train_len": self.max_train_len,
            "counts": triples,
        }
        Path(path).write_text(json.dumps(payload, sort_keys=True) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "NGramModel":
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
        if payload.get("format") != "polygen-ngram-v1":
            raise DataError(f"{path}: not an n-gram model file")
        vocab = Vocab(payload["scheme"], tuple(payload["vocab"]))
        counts: dict[tuple[int, ...], dict[int, int]] = {}
        for ctx, tok, cnt in payload["counts"]:
            counts.setdefault(tuple(ctx), {})[tok] = cnt
        return cls(payload["n"], vocab, counts, payload["max_train_len"])


def fit(
    samples: Sequence[Sample],
    n: int = DEFAULT_ORDER,
    scheme: str = LINE_NUMBERED,
    vocab: Vocab | None = None,
) -> NGramModel:
    """Count next-token frequencies over all context lengths 0..n."""
    if n < 1:
        raise UsageError("context length must be >= 1")
    if not samples:
        raise DataError("cannot fit on an empty dataset")
    vocab = vocab or build_vocab(samples, scheme)
    counts: dict[tuple[int, ...], dict[int, int]] = {}
    max_train_len = 0
    for s in samples:
        ids = tokenize(s, vocab).ids
        max_train_len = max(max_train_len, len(ids))
        # pad so the first predicted token (the one after SOS) sees a full
        # n-token context of SOS, exactly as generation starts
        padded = (vocab.sos_id,) * (n - 1) + ids
        for pos in range(n, len(padded)):
            target = padded[pos]
            for k in range(n + 1):
                ctx = padded[pos - k: pos]
                hist = counts.setdefault(ctx, {})
                hist[target] = hist.get(target, 0) + 1
    return NGramModel(n, vocab, counts, max_train_len)


def sample_tokens(model: NGramModel, rng: np.random.Generator, max_len: int | None = None) -> TokenSeq:
    """Autoregressive draw from the fitted histograms, stopping at EOS or max_len."""
    vocab = model.vocab
    limit = model.max_len if max_len is None else max_len
    ids = [vocab.sos_id]
    context = [vocab.sos_id] * model.n
    while len(ids) < limit:
        hist = model.histogram(context)
        toks = sorted(hist)
        tok = toks[weighted_index(rng, [hist[t] for t in toks])]
        ids.append(tok)
        context = context[1:] + [tok]
        if tok == vocab.eos_id:
            break
    return TokenSeq(tuple(ids), vocab.scheme)
