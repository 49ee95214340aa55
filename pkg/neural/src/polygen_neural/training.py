"""Training and generation for the next-token models.

Samples are SOS/EOS-wrapped and padded to the fixed maximum length of the
training file; the loss is next-token cross-entropy with padding ignored.
Checkpoints carry the config, vocabulary, loss log and maximum length, so
generation needs nothing but the checkpoint.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import torch
from torch import nn

from .data import Vocab, build_vocab, decode_block, encode, load_matrices, parse_matrices
from .models import build_model

ARCHS = ("lstm1", "lstm2", "transformer")

# generation may overshoot the training maximum by this much before a sample
# counts as non-terminating; the positional table is sized to cover it
GUARD_TOKENS = 16

DEFAULTS = {
    "lstm1": {"embedding_dim": 4, "hidden_dim": 256},
    "lstm2": {"embedding_dim": 4, "hidden_dim": 256},
    "transformer": {"embedding_dim": 128, "heads": 4, "layers": 4, "feedforward_dim": 512},
}


@dataclass
class ModelConfig:
    arch: str = "transformer"
    epochs: int = 100
    seed: int = 0
    batch_size: int = 64
    learning_rate: float = 0.001
    scheme: str = "standard"
    embedding_dim: int = 0  # 0: architecture default
    hidden_dim: int = 256
    heads: int = 4
    layers: int = 4
    feedforward_dim: int = 512

    def __post_init__(self):
        if self.arch not in ARCHS:
            raise ValueError(f"arch must be one of {ARCHS}")
        if self.embedding_dim == 0:
            self.embedding_dim = DEFAULTS[self.arch]["embedding_dim"]
        if self.scheme != "standard":
            raise ValueError("models are trained on the standard tokenization")

    def as_dict(self) -> dict:
        return dict(self.__dict__)

    @classmethod
    def load(cls, path: str | Path) -> "ModelConfig":
        return cls(**json.loads(Path(path).read_text(encoding="utf-8")))

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.as_dict(), indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _batches(data: torch.Tensor, batch_size: int, generator: torch.Generator):
    order = torch.randperm(data.shape[0], generator=generator)
    for start in range(0, len(order), batch_size):
        yield data[order[start : start + batch_size]]


def train(dataset_path: str | Path, config: ModelConfig, checkpoint_path: str | Path, log=print) -> dict:
    """Fit the model; returns the checkpoint payload (also written to disk)."""
    matrices = load_matrices(dataset_path)
    if not matrices:
        raise ValueError(f"{dataset_path}: no well-formed samples")
    vocab = build_vocab(matrices)
    sequences = [encode(m, vocab) for m in matrices]
    max_len = max(len(s) for s in sequences)
    data = torch.full((len(sequences), max_len), vocab.pad_id, dtype=torch.long)
    for i, seq in enumerate(sequences):
        data[i, : len(seq)] = torch.tensor(seq, dtype=torch.long)

    torch.manual_seed(config.seed)
    model = build_model(config.arch, vocab.size, max_len + GUARD_TOKENS, config.as_dict())
    params = sum(p.numel() for p in model.parameters())
    log(f"training {config.arch}: {len(sequences)} samples, max_len {max_len}, {params} parameters")
    optimizer = torch.optim.Adam(model.parameters(), lr=config.learning_rate)
    loss_fn = nn.CrossEntropyLoss(ignore_index=vocab.pad_id)
    shuffler = torch.Generator().manual_seed(config.seed)

    loss_log: list[float] = []
    model.train()
    for epoch in range(config.epochs):
        total = 0.0
        count = 0
        for batch in _batches(data, config.batch_size, shuffler):
            optimizer.zero_grad()
            logits = model(batch[:, :-1])
            loss = loss_fn(logits.reshape(-1, vocab.size), batch[:, 1:].reshape(-1))
            loss.backward()
            optimizer.step()
            total += loss.item() * batch.shape[0]
            count += batch.shape[0]
        loss_log.append(total / count)
        log(f"epoch {epoch + 1}/{config.epochs}: loss {loss_log[-1]:.4f}")

    payload = {
        "config": config.as_dict(),
        "vocab": list(vocab.tokens),
        "max_len": max_len,
        "loss_log": loss_log,
        "state_dict": model.state_dict(),
    }
    torch.save(payload, checkpoint_path)
    return payload


def load_checkpoint(path: str | Path):
    payload = torch.load(path, map_location="cpu", weights_only=False)
    config = ModelConfig(**payload["config"])
    vocab = Vocab(tuple(payload["vocab"]))
    model = build_model(config.arch, vocab.size, payload["max_len"] + GUARD_TOKENS, config.as_dict())
    model.load_state_dict(payload["state_dict"])
    model.eval()
    return model, vocab, payload


@dataclass
class GenerationRun:
    num_samples: int = 1000
    seed: int = 0
    batch_size: int = 128
    max_len: int | None = None  # default: training max length + 16


def generate(checkpoint_path: str | Path, run: GenerationRun, out_path: str | Path) -> dict:
    """Ancestral sampling until the end token; writes blank-line separated blocks.

    Ill-formed generations are written too (as single literal-token lines),
    so the file always holds exactly ``num_samples`` blocks.
    """
    model, vocab, payload = load_checkpoint(checkpoint_path)
    limit = run.max_len or payload["max_len"] + GUARD_TOKENS
    # the encoder stack cannot attend past its positional table
    capacity = getattr(model, "max_len", None)
    if capacity is not None:
        limit = min(limit, capacity)
    torch.manual_seed(run.seed)
    blocks: list[str] = []
    parseable = 0
    with torch.no_grad():
        remaining = run.num_samples
        while remaining > 0:
            batch = min(run.batch_size, remaining)
            remaining -= batch
            seqs = torch.full((batch, 1), vocab.sos_id, dtype=torch.long)
            finished = torch.zeros(batch, dtype=torch.bool)
            while seqs.shape[1] < limit and not bool(finished.all()):
                logits = model(seqs)[:, -1, :]
                probs = torch.softmax(logits, dim=-1)
                nxt = torch.multinomial(probs, 1).squeeze(1)
                nxt = torch.where(finished, torch.full_like(nxt, vocab.pad_id), nxt)
                seqs = torch.cat([seqs, nxt[:, None]], dim=1)
                finished |= nxt == vocab.eos_id
            for row in seqs.tolist():
                ids = []
                for t in row:
                    ids.append(t)
                    if t == vocab.eos_id:
                        break
                block = decode_block(ids, vocab)
                if parse_matrices(block)[0] is not None:
                    parseable += 1
                blocks.append(block)
    Path(out_path).write_text("\n".join(blocks), encoding="utf-8")
    return {"samples": run.num_samples, "parseable": parseable, "out": str(out_path)}
