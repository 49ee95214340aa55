"""Next-token models: recurrent (1 or 2 LSTM layers) and a causal encoder stack."""

from __future__ import annotations

import torch
from torch import nn


class RecurrentModel(nn.Module):
    def __init__(self, vocab_size: int, embedding_dim: int = 4, hidden_dim: int = 256, layers: int = 1):
        super().__init__()
        self.embed = nn.Embedding(vocab_size, embedding_dim)
        self.lstm = nn.LSTM(embedding_dim, hidden_dim, num_layers=layers, batch_first=True)
        self.head = nn.Linear(hidden_dim, vocab_size)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        out, _ = self.lstm(self.embed(x))
        return self.head(out)


class CausalTransformer(nn.Module):
    """Stacked encoder layers applied autoregressively with a causal mask.

    Positions are learned embeddings; the feedforward width is sized so the
    4-layer stack lands near the 2-layer recurrent model's parameter count.
    """

    def __init__(
        self,
        vocab_size: int,
        max_len: int,
        embedding_dim: int = 128,
        heads: int = 4,
        layers: int = 4,
        feedforward_dim: int = 512,
    ):
        super().__init__()
        self.embed = nn.Embedding(vocab_size, embedding_dim)
        self.pos = nn.Embedding(max_len, embedding_dim)
        layer = nn.TransformerEncoderLayer(
            d_model=embedding_dim,
            nhead=heads,
            dim_feedforward=feedforward_dim,
            batch_first=True,
        )
        self.encoder = nn.TransformerEncoder(layer, num_layers=layers)
        self.head = nn.Linear(embedding_dim, vocab_size)
        self.max_len = max_len

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        length = x.shape[1]
        positions = torch.arange(length, device=x.device)
        h = self.embed(x) + self.pos(positions)[None, :, :]
        mask = nn.Transformer.generate_square_subsequent_mask(length, device=x.device)
        h = self.encoder(h, mask=mask, is_causal=True)
        return self.head(h)


def build_model(arch: str, vocab_size: int, max_len: int, config: dict) -> nn.Module:
    if arch == "lstm1":
        return RecurrentModel(vocab_size, config["embedding_dim"], config["hidden_dim"], layers=1)
    if arch == "lstm2":
        return RecurrentModel(vocab_size, config["embedding_dim"], config["hidden_dim"], layers=2)
    if arch == "transformer":
        return CausalTransformer(
            vocab_size,
            max_len,
            config["embedding_dim"],
            config["heads"],
            config["layers"],
            config["feedforward_dim"],
        )
    raise ValueError(f"unknown architecture {arch!r}")
