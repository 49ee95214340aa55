"""Canonical text format and tokenization, self-contained.

This package talks to the evaluation toolkit only through files, so it
carries its own reader for the interchange format (blank-line separated
integer matrices) and builds the identical vocabulary: specials, then the
newline family, then integer-literal tokens sorted by value.  The token
lists are cross-checked against the evaluation toolkit in the tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

PAD = "<pad>"
SOS = "<sos>"
EOS = "<eos>"
NEWLINE = "<nl>"


def parse_matrices(text: str) -> list[list[list[int]] | None]:
    """Blocks of the interchange format; unreadable blocks come back as None."""
    records: list[list[list[int]] | None] = []
    block: list[str] = []

    def flush():
        if not block:
            return
        try:
            rows = [[int(tok) for tok in line.split()] for line in block]
        except ValueError:
            records.append(None)
            block.clear()
            return
        width = len(rows[0])
        records.append(rows if width and all(len(r) == width for r in rows) else None)
        block.clear()

    for line in text.splitlines():
        if line.strip():
            block.append(line.strip())
        else:
            flush()
    flush()
    return records


def load_matrices(path: str | Path) -> list[list[list[int]]]:
    records = parse_matrices(Path(path).read_text(encoding="utf-8"))
    return [m for m in records if m is not None]


def matrix_text(rows: list[list[int]]) -> str:
    return "".join(" ".join(str(x) for x in row) + "\n" for row in rows)


@dataclass(frozen=True)
class Vocab:
    tokens: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "_index", {t: i for i, t in enumerate(self.tokens)})

    def id(self, token: str) -> int:
        return self._index[token]

    def token(self, token_id: int) -> str:
        return self.tokens[token_id]

    @property
    def size(self) -> int:
        return len(self.tokens)

    @property
    def pad_id(self) -> int:
        return self._index[PAD]

    @property
    def sos_id(self) -> int:
        return self._index[SOS]

    @property
    def eos_id(self) -> int:
        return self._index[EOS]

    @property
    def newline_id(self) -> int:
        return self._index[NEWLINE]


def build_vocab(matrices: list[list[list[int]]]) -> Vocab:
    """Standard-scheme vocabulary, identical to the evaluation toolkit's."""
    entries = sorted({x for m in matrices for row in m for x in row})
    return Vocab((PAD, SOS, EOS, NEWLINE, *[str(v) for v in entries]))


def encode(matrix: list[list[int]], vocab: Vocab) -> list[int]:
    ids = [vocab.sos_id]
    for row in matrix:
        ids.extend(vocab.id(str(x)) for x in row)
        ids.append(vocab.newline_id)
    ids.append(vocab.eos_id)
    return ids


def decode_block(ids: list[int], vocab: Vocab) -> str:
    """Text block for one generated sequence.

    A well-formed sequence (SOS, newline-terminated nonempty rows, EOS)
    becomes its matrix text; anything else becomes a single line of literal
    tokens so the slot still parses as exactly one (ill-formed) block and
    sample counts survive the round trip.
    """
    literal = " ".join(vocab.token(t) for t in ids)
    if not ids or ids[0] != vocab.sos_id or vocab.eos_id not in ids:
        return literal + "\n"
    rows: list[list[str]] = []
    row: list[str] = []
    for tid in ids[1:]:
        if tid == vocab.eos_id:
            break
        tok = vocab.token(tid)
        if tid == vocab.newline_id:
            if not row:
                return literal + "\n"
            rows.append(row)
            row = []
        elif tok in (PAD, SOS):
            return literal + "\n"
        else:
            row.append(tok)
    if row or not rows:
        return literal + "\n"
    return "".join(" ".join(r) + "\n" for r in rows)
