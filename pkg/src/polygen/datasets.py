"""Dataset parsing, serialization, tokenization, splits and perturbations.

The interchange format for every component is plain UTF-8 text with LF line
endings: one integer matrix per sample, rows as space-separated decimals,
samples separated by one or more blank lines.  Parsing is lossless and
forgiving — a ragged or otherwise unreadable block becomes a per-sample
ill-formed record instead of failing the file.

Two tokenizations are supported: the standard scheme (one token per integer
entry, a newline token after each row, SOS/EOS around the sample) and the
line-numbered scheme, where each row separator carries its 1-based row number
so a purely local model can see how far into the sample it is.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from . import exact_linalg as xl
from .errors import ConversionError, DataError, UsageError
from .polytopes import DEFAULT_CAP, HRep, VRep, vertex_enumeration
from .properties import CONVEX_HULL, HYPERPLANE, REPS

STANDARD = "standard"
LINE_NUMBERED = "line_numbered"
SCHEMES = (STANDARD, LINE_NUMBERED)

PAD = "<pad>"
SOS = "<sos>"
EOS = "<eos>"
NEWLINE = "<nl>"


def newline_token(row_number: int) -> str:
    return f"<nl{row_number}>"


@dataclass(frozen=True)
class Sample:
    """One matrix with its representation tag and stable position id."""

    matrix: xl.IntMat
    rep: str
    id: int

    @property
    def d(self) -> int:
        return len(self.matrix[0])

    @property
    def n_rows(self) -> int:
        return len(self.matrix)


@dataclass(frozen=True)
class IllFormed:
    """A block that does not parse to a rectangular integer matrix."""

    id: int
    reason: str
    text: str = ""


ParseRecord = Sample | IllFormed


def parse_dataset(text: str, rep: str = HYPERPLANE) -> list[ParseRecord]:
    """Split *text* into samples; blocks are maximal runs of non-blank lines."""
    if rep not in REPS:
        raise UsageError(f"unknown representation {rep!r}")
    records: list[ParseRecord] = []
    block: list[str] = []

    def flush() -> None:
        if not block:
            return
        idx = len(records)
        raw = "\n".join(block)
        try:
            rows = [[int(tok) for tok in line.split()] for line in block]
        except ValueError:
            records.append(IllFormed(idx, "non-integer token", raw))
            block.clear()
            return
        width = len(rows[0])
        if width == 0 or any(len(r) != width for r in rows):
            records.append(IllFormed(idx, "ragged rows", raw))
        else:
            records.append(Sample(tuple(tuple(r) for r in rows), rep, idx))
        block.clear()

    for line in text.splitlines():
        if line.strip():
            block.append(line.strip())
        else:
            flush()
    flush()
    return records


def serialize(sample: Sample | Sequence[Sequence[int]]) -> str:
    """Canonical text of one matrix: space-separated rows, each newline-terminated."""
    matrix = sample.matrix if isinstance(sample, Sample) else sample
    return "".join(" ".join(str(int(x)) for x in row) + "\n" for row in matrix)


def write_dataset(records: Iterable[Sample | Sequence[Sequence[int]] | IllFormed], path: str | Path) -> int:
    """Write samples blank-line separated; ill-formed records keep their raw text."""
    blocks = []
    for rec in records:
        if isinstance(rec, IllFormed):
            blocks.append((rec.text.strip() or "invalid") + "\n")
        else:
            blocks.append(serialize(rec))
    Path(path).write_text("\n".join(blocks), encoding="utf-8")
    return len(blocks)


def load_dataset(path: str | Path, rep: str = HYPERPLANE) -> list[ParseRecord]:
    return parse_dataset(Path(path).read_text(encoding="utf-8"), rep)


def samples_of(records: Iterable[ParseRecord]) -> list[Sample]:
    return [r for r in records if isinstance(r, Sample)]


# ---------------------------------------------------------------------------
# tokenization
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Vocab:
    """Deterministic token <-> id bijection derived from a dataset.

    Order: specials, then the newline family, then integer-literal tokens
    sorted by value.  Generated sequences may only ever use these tokens.
    """

    scheme: str
    tokens: tuple[str, ...]
    index: dict[str, int] = field(repr=False, compare=False, default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "index", {t: i for i, t in enumerate(self.tokens)})

    def id(self, token: str) -> int:
        try:
            return self.index[token]
        except KeyError:
            raise DataError(f"token {token!r} not in vocabulary") from None

    def token(self, token_id: int) -> str:
        return self.tokens[token_id]

    @property
    def size(self) -> int:
        return len(self.tokens)

    @property
    def pad_id(self) -> int:
        return self.index[PAD]

    @property
    def sos_id(self) -> int:
        return self.index[SOS]

    @property
    def eos_id(self) -> int:
        return self.index[EOS]

    def newline_ids(self) -> frozenset[int]:
        return frozenset(
            i for t, i in self.index.items() if t == NEWLINE or (t.startswith("<nl") and t.endswith(">"))
        )


def build_vocab(samples: Iterable[Sample], scheme: str = STANDARD) -> Vocab:
    if scheme not in SCHEMES:
        raise UsageError(f"unknown tokenization scheme {scheme!r}")
    entries: set[int] = set()
    max_rows = 0
    for s in samples:
        max_rows = max(max_rows, s.n_rows)
        for row in s.matrix:
            entries.update(row)
    if scheme == STANDARD:
        newlines = [NEWLINE]
    else:
        newlines = [newline_token(k) for k in range(1, max_rows + 1)]
    tokens = [PAD, SOS, EOS, *newlines, *[str(v) for v in sorted(entries)]]
    return Vocab(scheme, tuple(tokens))


@dataclass(frozen=True)
class TokenSeq:
    ids: tuple[int, ...]
    scheme: str

    def __len__(self) -> int:
        return len(self.ids)


def tokenize(sample: Sample, vocab: Vocab) -> TokenSeq:
    """SOS, then each row's entry tokens and its newline token, then EOS."""
    ids = [vocab.sos_id]
    for r, row in enumerate(sample.matrix, start=1):
        ids.extend(vocab.id(str(x)) for x in row)
        ids.append(vocab.id(NEWLINE if vocab.scheme == STANDARD else newline_token(r)))
    ids.append(vocab.eos_id)
    return TokenSeq(tuple(ids), vocab.scheme)


def token_length(sample: Sample, include_specials: bool = True) -> int:
    """Length of the standard tokenization without building a vocabulary."""
    n = sample.n_rows * (sample.d + 1)
    return n + 2 if include_specials else n


def detokenize(seq: TokenSeq | Sequence[int], vocab: Vocab) -> xl.IntMat | IllFormed:
    """Inverse of ``tokenize`` on well-formed sequences.

    A sequence is well-formed when it is SOS, one or more newline-terminated
    runs of integer tokens forming a rectangular matrix, then EOS.  Newline
    tokens of either scheme act as plain row separators.  Anything else
    (missing EOS, ragged rows, empty rows, stray specials) is ill-formed.
    """
    ids = list(seq.ids if isinstance(seq, TokenSeq) else seq)
    if not ids or ids[0] != vocab.sos_id:
        return IllFormed(-1, "missing start token")
    if vocab.eos_id not in ids:
        return IllFormed(-1, "missing end token")
    newline_ids = vocab.newline_ids()
    rows: list[list[int]] = []
    row: list[int] = []
    for tid in ids[1:]:
        if tid == vocab.eos_id:
            break
        if tid in newline_ids:
            if not row:
                return IllFormed(-1, "empty row")
            rows.append(row)
            row = []
            continue
        tok = vocab.token(tid)
        try:
            row.append(int(tok))
        except ValueError:
            return IllFormed(-1, f"unexpected token {tok!r}")
    if row:
        return IllFormed(-1, "row not terminated before end token")
    if not rows:
        return IllFormed(-1, "no rows")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        return IllFormed(-1, "ragged rows")
    return tuple(tuple(r) for r in rows)


# ---------------------------------------------------------------------------
# statistics
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DatasetStats:
    count: int
    ill_formed: int
    d: int | None
    max_rows: int
    min_rows: int
    vocab_size: int
    max_tokens_incl_specials: int
    max_tokens_excl_specials: int
    entry_histogram: dict[int, int]
    vocab_tokens: tuple[str, ...]

    def as_dict(self) -> dict:
        return {
            "count": self.count,
            "ill_formed": self.ill_formed,
            "d": self.d,
            "max_rows": self.max_rows,
            "min_rows": self.min_rows,
            "vocab_size": self.vocab_size,
            "max_tokens_incl_specials": self.max_tokens_incl_specials,
            "max_tokens_excl_specials": self.max_tokens_excl_specials,
            "entry_histogram": {str(k): v for k, v in sorted(self.entry_histogram.items())},
            "vocab_tokens": list(self.vocab_tokens),
        }


def dataset_stats(records: Sequence[ParseRecord], scheme: str = STANDARD) -> DatasetStats:
    """Deterministic statistics used for reporting and ingestion validation.

    Token-length maxima are reported both with and without the SOS/EOS pair,
    since published sequence-length figures do not state their convention.
    """
    samples = samples_of(records)
    hist: dict[int, int] = {}
    max_len = 0
    max_rows = 0
    min_rows = 0
    d = None
    if samples:
        d = samples[0].d
        max_rows = max(s.n_rows for s in samples)
        min_rows = min(s.n_rows for s in samples)
        max_len = max(token_length(s, include_specials=False) for s in samples)
        for s in samples:
            for row in s.matrix:
                for x in row:
                    hist[x] = hist.get(x, 0) + 1
    vocab = build_vocab(samples, scheme) if samples else Vocab(scheme, (PAD, SOS, EOS))
    return DatasetStats(
        count=len(samples),
        ill_formed=len(records) - len(samples),
        d=d,
        max_rows=max_rows,
        min_rows=min_rows,
        vocab_size=vocab.size,
        max_tokens_incl_specials=max_len + 2 if samples else 0,
        max_tokens_excl_specials=max_len,
        entry_histogram=hist,
        vocab_tokens=vocab.tokens,
    )


# ---------------------------------------------------------------------------
# splits
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SplitSpec:
    seed: int
    fraction: tuple[int, int] = (1, 2)  # exact rational numerator/denominator


@dataclass(frozen=True)
class SplitManifest:
    seed: int
    fraction: tuple[int, int]
    half_a: tuple[int, ...]
    half_b: tuple[int, ...]

    def save(self, path: str | Path) -> None:
        payload = {
            "format": "polygen-split-v1",
            "seed": self.seed,
            "fraction": f"{self.fraction[0]}/{self.fraction[1]}",
            "half_a": list(self.half_a),
            "half_b": list(self.half_b),
        }
        Path(path).write_text(json.dumps(payload, sort_keys=True) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "SplitManifest":
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
        if payload.get("format") != "polygen-split-v1":
            raise DataError(f"{path}: not a split manifest")
        num, den = payload["fraction"].split("/")
        return cls(payload["seed"], (int(num), int(den)), tuple(payload["half_a"]), tuple(payload["half_b"]))


def half_split(records: Sequence[ParseRecord], spec: SplitSpec) -> SplitManifest:
    """Seeded random partition of sample ids; the first part gets ceil(n * fraction)."""
    from .rng import generator

    ids = [s.id for s in samples_of(records)]
    rng = generator(spec.seed)
    order = list(rng.permutation(len(ids)))
    num, den = spec.fraction
    take = math.ceil(len(ids) * num / den)
    chosen = sorted(ids[i] for i in order[:take])
    rest = sorted(set(ids) - set(chosen))
    return SplitManifest(spec.seed, spec.fraction, tuple(chosen), tuple(rest))


# ---------------------------------------------------------------------------
# representation conversion
# ---------------------------------------------------------------------------


def convert_rep(sample: Sample, cap: int = DEFAULT_CAP) -> Sample:
    """Switch between the inequality and convex-hull forms of one polytope.

    Hyperplane to hull: the integer vertex matrix (rows sorted); fails on
    fractional vertices or an unbounded region, which signals the sample does
    not encode a reflexive polytope.  Hull to hyperplane: facet enumeration
    normalized to the constant-1 form, translating the unique interior
    lattice point to the origin first when needed.
    """
    if sample.rep == HYPERPLANE:
        vd = vertex_enumeration(HRep.from_matrix(sample.matrix))
        if vd.rays:
            raise ConversionError("unbounded polyhedron has no convex-hull form")
        if not vd.integral():
            raise ConversionError("fractional vertices: not a lattice polytope")
        rows = tuple(sorted(tuple(int(x) for x in v) for v in vd.vertices))
        return Sample(rows, CONVEX_HULL, sample.id)

    from .properties import analyze, unique_interior_point

    p = VRep.from_matrix(sample.matrix)
    an = analyze(p)
    if not an.vd.full_dim:
        raise ConversionError("lower-dimensional hull has no constant-1 form")
    origin = unique_interior_point(an)
    if origin is None:
        raise ConversionError("not reflexive: interior lattice point not unique")
    rows = []
    for a, c in an.ineqs:
        shifted = c + xl.dot(a, origin)
        if shifted != 1:
            raise ConversionError("not reflexive: facet at lattice distance != 1")
        rows.append(a)
    return Sample(tuple(sorted(rows)), HYPERPLANE, sample.id)


def filter_by_vrep_length(samples: Sequence[Sample], threshold: int = 800, cap: int = DEFAULT_CAP) -> list[Sample]:
    """Keep hyperplane samples whose hull form tokenizes to fewer than *threshold* tokens.

    Counts the standard scheme including SOS/EOS.
    """
    kept = []
    for s in samples:
        hull_form = convert_rep(s, cap=cap)
        if token_length(hull_form, include_specials=True) < threshold:
            kept.append(s)
    return kept


# ---------------------------------------------------------------------------
# perturbation
# ---------------------------------------------------------------------------


def eligible_positions(matrix: Sequence[Sequence[int]]) -> list[tuple[int, int]]:
    """Positions holding an entry in {-1, 0, 1}, row-major order."""
    return [
        (i, j)
        for i, row in enumerate(matrix)
        for j, x in enumerate(row)
        if x in (-1, 0, 1)
    ]


def perturb(sample: Sample, rng: np.random.Generator) -> Sample:
    """Flip exactly one small entry: a 0 becomes +-1, a +-1 becomes 0."""
    spots = eligible_positions(sample.matrix)
    if not spots:
        raise DataError("no entry in {-1, 0, 1} to perturb")
    i, j = spots[int(rng.integers(len(spots)))]
    old = sample.matrix[i][j]
    new = (1 if int(rng.integers(2)) else -1) if old == 0 else 0
    rows = [list(r) for r in sample.matrix]
    rows[i][j] = new
    return Sample(tuple(tuple(r) for r in rows), sample.rep, sample.id)
