"""Batch evaluation, experiments and reports.

``evaluate`` runs the property checks over a set of generated samples and,
for the fully correct ones, the memorization analyses against a training set:
exact copies, row permutations, index-backed equivalence resolution, and
split membership when a manifest is supplied.  ``perturbation_experiment``
measures property volatility under single-entry edits of dataset members.

Reports are deterministic: samples are checked in input order (a worker pool
only reorders execution, never aggregation), per-sample randomness is derived
from (seed, index), and the JSON/CSV emitters are canonical.  The recorded
config deliberately omits the worker count — it cannot affect any number and
reports must be byte-identical across thread counts.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

from .datasets import (
    HYPERPLANE,
    IllFormed,
    ParseRecord,
    Sample,
    SplitManifest,
    perturb,
    samples_of,
    serialize,
)
from .equivalence import (
    DatasetIndex,
    LatticeGeometry,
    find_equivalent_in_index,
    geometry_of_matrix,
    invariant_key,
    row_permutation_match,
)
from .errors import DataError, InconsistencyError, UsageError
from .polytopes import DEFAULT_CAP
from .properties import PropertyReport, check_all
from .rng import RNG_ALGORITHM, child_generators, require_algorithm


@dataclass(frozen=True)
class RunConfig:
    """Everything that determines a run's numbers, recorded into its report.

    ``threads`` steers execution only; it is excluded from the serialized
    config so reports stay byte-identical across worker counts.
    """

    dataset: str | None = None
    rep: str = HYPERPLANE
    samples: str | None = None
    num_samples: int | None = None
    seed: int | None = None
    threads: int = 1
    cap: int = DEFAULT_CAP
    split_manifest: str | None = None
    rng: str = RNG_ALGORITHM

    def __post_init__(self):
        require_algorithm(self.rng)

    def public_dict(self) -> dict:
        return {
            "dataset": self.dataset,
            "rep": self.rep,
            "samples": self.samples,
            "num_samples": self.num_samples,
            "seed": self.seed,
            "cap": self.cap,
            "split_manifest": self.split_manifest,
            "rng": self.rng,
        }


@dataclass
class EvalReport:
    config: dict
    totals: dict
    properties: dict
    intersections: dict
    all_correct: int
    ill_formed: int
    normal_unverified: int
    memorization: dict

    def validate(self) -> None:
        """Counting invariants every report must satisfy."""
        n = self.totals["samples"]
        props = self.properties
        inter = self.intersections
        for name, v in {**props, **inter}.items():
            if not 0 <= v <= n:
                raise InconsistencyError(f"count {name}={v} outside [0, {n}]")
        if props and self.all_correct > min(props.values()):
            raise InconsistencyError("all_correct exceeds a single-property count")
        if inter["compact_lattice"] > min(props["compact"], props["lattice"]):
            raise InconsistencyError("intersection exceeds component")
        if inter["compact_lattice_normal"] > inter["compact_lattice"]:
            raise InconsistencyError("intersection exceeds component")
        if inter["compact_lattice_not_smooth"] > inter["compact_lattice"]:
            raise InconsistencyError("intersection exceeds component")
        if inter["compact_not_smooth"] > props["compact"]:
            raise InconsistencyError("intersection exceeds component")
        mem = self.memorization
        if mem["copies"] > mem["resolved"] or mem["row_permutations"] > mem["resolved"]:
            raise InconsistencyError("memorization counts exceed resolved samples")
        if mem["resolved"] > self.all_correct:
            raise InconsistencyError("resolved exceeds all_correct")

    def as_dict(self) -> dict:
        return {
            "config": self.config,
            "totals": self.totals,
            "properties": self.properties,
            "intersections": self.intersections,
            "all_correct": self.all_correct,
            "ill_formed": self.ill_formed,
            "normal_unverified": self.normal_unverified,
            "memorization": self.memorization,
        }

    def to_json_bytes(self) -> bytes:
        return (json.dumps(self.as_dict(), sort_keys=True, indent=2) + "\n").encode("utf-8")

    CSV_ROWS = (
        ("All properties", lambda r: r.all_correct),
        ("Compact", lambda r: r.properties["compact"]),
        ("Lattice polyhedron", lambda r: r.properties["lattice"]),
        ("Smooth", lambda r: r.properties["smooth"]),
        ("Normal", lambda r: r.properties["normal"]),
        ("Compact+lattice", lambda r: r.intersections["compact_lattice"]),
        ("Compact+lattice+normal", lambda r: r.intersections["compact_lattice_normal"]),
        ("Compact+not smooth", lambda r: r.intersections["compact_not_smooth"]),
        ("Compact+lattice+not smooth", lambda r: r.intersections["compact_lattice_not_smooth"]),
        ("Copy", lambda r: r.memorization["copies"]),
        ("Permutation", lambda r: r.memorization["row_permutations"]),
        ("Ill-formed", lambda r: r.ill_formed),
        ("Normal unverified", lambda r: r.normal_unverified),
    )

    def to_csv_text(self) -> str:
        lines = ["row,count"]
        for label, getter in self.CSV_ROWS:
            lines.append(f"{label},{getter(self)}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_json(cls, data: bytes | str | dict) -> "EvalReport":
        if isinstance(data, (bytes, str)):
            data = json.loads(data)
        return cls(
            config=data["config"],
            totals=data["totals"],
            properties=data["properties"],
            intersections=data["intersections"],
            all_correct=data["all_correct"],
            ill_formed=data["ill_formed"],
            normal_unverified=data["normal_unverified"],
            memorization=data["memorization"],
        )


def emit_report(report: EvalReport, json_path: str | Path | None = None, csv_path: str | Path | None = None) -> None:
    if json_path is not None:
        Path(json_path).write_bytes(report.to_json_bytes())
    if csv_path is not None:
        Path(csv_path).write_text(report.to_csv_text(), encoding="utf-8")


# ---------------------------------------------------------------------------
# training context
# ---------------------------------------------------------------------------


class TrainingContext:
    """A loaded training dataset: samples, serialized texts, cached geometry."""

    def __init__(self, samples: Sequence[Sample]):
        self.samples = {s.id: s for s in samples}
        self.texts = {s.id: serialize(s) for s in samples}
        self.text_set = set(self.texts.values())
        self.d = next(iter(self.samples.values())).d if self.samples else None
        self._geometry: dict[int, LatticeGeometry] = {}

    def geometry(self, sample_id: int) -> LatticeGeometry:
        if sample_id not in self._geometry:
            s = self.samples[sample_id]
            self._geometry[sample_id] = geometry_of_matrix(s.matrix, s.rep)
        return self._geometry[sample_id]

    def build_index(self, threads: int = 1) -> DatasetIndex:
        ids = sorted(self.samples)
        keys = _parallel_map(
            _key_worker,
            [(self.samples[i].matrix, self.samples[i].rep) for i in ids],
            threads,
        )
        return DatasetIndex.build(zip(ids, keys))


# ---------------------------------------------------------------------------
# parallel primitives (top-level functions so they pickle)
# ---------------------------------------------------------------------------


def _parallel_map(fn: Callable, items: Sequence, threads: int) -> list:
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=threads) as ex:
        chunk = max(1, len(items) // (threads * 4))
        return list(ex.map(fn, items, chunksize=chunk))


def _check_worker(args: tuple) -> dict:
    matrix, rep, cap = args
    return check_all(matrix, rep, cap).as_dict()


def _key_worker(args: tuple) -> str:
    matrix, rep = args
    return invariant_key(geometry_of_matrix(matrix, rep)).as_string()


def _report_from_dict(d: dict) -> PropertyReport:
    return PropertyReport(
        compact=d["compact"],
        lattice=d["lattice"],
        reflexive=d["reflexive"],
        smooth=d["smooth"],
        normal=None if d["normal"] == "unverified" else d["normal"],
        ill_formed=d["ill_formed"],
    )


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------


def _aggregate(
    records: Sequence[ParseRecord],
    reports: Sequence[PropertyReport | None],
    config: RunConfig,
    training: TrainingContext | None = None,
    index: DatasetIndex | None = None,
    membership: SplitManifest | None = None,
) -> EvalReport:
    props = {"compact": 0, "lattice": 0, "reflexive": 0, "smooth": 0, "normal": 0}
    inter = {
        "compact_lattice": 0,
        "compact_lattice_normal": 0,
        "compact_not_smooth": 0,
        "compact_lattice_not_smooth": 0,
    }
    all_correct = ill_formed = unverified = 0
    mem = {"copies": 0, "row_permutations": 0, "resolved": 0, "half_a": 0, "half_b": 0}
    half_a = set(membership.half_a) if membership else set()
    half_b = set(membership.half_b) if membership else set()

    for record, report in zip(records, reports):
        if report is None or report.ill_formed:
            ill_formed += 1
            continue
        for name in ("compact", "lattice", "reflexive", "smooth"):
            props[name] += getattr(report, name)
        props["normal"] += report.normal is True
        unverified += report.normal is None
        inter["compact_lattice"] += report.compact and report.lattice
        inter["compact_lattice_normal"] += report.compact and report.lattice and report.normal is True
        inter["compact_not_smooth"] += report.compact and not report.smooth
        inter["compact_lattice_not_smooth"] += report.compact and report.lattice and not report.smooth
        if not report.all_correct:
            continue
        all_correct += 1
        if training is None or index is None:
            continue
        sample = record
        text = serialize(sample)
        if text in training.text_set:
            mem["copies"] += 1
        g = geometry_of_matrix(sample.matrix, sample.rep)
        hit = find_equivalent_in_index(g, index, training.geometry, text, training.texts.get)
        if hit is None:
            raise InconsistencyError(
                f"sample {sample.id} passed every check but matches no training sample; "
                "the dataset is complete, so this indicates a checker or index bug"
            )
        resolved_id, _ = hit
        mem["resolved"] += 1
        if row_permutation_match(sample.matrix, training.samples[resolved_id].matrix):
            mem["row_permutations"] += 1
        if resolved_id in half_a:
            mem["half_a"] += 1
        elif resolved_id in half_b:
            mem["half_b"] += 1

    report = EvalReport(
        config=config.public_dict(),
        totals={"samples": len(records)},
        properties=props,
        intersections=inter,
        all_correct=all_correct,
        ill_formed=ill_formed,
        normal_unverified=unverified,
        memorization=mem,
    )
    report.validate()
    return report


def evaluate(
    records: Sequence[ParseRecord],
    training: TrainingContext | None,
    index: DatasetIndex | None,
    config: RunConfig,
    membership: SplitManifest | None = None,
) -> EvalReport:
    """Property-check every sample; memorization analysis on the fully correct ones.

    Samples whose width differs from the training dimension cannot belong to
    the dataset and are counted ill-formed.  An all-correct sample that
    resolves to no training sample raises InconsistencyError (exit code 3):
    dataset completeness guarantees a match, so its absence is a bug.
    """
    payloads = []
    checkable: list[int] = []
    for i, rec in enumerate(records):
        if isinstance(rec, IllFormed):
            continue
        if training is not None and training.d is not None and rec.d != training.d:
            continue
        checkable.append(i)
        payloads.append((rec.matrix, rec.rep, config.cap))
    results = _parallel_map(_check_worker, payloads, config.threads)
    reports: list[PropertyReport | None] = [None] * len(records)
    for i, res in zip(checkable, results):
        reports[i] = _report_from_dict(res)
    return _aggregate(records, reports, config, training, index, membership)


def perturbation_experiment(
    records: Sequence[ParseRecord],
    config: RunConfig,
) -> EvalReport:
    """Draw samples with replacement, flip one small entry each, re-check.

    Draw indices and every per-sample edit derive from (seed, position), so
    the experiment is reproducible bit-for-bit at any worker count.
    """
    if config.seed is None or config.num_samples is None:
        raise UsageError("perturbation experiment needs --seed and --num-samples")
    samples = samples_of(records)
    if not samples and config.num_samples > 0:
        raise DataError("dataset holds no well-formed samples")
    n = config.num_samples
    perturbed: list[Sample] = []
    if n > 0:
        gens = child_generators(config.seed, n + 1)
        picks = [int(x) for x in gens[0].integers(len(samples), size=n)]
        for pos, pick in enumerate(picks):
            perturbed.append(perturb(samples[pick], gens[pos + 1]))
    results = _parallel_map(
        _check_worker, [(s.matrix, s.rep, config.cap) for s in perturbed], config.threads
    )
    reports = [_report_from_dict(r) for r in results]
    return _aggregate(perturbed, reports, config)
