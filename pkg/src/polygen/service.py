"""HTTP service exposing the toolkit.

The service owns all file access and computation; the CLI is a thin client.
Relative paths in requests resolve against the POLYGEN_DATA_DIR environment
variable when it is set (the conventional root for dataset files), otherwise
against the working directory.  Failures map onto the error contract shared
with the CLI: usage 400, data 422, internal inconsistency 500, each carrying
``{"error": {"kind", "message"}}``.
"""

from __future__ import annotations

import os
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from . import __version__
from .datasets import (
    CONVEX_HULL,
    HYPERPLANE,
    IllFormed,
    SplitManifest,
    SplitSpec,
    dataset_stats,
    detokenize,
    filter_by_vrep_length,
    convert_rep,
    half_split,
    load_dataset,
    parse_dataset,
    samples_of,
    serialize,
    write_dataset,
)
from .equivalence import DatasetIndex
from .errors import DataError, PolygenError, UsageError
from .harness import EvalReport, RunConfig, TrainingContext, evaluate, perturbation_experiment
from .ngram import NGramModel, fit, sample_tokens
from .polytopes import DEFAULT_CAP
from .properties import check_all
from .rng import child_generators

app = FastAPI(title="polygen", version=__version__)

_STATUS_BY_KIND = {"usage": 400, "data": 422, "inconsistency": 500}

REP_ALIASES = {"h": HYPERPLANE, "v": CONVEX_HULL, HYPERPLANE: HYPERPLANE, CONVEX_HULL: CONVEX_HULL}


def _rep(name: str) -> str:
    try:
        return REP_ALIASES[name]
    except KeyError:
        raise UsageError(f"unknown representation {name!r}; use h or v") from None


def resolve_path(p: str, must_exist: bool = True) -> Path:
    """Inputs resolve against the working directory, then POLYGEN_DATA_DIR."""
    path = Path(p)
    if must_exist and not path.exists():
        root = os.environ.get("POLYGEN_DATA_DIR")
        if not path.is_absolute() and root and (Path(root) / path).exists():
            return Path(root) / path
        raise DataError(f"no such file: {p}")
    return path


@app.exception_handler(PolygenError)
async def _polygen_error(request: Request, exc: PolygenError):
    status = _STATUS_BY_KIND.get(exc.kind, 500)
    return JSONResponse(status_code=status, content={"error": {"kind": exc.kind, "message": str(exc)}})


@app.exception_handler(FileNotFoundError)
async def _missing_file(request: Request, exc: FileNotFoundError):
    return JSONResponse(status_code=422, content={"error": {"kind": "data", "message": str(exc)}})


@app.get("/healthz")
def healthz():
    return {"status": "ok", "version": __version__}


# ---------------------------------------------------------------------------
# requests
# ---------------------------------------------------------------------------


class DatasetRequest(BaseModel):
    data: str | None = None
    text: str | None = None
    rep: str = "h"

    def records(self):
        if (self.data is None) == (self.text is None):
            raise UsageError("provide exactly one of 'data' (path) or 'text'")
        rep = _rep(self.rep)
        if self.data is not None:
            return load_dataset(resolve_path(self.data), rep)
        return parse_dataset(self.text, rep)


class CheckRequest(DatasetRequest):
    cap: int = DEFAULT_CAP


class StatsRequest(DatasetRequest):
    scheme: str = "standard"


class ConvertRequest(DatasetRequest):
    out: str | None = None
    cap: int = DEFAULT_CAP


class FilterRequest(DatasetRequest):
    threshold: int = 800
    out: str | None = None
    cap: int = DEFAULT_CAP


class SplitRequest(DatasetRequest):
    seed: int = 0
    out: str | None = None


class PerturbRequest(DatasetRequest):
    seed: int = 0
    num_samples: int = 1000
    out: str | None = None


class BaselineFitRequest(DatasetRequest):
    order: int = 10
    scheme: str = "line_numbered"
    out: str = Field(..., description="where to store the fitted model")


class BaselineSampleRequest(BaseModel):
    model: str
    num_samples: int = 1000
    seed: int = 0
    max_len: int | None = None
    out: str | None = None


class IndexBuildRequest(DatasetRequest):
    out: str = Field(..., description="where to store the index")
    threads: int = 1


class EvaluateRequest(BaseModel):
    samples: str | None = None
    samples_text: str | None = None
    data: str = Field(..., description="training dataset path")
    rep: str = "h"
    index: str = Field(..., description="index file built from the training dataset")
    split_manifest: str | None = None
    threads: int = 1
    cap: int = DEFAULT_CAP
    seed: int | None = None
    out: str | None = None
    csv: str | None = None


class PerturbationExperimentRequest(BaseModel):
    data: str
    rep: str = "h"
    seed: int = 0
    num_samples: int = 1000
    threads: int = 1
    cap: int = DEFAULT_CAP
    out: str | None = None
    csv: str | None = None


class ReportRequest(BaseModel):
    report: str
    format: str = "csv"
    out: str | None = None


# ---------------------------------------------------------------------------
# endpoints
# ---------------------------------------------------------------------------


@app.post("/v1/ingest")
def ingest(req: DatasetRequest):
    records = req.records()
    samples = samples_of(records)
    widths = sorted({s.d for s in samples})
    row_bound_violations = []
    if len(widths) == 1:
        d = widths[0]
        # members of a complete dataset have between d+1 and 3d inequalities
        row_bound_violations = [s.id for s in samples if not d + 1 <= s.n_rows <= 3 * d]
    return {
        "records": len(records),
        "samples": len(samples),
        "ill_formed": [r.id for r in records if isinstance(r, IllFormed)],
        "widths": widths,
        "row_bound_violations": row_bound_violations[:100],
    }


@app.post("/v1/stats")
def stats(req: StatsRequest):
    return dataset_stats(req.records(), req.scheme).as_dict()


@app.post("/v1/check")
def check(req: CheckRequest):
    records = req.records()
    reports = []
    counts = {"compact": 0, "lattice": 0, "reflexive": 0, "smooth": 0, "normal": 0}
    all_correct = ill_formed = unverified = 0
    for rec in records:
        if isinstance(rec, IllFormed):
            reports.append({"id": rec.id, "ill_formed": True, "reason": rec.reason})
            ill_formed += 1
            continue
        rep = check_all(rec.matrix, rec.rep, req.cap)
        d = rep.as_dict()
        d["id"] = rec.id
        reports.append(d)
        for k in counts:
            counts[k] += d[k] is True
        all_correct += rep.all_correct
        unverified += rep.normal_unverified
        ill_formed += rep.ill_formed
    return {
        "totals": {"samples": len(records)},
        "properties": counts,
        "all_correct": all_correct,
        "ill_formed": ill_formed,
        "normal_unverified": unverified,
        "reports": reports,
    }


@app.post("/v1/convert")
def convert(req: ConvertRequest):
    records = req.records()
    converted = []
    for rec in records:
        if isinstance(rec, IllFormed):
            raise DataError(f"sample {rec.id} is ill-formed ({rec.reason}); cannot convert")
        converted.append(convert_rep(rec, cap=req.cap))
    if req.out:
        write_dataset(converted, resolve_path(req.out, must_exist=False))
        return {"samples": len(converted), "out": req.out}
    return {
        "samples": len(converted),
        "text": "\n".join(serialize(s) for s in converted),
    }


@app.post("/v1/filter")
def filter_vrep(req: FilterRequest):
    samples = samples_of(req.records())
    kept = filter_by_vrep_length(samples, req.threshold, cap=req.cap)
    result = {"total": len(samples), "kept": len(kept), "threshold": req.threshold}
    if req.out:
        write_dataset(kept, resolve_path(req.out, must_exist=False))
        result["out"] = req.out
    else:
        result["ids"] = [s.id for s in kept]
    return result


@app.post("/v1/split")
def split(req: SplitRequest):
    manifest = half_split(req.records(), SplitSpec(seed=req.seed))
    if req.out:
        manifest.save(resolve_path(req.out, must_exist=False))
    return {
        "seed": manifest.seed,
        "fraction": f"{manifest.fraction[0]}/{manifest.fraction[1]}",
        "half_a": len(manifest.half_a),
        "half_b": len(manifest.half_b),
        "out": req.out,
    }


@app.post("/v1/perturb")
def perturb_endpoint(req: PerturbRequest):
    from .datasets import perturb as perturb_sample

    samples = samples_of(req.records())
    if not samples:
        raise DataError("dataset holds no well-formed samples")
    gens = child_generators(req.seed, req.num_samples + 1)
    picks = [int(x) for x in gens[0].integers(len(samples), size=req.num_samples)]
    out_samples = [perturb_sample(samples[pick], gens[i + 1]) for i, pick in enumerate(picks)]
    if req.out:
        write_dataset(out_samples, resolve_path(req.out, must_exist=False))
        return {"samples": len(out_samples), "out": req.out}
    return {"samples": len(out_samples), "text": "\n".join(serialize(s) for s in out_samples)}


@app.post("/v1/baseline/fit")
def baseline_fit(req: BaselineFitRequest):
    samples = samples_of(req.records())
    model = fit(samples, n=req.order, scheme=req.scheme)
    model.save(resolve_path(req.out, must_exist=False))
    return {
        "samples": len(samples),
        "order": model.n,
        "contexts": len(model.counts),
        "vocab_size": model.vocab.size,
        "out": req.out,
    }


@app.post("/v1/baseline/sample")
def baseline_sample(req: BaselineSampleRequest):
    model = NGramModel.load(resolve_path(req.model))
    gens = child_generators(req.seed, req.num_samples)
    blocks = []
    parseable = 0
    for rng in gens:
        seq = sample_tokens(model, rng, req.max_len)
        matrix = detokenize(seq, model.vocab)
        if isinstance(matrix, IllFormed):
            # keep the slot so sample counts survive the round trip; the
            # token text itself parses as an ill-formed block
            body = " ".join(model.vocab.token(t) for t in seq.ids)
            blocks.append(body + "\n")
        else:
            parseable += 1
            blocks.append(serialize(matrix))
    text = "\n".join(blocks)
    result = {"samples": req.num_samples, "parseable": parseable}
    if req.out:
        resolve_path(req.out, must_exist=False).write_text(text, encoding="utf-8")
        result["out"] = req.out
    else:
        result["text"] = text
    return result


@app.post("/v1/index/build")
def index_build(req: IndexBuildRequest):
    samples = samples_of(req.records())
    if not samples:
        raise DataError("dataset holds no well-formed samples")
    ctx = TrainingContext(samples)
    index = ctx.build_index(threads=req.threads)
    index.save(resolve_path(req.out, must_exist=False))
    return {"samples": len(samples), "keys": len(index.by_key), "out": req.out}


@app.post("/v1/evaluate")
def evaluate_endpoint(req: EvaluateRequest):
    rep = _rep(req.rep)
    if (req.samples is None) == (req.samples_text is None):
        raise UsageError("provide exactly one of 'samples' (path) or 'samples_text'")
    if req.samples is not None:
        records = load_dataset(resolve_path(req.samples), rep)
    else:
        records = parse_dataset(req.samples_text, rep)
    training = TrainingContext(samples_of(load_dataset(resolve_path(req.data), rep)))
    index = DatasetIndex.load(resolve_path(req.index))
    membership = SplitManifest.load(resolve_path(req.split_manifest)) if req.split_manifest else None
    config = RunConfig(
        dataset=req.data,
        rep=rep,
        samples=req.samples,
        num_samples=len(records),
        seed=req.seed,
        threads=req.threads,
        cap=req.cap,
        split_manifest=req.split_manifest,
    )
    report = evaluate(records, training, index, config, membership)
    if req.out:
        resolve_path(req.out, must_exist=False).write_bytes(report.to_json_bytes())
    if req.csv:
        resolve_path(req.csv, must_exist=False).write_text(report.to_csv_text(), encoding="utf-8")
    return report.as_dict()


@app.post("/v1/experiments/perturbation")
def perturbation_endpoint(req: PerturbationExperimentRequest):
    rep = _rep(req.rep)
    records = load_dataset(resolve_path(req.data), rep)
    config = RunConfig(
        dataset=req.data,
        rep=rep,
        num_samples=req.num_samples,
        seed=req.seed,
        threads=req.threads,
        cap=req.cap,
    )
    report = perturbation_experiment(records, config)
    if req.out:
        resolve_path(req.out, must_exist=False).write_bytes(report.to_json_bytes())
    if req.csv:
        resolve_path(req.csv, must_exist=False).write_text(report.to_csv_text(), encoding="utf-8")
    return report.as_dict()


@app.post("/v1/report")
def report_endpoint(req: ReportRequest):
    report = EvalReport.from_json(resolve_path(req.report).read_text(encoding="utf-8"))
    if req.format == "csv":
        text = report.to_csv_text()
    elif req.format == "json":
        text = report.to_json_bytes().decode("utf-8")
    else:
        raise UsageError(f"unknown report format {req.format!r}")
    if req.out:
        resolve_path(req.out, must_exist=False).write_text(text, encoding="utf-8")
        return {"out": req.out}
    return {"text": text}
