"""Session fixtures: the surrogate corpus file and one shared training run."""

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from corpuslib import corpus_text, make_corpus, run_polygen, CORPUS_SEED


@pytest.fixture(scope="session")
def corpus_file(tmp_path_factory) -> Path:
    path = tmp_path_factory.mktemp("neural-data") / "train3d.txt"
    path.write_text(corpus_text(make_corpus()), encoding="utf-8")
    # the training corpus must consist entirely of correct samples; verify a
    # slice through the evaluation surface
    probe = tmp_path_factory.mktemp("neural-data") / "probe.txt"
    probe.write_text(corpus_text(make_corpus(n=60, seed=CORPUS_SEED)), encoding="utf-8")
    body = run_polygen("check", "--data", str(probe))
    assert body["all_correct"] == 60, "surrogate corpus contains incorrect samples"
    return path


@pytest.fixture(scope="session")
def transformer_run(corpus_file, tmp_path_factory):
    """One real training + generation run shared by the acceptance tests."""
    from polygen_neural import GenerationRun, ModelConfig, generate, train

    workdir = tmp_path_factory.mktemp("transformer")
    checkpoint = workdir / "transformer.pt"
    payload = train(corpus_file, ModelConfig(arch="transformer", epochs=24, seed=0), checkpoint, log=lambda *_: None)
    samples = workdir / "generated.txt"
    result = generate(checkpoint, GenerationRun(num_samples=1000, seed=5), samples)
    return {"payload": payload, "samples": samples, "result": result, "checkpoint": checkpoint}
