"""Session fixtures built on the shared helpers in support.py."""

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from support import SMOOTH_2D, SMOOTH_3D, make_corpus
from polygen.datasets import Sample, write_dataset
from polygen.properties import check_all


@pytest.fixture(scope="session")
def smooth2d_samples():
    """The five smooth reflexive polygon classes as samples (ids 0..4)."""
    samples = [Sample(rows, "hyperplane", i) for i, rows in enumerate(SMOOTH_2D.values())]
    for s in samples:
        assert check_all(s.matrix).all_correct, "smooth polygon fixture failed its own check"
    return samples


@pytest.fixture(scope="session")
def smooth3d_samples():
    """Verified smooth reflexive 3-polytope seeds (every flag true)."""
    samples = []
    for rows in SMOOTH_3D.values():
        if check_all(rows).all_correct:
            samples.append(Sample(rows, "hyperplane", len(samples)))
    assert len(samples) >= 4, "expected at least four verified 3d seed classes"
    return samples


@pytest.fixture(scope="session")
def corpus2d(smooth2d_samples):
    """120 distinct transforms of the smooth polygons: a tiny training dataset."""
    return make_corpus([s.matrix for s in smooth2d_samples], 120, seed=20240817)


@pytest.fixture(scope="session")
def corpus2d_file(corpus2d, tmp_path_factory):
    path = tmp_path_factory.mktemp("data") / "train2d.txt"
    write_dataset(corpus2d, path)
    return path


@pytest.fixture(scope="session")
def training2d(corpus2d):
    from polygen.harness import TrainingContext

    return TrainingContext(corpus2d)


@pytest.fixture(scope="session")
def index2d(training2d):
    return training2d.build_index()
