"""Toolkit for generative-model experiments on reflexive-polytope datasets.

Exact property verification (compact, lattice, reflexive, smooth, normal),
dataset tokenization and representation conversion, a count-based next-token
baseline, lattice-equivalence and memorization analysis, and deterministic
evaluation reports — served over HTTP with a thin CLI client.
"""

__version__ = "0.1.0"

from .datasets import (  # noqa: F401
    IllFormed,
    Sample,
    SplitManifest,
    SplitSpec,
    Vocab,
    build_vocab,
    convert_rep,
    dataset_stats,
    detokenize,
    filter_by_vrep_length,
    half_split,
    load_dataset,
    parse_dataset,
    perturb,
    serialize,
    tokenize,
)
from .equivalence import (  # noqa: F401
    DatasetIndex,
    EquivalenceWitness,
    InvariantKey,
    equivalent,
    exact_copy,
    find_equivalent_in_index,
    invariant_key,
    lattice_geometry,
    row_permutation_match,
    verify_witness,
)
from .harness import EvalReport, RunConfig, TrainingContext, evaluate, perturbation_experiment  # noqa: F401
from .ngram import NGramModel, fit, sample_tokens  # noqa: F401
from .polytopes import (  # noqa: F401
    DEFAULT_CAP,
    GeneralHRep,
    HRep,
    Hull,
    VertexData,
    VRep,
    dilate,
    dual,
    facet_enumeration,
    interior_lattice_points,
    lattice_points,
    vertex_enumeration,
)
from .properties import (  # noqa: F401
    PropertyReport,
    check_all,
    check_compact,
    check_lattice,
    check_normal,
    check_reflexive,
    check_smooth,
)
