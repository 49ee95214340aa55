"""Copy detection, row-permutation matching and lattice equivalence.

Two lattice polytopes are equivalent when an integer unimodular change of
basis plus an integer translation maps one vertex set onto the other.  The
search works on exact geometry (integer vertices, primitive facet normals)
and is pruned three ways: a global invariant key (vertex count, facet count,
facet-vertex pairing multiset), per-vertex pairing profiles, and pairwise
joint profiles.  Any witness the search produces is re-verified by explicitly
mapping the vertex set before it is returned.

A dataset index maps serialized invariant keys to sample ids so that the
equivalence search only ever runs inside small key buckets.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from . import exact_linalg as xl
from .errors import DataError, SingularMatrixError
from .polytopes import HRep, Ineq, IntVec, VRep
from .properties import HYPERPLANE, Analysis, analyze, unique_interior_point


@dataclass(frozen=True)
class EquivalenceWitness:
    """x -> u @ x + t maps the first polytope's vertex set onto the second's."""

    u: xl.IntMat
    t: IntVec


@dataclass(frozen=True)
class InvariantKey:
    n_vertices: int
    n_facets: int
    pairing: tuple[int, ...]  # sorted multiset of facet-vertex pairing values

    def as_string(self) -> str:
        runs = []
        i = 0
        while i < len(self.pairing):
            j = i
            while j < len(self.pairing) and self.pairing[j] == self.pairing[i]:
                j += 1
            runs.append(f"{self.pairing[i]}x{j - i}")
            i = j
        return f"v{self.n_vertices}.f{self.n_facets}.{','.join(runs)}"


@dataclass(frozen=True)
class LatticeGeometry:
    """Exact data of a compact lattice polytope used by the search."""

    d: int
    vertices: tuple[IntVec, ...]
    facets: tuple[Ineq, ...]  # primitive normals, irredundant
    interior: IntVec | None  # the unique interior lattice point, if exactly one


def _hrep_facets(an: Analysis) -> tuple[Ineq, ...]:
    """Distinct facet-defining rows of a constant-1 system.

    A row supports a facet exactly when its tight vertices affinely span a
    hyperplane, i.e. have homogeneous rank d.
    """
    facets = []
    for a, c in sorted(set(an.ineqs)):
        tight = [v + (1,) for v in an.vd.vertices if xl.dot(a, v) + c == 0]
        if tight and xl.rank(tight) == an.d:
            facets.append((a, c))
    return tuple(facets)


def lattice_geometry(p: HRep | VRep) -> LatticeGeometry:
    """Geometry for equivalence work; input must be a compact lattice polytope."""
    an = analyze(p)
    if an.vd.rays:
        raise DataError("lattice equivalence needs a compact polytope")
    if not an.vd.integral():
        raise DataError("lattice equivalence needs integral vertices")
    facets = _hrep_facets(an) if an.rep == HYPERPLANE else an.ineqs
    vertices = tuple(sorted(tuple(int(x) for x in v) for v in an.vd.vertices))
    return LatticeGeometry(an.d, vertices, facets, unique_interior_point(an))


def geometry_of_matrix(matrix: Sequence[Sequence[int]], rep: str) -> LatticeGeometry:
    p = HRep.from_matrix(matrix) if rep == HYPERPLANE else VRep.from_matrix(matrix)
    return lattice_geometry(p)


# ---------------------------------------------------------------------------
# invariants
# ---------------------------------------------------------------------------


def _pairing(a: IntVec, c: int, v: IntVec) -> int:
    # facet-vertex incidence value: slack shifted so facet contact reads -1;
    # equals a.v when the unique interior point sits at the origin and c = 1
    return xl.dot(a, v) + c - 1


def invariant_key(g: LatticeGeometry) -> InvariantKey:
    vals = sorted(_pairing(a, c, v) for a, c in g.facets for v in g.vertices)
    return InvariantKey(len(g.vertices), len(g.facets), tuple(vals))


def _vertex_profiles(g: LatticeGeometry) -> list[tuple[int, ...]]:
    return [tuple(sorted(_pairing(a, c, v) for a, c in g.facets)) for v in g.vertices]


def _joint_profile(g: LatticeGeometry, i: int, j: int) -> tuple[tuple[int, int], ...]:
    vi, vj = g.vertices[i], g.vertices[j]
    return tuple(sorted((_pairing(a, c, vi), _pairing(a, c, vj)) for a, c in g.facets))


# ---------------------------------------------------------------------------
# copies and permutations
# ---------------------------------------------------------------------------


def exact_copy(sample_text: str, training_texts: Iterable[str]) -> bool:
    """Byte-for-byte equality of the serialized sample with a training sample."""
    if isinstance(training_texts, (set, frozenset, dict)):
        return sample_text in training_texts
    return any(sample_text == t for t in training_texts)


def row_permutation_match(rows_a: Sequence[Sequence[int]], rows_b: Sequence[Sequence[int]]) -> bool:
    """Equal row multisets: the cheapest nontrivial coordinate change."""
    return sorted(map(tuple, rows_a)) == sorted(map(tuple, rows_b))


# ---------------------------------------------------------------------------
# the equivalence search
# ---------------------------------------------------------------------------


def verify_witness(
    g1: LatticeGeometry, g2: LatticeGeometry, u: Sequence[Sequence[int]], t: Sequence[int]
) -> bool:
    """Independent re-check: u unimodular and u.v + t a vertex-set bijection."""
    if not xl.is_unimodular(u):
        return False
    image = {tuple(xl.vec_add(xl.mat_vec(u, v), t)) for v in g1.vertices}
    return image == set(g2.vertices)


def _independent_anchor_indices(vertices: Sequence[IntVec], base: IntVec, count: int) -> list[int] | None:
    """Indices of *count* vertices with linearly independent offsets from base."""
    picked: list[int] = []
    rows: list[tuple[int, ...]] = []
    for i, v in enumerate(vertices):
        cand = rows + [xl.vec_sub(v, base)]
        if xl.rank(cand) == len(cand):
            picked.append(i)
            rows = cand
            if len(picked) == count:
                return picked
    return None


def _solve_u(offsets_p: Sequence[IntVec], offsets_q: Sequence[IntVec], d: int) -> xl.IntMat | None:
    """Integer u with u @ p_k = q_k for all k, or None."""
    try:
        rows = []
        for i in range(d):
            # row i of u solves  [p_1 ... p_d]^T  u_i = (q_1[i] ... q_d[i])
            sol = xl.solve(offsets_p, [q[i] for q in offsets_q])
            if any(x.denominator != 1 for x in sol):
                return None
            rows.append(tuple(int(x) for x in sol))
        return tuple(rows)
    except SingularMatrixError:
        return None


def equivalent(g1: LatticeGeometry, g2: LatticeGeometry) -> EquivalenceWitness | None:
    """Search for a unimodular map + translation between two polytopes.

    When both polytopes have a unique interior lattice point the translation
    is fixed by matching those points and only the linear part is searched;
    otherwise an extra affine anchor joins the search.  Candidate assignments
    are restricted by per-vertex pairing profiles and pairwise joint
    profiles; every leaf solves exactly for u and verifies the full vertex
    bijection, so a returned witness is always sound.
    """
    if g1.d != g2.d or len(g1.vertices) != len(g2.vertices) or len(g1.facets) != len(g2.facets):
        return None
    if invariant_key(g1) != invariant_key(g2):
        return None
    d = g1.d

    prof1 = _vertex_profiles(g1)
    prof2 = _vertex_profiles(g2)
    if sorted(prof1) != sorted(prof2):
        return None

    centered = g1.interior is not None and g2.interior is not None
    base1: IntVec = g1.interior if centered else (0,) * d
    jcache1: dict[tuple[int, int], tuple] = {}
    jcache2: dict[tuple[int, int], tuple] = {}

    if centered:
        anchors = _independent_anchor_indices(g1.vertices, base1, d)
        if anchors is None:
            return None
        anchor_offsets = [xl.vec_sub(g1.vertices[i], base1) for i in anchors]
    else:
        # general case: first anchor fixes the translation
        anchors = None
        for b_idx, b in enumerate(g1.vertices):
            rest = _independent_anchor_indices(g1.vertices, b, d)
            if rest is not None:
                anchors = [b_idx] + rest
                break
        if anchors is None:
            return None

    def joint1(i: int, j: int) -> tuple:
        if (i, j) not in jcache1:
            jcache1[(i, j)] = _joint_profile(g1, i, j)
        return jcache1[(i, j)]

    def joint2(i: int, j: int) -> tuple:
        if (i, j) not in jcache2:
            jcache2[(i, j)] = _joint_profile(g2, i, j)
        return jcache2[(i, j)]

    n = len(g2.vertices)
    assignment: list[int] = []

    def compatible(pi: int, qi: int) -> bool:
        if prof1[anchors[pi]] != prof2[qi]:
            return False
        # pair order must follow the assignment, not the vertex indexing
        for k in range(len(assignment)):
            if joint1(anchors[k], anchors[pi]) != joint2(assignment[k], qi):
                return False
        return True

    def finish(images: list[int]) -> EquivalenceWitness | None:
        if centered:
            base2 = g2.interior
            offs_q = [xl.vec_sub(g2.vertices[i], base2) for i in images]
            u = _solve_u(anchor_offsets, offs_q, d)
            if u is None:
                return None
            t = xl.vec_sub(base2, xl.mat_vec(u, base1))
        else:
            b1 = g1.vertices[anchors[0]]
            b2 = g2.vertices[images[0]]
            offs_p = [xl.vec_sub(g1.vertices[i], b1) for i in anchors[1:]]
            offs_q = [xl.vec_sub(g2.vertices[i], b2) for i in images[1:]]
            u = _solve_u(offs_p, offs_q, d)
            if u is None:
                return None
            t = xl.vec_sub(b2, xl.mat_vec(u, b1))
        if verify_witness(g1, g2, u, tuple(t)):
            return EquivalenceWitness(u, tuple(int(x) for x in t))
        return None

    def search(pos: int) -> EquivalenceWitness | None:
        if pos == len(anchors):
            return finish(assignment)
        for qi in range(n):
            if qi in assignment or not compatible(pos, qi):
                continue
            assignment.append(qi)
            found = search(pos + 1)
            if found is not None:
                return found
            assignment.pop()
        return None

    return search(0)


# ---------------------------------------------------------------------------
# dataset index
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DatasetIndex:
    """Immutable map from serialized invariant key to training sample ids."""

    by_key: dict[str, tuple[int, ...]]

    @classmethod
    def build(cls, keys: Iterable[tuple[int, str]]) -> "DatasetIndex":
        buckets: dict[str, list[int]] = {}
        for sample_id, key in keys:
            buckets.setdefault(key, []).append(sample_id)
        return cls({k: tuple(sorted(v)) for k, v in buckets.items()})

    def candidates(self, key: str) -> tuple[int, ...]:
        return self.by_key.get(key, ())

    def save(self, path: str | Path) -> None:
        payload = {"format": "polygen-index-v1", "keys": {k: list(v) for k, v in sorted(self.by_key.items())}}
        Path(path).write_text(json.dumps(payload, sort_keys=True) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "DatasetIndex":
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
        if payload.get("format") != "polygen-index-v1":
            raise DataError(f"{path}: not an index file")
        return cls({k: tuple(v) for k, v in payload["keys"].items()})


def find_equivalent_in_index(
    g: LatticeGeometry,
    index: DatasetIndex,
    geometry_by_id,
    sample_text: str | None = None,
    text_by_id=None,
) -> tuple[int, EquivalenceWitness] | None:
    """Resolve a polytope to an equivalent training sample through the index.

    Candidates sharing the invariant key are tried in ascending id order
    (after an exact-text shortcut when the serialized sample is supplied);
    the first verified witness wins.  Returns None when the bucket holds no
    equivalent sample — for an all-correct sample over a complete dataset
    that indicates an internal inconsistency upstream.
    """
    key = invariant_key(g).as_string()
    candidates = list(index.candidates(key))
    if sample_text is not None and text_by_id is not None:
        exact = [i for i in candidates if text_by_id(i) == sample_text]
        candidates = exact + [i for i in candidates if i not in exact]
    for sample_id in candidates:
        other = geometry_by_id(sample_id)
        witness = equivalent(g, other)
        if witness is not None:
            return sample_id, witness
    return None
