"""The five global property verdicts and their dependency semantics.

For an inequality sample the informative checks are compactness, vertex
integrality, smoothness and normality; constant-1 inequality systems that are
compact lattice polytopes are automatically reflexive.  For a convex-hull
sample compactness and integrality hold by construction, so reflexivity,
smoothness and normality carry the information.

Conventions, chosen here and recorded in reports:

* smoothness is the geometric condition on lattice polyhedra — pointed,
  full-dimensional, integral vertices, and at every vertex exactly d edge
  directions whose primitive vectors form a determinant +-1 matrix.
  Boundedness is not part of it; an unbounded pointed polyhedron with
  unimodular vertex cones counts as smooth (and fails compactness).
* non-compact input is not normal; neither is anything with a fractional
  vertex.
* lower-dimensional polytopes are never reflexive or smooth; compactness and
  integrality are judged as-is and normality runs in the ambient lattice.
* a normality decomposition that outgrows the lattice-point cap yields the
  distinct value "unverified" (``None``), never a silent false.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from . import exact_linalg as xl
from .errors import CapExceededError, DataError, DimensionError, SingularMatrixError
from .polytopes import (
    DEFAULT_CAP,
    MAX_DIM,
    GeneralHRep,
    HRep,
    Hull,
    Ineq,
    IntVec,
    VertexData,
    VRep,
    _as_ineqs,
    _dd_extreme_rays,
    _enumerate_lattice_points,
    _vertex_box,
    facet_enumeration,
    vertex_enumeration,
)

HYPERPLANE = "hyperplane"
CONVEX_HULL = "convex_hull"
REPS = (HYPERPLANE, CONVEX_HULL)


@dataclass(frozen=True)
class PropertyReport:
    """Verdicts for one sample; ``normal`` is True/False/None (unverified)."""

    compact: bool = False
    lattice: bool = False
    reflexive: bool = False
    smooth: bool = False
    normal: bool | None = False
    ill_formed: bool = False

    @property
    def normal_unverified(self) -> bool:
        return self.normal is None

    @property
    def all_correct(self) -> bool:
        return (
            not self.ill_formed
            and self.compact
            and self.lattice
            and self.reflexive
            and self.smooth
            and self.normal is True
        )

    def as_dict(self) -> dict:
        return {
            "compact": self.compact,
            "lattice": self.lattice,
            "reflexive": self.reflexive,
            "smooth": self.smooth,
            "normal": "unverified" if self.normal is None else self.normal,
            "all_correct": self.all_correct,
            "ill_formed": self.ill_formed,
        }


ILL_FORMED_REPORT = PropertyReport(ill_formed=True)


@dataclass(frozen=True)
class NormalCheck:
    verdict: bool | None  # None: enumeration outgrew the cap
    witness: IntVec | None = None  # point of kP with no decomposition


@dataclass(frozen=True)
class Analysis:
    """Shared exact geometry of one sample, computed once per check_all."""

    d: int
    rep: str
    vd: VertexData
    ineqs: tuple[Ineq, ...]  # facet inequalities (hyperplane rows as (w, 1))
    equalities: tuple[Ineq, ...]


def analyze(p: HRep | VRep) -> Analysis:
    if isinstance(p, HRep):
        vd = vertex_enumeration(p)
        return Analysis(p.d, HYPERPLANE, vd, tuple((row, 1) for row in p.rows), ())
    hull = facet_enumeration(p)
    return Analysis(p.d, CONVEX_HULL, hull.vertex_data, hull.facets.ineqs, hull.equalities)


# ---------------------------------------------------------------------------
# individual checks
# ---------------------------------------------------------------------------


def check_compact(vd: VertexData) -> bool:
    """Bounded iff the recession cone is trivial."""
    return not vd.rays


def check_lattice(vd: VertexData) -> bool:
    """All vertices integral; vacuously true when there are no vertices."""
    return vd.integral()


def unique_interior_point(an: Analysis) -> IntVec | None:
    """The unique interior lattice point, or None if there is not exactly one.

    Enumerates with an early exit after two hits, so arbitrarily large
    interiors cost nothing.
    """
    if an.equalities or not an.vd.vertices:
        return None
    try:
        pts = _enumerate_lattice_points(an.ineqs, _vertex_box(an.vd.vertices), cap=1, strict=True)
    except CapExceededError:
        return None
    return pts[0] if len(pts) == 1 else None


def check_reflexive(p: HRep | VRep, an: Analysis | None = None) -> bool:
    """Dual polytope is again a lattice polytope.

    Constant-1 inequality samples: equivalent to compact + lattice (the dual
    is the hull of the integer rows).  Convex-hull samples: compact lattice
    polytope, full-dimensional, with exactly one interior lattice point, and
    after translating it to the origin every facet is at lattice distance 1
    (primitive normal a, constant 1).
    """
    an = an or analyze(p)
    if not (check_compact(an.vd) and check_lattice(an.vd)):
        return False
    if an.rep == HYPERPLANE:
        return True
    if not an.vd.full_dim:
        return False
    origin = unique_interior_point(an)
    if origin is None:
        return False
    return all(c + xl.dot(a, origin) == 1 for a, c in an.ineqs)


def _tangent_cone_edges(normals: Sequence[IntVec], d: int) -> list[IntVec] | None:
    """Primitive edge directions at a vertex whose tight facet normals are given.

    Returns None when the vertex is not simple (edge count != d).  The tight
    normals always have rank d at a genuine vertex; when there are exactly d
    of them the cone is simplicial and the edges are the columns of the
    inverse matrix, otherwise the extreme rays of {y : n.y >= 0} are computed
    directly.
    """
    if len(normals) == d:
        try:
            inv = xl.inverse(normals)
        except SingularMatrixError:
            return None
        return [xl.primitive(tuple(row[j] for row in inv)) for j in range(d)]
    lineality, rays = _dd_extreme_rays(tuple(normals))
    if lineality or len(rays) != d:
        return None
    return [r for r, _ in rays]


def check_smooth(p: HRep | VRep | None, an: Analysis | None = None) -> bool:
    """Every vertex has exactly d emanating edges forming a Z-basis.

    Requires a pointed, full-dimensional lattice polyhedron; each vertex's
    tangent cone must be simplicial with primitive edge matrix of
    determinant +-1.  Duplicate and redundant tight inequalities are
    deduplicated before the cone is examined.
    """
    an = an or analyze(p)
    vd = an.vd
    if not vd.vertices or not vd.full_dim or not vd.integral():
        return False
    for v, tight in zip(vd.vertices, vd.tight_sets):
        normals = sorted({an.ineqs[i][0] for i in tight})
        edges = _tangent_cone_edges(normals, an.d)
        if edges is None:
            return False
        if abs(xl.det(edges)) != 1:
            return False
    return True


def check_normal(p: HRep | VRep | GeneralHRep | Hull, cap: int = DEFAULT_CAP) -> NormalCheck:
    """Inductive decomposition check of normality.

    For k = 2 .. max(1, d-1) every lattice point of kP must split as a
    lattice point of (k-1)P plus a lattice point of P; beyond k = d-1
    decomposability is automatic, so these checks decide normality.  Fails
    with the first non-decomposable witness; outgrowing the lattice-point cap
    yields the distinct unverified outcome.
    """
    if isinstance(p, VRep):
        p = facet_enumeration(p)
    if isinstance(p, Hull):
        d = p.facets.d
        ineqs = list(p.facets.ineqs)
        eqs = p.equalities
        vertices = p.vertex_data.vertices
    else:
        d = p.d
        vd = vertex_enumeration(p)
        if vd.rays:
            return NormalCheck(False)
        _, ineqs = _as_ineqs(p)
        ineqs = list(ineqs)
        eqs = ()
        vertices = vd.vertices
    if not vertices:
        return NormalCheck(True)

    def system(scale: int) -> list[Ineq]:
        rows = [(a, scale * c) for a, c in ineqs]
        for a, c in eqs:
            rows.append((a, scale * c))
            rows.append((tuple(-x for x in a), -scale * c))
        return rows

    def member(z: IntVec, rows: Sequence[Ineq]) -> bool:
        return all(xl.dot(a, z) + c >= 0 for a, c in rows)

    try:
        base_points = _enumerate_lattice_points(system(1), _vertex_box(vertices), cap)
        for k in range(2, max(1, d - 1) + 1):
            k_points = _enumerate_lattice_points(system(k), _vertex_box(vertices, scale=k), cap)
            prev_rows = system(k - 1)
            for z in k_points:
                if not any(member(xl.vec_sub(z, q), prev_rows) for q in base_points):
                    return NormalCheck(False, witness=z)
    except CapExceededError:
        return NormalCheck(None)
    return NormalCheck(True)


# ---------------------------------------------------------------------------
# combined verdict
# ---------------------------------------------------------------------------


def well_formed_matrix(rows: Iterable[Iterable[object]]) -> xl.IntMat | None:
    """The validated integer matrix, or None when rows are ragged/empty/non-int."""
    try:
        mat = tuple(tuple(int(x) for x in row) for row in rows)
    except (TypeError, ValueError):
        return None
    if not mat or not mat[0]:
        return None
    width = len(mat[0])
    if any(len(row) != width for row in mat):
        return None
    return mat


def column_signs_mixed(matrix: Sequence[Sequence[int]]) -> bool:
    """Every column holds a positive and a negative entry.

    A necessary condition for a constant-1 inequality system to be bounded;
    useful as a cheap screen and as a report statistic.
    """
    for col in zip(*matrix):
        if not (any(x > 0 for x in col) and any(x < 0 for x in col)):
            return False
    return True


def check_all(
    rows: Iterable[Iterable[object]],
    rep: str = HYPERPLANE,
    cap: int = DEFAULT_CAP,
) -> PropertyReport:
    """All five verdicts with their dependency semantics.

    Ragged, empty or non-integer matrices (and dimensions beyond the
    supported range) come back ill-formed with every flag false.  Normality
    of a smooth reflexive polytope of dimension <= 8 is settled by that
    dependency alone; otherwise the decomposition check runs with *cap*.
    """
    if rep not in REPS:
        raise DataError(f"unknown representation {rep!r}")
    mat = well_formed_matrix(rows)
    if mat is None or len(mat[0]) > MAX_DIM:
        return ILL_FORMED_REPORT
    p = HRep.from_matrix(mat) if rep == HYPERPLANE else VRep.from_matrix(mat)
    try:
        an = analyze(p)
    except DimensionError:
        return ILL_FORMED_REPORT

    compact = check_compact(an.vd)
    lattice = check_lattice(an.vd)
    reflexive = check_reflexive(p, an)
    smooth = check_smooth(p, an)
    if not (compact and lattice):
        normal: bool | None = False
    elif smooth and reflexive and an.d <= 8:
        # smooth reflexive polytopes are normal through dimension 8
        normal = True
    else:
        hull = Hull(GeneralHRep(an.d, an.ineqs), an.equalities, an.vd)
        normal = check_normal(hull, cap=cap).verdict
    return PropertyReport(
        compact=compact,
        lattice=lattice,
        reflexive=reflexive,
        smooth=smooth,
        normal=normal,
    )
