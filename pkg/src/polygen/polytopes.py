"""Polytope representations and exact enumeration geometry.

A polyhedron arrives either as an ``HRep`` (integer rows w, one inequality
``1 + w.x >= 0`` per row) or as a ``VRep`` (convex hull of integer points).
Everything here is exact: vertices are rational tuples, facet normals are
primitive integer vectors, and the workhorse is an incremental double
description of cones over the rationals.  Duplicate or redundant rows and
repeated hull points are legal inputs — generated samples contain them — and
verdicts are about the geometric set, not the syntactic matrix.

Dimensions above 16 are rejected up front; every input this toolkit targets
lives in d <= 9.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from . import exact_linalg as xl
from .errors import (
    CapExceededError,
    DimensionError,
    EmptyPolyhedronError,
    UnboundedPolyhedronError,
    UsageError,
)

MAX_DIM = 16
DEFAULT_CAP = 2_000_000

IntVec = tuple[int, ...]
Ineq = tuple[IntVec, int]  # (a, c) encoding a.x + c >= 0, i.e. a.x >= -c
Point = tuple[Fraction | int, ...]


def _norm_coord(x: Fraction) -> Fraction | int:
    return int(x) if x.denominator == 1 else x


@dataclass(frozen=True)
class HRep:
    """Inequalities ``1 + row.x >= 0``, one integer row per inequality."""

    d: int
    rows: xl.IntMat

    @classmethod
    def from_matrix(cls, rows: Iterable[Iterable[int]]) -> "HRep":
        mat = xl.as_int_matrix(rows)
        return cls(d=len(mat[0]), rows=mat)


@dataclass(frozen=True)
class VRep:
    """Convex hull of integer points; points need not be vertices."""

    d: int
    points: xl.IntMat

    @classmethod
    def from_matrix(cls, points: Iterable[Iterable[int]]) -> "VRep":
        mat = xl.as_int_matrix(points)
        return cls(d=len(mat[0]), points=mat)


@dataclass(frozen=True)
class GeneralHRep:
    """Facet-style inequalities ``a.x >= -c`` with primitive integer normals."""

    d: int
    ineqs: tuple[Ineq, ...]


@dataclass(frozen=True)
class VertexData:
    """Exact vertices with their tight inequality sets and recession rays.

    ``rays`` is empty exactly when the polyhedron is bounded.  For
    non-pointed polyhedra (a recession cone containing a line) there are no
    vertices and ``rays`` holds generators of the recession cone instead of
    extreme rays, which do not exist in that case.
    """

    vertices: tuple[Point, ...]
    tight_sets: tuple[frozenset[int], ...]
    rays: tuple[IntVec, ...]
    full_dim: bool

    @property
    def bounded(self) -> bool:
        return not self.rays

    def integral(self) -> bool:
        return all(all(Fraction(x).denominator == 1 for x in v) for v in self.vertices)


@dataclass(frozen=True)
class Hull:
    """Full double description of a convex hull of integer points.

    ``facets`` are the irredundant facet inequalities (relative facets when
    the hull is lower-dimensional), ``equalities`` cut out the affine hull
    (empty iff full-dimensional), and ``vertex_data`` carries the hull
    vertices with tight sets indexing into ``facets``.
    """

    facets: GeneralHRep
    equalities: tuple[Ineq, ...]
    vertex_data: VertexData


# ---------------------------------------------------------------------------
# double description over the rationals
# ---------------------------------------------------------------------------


def _dd_extreme_rays(ineqs: Sequence[IntVec]) -> tuple[list[IntVec], list[tuple[IntVec, int]]]:
    """Lineality basis and extreme rays of the cone ``{x : a.x >= 0 for all a}``.

    Returns primitive integer vectors; each ray is paired with the bitmask of
    inequality indices tight at it.  Incremental insertion with the
    combinatorial adjacency test; lineality vectors are split off exactly,
    so non-pointed cones are handled throughout.
    """
    dim = len(ineqs[0])
    lineality: list[IntVec] = [tuple(1 if j == i else 0 for j in range(dim)) for i in range(dim)]
    rays: list[list] = []  # [vector, zero-set bitmask]

    for idx, a in enumerate(ineqs):
        bit = 1 << idx
        pivot = None
        for li, l in enumerate(lineality):
            s = xl.dot(a, l)
            if s != 0:
                pivot = (li, l, s)
                break
        if pivot is not None:
            li, l, s = pivot
            if s < 0:
                l = tuple(-x for x in l)
                s = -s
            del lineality[li]
            new_lin = []
            for v in lineality:
                sv = xl.dot(a, v)
                if sv:
                    v = xl.primitive(tuple(s * x - sv * y for x, y in zip(v, l)))
                new_lin.append(v)
            lineality = new_lin
            for ray in rays:
                sv = xl.dot(a, ray[0])
                if sv:
                    ray[0] = xl.primitive(tuple(s * x - sv * y for x, y in zip(ray[0], l)))
                ray[1] |= bit
            # the freed lineality direction becomes a ray; every earlier
            # inequality vanished on the lineality space, so all are tight
            rays.append([l, bit - 1])
            continue

        plus, zero, minus = [], [], []
        svals: dict[int, int] = {}
        for ray in rays:
            s = xl.dot(a, ray[0])
            svals[id(ray)] = s
            (plus if s > 0 else zero if s == 0 else minus).append(ray)
        for ray in zero:
            ray[1] |= bit
        if not minus:
            continue
        min_common = dim - len(lineality) - 2
        new_rays: list[list] = []
        for p in plus:
            zp = p[1]
            for n in minus:
                z = zp & n[1]
                if z.bit_count() < min_common:
                    continue
                adjacent = True
                for other in rays:
                    if other is p or other is n:
                        continue
                    if z & ~other[1] == 0:
                        adjacent = False
                        break
                if not adjacent:
                    continue
                sp, sn = svals[id(p)], svals[id(n)]
                vec = xl.primitive(tuple(sp * nx - sn * px for px, nx in zip(p[0], n[0])))
                new_rays.append([vec, z | bit])
        rays = plus + zero + new_rays
    return lineality, [(tuple(r[0]), r[1]) for r in rays]


# ---------------------------------------------------------------------------
# vertex enumeration
# ---------------------------------------------------------------------------


def _check_dim(d: int) -> None:
    if d < 1:
        raise DimensionError("ambient dimension must be >= 1")
    if d > MAX_DIM:
        raise DimensionError(f"ambient dimension {d} exceeds the supported maximum {MAX_DIM}")


def _as_ineqs(p: HRep | GeneralHRep) -> tuple[int, tuple[Ineq, ...]]:
    if isinstance(p, HRep):
        return p.d, tuple((row, 1) for row in p.rows)
    if isinstance(p, GeneralHRep):
        return p.d, p.ineqs
    raise UsageError(f"expected HRep or GeneralHRep, got {type(p).__name__}")


def vertex_enumeration(p: HRep | GeneralHRep) -> VertexData:
    """Exact vertices, tight sets and recession rays via double description.

    The inequalities are homogenized with an extra coordinate t (and the cone
    constraint t >= 0); rays with t > 0 descale to vertices, rays with t = 0
    are recession directions.  An empty feasible set raises
    EmptyPolyhedronError.  Constant-1 systems are never empty: the origin
    satisfies every inequality strictly.
    """
    d, ineqs = _as_ineqs(p)
    _check_dim(d)
    hom = [(0,) * d + (1,)]
    hom += [tuple(a) + (c,) for a, c in ineqs]
    lineality, rays = _dd_extreme_rays(hom)
    pos = [r for r, _ in rays if r[d] > 0]
    rec = [r[:d] for r, _ in rays if r[d] == 0]
    if not pos:
        raise EmptyPolyhedronError("no feasible points")

    if lineality:
        # Non-pointed: no vertices; report recession-cone generators so
        # boundedness is still decidable downstream.
        gens = set(rec)
        for l in lineality:
            gens.add(l[:d])
            gens.add(tuple(-x for x in l[:d]))
        base = tuple(Fraction(x, pos[0][d]) for x in pos[0][:d])
        span = [tuple(Fraction(x, r[d]) - b for x, b in zip(r[:d], base)) for r in pos[1:]]
        span += list(gens)
        full_dim = bool(span) and xl.rank(span) == d
        return VertexData((), (), tuple(sorted(gens)), full_dim)

    vertices = []
    for r in pos:
        t = r[d]
        vertices.append(tuple(_norm_coord(Fraction(x, t)) for x in r[:d]))
    vertices.sort()
    tight_sets = []
    for v in vertices:
        tight_sets.append(frozenset(i for i, (a, c) in enumerate(ineqs) if xl.dot(a, v) + c == 0))
    rays_out = tuple(sorted(set(rec)))
    span = [xl.vec_sub(v, vertices[0]) for v in vertices[1:]] + list(rays_out)
    full_dim = bool(span) and xl.rank(span) == d
    return VertexData(tuple(vertices), tuple(tight_sets), rays_out, full_dim)


# ---------------------------------------------------------------------------
# facet enumeration
# ---------------------------------------------------------------------------


def facet_enumeration(v: VRep) -> Hull:
    """Irredundant facets of ``conv(points)`` via the dual cone.

    Homogenized points (p, 1) generate a cone whose polar
    ``{(a, c) : a.p + c >= 0 for all p}`` is described by one inequality per
    point; its extreme rays are the facet inequalities and its lineality
    basis gives the affine-hull equalities.  Redundant and duplicate points
    are absorbed silently; lower-dimensional hulls come back with
    ``full_dim=False`` (and relative facets only).
    """
    _check_dim(v.d)
    d = v.d
    pts = sorted(set(v.points))
    hom = [p + (1,) for p in pts]
    lineality, rays = _dd_extreme_rays(hom)
    equalities = tuple(sorted((l[:d], l[d]) for l in lineality))

    facets = []
    for r, _ in rays:
        a, c = r[:d], r[d]
        if any(xl.dot(a, p) + c == 0 for p in pts):
            # a is primitive: the full vector is primitive and gcd(a)
            # divides c whenever the facet touches an integer point
            facets.append((a, c))
    facets.sort()

    eq_rows = [a for a, _ in equalities]
    vertices = []
    tight_sets = []
    for p in pts:
        tight = frozenset(i for i, (a, c) in enumerate(facets) if xl.dot(a, p) + c == 0)
        if xl.rank([facets[i][0] for i in tight] + eq_rows) == d:
            vertices.append(p)
            tight_sets.append(tight)
    order = sorted(range(len(vertices)), key=lambda i: vertices[i])
    vd = VertexData(
        vertices=tuple(vertices[i] for i in order),
        tight_sets=tuple(tight_sets[i] for i in order),
        rays=(),
        full_dim=not equalities,
    )
    return Hull(GeneralHRep(d, tuple(facets)), equalities, vd)


def dual(h: HRep) -> VRep:
    """The hull of the inequality rows: polar duality read off syntactically."""
    return VRep(d=h.d, points=h.rows)


def dilate(p: HRep | GeneralHRep, k: int) -> GeneralHRep:
    """Inequalities of ``k * P``; only consumed by the normality check."""
    if k < 1:
        raise UsageError(f"dilation factor must be >= 1, got {k}")
    d, ineqs = _as_ineqs(p)
    return GeneralHRep(d, tuple((a, k * c) for a, c in ineqs))


# ---------------------------------------------------------------------------
# lattice point enumeration
# ---------------------------------------------------------------------------


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


def _enumerate_lattice_points(
    ineqs: Sequence[Ineq],
    box: Sequence[tuple[int, int]],
    cap: int,
    strict: bool = False,
) -> list[IntVec]:
    """All integer points of the box satisfying every inequality.

    Walks the vertex bounding box coordinate by coordinate; at each level the
    feasible interval for the next coordinate is narrowed with exact interval
    bounds derived from every inequality (a relaxation, so no point is
    missed), and full feasibility holds by construction at the leaves.  The
    result is identical to a flat box scan with per-point membership tests,
    in ascending lexicographic order.  Raises CapExceededError as soon as
    more than *cap* points have been found.
    """
    d = len(box)
    # strict: integer-valued forms satisfy a.x + c > 0 iff a.x + (c-1) >= 0
    rows = [(a, (c - 1) if strict else c) for a, c in ineqs]
    lo = [l for l, _ in box]
    hi = [h for _, h in box]
    if any(l > h for l, h in box):
        return []
    # rest_max[i][j]: max of sum_{t >= j} a_t x_t over the box, for row i
    rest_max = []
    for a, _ in rows:
        acc = [0] * (d + 1)
        for j in range(d - 1, -1, -1):
            acc[j] = acc[j + 1] + max(a[j] * lo[j], a[j] * hi[j])
        rest_max.append(acc)

    out: list[IntVec] = []
    point = [0] * d
    partial = [c for _, c in rows]  # c + sum of fixed prefix terms, per row

    def recurse(j: int) -> None:
        if j == d:
            out.append(tuple(point))
            if len(out) > cap:
                raise CapExceededError(f"lattice point enumeration exceeded cap {cap}")
            return
        low, high = lo[j], hi[j]
        for i, (a, _) in enumerate(rows):
            aj = a[j]
            bound = -(partial[i] + rest_max[i][j + 1])
            if aj > 0:
                low = max(low, _ceil_div(bound, aj))
            elif aj < 0:
                high = min(high, bound // aj)  # floor with negative divisor flips
            elif partial[i] + rest_max[i][j + 1] < 0:
                return
        for x in range(low, high + 1):
            point[j] = x
            saved = []
            for i, (a, _) in enumerate(rows):
                saved.append(partial[i])
                partial[i] += a[j] * x
            recurse(j + 1)
            for i, s in enumerate(saved):
                partial[i] = s

    recurse(0)
    return out


def _vertex_box(vertices: Sequence[Point], scale: int = 1) -> list[tuple[int, int]]:
    d = len(vertices[0])
    box = []
    for j in range(d):
        coords = [Fraction(v[j]) * scale for v in vertices]
        lo = min(coords)
        hi = max(coords)
        box.append((_ceil_div(lo.numerator, lo.denominator), hi.numerator // hi.denominator))
    return box


def _bounded_geometry(p: HRep | GeneralHRep | Hull) -> tuple[tuple[Ineq, ...], tuple[Point, ...]]:
    """(all inequalities incl. equality pairs, vertices) of a bounded polytope."""
    if isinstance(p, Hull):
        ineqs = list(p.facets.ineqs)
        for a, c in p.equalities:
            ineqs.append((a, c))
            ineqs.append((tuple(-x for x in a), -c))
        return tuple(ineqs), p.vertex_data.vertices
    _, ineqs = _as_ineqs(p)
    vd = vertex_enumeration(p)
    if vd.rays:
        raise UnboundedPolyhedronError("lattice point enumeration needs a bounded polytope")
    return ineqs, vd.vertices


def lattice_points(p: HRep | GeneralHRep | Hull, cap: int = DEFAULT_CAP) -> list[IntVec]:
    """All integer points of the polytope, boundary included, sorted.

    Raises UnboundedPolyhedronError for unbounded input and CapExceededError
    once more than *cap* points exist (the signal that a polytope is too
    large to verify normality exactly).  An empty polytope yields [].
    """
    try:
        ineqs, vertices = _bounded_geometry(p)
    except EmptyPolyhedronError:
        return []
    if not vertices:
        return []
    return _enumerate_lattice_points(ineqs, _vertex_box(vertices), cap)


def interior_lattice_points(p: HRep | GeneralHRep | Hull, cap: int = DEFAULT_CAP) -> list[IntVec]:
    """Integer points satisfying every inequality strictly.

    Lower-dimensional hulls have no interior points in the ambient sense.
    """
    if isinstance(p, Hull):
        if p.equalities:
            return []
        ineqs, vertices = p.facets.ineqs, p.vertex_data.vertices
    else:
        try:
            ineqs, vertices = _bounded_geometry(p)
        except EmptyPolyhedronError:
            return []
    if not vertices:
        return []
    return _enumerate_lattice_points(ineqs, _vertex_box(vertices), cap, strict=True)
