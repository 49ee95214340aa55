"""Independent brute-force oracles the implementation is verified against.

Everything here is written from the definitions, with no shared machinery
beyond exact rational arithmetic: vertices by intersecting row subsets, rays
by solving homogeneous subsystems, facets by spanning point subsets,
smoothness by the edge-determinant definition over vertex pairs, normality by
explicit sum-set decomposition over box-scanned lattice points.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, product
from math import gcd

Vec = tuple

# ---------------------------------------------------------------------------
# tiny exact linear algebra (kept separate from the package on purpose)
# ---------------------------------------------------------------------------


def _solve_square(a, b):
    n = len(a)
    aug = [[Fraction(x) for x in row] + [Fraction(y)] for row, y in zip(a, b)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            return None
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return tuple(aug[r][n] for r in range(n))


def _nullspace_dir(rows, d):
    """A direction spanning the null space when its dimension is exactly 1."""
    mat = [[Fraction(x) for x in row] for row in rows]
    pivots = []
    rk = 0
    for col in range(d):
        piv = next((r for r in range(rk, len(mat)) if mat[r][col] != 0), None)
        if piv is None:
            continue
        mat[rk], mat[piv] = mat[piv], mat[rk]
        inv = 1 / mat[rk][col]
        mat[rk] = [x * inv for x in mat[rk]]
        for r in range(len(mat)):
            if r != rk and mat[r][col]:
                f = mat[r][col]
                mat[r] = [x - f * y for x, y in zip(mat[r], mat[rk])]
        pivots.append(col)
        rk += 1
    if d - rk != 1:
        return None
    free = next(c for c in range(d) if c not in pivots)
    vec = [Fraction(0)] * d
    vec[free] = Fraction(1)
    for r, col in enumerate(pivots):
        vec[col] = -mat[r][free]
    return tuple(vec)


def _primitive(v):
    fracs = [Fraction(x) for x in v]
    lcm = 1
    for f in fracs:
        lcm = lcm * f.denominator // gcd(lcm, f.denominator)
    ints = [int(f * lcm) for f in fracs]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    return tuple(x // g for x in ints)


# ---------------------------------------------------------------------------
# polyhedron oracles (inequalities 1 + w.x >= 0 given as integer rows)
# ---------------------------------------------------------------------------


def feasible(rows, point):
    return all(1 + sum(w * x for w, x in zip(row, point)) >= 0 for row in rows)


def oracle_vertices(rows, d):
    """Vertices = feasible intersections of d-row subsets of full rank."""
    verts = set()
    for subset in combinations(rows, d):
        sol = _solve_square(subset, [-1] * d)
        if sol is not None and feasible(rows, sol):
            verts.add(tuple(sol))
    return verts


def oracle_rays(rows, d):
    """Extreme rays of the recession cone {y : w.y >= 0 for all rows}.

    Directions come from rank-(d-1) homogeneous subsystems; both signs are
    tried, kept if they satisfy every homogeneous inequality.  For pointed
    recession cones this is exactly the extreme-ray set.
    """
    rays = set()
    if d == 1:
        for sign in (1, -1):
            if all(w[0] * sign >= 0 for w in rows):
                rays.add((sign,))
        return rays
    for subset in combinations(rows, d - 1):
        direction = _nullspace_dir(subset, d)
        if direction is None:
            continue
        for sign in (1, -1):
            cand = tuple(sign * x for x in direction)
            if all(sum(w * y for w, y in zip(row, cand)) >= 0 for row in rows):
                rays.add(_primitive(cand))
    return rays


def oracle_facets(points, d):
    """Facets of conv(points) from spanning d-subsets, full-dimensional hulls only."""
    facets = set()
    pts = sorted(set(map(tuple, points)))
    for subset in combinations(pts, d):
        # hyperplane n.x = h through the subset
        mat = [list(p) + [-1] for p in subset]
        direction = _nullspace_dir(mat, d + 1)
        if direction is None:
            continue
        for sign in (1, -1):
            n = tuple(sign * x for x in direction[:d])
            h = sign * direction[d]
            if all(x == 0 for x in n):
                break
            vals = [sum(a * x for a, x in zip(n, p)) - h for p in pts]
            if all(v >= 0 for v in vals) and any(v > 0 for v in vals):
                a = _primitive(n)
                i0 = next(i for i in range(d) if n[i] != 0)
                c = -h * Fraction(a[i0], n[i0])
                assert c.denominator == 1
                facets.add((a, int(c)))
    return facets


def oracle_smooth(rows, d):
    """Edge-determinant smoothness from the definition, for compact polytopes.

    Edges join vertex pairs whose common tight rows have rank d-1; smooth
    means every vertex is integral, meets exactly d edges, and the primitive
    edge matrix has determinant +-1.
    """
    verts = sorted(oracle_vertices(rows, d))
    if not verts:
        return False
    if any(Fraction(x).denominator != 1 for v in verts for x in v):
        return False
    # full-dimensional?
    offsets = [tuple(Fraction(b) - Fraction(a) for a, b in zip(verts[0], v)) for v in verts[1:]]
    if _rank(offsets) != d:
        return False
    tight = [frozenset(i for i, row in enumerate(rows) if 1 + sum(w * x for w, x in zip(row, v)) == 0) for v in verts]
    for i, v in enumerate(verts):
        edges = []
        for j, u in enumerate(verts):
            if i == j:
                continue
            common = tight[i] & tight[j]
            if _rank([rows[k] for k in common]) == d - 1:
                edges.append(_primitive(tuple(Fraction(b) - Fraction(a) for a, b in zip(v, u))))
        if len(edges) != d or abs(_det(edges)) != 1:
            return False
    return True


def _rank(mat):
    rows = [list(map(Fraction, r)) for r in mat]
    if not rows:
        return 0
    d = len(rows[0])
    rk = 0
    for col in range(d):
        piv = next((r for r in range(rk, len(rows)) if rows[r][col] != 0), None)
        if piv is None:
            continue
        rows[rk], rows[piv] = rows[piv], rows[rk]
        inv = 1 / rows[rk][col]
        rows[rk] = [x * inv for x in rows[rk]]
        for r in range(len(rows)):
            if r != rk and rows[r][col]:
                f = rows[r][col]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[rk])]
        rk += 1
    return rk


def _det(mat):
    n = len(mat)
    rows = [[Fraction(x) for x in r] for r in mat]
    sign = 1
    out = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if rows[r][col] != 0), None)
        if piv is None:
            return 0
        if piv != col:
            rows[col], rows[piv] = rows[piv], rows[col]
            sign = -sign
        out *= rows[col][col]
        inv = 1 / rows[col][col]
        for r in range(col + 1, n):
            if rows[r][col]:
                f = rows[r][col] * inv
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[col])]
    return out * sign


# ---------------------------------------------------------------------------
# lattice points and normality, the slow way
# ---------------------------------------------------------------------------


def naive_lattice_points(ineqs, box, strict=False):
    """Flat box scan with per-point membership tests; ineqs are (a, c) pairs."""
    pts = []
    ranges = [range(lo, hi + 1) for lo, hi in box]
    for p in product(*ranges):
        vals = [sum(a * x for a, x in zip(row, p)) + c for row, c in ineqs]
        if all(v > 0 for v in vals) if strict else all(v >= 0 for v in vals):
            pts.append(tuple(p))
    return pts


def box_of(vertices, scale=1):
    d = len(vertices[0])
    box = []
    for j in range(d):
        vals = [Fraction(v[j]) * scale for v in vertices]
        lo, hi = min(vals), max(vals)
        box.append((-((-lo.numerator) // lo.denominator), hi.numerator // hi.denominator))
    return box


def oracle_normal_upto(ineqs, vertices, max_k):
    """Explicit decomposition check of kP = P + (k-1)P for k = 2..max_k.

    Materializes every dilation's lattice points by box scan and checks the
    sum-set inclusion directly.
    """
    layers = {1: set(naive_lattice_points(ineqs, box_of(vertices)))}
    for k in range(2, max_k + 1):
        scaled = [(a, k * c) for a, c in ineqs]
        layers[k] = set(naive_lattice_points(scaled, box_of(vertices, scale=k)))
    base = layers[1]
    for k in range(2, max_k + 1):
        sums = {tuple(p + q for p, q in zip(x, y)) for x in base for y in layers[k - 1]}
        missing = layers[k] - sums
        if missing:
            return False, sorted(missing)[0]
    return True, None


# ---------------------------------------------------------------------------
# convex polygon census in a coordinate box (d = 2)
# ---------------------------------------------------------------------------


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _interior_count(poly, limit):
    """Lattice points strictly inside the convex ccw polygon, early exit at limit."""
    xs = [p[0] for p in poly]
    ys = [p[1] for p in poly]
    count = 0
    n = len(poly)
    for x in range(min(xs) + 1, max(xs)):
        for y in range(min(ys) + 1, max(ys)):
            pt = (x, y)
            if all(_cross(poly[i], poly[(i + 1) % n], pt) > 0 for i in range(n)):
                count += 1
                if count >= limit:
                    return count
    return count


def convex_polygons_with_few_interior(bound, max_interior=1):
    """Every convex lattice polygon with vertices in [-bound, bound]^2 and
    at most *max_interior* interior lattice points.

    Polygons are generated once each: the lexicographically smallest vertex
    starts the chain and the rest follow in strictly counterclockwise angular
    order with strict left turns.  Growing a chain can only gain interior
    points, so subtrees are cut as soon as the partial hull exceeds the
    interior budget.
    """
    pts = [(x, y) for x in range(-bound, bound + 1) for y in range(-bound, bound + 1)]
    pts.sort()
    out = []

    for start_idx, v0 in enumerate(pts):
        cands = [p for p in pts[start_idx + 1:]]
        # angular order around v0; all candidates are lex-greater, so the
        # sweep spans less than a half-turn and the order is total
        import functools

        def cmp(a, b):
            cr = _cross(v0, a, b)
            if cr != 0:
                return -1 if cr > 0 else 1
            da = (a[0] - v0[0]) ** 2 + (a[1] - v0[1]) ** 2
            db = (b[0] - v0[0]) ** 2 + (b[1] - v0[1]) ** 2
            return -1 if da < db else (1 if da > db else 0)

        cands.sort(key=functools.cmp_to_key(cmp))

        chain = [v0]

        def close_ok(last):
            return _cross(last, v0, chain[1]) > 0 and _cross(chain[-2], last, v0) > 0

        def dfs(start):
            for i in range(start, len(cands)):
                q = cands[i]
                if len(chain) >= 2 and _cross(chain[-2], chain[-1], q) <= 0:
                    continue
                chain.append(q)
                if _interior_count(chain, max_interior + 1) <= max_interior:
                    if len(chain) >= 3 and _cross(chain[-2], chain[-1], v0) > 0 and _cross(chain[-1], v0, chain[1]) > 0:
                        out.append(tuple(chain))
                    dfs(i + 1)
                chain.pop()

        dfs(0)
    return out
