"""Known polytopes, unimodular transforms and corpus builders shared by the tests."""

from __future__ import annotations

from polygen.datasets import HYPERPLANE, Sample
from polygen.exact_linalg import inverse, mat_vec, vec_add
from polygen.rng import generator

# ---------------------------------------------------------------------------
# named fixtures (inequality rows unless stated otherwise)
# ---------------------------------------------------------------------------

HEXAGON = ((0, 1), (0, -1), (-1, 0), (1, 0), (1, -1), (-1, 1))
HEXAGON_VERTICES = ((1, 0), (1, 1), (0, 1), (-1, 0), (-1, -1), (0, -1))

TRIANGLE = ((-1, 0), (0, -1), (1, 1))  # vertices (1,1), (1,-2), (-2,1)
TRIANGLE_DUAL_POINTS = ((1, 0), (0, 1), (-1, -1))  # hull points; not smooth

REEVE_POINTS = ((0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 2))  # not normal, witness (1,1,1)

# two 7d dataset members, in both representations (hull rows sorted as printed)
SAMPLE_7D_A_H = (
    (0, 0, 0, 0, 0, 0, 1),
    (0, 0, 0, 0, 0, 0, -1),
    (-1, 0, 0, 0, 0, 0, 0),
    (0, -1, 0, 0, 0, 0, 0),
    (0, 0, -1, 0, 0, 0, 0),
    (0, 0, 0, -1, 0, 0, 0),
    (0, 0, 0, 0, -1, 0, 0),
    (0, 0, 0, 0, 0, -1, 0),
    (1, 1, 1, 1, 1, 1, 6),
)
SAMPLE_7D_A_V = (
    (1, 1, 1, 1, 1, 1, 1),
    (-12, 1, 1, 1, 1, 1, 1),
    (1, -12, 1, 1, 1, 1, 1),
    (1, 1, -12, 1, 1, 1, 1),
    (1, 1, 1, -12, 1, 1, 1),
    (1, 1, 1, 1, -12, 1, 1),
    (1, 1, 1, 1, 1, -12, 1),
    (1, 1, 1, 1, 1, 0, -1),
    (1, 1, 1, 1, 0, 1, -1),
    (1, 1, 1, 0, 1, 1, -1),
    (1, 1, 0, 1, 1, 1, -1),
    (1, 0, 1, 1, 1, 1, -1),
    (0, 1, 1, 1, 1, 1, -1),
    (1, 1, 1, 1, 1, 1, -1),
)
SAMPLE_7D_B_H = (
    (0, 0, 0, 0, -1, 1, 0),
    (0, 0, 0, 0, -1, 0, 0),
    (0, -1, 0, 0, 0, 0, 0),
    (-1, 0, 0, 0, 0, 0, 0),
    (0, 0, -1, 0, 0, 0, 0),
    (0, 0, 0, -1, 0, 0, 0),
    (0, 0, 0, 0, 0, 0, -1),
    (0, 0, 0, 0, 0, -1, 0),
    (0, 0, 0, 0, 0, 1, 0),
    (1, 1, 1, 1, 1, -6, 1),
)
SAMPLE_7D_B_V = (
    (1, 1, 1, 1, 1, 1, 0),
    (1, 1, 1, 1, 1, 0, 1),
    (-6, 1, 1, 1, 1, 0, 1),
    (1, -6, 1, 1, 1, 0, 1),
    (1, 1, -6, 1, 1, 0, 1),
    (1, 1, 1, -6, 1, 0, 1),
    (1, 1, 1, 1, 0, 1, 1),
    (1, 1, 1, 0, 1, 1, 1),
    (1, 1, 0, 1, 1, 1, 1),
    (1, 0, 1, 1, 1, 1, 1),
    (0, 1, 1, 1, 1, 1, 1),
    (1, 1, 1, 1, 1, 1, 1),
    (1, 1, 1, 1, 0, -1, 1),
    (-11, 1, 1, 1, 0, -1, 1),
    (1, -11, 1, 1, 0, -1, 1),
    (1, 1, -11, 1, 0, -1, 1),
    (1, 1, 1, -11, 0, -1, 1),
    (1, 1, 1, 1, -12, -1, 1),
    (1, 1, 1, 1, 1, 0, -6),
    (1, 1, 1, 1, 0, -1, -11),
)

# an 8d dataset member and its single-entry corruption (row 11, column 7: 0 -> 1);
# the corrupted matrix is compact but nothing else
SAMPLE_8D_OK = (
    (-1, 0, 0, 0, 0, 0, 0, 0),
    (0, 0, 0, 0, 0, 0, 0, -1),
    (0, -1, 0, 0, 0, 0, 0, 0),
    (0, 0, 0, 0, -1, 0, 0, 0),
    (0, 0, 0, 0, -1, 1, 0, 1),
    (0, 0, 0, 0, 0, -1, 0, 0),
    (0, 0, -1, 0, 0, 0, 0, 0),
    (0, 0, 0, -1, 0, 0, 0, 0),
    (0, 0, 0, 0, 0, 0, -1, 0),
    (1, 1, 1, 1, 0, -4, 1, 1),
    (0, 0, 0, 0, 1, 0, 0, -1),
)
SAMPLE_8D_BROKEN = tuple(
    tuple(1 if (i, j) == (10, 6) else x for j, x in enumerate(row)) for i, row in enumerate(SAMPLE_8D_OK)
)

# the five smooth reflexive polygons (anticanonical facet rows)
SMOOTH_2D = {
    "plane": TRIANGLE,
    "quadric": ((1, 0), (-1, 0), (0, 1), (0, -1)),
    "blowup1": ((1, 0), (0, 1), (-1, -1), (1, 1)),
    "blowup2": ((1, 0), (-1, 0), (0, 1), (0, -1), (1, 1)),
    "blowup3": HEXAGON,
}

# smooth reflexive 3-polytopes used as surrogate corpus seeds
SMOOTH_3D = {
    "p3": ((1, 0, 0), (0, 1, 0), (0, 0, 1), (-1, -1, -1)),
    "cube": ((1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)),
    "p2xp1": ((1, 0, 0), (0, 1, 0), (-1, -1, 0), (0, 0, 1), (0, 0, -1)),
    "bl1p3": ((1, 0, 0), (0, 1, 0), (0, 0, 1), (-1, -1, -1), (1, 1, 1)),
    "bl1p2xp1": ((1, 0, 0), (0, 1, 0), (-1, -1, 0), (1, 1, 0), (0, 0, 1), (0, 0, -1)),
    "hexagonxp1": tuple((a, b, 0) for a, b in HEXAGON) + ((0, 0, 1), (0, 0, -1)),
}


# ---------------------------------------------------------------------------
# unimodular transforms
# ---------------------------------------------------------------------------


def random_unimodular(rng, d, steps=8, coeff=2):
    """A random GL_d(Z) matrix built from elementary row operations."""
    u = [[1 if i == j else 0 for j in range(d)] for i in range(d)]
    for _ in range(steps):
        kind = int(rng.integers(3))
        i = int(rng.integers(d))
        j = int(rng.integers(d))
        if kind == 0 and i != j:
            q = int(rng.integers(1, coeff + 1)) * (1 if int(rng.integers(2)) else -1)
            u[i] = [a + q * b for a, b in zip(u[i], u[j])]
        elif kind == 1 and i != j:
            u[i], u[j] = u[j], u[i]
        elif kind == 2:
            u[i] = [-a for a in u[i]]
    return tuple(tuple(row) for row in u)


def int_inverse(u):
    inv = inverse(u)
    return tuple(tuple(int(x) for x in row) for row in inv)


def transform_hrep(rows, u):
    """Rows of the inequality system of u.P, given the rows of P."""
    u_inv = int_inverse(u)
    return tuple(tuple(mat_vec(tuple(zip(*u_inv)), w)) for w in rows)


def transform_vrep(points, u, t):
    return tuple(tuple(vec_add(mat_vec(u, p), t)) for p in points)


def shuffle_rows(rows, rng):
    order = list(rng.permutation(len(rows)))
    return tuple(rows[i] for i in order)


# ---------------------------------------------------------------------------
# surrogate corpora (stand in for the real datasets when those are absent)
# ---------------------------------------------------------------------------


def make_corpus(bases, n, seed, shuffle=True):
    """n distinct samples: random unimodular images of the base classes."""
    rng = generator(seed)
    seen = set()
    out = []
    base_list = list(bases)
    d = len(base_list[0][0])
    while len(out) < n:
        rows = base_list[int(rng.integers(len(base_list)))]
        u = random_unimodular(rng, d)
        rows2 = transform_hrep(rows, u)
        if shuffle:
            rows2 = shuffle_rows(rows2, rng)
        if rows2 in seen or any(abs(x) > 40 for r in rows2 for x in r):
            continue
        seen.add(rows2)
        out.append(Sample(rows2, HYPERPLANE, len(out)))
    return out


