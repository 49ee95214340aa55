from hypothesis import given, settings
from hypothesis import strategies as st

from support import (
    HEXAGON,
    REEVE_POINTS,
    SAMPLE_7D_A_H,
    SAMPLE_7D_A_V,
    SAMPLE_7D_B_H,
    SAMPLE_7D_B_V,
    SAMPLE_8D_BROKEN,
    SAMPLE_8D_OK,
    SMOOTH_2D,
    TRIANGLE,
    TRIANGLE_DUAL_POINTS,
)
from oracles import oracle_smooth
from polygen.polytopes import HRep, VRep, vertex_enumeration
from polygen.properties import (
    PropertyReport,
    check_all,
    check_compact,
    check_lattice,
    check_normal,
    check_reflexive,
    check_smooth,
)


class TestCompact:
    def test_hexagon(self):
        assert check_compact(vertex_enumeration(HRep.from_matrix(HEXAGON)))

    def test_quadrant(self):
        assert not check_compact(vertex_enumeration(HRep.from_matrix([(1, 0), (0, 1)])))


class TestLattice:
    def test_hexagon(self):
        assert check_lattice(vertex_enumeration(HRep.from_matrix(HEXAGON)))

    def test_half_integer_vertex(self):
        vd = vertex_enumeration(HRep.from_matrix([(-2, 0), (0, -1), (1, 1)]))
        assert not check_lattice(vd)

    def test_vacuous_when_no_vertices(self):
        vd = vertex_enumeration(HRep.from_matrix([(1, 0), (-1, 0)]))
        assert check_lattice(vd)


class TestReflexive:
    def test_hexagon(self):
        assert check_reflexive(HRep.from_matrix(HEXAGON))

    def test_hyperplane_rule(self):
        # compact + lattice constant-1 systems are reflexive outright
        for rows in SMOOTH_2D.values():
            assert check_reflexive(HRep.from_matrix(rows))

    def test_reeve_hull_is_not(self):
        assert not check_reflexive(VRep.from_matrix(REEVE_POINTS))

    def test_hull_form_of_triangle(self):
        assert check_reflexive(VRep.from_matrix(TRIANGLE_DUAL_POINTS))

    def test_translated_hull_is_reflexive(self):
        shifted = [(x + 3, y - 2) for x, y in TRIANGLE_DUAL_POINTS]
        assert check_reflexive(VRep.from_matrix(shifted))


class TestSmooth:
    def test_triangle_smooth(self):
        assert check_smooth(HRep.from_matrix(TRIANGLE))

    def test_dual_triangle_not_smooth(self):
        # vertex (1,0) has edge matrix determinant 3
        assert not check_smooth(VRep.from_matrix(TRIANGLE_DUAL_POINTS))

    def test_unbounded_pointed_cone_can_be_smooth(self):
        # vertex (-1,-1), edge directions e1, e2: unimodular but unbounded
        assert check_smooth(HRep.from_matrix([(1, 0), (0, 1)]))
        assert not check_compact(vertex_enumeration(HRep.from_matrix([(1, 0), (0, 1)])))

    def test_nonpointed_not_smooth(self):
        assert not check_smooth(HRep.from_matrix([(1, 0), (-1, 0)]))

    def test_lower_dimensional_not_smooth(self):
        assert not check_smooth(VRep.from_matrix([(0, 0), (1, 0)]))

    def test_duplicate_tight_rows_ignored(self):
        doubled = list(TRIANGLE) + list(TRIANGLE)
        assert check_smooth(HRep.from_matrix(doubled))


class TestNormal:
    def test_hexagon(self):
        assert check_normal(HRep.from_matrix(HEXAGON)).verdict is True

    def test_reeve_witness(self):
        res = check_normal(VRep.from_matrix(REEVE_POINTS))
        assert res.verdict is False
        assert res.witness == (1, 1, 1)

    def test_noncompact_is_not_normal(self):
        assert check_normal(HRep.from_matrix([(1, 0), (0, 1)])).verdict is False

    def test_cap_yields_unverified(self):
        res = check_normal(VRep.from_matrix([(0, 0, 0), (6, 0, 0), (0, 6, 0), (0, 0, 6)]), cap=10)
        assert res.verdict is None

    def test_segment_normal(self):
        assert check_normal(VRep.from_matrix([(0, 0), (2, 1)])).verdict is True


class TestCheckAll:
    def test_seven_d_fixtures_every_flag_true(self):
        for rows, rep in [
            (SAMPLE_7D_A_H, "hyperplane"),
            (SAMPLE_7D_A_V, "convex_hull"),
            (SAMPLE_7D_B_H, "hyperplane"),
            (SAMPLE_7D_B_V, "convex_hull"),
        ]:
            report = check_all(rows, rep)
            assert report.all_correct, (rep, report)

    def test_single_entry_corruption_loses_everything_but_compact(self):
        ok = check_all(SAMPLE_8D_OK)
        assert ok.all_correct
        bad = check_all(SAMPLE_8D_BROKEN)
        assert bad.compact
        assert not bad.lattice and not bad.reflexive and not bad.smooth
        assert bad.normal is False
        assert not bad.all_correct

    def test_ragged_matrix_ill_formed(self):
        report = check_all([[1, 2], [3, 4, 5]])
        assert report.ill_formed
        assert not any([report.compact, report.lattice, report.reflexive, report.smooth])
        assert report.normal is False
        assert not report.all_correct

    def test_non_integer_ill_formed(self):
        assert check_all([["a", "b"]]).ill_formed

    def test_oversized_dimension_ill_formed(self):
        assert check_all([[0] * 17, [1] * 17]).ill_formed

    def test_hull_samples_compact_by_construction(self):
        report = check_all(REEVE_POINTS, rep="convex_hull")
        assert report.compact and report.lattice
        assert not report.reflexive and not report.smooth and report.normal is False


# ---------------------------------------------------------------------------
# implication suite over random generated matrices
# ---------------------------------------------------------------------------

matrix_strategy = st.lists(
    st.lists(st.integers(-2, 2), min_size=2, max_size=2).map(tuple), min_size=2, max_size=6
).map(tuple)


@given(matrix_strategy, st.sampled_from(["hyperplane", "convex_hull"]))
@settings(max_examples=150, deadline=None)
def test_implications(rows, rep):
    report = check_all(rows, rep)
    if report.smooth:
        assert report.lattice
    if rep == "hyperplane" and report.compact and report.lattice:
        assert report.reflexive
    if report.ill_formed:
        assert not report.all_correct
    if report.all_correct:
        assert report.normal is True


@given(matrix_strategy)
@settings(max_examples=60, deadline=None)
def test_smoothness_matches_definitional_oracle_on_compact(rows):
    report = check_all(rows, "hyperplane")
    if report.compact:
        assert report.smooth == oracle_smooth(rows, 2)


def test_report_dict_marks_unverified():
    r = PropertyReport(compact=True, lattice=True, normal=None)
    assert r.as_dict()["normal"] == "unverified"
    assert r.normal_unverified and not r.all_correct
