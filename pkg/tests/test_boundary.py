import pytest

from fgdyn import NoConvergence
from fgdyn.automorphisms import power, twisted_lift
from fgdyn.boundary import (
    BoundaryPrefix,
    Comparison,
    FixedPointSet,
    collect_attracting_points,
    common_prefix_length,
    fixed_subgroup_generator,
    iterate_to_fixed_point,
    same_point,
)


def test_common_prefix_length():
    assert common_prefix_length("abcd", "abce") == 3
    assert common_prefix_length("ab", "abc") == 2
    assert common_prefix_length("", "a") == 0
    assert common_prefix_length("b" * 100 + "x", "b" * 100 + "y") == 100


def test_boundary_prefix_validates_depth():
    with pytest.raises(ValueError):
        BoundaryPrefix("ab", 3)


def test_same_point_rules():
    p = BoundaryPrefix("a" * 40 + "b", 40)
    q = BoundaryPrefix("a" * 40 + "c", 40)
    assert same_point(p, q) is Comparison.SAME
    assert same_point(p, BoundaryPrefix("a" * 10 + "b" * 30, 40)) is Comparison.DISTINCT
    short = BoundaryPrefix("aaaa", 4)
    assert same_point(p, short) is Comparison.UNDETERMINED
    assert same_point(short, short) is Comparison.SAME
    assert same_point(p, q, min_depth=41) is Comparison.UNDETERMINED


def test_tribonacci_fixed_point_prefix(trib):
    p = iterate_to_fixed_point(trib, "a", 7)
    assert p.stable == "abacaba"
    # the fixed point is the limit of phi^n(a)
    w = "a"
    for _ in range(12):
        w = trib(w).letters
    assert p.prefix == w[: len(p.prefix)]
    assert trib(p.prefix).letters.startswith(p.stable)


def test_fibonacci_fixed_point_prefix(fib):
    assert iterate_to_fixed_point(fib, "a", 5).stable == "abaab"


def test_identity_has_no_attracting_point(ident):
    with pytest.raises(NoConvergence):
        iterate_to_fixed_point(ident, "a")


def test_power_is_tried_after_base(trib):
    # backward iterates of c cycle through last letters with period 3
    p = iterate_to_fixed_point(twisted_lift(trib, ""), "A", 32)
    assert p.power == 3
    cube = power(trib, 3)
    assert cube(p.prefix).letters.startswith(p.stable)


def test_fixed_subgroup_endpoints_are_rejected(perm, ident):
    lift = twisted_lift(ident, "ab")
    assert fixed_subgroup_generator(lift.automorphism, "ab" * 10) == "ab"
    assert fixed_subgroup_generator(lift.automorphism, "ba" * 10) is None
    with pytest.raises(NoConvergence):
        iterate_to_fixed_point(lift, "a", 5)
    with pytest.raises(NoConvergence):
        iterate_to_fixed_point(twisted_lift(perm, "a"), "b", 5)


@pytest.mark.parametrize("depth", [2, 5, 48])
def test_empty_sets_for_periodic_automorphisms(perm, ident, depth):
    assert len(collect_attracting_points(perm, 2, target_depth=depth)) == 0
    assert len(collect_attracting_points(ident, 1, target_depth=depth)) == 0


def test_tribonacci_point_set(trib_points):
    fps = trib_points
    assert len(fps) > 0
    assert fps.distinct_count(fps.by_lift[""]) >= 2
    assert not fps.gjll_violations()
    assert all(c <= 6 for c in fps.per_lift_counts().values())
    for p in fps.lift_points(""):
        assert p.depth >= 48
    assert fps.match(fps.points[0]) == 0
    d = fps.as_dict()
    assert d["gjll_bound_per_lift"] == 6 and "heuristic" in d["completeness"]


def test_points_are_pairwise_not_same(trib_points):
    pts = trib_points.points
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            assert same_point(pts[i], pts[j]) is not Comparison.SAME


def test_collected_points_are_fixed_by_their_lift(trib_points, trib):
    for p in trib_points.points:
        f = power(twisted_lift(trib, p.twist).automorphism, p.power)
        image = f(p.prefix).letters
        assert common_prefix_length(image, p.prefix) >= p.depth


def test_collection_is_deterministic_and_parallel_safe(fib):
    a = collect_attracting_points(fib, 1, workers=1)
    b = collect_attracting_points(fib, 1, workers=2)
    assert a.as_dict() == b.as_dict()


def test_distinct_count_uses_cliques():
    fps = FixedPointSet(rank=2)
    for s in ["a" * 40, "b" * 40, "A" * 40]:
        fps.add(BoundaryPrefix(s, 40))
    fps.add(BoundaryPrefix("a" * 40 + "b", 40))  # Same as the first
    assert len(fps) == 3
    assert fps.distinct_count(range(3)) == 3
