import pytest

from fgdyn import NoStabilization, parse_automorphism
from fgdyn.automorphisms import identity, power
from fgdyn.boundary import Comparison, same_point
from fgdyn.laminations import (
    Attracted,
    LaminationFingerprint,
    LineClass,
    NotObserved,
    attraction_test,
    common_lamination_check,
    fingerprint_equal,
    fingerprints,
    lamination_fingerprint,
    weak_limit_lines,
)
from fgdyn.words import CyclicWord, inverse, split_cyclic


def closed(words):
    return set(words) | {inverse(w) for w in words}


def factors(s, k):
    return {s[i : i + k] for i in range(len(s) - k + 1)}


def test_tribonacci_fingerprint_k2(trib):
    fp = lamination_fingerprint(trib, "a", 2)
    assert power(trib, 4)("a") == "abacabaabacab"
    assert fp.subwords == closed(factors("abacabaabacab", 2)) == closed({"ab", "ba", "ac", "ca", "aa"})
    assert fp.k == 2 and fp.generator == "a" and fp.automorphism == "tribonacci"


def test_fibonacci_fingerprint_k2(fib):
    fp = lamination_fingerprint(fib, "a", 2)
    assert power(fib, 5)("a") == "abaababaabaab"
    assert fp.subwords == closed(factors("abaababaabaab", 2)) == closed({"ab", "ba", "aa"})


def test_identity_fingerprint_is_trivially_stable(ident):
    assert lamination_fingerprint(ident, "a", 1).subwords == {"a", "A"}


def test_fingerprint_needs_enough_iterates(trib):
    with pytest.raises(NoStabilization):
        lamination_fingerprint(trib, "a", 8, n_max=4)


def test_fingerprint_counts_match_tribonacci_complexity(trib):
    # the Tribonacci word has 2k + 1 factors of length k
    for k in range(1, 9):
        assert len(lamination_fingerprint(trib, "a", k)) == 2 * (2 * k + 1)


def test_fingerprint_is_stable_and_inversion_closed(trib):
    fp = lamination_fingerprint(trib, "b", 3)
    assert fp.subwords == {inverse(w) for w in fp.subwords}
    w = trib.image("b")
    for _ in range(fp.iterate + 5):
        w = trib.image(w)
    assert closed(factors(w, 3)) == fp.subwords


def test_fingerprint_monotone_for_positive(trib):
    w, prev = "c", set()
    for _ in range(12):
        cur = factors(w, 3)
        assert prev <= cur
        prev, w = cur, trib.image(w)


def test_attraction_examples(trib, ident):
    fp = lamination_fingerprint(trib, "a", 2)
    res = attraction_test(trib, CyclicWord("b"), fp)
    assert isinstance(res, Attracted) and res.iterate <= 4
    assert isinstance(attraction_test(trib, "a", fp), Attracted)
    aa = LaminationFingerprint(2, frozenset({"aa", "AA"}))
    assert attraction_test(ident, "b", aa, n_max=15) == NotObserved(15)


def test_attraction_accepts_either_orientation(trib):
    fp = lamination_fingerprint(trib, "a", 2)
    assert isinstance(attraction_test(trib, "A", fp), Attracted)


def test_weak_limits_of_c(trib, trib_points):
    fp = lamination_fingerprint(trib, "a", 2)
    lines = weak_limit_lines(trib, "c", 2, fixed_points=trib_points)
    generic = [ln for ln in lines if ln.classification is LineClass.GENERIC_LEAF_LIKE]
    assert generic and all(ln.closure == fp.subwords for ln in generic)


def test_weak_limits_of_a_self_attraction(trib, trib_points):
    fp = lamination_fingerprint(trib, "a", 2)
    lines = weak_limit_lines(trib, "a", 2, fixed_points=trib_points)
    assert lines and all(ln.classification is LineClass.GENERIC_LEAF_LIKE for ln in lines)
    assert any(ln.closure == fp.subwords for ln in lines)


def test_weak_limits_of_identity_are_empty(ident):
    assert weak_limit_lines(ident, "a") == []
    assert weak_limit_lines(ident, "abC") == []


def test_limit_line_invariants(trib, trib_points):
    c = CyclicWord("aB")
    lines = weak_limit_lines(trib, c, 3, fixed_points=trib_points)
    assert lines
    iterates = [c.raw]
    for _ in range(20):
        iterates.append(split_cyclic(trib.image(iterates[-1]))[0])
    tail = iterates[-6:]
    for ln in lines:
        assert ln.converged
        assert same_point(ln.end1, ln.end2) is Comparison.DISTINCT
        assert all(ln.witness in CyclicWord._trusted(t).subwords(3) for t in tail)
        # the central word reads through the identity
        assert ln.central_word().endswith(ln.end2.stable)
        assert set(ln.as_dict()) >= {"end1", "end2", "witness", "classification"}


def test_tribonacci_lines_join_fixed_points(trib, trib_points):
    lines = weak_limit_lines(trib, "c", 3, fixed_points=trib_points)
    assert all(ln.also_fix_plus for ln in lines)


def test_fingerprint_equal_and_common_lamination(trib):
    fp = lamination_fingerprint(trib, "a", 3)
    assert fingerprint_equal(fp, lamination_fingerprint(trib, "b", 3))
    assert not fingerprint_equal(fp, lamination_fingerprint(trib, "a", 2))
    assert common_lamination_check(trib, trib)
    for k in (2, 3):
        assert common_lamination_check(trib, power(trib, 2), k)


def test_relabelled_tribonacci_has_different_fingerprint(trib):
    # sigma o phi o sigma^-1 for the relabelling a -> b -> c -> a
    permuted = parse_automorphism("a->b; b->bc; c->ba")
    assert not common_lamination_check(trib, permuted, 2)


def test_fingerprints_skip_non_growing_generators():
    phi = parse_automorphism("a->ab; b->a; c->c")
    fps = fingerprints(phi, 2)
    assert len(fps) == 1 and fps[0].generator == "a"
    assert fingerprints(identity(2), 2) == []
