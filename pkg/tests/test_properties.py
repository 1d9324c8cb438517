import random

from hypothesis import given, settings
from hypothesis import strategies as st

from fgdyn import CyclicWord, stallings_graph
from fgdyn.laminations import lamination_fingerprint
from fgdyn.words import concat, free_reduce, inverse, is_reduced, least_rotation
from helpers import RANDOM_CHECKS, random_automorphism, random_positive_primitive

letters3 = st.text(alphabet="aAbBcC", max_size=40)
seeds = st.integers(min_value=0, max_value=2**32)


@given(letters3)
def test_reduce_idempotent(raw):
    once = free_reduce(raw)
    assert free_reduce(once) == once and is_reduced(once)


@given(letters3, letters3)
def test_reduce_respects_concatenation(u, v):
    assert free_reduce(u + v) == concat(free_reduce(u), free_reduce(v))


@given(letters3)
def test_inverse_cancels(raw):
    w = free_reduce(raw)
    assert concat(w, inverse(w)) == ""


@given(letters3, st.integers(0, 39))
def test_cyclic_word_rotation_invariant(raw, shift):
    c = CyclicWord(raw)
    r = c.raw
    if r:
        shift %= len(r)
        assert CyclicWord(r[shift:] + r[:shift]) == c
    assert least_rotation(c.letters) == c.letters


@given(seeds, letters3, letters3)
def test_homomorphism_law(seed, u, v):
    phi = random_automorphism(random.Random(seed))
    u, v = free_reduce(u), free_reduce(v)
    assert phi(concat(u, v)) == concat(phi(u).letters, phi(v).letters)


@given(seeds, letters3, letters3)
def test_conjugation_invariance(seed, w, g):
    phi = random_automorphism(random.Random(seed))
    w, g = free_reduce(w), free_reduce(g)
    assert CyclicWord(phi(concat(concat(g, w), inverse(g)))) == phi.apply_cyclic(w)


@given(seeds, letters3)
def test_inverse_round_trip(seed, w):
    from fgdyn import invert

    phi = invert(random_automorphism(random.Random(seed), moves=4))
    w = free_reduce(w)
    assert phi.inverse()(phi(w)) == w


@given(st.lists(st.text(alphabet="aAbBcC", min_size=1, max_size=6), min_size=1, max_size=3), seeds)
def test_folding_confluence(gens, seed):
    gens = [g for g in map(free_reduce, gens) if g]
    if not gens:
        return
    ref = stallings_graph(gens, 3).canonical_form()
    assert stallings_graph(gens, 3, rng=random.Random(seed)).canonical_form() == ref


@given(st.lists(st.text(alphabet="aAbBcC", min_size=1, max_size=5), min_size=1, max_size=3), st.data())
def test_subgroup_closed_under_products(gens, data):
    gens = [g for g in map(free_reduce, gens) if g]
    if not gens:
        return
    g = stallings_graph(gens, 3)
    pool = gens + [inverse(w) for w in gens]
    word = ""
    for w in data.draw(st.lists(st.sampled_from(pool), max_size=6)):
        word = concat(word, w)
    assert g.membership(word)


@settings(max_examples=50, deadline=None)
@given(seeds, st.sampled_from((1, 2, 3)))
def test_fingerprint_inversion_closed(seed, k):
    phi = random_positive_primitive(random.Random(seed))
    fp = lamination_fingerprint(phi, "a", k)
    assert fp.subwords == {inverse(w) for w in fp.subwords}
    assert all(len(w) == k for w in fp.subwords)


@settings(max_examples=30, deadline=None)
@given(seeds, st.sampled_from(sorted(RANDOM_CHECKS)))
def test_random_checks_hold(seed, name):
    assert RANDOM_CHECKS[name](random.Random(seed))
