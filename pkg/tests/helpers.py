from fgdyn import ending_lamination_set, invert, parse_automorphism

# Hyperbolic candidates on F3: positive, primitive, and with no periodic
# class up to length 6 and period 6 (checked in test_dynamics).
BATTERY = {
    "tribonacci": "a->ab; b->ac; c->a",
    "plastic": "a->b; b->c; c->ab",
    "abca": "a->ab; b->c; c->a",
    "shifted": "a->ac; b->a; c->b",
    "t2": "a->abc; b->a; c->b",
}

# criterion number -> (passed, detail); printed at the end of the session
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def battery_automorphism(name):
    return invert(parse_automorphism(BATTERY[name], label=name))


_ELS_CACHE = {}


def battery_ending_lamination(name):
    if name not in _ELS_CACHE:
        _ELS_CACHE[name] = ending_lamination_set(battery_automorphism(name), max_sample_len=2)
    return _ELS_CACHE[name]


def random_positive_primitive(rng, rank=None, moves=None, max_total=None):
    """Random positive automorphism with primitive incidence matrix.

    Built from positive Nielsen moves ``x_i -> x_i x_j`` / ``x_j x_i`` and
    generator permutations, so it is invertible by construction.  The total
    image length is capped (default ``2 * rank + 1``) to keep powers small.
    """
    import numpy as np

    from fgdyn import Automorphism

    while True:
        n = rank or rng.choice((2, 3))
        images = [chr(ord("a") + i) for i in range(n)]
        for _ in range(moves or rng.randint(n, 2 * n + 1)):
            if rng.random() < 0.3:
                rng.shuffle(images)
                continue
            i, j = rng.sample(range(n), 2)
            images[i] = images[i] + images[j] if rng.random() < 0.5 else images[j] + images[i]
        if sum(map(len, images)) > (max_total or 2 * n + 1):
            continue
        phi = Automorphism(images)
        m = phi.incidence_matrix
        if (np.linalg.matrix_power(m, (n - 1) ** 2 + 1) > 0).all():
            return phi


def random_automorphism(rng, rank=3, moves=6):
    """Random product of Nielsen moves (any signs) and permutations."""
    from fgdyn import Automorphism
    from fgdyn.words import concat, inverse

    images = [chr(ord("a") + i) for i in range(rank)]
    for _ in range(moves):
        i, j = rng.sample(range(rank), 2)
        other = images[j] if rng.random() < 0.5 else inverse(images[j])
        images[i] = concat(images[i], other) if rng.random() < 0.5 else concat(other, images[i])
        if rng.random() < 0.2:
            rng.shuffle(images)
    return Automorphism(images)


# Randomized invariant checks; each returns True when the invariant holds.


def check_reduce_idempotent(rng):
    from fgdyn.words import free_reduce, is_reduced, random_letters

    raw = random_letters(rng, rng.randint(1, 4), rng.randint(0, 40))
    once = free_reduce(raw)
    return free_reduce(once) == once and is_reduced(once)


def check_homomorphism(rng):
    from fgdyn.words import concat, random_word

    phi = random_automorphism(rng, rng.choice((2, 3)), rng.randint(1, 5))
    u = random_word(rng, phi.rank, rng.randint(0, 12))
    v = random_word(rng, phi.rank, rng.randint(0, 12))
    return phi(concat(u, v)) == concat(phi(u).letters, phi(v).letters)


def check_conjugation_invariance(rng):
    from fgdyn import CyclicWord
    from fgdyn.words import concat, inverse, random_word

    phi = random_automorphism(rng, rng.choice((2, 3)), rng.randint(1, 5))
    w = random_word(rng, phi.rank, rng.randint(1, 10))
    g = random_word(rng, phi.rank, rng.randint(0, 6))
    conj = concat(concat(g, w), inverse(g))
    return CyclicWord(phi(conj)) == phi.apply_cyclic(w)


def check_folding_confluence(rng):
    import random as _random

    from fgdyn import stallings_graph
    from fgdyn.words import random_word

    rank = rng.choice((2, 3))
    gens = [random_word(rng, rank, rng.randint(1, 6)) for _ in range(rng.randint(1, 3))]
    ref = stallings_graph(gens, rank).canonical_form()
    shuffled = stallings_graph(gens, rank, rng=_random.Random(rng.random())).canonical_form()
    return ref == shuffled


def check_power_invariance(rng):
    from fgdyn import power
    from fgdyn.laminations import fingerprints

    phi = random_positive_primitive(rng)
    k, j = rng.choice((2, 3)), rng.choice((2, 3))
    ours = {fp.subwords for fp in fingerprints(phi, k)}
    return ours == {fp.subwords for fp in fingerprints(power(phi, j), k)}


RANDOM_CHECKS = {
    "reduce idempotence": check_reduce_idempotent,
    "homomorphism law": check_homomorphism,
    "conjugation invariance": check_conjugation_invariance,
    "folding confluence": check_folding_confluence,
    "fingerprint power invariance": check_power_invariance,
}
