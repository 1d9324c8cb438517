"""Acceptance criteria, one test each.

Every test records its outcome in ``helpers.ACCEPTANCE``; the session
summary prints one PASS/FAIL line per criterion.
"""

import itertools
import random

import pytest

from fgdyn import (
    Attracted,
    CyclicWord,
    LineClass,
    NotHyperbolic,
    NotQuasiconvex,
    QCNoObstructionFound,
    attraction_test,
    certify_hyperbolicity,
    cyclic_permutation,
    enumerate_cyclic_words,
    fibonacci,
    fingerprints,
    growth_profile,
    identification_graph,
    identity,
    invert,
    qc_verdict,
    stallings_graph,
    tribonacci,
)
from fgdyn.subgroups import NOT_CARRIED, carries_ray
from helpers import ACCEPTANCE, BATTERY, RANDOM_CHECKS, battery_ending_lamination


def record(n, ok, detail):
    ACCEPTANCE[n] = (ok, detail)
    print(f"criterion {n}: {'PASS' if ok else 'FAIL'} - {detail}")
    assert ok, detail


# -- independent oracle for periodic classes --------------------------------


def naive_reduce(s):
    out = []
    for x in s:
        if out and out[-1] == x.swapcase():
            out.pop()
        else:
            out.append(x)
    return "".join(out)


def naive_class(s):
    s = naive_reduce(s)
    while len(s) > 1 and s[0] == s[-1].swapcase():
        s = s[1:-1]
    if not s:
        return ""
    key = lambda w: [(x.lower(), x.isupper()) for x in w]
    return min((s[i:] + s[:i] for i in range(len(s))), key=key)


def naive_image(images, s):
    table = {}
    for i, img in enumerate(images):
        g = chr(ord("a") + i)
        table[g] = img
        table[g.upper()] = "".join(x.swapcase() for x in reversed(img))
    return naive_class("".join(table[x] for x in s))


def oracle_first_periodic(images, max_len, max_period):
    rank = len(images)
    letters = "".join(chr(ord("a") + i) + chr(ord("A") + i) for i in range(rank))
    classes = set()
    for n in range(1, max_len + 1):
        for t in itertools.product(letters, repeat=n):
            c = naive_class("".join(t))
            if 0 < len(c) <= max_len:
                classes.add(c)
    found = []
    for c in classes:
        x = c
        for p in range(1, max_period + 1):
            x = naive_image(images, x)
            if x == c:
                found.append((len(c), [(y.lower(), y.isupper()) for y in c], c, p))
                break
    found.sort()
    return (found[0][2], found[0][3]) if found else None


def test_criterion_1_periodic_witnesses():
    cases = [
        ("fibonacci", fibonacci(), ("abAB", 2)),
        ("permutation", cyclic_permutation(3), ("a", 3)),
        ("identity", identity(3), ("a", 1)),
    ]
    details, ok = [], True
    for name, phi, expected in cases:
        oracle = oracle_first_periodic(phi.images, 4, 4)
        v = certify_hyperbolicity(phi, 4, 4)
        got = (v.witness.letters, v.period) if isinstance(v, NotHyperbolic) else None
        ok &= got == oracle == expected
        details.append(f"{name} [{got[0] if got else '-'}] p={got[1] if got else '-'}")
    record(1, ok, "; ".join(details) + " (oracle agrees)" if ok else "; ".join(details))


# -- growth ---------------------------------------------------------------


def tribonacci_root():
    lo, hi = 1.0, 2.0
    for _ in range(100):
        mid = (lo + hi) / 2
        if mid**3 - mid**2 - mid - 1 > 0:
            hi = mid
        else:
            lo = mid
    return (lo + hi) / 2


def test_criterion_2_tribonacci_growth():
    prof = growth_profile(tribonacci(), "a", 20)
    expected = [1, 2, 4]
    while len(expected) < 21:
        expected.append(expected[-1] + expected[-2] + expected[-3])
    root = tribonacci_root()
    err = abs(prof.estimated_rate - root) / root
    ok = list(prof.lengths) == expected and err < 0.05
    record(2, ok, f"lengths match recurrence={list(prof.lengths) == expected}, rate {prof.estimated_rate:.5f} vs {root:.5f} (rel err {err:.2e})")


# -- fixed points -----------------------------------------------------------


def test_criterion_3_gjll_bound():
    worst, bad = 0, []
    for name in BATTERY:
        els = battery_ending_lamination(name)
        for sign, fps in (("+", els.fixed_points_plus), ("-", els.fixed_points_minus)):
            counts = fps.per_lift_counts()
            worst = max(worst, max(counts.values(), default=0))
            bad += [f"{name}{sign}:{t or '1'}" for t in fps.gjll_violations()]
    record(3, not bad, f"max per-lift Distinct count {worst} <= 6 over {len(BATTERY)} automorphisms, both directions" + (f"; violations {bad}" if bad else ""))


# -- laminations ------------------------------------------------------------


def test_criterion_4_attraction():
    phi = tribonacci()
    fps = fingerprints(phi, 3)
    classes = [c for n in range(1, 5) for c in enumerate_cyclic_words(3, n)]
    missed, worst = [], 0
    for c in classes:
        hits = [r for r in (attraction_test(phi, c, fp, n_max=15) for fp in fps) if isinstance(r, Attracted)]
        if hits:
            worst = max(worst, min(r.iterate for r in hits))
        else:
            missed.append(c.letters)
    record(4, not missed, f"{len(classes) - len(missed)}/{len(classes)} classes attracted (k=3), latest at iterate {worst}" + (f"; missed {missed[:5]}" if missed else ""))


def test_criterion_5_limit_line_classification():
    total, unconverged, bad = 0, 0, []
    for name in BATTERY:
        for ln in battery_ending_lamination(name).lines:
            if not ln.converged:
                unconverged += 1
                continue
            total += 1
            if ln.classification not in (LineClass.GENERIC_LEAF_LIKE, LineClass.FIX_PLUS_JOINING):
                bad.append(f"{name}{ln.direction}:{ln.witness}")
    ok = not bad and total > 0
    record(5, ok, f"{total} converged lines classified, {len(bad)} unclassified, {unconverged} unconverged (excluded)")


def test_criterion_6_identification_graph():
    details, ok = [], True
    for name in BATTERY:
        g = identification_graph(battery_ending_lamination(name))
        ok &= not g.review and not g.exceeds_ceiling and not g.loops
        details.append(f"{name} max {g.max_component_size}/{g.ceiling}")
    record(6, ok, "no unmatched branch nodes; " + ", ".join(details))


# -- quasiconvexity -----------------------------------------------------------


def test_criterion_7_quasiconvexity(trib_points, trib_inv_points):
    phi = invert(tribonacci())
    fixed = (trib_points, trib_inv_points)
    p = trib_points.lift_points("")[0]
    constructed = qc_verdict(stallings_graph([p.prefix], 3), phi, fixed_points=fixed)
    ab = stallings_graph(["a", "b"], 3)
    verdict = qc_verdict(ab, phi, fixed_points=fixed)
    rays = [carries_ray(ab, q) for fps in fixed for q in fps.points]
    rays_ok = all(r.status == NOT_CARRIED and r.read < r.depth for r in rays)
    ok = isinstance(constructed, NotQuasiconvex) and isinstance(verdict, QCNoObstructionFound) and rays_ok
    record(7, ok, f"<P> -> {constructed.status}; <a,b> -> {verdict.status}, {len(rays)} fixed-point rays NotCarried inside the stable depth={rays_ok}")


# -- randomized invariants ----------------------------------------------------

N_RANDOM = 10_000


def test_criterion_8_randomized_invariants():
    rng = random.Random(20240611)
    failures = {}
    for name, check in RANDOM_CHECKS.items():
        failures[name] = sum(not check(rng) for _ in range(N_RANDOM))
    ok = not any(failures.values())
    summary = ", ".join(f"{name} {N_RANDOM - f}/{N_RANDOM}" for name, f in failures.items())
    record(8, ok, summary)
