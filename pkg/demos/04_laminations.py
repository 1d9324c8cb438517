"""Lamination fingerprints, attraction and weak limits.

A fingerprint is the inversion-closed set of length-k subwords that
iterates of a generator settle on.  Weak limits of a class are the lines
that its iterates converge to near persistent windows.
"""

from fgdyn import attraction_test, common_lamination_check, cyclic_permutation, tribonacci, weak_limit_lines
from fgdyn.laminations import lamination_fingerprint

trib = tribonacci()
fp = lamination_fingerprint(trib, "a", 3)
print(f"k=3 fingerprint ({len(fp)} words):", " ".join(fp.sorted()))

for c in ("b", "cB", "abAB"):
    print(f"[{c}] ->", attraction_test(trib, c, fp, n_max=15))

print("common lamination with a permutation:", common_lamination_check(trib, cyclic_permutation(3), 2))

for line in weak_limit_lines(trib, "c", 3):
    state = "converged" if line.converged else "unconverged"
    print(f"{line.classification.value} ({state}), witness {line.witness}")
