"""Growth of conjugacy classes and the search for periodic classes.

A periodic conjugacy class rules out hyperbolicity of the mapping torus;
finding none within the bounds is reported as a semi-decision only.
"""

from fgdyn import certify_hyperbolicity, cyclic_permutation, fibonacci, growth_profile, perron_root, tribonacci

trib = tribonacci()
prof = growth_profile(trib, "a", 15)
print("Tribonacci lengths:", prof.lengths)
print(f"estimated rate {prof.estimated_rate:.6f}, Perron root {perron_root(trib.incidence_matrix):.6f}")

for phi in (fibonacci(), cyclic_permutation(3), trib):
    v = certify_hyperbolicity(phi, 5, 5)
    print(f"{phi.label:>12}:", v.status, getattr(v, "witness", ""), getattr(v, "period", ""))
