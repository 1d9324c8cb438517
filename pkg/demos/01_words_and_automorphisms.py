"""Words, conjugacy classes and automorphisms of a free group.

Run with ``python demos/01_words_and_automorphisms.py``.
"""

from fgdyn import CyclicWord, Word, invert, parse_automorphism, power, tribonacci

# Upper case letters are inverses; words are freely reduced on construction.
w = Word("abBAcaC")
print("reduced:", w)

# A conjugacy class is stored by its least rotation under a < A < b < B < ...
c = CyclicWord("bAabcaB")
print("class of bAabcaB:", c.letters)

phi = tribonacci()
print("phi:", phi)
print("phi^5(a):", power(phi, 5)("a"))

# Inverses are found by Nielsen reduction and verified before they are attached.
phi = invert(phi)
print("phi^-1:", phi.inverse())
print("phi^-1(phi(abc)):", phi.inverse()(phi("abc")))

# Automorphisms can also be parsed from the text format used by the CLI.
psi = parse_automorphism("a -> b; b -> c; c -> ab", label="plastic")
print("plastic(cab) as a class:", psi.apply_cyclic("cab").letters)
