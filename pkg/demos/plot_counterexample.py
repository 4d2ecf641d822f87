"""
A block Markov chain that is not a tree Markov chain
====================================================

A two-state chain is laid along a path and one extra vertex is hung off
its second site. Rooted at the bottom vertex the measure is block Markov;
rooted at the top vertex it is not, and it fails the tree Markov property
on a three-vertex subtree.
"""

from bmctree import check_mc, check_obmc, counterexample_fixture, counterexample_values
from bmctree.verdict import fraction_str

t, m, expected = counterexample_fixture()
print("vertices:", ", ".join(t.labels))
print("root:", t.label(t.root))

# the four conditionals, all symbols 0
for name, value in counterexample_values(t, m).items():
    print(f"{name:8s} {fraction_str(value)}")

###############################################################################
# Rooting matters. At ``(0,-1)`` every children block is screened off by its
# parent; at ``(0,1)`` the block below ``(0,0)`` still remembers ``(0,1)``.

for label in ("(0,-1)", "(0,1)"):
    verdict = check_obmc(m, t.rerooted(t.id(label)))
    print(label, "block Markov:", verdict.holds)
    if verdict.witness:
        w = verdict.witness
        print("   witness at", t.label(w.vertex), fraction_str(w.lhs), "vs", fraction_str(w.rhs))

###############################################################################
# The subtree ``{(0,0), (1,0), (0,1)}`` is not a Markov random field.

v = check_mc(m, t)
w = v.witness
print("tree Markov chain:", v.holds)
print("   subtree", [t.label(u) for u in w.subtree], "site", t.label(w.vertex),
      fraction_str(w.lhs), "vs", fraction_str(w.rhs))
