"""
Building a block Markov chain from kernels
==========================================

Kernels live on children blocks, so siblings may be coupled. Here the two
children of the root tend to agree.
"""

from fractions import Fraction as F

from bmctree import BlockKernel, BmcSpec, RootedTree, realize
from bmctree.classify import check_children_cond_indep, check_obmc

t = RootedTree.star(2)
half = F(1, 2)
rows = {
    0: {(0, 0): F(3, 8), (1, 1): F(3, 8), (0, 1): F(1, 8), (1, 0): F(1, 8)},
    1: {(0, 0): F(1, 8), (1, 1): F(5, 8), (0, 1): F(1, 8), (1, 0): F(1, 8)},
}
spec = BmcSpec(t, 2, (half, half), {0: BlockKernel.from_mapping(0, (1, 2), 2, rows)})
m = realize(spec)

for cfg, p in m.entries():
    print(cfg, p)

###############################################################################
# Block Markov by construction, but the siblings are not independent given
# the root.

print("block Markov:", check_obmc(m, t).holds)
v = check_children_cond_indep(m, t)
print("siblings independent:", v.holds, "(joint", v.witness.lhs, "vs product", v.witness.rhs, ")")
