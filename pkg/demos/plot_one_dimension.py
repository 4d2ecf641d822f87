"""
Chains on a path, rooted anywhere
=================================

On a path a Markov chain can be written as a block Markov chain rooted at
any position: kernels to the right are the transition rows, kernels to the
left are the time-reversed conditionals. All rootings give the same law.
"""

from fractions import Fraction as F

from bmctree import ChainSpec, RootedTree, chain_as_bmc, check_mc, check_obmc, embed_chain, realize

chain = ChainSpec((F(1, 3), F(2, 3)), [[F(1, 4), F(3, 4)], [F(1, 2), F(1, 2)]])
law = embed_chain(chain, RootedTree.path(4), {v: v for v in range(4)})

for o in range(4):
    spec = chain_as_bmc(chain, 4, o)
    print("root", o, "same law:", realize(spec) == law)

# a reversed kernel, read off at root 3
print("mu[X2 | X3 = 0] =", [str(p) for p in chain_as_bmc(chain, 4, 3).kernels[3].rows[0]])

print("block Markov at every root:", all(check_obmc(law, RootedTree.path(4, o)) for o in range(4)))
print("tree Markov chain:", check_mc(law).holds)
