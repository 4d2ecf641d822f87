"""Random trees, kernels and measures with exact rational entries.

All generators take a ``random.Random`` so sweeps are reproducible.
"""

from __future__ import annotations

import random
from fractions import Fraction

import numpy as np

from .bmc import BlockKernel, BmcSpec
from .chains import ChainSpec, product_mc_spec
from .measure import JointMeasure
from .tree import RootedTree


def random_tree(n: int, rng: random.Random, root: int | None = None) -> RootedTree:
    """Uniform random recursive tree on ``n`` vertices, random root unless given."""
    edges = [(rng.randrange(i), i) for i in range(1, n)]
    return RootedTree(n, edges, rng.randrange(n) if root is None else root)


def random_distribution(k: int, rng: random.Random, positive: bool = True,
                        max_weight: int = 6) -> list[Fraction]:
    low = 1 if positive else 0
    while True:
        w = [rng.randint(low, max_weight) for _ in range(k)]
        if sum(w):
            total = sum(w)
            return [Fraction(x, total) for x in w]


def random_bmc_spec(t: RootedTree, q: int, rng: random.Random, positive: bool = True) -> BmcSpec:
    """Block kernels with arbitrary (generally correlated) joint rows."""
    kernels = {}
    for x in t.vertices:
        block = t.children(x)
        if block:
            size = q ** len(block)
            rows = [np.array(random_distribution(size, rng, positive), dtype=object)
                    .reshape((q,) * len(block)) for _ in range(q)]
            kernels[x] = BlockKernel.from_arrays(x, block, rows)
    return BmcSpec(t, q, tuple(random_distribution(q, rng, positive)), kernels)


def random_stochastic_matrix(q: int, rng: random.Random, positive: bool = True) -> list[list[Fraction]]:
    return [random_distribution(q, rng, positive) for _ in range(q)]


def random_product_mc_spec(t: RootedTree, q: int, rng: random.Random,
                           positive: bool = True) -> BmcSpec:
    edges = {(x, y): random_stochastic_matrix(q, rng, positive)
             for x in t.vertices for y in t.children(x)}
    return product_mc_spec(t, q, random_distribution(q, rng, positive), edges)


def random_measure(t: RootedTree, q: int, rng: random.Random, positive: bool = True,
                   max_weight: int = 6) -> JointMeasure:
    """A joint table with independent random integer weights."""
    low = 1 if positive else 0
    w = np.empty((q,) * t.n_vertices, dtype=object)
    w.ravel()[:] = [rng.randint(low, max_weight) for _ in range(w.size)]
    if not any(w.flat):
        w.ravel()[0] = 1
    return JointMeasure.from_weights(t, q, w)


def random_chain(q: int, rng: random.Random, positive: bool = True) -> ChainSpec:
    return ChainSpec(tuple(random_distribution(q, rng, positive)),
                     random_stochastic_matrix(q, rng, positive))
