"""Block Markov chains given by a root distribution and per-vertex block kernels.

A block kernel at ``x`` maps the symbol at ``x`` to a joint law on the whole
children block. Rows need not factor across siblings; correlated siblings
are exactly what separates block Markov chains from tree Markov chains.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Mapping

import numpy as np

from .errors import ConfigurationError, MarkovPropertyError, NullEventError, SpecError
from .measure import Configuration, JointMeasure
from .tree import RootedTree


def _fraction(p) -> Fraction:
    if isinstance(p, float):
        raise SpecError(f"probability {p!r} is a float; use an exact rational")
    return Fraction(p)


@dataclass(frozen=True)
class BlockKernel:
    """Transition from the symbol at ``vertex`` to a configuration on ``block``.

    ``rows[s]`` is an array of shape ``(q,) * len(block)`` whose axes follow
    ``block`` (ascending vertex ids).
    """

    vertex: int
    block: tuple[int, ...]
    rows: tuple[np.ndarray, ...]

    @classmethod
    def from_arrays(cls, vertex: int, block, rows) -> "BlockKernel":
        block = tuple(block)
        if list(block) != sorted(block):
            raise SpecError("block must be listed in ascending vertex order")
        arrays = []
        for row in rows:
            arr = np.asarray(row, dtype=object)
            out = np.empty(arr.shape, dtype=object)
            out.ravel()[:] = [_fraction(p) for p in arr.flat]
            arrays.append(out)
        return cls(int(vertex), block, tuple(arrays))

    @classmethod
    def from_mapping(cls, vertex: int, block, q: int,
                     rows: Mapping[int, Mapping[tuple[int, ...], Fraction]]) -> "BlockKernel":
        """From ``{symbol: {block configuration tuple: probability}}``; missing cells are 0."""
        block = tuple(sorted(block))
        arrays = []
        for s in range(q):
            arr = np.full((q,) * len(block), Fraction(0), dtype=object)
            for cfg, p in rows.get(s, {}).items():
                arr[tuple(cfg)] = _fraction(p)
            arrays.append(arr)
        return cls(int(vertex), block, tuple(arrays))

    @classmethod
    def product_of(cls, vertex: int, block, edge_rows) -> "BlockKernel":
        """Kernel whose row ``s`` is the product of ``edge_rows[y][s]`` over children ``y``."""
        block = tuple(sorted(block))
        q = len(edge_rows[block[0]])
        arrays = []
        for s in range(q):
            arr = np.array(Fraction(1), dtype=object)
            for y in block:
                row = np.array([_fraction(p) for p in edge_rows[y][s]], dtype=object)
                arr = np.multiply.outer(arr, row)
            arrays.append(arr)
        return cls(int(vertex), block, tuple(arrays))

    @property
    def q(self) -> int:
        return len(self.rows)

    def prob(self, sym: int, target: Configuration) -> Fraction:
        return self.rows[sym][tuple(target[y] for y in self.block)]

    def validate(self, q: int) -> None:
        if len(self.rows) != q:
            raise SpecError(f"kernel at vertex {self.vertex} needs {q} rows, got {len(self.rows)}")
        shape = (q,) * len(self.block)
        for s, row in enumerate(self.rows):
            if row.shape != shape:
                raise SpecError(f"kernel row {s} at vertex {self.vertex} has shape {row.shape}, "
                                f"expected {shape}")
            if any(p < 0 for p in row.flat):
                raise SpecError(f"kernel row {s} at vertex {self.vertex} has a negative entry")
            total = sum(row.flat)
            if total != 1:
                raise SpecError(f"kernel row {s} at vertex {self.vertex} sums to {total}, not 1")


@dataclass(frozen=True)
class BmcSpec:
    """Root law plus one block kernel per non-leaf vertex.

    ``flagged_rows`` lists ``(vertex, symbol)`` kernel rows that were filled
    in arbitrarily because the symbol can never occur at that vertex.
    """

    tree: RootedTree
    q: int
    initial: tuple[Fraction, ...]
    kernels: Mapping[int, BlockKernel]
    flagged_rows: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "initial", tuple(_fraction(p) for p in self.initial))
        self.validate()

    def validate(self) -> None:
        t = self.tree
        if self.q < 1:
            raise SpecError("alphabet size must be positive")
        if len(self.initial) != self.q:
            raise SpecError(f"initial distribution needs {self.q} entries")
        if any(p < 0 for p in self.initial) or sum(self.initial) != 1:
            raise SpecError("initial distribution must be nonnegative and sum to 1")
        inner = {x for x in t.vertices if t.children(x)}
        if set(self.kernels) != inner:
            missing = sorted(inner - set(self.kernels))
            extra = sorted(set(self.kernels) - inner)
            raise SpecError(f"kernels must cover exactly the non-leaf vertices "
                            f"(missing {missing}, unexpected {extra})")
        for x, k in self.kernels.items():
            if k.vertex != x:
                raise SpecError(f"kernel stored under {x} is for vertex {k.vertex}")
            if k.block != t.children(x):
                raise SpecError(f"kernel block at vertex {x} is {k.block}, "
                                f"children are {t.children(x)}")
            k.validate(self.q)


def realize(spec: BmcSpec) -> JointMeasure:
    """Joint law: root probability times every block kernel entry."""
    t, q, n = spec.tree, spec.q, spec.tree.n_vertices
    table = np.empty((1,) * n, dtype=object)
    table.ravel()[0] = Fraction(1)
    shape = [1] * n
    shape[t.root] = q
    table = table * np.array(spec.initial, dtype=object).reshape(shape)
    for x in sorted(spec.kernels):
        k = spec.kernels[x]
        axes = (x,) + k.block
        # rows stacked give axes (x, *block); reorder to ascending vertex order
        arr = np.stack(k.rows)
        arr = np.transpose(arr, np.argsort(axes))
        shape = [1] * n
        for v in axes:
            shape[v] = q
        table = table * arr.reshape(shape)
    return JointMeasure.from_table(t, q, np.broadcast_to(table, (q,) * n))


def block_transition(spec: BmcSpec, x: int, sym: int, target: Configuration) -> Fraction:
    """The kernel entry ``mu[target on children(x) | x = sym]``."""
    block = spec.tree.children(x)
    if not block:
        raise ConfigurationError("no block at leaf")
    if set(target) != set(block):
        raise ConfigurationError(f"target must assign exactly the children {block}")
    if not 0 <= sym < spec.q or any(not 0 <= s < spec.q for s in target.values()):
        raise ConfigurationError("symbol out of alphabet")
    return spec.kernels[x].prob(sym, target)


def n_step_block(m: JointMeasure, t: RootedTree, x: int, n: int, from_sym: int,
                 target: Configuration, verify: bool = True) -> Fraction:
    """``mu[target on S_n(x) | x = from_sym]``, checked against every intermediate level.

    With ``verify`` set, the value is recomputed for each ``1 <= k < n`` as
    the sum over configurations on ``S_k(x)`` of the two-step product, and a
    mismatch raises :class:`MarkovPropertyError`.
    """
    level = t.level_k_successors(x, n)
    if not level:
        raise ConfigurationError("horizon beyond tree depth")
    if set(target) != set(level):
        raise ConfigurationError(f"target must assign exactly the level {level}")
    given = {x: from_sym}
    direct = m.conditional_probability(target, given)
    if verify:
        for k in range(1, n):
            middle = t.level_k_successors(x, k)
            total = Fraction(0)
            for syms in product(range(m.q), repeat=len(middle)):
                mid = dict(zip(middle, syms))
                step = m.conditional_probability(mid, given)
                if step:
                    total += m.conditional_probability(target, mid) * step
            if total != direct:
                raise MarkovPropertyError(
                    f"level decomposition through k={k} gives {total}, direct value is {direct}")
    return direct


def global_block_conditional(m: JointMeasure, t: RootedTree, x: int, future_cfg: Configuration,
                             outside_cfg: Configuration) -> tuple[Fraction, Fraction]:
    """Conditionals of ``future_cfg`` given ``outside_cfg`` and given ``x`` alone.

    ``future_cfg`` lives inside the strict future of ``x``; ``outside_cfg``
    lives outside it and must assign ``x``. The two values agree for block
    Markov chains rooted at ``t.root``.
    """
    future = set(t.strict_future(x))
    if not set(future_cfg) <= future:
        raise ConfigurationError("future configuration must lie in the strict future of x")
    if x not in outside_cfg:
        raise ConfigurationError("outside configuration must assign x")
    if set(outside_cfg) & future:
        raise ConfigurationError("outside configuration must avoid the strict future of x")
    if m.cylinder_probability(outside_cfg) == 0:
        raise NullEventError("conditioning on null event")
    return (m.conditional_probability(future_cfg, outside_cfg),
            m.conditional_probability(future_cfg, {x: outside_cfg[x]}))
