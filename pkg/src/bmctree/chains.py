"""One-dimensional Markov chains and how they sit inside tree-indexed measures."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .bmc import BlockKernel, BmcSpec, _fraction
from .errors import NullEventError, SpecError
from .measure import JointMeasure
from .tree import RootedTree


def _matrix(rows) -> np.ndarray:
    arr = np.asarray(rows, dtype=object)
    out = np.empty(arr.shape, dtype=object)
    out.ravel()[:] = [_fraction(p) for p in arr.flat]
    return out


@dataclass(frozen=True, eq=False)
class ChainSpec:
    """A finite-state chain: initial law and a ``q x q`` transition matrix."""

    initial: tuple
    transition: np.ndarray = field(compare=False)

    def __post_init__(self):
        init = tuple(_fraction(p) for p in self.initial)
        P = _matrix(self.transition)
        q = len(init)
        if P.shape != (q, q):
            raise SpecError(f"transition matrix must be {q}x{q}, got shape {P.shape}")
        if any(p < 0 for p in init) or sum(init) != 1:
            raise SpecError("initial distribution must be nonnegative and sum to 1")
        for i in range(q):
            if any(p < 0 for p in P[i]) or sum(P[i]) != 1:
                raise SpecError(f"row {i} of the transition matrix is not a distribution")
        P.setflags(write=False)
        object.__setattr__(self, "initial", init)
        object.__setattr__(self, "transition", P)

    @property
    def q(self) -> int:
        return len(self.initial)

    @property
    def positive(self) -> bool:
        return all(p > 0 for p in self.initial) and all(p > 0 for p in self.transition.flat)

    def power(self, k: int) -> np.ndarray:
        out = np.empty((self.q, self.q), dtype=object)
        out[...] = Fraction(0)
        for i in range(self.q):
            out[i, i] = Fraction(1)
        for _ in range(k):
            out = out @ self.transition
        return out

    def marginal(self, t: int) -> np.ndarray:
        """Law of the state at time ``t``."""
        return np.array(self.initial, dtype=object) @ self.power(t)

    def trajectory_probability(self, states: Sequence[int]) -> Fraction:
        p = self.initial[states[0]]
        for a, b in zip(states, states[1:]):
            p *= self.transition[a, b]
        return p


def embed_chain(spec: ChainSpec, t: RootedTree, time_map: Mapping[int, int],
                require_unit_steps: bool = False) -> JointMeasure:
    """Law of ``Z_u = X_{time_map[u]}`` for a chain ``X``.

    Unmapped times are summed out exactly with matrix powers. Vertices that
    share a time must carry the same symbol. ``require_unit_steps`` rejects
    maps where some edge joins times that are not consecutive.
    """
    if set(time_map) != set(t.vertices):
        raise SpecError("time map must assign every vertex")
    if any(int(s) < 0 for s in time_map.values()):
        raise SpecError("times must be nonnegative integers")
    if require_unit_steps:
        for a, b in t.edges:
            if abs(time_map[a] - time_map[b]) != 1:
                raise SpecError(f"not a chain embedding: edge {t.label(a)}-{t.label(b)} "
                                f"joins times {time_map[a]} and {time_map[b]}")
    times = sorted(set(int(s) for s in time_map.values()))
    q = spec.q
    start = spec.marginal(times[0])
    steps = [spec.power(b - a) for a, b in zip(times, times[1:])]
    pos = {s: i for i, s in enumerate(times)}
    slot = [pos[int(time_map[v])] for v in t.vertices]

    def law(cfg):
        states = [None] * len(times)
        for v, s in enumerate(cfg):
            i = slot[v]
            if states[i] is None:
                states[i] = s
            elif states[i] != s:
                return Fraction(0)
        p = start[states[0]]
        for i, P in enumerate(steps):
            p *= P[states[i], states[i + 1]]
        return p

    return JointMeasure.from_function(t, q, law)


def chain_as_bmc(spec: ChainSpec, length: int, o: int, on_null: str = "uniform") -> BmcSpec:
    """The chain on positions ``0..length-1`` as a block Markov chain rooted at ``o``.

    Kernels pointing forward in time are rows of the transition matrix;
    kernels pointing backward are the time-reversed conditionals
    ``mu[X_k | X_{k+1}]``. A backward row at a symbol of zero probability is
    set to uniform and listed in ``flagged_rows`` (or raises with
    ``on_null="raise"``).
    """
    if length < 1 or not 0 <= o < length:
        raise SpecError("need length >= 1 and 0 <= o < length")
    if on_null not in ("uniform", "raise"):
        raise ValueError("on_null must be 'uniform' or 'raise'")
    q = spec.q
    t = RootedTree.path(length, o)
    P = spec.transition
    marg = [spec.marginal(k) for k in range(length)]
    null_rows = []
    forward = {x: [P[s] for s in range(q)] for x in range(o, length - 1)}
    backward = {}
    for x in range(1, o + 1):
        k = x - 1
        rows = []
        for b in range(q):
            if marg[x][b] == 0:
                if on_null == "raise":
                    raise NullEventError(f"symbol {b} has probability zero at time {x}; "
                                         "the reversed kernel is undefined")
                null_rows.append((x, b))
                rows.append([Fraction(1, q)] * q)
            else:
                rows.append([marg[k][a] * P[a, b] / marg[x][b] for a in range(q)])
        backward[x] = rows
    kernels: dict[int, BlockKernel] = {}
    for x in set(forward) | set(backward):
        # an interior root has one child on each side; given X_o they are independent
        edge_rows = {}
        if x in backward:
            edge_rows[x - 1] = backward[x]
        if x in forward:
            edge_rows[x + 1] = forward[x]
        kernels[x] = BlockKernel.product_of(x, tuple(edge_rows), edge_rows)
    initial = tuple(marg[o])
    return BmcSpec(t, q, initial, kernels, tuple(null_rows))


def product_mc_spec(t: RootedTree, q: int, initial: Sequence, edge_kernels: Mapping) -> BmcSpec:
    """Block kernels that factor over children.

    ``edge_kernels[(x, y)]`` is the ``q x q`` matrix of ``mu[y | x]`` for
    every parent-child pair ``(x, y)`` under the root of ``t``.
    """
    kernels = {}
    for x in t.vertices:
        block = t.children(x)
        if not block:
            continue
        rows = {}
        for y in block:
            if (x, y) not in edge_kernels:
                raise SpecError(f"missing edge kernel for {t.label(x)} -> {t.label(y)}")
            M = _matrix(edge_kernels[(x, y)])
            if M.shape != (q, q):
                raise SpecError(f"edge kernel {t.label(x)} -> {t.label(y)} must be {q}x{q}")
            rows[y] = M
        kernels[x] = BlockKernel.product_of(x, block, rows)
    return BmcSpec(t, q, tuple(initial), kernels)


# -- the counter-example ------------------------------------------------------

COUNTEREXAMPLE_CHAIN = ChainSpec(
    (Fraction(1, 2), Fraction(1, 2)),
    [[Fraction(1, 2), Fraction(1, 2)], [Fraction(1), Fraction(0)]],
)


def counterexample_tree(tail: int = 2) -> tuple[RootedTree, dict[int, int]]:
    """The horizontal ray ``(0,0), (1,0), ..., (tail,0)`` plus ``(0,1)`` and ``(0,-1)``.

    Vertices are listed ray first, then ``(0,1)``, then ``(0,-1)``; roots at
    ``(0,-1)``. Returns the tree and its time map: ``(0,-1)`` at time 0,
    ``(0,0)`` at 1, ``(0,1)`` at 2 and ``(n,0)`` at ``n+2`` for ``n >= 1``.
    """
    if tail < 1:
        raise ValueError("tail must reach at least (1,0)")
    ray = [(n, 0) for n in range(tail + 1)]
    coords = ray + [(0, 1), (0, -1)]
    labels = [f"({a},{b})" for a, b in coords]
    edges = [(i, j) for i in range(len(coords)) for j in range(i + 1, len(coords))
             if abs(coords[i][0] - coords[j][0]) + abs(coords[i][1] - coords[j][1]) == 1]
    t = RootedTree(len(coords), edges, labels.index("(0,-1)"), labels)
    times = {}
    for v, (a, b) in enumerate(coords):
        if (a, b) == (0, -1):
            times[v] = 0
        elif (a, b) == (0, 0):
            times[v] = 1
        elif (a, b) == (0, 1):
            times[v] = 2
        else:
            times[v] = a + 2
    return t, times


def counterexample_fixture(tail: int = 2):
    """Tree, measure and the four published constants of the counter-example."""
    t, times = counterexample_tree(tail)
    m = embed_chain(COUNTEREXAMPLE_CHAIN, t, times)
    expected = {
        "bmc_lhs": Fraction(1, 6),
        "bmc_rhs": Fraction(1, 4),
        "mc_lhs": Fraction(1, 2),
        "mc_rhs": Fraction(3, 4),
    }
    return t, m, expected


def counterexample_values(t: RootedTree, m: JointMeasure) -> dict[str, Fraction]:
    """Recompute the four constants on a counter-example tree, all symbols 0."""
    x, up, down, right = t.id("(0,0)"), t.id("(0,1)"), t.id("(0,-1)"), t.id("(1,0)")
    zero = lambda *vs: {v: 0 for v in vs}  # noqa: E731
    return {
        "bmc_lhs": m.conditional_probability(zero(down, right), zero(x, up)),
        "bmc_rhs": m.conditional_probability(zero(down, right), zero(x)),
        "mc_lhs": m.conditional_probability(zero(right), zero(x, up)),
        "mc_rhs": m.conditional_probability(zero(right), zero(x)),
    }
