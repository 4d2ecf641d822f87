"""Exact probability measures on ``q**|V|`` configuration spaces.

A :class:`JointMeasure` stores the full joint table as integer weights over a
common denominator, laid out as an ``n``-dimensional numpy object array with
one axis per vertex (axis ``v`` is the symbol at vertex ``v``). Marginals are
axis sums with ``keepdims=True`` so they broadcast against each other, which
lets every conditional-independence test below run as one vectorised
comparison of cross products.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import product
from typing import Callable, Iterable, Iterator, Mapping

import numpy as np

from .errors import ConfigurationError, NullEventError, SpecError
from .tree import RootedTree
from .verdict import Verdict, Witness

Configuration = Mapping[int, int]


def _as_int_array(values) -> np.ndarray:
    arr = np.empty(np.shape(values), dtype=object)
    flat = np.asarray(values, dtype=object).ravel()
    arr.ravel()[:] = [int(v) for v in flat]
    return arr


class JointMeasure:
    """A probability table over every configuration of ``tree`` in ``{0..q-1}``.

    Build one with :meth:`from_table`, :meth:`from_function` or
    :meth:`from_weights`; the constructor itself expects already-normalised
    integer weights.
    """

    def __init__(self, tree: RootedTree, q: int, weights: np.ndarray, denominator: int):
        if q < 1:
            raise SpecError("alphabet size must be positive")
        n = tree.n_vertices
        if weights.shape != (q,) * n:
            raise SpecError(f"table must have shape {(q,) * n}, got {weights.shape}")
        if any(w < 0 for w in weights.flat):
            raise SpecError("probabilities must be nonnegative")
        total = sum(weights.flat)
        if total != denominator or denominator <= 0:
            raise SpecError("probabilities must sum to exactly 1")
        g = math.gcd(denominator, *weights.flat)
        if g > 1:
            weights = _as_int_array(weights // g)
            denominator //= g
        weights.setflags(write=False)
        self._tree = tree
        self._q = int(q)
        self._w = weights
        self._den = int(denominator)
        self._positive = all(w > 0 for w in weights.flat)
        self._marginals: dict[tuple[int, ...], np.ndarray] = {}

    # -- constructors ---------------------------------------------------------

    @classmethod
    def from_weights(cls, tree: RootedTree, q: int, weights) -> "JointMeasure":
        """Normalise nonnegative integer weights (any positive total)."""
        w = _as_int_array(weights)
        total = sum(w.flat)
        if total <= 0:
            raise SpecError("weights must have positive total")
        return cls(tree, q, w, total)

    @classmethod
    def from_table(cls, tree: RootedTree, q: int, table) -> "JointMeasure":
        """From an array (shape ``(q,)*n``) of exact rationals summing to 1."""
        arr = np.asarray(table, dtype=object)
        if arr.shape != (q,) * tree.n_vertices:
            arr = arr.reshape((q,) * tree.n_vertices)
        if any(isinstance(p, float) for p in arr.flat):
            raise SpecError("probabilities must be exact rationals, not floats")
        fracs = [Fraction(p) for p in arr.flat]
        den = math.lcm(*(p.denominator for p in fracs)) if fracs else 1
        w = np.empty(arr.shape, dtype=object)
        w.ravel()[:] = [p.numerator * (den // p.denominator) for p in fracs]
        if sum(fracs) != 1:
            raise SpecError(f"probabilities must sum to exactly 1, got {sum(fracs)}")
        return cls(tree, q, w, den)

    @classmethod
    def from_function(cls, tree: RootedTree, q: int,
                      fn: Callable[[tuple[int, ...]], Fraction]) -> "JointMeasure":
        """Evaluate ``fn`` on every full configuration (tuple indexed by vertex id)."""
        n = tree.n_vertices
        table = np.empty((q,) * n, dtype=object)
        for cfg in product(range(q), repeat=n):
            table[cfg] = Fraction(fn(cfg))
        return cls.from_table(tree, q, table)

    @classmethod
    def product(cls, tree: RootedTree, q: int, marginals) -> "JointMeasure":
        """Independent sites, ``marginals[v][s]`` the probability of ``s`` at ``v``."""
        table = np.array(Fraction(1), dtype=object)
        for v in range(tree.n_vertices):
            row = np.array([Fraction(p) for p in marginals[v]], dtype=object)
            table = np.multiply.outer(table, row)
        return cls.from_table(tree, q, table)

    @classmethod
    def uniform(cls, tree: RootedTree, q: int) -> "JointMeasure":
        return cls(tree, q, _as_int_array(np.ones((q,) * tree.n_vertices, dtype=object)),
                   q ** tree.n_vertices)

    # -- accessors ------------------------------------------------------------

    @property
    def tree(self) -> RootedTree:
        return self._tree

    @property
    def q(self) -> int:
        return self._q

    @property
    def n_vertices(self) -> int:
        return self._tree.n_vertices

    @property
    def weights(self) -> np.ndarray:
        """Read-only integer weights; probabilities are ``weights / denominator``."""
        return self._w

    @property
    def denominator(self) -> int:
        return self._den

    @property
    def positive(self) -> bool:
        """Whether every full configuration has positive probability."""
        return self._positive

    def probabilities(self) -> np.ndarray:
        out = np.empty(self._w.shape, dtype=object)
        out.ravel()[:] = [Fraction(w, self._den) for w in self._w.flat]
        return out

    def entries(self) -> Iterator[tuple[tuple[int, ...], Fraction]]:
        """``(configuration, probability)`` pairs in mixed-radix order."""
        for cfg in product(range(self._q), repeat=self.n_vertices):
            yield cfg, Fraction(self._w[cfg], self._den)

    def __getitem__(self, cfg) -> Fraction:
        return Fraction(self._w[tuple(cfg)], self._den)

    def __eq__(self, other):
        if not isinstance(other, JointMeasure):
            return NotImplemented
        return (self._q == other._q and self._den == other._den
                and self._tree.same_shape(other._tree)
                and bool(np.all(self._w == other._w)))

    __hash__ = None

    def __repr__(self):
        return f"JointMeasure(n={self.n_vertices}, q={self._q}, positive={self._positive})"

    def with_tree(self, tree: RootedTree) -> "JointMeasure":
        """The same table viewed on a re-rooted copy of the tree."""
        if not tree.same_shape(self._tree):
            raise SpecError("vertex set or edges do not match")
        m = JointMeasure.__new__(JointMeasure)
        m._tree, m._q, m._w, m._den = tree, self._q, self._w, self._den
        m._positive, m._marginals = self._positive, self._marginals
        return m

    # -- marginals and probabilities -----------------------------------------

    def marginal_weights(self, support: Iterable[int]) -> np.ndarray:
        """Integer weights of the marginal on ``support``, broadcastable shape.

        Axes outside ``support`` are kept with length 1.
        """
        key = tuple(sorted(set(support)))
        cached = self._marginals.get(key)
        if cached is None:
            others = tuple(v for v in range(self.n_vertices) if v not in key)
            cached = self._w.sum(axis=others, keepdims=True) if others else self._w
            if not isinstance(cached, np.ndarray):
                cached = np.array(cached, dtype=object).reshape((1,) * self.n_vertices)
            self._marginals[key] = cached
        return cached

    def _validate(self, cfg: Configuration) -> None:
        for v, s in cfg.items():
            if not isinstance(v, (int, np.integer)) or not 0 <= v < self.n_vertices:
                raise ConfigurationError(f"vertex {v!r} not in tree")
            if not isinstance(s, (int, np.integer)) or not 0 <= s < self._q:
                raise ConfigurationError(f"symbol {s!r} at vertex {v} out of alphabet")

    def _weight(self, cfg: Configuration) -> int:
        self._validate(cfg)
        w = self.marginal_weights(cfg.keys())
        return w[tuple(int(cfg.get(v, 0)) for v in range(self.n_vertices))]

    def cylinder_probability(self, cfg: Configuration) -> Fraction:
        """Probability that the configuration matches ``cfg`` on its support."""
        return Fraction(self._weight(cfg), self._den)

    def conditional_probability(self, target: Configuration, given: Configuration) -> Fraction:
        if set(target) & set(given):
            raise ConfigurationError("supports must be disjoint")
        self._validate(target)
        den = self._weight(given)
        if den == 0:
            raise NullEventError("conditioning on null event")
        return Fraction(self._weight({**given, **target}), den)

    def marginalize(self, keep: Iterable[int]) -> "JointMeasure":
        """Restriction to the vertices in ``keep``, re-indexed in ascending order.

        The returned tree is the induced subtree when ``keep`` is connected;
        otherwise it is a path over the kept vertices, which only serves as a
        vertex container.
        """
        keep = tuple(sorted(set(keep)))
        if not keep:
            raise ConfigurationError("keep must be nonempty")
        for v in keep:
            if not 0 <= v < self.n_vertices:
                raise ConfigurationError(f"vertex {v!r} not in tree")
        w = self.marginal_weights(keep).reshape((self._q,) * len(keep))
        return JointMeasure(induced_tree(self._tree, keep), self._q, _as_int_array(w), self._den)


def induced_tree(tree: RootedTree, keep: tuple[int, ...]) -> RootedTree:
    pos = {v: i for i, v in enumerate(keep)}
    labels = [tree.labels[v] for v in keep]
    edges = [(pos[a], pos[b]) for a, b in tree.edges if a in pos and b in pos]
    if tree.is_connected(keep):
        root = min(keep, key=lambda v: (tree.depth(v), v))
        return RootedTree(len(keep), edges, pos[root], labels)
    return RootedTree(len(keep), [(i, i + 1) for i in range(len(keep) - 1)], 0, labels)


# -- conditional comparisons --------------------------------------------------

def _point(arr: np.ndarray, idx: tuple[int, ...]):
    return arr[tuple(i if n > 1 else 0 for i, n in zip(idx, arr.shape))]


def compare_conditionals(m: JointMeasure, target: Iterable[int], given: Iterable[int],
                         reduced: Iterable[int], check: str = "conditional", **context) -> Verdict:
    """Test ``mu[xi on target | xi on given] == mu[xi on target | xi on reduced]``.

    ``reduced`` must be a subset of ``given`` and ``target`` disjoint from
    ``given``. Every configuration with positive mass on ``given`` is
    checked; null ones are skipped and counted. The witness is the first
    failing configuration in mixed-radix order (vertex 0 most significant).
    """
    T, G, R = set(target), set(given), set(reduced)
    if T & G:
        raise ConfigurationError("supports must be disjoint")
    if not R <= G:
        raise ValueError("reduced conditioning set must be contained in the given set")
    w_tg = m.marginal_weights(T | G)
    w_g = m.marginal_weights(G)
    w_tr = m.marginal_weights(T | R)
    w_r = m.marginal_weights(R)
    skipped = int(np.count_nonzero(w_g == 0))
    if not T:
        return Verdict(True, None, skipped)
    bad = (w_tg * w_r != w_tr * w_g) & (w_g > 0)
    if not bad.any():
        return Verdict(True, None, skipped)
    idx = tuple(int(i) for i in np.argwhere(bad)[0])
    witness = Witness(
        check=check,
        target={v: idx[v] for v in sorted(T)},
        given={v: idx[v] for v in sorted(G)},
        lhs=Fraction(_point(w_tg, idx), _point(w_g, idx)),
        rhs=Fraction(_point(w_tr, idx), _point(w_r, idx)),
        reduced=tuple(sorted(R)),
        **context,
    )
    return Verdict(False, witness, skipped)


def conditional_independence(m: JointMeasure, A: Iterable[int], B: Iterable[int],
                             C: Iterable[int]) -> Verdict:
    """Whether ``mu[a | b, c] == mu[a | c]`` for all configurations with ``mu[b, c] > 0``."""
    A, B, C = set(A), set(B), set(C)
    if A & B or A & C or B & C:
        raise ConfigurationError("supports must be disjoint")
    return compare_conditionals(m, A, B | C, C, check="conditional_independence")


def chain_rule_check(m: JointMeasure, a: Configuration, b: Configuration,
                     c: Configuration) -> bool:
    """``P(a, b | c) == P(a | b, c) * P(b | c)``, evaluated exactly."""
    if set(a) & set(b) or set(a) & set(c) or set(b) & set(c):
        raise ConfigurationError("supports must be disjoint")
    lhs = m.conditional_probability({**a, **b}, c)
    rhs = m.conditional_probability(a, {**b, **c}) * m.conditional_probability(b, c)
    return lhs == rhs
