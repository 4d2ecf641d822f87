"""Exact deciders for block Markov chains, tree Markov chains and Markov random fields.

Every checker sweeps its quantifiers in a fixed order (vertices ascending,
subtrees by size then lexicographically, configurations in mixed-radix order)
and reports the first failure it meets. Conditioning events of probability
zero are skipped and counted, never treated as failures.
"""

from __future__ import annotations

import json
import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .errors import InclusionViolation, MarkovPropertyError, SpecError
from .measure import JointMeasure, _point, compare_conditionals
from .tree import RootedTree
from .verdict import Verdict, Witness

MAX_MC_VERTICES = 12
EXHAUSTIVE_WINDOW_VERTICES = 10
WINDOW_SAMPLES_PER_VERTEX = 256


def _tree_of(m: JointMeasure, t: RootedTree | None) -> RootedTree:
    if t is None:
        return m.tree
    if not t.same_shape(m.tree):
        raise SpecError("measure and tree have different vertex sets or edges")
    return t


# -- block Markov property ----------------------------------------------------

def check_obmc(m: JointMeasure, t: RootedTree | None = None) -> Verdict:
    """Block Markov property at every non-leaf vertex for the root of ``t``.

    The children block of ``x`` must be independent of everything outside the
    strict future of ``x`` once the symbol at ``x`` is known.
    """
    t = _tree_of(m, t)
    n = t.n_vertices
    parts = []
    for x in t.vertices:
        block = t.children(x)
        if not block:
            continue
        future = set(t.strict_future(x))
        outside = [v for v in range(n) if v not in future]
        parts.append(compare_conditionals(m, block, outside, [x], check="obmc",
                                          vertex=x, root=t.root))
    return Verdict.merge(parts)


def check_future_independence(m: JointMeasure, t: RootedTree | None = None) -> Verdict:
    """Global form: every window inside the strict future of ``x`` depends on the outside only via ``x``."""
    t = _tree_of(m, t)
    parts = []
    for x in t.vertices:
        future = t.strict_future(x)
        if not future:
            continue
        outside = [v for v in t.vertices if v not in set(future)]
        for window in t.all_subsets(future):
            if window:
                parts.append(compare_conditionals(m, window, outside, [x], check="future_window",
                                                  vertex=x, root=t.root))
    return Verdict.merge(parts)


def check_parent_window(m: JointMeasure, t: RootedTree | None = None, seed: int | None = None,
                        require_obmc: bool = True) -> Verdict:
    """For ``x`` other than the root and any window containing its parent, only the
    parent and the part of the window below ``x`` matter.

    Windows are enumerated exhaustively up to ``EXHAUSTIVE_WINDOW_VERTICES``
    vertices; above that, ``WINDOW_SAMPLES_PER_VERTEX`` random windows per
    vertex are drawn from ``random.Random(seed)`` (``BMC_SEED`` or 0).

    Block chains whose kernels correlate siblings can fail this: a window
    holding a sibling of ``x`` carries information the parent alone does not.
    """
    t = _tree_of(m, t)
    if require_obmc and not check_obmc(m, t):
        raise MarkovPropertyError(f"measure is not an o-BMC for root {t.label(t.root)!r}")
    n = t.n_vertices
    notes: tuple[str, ...] = ()
    rng = None
    if n > EXHAUSTIVE_WINDOW_VERTICES:
        if seed is None:
            seed = int(os.environ.get("BMC_SEED", "0"))
        rng = random.Random(seed)
        notes = (f"windows sampled: {WINDOW_SAMPLES_PER_VERTEX} per vertex, seed {seed}",)
    parts = []
    for x in t.vertices:
        if x == t.root:
            continue
        px = t.parent(x)
        future = set(t.strict_future(x))
        others = [v for v in t.vertices if v not in (x, px)]
        if rng is None:
            extras = t.all_subsets(others)
        else:
            extras = sorted({tuple(v for v in others if rng.random() < 0.5)
                             for _ in range(WINDOW_SAMPLES_PER_VERTEX)}, key=lambda s: (len(s), s))
        for extra in extras:
            window = set(extra) | {px}
            reduced = {px} | (future & window)
            parts.append(compare_conditionals(m, [x], window, reduced, check="parent_window",
                                              vertex=x, root=t.root))
    v = Verdict.merge(parts)
    return Verdict(v.holds, v.witness, v.skipped_null_branches, v.notes + notes)


# -- Markov chain / random field ----------------------------------------------

def _mc_on_subtrees(m: JointMeasure, t: RootedTree, subtrees: Sequence[tuple[int, ...]]) -> Verdict:
    parts = []
    for sub in subtrees:
        members = set(sub)
        for x in sub:
            given = members - {x}
            reduced = set(t.neighbors(x)) & members
            if given == reduced:
                continue
            parts.append(compare_conditionals(m, [x], given, reduced, check="mc",
                                              vertex=x, subtree=tuple(sub)))
    return Verdict.merge(parts)


def check_mc(m: JointMeasure, t: RootedTree | None = None, max_subtree_size: int | None = None,
             workers: int = 1) -> Verdict:
    """Every subtree marginal is a Markov random field (positivity not required).

    For each connected vertex set ``V'`` and each ``x`` in it, the law of ``x``
    given the rest of ``V'`` only depends on its neighbours inside ``V'``.
    """
    t = _tree_of(m, t)
    if t.n_vertices > MAX_MC_VERTICES:
        raise SpecError(f"the subtree sweep is capped at {MAX_MC_VERTICES} vertices")
    size = t.n_vertices if max_subtree_size is None else max_subtree_size
    subtrees = t.connected_subsets(size)
    chunks = _chunks(subtrees, workers)
    return Verdict.merge(_run(_mc_on_subtrees, [(m, t, c) for c in chunks], workers))


def check_mrf(m: JointMeasure, t: RootedTree | None = None) -> Verdict:
    """Strict positivity plus the single-site Markov property on the whole tree."""
    t = _tree_of(m, t)
    if not m.positive:
        idx = tuple(int(i) for i in np.argwhere(m.weights == 0)[0])
        witness = Witness(check="mrf_positivity", target=dict(enumerate(idx)), given={},
                          lhs=Fraction(0), rhs=Fraction(0),
                          note="null cylinder: a full configuration has probability zero")
        return Verdict(False, witness)
    parts = []
    everything = set(t.vertices)
    for u in t.vertices:
        parts.append(compare_conditionals(m, [u], everything - {u}, t.neighbors(u),
                                          check="mrf", vertex=u))
    return Verdict.merge(parts)


# -- product forms ------------------------------------------------------------

def _product_scan(m: JointMeasure, t: RootedTree, x: int, given: Sequence[int],
                  check: str) -> Verdict:
    """``mu[S(x) | given] == prod_y mu[y | x]`` for ``x`` in ``given``."""
    block = t.children(x)
    k = len(block)
    w_gs = m.marginal_weights(set(given) | set(block))
    w_g = m.marginal_weights(given)
    w_x = m.marginal_weights([x])
    prod = np.ones((1,) * t.n_vertices, dtype=object)
    for y in block:
        prod = prod * m.marginal_weights([x, y])
    # mu[S|G] = w_gs / w_g and prod_y mu[y|x] = prod / w_x**k
    bad = (w_gs * w_x ** k != prod * w_g) & (w_g > 0)
    skipped = int(np.count_nonzero(w_g == 0))
    if not bad.any():
        return Verdict(True, None, skipped)
    idx = tuple(int(i) for i in np.argwhere(bad)[0])
    witness = Witness(
        check=check,
        target={v: idx[v] for v in block},
        given={v: idx[v] for v in sorted(given)},
        lhs=Fraction(_point(w_gs, idx), _point(w_g, idx)),
        rhs=Fraction(_point(prod, idx), _point(w_x, idx) ** k),
        vertex=x, root=t.root, reduced=(x,),
        note="rhs is the product of single-child conditionals given x",
    )
    return Verdict(False, witness, skipped)


def check_children_cond_indep(m: JointMeasure, t: RootedTree | None = None) -> Verdict:
    """Siblings are conditionally independent given their parent."""
    t = _tree_of(m, t)
    return Verdict.merge(_product_scan(m, t, x, [x], "cond_indep")
                         for x in t.vertices if len(t.children(x)) >= 2)


def check_product_form(m: JointMeasure, t: RootedTree | None = None) -> Verdict:
    """Block given everything outside the strict future equals the product of
    single-child conditionals given ``x`` (the form every tree Markov chain has)."""
    t = _tree_of(m, t)
    parts = []
    for x in t.vertices:
        if not t.children(x):
            continue
        future = set(t.strict_future(x))
        parts.append(_product_scan(m, t, x, [v for v in t.vertices if v not in future],
                                   "product_form"))
    return Verdict.merge(parts)


# -- full report --------------------------------------------------------------

@dataclass(frozen=True)
class ClassReport:
    tree: RootedTree
    per_root_bmc: dict
    is_mc: Verdict
    is_mrf: Verdict
    cond_indep: Verdict
    positivity: bool
    inclusion_chain_ok: bool
    mc_complete: bool = True

    @property
    def is_bmc_all_roots(self) -> bool:
        return all(v.holds for v in self.per_root_bmc.values())

    @property
    def all_hold(self) -> bool:
        return (self.is_bmc_all_roots and self.is_mc.holds and self.is_mrf.holds
                and self.cond_indep.holds)

    @property
    def skipped_null_branches(self) -> int:
        return (sum(v.skipped_null_branches for v in self.per_root_bmc.values())
                + self.is_mc.skipped_null_branches + self.is_mrf.skipped_null_branches
                + self.cond_indep.skipped_null_branches)

    def to_dict(self) -> dict:
        labels = self.tree.labels
        return {
            "roots": {labels[o]: v.to_dict(labels) for o, v in sorted(self.per_root_bmc.items())},
            "bmc_all_roots": self.is_bmc_all_roots,
            "mc": self.is_mc.to_dict(labels),
            "mrf": self.is_mrf.to_dict(labels),
            "cond_indep": self.cond_indep.to_dict(labels),
            "positive": self.positivity,
            "inclusion_chain_ok": self.inclusion_chain_ok,
            "skipped_null_branches": self.skipped_null_branches,
        }


def inclusion_problems(report: ClassReport) -> list[str]:
    """Proven inclusions that the verdicts in ``report`` contradict."""
    problems = []
    if report.is_bmc_all_roots and not report.is_mc.holds:
        problems.append("block Markov for every root but not a tree Markov chain")
    if report.mc_complete and report.is_mc.holds and report.positivity and not report.is_mrf.holds:
        problems.append("positive tree Markov chain that is not a Markov random field")
    if (report.mc_complete and report.positivity and report.is_mc.holds
            and report.cond_indep.holds and not report.is_bmc_all_roots):
        problems.append("tree Markov chain with independent siblings that is not "
                        "block Markov for every root")
    return problems


def _obmc_task(m, t, root):
    return check_obmc(m, t.rerooted(root))


def classify_all(m: JointMeasure, t: RootedTree | None = None, max_subtree_size: int | None = None,
                 workers: int = 1, strict: bool = True) -> ClassReport:
    """Run every checker and cross-check the class inclusions.

    A contradicted inclusion raises :class:`InclusionViolation` carrying the
    full JSON report (or, with ``strict=False``, is flagged in the report).
    """
    t = _tree_of(m, t)
    roots = list(t.vertices)
    size = t.n_vertices if max_subtree_size is None else max_subtree_size
    if t.n_vertices > MAX_MC_VERTICES:
        raise SpecError(f"the subtree sweep is capped at {MAX_MC_VERTICES} vertices")
    subtrees = t.connected_subsets(size)
    mc_chunks = _chunks(subtrees, workers)

    tasks = [(_obmc_task, (m, t, o)) for o in roots]
    tasks += [(_mc_on_subtrees, (m, t, c)) for c in mc_chunks]
    tasks += [(check_mrf, (m, t)), (check_children_cond_indep, (m, t))]
    results = _run(_call, tasks, workers)

    per_root = dict(zip(roots, results[:len(roots)]))
    mc = Verdict.merge(results[len(roots):len(roots) + len(mc_chunks)])
    mrf, ci = results[-2], results[-1]
    report = ClassReport(t, per_root, mc, mrf, ci, m.positive, True,
                         mc_complete=size >= t.n_vertices)
    problems = inclusion_problems(report)
    if problems:
        report = ClassReport(t, per_root, mc, mrf, ci, m.positive, False, report.mc_complete)
        if strict:
            dump = json.dumps(report.to_dict(), indent=2)
            raise InclusionViolation("; ".join(problems) + "\n" + dump)
    return report


# -- worker plumbing ----------------------------------------------------------

def _call(fn, args):
    return fn(*args)


def _chunks(items: list, workers: int) -> list[list]:
    if workers <= 1 or len(items) <= 1:
        return [items]
    k = min(workers, len(items))
    size = -(-len(items) // k)
    return [items[i:i + size] for i in range(0, len(items), size)]


def _run(fn: Callable, arg_list: list[tuple], workers: int) -> list:
    """Apply ``fn`` to each argument tuple; results keep submission order."""
    if workers <= 1 or len(arg_list) <= 1:
        return [fn(*a) for a in arg_list]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(fn, *a) for a in arg_list]
        return [f.result() for f in futures]
