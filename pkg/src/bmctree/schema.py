"""JSON file formats for trees, measures, block kernel sets and chains.

Probabilities are written as ``"num/den"`` strings; integers and decimal
strings are accepted on input, JSON floats are not.
"""

from __future__ import annotations

import json
from fractions import Fraction
from itertools import product
from pathlib import Path

import numpy as np

from .bmc import BlockKernel, BmcSpec
from .chains import ChainSpec
from .errors import BmcTreeError, SchemaError
from .measure import JointMeasure
from .tree import RootedTree
from .verdict import fraction_str


def load_json(path) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as e:
        raise SchemaError(f"invalid JSON ({e.msg} at line {e.lineno})", source=str(path)) from None
    except OSError as e:
        raise SchemaError(f"cannot read file ({e.strerror})", source=str(path)) from None


def dump_json(obj, path=None) -> str:
    text = json.dumps(obj, indent=2) + "\n"
    if path is not None:
        Path(path).write_text(text)
    return text


def parse_rational(value, path="$") -> Fraction:
    if isinstance(value, bool) or isinstance(value, float):
        raise SchemaError(f"probability must be an exact rational literal, got {value!r}", path)
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError):
            pass
    raise SchemaError(f"not a rational probability literal: {value!r}", path)


def _require(obj, key, path, kind=None):
    if not isinstance(obj, dict):
        raise SchemaError("expected an object", path)
    if key not in obj:
        raise SchemaError(f"missing key {key!r}", path)
    value = obj[key]
    if kind is not None and not isinstance(value, kind) or isinstance(value, bool) and kind is int:
        raise SchemaError(f"{key!r} has the wrong type", f"{path}.{key}")
    return value


def _symbol(value, q, path) -> int:
    if isinstance(value, str) and value.strip().isdigit():
        value = int(value)
    if isinstance(value, bool) or not isinstance(value, int) or not 0 <= value < q:
        raise SchemaError(f"symbol {value!r} is not in 0..{q - 1}", path)
    return value


def _alphabet(obj, path) -> int:
    q = _require(obj, "alphabet", path, int)
    if q < 1:
        raise SchemaError("alphabet size must be positive", f"{path}.alphabet")
    return q


# -- trees --------------------------------------------------------------------

def tree_from_json(obj, path="$") -> RootedTree:
    vertices = _require(obj, "vertices", path, list)
    edges = _require(obj, "edges", path, list)
    root = _require(obj, "root", path)
    for i, e in enumerate(edges):
        if not (isinstance(e, list) and len(e) == 2):
            raise SchemaError("an edge is a pair of labels", f"{path}.edges[{i}]")
    try:
        return RootedTree.from_labels(vertices, [tuple(e) for e in edges], root)
    except BmcTreeError as e:
        raise SchemaError(str(e), path) from None


def tree_to_json(t: RootedTree) -> dict:
    return t.to_dict()


def _vertex(t: RootedTree, label, path) -> int:
    try:
        return t.id(label)
    except BmcTreeError:
        raise SchemaError(f"vertex label {label!r} not in tree", path) from None


def _config(t: RootedTree, q: int, obj, path) -> dict[int, int]:
    if not isinstance(obj, dict):
        raise SchemaError("configuration must be an object {label: symbol}", path)
    return {_vertex(t, k, path): _symbol(v, q, f"{path}.{k}") for k, v in obj.items()}


# -- measures -----------------------------------------------------------------

def measure_from_json(obj, path="$") -> JointMeasure:
    q = _alphabet(obj, path)
    t = tree_from_json(_require(obj, "tree", path), f"{path}.tree")
    rows = _require(obj, "table", path, list)
    n = t.n_vertices
    table = np.full((q,) * n, None, dtype=object)
    for i, entry in enumerate(rows):
        p_path = f"{path}.table[{i}]"
        cfg = _config(t, q, _require(entry, "config", p_path), f"{p_path}.config")
        if len(cfg) != n:
            raise SchemaError("configuration must assign every vertex", f"{p_path}.config")
        idx = tuple(cfg[v] for v in range(n))
        if table[idx] is not None:
            raise SchemaError("duplicate configuration", f"{p_path}.config")
        p = parse_rational(_require(entry, "p", p_path), f"{p_path}.p")
        if p < 0:
            raise SchemaError("probability must be nonnegative", f"{p_path}.p")
        table[idx] = p
    missing = int(np.count_nonzero(table == None))  # noqa: E711
    if missing:
        raise SchemaError(f"table must cover all {q ** n} configurations, {missing} missing",
                          f"{path}.table")
    try:
        return JointMeasure.from_table(t, q, table)
    except BmcTreeError as e:
        raise SchemaError(str(e), f"{path}.table") from None


def measure_to_json(m: JointMeasure) -> dict:
    t = m.tree
    return {
        "alphabet": m.q,
        "tree": tree_to_json(t),
        "table": [
            {"config": {t.labels[v]: s for v, s in enumerate(cfg)}, "p": fraction_str(p)}
            for cfg, p in m.entries()
        ],
    }


# -- block kernel sets --------------------------------------------------------

def _distribution(obj, q, path) -> tuple[Fraction, ...]:
    if not isinstance(obj, dict):
        raise SchemaError("distribution must be an object {symbol: probability}", path)
    probs = [Fraction(0)] * q
    for k, v in obj.items():
        probs[_symbol(k, q, f"{path}.{k}")] = parse_rational(v, f"{path}.{k}")
    return tuple(probs)


def bmc_from_json(obj, path="$") -> BmcSpec:
    q = _alphabet(obj, path)
    t = tree_from_json(_require(obj, "tree", path), f"{path}.tree")
    initial = _distribution(_require(obj, "initial", path), q, f"{path}.initial")
    kernels = {}
    for i, kobj in enumerate(_require(obj, "kernels", path, list)):
        k_path = f"{path}.kernels[{i}]"
        x = _vertex(t, _require(kobj, "vertex", k_path), f"{k_path}.vertex")
        if x in kernels:
            raise SchemaError("duplicate kernel for vertex", k_path)
        block = t.children(x)
        rows_obj = _require(kobj, "rows", k_path, dict)
        rows = []
        for s in range(q):
            arr = np.full((q,) * len(block), Fraction(0), dtype=object)
            entries = rows_obj.get(str(s), rows_obj.get(s, []))
            r_path = f"{k_path}.rows.{s}"
            if not isinstance(entries, list):
                raise SchemaError("a kernel row is a list of entries", r_path)
            seen = set()
            for j, entry in enumerate(entries):
                e_path = f"{r_path}[{j}]"
                cfg = _config(t, q, _require(entry, "config", e_path), f"{e_path}.config")
                if set(cfg) != set(block):
                    raise SchemaError(
                        f"row configuration must assign exactly the children "
                        f"{[t.labels[v] for v in block]}", f"{e_path}.config")
                idx = tuple(cfg[v] for v in block)
                if idx in seen:
                    raise SchemaError("duplicate configuration", f"{e_path}.config")
                seen.add(idx)
                arr[idx] = parse_rational(_require(entry, "p", e_path), f"{e_path}.p")
            rows.append(arr)
        kernels[x] = BlockKernel(x, block, tuple(rows))
    try:
        return BmcSpec(t, q, initial, kernels)
    except BmcTreeError as e:
        raise SchemaError(str(e), path) from None


def bmc_to_json(spec: BmcSpec) -> dict:
    t, q = spec.tree, spec.q
    kernels = []
    for x in sorted(spec.kernels):
        k = spec.kernels[x]
        rows = {}
        for s in range(q):
            rows[str(s)] = [
                {"config": {t.labels[y]: c for y, c in zip(k.block, cfg)},
                 "p": fraction_str(k.rows[s][cfg])}
                for cfg in product(range(q), repeat=len(k.block))
            ]
        kernels.append({"vertex": t.labels[x], "rows": rows})
    return {
        "alphabet": q,
        "tree": tree_to_json(t),
        "initial": {str(s): fraction_str(p) for s, p in enumerate(spec.initial)},
        "kernels": kernels,
    }


# -- chains -------------------------------------------------------------------

def chain_from_json(obj, path="$") -> ChainSpec:
    q = _alphabet(obj, path)
    initial = _distribution(_require(obj, "initial", path), q, f"{path}.initial")
    P = _require(obj, "P", path, list)
    if len(P) != q or any(not isinstance(r, list) or len(r) != q for r in P):
        raise SchemaError(f"P must be a {q}x{q} matrix", f"{path}.P")
    rows = [[parse_rational(v, f"{path}.P[{i}][{j}]") for j, v in enumerate(r)]
            for i, r in enumerate(P)]
    try:
        return ChainSpec(initial, rows)
    except BmcTreeError as e:
        raise SchemaError(str(e), path) from None


def chain_to_json(spec: ChainSpec) -> dict:
    return {
        "alphabet": spec.q,
        "initial": {str(s): fraction_str(p) for s, p in enumerate(spec.initial)},
        "P": [[fraction_str(p) for p in row] for row in spec.transition],
    }


def time_map_from_json(obj, t: RootedTree, path="$") -> dict[int, int]:
    if isinstance(obj, dict) and "time_map" in obj:
        obj, path = obj["time_map"], f"{path}.time_map"
    if not isinstance(obj, dict):
        raise SchemaError("time map must be an object {label: time}", path)
    out = {}
    for k, v in obj.items():
        if isinstance(v, bool) or not isinstance(v, int) or v < 0:
            raise SchemaError(f"time {v!r} is not a nonnegative integer", f"{path}.{k}")
        out[_vertex(t, k, f"{path}.{k}")] = v
    if len(out) != t.n_vertices:
        raise SchemaError("time map must assign every vertex", path)
    return out
