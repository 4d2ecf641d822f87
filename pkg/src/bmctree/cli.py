"""Command-line front end.

Exit codes: 0 when the run succeeds and every checked property holds, 1 when a
checked property fails, 2 on input errors.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from . import bmc, chains, classify, schema
from .errors import BmcTreeError, SchemaError
from .tree import RootedTree
from .verdict import fraction_str

FIXTURES = ("counterexample", "path3", "binary2")

CHECKS = {
    "obmc": classify.check_obmc,
    "mc": classify.check_mc,
    "mrf": classify.check_mrf,
    "cond-indep": classify.check_children_cond_indep,
    "parent-window": classify.check_parent_window,
    "future": classify.check_future_independence,
    "product-form": classify.check_product_form,
}


def fixture(name: str):
    """Built-in measures addressed by name; returns ``(tree, measure)``."""
    if name == "counterexample":
        t, m, _ = chains.counterexample_fixture()
        return t, m
    if name == "path3":
        t = RootedTree.path(3)
        return t, chains.embed_chain(chains.COUNTEREXAMPLE_CHAIN, t, {v: v for v in t.vertices})
    if name == "binary2":
        t = RootedTree.complete_binary(2)
        P = chains.COUNTEREXAMPLE_CHAIN.transition
        spec = chains.product_mc_spec(
            t, 2, chains.COUNTEREXAMPLE_CHAIN.initial,
            {(x, y): P for x in t.vertices for y in t.children(x)})
        return t, bmc.realize(spec)
    raise SchemaError(f"unknown fixture {name!r}; choose from {', '.join(FIXTURES)}", "--fixture")


def _load_measure(args):
    sources = [s for s in ("measure", "bmc", "fixture") if getattr(args, s, None)]
    if len(sources) != 1:
        raise SchemaError("give exactly one of --measure, --bmc, --fixture", "argv")
    if args.fixture:
        return fixture(args.fixture)
    if args.bmc:
        spec = schema.bmc_from_json(schema.load_json(args.bmc))
        return spec.tree, bmc.realize(spec)
    try:
        m = schema.measure_from_json(schema.load_json(args.measure))
    except SchemaError as e:
        raise SchemaError(str(e), source=args.measure) from None
    return m.tree, m


def _with_root(t: RootedTree, label):
    if label is None:
        return t
    try:
        return t.rerooted(t.id(label))
    except BmcTreeError:
        raise SchemaError(f"root {label!r} not in tree", "--root") from None


def _emit(obj, out):
    text = schema.dump_json(obj, out)
    if out is None:
        sys.stdout.write(text)


def cmd_realize(args) -> int:
    spec = schema.bmc_from_json(schema.load_json(args.bmc))
    _emit(schema.measure_to_json(bmc.realize(spec)), args.out)
    return 0


def cmd_check(args) -> int:
    t, m = _load_measure(args)
    t = _with_root(t, args.root)
    fn = CHECKS[args.property]
    if args.property == "mc":
        verdict = fn(m, t, max_subtree_size=args.max_subtree_size, workers=args.workers)
    else:
        verdict = fn(m, t)
    out = {"property": args.property, "root": t.label(t.root)}
    out.update(verdict.to_dict(t.labels))
    _emit(out, args.out)
    return 0 if verdict.holds else 1


def cmd_classify(args) -> int:
    t, m = _load_measure(args)
    report = classify.classify_all(m, t, max_subtree_size=args.max_subtree_size,
                                   workers=args.workers)
    _emit(report.to_dict(), args.out)
    return 0 if report.all_hold else 1


def counterexample_report(workers: int = 1) -> dict:
    t, m, expected = chains.counterexample_fixture()
    values = chains.counterexample_values(t, m)
    report = classify.classify_all(m, t, workers=workers)
    return {
        "values": {k: fraction_str(v) for k, v in values.items()},
        "expected": {k: fraction_str(v) for k, v in expected.items()},
        "reproduced": values == expected,
        "report": report.to_dict(),
    }


def cmd_counterexample(args) -> int:
    out = counterexample_report(args.workers)
    _emit(out, args.out)
    return 0 if out["reproduced"] else 1


def cmd_chain_embed(args) -> int:
    chain_obj = schema.load_json(args.chain)
    spec = schema.chain_from_json(chain_obj)
    t = schema.tree_from_json(schema.load_json(args.tree))
    if args.time_map:
        times = schema.time_map_from_json(schema.load_json(args.time_map), t)
    else:
        if "time_map" not in chain_obj:
            raise SchemaError("give --time-map or a time_map key in the chain file", args.chain)
        times = schema.time_map_from_json(chain_obj, t)
    _emit(schema.measure_to_json(chains.embed_chain(spec, t, times)), args.out)
    return 0


def self_test() -> list[tuple[str, bool]]:
    """Named checks on the built-in fixtures."""
    t, m, expected = chains.counterexample_fixture()
    values = chains.counterexample_values(t, m)
    results = [(f"counterexample {k} = {fraction_str(v)}", values[k] == v)
               for k, v in expected.items()]
    o, o2 = t.id("(0,-1)"), t.id("(0,1)")
    results.append(("counterexample is block Markov at (0,-1)",
                    classify.check_obmc(m, t.rerooted(o)).holds))
    v = classify.check_obmc(m, t.rerooted(o2))
    results.append(("counterexample fails at (0,1) with 1/6 vs 1/4",
                    not v.holds and (v.witness.lhs, v.witness.rhs) == (Fraction(1, 6), Fraction(1, 4))))
    v = classify.check_mc(m, t)
    results.append(("counterexample is not a tree Markov chain (1/2 vs 3/4)",
                    not v.holds and (v.witness.lhs, v.witness.rhs) == (Fraction(1, 2), Fraction(3, 4))))
    for name in ("path3", "binary2"):
        ft, fm = fixture(name)
        report = classify.classify_all(fm, ft)
        results.append((f"{name} is block Markov for every root and a tree Markov chain",
                        report.is_bmc_all_roots and report.is_mc.holds))
    return results


def cmd_self_test(args) -> int:
    results = self_test()
    for name, ok in results:
        print(f"{'PASS' if ok else 'FAIL'}  {name}")
    return 0 if all(ok for _, ok in results) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bmctree", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="verb", required=True)

    def common(p, sources=True):
        if sources:
            p.add_argument("--measure", help="measure file")
            p.add_argument("--bmc", help="block kernel spec file (realized first)")
            p.add_argument("--fixture", choices=FIXTURES, help="built-in measure")
        p.add_argument("--out", help="output path (default: stdout)")
        p.add_argument("--workers", type=int, default=1, help="parallel worker processes")

    p = sub.add_parser("realize", help="realize a block kernel spec as a joint measure")
    p.add_argument("--bmc", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_realize)

    p = sub.add_parser("check", help="check one property")
    common(p)
    p.add_argument("--property", choices=sorted(CHECKS), default="obmc")
    p.add_argument("--root", help="root label (default: the file's root)")
    p.add_argument("--max-subtree-size", type=int)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("classify", help="run every checker, all roots")
    common(p)
    p.add_argument("--max-subtree-size", type=int)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("counterexample", help="reproduce the counter-example")
    common(p, sources=False)
    p.set_defaults(func=cmd_counterexample)

    p = sub.add_parser("chain-embed", help="embed a chain on a tree through a time map")
    p.add_argument("--chain", required=True)
    p.add_argument("--tree", required=True)
    p.add_argument("--time-map")
    p.add_argument("--out")
    p.set_defaults(func=cmd_chain_embed)

    p = sub.add_parser("self-test", help="check the built-in fixtures")
    p.set_defaults(func=cmd_self_test)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code else 0
    if getattr(args, "workers", 1) < 1:
        print("bmctree: error: --workers must be at least 1", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except BmcTreeError as e:
        print(f"bmctree: error: {e}", file=sys.stderr)
        return 2


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
