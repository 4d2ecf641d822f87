import json
import random
import subprocess
import sys
from fractions import Fraction

import pytest

from bmctree import SchemaError, realize
from bmctree.chains import COUNTEREXAMPLE_CHAIN
from bmctree.cli import fixture, run, self_test
from bmctree.generators import random_bmc_spec, random_measure, random_tree
from bmctree.schema import (
    bmc_from_json,
    bmc_to_json,
    chain_from_json,
    chain_to_json,
    measure_from_json,
    measure_to_json,
    parse_rational,
    time_map_from_json,
    tree_from_json,
    tree_to_json,
)

F = Fraction

PATH_TREE = {"vertices": ["a", "b", "c"], "edges": [["a", "b"], ["b", "c"]], "root": "a"}


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(obj if isinstance(obj, str) else json.dumps(obj))
    return str(p)


# -- round trips --------------------------------------------------------------

def test_round_trips():
    rng = random.Random(1)
    for _ in range(10):
        t = random_tree(rng.randint(1, 5), rng)
        assert tree_from_json(tree_to_json(t)) == t
        m = random_measure(t, 2, rng, positive=False)
        assert measure_from_json(measure_to_json(m)) == m
        spec = random_bmc_spec(t, 2, rng)
        back = bmc_from_json(bmc_to_json(spec))
        assert realize(back) == realize(spec)
    c = chain_from_json(chain_to_json(COUNTEREXAMPLE_CHAIN))
    assert c.initial == COUNTEREXAMPLE_CHAIN.initial
    assert c.transition.tolist() == COUNTEREXAMPLE_CHAIN.transition.tolist()


def test_parse_rational():
    assert parse_rational("3/4") == F(3, 4)
    assert parse_rational(1) == 1
    assert parse_rational("0.25") == F(1, 4)
    for bad in (0.25, True, "x", "1/0", None):
        with pytest.raises(SchemaError):
            parse_rational(bad)


def test_kernel_rows_default_to_zero():
    obj = {"alphabet": 2, "tree": PATH_TREE, "initial": {"0": "1"},
           "kernels": [{"vertex": "a", "rows": {"0": [{"config": {"b": 1}, "p": "1"}],
                                                "1": [{"config": {"b": 0}, "p": "1"}]}},
                       {"vertex": "b", "rows": {"0": [{"config": {"c": 0}, "p": "1"}],
                                                "1": [{"config": {"c": 1}, "p": "1"}]}}]}
    m = realize(bmc_from_json(obj))
    assert m[(0, 1, 1)] == 1


@pytest.mark.parametrize("obj, where", [
    ({"alphabet": 2, "tree": PATH_TREE, "initial": {"0": 0.5, "1": "1/2"}, "kernels": []},
     "$.initial.0"),
    ({"alphabet": 2, "tree": PATH_TREE, "initial": {"2": "1"}, "kernels": []}, "$.initial.2"),
    ({"alphabet": 2, "tree": PATH_TREE, "initial": {"0": "1"}, "kernels": []}, "$"),
    ({"alphabet": 2, "tree": PATH_TREE, "initial": {"0": "1"},
      "kernels": [{"vertex": "z", "rows": {}}]}, "$.kernels[0].vertex"),
    ({"alphabet": 2, "tree": PATH_TREE, "initial": {"0": "1"},
      "kernels": [{"vertex": "a", "rows": {"0": [{"config": {"c": 0}, "p": "1"}]}}]},
     "$.kernels[0].rows.0[0].config"),
    ({"tree": PATH_TREE}, "$"),
])
def test_bmc_schema_errors(obj, where):
    with pytest.raises(SchemaError) as info:
        bmc_from_json(obj)
    assert info.value.path == where


def test_measure_schema_errors():
    t = {"vertices": ["a"], "edges": [], "root": "a"}
    with pytest.raises(SchemaError, match="1 missing"):
        measure_from_json({"alphabet": 2, "tree": t, "table": [{"config": {"a": 0}, "p": "1"}]})
    with pytest.raises(SchemaError, match="duplicate"):
        measure_from_json({"alphabet": 2, "tree": t, "table": [
            {"config": {"a": 0}, "p": "1"}, {"config": {"a": 0}, "p": "0"}]})
    with pytest.raises(SchemaError, match="sum"):
        measure_from_json({"alphabet": 2, "tree": t, "table": [
            {"config": {"a": 0}, "p": "1"}, {"config": {"a": 1}, "p": "1"}]})
    with pytest.raises(SchemaError, match="duplicate edge"):
        tree_from_json({"vertices": ["a", "b", "c"], "edges": [["a", "b"], ["b", "a"]], "root": "a"})
    with pytest.raises(SchemaError, match="vertex not in tree"):
        tree_from_json({"vertices": ["a", "b"], "edges": [["a", "q"]], "root": "a"})


def test_time_map_forms():
    t = tree_from_json(PATH_TREE)
    assert time_map_from_json({"a": 0, "b": 1, "c": 2}, t) == {0: 0, 1: 1, 2: 2}
    assert time_map_from_json({"time_map": {"a": 0, "b": 1, "c": 3}}, t)[2] == 3
    with pytest.raises(SchemaError, match="every vertex"):
        time_map_from_json({"a": 0}, t)
    with pytest.raises(SchemaError, match="nonnegative"):
        time_map_from_json({"a": -1, "b": 0, "c": 1}, t)


# -- command line -------------------------------------------------------------

def test_fixtures_load():
    for name in ("counterexample", "path3", "binary2"):
        t, m = fixture(name)
        assert m.tree.same_shape(t)
    with pytest.raises(SchemaError):
        fixture("nope")


def test_self_test_passes():
    assert all(ok for _, ok in self_test())


def test_check_exit_codes(ex_measure, tmp_path, capsys):
    path = write(tmp_path, "m.json", measure_to_json(ex_measure))
    assert run(["check", "--measure", path, "--root", "(0,-1)"]) == 0
    capsys.readouterr()
    assert run(["check", "--measure", path, "--root", "(0,1)"]) == 1
    out = json.loads(capsys.readouterr().out)
    assert out["holds"] is False
    assert (out["witness"]["lhs"], out["witness"]["rhs"]) == ("1/6", "1/4")
    assert run(["check", "--measure", path, "--root", "nowhere"]) == 2


def test_check_bmc_file(tmp_path, capsys):
    rng = random.Random(2)
    spec = random_bmc_spec(random_tree(4, rng), 2, rng)
    path = write(tmp_path, "b.json", bmc_to_json(spec))
    root = spec.tree.label(spec.tree.root)
    assert run(["check", "--bmc", path, "--root", root]) == 0
    assert json.loads(capsys.readouterr().out)["holds"] is True


def test_classify_exit_codes(tmp_path):
    out = tmp_path / "r.json"
    assert run(["classify", "--fixture", "counterexample", "--out", str(out)]) == 1
    report = json.loads(out.read_text())
    assert report["inclusion_chain_ok"] is True
    assert report["roots"]["(0,1)"]["witness"]["lhs"] == "1/6"
    assert run(["classify", "--fixture", "binary2", "--out", str(out)]) == 1  # not positive
    assert json.loads(out.read_text())["bmc_all_roots"] is True


def test_counterexample_verb(capsys):
    assert run(["counterexample"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["reproduced"] is True
    assert out["values"] == {"bmc_lhs": "1/6", "bmc_rhs": "1/4", "mc_lhs": "1/2", "mc_rhs": "3/4"}


def test_realize_and_chain_embed(tmp_path, capsys):
    chain = write(tmp_path, "c.json", {**chain_to_json(COUNTEREXAMPLE_CHAIN),
                                       "time_map": {"a": 0, "b": 1, "c": 2}})
    tree = write(tmp_path, "t.json", PATH_TREE)
    assert run(["chain-embed", "--chain", chain, "--tree", tree]) == 0
    m = measure_from_json(json.loads(capsys.readouterr().out))
    assert m[(0, 0, 0)] == F(1, 8)
    rng = random.Random(3)
    spec = random_bmc_spec(random_tree(3, rng), 2, rng)
    bpath = write(tmp_path, "b.json", bmc_to_json(spec))
    assert run(["realize", "--bmc", bpath]) == 0
    assert measure_from_json(json.loads(capsys.readouterr().out)) == realize(spec)


def test_input_errors_exit_2(tmp_path, capsys):
    bad = write(tmp_path, "bad.json", "{not json")
    assert run(["classify", "--measure", bad]) == 2
    assert "invalid JSON" in capsys.readouterr().err
    assert run(["classify", "--measure", str(tmp_path / "missing.json")]) == 2
    floats = write(tmp_path, "f.json", {"alphabet": 2, "tree": PATH_TREE,
                                        "initial": {"0": 0.5, "1": 0.5}, "kernels": []})
    assert run(["realize", "--bmc", floats]) == 2
    assert "$.initial.0" in capsys.readouterr().err
    assert run(["classify"]) == 2
    assert run(["classify", "--fixture", "path3", "--workers", "0"]) == 2
    assert run(["frobnicate"]) == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "bmctree", "self-test"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0, proc.stderr
    assert "FAIL" not in proc.stdout
