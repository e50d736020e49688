import json
import random
import subprocess
import sys

import pytest

from compunion.cli import main
from compunion.instance import from_graph, from_orders, load, loads
from compunion.poset import Graph, transitive_closure


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def grid_file(tmp_path, capsys):
    path = tmp_path / "grid.json"
    code, out, _ = run(capsys, "gen", "grid", "--a", 3, "--b", 2, "--seed", 7, "--out", path)
    assert code == 0
    assert json.loads(out)["n"] == 12
    return path


def test_gen_grid(grid_file):
    inst = load(grid_file)
    assert inst.kind == "grid" and inst.n == 12 and inst.r == 2
    assert inst.construction["seed"] == 7


def test_gen_ranked(tmp_path, capsys):
    path = tmp_path / "r.json"
    code, out, _ = run(capsys, "gen", "ranked", "--r", 2, "--b", 2, "--a", 4, "--seed", 1,
                       "--variant", "disjoint", "--out", path)
    assert code == 0
    summary = json.loads(out)
    assert summary["n"] == 16 and summary["max_degree"] <= 4 * 9
    assert load(path).n == 16


def test_gen_to_stdout_keeps_summary_off(capsys):
    code, out, err = run(capsys, "gen", "grid", "--a", 2, "--b", 2, "--seed", 1, "--deterministic")
    assert code == 0
    assert loads(out).n == 8
    assert json.loads(err)["n"] == 8


def test_gen_deterministic_bytes(tmp_path, capsys):
    for kind, extra in [("grid", ["--a", 4, "--b", 3]),
                        ("ranked", ["--r", 2, "--b", 3, "--a", 6])]:
        paths = [tmp_path / f"{kind}{i}.json" for i in range(2)]
        for p in paths:
            assert run(capsys, "gen", kind, *extra, "--seed", 5, "--deterministic", "--out", p)[0] == 0
        assert paths[0].read_bytes() == paths[1].read_bytes()
        assert b"created" not in paths[0].read_bytes()


def test_gen_by_n(capsys):
    code, out, _ = run(capsys, "gen", "ranked", "--n", 1000, "--epsilon", 0.5, "--r", 2,
                       "--seed", 0, "--deterministic")
    assert code == 0
    inst = loads(out)
    assert inst.construction["requested_n"] == 1000


@pytest.mark.parametrize("argv", [
    ["gen", "grid", "--a", 0, "--b", 2, "--seed", 1],
    ["gen", "grid", "--a", 3, "--seed", 1],
    ["gen", "ranked", "--r", 2, "--b", 2, "--a", 3, "--seed", 1],  # a*d odd
    ["gen", "grid", "--n", 50, "--seed", 1],
])
def test_gen_bad_params_exit_2(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_gen_requires_seed(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["gen", "grid", "--a", "2", "--b", "2"])
    assert exc.value.code == 2


def test_verify_valid(grid_file, capsys):
    code, out, _ = run(capsys, "verify", grid_file)
    assert code == 0
    assert "PASS edge_labels_match_construction" in out
    assert "PASS alpha_equals_a" in out
    assert "FAIL" not in out


def test_verify_ranked_valid(tmp_path, capsys):
    path = tmp_path / "r.json"
    run(capsys, "gen", "ranked", "--r", 2, "--b", 3, "--a", 4, "--seed", 2, "--out", path)
    code, out, _ = run(capsys, "verify", path)
    assert code == 0 and "PASS degree_lemma" in out


def test_verify_corrupted_label(grid_file, tmp_path, capsys):
    d = json.loads(grid_file.read_text())
    e = d["edges"][0]
    e[2] = [2] if e[2] == [1] else [1]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(d))
    code, out, _ = run(capsys, "verify", bad)
    assert code == 1
    assert "FAIL edge_labels_match_construction" in out


def test_verify_truncated(grid_file, tmp_path, capsys):
    text = grid_file.read_text()
    bad = tmp_path / "trunc.json"
    bad.write_text(text[: len(text) // 2])
    assert run(capsys, "verify", bad)[0] == 2
    assert run(capsys, "verify", tmp_path / "missing.json")[0] == 2


def test_verify_generic_orders(tmp_path, capsys):
    inst = from_orders([transitive_closure({(0, 1), (1, 2)}, 4), transitive_closure({(3, 0)}, 4)])
    path = tmp_path / "g.json"
    path.write_text(inst.dumps())
    code, out, _ = run(capsys, "verify", path)
    assert code == 0 and "PASS edge_labels_match_orders" in out


def test_analyze_alpha(grid_file, capsys):
    code, out, _ = run(capsys, "analyze", grid_file, "--alpha", "--omega")
    rep = json.loads(out)
    assert code == 0
    assert rep["alpha"]["value"] == 3 and rep["alpha"]["certified"] and rep["alpha"]["exact"]
    assert rep["omega"]["certified"]


def test_analyze_homogeneous(grid_file, capsys):
    code, out, _ = run(capsys, "analyze", grid_file, "--homogeneous")
    h = json.loads(out)["homogeneous"]
    assert code == 0 and h["verified"] and h["size"] >= 12 ** (1 / 3)


def test_analyze_generic_biclique(tmp_path, capsys):
    k33 = Graph.from_edges(6, [(u, v) for u in range(3) for v in range(3, 6)])
    path = tmp_path / "k33.json"
    path.write_text(from_graph(k33).dumps())
    code, out, _ = run(capsys, "analyze", path, "--biclique")
    b = json.loads(out)["biclique"]
    assert code == 0 and b["value"] == 3 and b["certified"]
    # no orders to work with
    assert run(capsys, "analyze", path, "--homogeneous")[0] == 2


def test_analyze_limit_needs_budget(tmp_path, capsys):
    path = tmp_path / "big.json"
    path.write_text(from_graph(Graph.empty(30)).dumps())
    assert run(capsys, "analyze", path, "--biclique")[0] == 2
    code, out, _ = run(capsys, "analyze", path, "--biclique", "--budget", 1000)
    assert code == 0 and json.loads(out)["biclique"]["value"] == 0


def test_experiment_balls(capsys):
    code, out, _ = run(capsys, "experiment", "balls", "--a", 2, "--b", 2, "--trials", 10000,
                       "--seed", 4)
    res = json.loads(out)
    assert code == 0
    assert abs(res["reports"][0]["aggregates"]["max_load"]["mean"] - 1.5) < 0.05


def test_experiment_grid_sweep(capsys):
    code, out, _ = run(capsys, "experiment", "grid", "--a", 2, 3, "--b", 2, 3, "--seeds", 5,
                       "--seed", 0)
    res = json.loads(out)
    assert code == 0 and res["passed"] and len(res["reports"]) == 4


def test_experiment_ranked_disjoint_from_spec(tmp_path, capsys):
    spec = tmp_path / "spec.json"
    spec.write_text(json.dumps({"kind": "ranked", "r": 2, "b": [2, 3], "a": 4,
                                "variant": "disjoint", "seeds": 2, "seed": 1}))
    code, out, _ = run(capsys, "experiment", "--spec", spec)
    res = json.loads(out)
    assert code == 0
    names = {a["name"]: a["passed"] for a in res["reports"][0]["assertions"]}
    assert names["edge_disjoint"] and names["rank_unique_comparability"]


def test_experiment_bad_spec(tmp_path, capsys):
    spec = tmp_path / "spec.json"
    spec.write_text("{not json")
    assert run(capsys, "experiment", "--spec", spec)[0] == 2
    spec.write_text(json.dumps({"kind": "grid", "seed": 0}))
    assert run(capsys, "experiment", "--spec", spec)[0] == 2
    assert run(capsys, "experiment", "grid", "--a", 2, "--b", 2)[0] == 2


def test_experiment_deterministic(capsys):
    argv = ["experiment", "ranked", "--r", 1, 2, "--b", 2, "--a", 4, "--seeds", 3, "--seed", 9]
    assert run(capsys, *argv)[1] == run(capsys, *argv)[1]


def test_export_matching(tmp_path, capsys):
    path = tmp_path / "m.json"
    path.write_text(from_graph(Graph.from_edges(4, [(2, 3), (0, 1)])).dumps())
    code, out, _ = run(capsys, "export", path)
    lines = [ln for ln in out.splitlines() if not ln.startswith("c")]
    assert code == 0 and lines == ["p edge 4 2", "e 1 2", "e 3 4"]


def test_export_complement_of_empty(tmp_path, capsys):
    path = tmp_path / "e.json"
    path.write_text(from_graph(Graph.empty(3)).dumps())
    _, out, _ = run(capsys, "export", path, "--complement")
    lines = [ln for ln in out.splitlines() if not ln.startswith("c")]
    assert lines == ["p edge 3 3", "e 1 2", "e 1 3", "e 2 3"]


def test_export_dot(grid_file, capsys):
    code, out, _ = run(capsys, "export", grid_file, "--format", "dot")
    assert code == 0
    body = out.strip().splitlines()
    assert body[0] == "graph G {" and body[-1] == "}"
    assert "->" not in out
    edges = [ln for ln in body if "--" in ln]
    assert len(edges) == len(load(grid_file).edges)
    assert all('label="' in ln for ln in edges)


def test_round_trip_and_canonical_order(grid_file):
    inst = load(grid_file)
    assert loads(inst.dumps()) == inst
    shuffled = list(inst.edges)
    random.Random(0).shuffle(shuffled)
    inst.edges = shuffled
    assert inst.canonical() == load(grid_file).canonical()


def test_module_entry_point(grid_file):
    proc = subprocess.run([sys.executable, "-m", "compunion", "verify", str(grid_file)],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "PASS" in proc.stdout


def test_verify_large_ranked_uses_structural_check(tmp_path, capsys):
    path = tmp_path / "big.json"
    assert run(capsys, "gen", "ranked", "--n", 5000, "--epsilon", 0.5, "--r", 2, "--seed", 3,
               "--out", path)[0] == 0
    code, out, _ = run(capsys, "verify", path)
    assert code == 0 and "FAIL" not in out and "PASS edge_count_formula" in out
    d = json.loads(path.read_text())
    d["edges"].pop()
    path.write_text(json.dumps(d))
    code, out, _ = run(capsys, "verify", path)
    assert code == 1 and "FAIL edge_labels_match_construction" in out
