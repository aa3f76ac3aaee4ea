from __future__ import annotations

import json

import pytest

from euler_fpt.cli import main
from euler_fpt.formats import load_graph, parse_provenance
from euler_fpt.models import RunResult, Verdict


def _write(tmp_path, name: str, text: str) -> str:
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return str(path)


def _cycle_file(tmp_path, n: int, directed: bool = False) -> str:
    kind, tag = ("directed", "a") if directed else ("undirected", "e")
    lines = [f"p euler {kind} {n} {n}"] + [f"{tag} {i} {i % n + 1}" for i in range(1, n + 1)]
    return _write(tmp_path, f"c{n}{kind[0]}.graph", "\n".join(lines) + "\n")


def _json(capsys) -> dict:
    return json.loads(capsys.readouterr().out)


# ---------------------------
# Circuit commands
# ---------------------------

def test_long_circuit_bowtie(instance_path, capsys):
    assert main(["long-circuit", instance_path("bowtie.graph"), "5", "--json"]) == 0
    out = _json(capsys)
    assert out["verdict"] == "yes"
    assert out["certificate"]["kind"] == "circuit"
    assert len(out["certificate"]["edges"]) == 6


def test_long_circuit_c5_is_no(instance_path, capsys):
    assert main(["long-circuit", instance_path("c5.graph"), "6"]) == 1
    assert capsys.readouterr().out.startswith("no")


def test_malformed_header_names_the_line(tmp_path, capsys):
    path = _write(tmp_path, "bad.graph", "p euler wobbly 3 1\ne 1 2\n")
    assert main(["long-circuit", path, "3"]) == 65
    err = capsys.readouterr().err
    assert err.startswith("ERROR: ")
    assert f"{path}:1:" in err


def test_missing_file(tmp_path, capsys):
    assert main(["long-circuit", str(tmp_path / "nope.graph"), "3"]) == 65
    assert "ERROR" in capsys.readouterr().err


def test_undecodable_input_is_a_data_error(tmp_path, capsys):
    path = tmp_path / "binary.graph"
    path.write_bytes(b"p euler undirected 3 2\n\xff\xfe 3 2\n")
    assert main(["long-circuit", str(path), "3"]) == 65
    assert f"{path}:2:" in capsys.readouterr().err
    cnf = tmp_path / "binary.cnf"
    cnf.write_bytes(b"\xff\xfe 3 2\n")
    assert main(["reduce", "3sat", str(cnf)]) == 65


def test_range_circuit_directed_c4(instance_path, capsys):
    assert main(["range-circuit", instance_path("dc4.graph"), "4", "4"]) == 0
    assert capsys.readouterr().out.startswith("yes (k=4)")


def test_k_circuit_bowtie(instance_path, capsys):
    assert main(["k-circuit", instance_path("bowtie.graph"), "6", "--json"]) == 0
    cert = _json(capsys)["certificate"]
    assert cert["vertices"][0] == cert["vertices"][-1]


def test_tree_has_no_circuit(tmp_path):
    path = _write(tmp_path, "tree.graph", "p euler undirected 4 3\ne 1 2\ne 2 3\ne 2 4\n")
    for k in ("1", "2", "3"):
        assert main(["k-circuit", path, k]) == 1


def test_randomized_no_is_reported_with_confidence(tmp_path, capsys):
    path = _write(tmp_path, "tree.graph", "p euler undirected 4 3\ne 1 2\ne 2 3\ne 2 4\n")
    assert main(["k-circuit", path, "3", "--mode", "randomized", "--max-trials", "3", "--json"]) == 1
    out = _json(capsys)
    assert out["verdict"] == "no-with-confidence"
    assert out["stats"]["trials_used"] == 3


def test_json_is_deterministic_and_round_trips(instance_path, capsys):
    argv = ["range-circuit", instance_path("bowtie.graph"), "4", "6", "--mode", "randomized", "--seed", "11", "--json"]
    main(argv)
    first = capsys.readouterr().out
    main(argv)
    second = capsys.readouterr().out
    assert first == second
    result = RunResult.model_validate_json(first)
    assert result.seed == 11
    assert RunResult.model_validate_json(result.model_dump_json()) == result


def test_timing_is_opt_in(instance_path, capsys):
    main(["k-circuit", instance_path("bowtie.graph"), "3", "--json"])
    assert _json(capsys)["stats"]["wall_time_ms"] is None
    main(["k-circuit", instance_path("bowtie.graph"), "3", "--json", "--timing"])
    assert _json(capsys)["stats"]["wall_time_ms"] >= 0


# ---------------------------
# Large Euler commands
# ---------------------------

def test_large_euler_c6(tmp_path, capsys):
    assert main(["large-euler", _cycle_file(tmp_path, 6), "6", "--json"]) == 0
    out = _json(capsys)
    assert out["certificate"] == {"kind": "vertex-set", "vertices": [1, 2, 3, 4, 5, 6], "edges": None}


def test_large_euler_directed_triangle(tmp_path):
    assert main(["large-euler", _cycle_file(tmp_path, 3, directed=True), "3"]) == 0


def test_large_euler_directed_over_budget(tmp_path, capsys):
    assert main(["large-euler", _cycle_file(tmp_path, 30, directed=True), "5", "--json"]) == 2
    out = _json(capsys)
    assert out["verdict"] == "inconclusive"
    assert "NP-complete" in out["note"]


def test_euler_k_exact(instance_path, capsys):
    assert main(["euler-k", instance_path("bowtie.graph"), "5"]) == 0
    assert main(["euler-k", instance_path("bowtie.graph"), "4"]) == 1


def test_euler_k_reports_subsets_tested(instance_path, capsys):
    assert main(["euler-k", instance_path("bowtie.graph"), "5", "--json"]) == 0
    assert _json(capsys)["stats"]["nodes_explored"] == 1
    # all five 4-subsets of the bowtie fail
    assert main(["euler-k", instance_path("bowtie.graph"), "4", "--json"]) == 1
    assert _json(capsys)["stats"]["nodes_explored"] == 5


def test_sparse_ids_are_reported_in_file_ids(tmp_path, capsys):
    path = _write(tmp_path, "sparse.graph", "p euler undirected 3 3\ne 10 20\ne 20 30\ne 10 30\n")
    assert main(["large-euler", path, "3", "--json"]) == 0
    assert _json(capsys)["certificate"]["vertices"] == [10, 20, 30]


# ---------------------------
# Configuration
# ---------------------------

def test_config_file_budget(tmp_path, capsys):
    (tmp_path / ".euler.yaml").write_text("budgets:\n  brute_vertices: 2\n", encoding="utf-8")
    assert main(["euler-k", _cycle_file(tmp_path, 6), "6", "--json"]) == 2
    assert _json(capsys)["verdict"] == Verdict.INCONCLUSIVE.value


def test_config_env_and_flag_precedence(tmp_path, monkeypatch, capsys, instance_path):
    cfg = _write(tmp_path, "alt.yaml", "solver:\n  seed: 42\n")
    monkeypatch.setenv("EULER_FPT_CONFIG", cfg)
    main(["k-circuit", instance_path("bowtie.graph"), "3", "--json"])
    assert _json(capsys)["seed"] == 42
    main(["k-circuit", instance_path("bowtie.graph"), "3", "--json", "--seed", "7"])
    assert _json(capsys)["seed"] == 7


def test_broken_config(tmp_path, capsys, instance_path):
    cfg = _write(tmp_path, "broken.yaml", "- just\n- a list\n")
    assert main(["k-circuit", instance_path("bowtie.graph"), "3", "--config", cfg]) == 65
    assert "ERROR" in capsys.readouterr().err


# ---------------------------
# Reductions and thresholds
# ---------------------------

def test_reduce_subdivision(instance_path, tmp_path, capsys):
    out_path = str(tmp_path / "k4s.graph")
    assert main(["reduce", "subdivision", instance_path("k4.graph"), "--out", out_path, "--check"]) == 0
    text = capsys.readouterr().out
    assert "parameter 8" in text and "agree" in text
    G = load_graph(out_path)
    assert (G.n, G.m) == (10, 12)
    with open(out_path + ".prov", encoding="utf-8") as f:
        assert len(parse_provenance(f.read())) == 10


def test_reduce_mcc(tmp_path, capsys):
    src = _write(tmp_path, "mcc.graph", "p euler undirected 2 1\ne 1 2\npart 1 1\npart 2 2\n")
    out_path = str(tmp_path / "mcc_out.graph")
    assert main(["reduce", "mcc", src, "--out", out_path, "--check"]) == 0
    G = load_graph(out_path)
    assert G.directed and G.n == 6
    assert "agree" in capsys.readouterr().out


def test_reduce_3sat(instance_path, tmp_path, capsys):
    out_path = str(tmp_path / "sat.graph")
    assert main(["reduce", "3sat", instance_path("sat_n3_m4.cnf"), "--out", out_path, "--check"]) == 0
    assert load_graph(out_path).n == 50
    assert "agree" in capsys.readouterr().out


def test_reduce_json_without_out(instance_path, capsys):
    assert main(["reduce", "subdivision", instance_path("k4.graph"), "--json"]) == 0
    out = _json(capsys)
    assert out["vertices"] == 10 and out["parameter"] == 8
    assert out["graph_text"].startswith("p euler undirected 10 12")


def test_reduce_rejects_non_cubic(instance_path, capsys):
    assert main(["reduce", "subdivision", instance_path("bowtie.graph")]) == 65
    assert "cubic" in capsys.readouterr().err


def test_thresholds(capsys):
    assert main(["thresholds", "4"]) == 0
    assert capsys.readouterr().out == "11\n124\n2218\n10891839442\n43567357766\n"


def test_thresholds_json(capsys):
    assert main(["thresholds", "4", "--json"]) == 0
    out = _json(capsys)
    assert out["f"]["4"] == "2218"
    assert out["delta_k"] == "10891839442"


def test_thresholds_reject_small_k(capsys):
    assert main(["thresholds", "3"]) == 64
    assert "k >= 4" in capsys.readouterr().err


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["long-circuit"],
        ["long-circuit", "x.graph", "many"],
        ["range-circuit", "x.graph", "1", "2", "--mode", "psychic"],
        ["reduce", "hamiltonian", "x"],
    ],
)
def test_usage_errors_exit_64(argv, capsys):
    assert main(argv) == 64
    assert "ERROR" in capsys.readouterr().err


def test_negative_k_is_a_usage_error(instance_path, capsys):
    assert main(["long-circuit", instance_path("bowtie.graph"), "-1"]) == 64
