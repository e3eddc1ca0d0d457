import json
import subprocess
import sys

import pytest

from expander_extract.cli import run
from expander_extract.multigraph import format_edge_list
from expander_extract.pipeline import TopoMinorWitness

from .graphs import complete


@pytest.fixture
def files(tmp_path):
    k4 = complete(4)
    paths = {
        "k4": tmp_path / "k4.txt",
        "k4e": tmp_path / "k4e.txt",
        "witness": tmp_path / "w.json",
    }
    paths["k4"].write_text(format_edge_list(k4))
    paths["k4e"].write_text(format_edge_list(k4.remove_edges([(0, 1)])))
    paths["witness"].write_text(json.dumps(TopoMinorWitness.identity(k4).to_dict()))
    paths["out"] = tmp_path / "report.json"
    return paths


def call(argv, out):
    code = run(argv + ["--out", str(out)])
    text = out.read_text() if out.exists() else None
    return code, text


def no_floats(text):
    json.loads(text, parse_float=lambda s: pytest.fail(f"float {s} in report"))


def test_cheeger(files):
    code, text = call(["cheeger", "--graph", str(files["k4"]), "--verify"], files["out"])
    report = json.loads(text)
    assert code == 0
    assert report["cheeger"] == "2/3"
    assert report["certificate"]["witness_set"] == [0, 1]
    no_floats(text)


def test_pipeline_trivial_witness(files):
    argv = ["pipeline", "--graph", str(files["k4"]), "--subgraph", str(files["k4"]), "--witness", str(files["witness"]),
            "--kappa", "2/3", "--alpha", "1/2", "--alpha-prime", "1/4", "--verify"]
    code, text = call(argv, files["out"])
    assert code == 0
    report = json.loads(text)
    assert report["report"]["output"]["vertices"] == [0, 1, 2, 3]
    assert len(report["report"]["output"]["edges"]) == 6
    no_floats(text)
    # byte-stable across runs
    _, again = call(argv, files["out"])
    assert again == text


def test_pipeline_alpha_prime_not_below_alpha(files):
    argv = ["pipeline", "--graph", str(files["k4"]), "--subgraph", str(files["k4"]),
            "--kappa", "2/3", "--alpha", "1/2", "--alpha-prime", "1/2"]
    code, text = call(argv, files["out"])
    assert code == 2
    assert json.loads(text)["status"] == "precondition-failed"


def test_pipeline_dry_run(files):
    argv = ["pipeline", "--graph", str(files["k4"]), "--subgraph", str(files["k4e"]),
            "--kappa", "3/5", "--alpha", "5/6", "--alpha-prime", "1/2", "--dry-run"]
    code, text = call(argv, files["out"])
    assert code == 0
    plan = json.loads(text)["plan"]
    assert plan["kappa_prime"] == "1/" + str(15 * plan["M"])
    no_floats(text)


def test_verify_roundtrip_and_failure(files, tmp_path):
    argv = ["pipeline", "--graph", str(files["k4"]), "--subgraph", str(files["k4e"]),
            "--kappa", "3/5", "--alpha", "5/6", "--alpha-prime", "1/2"]
    assert call(argv, files["out"])[0] == 0
    check = tmp_path / "check.json"
    code, text = call(["verify", "--graph", str(files["k4"]), "--subgraph", str(files["k4e"]),
                       "--report", str(files["out"])], check)
    assert code == 0 and json.loads(text)["status"] == "ok"

    data = json.loads(files["out"].read_text())
    data["report"]["derived"]["kappa_prime"] = "1/1"
    files["out"].write_text(json.dumps(data))
    code, text = call(["verify", "--graph", str(files["k4"]), "--subgraph", str(files["k4e"]),
                       "--report", str(files["out"])], check)
    assert code == 3
    assert json.loads(text)["verification"][0]["clause"].startswith("expansion")


def test_trim_and_induce(files, tmp_path):
    code, text = call(["trim", "--graph", str(files["k4"]), "--subgraph", str(files["k4e"]), "--kappa", "2/3", "--verify"],
                      files["out"])
    assert code == 0
    assert json.loads(text)["trace"]["steps"] == []
    colored = tmp_path / "c.txt"
    colored.write_text("0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n4 0\n!blue-edge 0 4 1\n")
    code, text = call(["induce", "--graph", str(colored), "--kappa", "2/3", "--epsilon", "1/2", "--alpha", "6/7"],
                      files["out"])
    assert code == 0
    report = json.loads(text)
    assert report["kept"] == [0, 1, 2, 3]
    assert report["trace_lines"][0] == "step 0 case 0 X={4} down=0 up=0 diff=- out=-"


def test_prune(tmp_path, files):
    colored = tmp_path / "p.txt"
    colored.write_text("0 1\n1 2\n2 0\n0 3\n3 4\n4 1\n!blue-vertex 3\n!blue-vertex 4\n")
    code, text = call(["prune", "--graph", str(colored), "--kappa", "2/3", "--epsilon", "1", "--alpha", "1/2",
                       "--big-m", "2", "--verify"], files["out"])
    report = json.loads(text)
    assert code == 0
    assert report["long_paths"] == 1 and report["kept"] == [0, 1, 2]


def test_generate_is_deterministic(tmp_path, files):
    edges = tmp_path / "gen.txt"
    argv = ["generate", "--kind", "random-regular", "--size", "8", "--degree", "3", "--seed", "5",
            "--edge-list-out", str(edges)]
    code, first = call(argv, files["out"])
    assert code == 0
    _, second = call(argv, files["out"])
    assert first == second
    assert json.loads(first)["cheeger"].count("/") == 1
    assert edges.read_text()


def test_parse_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("0 1\n0 1 2 3\n")
    out = tmp_path / "r.json"
    assert run(["cheeger", "--graph", str(bad), "--out", str(out)]) == 1
    assert "bad.txt:2" in capsys.readouterr().err
    assert not out.exists()
    assert run(["cheeger", "--graph", str(tmp_path / "missing.txt")]) == 1


def test_missing_flag_is_precondition(files):
    code, text = call(["trim", "--graph", str(files["k4"])], files["out"])
    assert code == 2
    assert "--subgraph" in json.loads(text)["error"]


def test_float_parameter_rejected(files):
    with pytest.raises(SystemExit):
        run(["trim", "--graph", str(files["k4"]), "--subgraph", str(files["k4"]), "--kappa", "0.5"])


def test_module_entry_point(files):
    proc = subprocess.run([sys.executable, "-m", "expander_extract", "cheeger", "--graph", str(files["k4"])],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["cheeger"] == "2/3"


def test_report_stable_across_hash_seeds(tmp_path):
    g = tmp_path / "g.txt"
    h = tmp_path / "h.txt"
    g.write_text("a b\nb c\nc d\nd a\na c\nb d\nd e\ne a\n")
    h.write_text("a b\nb c\nc d\nd a\na c\nb d\n")
    outputs = []
    for hash_seed in ("1", "4242"):
        proc = subprocess.run(
            [sys.executable, "-m", "expander_extract", "pipeline", "--graph", str(g), "--subgraph", str(h),
             "--kappa", "2/3", "--alpha", "3/4", "--alpha-prime", "1/2", "--verify"],
            capture_output=True, text=True, check=False, env={"PYTHONHASHSEED": hash_seed, "PATH": "/usr/bin:/bin"},
        )
        assert proc.returncode == 0, proc.stderr
        outputs.append(proc.stdout)
    assert outputs[0] == outputs[1]
