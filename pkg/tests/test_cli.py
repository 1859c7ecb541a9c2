import json

import pytest

from hyperbound.cli import main


@pytest.fixture
def path_file(tmp_path):
    p = tmp_path / "p.tsv"
    p.write_text("1\t1,2\t\n2\t2,3\t\n3\t3,4\t\n")
    return p


def run_cli(*argv):
    return main([str(a) for a in argv])


def test_run_path(tmp_path, path_file):
    out, summ = tmp_path / "sel.txt", tmp_path / "sum.json"
    assert run_cli("run", "--edges", path_file, "--capacity", 1, "--seed", 42,
                   "--out", out, "--summary", summ) == 0
    assert out.read_text() == "1\n3\n"
    doc = json.loads(summ.read_text())
    assert doc["format"] == "hyperbound/1"
    assert doc["method"] == "distributed"
    assert doc["report"]["matched_count"] == 2
    assert doc["config"] == {"capacity": 1, "capacity_overrides": 0, "early_stop": True,
                             "max_rounds": None, "ordering": "hash", "seed": 42}


def test_run_to_stdout(capsys, path_file):
    assert run_cli("run", "--edges", path_file, "--seed", 42) == 0
    assert capsys.readouterr().out == "1\n3\n"


def test_missing_edges_is_usage_error(capsys):
    assert run_cli("run") == 1
    assert "usage error" in capsys.readouterr().err


@pytest.mark.parametrize("argv", [
    ["run", "--edges", "x", "--bogus"],
    ["run", "--edges", "x", "--workers", "0"],
    ["run", "--edges", "x", "--seed", "-1"],
    ["run", "--edges", "x", "--no-early-stop"],
    ["run", "--edges", "x", "--ordering", "random"],
    ["frobnicate"],
    [],
])
def test_usage_errors(argv, path_file):
    argv = [str(path_file) if a == "x" else a for a in argv]
    assert main(argv) == 1


def test_optimal_too_large(tmp_path, capsys):
    big = tmp_path / "big.tsv"
    big.write_text("".join(f"{i}\t{i}\t\n" for i in range(30)))
    assert run_cli("optimal", "--edges", big) == 2
    assert "TooLarge" in capsys.readouterr().err


def test_data_error_reports_line(tmp_path, capsys):
    bad = tmp_path / "bad.tsv"
    bad.write_text("1\t2\t\n2\t\t\n")
    assert run_cli("run", "--edges", bad) == 2
    assert "line 2" in capsys.readouterr().err


def test_missing_file_is_data_error(tmp_path):
    assert run_cli("run", "--edges", tmp_path / "nope.tsv") == 2


def test_greedy_and_optimal(tmp_path, path_file):
    out = tmp_path / "o.txt"
    summ = tmp_path / "s.json"
    assert run_cli("optimal", "--edges", path_file, "--out", out, "--summary", summ) == 0
    assert out.read_text() == "1\n3\n"
    assert json.loads(summ.read_text())["optimum"] == 2
    assert run_cli("greedy", "--edges", path_file, "--seed", 42, "--out", out) == 0
    assert out.read_text() == "1\n3\n"


def test_weight_ordering(tmp_path):
    f = tmp_path / "w.tsv"
    f.write_text("1\t1,2\t1\n2\t2,3\t5\n3\t3,4\t1\n")
    out = tmp_path / "o.txt"
    assert run_cli("run", "--edges", f, "--ordering", "weight", "--out", out) == 0
    assert out.read_text() == "2\n"
    f.write_text("1\t1,2\t1\n2\t2,3\t\n")
    assert run_cli("run", "--edges", f, "--ordering", "weight", "--out", out) == 2


def test_capacities_file(tmp_path, path_file):
    caps = tmp_path / "caps.tsv"
    caps.write_text("2\t2\n3\t2\n")
    out = tmp_path / "o.txt"
    assert run_cli("run", "--edges", path_file, "--capacities", caps, "--out", out) == 0
    assert out.read_text() == "1\n2\n3\n"


def test_max_rounds_flags(tmp_path, path_file):
    out = tmp_path / "o.txt"
    assert run_cli("run", "--edges", path_file, "--max-rounds", 1, "--no-early-stop",
                   "--out", out) == 0
    assert run_cli("run", "--edges", path_file, "--max-rounds", "unbounded", "--out", out) == 0


def test_repeat_byte_identical(tmp_path, path_file):
    outputs = []
    for i, w in enumerate([1, 1, 2, 4]):
        out, summ = tmp_path / f"o{i}", tmp_path / f"s{i}"
        assert run_cli("run", "--edges", path_file, "--workers", w, "--out", out,
                       "--summary", summ) == 0
        outputs.append((out.read_bytes(), summ.read_bytes()))
    assert len(set(outputs)) == 1


def test_compare(tmp_path, path_file):
    summ = tmp_path / "c.json"
    assert run_cli("compare", "--edges", path_file, "--seed", 42, "--summary", summ) == 0
    doc = json.loads(summ.read_text())
    assert doc["ratios"]["distributed/greedy"]["ratio"] == 1.0
    assert doc["ratios"]["distributed/exact"]["ratio"] == 1.0
    assert doc["exact"]["matched_count"] == 2


def test_compare_skips_exact_when_large(tmp_path, capsys):
    big = tmp_path / "big.tsv"
    big.write_text("".join(f"{i}\t{i}\t\n" for i in range(30)))
    assert run_cli("compare", "--edges", big) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["exact"] is None and "distributed/exact" not in doc["ratios"]


def test_validate_does_not_touch_files(tmp_path, capsys):
    f = tmp_path / "v.tsv"
    f.write_text("1\t1,2\t\n")
    caps = tmp_path / "c.tsv"
    caps.write_text("2\t0\n")
    before = (f.read_bytes(), f.stat().st_mtime_ns, caps.read_bytes())
    assert run_cli("validate", "--edges", f, "--capacities", caps) == 0
    assert "edge 1 unmatchable via 2" in capsys.readouterr().out
    assert before == (f.read_bytes(), f.stat().st_mtime_ns, caps.read_bytes())


def test_gen(tmp_path):
    a, b = tmp_path / "a.tsv", tmp_path / "b.tsv"
    argv = ["gen", "--users", 20, "--num-edges", 50, "--edge-size", "zipf:1.5:4",
            "--popularity", "zipf:1.0", "--seed", 3]
    assert run_cli(*argv, "--out", a) == 0
    assert run_cli(*argv, "--out", b) == 0
    assert a.read_bytes() == b.read_bytes()
    assert len(a.read_text().splitlines()) == 50
    assert run_cli("gen", "--users", 2, "--num-edges", 1, "--edge-size", 3) == 2
    assert run_cli("gen", "--users", 2, "--num-edges", 1, "--edge-size", "zipf:x") == 1
