import csv
import subprocess
import sys

import pytest

from topocnot import cli, pipeline
from topocnot.gf2 import BitMatrix
from topocnot.router import parse_circuit

from conftest import T_GRAPH_TEXT


@pytest.fixture
def files(tmp_path, fixture_matrix):
    matrix = tmp_path / "a.matrix"
    matrix.write_text(fixture_matrix.to_text())
    arch = tmp_path / "tee.arch"
    arch.write_text(T_GRAPH_TEXT)
    return tmp_path, matrix, arch


def test_compile_fixture(files, capsys):
    tmp, matrix, arch = files
    out = tmp / "a.circuit"
    milp = tmp / "a.lp"
    code = cli.main(
        ["compile", "--arch-file", str(arch), "--input", str(matrix), "--place", "exhaustive",
         "--export-milp", str(milp), "-o", str(out)]
    )  # fmt: skip
    assert code == 0
    n, gates, place, relabel = parse_circuit(out.read_text())
    assert n == 5 and len(gates) == 16 and place and relabel
    stats = dict(line.split(" ", 1) for line in capsys.readouterr().out.splitlines())
    assert stats["gates"] == "16" and stats["objective"] == "16"
    assert milp.read_text().startswith("\\")


def test_compile_import_and_warm_start(files):
    tmp, matrix, arch = files
    sol = tmp / "sol.txt"
    sol.write_text("assign 1 2\nassign 2 3\nassign 3 5\nassign 4 4\nassign 5 1\n")
    out = tmp / "b.circuit"
    args = ["compile", "--arch-file", str(arch), "--input", str(matrix), "-o", str(out)]
    assert cli.main(args + ["--place", "import", "--solution", str(sol)]) == 0
    assert parse_circuit(out.read_text())[2] == [2, 3, 5, 4, 1]
    assert cli.main(args + ["--warm-start", str(sol), "--k", "3", "--seed", "4", "--restarts", "2"]) == 0


def test_compile_circuit_input_builtin(tmp_path, capsys):
    circ = tmp_path / "r.circuit"
    assert cli.main(["random", "--qubits", "9", "--gates", "12", "--seed", "3", "-o", str(circ)]) == 0
    out = tmp_path / "out.circuit"
    assert cli.main(["compile", "--arch", "9q-square", "--input", str(circ), "--emit-swaps", "-o", str(out)]) == 0
    n, gates, place, relabel = parse_circuit(out.read_text())
    assert n == 9 and place == relabel


def test_random_prints_circuit(capsys):
    assert cli.main(["random", "--qubits", "5", "--gates", "3", "--seed", "1"]) == 0
    text = capsys.readouterr().out
    n, gates, _, _ = parse_circuit(text)
    assert n == 5 and len(gates) == 3
    assert cli.main(["random", "--qubits", "5", "--gates", "3", "--seed", "1"]) == 0
    assert capsys.readouterr().out == text


def test_bench_writes_report(tmp_path):
    ref = tmp_path / "ref.csv"
    ref.write_text(pipeline.bundled_text("reference_means.csv"))
    out = tmp_path / "report.csv"
    code = cli.main(
        ["bench", "--arch", "9q-square", "--counts", "3,5", "--per-count", "3", "--seed", "1",
         "--reference", str(ref), "-o", str(out)]
    )  # fmt: skip
    assert code == 0
    rows = list(csv.DictReader(out.open()))
    assert [r["gates"] for r in rows] == ["3", "5"]
    assert rows[0]["published"] == "2.95" and rows[0]["delta_vs_steiner_pct"]


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["frobnicate"],
        ["random", "--qubits", "5"],
        ["bench", "--arch", "9q-square", "--counts", "a,b", "-o", "x.csv"],
        ["bench", "--arch", "9q-square", "--counts", "3", "--per-count", "0", "-o", "x.csv"],
    ],
)
def test_usage_errors_exit_1(argv, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert cli.main(argv) == 1


def test_compile_usage_errors(files):
    tmp, matrix, arch = files
    base = ["compile", "--arch-file", str(arch), "--input", str(matrix), "-o", str(tmp / "x")]
    assert cli.main(base + ["--place", "import"]) == 1
    assert cli.main(base + ["--k", "1"]) == 1
    assert cli.main(base + ["--arch", "9q-square"]) == 1


def test_input_errors_exit_2(files):
    tmp, matrix, arch = files
    bad = tmp / "bad.matrix"
    bad.write_text("matrix 2\n1 1\n1 1\n")
    out = str(tmp / "x")
    assert cli.main(["compile", "--arch-file", str(arch), "--input", str(bad), "-o", out]) == 2
    assert cli.main(["compile", "--arch", "nowhere", "--input", str(matrix), "-o", out]) == 2
    assert cli.main(["compile", "--arch-file", str(arch), "--input", str(tmp / "missing"), "-o", out]) == 2
    big = tmp / "big.matrix"
    big.write_text(BitMatrix.identity(6).to_text())
    assert cli.main(["compile", "--arch-file", str(arch), "--input", str(big), "-o", out]) == 2
    assert cli.main(["random", "--qubits", "1", "--gates", "3"]) == 2


def test_verification_failure_exit_3(files, monkeypatch):
    tmp, matrix, arch = files
    monkeypatch.setattr(pipeline, "verify_routed", lambda *a, **k: False)
    assert cli.main(["compile", "--arch-file", str(arch), "--input", str(matrix), "-o", str(tmp / "x")]) == 3


def test_console_module_entry(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "topocnot.cli", "random", "--qubits", "3", "--gates", "2", "--seed", "0"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0 and proc.stdout.startswith("qubits 3")
