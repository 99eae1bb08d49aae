from __future__ import annotations

import io

import pytest

from mcproof.main import execute

from .conftest import TOTAL_EDGE, WORKED


@pytest.fixture
def files(tmp_path):
    true_path = tmp_path / "true.fo"
    true_path.write_text(WORKED)
    false_path = tmp_path / "false.fo"
    false_path.write_text(TOTAL_EDGE)
    return true_path, false_path


def run(*argv: str) -> tuple[int, str]:
    out = io.StringIO()
    code = execute([str(a) for a in argv], out=out)
    return code, out.getvalue()


def test_check(files):
    true_path, false_path = files
    assert run("check", true_path) == (0, "true\n")
    assert run("check", false_path) == (0, "false\n")


def test_inspect(files):
    code, out = run("inspect", files[0])
    assert code == 0
    assert out.splitlines() == [
        "k 2",
        "size 3",
        "structure-size 7",
        "q 5",
        "rounds 5",
        "schedule E1 R1 A2 R1 R2",
        "p0 1,0,0,0",
    ]


def test_run_exit_codes(files, tmp_path):
    true_path, false_path = files
    code, out = run("run", true_path, "--seed", "7")
    assert code == 0
    assert "verdict accept" in out
    code, out = run("run", false_path, "--prover", "honest", "--seed", "7")
    assert code == 1
    assert "verdict reject fail-round 1" in out
    target = tmp_path / "t.txt"
    code, out = run("run", true_path, "--out", target)
    assert code == 0 and out == ""
    assert target.read_text().startswith("version 1\n")


def test_run_output_is_reproducible(files):
    first = run("run", files[1], "--prover", "round-fixing", "--seed", "12")
    assert run("run", files[1], "--prover", "round-fixing", "--seed", "12") == first


def test_verify(files, tmp_path):
    true_path, false_path = files
    transcript = tmp_path / "t.txt"
    run("run", false_path, "--prover", "random-consistent", "--seed", "3", "--out", transcript)
    code, out = run("verify", false_path, transcript)
    assert code == 0
    assert out.startswith("verdict ")

    lines = transcript.read_text().splitlines()
    lines[3] = "seed 4"
    transcript.write_text("\n".join(lines) + "\n")
    assert run("verify", false_path, transcript)[0] == 1

    assert run("verify", true_path, transcript)[0] == 2
    transcript.write_text("garbage\n")
    assert run("verify", false_path, transcript)[0] == 2


def test_experiment(files, tmp_path):
    true_path, false_path = files
    code, out = run("experiment", false_path, "--prover", "honest", "--trials", "4", "--seed", "1")
    assert code == 0
    assert out.splitlines() == [
        "trials 4",
        "accepts 0",
        "rate 0.000000",
        "bound 0.200000",
        "margin 0.600000",
        "result PASS",
    ]
    assert run("experiment", true_path, "--trials", "2")[0] == 2


def test_experiment_records_to_db(files, tmp_path):
    url = f"sqlite+aiosqlite:///{tmp_path / 'runs.db'}"
    code, _ = run("experiment", files[1], "--prover", "round-fixing", "--trials", "3", "--db", url)
    assert code in (0, 1)
    assert (tmp_path / "runs.db").exists()


@pytest.mark.parametrize(
    "argv",
    [
        (),
        ("bogus",),
        ("run",),
        ("run", "x.fo", "--prover", "sneaky"),
        ("run", "x.fo", "--seed", "-1"),
        ("experiment", "x.fo", "--trials", "0"),
        ("check", "/nonexistent/file.fo"),
    ],
)
def test_usage_errors(argv):
    assert run(*argv)[0] == 2


def test_parse_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.fo"
    bad.write_text("vocab E/2\nuniverse 2\nformula: EX x . E(x,z)\n")
    assert run("check", bad)[0] == 2
    assert "line 3, column" in capsys.readouterr().err
