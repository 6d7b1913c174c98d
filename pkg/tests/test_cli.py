import json
import subprocess
import sys

from conicrat.cli import run
from conicrat.report import Report


def out(capsys, argv):
    rc = run(argv)
    return rc, capsys.readouterr()


def test_analyze_json(capsys):
    rc, cap = out(capsys, ["analyze", "--field", "Q", "--p", "x^2-3", "--q", "x-1", "--json"])
    assert rc == 0
    d = json.loads(cap.out)
    assert d["verdict"]["tag"] == "Rational" and d["s"]["total"] == 3
    assert Report.from_dict(d).to_dict() == d


def test_chatelet_text(capsys):
    rc, cap = out(capsys, ["chatelet", "--field", "Q", "--a", "4", "--p", "x^5+x+1"])
    assert rc == 0 and "Rational (a is a square)" in cap.out


def test_lattice(capsys):
    rc, cap = out(capsys, ["lattice", "--r", "0", "--s", "0", "--ops", "blowup"])
    assert rc == 0 and "Ω·Ω = 7" in cap.out
    rc, cap = out(capsys, ["lattice", "--r", "0", "--s", "0", "--ops", "blowup; blowdown 1,0,-1", "--json"])
    assert json.loads(cap.out)[-1]["omega_squared"] == 8


def test_input_errors(capsys):
    assert run(["analyze", "--field", "Q", "--p", "x^2-", "--q", "x"]) == 1
    assert run(["analyze", "--field", "GF(4)", "--p", "x", "--q", "x+1"]) == 1
    assert run(["analyze", "--field", "Q", "--p", "x^2", "--q", "x+1"]) == 1
    assert run(["lattice", "--r", "0", "--s", "0", "--ops", "blowdown F"]) == 1
    assert run(["nonsense"]) == 1
    assert "error" in capsys.readouterr().err


def test_sinv_bruteforce(capsys):
    rc, cap = out(capsys, ["sinv", "--field", "GF(5)", "--p", "x^3+x+1", "--q", "x^2+2", "--bruteforce", "3"])
    assert rc == 0 and "s = 5" in cap.out


def test_cohomology(capsys, tmp_path):
    rc, cap = out(capsys, ["cohomology", "--blocks", "2,2", "--json"])
    d = json.loads(cap.out)
    assert d["h1"] == d["h_minus1"] == d["closed_form"] == [2]
    from conicrat.piclattice import build_action, chatelet_diagonal
    f = tmp_path / "act.json"
    f.write_text(build_action(chatelet_diagonal((1, 1, 2))).to_json())
    rc, cap = out(capsys, ["cohomology", "--action", str(f)])
    assert rc == 0 and "H^1  = Z/2" in cap.out


def test_param_verify(capsys):
    rc, cap = out(capsys, ["param-verify", "--field", "GF(7)", "--p", "x", "--q", "1-x",
                           "--a", "1", "--b", "1", "--c", "1"])
    assert rc == 0 and "holds" in cap.out
    rc, cap = out(capsys, ["param-verify", "--field", "GF(7)", "--p", "x", "--q", "1-x",
                           "--a", "1", "--b", "1", "--c", "x"])
    assert rc == 1 and "fails" in cap.out


def test_consistency_exit_code(capsys, monkeypatch):
    from conicrat import cli
    from conicrat.errors import ConsistencyError

    def boom(*a, **k):
        raise ConsistencyError("forced")
    monkeypatch.setattr(cli, "analyze", boom)
    assert run(["analyze", "--field", "Q", "--p", "x", "--q", "x+1"]) == 2


def test_sweep_resumable(tmp_path, capsys):
    cache = tmp_path / "sweep.jsonl"
    argv = ["sweep", "--field", "GF(3)", "--max-deg", "1", "--out", str(cache), "--witness-deg-bound", "0"]
    assert run(argv) == 0
    first = cache.read_bytes()
    lines = first.decode().splitlines()
    assert lines and all("key" in json.loads(l) for l in lines)
    assert run(argv) == 0
    assert cache.read_bytes() == first
    assert "0 computed" in capsys.readouterr().out


def test_sweep_parallel_matches_serial(tmp_path):
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    base = ["sweep", "--field", "GF(3)", "--max-deg", "2", "--limit", "60", "--witness-deg-bound", "0"]
    assert run(base + ["--out", str(a)]) == 0
    assert run(base + ["--out", str(b), "--jobs", "2"]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_console_entry():
    r = subprocess.run([sys.executable, "-m", "conicrat", "chatelet", "--field", "Q", "--a", "4", "--p", "x"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and "Rational" in r.stdout
