import json

import pytest

from treereduce.cli import main
from treereduce.fixtures import prune_a, gfq, micro, notation
from treereduce.timbuk import parse_timbuk, serialize_timbuk


@pytest.fixture
def write(tmp_path):
    def _write(A, name="a.timbuk"):
        path = tmp_path / name
        path.write_text(serialize_timbuk(A))
        return str(path)
    return _write


def test_parse_and_stats(write, capsys):
    path = write(notation())
    assert main(["parse", path]) == 0
    assert "states 6" in capsys.readouterr().out
    assert main(["--json", "stats", path]) == 0
    assert json.loads(capsys.readouterr().out)["transitions"] == 6
    assert main(["validate", path, "--quiet"]) == 0
    assert capsys.readouterr().out == ""


def test_bad_input_exits_2(tmp_path, capsys):
    bad = tmp_path / "bad.timbuk"
    bad.write_text("Ops a:0\nAutomaton A\nStates q\nFinal States q\nTransitions\nb -> q\n")
    assert main(["parse", str(bad)]) == 2
    assert "line 6" in capsys.readouterr().err
    assert main(["parse", str(tmp_path / "missing")]) == 2
    with pytest.raises(SystemExit) as exc:
        main(["reduce"])
    assert exc.value.code == 2


def test_reduce_and_check(write, tmp_path, capsys):
    src = write(micro())
    out = tmp_path / "out.timbuk"
    rep = tmp_path / "rep.json"
    assert main(["reduce", src, "-o", str(out), "--report", str(rep)]) == 0
    B = parse_timbuk(out.read_text())
    assert B.num_states < micro().num_states
    report = json.loads(rep.read_text())
    assert report["iterations"] >= 1 and not report["unsound"]
    assert main(["check", "--equiv", src, str(out)]) == 0
    assert capsys.readouterr().out.strip() == "equal"


def test_force_prune_is_marked_unsound(write, tmp_path, capsys):
    src = write(prune_a())
    out = tmp_path / "out.timbuk"
    args = ["reduce", src, "--force-prune", "strict-up-sim(strict-dw-sim),id", "-o", str(out)]
    assert main(args) == 0
    assert "warning" in capsys.readouterr().err
    text = out.read_text()
    assert text.startswith("# UNSOUND")
    assert main(["--json", "check", "--equiv", src, str(out)]) == 1
    assert json.loads(capsys.readouterr().out) == {"equal": False, "witness": "a(c,d)"}


def test_relation_dump(write, capsys):
    path = write(gfq())
    assert main(["relation", path, "--kind", "dw-sim"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert "p <= q" in lines and "q <= p" in lines and lines == sorted(lines)
    assert main(["--json", "relation", path, "--kind", "up-la:2:dwsim"]) == 0
    assert ["i", "i"] in json.loads(capsys.readouterr().out)
    assert main(["relation", path, "--kind", "nope"]) == 2


def test_gen_is_seeded(tmp_path, capsys):
    assert main(["--seed", "3", "gen", "--n", "6", "--td", "2"]) == 0
    first = capsys.readouterr().out
    assert main(["gen", "--n", "6", "--td", "2", "--seed", "3"]) == 0
    assert capsys.readouterr().out == first
    assert parse_timbuk(first).num_states == 7
    assert main(["gen", "--n", "2", "--td", "9"]) == 2


def test_bench_small(capsys):
    assert main(["bench", "--grid", "td=1.5", "--n", "6", "--samples", "2",
                 "--methods", "ru,heavy"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith("td,method,mean_states")
    assert len(lines) == 3
