import json

import pytest

from bentdesign.cli import Report, main

PLATEAUED5 = "x1*x3+x2*x4+x1*x2*x5"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--json", "--no-timing")
    return code, json.loads(out)


def test_analyze(capsys):
    code, d = run_json(capsys, "analyze", PLATEAUED5)
    assert code == 0
    assert d["results"]["plateaued"]["r"] == 1
    assert d["results"]["plateaued"]["support_size"] == 16
    assert d["results"]["linear_structures"] == []
    assert d["results"]["degree"] == 3
    assert d["results"]["dual"] is None


def test_analyze_constant_and_bent(capsys):
    _, d = run_json(capsys, "analyze", "1")
    assert d["results"]["constant"] and d["results"]["degree"] == 0
    _, d = run_json(capsys, "analyze", "x1*x2+x3*x4")
    assert d["verdicts"]["bent"] and d["results"]["dual"]["anf"] == "x1*x2+x3*x4"


def test_parse_error_exit(capsys):
    code, out, err = run(capsys, "analyze", "x0+*")
    assert code == 1 and "offset 0" in err
    code, out, _ = run(capsys, "analyze", "x1+*", "--json")
    assert code == 1 and json.loads(out)["error"]["type"] == "ParseError"


def test_build_then_verify(capsys, tmp_path):
    path = tmp_path / "d.json"
    code, d = run_json(capsys, "build", "--construction", "addition", "--f", PLATEAUED5, "--out", str(path))
    assert code == 0
    obs = d["results"]["observed"]
    assert (obs["v"], obs["k"], obs["lambda"]) == (16, 6, 4)
    code, v = run_json(capsys, "verify", "--design", str(path), "--check", "tsdp,dsdp,rank,2design")
    assert code == 0
    assert v["verdicts"]["tsdp"] is True and v["verdicts"]["dsdp"] is False
    assert v["results"]["dsdp"]["witness"]["delta"] == ["00111", "01111", "10111", "11111"]
    assert v["results"]["rank"] == 7
    report = tmp_path / "report.json"
    report.write_text(json.dumps(d))
    _, v2 = run_json(capsys, "verify", "--design", str(report), "--check", "tsdp,dsdp,rank,2design")
    assert v2["results"] == v["results"] and v2["verdicts"] == v["verdicts"]


def test_verify_corrupted(capsys, tmp_path):
    path = tmp_path / "d.json"
    run(capsys, "build", "--construction", "addition", "--f", PLATEAUED5, "--out", str(path))
    data = json.loads(path.read_text())
    blk = data["blocks"][3]
    blk["mask"] = format(int(blk["mask"], 16) ^ 1, "x")
    path.write_text(json.dumps(data))
    code, v = run_json(capsys, "verify", "--design", str(path))
    assert code == 1
    assert v["verdicts"]["2design"] is False
    assert v["results"]["2design"]["pair"] == ["00000", "00011"]


def test_build_errors(capsys):
    code, _, err = run(capsys, "build", "--construction", "translation", "--f", PLATEAUED5)
    assert code == 1 and "only when f is bent" in err
    with pytest.raises(SystemExit) as exc:
        main(["build", "--construction", "sum-pair", "--f", "x1*x2"])
    assert exc.value.code == 2
    code, _, _ = run(capsys, "build", "--construction", "addition", "--f", "x1*x2+x3", "--max-build-m", "2")
    assert code == 3


def test_size_guard_flags(capsys):
    code, _, _ = run(capsys, "aut", "--f", "x1*x2*x3*x4*x5*x6+x1")
    assert code == 3
    with pytest.raises(SystemExit) as exc:
        main(["aut", "--f", "x1", "--max-aut-m", "9"])
    assert exc.value.code == 2


def test_code_commands(capsys, tmp_path):
    _, d = run_json(capsys, "code", "weights", "--dset", "x1*x2+x3*x4")
    assert d["results"]["n"] == 6 and d["results"]["k"] == 5
    _, d = run_json(capsys, "code", "lcd", "--dset", "x1*x2+x3*x4")
    assert d["results"]["hull_dimension"] == 1
    _, d = run_json(capsys, "code", "support-design", "--dset", "x1*x2+x3*x4", "--weight", "4")
    assert d["results"]["params"]["b"] == 15
    mat = tmp_path / "m.txt"
    mat.write_text("4 4\n1000\n0100\n0010\n0001\n")
    _, d = run_json(capsys, "code", "lcd", "--matrix", str(mat))
    assert d["verdicts"]["lcd"] is True
    _, d = run_json(capsys, "build", "--construction", "lcd", "--matrix", str(mat))
    assert d["results"]["observed"]["lambda"] == 4
    path = tmp_path / "d.json"
    run(capsys, "build", "--construction", "addition", "--f", PLATEAUED5, "--out", str(path))
    _, d = run_json(capsys, "code", "rm1", "--design", str(path))
    assert d["verdicts"]["contains_rm1"] is True


def test_aut(capsys):
    _, d = run_json(capsys, "aut", "--f", "x1*x2+x3*x4")
    assert d["results"]["order"] == 11520
    _, d = run_json(capsys, "aut", "--f", "x1*x2+x3*x4", "--dset")
    assert d["results"]["dset_code_order"] == 720
    _, d = run_json(capsys, "aut", "--f", "x1*x2", "--list", "2")
    assert d["results"]["pairs"] == [{"A": ["1", "2"], "p": "0"}, {"A": ["1", "2"], "p": "1"}]


def test_equiv(capsys):
    _, d = run_json(capsys, "equiv", "--f", "x1*x2+x3*x4", "--g", "x1*x2+x1*x4+x2*x3", "--exhaustive")
    assert d["verdicts"]["affine_equivalent"]
    w = json.dumps({"A": ["10", "8", "4", "2", "1"], "a": "0", "b": "1e", "eps": 0})
    _, d = run_json(capsys, "equiv", "--f", PLATEAUED5, "--g", PLATEAUED5 + "+x1+x2+x3+x4", "--witness", w)
    assert d["verdicts"]["witness"] is True
    _, d = run_json(capsys, "equiv", "--f", "x1*x2+x3*x4", "--g", "x1*x2*x3")
    assert d["results"]["differing_invariants"] == ["degree", "walsh_abs", "autocorrelation_abs"]


def test_deterministic_and_round_trip(capsys):
    outs = [run(capsys, "build", "--construction", "quasi-symmetric", "--f", "x1*x2+x3*x4", "--json", "--no-timing")[1] for _ in range(2)]
    assert outs[0] == outs[1]
    code, out, _ = run(capsys, "analyze", PLATEAUED5, "--json")
    rep = Report.from_json(out)
    assert "seconds" in rep.timing
    assert rep.to_json() == out.strip()


def test_text_rendering_is_derived(capsys):
    _, out, _ = run(capsys, "analyze", PLATEAUED5)
    assert "r=1" in out and "support_size=16" in out


def test_examples_subset_and_fault_injection(capsys):
    code, d = run_json(capsys, "examples", "--only", "plateaued-pipeline")
    assert code == 0 and [c["key"] for c in d["results"]["criteria"]] == ["plateaued-pipeline"]
    code, d = run_json(capsys, "examples", "--only", "trace-pair,quasi-symmetric", "--field", "gf2^4/1f")
    assert code == 1
    status = {c["key"]: c["passed"] for c in d["results"]["criteria"]}
    assert status == {"quasi-symmetric": True, "trace-pair": False}
    with pytest.raises(SystemExit) as exc:
        main(["examples", "--only", "nope"])
    assert exc.value.code == 2
