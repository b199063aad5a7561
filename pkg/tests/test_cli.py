import json

import pytest

from rackforge.cli import main
from rackforge.io import SCHEMA, load_rack
from rackforge.racks import dihedral


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def d3_file(tmp_path, capsys):
    path = tmp_path / "d3.json"
    assert run(capsys, "build", "--dihedral", "3", "-o", str(path))[0] == 0
    return path


def test_build_round_trip(d3_file):
    assert load_rack(d3_file).same_table(dihedral(3))


def test_build_conj_stdout(capsys):
    code, out, _ = run(capsys, "build", "--conj", "S4", "(0 1 2 3)")
    assert code == 0 and len(json.loads(out)["table"]) == 6


def test_envelope_and_h2(d3_file, capsys):
    code, out, _ = run(capsys, "h2", str(d3_file), "--m", "2")
    rep = json.loads(out)
    assert code == 0
    assert set(rep) == {"schema", "command", "inputs_digest", "result", "engine_version"}
    assert rep["schema"] == SCHEMA and rep["command"] == "h2"
    assert rep["result"]["betti"] == 1


def test_timing_is_opt_in(d3_file, capsys):
    rep = json.loads(run(capsys, "h2", str(d3_file), "--timing")[1])
    assert "seconds" in rep["timing"]


def test_reports_are_byte_identical(d3_file, tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run(capsys, "nichols", str(d3_file), "-o", str(a))
    run(capsys, "nichols", str(d3_file), "-o", str(b))
    assert a.read_bytes() == b.read_bytes()
    assert json.loads(a.read_text())["result"]["total"] == 12


def test_jobs_do_not_change_reports(tmp_path, capsys):
    outs = []
    for jobs in ("1", "3"):
        p = tmp_path / f"j{jobs}.json"
        run(capsys, "typed", "--group", "A7", "--class", "(0 1)(2 3)", "--jobs", jobs, "-o", str(p))
        outs.append(p.read_bytes())
    assert outs[0] == outs[1]
    assert json.loads(outs[0])["result"]["status"] == "TYPE_D"


def test_typed_rack_file_with_type_m(tmp_path, capsys):
    p = tmp_path / "x.json"
    run(capsys, "build", "--conj", "S5", "(0 1)(2 3 4)", "-o", str(p))
    code, out, _ = run(capsys, "typed", str(p), "--type-m")
    res = json.loads(out)["result"]
    assert code == 0 and res["status"] == "NOT_TYPE_D" and res["type_M"] is True


def test_cocycles_representatives(d3_file, capsys):
    res = json.loads(run(capsys, "cocycles", str(d3_file), "--m", "2", "--representatives")[1])["result"]
    assert len(res["representatives"]) >= 1


def test_nichols_options(tmp_path, capsys):
    p = tmp_path / "o.json"
    run(capsys, "build", "--conj", "S4", "(0 1)", "-o", str(p))
    res = json.loads(run(capsys, "nichols", str(p), "--cocycle", "chi", "--symmetrizer", "2")[1])["result"]
    assert res["total"] == 576 and res["symmetrizer_ranks"] == [1, 6, 19]


def test_thr_command(tmp_path, capsys):
    spec = tmp_path / "thr.json"
    spec.write_text(json.dumps({"L": "A5", "t": 2, "ell": "e"}))
    res = json.loads(run(capsys, "thr", str(spec), "--generic")[1])["result"]
    assert res["size"] == 60 and res["status"] == "NOT_TYPE_D" and res["generic"]["status"] == "NOT_TYPE_D"


def test_verify_paper_subset(capsys):
    code, out, _ = run(capsys, "verify-paper", "--only", "homology,thr")
    assert code == 0 and json.loads(out)["result"]["ok"]


def test_exit_invalid_input(tmp_path, capsys):
    assert run(capsys, "h2", str(tmp_path / "missing.json"))[0] == 2
    assert run(capsys, "verify-paper", "--only", "nope")[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"table": [[1, 0], [0, 1]]}))
    assert run(capsys, "h2", str(bad))[0] == 2


def test_exit_cap_exceeded(capsys):
    code, _, err = run(capsys, "build", "--thr", "A6", "--t", "3")
    assert code == 3 and "cap exceeded" in err


def test_exit_inconclusive_only_when_strict(capsys):
    argv = ["typed", "--group", "S5", "--class", "(0 1)(2 3 4)", "--orbit-cap", "2"]
    code, out, _ = run(capsys, *argv)
    assert code == 0 and json.loads(out)["result"]["status"] == "INCONCLUSIVE"
    assert run(capsys, *argv, "--strict")[0] == 4
