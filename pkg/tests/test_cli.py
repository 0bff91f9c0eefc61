import json
from importlib import resources

import jsonschema
import pytest

from borelk.cli import main

SCHEMA = json.loads(resources.files("borelk").joinpath("report.schema.json").read_text())

COMMANDS = [
    ("iso-check --rank 1 --cutoff 3", 0, "PASS"),
    ("iso-check --rank 2 --cutoff 2 --emit-matrices", 0, "PASS"),
    ("prop2 --group SL2 --cutoff 6", 0, "PASS"),
    ("prop2 --group GL2 --cutoff 4", 0, "PASS"),
    ("radical --group SL2 --cutoff 6", 0, "PASS"),
    ("separation --group SL2 --d 2 --Dmax 4", 0, "PASS"),
    ("borel --group SL2 --d 2 --D 3", 0, "PASS"),
    ("borel --group SL2 --d 2 --D 2", 2, "UNDETERMINED"),
    ("membership --poly 1-l1 --ideal IT --rank 1 --cutoff 3", 0, "PASS"),
    ("membership --poly 1 --ideal IG --group SL2 --cutoff 3", 0, "PASS"),
    ("tower ml --preset bt --rank 1 --kmax 3", 0, "PASS"),
    ("tower ml --preset doubling --stages 4", 2, "UNDETERMINED"),
    ("tower lim --preset cyclic2 --stages 3", 0, "PASS"),
    ("demazure --group SL2 --poly l1", 0, "PASS"),
    ("demazure --group SL3 --poly l1 --verify-word-independence --samples 3", 0, "PASS"),
    ("ring info --group SL3", 0, "PASS"),
    ("prop2 --group NOPE --cutoff 3", 1, "ERROR"),
    ("tower ml --file /nonexistent/tower.json", 1, "ERROR"),
]


def run_cli(capsys, line, json_mode=True):
    argv = line.split() + (["--json"] if json_mode else [])
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("line, code, verdict", COMMANDS)
def test_json_reports(capsys, line, code, verdict):
    got, out, _ = run_cli(capsys, line)
    rep = json.loads(out)
    jsonschema.validate(rep, SCHEMA)
    assert got == code and rep["verdict"] == verdict
    assert rep["command"] == " ".join(w for w in line.split()[:2] if not w.startswith("-"))[: len(rep["command"])]


@pytest.mark.parametrize("line, code, verdict", COMMANDS)
def test_text_mode_agrees(capsys, line, code, verdict):
    got, out, err = run_cli(capsys, line, json_mode=False)
    assert got == code
    assert f": {verdict}" in (out + err).splitlines()[0]


def test_borel_ideal_power_answer(capsys):
    _, out, _ = run_cli(capsys, "prop2 --group SL2 --cutoff 6")
    assert json.loads(out)["result"]["m"] == 2


def test_membership_gens_and_nonmember(capsys):
    code, out, _ = run_cli(capsys, "membership --poly 1-l1 --gens 1-2*l1+l1^2 --rank 1 --cutoff 4")
    assert code == 0 and json.loads(out)["result"]["answer"] is False


def test_timing_only_on_request(capsys):
    _, out, _ = run_cli(capsys, "iso-check --rank 1 --cutoff 2")
    assert "timing" not in json.loads(out)
    _, out, _ = run_cli(capsys, "iso-check --rank 1 --cutoff 2 --timing")
    rep = json.loads(out)
    jsonschema.validate(rep, SCHEMA)
    assert rep["timing"]["seconds"] >= 0


def test_deterministic_in_process(capsys):
    line = "verify --seed 3 --samples 4"
    _, a, _ = run_cli(capsys, line)
    _, b, _ = run_cli(capsys, line)
    assert a == b


def test_tower_file_and_group_file(capsys, tmp_path):
    tower = tmp_path / "t.json"
    tower.write_text(json.dumps({"stages": [{"gens": 1}, {"gens": 1}], "maps": [[[3]]]}))
    code, out, _ = run_cli(capsys, f"tower ml --file {tower}")
    assert code == 2
    bad = tmp_path / "rd.json"
    bad.write_text(json.dumps({"rank": 1, "reflections": [[[2]]], "simple_roots": [[2]]}))
    code, out, _ = run_cli(capsys, f"ring info --group {bad}")
    rep = json.loads(out)
    assert code == 1 and rep["verdict"] == "ERROR"


def test_usage_error_exits_nonzero():
    with pytest.raises(SystemExit) as exc:
        main(["iso-check", "--rank"])
    assert exc.value.code != 0
