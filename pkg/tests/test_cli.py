import json
from importlib import resources

import jsonschema
import pytest

from sallylab.cli import EXIT_CHECK, EXIT_INPUT, EXIT_OK, InputError, load_instance_file, main, parse_range

SCHEMA = json.loads(resources.files("sallylab").joinpath("report.schema.json").read_text())

WORKED = """\
[instance]
format_version = 1
name = worked

[ring]
variables = x, y

[ideal]
I = x^2, x*y^3, y^5
Q = x^2 + y^5, x*y^3

[config]
seed = 4
"""


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def cache(tmp_path, monkeypatch):
    path = tmp_path / "cache.jsonl"
    monkeypatch.setenv("SALLYLAB_CACHE", str(path))
    return path


def write(tmp_path, text, name="inst.ini"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def test_instance_file_round_trip(tmp_path):
    inst, overrides = load_instance_file(write(tmp_path, WORKED))
    assert inst.id == "worked"
    assert [str(g) for g in inst.I.generators] == ["x^2", "x*y^3", "y^5"]
    assert len(inst.Q.generators) == 2
    assert overrides == {"seed": 4}
    assert inst.spec.characteristic == 32003


@pytest.mark.parametrize("bad", [
    WORKED + "\n[extra]\nfoo = 1\n",
    WORKED.replace("name = worked", "nme = worked"),
    WORKED.replace("format_version = 1", "format_version = 2"),
    WORKED.replace("variables = x, y", ""),
    WORKED + "\n[hypotheses]\ncm = maybe\n",
    WORKED.replace("I = x^2", "I = x^^2"),
])
def test_bad_instance_files(tmp_path, bad):
    path = write(tmp_path, bad)
    with pytest.raises(InputError):
        load_instance_file(path)
    assert main(["compute", path, "--no-cache"]) == EXIT_INPUT


def test_compute_from_file(tmp_path, capsys, cache):
    code, out, _ = run(capsys, "compute", write(tmp_path, WORKED), "--no-cache")
    assert code == EXIT_OK
    rep = json.loads(out)
    jsonschema.validate(rep, SCHEMA)
    inv = rep["invariants"]
    assert inv["lambda_RI"] == 8 and inv["e"][0] == 10
    assert rep["config"]["seed"] == 4


def test_q_equal_to_i(tmp_path, capsys, cache):
    text = WORKED.replace("I = x^2, x*y^3, y^5", "I = x^2 + y^5, x*y^3")
    code, out, _ = run(capsys, "compute", write(tmp_path, text), "--no-cache")
    assert code == EXIT_OK
    inv = json.loads(out)["invariants"]
    assert inv["rQ"] == 0 and inv["sQ"] == 0 and inv["fiber_lengths"] == []


def test_check_report_validates(capsys, cache):
    code, out, _ = run(capsys, "check", "--catalog", "ex3.2.1", "--checks", "C1,C10")
    assert code == EXIT_OK
    rep = json.loads(out)
    jsonschema.validate(rep, SCHEMA)
    assert [v["check_id"] for v in rep["verdicts"]] == ["C1", "C10"]
    assert rep["summary"]["failed"] == 0 and rep["summary"]["passed"] == 2
    assert "timings" not in rep


def test_timings_only_on_request(capsys, cache):
    code, out, _ = run(capsys, "compute", "--catalog", "ex3.2.1", "--timings")
    rep = json.loads(out)
    jsonschema.validate(rep, SCHEMA)
    assert code == EXIT_OK and "timings" in rep


def test_cache_hit_is_identical(capsys, cache, tmp_path):
    argv = ["compute", "--catalog", "ex4.6", "--param", "q=1", "--seed", "2"]
    _, first, _ = run(capsys, *argv)
    assert cache.exists() and cache.read_text().count("\n") == 1
    _, second, _ = run(capsys, *argv)
    assert first == second
    assert cache.read_text().count("\n") == 1
    _, third, _ = run(capsys, *argv, "--no-cache")
    assert third == first
    other = tmp_path / "other.jsonl"
    run(capsys, *argv, "--cache", str(other))
    assert other.exists()


FALSE_CM = """\
[instance]
format_version = 1

[ring]
variables = x, y, z, w
relations = x*z, x*w, y*z, y*w
dimension = 2

[ideal]
I = x^4, x^3*y, x*y^3, y^4, z^2, z*w, w^2
Q = x^4 - z^2, y^4 - w^2

[hypotheses]
cm = {}
"""


def test_false_assertion_fails_checks(tmp_path, capsys, cache):
    # the ring is not Cohen-Macaulay; asserting it makes two checks fail
    code, out, err = run(capsys, "check", write(tmp_path, FALSE_CM.format("true")), "--checks", "C1,C2,C3")
    assert code == EXIT_CHECK
    rep = json.loads(out)
    jsonschema.validate(rep, SCHEMA)
    assert [v["pass"] for v in rep["verdicts"]] == [False, False, True]
    assert rep["verdicts"][0]["hypothesis_status"] == "ASSERTED_BY_USER"


def test_violated_flag_is_not_evaluated(tmp_path, capsys, cache):
    code, out, err = run(capsys, "check", write(tmp_path, FALSE_CM.format("false")), "--checks", "C1,C2")
    assert code == EXIT_OK
    rep = json.loads(out)
    assert [v["pass"] for v in rep["verdicts"]] == [None, None]
    assert rep["summary"]["unevaluated"] == ["C1", "C2"]
    assert "not evaluated" in err


def test_table_format(capsys, cache):
    code, out, _ = run(capsys, "check", "--catalog", "ex2.7", "--checks", "C7", "--format", "table")
    assert code == EXIT_OK
    assert "C7" in out and "lambda" in out


def test_sweep(capsys, cache):
    code, out, _ = run(capsys, "sweep", "--catalog", "ex4.6", "--param", "q=1..2")
    assert code == EXIT_OK
    lines = out.strip().splitlines()
    assert lines[0].startswith("q,lambda_R_mod_I,e0_I,e1_I")
    rows = [line.split(",") for line in lines[1:]]
    assert [r[:4] for r in rows] == [["1", "11", "17", "6"], ["2", "13", "20", "7"]]
    assert all(r[-1] == "" for r in rows)


def test_empty_sweep_range(capsys, cache):
    code, out, _ = run(capsys, "sweep", "--catalog", "ex4.6", "--param", "q=3..2")
    assert code == EXIT_OK
    assert out.count("\n") == 1


def test_sweep_errors_go_to_the_error_column(capsys, cache):
    code, out, _ = run(capsys, "sweep", "--catalog", "ex4.6", "--param", "q=0")
    assert code == 3
    assert out.strip().splitlines()[1].split(",")[-1]


def test_catalog_command(capsys):
    code, out, _ = run(capsys, "catalog", "--format", "json")
    assert code == EXIT_OK
    ids = [e["id"] for e in json.loads(out)["catalog"]]
    assert "ex4.6" in ids and len(ids) == 6
    code, out, _ = run(capsys, "catalog")
    assert code == EXIT_OK and "ex2.7" in out


@pytest.mark.parametrize("argv", [
    ["compute", "--catalog", "nope"],
    ["check", "--catalog", "ex2.7", "--checks", "C99"],
    ["frobnicate"],
    ["compute"],
    ["compute", "--catalog", "ex4.6"],
    ["sweep", "--catalog", "ex4.6", "--param", "q=1..2", "--param", "q=3,4"],
])
def test_input_errors(capsys, cache, argv):
    assert run(capsys, *argv)[0] == EXIT_INPUT


def test_parse_range():
    assert parse_range("1..4") == [1, 2, 3, 4]
    assert parse_range("1,3") == [1, 3]
    assert parse_range("5") == [5]
    assert parse_range("3..2") == []
