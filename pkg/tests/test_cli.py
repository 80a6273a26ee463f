import json
import subprocess
import sys

import pytest

from richlines import formats
from richlines.cli import main
from richlines.grid import GroundSet
from richlines.lines import Line


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def write(path, obj):
    path.write_text(json.dumps(obj))
    return str(path)


def test_gen_set_kinds(capsys, tmp_path):
    code, out, _ = run(capsys, "gen-set", "--kind", "ap", "--n", "4")
    assert code == 0 and json.loads(out)["elements"] == ["1", "2", "3", "4"]
    code, out, _ = run(capsys, "gen-set", "--kind", "gp", "--n", "3", "--a0", "1", "--r", "2")
    assert json.loads(out)["elements"] == ["1", "2", "4"]
    code, out, _ = run(capsys, "gen-set", "--kind", "ap", "--n", "3", "--a0", "1/2", "--d", "1/3")
    assert json.loads(out)["elements"] == ["1/2", "5/6", "7/6"]
    src = write(tmp_path / "raw.json", ["3", "1", "1", "2/4"])
    code, out, _ = run(capsys, "gen-set", "--kind", "file", "--set", src)
    assert json.loads(out)["elements"] == ["1/2", "1", "3"]


def test_random_set_is_reproducible(capsys):
    first = run(capsys, "gen-set", "--kind", "random", "--n", "12", "--seed", "7")[1]
    second = run(capsys, "gen-set", "--kind", "random", "--n", "12", "--seed", "7")[1]
    other = run(capsys, "gen-set", "--kind", "random", "--n", "12", "--seed", "8")[1]
    assert first == second and first != other


def test_random_set_needs_seed(capsys):
    code, _, err = run(capsys, "gen-set", "--kind", "random", "--n", "5")
    assert code == 1 and json.loads(err)["error"]["type"] == "precondition"


def test_pipeline_ap10(capsys, tmp_path):
    a = str(tmp_path / "a.json")
    lines = str(tmp_path / "l.json")
    assert run(capsys, "gen-set", "--kind", "ap", "--n", "10", "--out", a)[0] == 0
    assert run(capsys, "enumerate", "--set", a, "--k", "9", "--out", lines)[0] == 0
    data = json.loads(open(lines).read())
    assert data["schema_version"] == 1 and len(data["lines"]) == 6
    assert {l["slope"] for l in data["lines"]} == {"1", "-1"}
    code, out, _ = run(capsys, "decompose", "--lines", lines)
    assert code == 0 and json.loads(out)["family_count"] == 2
    code, out, _ = run(capsys, "star", "--set", a, "--lines", lines, "--delta", "0.1", "--depth", "2")
    assert code == 0 and json.loads(out)["levels"][0]["level"] == 1
    code, out, _ = run(capsys, "commutator", "--set", a, "--lines", lines, "--delta", "0.05")
    rep = json.loads(out)
    assert code == 0 and rep["components"]["component_count"] >= 1
    code, out, _ = run(capsys, "analyze", "--lines", lines)
    assert code == 0 and not json.loads(out)["general_position"]["is_gp"]


def test_decompose_gp_instance_singletons(capsys, tmp_path):
    src = write(tmp_path / "gp.json", {"lines": [formats.line_to_json(l) for l in
                                                   [Line(1, 0), Line(2, 1), Line(3, 5), Line(5, -7)]]})
    code, out, _ = run(capsys, "decompose", "--lines", src)
    assert json.loads(out)["family_count"] == 4


def test_star_diagnostics_block(capsys, tmp_path):
    a = write(tmp_path / "a.json", {"elements": [str(i) for i in range(1, 31)]})
    ls = write(tmp_path / "l.json", [formats.line_to_json(Line(2, 0)), formats.line_to_json(Line(3, 1))])
    code, out, _ = run(capsys, "star", "--set", a, "--lines", ls, "--delta", "0.1",
                       "--alpha", "0.3", "--epsilon", "0.5", "--star-bound", "2")
    assert code == 0 and set(json.loads(out)["diagnostics"]["thm4"]) == {"i", "ii", "iii", "iv"}


def test_parameter_order_enforced(capsys, tmp_path):
    code, _, err = run(capsys, "star", "--set", "x", "--lines", "y", "--delta", "0.3",
                       "--alpha", "0.2", "--epsilon", "0.5")
    assert code == 1 and "delta < alpha < epsilon" in json.loads(err)["error"]["message"]


def test_bad_inputs_exit_1(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(capsys, "enumerate", "--set", str(bad), "--k", "2")[0] == 1
    assert run(capsys, "enumerate", "--set", str(tmp_path / "missing.json"), "--k", "2")[0] == 1
    dup = write(tmp_path / "dup.json", ["1", "1"])
    assert run(capsys, "enumerate", "--set", dup, "--k", "2")[0] == 1
    vert = write(tmp_path / "v.json", [{"slope": "0", "intercept": "1"}])
    assert run(capsys, "decompose", "--lines", vert)[0] == 1
    assert run(capsys, "gen-set", "--kind", "gp", "--n", "3", "--r", "-1")[0] == 1
    assert run(capsys, "gen-set", "--kind", "gp", "--n", "3", "--a0", "0")[0] == 1
    code, _, err = run(capsys, "verify", "--suite", "energy", "--seed", "1", "--format", "csv")
    assert code == 1 and "csv" in json.loads(err)["error"]["message"]


def test_csv_outputs(capsys, tmp_path):
    a = str(tmp_path / "a.json")
    run(capsys, "gen-set", "--kind", "ap", "--n", "10", "--out", a)
    code, out, _ = run(capsys, "enumerate", "--set", a, "--k", "9", "--format", "csv")
    rows = out.strip().splitlines()
    assert rows[0] == "slope,intercept,richness" and len(rows) == 7
    ls = str(tmp_path / "l.json")
    run(capsys, "enumerate", "--set", a, "--k", "9", "--out", ls)
    code, out, _ = run(capsys, "decompose", "--lines", ls, "--format", "csv")
    assert out.splitlines()[0] == "slope,intercept,family_kind,family_key"


@pytest.mark.parametrize("suite", ["lemma31", "lemma53", "binom", "algebra", "energy"])
def test_verify_suites_pass(capsys, suite):
    code, out, _ = run(capsys, "verify", "--suite", suite, "--trials", "10", "--seed", "1")
    rep = json.loads(out)
    assert code == 0 and rep["ok"] and rep["passed"] == 10


def test_verify_lemma53_200(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "lemma53", "--trials", "200", "--seed", "1")
    assert code == 0 and json.loads(out)["failed"] == 0


def test_verify_threads_identical(capsys):
    one = run(capsys, "verify", "--suite", "algebra", "--trials", "8", "--seed", "3")[1]
    four = run(capsys, "verify", "--suite", "algebra", "--trials", "8", "--seed", "3", "--threads", "4")[1]
    assert one == four


def test_failed_trials_exit_2(capsys, monkeypatch):
    from richlines import suites
    from richlines.errors import InvariantViolation

    def broken(rng):
        raise InvariantViolation("boom")

    monkeypatch.setitem(suites.SUITES, "energy", broken)
    code, out, _ = run(capsys, "verify", "--suite", "energy", "--trials", "3", "--seed", "1")
    assert code == 2 and json.loads(out)["failed"] == 3


def test_hard_assertion_exit_2(capsys, monkeypatch, tmp_path):
    from richlines import cli
    from richlines.errors import InvariantViolation

    def boom(*a, **k):
        raise InvariantViolation("broken invariant")

    monkeypatch.setattr(cli, "decompose", boom)
    src = write(tmp_path / "l.json", [formats.line_to_json(Line(1, 0))])
    code, _, err = run(capsys, "decompose", "--lines", src)
    assert code == 2 and json.loads(err)["error"]["type"] == "hard_assertion"


def test_console_script_entry():
    proc = subprocess.run([sys.executable, "-m", "richlines.cli", "gen-set", "--kind", "ap", "--n", "2"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["elements"] == ["1", "2"]


def test_format_round_trips():
    A = GroundSet.of(["1/3", 2, -5])
    assert formats.ground_set_from_json(formats.ground_set_to_json(A)) == A
    l = Line("-7/3", "11/2")
    assert formats.line_from_json(formats.line_to_json(l)) == l
    from richlines.lemmas import dilate_graph

    G = dilate_graph({0, 1, 3, 7}, -1, {2})
    assert formats.layered_graph_from_json(formats.layered_graph_to_json(G)) == G
    D = formats.degree_matrix_from_json({"L": "2", "rows": [["1/2", "2"], ["0", "1"]]})
    assert D.k == 2 and D.N == 2
