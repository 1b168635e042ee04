import io
import json
import re
import subprocess
import sys

import pytest

from wgdbl.cli import export_dot, run
from wgdbl.fincat import validate_category
from wgdbl.fixtures import load_category


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code, _ = run(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


def dot_counts(text):
    nodes = re.findall(r'^\s+("[^"]*");$', text, re.M)
    edges = re.findall(r"->", text)
    return len(nodes), len(edges)


PASSING = [
    ("fincat", "validate", "FIX-POSB"),
    ("fincat", "pi0", "FIX-ARROW"),
    ("fincat", "discrete", "FIX-ISO"),
    ("dblcat", "validate", "FIX-B2A"),
    ("dblcat", "check-wg", "FIX-BG"),
    ("dblcat", "pi0", "FIX-POSB"),
    ("dblcat", "nerve", "FIX-BG"),
    ("dblcat", "discretize", "FIX-ARROW"),
    ("companion", "find", "FIX-B2A"),
    ("companion", "conjoint", "FIX-ISO"),
    ("companion", "precompanion", "FIX-ISO"),
    ("companion", "comp", "FIX-BG"),
    ("fractions", "check", "FIX-POSB"),
    ("fractions", "build", "FIX-ISO"),
    ("fractions", "classify", "FIX-POSB"),
    ("fractions", "factor", "FIX-ARROW"),
    ("fractions", "lift", "FIX-ISO"),
    ("bicat", "validate", "FIX-ISO"),
    ("bicat", "fundamental", "FIX-B2A"),
    ("bicat", "marked-paths", "FIX-ARROW"),
    ("bicat", "fractions", "FIX-POSB"),
    ("bicat", "omega", "FIX-POSB"),
    ("homotopy", "groups", "FIX-B2A"),
    ("homotopy", "groupoidal", "FIX-BG"),
    ("homotopy", "postnikov", "FIX-BG"),
]


@pytest.mark.parametrize("module,op,ref", PASSING)
def test_operations_exit_zero(module, op, ref):
    code, out, err = call(module, op, ref)
    assert code == 0, err or out
    json.loads(out)


def test_failed_checks_exit_one():
    code, out, _ = call("dblcat", "check-wg", "V-Z2")
    assert code == 1 and json.loads(out)["passed"] is False
    code, out, _ = call("fincat", "discrete", "Z2")
    assert code == 1
    code, out, _ = call("homotopy", "groups", "FIX-ARROW")
    report = json.loads(out)
    assert code == 1 and report["error"] == "NotGroupoidal" and "witness" in report


def test_usage_errors_exit_two(tmp_path):
    assert call("nope", "validate", "FIX-BG")[0] == 2
    assert call("fincat", "nope", "FIX-ISO")[0] == 2
    assert call("dblcat", "validate", str(tmp_path / "missing.json"))[0] == 2
    assert call("dblcat", "check-wg", "FIX-BG", "--nmax", "1")[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, err = call("fincat", "validate", str(bad))
    assert code == 2 and "bad.json:1" in err
    assert call("homotopy", "groups", "FIX-BG", "--basepoint", "zz")[0] == 2
    assert call("companion", "find", "FIX-BG", "--arrow", "zz")[0] == 2


def test_help_exits_zero():
    code, out, _ = call("--help")
    assert code == 0 and "marked-paths" in out


def test_json_report_and_timing():
    code, out, _ = call("fincat", "validate", "FIX-ISO", "--json")
    r = json.loads(out)
    assert code == 0 and r["ok"] and r["command"] == "fincat validate" and "timing" not in r
    assert len(r["input_digest"]) == 16
    _, out, _ = call("fincat", "validate", "FIX-ISO", "--json", "--timing")
    assert "timing" in json.loads(out)


def test_output_is_byte_deterministic():
    cmds = [["fractions", "build", "FIX-POSB"], ["fincat", "random", "--seed", "7", "--size", "5"],
            ["bicat", "fundamental", "FIX-B2A", "--json"]]
    for cmd in cmds:
        outs = {subprocess.run([sys.executable, "-m", "wgdbl", *cmd], capture_output=True,
                               check=True).stdout for _ in range(2)}
        assert len(outs) == 1, cmd


def test_random_depends_on_seed():
    a = call("fincat", "random", "--seed", "1", "--size", "5")[1]
    b = call("fincat", "random", "--seed", "2", "--size", "5")[1]
    assert a == call("fincat", "random", "--seed", "1", "--size", "5")[1]
    assert a != b


def test_json_round_trip(tmp_path):
    _, out, _ = call("fincat", "validate", "FIX-POSB")
    p = tmp_path / "c.json"
    p.write_text(out)
    _, again, _ = call("fincat", "validate", str(p))
    assert again == out
    assert validate_category(json.loads(out)).same_as(load_category("FIX-POSB"))
    _, out, _ = call("dblcat", "validate", "FIX-B2A")
    p.write_text(out)
    assert call("dblcat", "validate", str(p))[1] == out


def test_category_input_read_as_horizontal_embedding():
    code, out, _ = call("dblcat", "validate", "FIX-ARROW")
    D = json.loads(out)
    assert code == 0 and len(D["X1"]["objects"]) == 3


# -- dot export -------------------------------------------------------------

def test_dot_arrow(tmp_path):
    p = tmp_path / "a.dot"
    assert call("fincat", "validate", "FIX-ARROW", "--dot", str(p))[0] == 0
    text = p.read_text()
    assert text.startswith("digraph") and dot_counts(text) == (2, 1)


def test_dot_fractions_posb(tmp_path):
    p = tmp_path / "f.dot"
    assert call("fractions", "build", "FIX-POSB", "--dot", str(p))[0] == 0
    assert dot_counts(p.read_text())[0] == 9


def test_dot_empty_category():
    C = validate_category({"objects": [], "arrows": [], "identities": {}, "compose": []})
    assert dot_counts(export_dot(C, "empty")) == (0, 0)


def test_dot_rejects_other_types():
    with pytest.raises(TypeError):
        export_dot(42)
