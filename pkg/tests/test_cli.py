import io
import json
from pathlib import Path

import pytest

from wicksforms.cli import run

GROUPS = Path(__file__).resolve().parent.parent / "groups"


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), out=out)
    text = out.getvalue()
    return code, (json.loads(text) if code == 0 or code == 2 else text)


def test_wicks_check():
    code, cert = call("wicks", "check", "abcABC")
    assert code == 0
    assert cert["result"] == {"e": 3, "genus": 1, "is_wicks_form": True, "v": 2}
    assert cert["version"] == "wicksforms-certificate/1"
    assert cert["command"] == "wicks check"


def test_conjugate_with_group_file():
    code, cert = call("conjugate", "ab", "ba", "--group", str(GROUPS / "free2.json"))
    assert code == 0
    assert cert["result"] == {"conjugator": "a", "bound": 4}
    assert cert["assumptions"] == []


def test_default_group_is_listed():
    code, cert = call("genus", "abAB")
    assert code == 0 and cert["result"]["k"] == 1
    assert "default-group=free-on-ab" in cert["assumptions"]


def test_subdivide_and_surface():
    code, cert = call("subdivide", "aab", "B", "AA", "--delta", "0")
    assert code == 0 and cert["result"]["violations"] == []
    code, cert = call("surface", "abAB")
    assert code == 0 and cert["result"]["regular"] and cert["result"]["genus"] == 1


def test_extend_example_plan():
    code, cert = call("extend", "--group", str(GROUPS / "free2.json"), "--plan", str(GROUPS / "example_plan.json"),
                      "--n", "3")
    assert code == 0
    assert cert["result"]["verified"] and cert["result"]["report"]["F"] == "ABab"


def test_extend_rejects_bad_plan(tmp_path):
    plan = json.loads((GROUPS / "example_plan.json").read_text())
    plan["genus_targets"] = [0, 0]
    path = tmp_path / "plan.json"
    path.write_text(json.dumps(plan))
    code, cert = call("extend", "--plan", str(path), "--n", "3")
    assert code == 2


def test_output_is_byte_stable():
    argv = ("forms", "synth", "--variant", "3", "--seed", "7")
    first, second = io.StringIO(), io.StringIO()
    assert run(list(argv), out=first) == run(list(argv), out=second) == 0
    assert first.getvalue() == second.getvalue()


def test_synth_verify_round_trip(tmp_path):
    code, cert = call("forms", "synth", "--variant", "2", "--seed", "xi1=a,u=b,A2=ba")
    assert code == 0 and cert["result"]["F"] == "AbaBabAB"
    path = tmp_path / "form.json"
    path.write_text(json.dumps(cert))
    code, checked = call("forms", "verify", "--form", str(path))
    assert code == 0
    assert all(c["ok"] for c in checked["result"]["clauses"])

    cert["result"]["components"]["xi2"] = "b"
    path.write_text(json.dumps(cert))
    code, checked = call("forms", "verify", "--form", str(path))
    assert code == 2
    failed = {c["clause"] for c in checked["result"]["clauses"] if not c["ok"]}
    assert "conjugacy" in failed


def test_match():
    code, cert = call("forms", "match", "AbaBabAB")
    assert code == 0
    assert cert["result"]["variant"] == 1
    assert cert["result"]["components"] == {"X": "A", "Y": "baB", "Z": "1"}


@pytest.mark.parametrize(
    "argv",
    [("bogus",), ("wicks", "check", "ab1x"), ("conjugate", "ab", "ba", "--group", "/nonexistent.json"),
     ("delta", "--radius", "two")],
)
def test_usage_errors_exit_one(argv):
    code, text = call(*argv)
    assert code == 1
    assert text == "" or not text.startswith("{")
