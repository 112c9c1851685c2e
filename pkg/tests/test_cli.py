import io
import json

import pytest
from hypothesis import given, strategies as st

from eisgen.cli import run
from eisgen.corralg import GradedChar
from eisgen.exact import (RatFun, ScalarQ, dumps, parse_expr, ratfun_from_json, ratfun_to_json, ratfun_to_text,
                          scalar_from_json, scalar_to_json)


def call(*argv):
    buf = io.StringIO()
    code = run(list(argv), buf)
    return code, buf.getvalue()


def test_eis_tail_json():
    code, text = call("eis", "--q", "3", "--k", "2", "--expand", "8", "--json")
    assert code == 0
    out = json.loads(text)
    tail = {row["exponent"]: row["at_q"] for row in out["laurent_at_infinity"]}
    assert tail[2] == "3"
    assert "." not in text


def test_parse_error_has_position():
    code, text = call("sigma", "--expr", "a^2 + * a", "--json")
    out = json.loads(text)
    assert code == 2 and out["error"] == "parse" and out["position"] == 6


@pytest.mark.parametrize("argv", [["nosuch"], ["count-sections", "--q", "2"], ["zeta", "--csv"],
                                  ["tree", "--q", "6", "--depth", "2"], ["zeta", "--curve", "/nonexistent.json"]])
def test_usage_errors_exit_two(argv):
    assert call(*argv)[0] == 2


def test_csv_tables():
    code, text = call("count-quasisections", "--q", "2", "--k", "1", "--d", "1", "--csv")
    assert code == 0
    assert text.splitlines() == ["q,k,d,enumerated,closed_form,sieve,common_factors", "2,1,1,24,24,24,3"]
    code, text = call("spectrum", "--q", "2", "--csv")
    assert code == 0 and text.splitlines()[1:] == ["discrete,-3", "discrete,3"]


@pytest.mark.parametrize("check", ["relations", "ledger", "thm2"])
def test_cliff_checks_pass(check):
    code, text = call("cliff", "--check", check, "--genus", "2", "--m", "1", "--json")
    assert code == 0, text


def test_cliff_exception_scan():
    code, text = call("cliff", "--check", "exceptions", "--genus", "4", "--json")
    assert code == 0 and json.loads(text)["collisions"] == [[2, 0]]


def test_budget_from_environment(monkeypatch):
    assert call("count-sections", "--q", "2", "--k", "0", "--n", "4")[0] == 0
    monkeypatch.setenv("EISGEN_BUDGET", "10")
    code, text = call("count-sections", "--q", "2", "--k", "0", "--n", "4")
    assert code == 2 and json.loads(text)["error"] == "validation"
    assert call("count-sections", "--q", "2", "--k", "0", "--n", "4", "--budget", "1e8")[0] == 0


def test_curve_file(tmp_path):
    path = tmp_path / "e.json"
    path.write_text(json.dumps({"q": 2, "g": 1, "counts": [5]}))
    code, text = call("xi", "--curve", str(path), "--json")
    assert code == 0, text


small = st.integers(-6, 6)
scalars = st.builds(lambda n, d, e: ScalarQ.q(e) * (ScalarQ(n) + ScalarQ.sqrt_q()) / (ScalarQ.q() + d),
                    small, st.integers(1, 4), st.integers(-3, 3))


@st.composite
def ratfuns(draw):
    a = RatFun.gen("a")
    num = sum((draw(scalars) * a ** e for e in draw(st.lists(small, max_size=3))), RatFun(1, "a"))
    den = a ** draw(small) * (a + draw(st.integers(1, 3))) ** draw(st.integers(0, 2))
    return num / den


@given(scalars)
def test_scalar_json_round_trip(s):
    assert scalar_from_json(json.loads(dumps(scalar_to_json(s)))) == s


@given(ratfuns())
def test_ratfun_round_trips(f):
    assert ratfun_from_json(json.loads(dumps(ratfun_to_json(f)))) == f
    assert parse_expr(ratfun_to_text(f)) == f


@given(st.dictionaries(st.tuples(small, small, small, st.sampled_from(["", "K", "M"])), st.integers(1, 5)))
def test_graded_char_round_trip(d):
    from collections import Counter
    c = GradedChar.of(Counter(d))
    assert GradedChar.from_json(json.loads(json.dumps(c.to_json()))) == c
