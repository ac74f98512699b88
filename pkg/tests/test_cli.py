import csv
import io
import json
import subprocess
import sys
from fractions import Fraction

import pytest

from rankone.cli import ConfigError, fraction_str, main, parse_config, run
from rankone.errors import ScheduleError

S1_DOC = {"periodic": {"m": [2], "a": [[1]]}}
S2_DOC = {"periodic": {"m": [3], "a": [[1, 2]]}}


def config(schedule=S2_DOC, **fields):
    return json.dumps({"schedule": schedule, **fields})


def execute(doc: str):
    out = io.StringIO()
    code = run(parse_config(doc), stdout=out)
    return code, out.getvalue()


class TestParse:
    def test_defaults(self):
        cfg = parse_config(config(cmd="zerocheck", k=2))
        assert cfg.params == {"k": 2, "grid": 1 << 14} and cfg.format == "json"

    def test_missing_field(self):
        with pytest.raises(ConfigError, match="n: missing"):
            parse_config(config(cmd="riesz"))

    def test_unknown_command(self):
        with pytest.raises(ConfigError, match="unknown command"):
            parse_config(config(cmd="nope"))

    def test_bad_type(self):
        with pytest.raises(ConfigError):
            parse_config(config(cmd="riesz", n="3"))

    def test_bad_schedule_reports_paths(self):
        with pytest.raises(ScheduleError) as err:
            parse_config(config({"explicit": {"m": [3, 1], "a": [[1], [0]]}}, cmd="heights", K=1))
        paths = [p for p, _ in err.value.violations]
        assert {"schedule.explicit.a[0]", "schedule.explicit.m[1]"} <= set(paths)

    def test_malformed_json(self):
        with pytest.raises(ConfigError, match="malformed"):
            parse_config("{")

    def test_negative_alpha_allowed(self):
        assert parse_config(config(cmd="fourier", alpha=-5, n_max=2)).params["alpha"] == -5


def test_fraction_str_round_trip():
    for x in (Fraction(0), Fraction(1), Fraction(-7, 3), Fraction(3, 4)):
        s = fraction_str(x)
        assert "/" in s and Fraction(s) == x
    assert fraction_str(1) == "1/1"


class TestCommands:
    def test_riesz_csv(self):
        code, text = execute(config(S1_DOC, cmd="riesz", n=2, format="csv"))
        rows = list(csv.reader(io.StringIO(text)))
        assert code == 0 and rows[0] == ["exponent", "value"]
        values = {int(e): Fraction(v) for e, v in rows[1:]}
        assert values == {0: 1, 1: Fraction(3, 4), -1: Fraction(3, 4), 2: Fraction(1, 2), -2: Fraction(1, 2), 3: Fraction(1, 4), -3: Fraction(1, 4)}

    def test_heights_json(self):
        code, text = execute(config(cmd="heights", K=4))
        doc = json.loads(text)
        assert code == 0 and [r["h"] for r in doc["result"]["rows"]] == [0, 3, 12, 39, 120]
        assert doc["convention_notes"] == ["h0=0", "theta_index=a_k"]

    def test_zerocheck_not_certified_is_success(self):
        code, text = execute(config(S1_DOC, cmd="zerocheck", k=1))
        assert code == 0 and json.loads(text)["result"]["status"] == "not_certified"

    def test_measure(self):
        code, text = execute(config(cmd="measure"))
        assert code == 0 and json.loads(text)["result"]["limit"] == "3/2"

    def test_explicit_measure_undetermined(self):
        sched = {"explicit": {"m": [2, 3], "a": [[1], [1, 1]]}}
        code, text = execute(config(sched, cmd="measure"))
        assert code == 0 and json.loads(text)["result"]["classification"] == "undetermined"

    def test_orbit_reaches_top(self):
        code, text = execute(config(cmd="orbit", k=2))
        res = json.loads(text)["result"]
        assert code == 0 and len(res["rows"]) == 12 and res["reached_top"]

    def test_gram(self):
        code, text = execute(config(cmd="gram", k=1, n=3))
        res = json.loads(text)["result"]
        assert code == 0 and res["status"] == "pass" and res["expected_diagonal"] == "1/3"

    def test_depth_exceeded(self):
        sched = {"explicit": {"m": [2, 2], "a": [[1], [1]]}}
        code, _ = execute(config(sched, cmd="theta", k=3))
        assert code == 3

    def test_cap_exceeded(self):
        code, _ = execute(config(cmd="riesz", n=6, caps={"support": 50}))
        assert code == 3

    def test_verify_ok(self):
        code, text = execute(config(S1_DOC, cmd="verify", K_test=4, n_test=4))
        doc = json.loads(text)
        assert code == 0 and doc["passed"] and doc["convention_notes"] == ["h0=0", "theta_index=a_k"]
        for check in doc["checks"]:
            assert set(check) >= {"module", "name", "params", "status"}

    def test_verify_needs_depth(self):
        sched = {"explicit": {"m": [2, 2], "a": [[1], [1]]}}
        code, _ = execute(config(sched, cmd="verify", K_test=4, n_test=4))
        assert code == 3


class TestMain:
    def test_output_file(self, tmp_path):
        cfg = tmp_path / "c.json"
        out = tmp_path / "o.csv"
        cfg.write_text(config(cmd="theta", k=2, format="csv", output=str(out)))
        assert main([str(cfg)]) == 0
        assert out.read_text() == "exponent,value\n0,1/1\n4,1/1\n9,1/1\n"

    def test_config_error_exit(self, tmp_path):
        cfg = tmp_path / "c.json"
        cfg.write_text(config({"periodic": {"m": [3]}}, cmd="heights", K=2))
        assert main([str(cfg)]) == 1

    def test_missing_file(self, tmp_path):
        assert main([str(tmp_path / "absent.json")]) == 1

    def test_stdin_subprocess_deterministic(self):
        doc = config(cmd="fourier", alpha=1, n_max=3)
        runs = [
            subprocess.run([sys.executable, "-m", "rankone", "-"], input=doc, capture_output=True, text=True)
            for _ in range(2)
        ]
        assert all(r.returncode == 0 for r in runs)
        assert runs[0].stdout == runs[1].stdout
        rows = json.loads(runs[0].stdout)["result"]["rows"]
        assert [r["value"] for r in rows] == ["1/3", "4/9", "13/27"]
