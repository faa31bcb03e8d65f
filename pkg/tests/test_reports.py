import json
import math

import pytest

from pinvcond.errors import DomainError
from pinvcond.reports import (
    Z_95,
    ExperimentReport,
    Verdict,
    format_float,
    wilson_interval,
    wilson_lower,
    wilson_upper,
)


def test_wilson_golden_3_of_10():
    lo, hi = wilson_interval(3, 10, Z_95)
    assert lo == pytest.approx(0.10779126740630103, rel=1e-14)
    assert hi == pytest.approx(0.6032218525388546, rel=1e-14)


def test_wilson_zero_successes_lower_is_exactly_zero():
    # the zero-count case must not produce a spurious positive lower bound
    for n in (1, 10, 1000, 10**6):
        assert wilson_lower(0, n, 3.0) == 0.0
        assert wilson_upper(0, n, 3.0) > 0.0
    assert wilson_upper(10, 10, 3.0) == 1.0


def test_wilson_bracket_and_clamp():
    for k, n in [(0, 5), (1, 5), (5, 5), (499, 1000)]:
        lo, hi = wilson_interval(k, n, Z_95)
        assert 0.0 <= lo <= hi <= 1.0
        assert lo <= k / n <= hi


def test_wilson_interval_narrows_with_trials():
    w_small = wilson_interval(10, 100, Z_95)
    w_big = wilson_interval(1000, 10000, Z_95)
    assert (w_big[1] - w_big[0]) < (w_small[1] - w_small[0])


def test_wilson_validation():
    with pytest.raises(DomainError):
        wilson_interval(1, 0)
    with pytest.raises(DomainError):
        wilson_interval(-1, 10)
    with pytest.raises(DomainError):
        wilson_interval(11, 10)
    with pytest.raises(DomainError):
        wilson_interval(1, 10, z=0.0)


def test_format_float_roundtrips_float64():
    values = [0.0, 1.0, -1.5, math.pi, 1e-300, 1.2345678901234567e17,
              2.0 ** -52, 0.1, 7.0 / 3.0]
    for v in values:
        assert float(format_float(v)) == v


def test_verdict_to_dict():
    v = Verdict("demo", True, "lhs", 1.0, "rhs", 2.0, detail="x")
    d = v.to_dict()
    assert d == {
        "name": "demo",
        "passed": True,
        "lhs_label": "lhs",
        "lhs_value": 1.0,
        "rhs_label": "rhs",
        "rhs_value": 2.0,
        "detail": "x",
    }


def _sample_report():
    return ExperimentReport(
        command="demo",
        config={"seed": 7, "trials": 10},
        estimates={"q": 1.5},
        tails=[{"z": 2.0, "probability": 0.25}],
        rows=[{"m": 2, "n": 4}],
        bounds={"limit": 1.5},
        verdicts=[
            Verdict("a", True, "l", 0.0, "r", 1.0),
            Verdict("b", True, "l", 0.5, "r", 1.0),
        ],
        notes=["note"],
    )


def test_report_all_passed_flag():
    rep = _sample_report()
    assert rep.all_passed()
    assert rep.to_dict()["all_passed"] is True
    rep.verdicts.append(Verdict("c", False, "l", 2.0, "r", 1.0))
    assert not rep.all_passed()
    assert rep.to_dict()["all_passed"] is False


def test_report_json_is_deterministic_sorted_and_newline_terminated():
    a = _sample_report().to_json()
    b = _sample_report().to_json()
    assert a == b
    assert a.endswith("\n")
    parsed = json.loads(a)
    assert list(parsed.keys()) == sorted(parsed.keys())
    assert parsed["verdicts"][0]["name"] == "a"


def test_report_json_rejects_non_finite_values():
    rep = _sample_report()
    rep.estimates["bad"] = math.nan
    with pytest.raises(ValueError):
        rep.to_json()


def test_write_json_uses_lf_only(tmp_path):
    path = tmp_path / "report.json"
    rep = _sample_report()
    rep.write_json(path)
    raw = path.read_bytes()
    assert b"\r" not in raw
    assert raw.decode() == rep.to_json()
