import json
import math

import pytest

import reslab


def test_scenarios_listed():
    ids = reslab.list_scenarios()
    assert "fig1_put" in ids and "ex37_entropic_jump" in ids
    assert len(ids) == 9


def test_config_round_trip_and_errors():
    for sid in reslab.list_scenarios():
        text = reslab.default_config(sid)
        assert reslab.normalize_config(text) == text
    with pytest.raises(reslab.ConfigError, match="scenario_id"):
        reslab.normalize_config("")
    with pytest.raises(reslab.ConfigError, match="colour"):
        reslab.normalize_config(json.dumps({"scenario_id": "fig1_put", "colour": 3}))


def test_philox_known_answer():
    assert reslab.philox([0, 0, 0, 0], [0, 0]) == [0x6627E8D5, 0xE169C58D, 0xBC57AC4C, 0x9B00DBD8]


def test_closed_forms():
    # put rate at 0 equals -mu s0 N(-d+)
    d = (0.5 * 0.01) / 0.1
    expect = -0.1 * 1000 * 0.5 * math.erfc(d / math.sqrt(2))
    assert reslab.put_rate(0.0) == pytest.approx(expect, rel=1e-12)
    assert reslab.vasicek_rate(1 - 1e-7) == pytest.approx(0.02, abs=1e-6)
    a, b = reslab.entropic_jump_rates(0.3)
    assert a == pytest.approx(b, rel=1e-10)


def test_small_run_is_deterministic():
    cfg = reslab.config("ex55_martingale", n_paths=2000, n_steps=20)
    r1 = reslab.run(cfg)
    r2 = reslab.run(cfg)
    assert r1["rates"] == r2["rates"]
    assert r1["scenario_id"] == "ex55_martingale"
    assert all(row["closed_form"] == 0.0 for row in r1["rates"])


def test_selftest_passes():
    assert all(r["passed"] for r in reslab.run_selftest())
