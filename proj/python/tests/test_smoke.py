import math

import pytest

import anticonc


def test_lcf_all_ones():
    res = anticonc.lcf_exact("rademacher", [1, 1, 1, 1], 0.5)
    assert res["value"] == pytest.approx(0.375)
    assert res["exact"] == "3/8"


def test_xi_norm_and_p_xi():
    assert anticonc.xi_norm_sq(0.25, "rademacher") == pytest.approx(0.125)
    assert anticonc.p_xi_exact([0, 0], "rademacher") == pytest.approx(1.0)


def test_singular_values():
    assert anticonc.smallest_singular_value([[3, 0], [0, 2j]]) == pytest.approx(2.0, rel=1e-9)
    assert anticonc.singular_values([[1, 1], [1, 1]])[0] == 0.0


def test_rk_alpha_big_int():
    assert anticonc.rk_alpha(5, [(1, 0), (1, 0)], 1) == 8


def test_threshold_log_space():
    t = anticonc.theorem13_threshold(0.1, 100, 100, 1)
    expected = -300 * math.log(10) / math.log(100) * math.log(1.1e7)
    assert t["log"] == pytest.approx(expected, rel=1e-12)
    assert t["value"] == 0.0


def test_run_config():
    rep = anticonc.run_config("experiment = lcf\nvector = 1,1,1,1\nradius = 0.5\n")
    assert rep["pass"]
    assert rep["results"]["value"] == pytest.approx(0.375)
    assert len(rep["input_hash"]) == 40


def test_errors():
    with pytest.raises(anticonc.ConfigError, match="lcf.radiuss"):
        anticonc.run_config("experiment = lcf\nvector = 1\nradiuss = 0.5\n")
    with pytest.raises(anticonc.ConfigError):
        anticonc.verify_suite("nope")
    with pytest.raises(anticonc.CapabilityError):
        anticonc.p_xi_exact([1], "gaussian")
    with pytest.raises(anticonc.PreconditionError):
        anticonc.rk_alpha(4, [(1, 0)], 1)
