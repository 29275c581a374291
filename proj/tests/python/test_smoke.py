import math
import os

import pytest

import seqrad


TWO_POINT = [[1.0, -1.0]]


def test_dp_matches_known_values():
    assert seqrad.dp_value(TWO_POINT, 1) == pytest.approx(1.0, abs=1e-12)
    assert seqrad.dp_value(TWO_POINT, 2) == pytest.approx(1.0 / math.sqrt(2.0), abs=1e-12)
    assert seqrad.dp_value(TWO_POINT, 4) == pytest.approx(0.75, abs=1e-12)


def test_dp_agrees_with_brute_force():
    gamma = [[1.0, 0.0], [0.0, 1.0], [0.5, -0.5]]
    for n in (1, 2, 3):
        assert seqrad.dp_value(gamma, n) == pytest.approx(
            seqrad.brute_force_value(gamma, n), abs=1e-12
        )


def test_pde_approaches_limit():
    value = seqrad.pde_value(TWO_POINT, 0.05, 0.01)
    assert value == pytest.approx(math.sqrt(2.0 / math.pi), abs=5e-3)


def test_iid_closed_form_two_functions():
    out = seqrad.iid_value([[1.0, 0.0], [0.0, 1.0]], samples=50000)
    assert out["closed2"] == pytest.approx(1.0 / math.sqrt(2.0 * math.pi), abs=1e-12)
    assert out["mean"] == pytest.approx(out["closed2"], abs=4 * out["std_err"] + 1e-3)


def test_separation_and_heat_bound():
    assert seqrad.separation_value([[1.0], [-1.0]]) == pytest.approx(2.0, abs=1e-9)
    assert seqrad.heat_upper_bound(2, 1.0) == pytest.approx(
        1.0 / math.sqrt(math.pi), abs=1e-8
    )


def test_simulation_certifies_from_below():
    out = seqrad.simulate_constant(TWO_POINT, paths=20000)
    limit = math.sqrt(2.0 / math.pi)
    assert out["mean"] <= limit + 4 * out["std_err"] + 1e-2


def test_errors_are_typed():
    with pytest.raises(seqrad.SeqradError):
        seqrad.dp_value([[1.0, float("nan")]], 2)


def test_report_runs_end_to_end(tmp_path):
    path = tmp_path / "cls.json"
    path.write_text('{"gamma": [[1, -1]]}')
    out = seqrad.report_json(str(path), schedule=[1, 2, 4], samples=20000)
    assert out["exit_code"] == 0
    assert '"verdicts"' in out["json"]
