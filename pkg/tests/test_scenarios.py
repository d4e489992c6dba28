import json
import math

import numpy as np
import pytest

from qthermo import (
    CSV_HEADER,
    ConfigError,
    CrossCheckError,
    ScenarioConfig,
    Tolerances,
    emit_run,
    emit_series,
    run_dissipative,
    run_two_qubit,
)
from qthermo.scenarios import fmt12


def test_config_defaults_per_scenario():
    cfg = ScenarioConfig(scenario="two-qubit")
    assert cfg.t_max == pytest.approx(math.pi)
    assert cfg.steps == 2000
    cfg = ScenarioConfig(scenario="dissipative")
    assert cfg.t_max == 5.0
    assert cfg.steps == 5000


def test_config_validation():
    with pytest.raises(ConfigError):
        ScenarioConfig(scenario="three-qubit")
    with pytest.raises(ConfigError):
        ScenarioConfig(scenario="two-qubit", steps=1)
    with pytest.raises(ConfigError):
        ScenarioConfig(scenario="two-qubit", t_max=-1.0)
    with pytest.raises(ConfigError):
        ScenarioConfig(scenario="two-qubit", definitions="mixed")
    with pytest.raises(ConfigError):
        ScenarioConfig(scenario="two-qubit", format="xml")
    with pytest.raises(ConfigError):
        ScenarioConfig(scenario="two-qubit", plot=True)  # plot needs out
    with pytest.raises(Exception):
        ScenarioConfig(scenario="two-qubit", p=0.3, c=0.5)  # positivity


def test_two_qubit_symmetric_summary_flags():
    res = run_two_qubit(ScenarioConfig(scenario="two-qubit", steps=400))
    assert res.summary["flag.zero_heat_and_work_A"] is True
    assert res.summary["flag.entropy_varies_without_heat"] is True
    assert res.summary["flag.subsystem_B_catalyst"] is True
    assert res.summary["A.S_max"] == pytest.approx(math.log(2.0), abs=1e-9)
    assert res.summary["B.state_max_dev_from_mixed"] < 1e-12


def test_two_qubit_general_parameters_summary():
    res = run_two_qubit(ScenarioConfig(scenario="two-qubit", p=0.3, c=0.35,
                                       t_max=math.pi / 2.0, steps=500))
    assert res.summary["flag.zero_heat_and_work_A"] is False
    assert res.summary["flag.heat_equals_minus_work_A"] is True
    assert res.summary["flag.subsystem_B_catalyst"] is True
    assert res.summary["A.max_abs_dU"] < 1e-12
    assert res.summary["A.max_abs_Q_new"] > 1e-3


def test_two_qubit_no_coupling_is_inert():
    res = run_two_qubit(ScenarioConfig(scenario="two-qubit", g=0.0, steps=200))
    for name in ("Q_new", "W_new", "Q_alicki", "W_alicki"):
        assert np.max(np.abs(res.ledger_a.column(name))) == 0.0
    s = res.ledger_a.column("S")
    assert np.max(np.abs(s - s[0])) < 1e-12


def test_two_qubit_lab_frame_keeps_populations_and_entropy():
    res_int = run_two_qubit(ScenarioConfig(scenario="two-qubit", p=0.3, c=0.35,
                                           steps=300))
    res_lab = run_two_qubit(ScenarioConfig(scenario="two-qubit", p=0.3, c=0.35,
                                           steps=300, frame="lab"))
    assert np.max(np.abs(res_int.ledger_a.column("S") - res_lab.ledger_a.column("S"))) < 1e-11
    assert np.max(np.abs(res_int.ledger_a.column("U") - res_lab.ledger_a.column("U"))) < 1e-12
    p_int = res_int.ledger_a.column("p")
    p_lab = res_lab.ledger_a.column("p")
    assert np.max(np.abs(p_int - p_lab)) < 1e-11


def test_dissipative_ground_state_is_fixed_point():
    res = run_dissipative(ScenarioConfig(scenario="dissipative", p=0.0, c=0.0,
                                         nbar=0.0, steps=400))
    for name in ("Q_new", "W_new", "Q_alicki", "W_alicki"):
        assert np.max(np.abs(res.ledger.column(name))) < 1e-14
    u = res.ledger.column("U")
    assert np.max(np.abs(u - u[0])) < 1e-14


def test_dissipative_diagonal_state_has_no_work():
    # diagonal initial state: eigenprojectors never move, so W = 0 and
    # Q equals the energy change, dQ = (omega0/2) dz
    res = run_dissipative(ScenarioConfig(scenario="dissipative", p=0.8, c=0.0,
                                         nbar=0.0, t_max=3.0, steps=600))
    q = res.ledger.column("Q_new")
    u = res.ledger.column("U")
    assert np.max(np.abs(res.ledger.column("W_new"))) < 1e-12
    assert np.max(np.abs(q - (u - u[0]))) < 1e-12
    assert q[-1] < 0.0
    taus = res.times
    z = 2.0 * (0.8 * np.exp(-taus)) - 1.0 + 2.0 * 0.0  # rho_ee(t) = 0.8 e^{-t}
    oracle = 0.5 * (z - z[0])
    assert np.max(np.abs(q - oracle)) < 1e-12


def test_dissipative_crosscheck_runs_and_records():
    res = run_dissipative(ScenarioConfig(scenario="dissipative", steps=500,
                                         crosscheck=True))
    assert res.summary["qubit.rk4_max_dev"] < 1e-10


def test_dissipative_crosscheck_tolerance_override():
    tight = Tolerances(crosscheck=1e-18)
    with pytest.raises(CrossCheckError):
        run_dissipative(ScenarioConfig(scenario="dissipative", steps=500,
                                       crosscheck=True, tolerances=tight))


def test_dissipative_lab_frame_entropy_invariant():
    res_int = run_dissipative(ScenarioConfig(scenario="dissipative", steps=400))
    res_lab = run_dissipative(ScenarioConfig(scenario="dissipative", steps=400,
                                             frame="lab"))
    assert np.max(np.abs(res_int.ledger.column("S") - res_lab.ledger.column("S"))) < 1e-11
    assert np.max(np.abs(res_int.ledger.column("U") - res_lab.ledger.column("U"))) < 1e-12


def test_fmt12_rendering():
    assert fmt12(0.0) == "0.000000000000"
    assert fmt12(-0.0) == "0.000000000000"
    assert fmt12(math.log(2.0)) == "0.693147180560"
    assert fmt12(0.5) == "0.500000000000"
    assert fmt12(math.pi) == "3.14159265359"
    assert fmt12(1.5e-7) == "1.50000000000e-07"


def test_emit_series_csv_layout(tmp_path):
    cfg = ScenarioConfig(scenario="two-qubit", steps=2000, out=str(tmp_path / "run"))
    res = run_two_qubit(cfg)
    written = emit_series(res.ledger_a, cfg, tmp_path / "run")
    text = written["csv"].read_text(encoding="utf-8")
    assert text.endswith("\n")
    lines = text.splitlines()
    assert lines[0].startswith("# ")
    assert "energy_unit=hbar*omega0" in lines[0]
    assert lines[1] == CSV_HEADER
    assert len(lines) == 2 + 2001

    # cumulative columns of the first row are exactly zero
    first = lines[2].split(",")
    for idx in (5, 6, 7, 8, 9, 10, 11, 12):
        assert first[idx] == "0.000000000000"

    # gt = pi/4 lands on sample 500: populations 1/2, entropy ln 2
    row = lines[2 + 500].split(",")
    assert row[1] == "0.500000000000"
    assert row[2] == "0.500000000000"
    assert row[4] == "0.693147180560"


def test_csv_round_trip_is_stable(tmp_path):
    cfg = ScenarioConfig(scenario="two-qubit", steps=300)
    res = run_two_qubit(cfg)
    written = emit_series(res.ledger_a, cfg, tmp_path / "run")
    lines = written["csv"].read_text().splitlines()[2:]
    for line in lines[::7]:
        for cell in line.split(","):
            assert fmt12(float(cell)) == cell


def test_emit_is_deterministic(tmp_path):
    cfg = ScenarioConfig(scenario="dissipative", steps=800, format="both")
    blobs = []
    for name in ("a", "b"):
        res = run_dissipative(cfg)
        written = emit_series(res.ledger, cfg, tmp_path / name)
        blobs.append((written["csv"].read_bytes(), written["json"].read_bytes()))
    assert blobs[0][0] == blobs[1][0]
    assert blobs[0][1] == blobs[1][1]


def test_json_mirror_fields(tmp_path):
    cfg = ScenarioConfig(scenario="dissipative", steps=50, format="json")
    res = run_dissipative(cfg)
    written = emit_series(res.ledger, cfg, tmp_path / "run")
    payload = json.loads(written["json"].read_text())
    assert payload["columns"] == CSV_HEADER.split(",")
    assert set(payload["series"]) == set(CSV_HEADER.split(","))
    assert len(payload["series"]["t"]) == 51
    assert payload["series"]["Q_new"][0] == 0.0


def test_heat_rises_before_it_decreases(tmp_path):
    # vacuum run: a positive heat row appears before the first decrease
    cfg = ScenarioConfig(scenario="dissipative", steps=2000)
    res = run_dissipative(cfg)
    written = emit_series(res.ledger, cfg, tmp_path / "fig")
    lines = written["csv"].read_text().splitlines()[2:]
    q = [float(line.split(",")[7]) for line in lines]
    first_decrease = next(i for i in range(1, len(q)) if q[i] < q[i - 1])
    assert any(value > 0.0 for value in q[1:first_decrease])


def test_emit_run_writes_all_outputs(tmp_path):
    cfg = ScenarioConfig(scenario="two-qubit", steps=100, format="both",
                         out=str(tmp_path / "pair"))
    res = run_two_qubit(cfg)
    paths = emit_run(res, cfg, tmp_path / "pair")
    names = sorted(p.name for p in paths)
    assert names == ["pair.csv", "pair.json", "pair.summary.txt",
                     "pair_B.csv", "pair_B.json"]
    summary = (tmp_path / "pair.summary.txt").read_text()
    assert "flag.subsystem_B_catalyst = true" in summary
    assert "A.S_max = 0.693147180560" in summary
