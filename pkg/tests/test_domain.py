import math

import pytest

from hymac.domain import (
    ClassConfig,
    ConfigError,
    PopulationState,
    Scenario,
    TimingConstants,
    dump_scenario,
    load_scenario,
    scenario_from_dict,
    scenario_to_dict,
    slot_durations,
    timing_from_dict,
)


def test_default_slot_durations(tc):
    d_idle, d_coll, d_succ = slot_durations(tc)
    assert d_idle == 10.0
    # Tran-REQ + BIFS
    assert d_coll == pytest.approx(22.2 + 7.5)
    # Tran-REQ + SIFS + ACK + BIFS
    assert d_succ == pytest.approx(22.2 + 2.5 + 7.5 + 7.5)


def test_default_constants_units(tc):
    assert tc.t_frame_us == 1_000_000.0
    assert tc.t_r_us == 2_000.0
    assert (tc.p_tx_w, tc.p_rx_w, tc.p_idle_w) == (1.5, 1.0, 0.5)


def test_timing_validation():
    with pytest.raises(ConfigError):
        TimingConstants(t_r_us=-1.0)
    with pytest.raises(ConfigError):
        TimingConstants(t_frame_us=1.0)  # data slot no longer fits


def test_class_config_validation():
    with pytest.raises(ConfigError):
        ClassConfig(class_sizes=(), p_inl=0.1, alpha=1.0, arrival_rate=1.0)
    with pytest.raises(ConfigError):
        ClassConfig(class_sizes=(10,), p_inl=0.0, alpha=1.0, arrival_rate=1.0)
    with pytest.raises(ConfigError):
        ClassConfig(class_sizes=(10,), p_inl=0.1, alpha=0.0, arrival_rate=1.0)
    with pytest.raises(ConfigError):
        ClassConfig(class_sizes=(10,), p_inl=0.1, alpha=1.0, arrival_rate=-2.0)


def test_arrival_probability(tc):
    cfg = ClassConfig(class_sizes=(10,), p_inl=0.1, alpha=1.0, arrival_rate=1.0)
    assert cfg.arrival_probability(tc) == pytest.approx(1.0 - math.exp(-1.0))
    idle = ClassConfig(class_sizes=(10,), p_inl=0.1, alpha=1.0, arrival_rate=0.0)
    assert idle.arrival_probability(tc) == 0.0


def test_population_state_aggregation():
    pop = PopulationState(frame_index=0,
                          counts={(1, 0): 3.0, (2, 0): 2.0, (1, 1): 4.0, (3, 2): 1.0})
    # (2, 0) and (1, 1) share virtual class 1
    assert pop.virtual_counts == {0: 3.0, 1: 6.0, 4: 1.0}
    assert pop.theta == 4
    assert pop.total == pytest.approx(10.0)


def test_population_state_drops_zero_cells():
    pop = PopulationState(frame_index=0, counts={(1, 0): 0.0, (2, 1): 5.0})
    assert (1, 0) not in pop.counts
    with pytest.raises(ConfigError):
        PopulationState(frame_index=0, counts={(0, 0): 1.0})
    with pytest.raises(ConfigError):
        PopulationState(frame_index=0, counts={(1, 0): -1.0})


def test_timing_from_dict_units():
    tc = timing_from_dict({"t_frame": 500, "t_r": 1, "t_req": 20.0})
    assert tc.t_frame_us == 500_000.0
    assert tc.t_r_us == 1_000.0
    assert tc.t_req_us == 20.0
    with pytest.raises(ConfigError):
        timing_from_dict({"bogus": 1})


def test_scenario_roundtrip(tmp_path):
    sc = scenario_from_dict({
        "name": "rt",
        "classes": {"sizes": [100, 10, 10], "p_inl": 0.2, "alpha": 2.0},
        "arrival": {"lambda": 0.5},
        "protocol": {"variant": "all", "horizon": 50, "seeds": [1, 2, 3]},
        "sweep": {"alpha": [1.0, 2.0]},
    })
    path = tmp_path / "sc.yaml"
    dump_scenario(sc, path)
    back = load_scenario(path)
    assert scenario_to_dict(back) == scenario_to_dict(sc)


def test_scenario_validation():
    with pytest.raises(ConfigError):
        Scenario(name="x", timing=TimingConstants(),
                 classes=ClassConfig((1,), 0.1, 1.0, 1.0), variant="nope")
    with pytest.raises(ConfigError):
        Scenario(name="x", timing=TimingConstants(),
                 classes=ClassConfig((1,), 0.1, 1.0, 1.0), seeds=(1, 1))
