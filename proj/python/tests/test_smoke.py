import math

import pytest

import fran


def small_config(n_faps=3, per_fap=2):
    cfg = fran.TopologyConfig()
    cfg.n_faps = n_faps
    cfg.n_fues_per_fap = per_fap
    cfg.n_macro_fues = 0
    return cfg


def test_topology_and_channel_shapes():
    topo = fran.generate_topology(small_config(), seed=7)
    assert len(topo.faps) == 3
    assert len(topo.fues) == 6
    for ap in topo.faps:
        x, y = ap.position
        assert 100.0 <= math.hypot(x, y) <= topo.mrrh_radius
    params = fran.ChannelParams()
    ch = fran.draw_channel(topo, params, seed=7)
    assert (ch.fue_count, ch.receiver_count, ch.subchannel_count) == (6, 4, 8)
    assert all(ch.gain(f, r, k) > 0 for f in range(6) for r in range(4) for k in range(8))


def test_same_seed_same_topology():
    a = fran.generate_topology(small_config(), seed=3)
    b = fran.generate_topology(small_config(), seed=3)
    assert [u.position for u in a.fues] == [u.position for u in b.fues]


def test_sinr_and_rate_by_hand():
    topo = fran.generate_topology(small_config(2, 1), seed=1)
    params = fran.ChannelParams()
    params.n_subchannels = 1
    params.noise_power = 1e-9
    params.bandwidth = 1.0
    ch = fran.ChannelRealization(2, 3, 1)
    for f in range(2):
        for rx in range(3):
            ch.set_gain(f, rx, 0, 1e-6 * (f + 1))
    alloc = fran.Allocation(topo, 1, fran.PowerGrid([0.1, 0.2]))
    alloc.assign(0, 0, 1)
    alloc.assign(1, 0, 0)
    expected = 0.2 * 1e-6 / (1e-9 + 0.1 * 2e-6)
    assert fran.sinr(0, 0, alloc, ch, params) == pytest.approx(expected, rel=1e-12)
    assert fran.rate(expected, params) == pytest.approx(math.log2(1 + expected), rel=1e-12)


def test_game_converges_to_verified_ne():
    topo = fran.generate_topology(small_config(), seed=11)
    params = fran.ChannelParams()
    ch = fran.draw_channel(topo, params, seed=12)
    u = fran.UtilityParams()
    grid = fran.PowerGrid.defaults()
    start = fran.assign_subchannels(topo, ch, u, params, grid)
    assert sorted(start.players()) == list(range(6))
    result = fran.iterate_to_ne(start, ch, u, params, topo)
    assert result.converged
    assert fran.verify_ne(result.allocation, ch, u, params, topo)
    assert result.total_net_utility == pytest.approx(sum(result.per_fue_utility.values()))
    baseline = fran.run_baseline("non_fran", topo, ch, params, u, grid)
    assert not baseline.converged
    with pytest.raises(ValueError):
        fran.run_baseline("bogus", topo, ch, params, u, grid)


def test_traces_and_overhead():
    for kind in ("fap_to_fap", "fap_to_mrrh", "mrrh_to_fap"):
        fran_cost = sum(fran.trace_overhead(kind, "fran"))
        legacy_cost = sum(fran.trace_overhead(kind, "non_fran"))
        assert fran_cost < legacy_cost
    assert sum(fran.trace_overhead("fap_to_mrrh", "fran")) == 86
    messages = fran.build_trace("fap_to_fap", "fran")
    assert messages and all(len(m) >= 2 for m in messages)
    assert not any("mme" in field for m in messages for field in m[1:])


def test_session_formulas():
    s = fran.SessionModel(arrival_rate=0.2, mean_holding_time=4.0, residence_rate=0.25)
    p = fran.scenario_probabilities(s)
    assert p.p_s2 == pytest.approx(0.25 / (0.25 + 0.25))
    assert p.expected_handovers_per_session == pytest.approx(1.0)
    costs = {"fap_to_fap": 10.0, "fap_to_mrrh": 20.0}
    mix = {"fap_to_fap": 0.5, "fap_to_mrrh": 0.5}
    assert fran.expected_overhead_rate(s, costs, mix) == pytest.approx(0.2 * 1.0 * 15.0)
    assert fran.fluid_flow_residence_rate(5.0, 50.0) == pytest.approx(2 * 5.0 / (math.pi * 50.0))
    assert fran.speed_gate(20.0, 10.0, "mrrh", "fap", "non_fran")
    assert not fran.speed_gate(20.0, 10.0, "mrrh", "fap", "fran")


def test_replication_invariants():
    cfg = fran.SimConfig()
    cfg.horizon = 2000.0
    cfg.snapshots = 0
    rec = fran.run_replication(cfg, 5)
    assert rec.causal
    assert rec.scenario1 + rec.scenario2 == rec.handovers
    assert rec.handovers + rec.gated == rec.crossings
    assert rec.fast_mrrh_to_fap == 0
    assert rec.overhead_rate == pytest.approx(rec.overhead() / cfg.horizon)


def test_experiment_rows_and_csv():
    cfg = fran.SimConfig()
    cfg.horizon = 500.0
    cfg.replications = 2
    rows = fran.run_experiment(cfg, "arrival_rate", [0.1, 0.2], "overhead")
    variants = {r["variant"] for r in rows}
    assert variants == {"fran", "non_fran"}
    assert all(r["n_reps"] == 2 for r in rows)
    text = fran.metrics_csv(rows)
    assert text.splitlines()[0] == "sweep_param,sweep_value,variant,metric,mean,std_err,n_reps"
    assert len(text.splitlines()) == len(rows) + 1


def test_config_parsing():
    cfg = fran.parse_config_text("[session]\narrival_rate = 0.3\n[topology]\nfap_min_distance = 50\n")
    assert cfg.session.arrival_rate == 0.3
    assert cfg.topology.fap_min_distance == 50
    with pytest.raises(fran.ConfigError):
        fran.parse_config_text("[session]\nno_such_key = 1\n")
    with pytest.raises(ValueError):
        fran.parse_config_text("[sim]\nhorizon = -1\n")
