"""simulate(): delta timing, sampling, and determinism contracts."""

import numpy as np
import pytest

from marittx.propagation import (
    CompartmentState,
    Mode,
    PropagationParams,
    SimulationError,
    build_topology,
    force_of_infection,
    simulate,
)


def frozen_pair():
    topo = build_topology([{"id": "a"}, {"id": "b"}], [("a", "b", 1.0)])
    state = CompartmentState.mean_field([[1, 0, 0, 0, 0, 0], [0, 1, 0, 0, 0, 0]])
    return topo, state


def test_frozen_dynamics_all_snapshots_identical():
    topo, state = frozen_pair()
    traj = simulate(topo, PropagationParams(kappa_e=0.0), horizon=10.0,
                    mode=Mode.MEAN_FIELD, initial_state=state, dt=0.5)
    first = traj.samples[0]
    for snap in traj.samples[1:]:
        assert snap.histogram == first.histogram
        assert snap.service_availability == first.service_availability
        assert snap.cyber_risk == first.cyber_risk
    assert len(traj.samples) == 21


def test_delta_applied_exactly_once_at_boundary():
    # With kappa_e = 1 a frozen E neighbor gives lambda = beta; the beta delta
    # at t = 5 must double the late-half force of infection.
    topo, state = frozen_pair()
    params = PropagationParams(beta=0.2, kappa_e=1.0)
    traj = simulate(topo, params, timed_deltas=[(5.0, {"beta": {"mul": 2.0}})],
                    horizon=10.0, mode=Mode.MEAN_FIELD, initial_state=state,
                    dt=0.5, record_raw=True)
    assert force_of_infection("a", state, params, topo) == pytest.approx(0.2)
    # risk/availability unaffected by beta alone (dynamics frozen: no S->E flux
    # because b stays pure E, a stays pure S... a *does* get exposed; verify by
    # comparing drift rates before and after the boundary instead.
    occ = np.array([snapshot.histogram for snapshot in traj.samples])
    s_series = occ[:, 0] * 2  # node-a susceptible mass (node b has none)
    early = np.log(s_series[10] / s_series[0]) / 5.0
    late = np.log(s_series[20] / s_series[10]) / 5.0
    # RK4 tracks the exponential to ~1e-5 relative at these step sizes.
    assert late / early == pytest.approx(2.0, rel=1e-4)


def test_unsorted_deltas_rejected():
    topo, state = frozen_pair()
    with pytest.raises(SimulationError, match="sorted"):
        simulate(topo, PropagationParams(), timed_deltas=[(5.0, {}), (1.0, {})],
                 horizon=10.0, mode=Mode.MEAN_FIELD, initial_state=state)


def test_delta_outside_horizon_rejected():
    topo, state = frozen_pair()
    with pytest.raises(SimulationError, match="outside"):
        simulate(topo, PropagationParams(), timed_deltas=[(11.0, {})],
                 horizon=10.0, mode=Mode.MEAN_FIELD, initial_state=state)


def test_nonpositive_horizon_rejected():
    topo, state = frozen_pair()
    with pytest.raises(SimulationError, match="horizon"):
        simulate(topo, PropagationParams(), horizon=0.0, mode=Mode.MEAN_FIELD,
                 initial_state=state)


def test_sample_times_strictly_increasing_and_hit_boundaries():
    topo, state = frozen_pair()
    traj = simulate(topo, PropagationParams(beta=0.1), timed_deltas=[(3.14, {"beta": {"set": 0.0}})],
                    horizon=10.0, mode=Mode.MEAN_FIELD, initial_state=state, dt=0.5)
    times = [snap.time for snap in traj.samples]
    assert all(b > a for a, b in zip(times, times[1:]))
    assert any(abs(t - 3.14) < 1e-12 for t in times)  # boundary snapped
    assert times[-1] == pytest.approx(10.0, abs=0)


def test_sample_stride_thins_but_keeps_endpoints():
    topo, state = frozen_pair()
    traj = simulate(topo, PropagationParams(), horizon=1.0, mode=Mode.MEAN_FIELD,
                    initial_state=state, dt=0.1, sample_stride=4)
    times = [snap.time for snap in traj.samples]
    assert times[0] == 0.0
    assert times[-1] == pytest.approx(1.0)
    assert len(times) == 4  # steps 0, 4, 8, 10


def test_threat_level_delta_changes_risk_sampling():
    topo, state = frozen_pair()
    params = PropagationParams(kappa_e=0.0, threat_level=0.0)
    traj = simulate(topo, params, timed_deltas=[(5.0, {"threatLevel": {"set": 1.0}})],
                    horizon=10.0, mode=Mode.MEAN_FIELD, initial_state=state, dt=0.5)
    by_time = {snap.time: snap for snap in traj.samples}
    # Node b pure E: compromised fraction is 0.5 throughout (dynamics frozen).
    assert by_time[5.0].cyber_risk == pytest.approx(0.3)   # boundary state: pre-delta params
    assert by_time[5.5].cyber_risk == pytest.approx(0.3 + 0.4 * 0.5)
    assert by_time[10.0].cyber_risk == by_time[5.5].cyber_risk


def test_run_id_and_seed_recorded():
    topo = build_topology([{"id": "a"}], [])
    state = CompartmentState.agent([0])
    traj = simulate(topo, PropagationParams(eta=0.5), horizon=1.0, mode=Mode.AGENT,
                    seed=42, initial_state=state, run_id=3)
    assert traj.run_id == 3
    assert traj.seed == 42
    assert traj.mode is Mode.AGENT


def test_mode_state_mismatch_rejected():
    topo, mean_field_state = frozen_pair()
    with pytest.raises(SimulationError, match="does not match"):
        simulate(topo, PropagationParams(), horizon=1.0, mode=Mode.AGENT, seed=1,
                 initial_state=mean_field_state)
