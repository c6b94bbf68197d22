"""Deterministic (mean-field) dynamics: analytic checks and ODE invariants."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from marittx.propagation import (
    Compartment,
    CompartmentState,
    Mode,
    PropagationParams,
    SimulationError,
    build_topology,
    force_of_infection,
    mean_field_step,
    simulate,
)
from marittx.propagation import kernels


def single_node():
    return build_topology([{"id": "n"}], [])


def pure_state(n, compartment=Compartment.S):
    return CompartmentState.uniform(n, compartment, Mode.MEAN_FIELD)


def test_all_rates_zero_is_identity():
    topo = single_node()
    state = pure_state(1)
    out = mean_field_step(state, PropagationParams(kappa_e=0.0), topo, 0.5)
    assert np.array_equal(out.occupancy, state.occupancy)
    assert out.time == 0.5


def test_single_step_matches_exponential_decay(backend):
    # S -> R at rate eta = 1: closed form p_S(t) = e^{-t}. Runs per backend.
    topo = single_node()
    out = mean_field_step(pure_state(1), PropagationParams(eta=1.0), topo, 0.1)
    assert out.occupancy[0, 0] == pytest.approx(math.exp(-0.1), abs=1e-6)
    assert out.occupancy[0, 2] == pytest.approx(1 - math.exp(-0.1), abs=1e-6)


def test_conservation_forced():
    topo = build_topology(
        [{"id": "a"}, {"id": "b"}], [("a", "b", 1.0)]
    )
    state = CompartmentState.mean_field([[0.5, 0.5, 0, 0, 0, 0], [1, 0, 0, 0, 0, 0]])
    params = PropagationParams(beta=0.7, kappa_e=0.5, sigma=0.4, upsilon=0.2, rho=0.1)
    for _ in range(50):
        state = mean_field_step(state, params, topo, 0.05)
        assert np.abs(state.occupancy.sum(axis=1) - 1.0).max() <= 1e-9


def test_dt_must_be_positive():
    with pytest.raises(SimulationError, match="dt must be > 0"):
        mean_field_step(pure_state(1), PropagationParams(), single_node(), 0.0)


def test_blowup_rejected_with_diagnostic():
    # eta*dt far beyond the RK4 stability region drives occupancy negative.
    topo = single_node()
    with pytest.raises(SimulationError, match="reduce dt"):
        mean_field_step(pure_state(1), PropagationParams(eta=100.0), topo, 1.0)


def test_force_of_infection_isolated_node_zero():
    state = pure_state(1)
    assert force_of_infection("n", state, PropagationParams(beta=5.0), single_node()) == 0.0


def test_force_of_infection_examples():
    topo = build_topology([{"id": "a"}, {"id": "b"}], [("a", "b", 1.0)])
    state = CompartmentState.mean_field([[1, 0, 0, 0, 0, 0], [0, 0, 0, 1, 0, 0]])
    assert force_of_infection(
        "a", state, PropagationParams(beta=0.3, kappa_e=0.0), topo
    ) == pytest.approx(0.3)

    topo2 = build_topology([{"id": "a"}, {"id": "b"}], [("a", "b", 2.0)])
    state2 = CompartmentState.mean_field([[1, 0, 0, 0, 0, 0], [0, 1, 0, 0, 0, 0]])
    assert force_of_infection(
        "a", state2, PropagationParams(beta=0.3, kappa_e=0.5), topo2
    ) == pytest.approx(0.3)


def test_force_of_infection_unknown_node():
    from marittx.propagation import TopologyError

    with pytest.raises(TopologyError):
        force_of_infection("ghost", pure_state(1), PropagationParams(), single_node())


def _demo_topology():
    return build_topology(
        [{"id": "a"}, {"id": "b"}, {"id": "c"}],
        [("a", "b", 1.0), ("b", "c", 0.6)],
    )


def _demo_params(**overrides):
    base = dict(beta=0.8, kappa_e=0.5, sigma=0.6, alpha=0.1, upsilon=0.3, rho=0.2,
                xi=0.1, gamma=0.2, nu=0.05, eta=0.1, omega=0.05)
    base.update(overrides)
    return PropagationParams(**base)


def _demo_initial():
    occ = np.zeros((3, 6))
    occ[0, 1] = 1.0  # a exposed
    occ[1, 0] = 1.0
    occ[2, 0] = 1.0
    return CompartmentState.mean_field(occ)


def test_susceptible_mass_monotone_without_reflows():
    params = _demo_params(eta=0.0, omega=0.0, nu=0.0)
    traj = simulate(_demo_topology(), params, horizon=10.0, mode=Mode.MEAN_FIELD,
                    initial_state=_demo_initial(), dt=0.05, record_raw=True)
    s_mass = [state.occupancy[:, 0].sum() for state in traj.raw_states]
    assert all(b - a <= 1e-9 for a, b in zip(s_mass, s_mass[1:]))


def test_destroyed_mass_absorbing_without_rebuild():
    params = _demo_params(nu=0.0)
    traj = simulate(_demo_topology(), params, horizon=10.0, mode=Mode.MEAN_FIELD,
                    initial_state=_demo_initial(), dt=0.05, record_raw=True)
    x_mass = [state.occupancy[:, 5].sum() for state in traj.raw_states]
    assert all(b - a >= -1e-12 for a, b in zip(x_mass, x_mass[1:]))


def test_decoupling_with_zero_transmission():
    # beta = 0: every node must evolve exactly like an isolated single node.
    params = _demo_params(beta=0.0)
    coupled = simulate(_demo_topology(), params, horizon=5.0, mode=Mode.MEAN_FIELD,
                       initial_state=_demo_initial(), dt=0.05, record_raw=True)
    for node_index, compartment in ((0, Compartment.E), (1, Compartment.S), (2, Compartment.S)):
        isolated = simulate(
            single_node(), params, horizon=5.0, mode=Mode.MEAN_FIELD,
            initial_state=pure_state(1, compartment), dt=0.05, record_raw=True,
        )
        for got, want in zip(coupled.raw_states, isolated.raw_states):
            assert np.abs(got.occupancy[node_index] - want.occupancy[0]).max() <= 1e-9


def test_fourth_order_convergence():
    topo = _demo_topology()
    params = _demo_params()
    initial = _demo_initial()

    def final_occ(dt):
        traj = simulate(topo, params, horizon=2.0, mode=Mode.MEAN_FIELD,
                        initial_state=initial, dt=dt)
        return traj.final_state.occupancy

    reference = final_occ(0.1 / 16)
    err_coarse = np.abs(final_occ(0.1) - reference).max()
    err_fine = np.abs(final_occ(0.05) - reference).max()
    observed_order = math.log2(err_coarse / err_fine)
    assert observed_order >= 3.5


def test_meanfield_determinism():
    topo = _demo_topology()
    params = _demo_params()
    t1 = simulate(topo, params, horizon=3.0, mode=Mode.MEAN_FIELD,
                  initial_state=_demo_initial(), record_raw=True)
    t2 = simulate(topo, params, horizon=3.0, mode=Mode.MEAN_FIELD,
                  initial_state=_demo_initial(), record_raw=True)
    for a, b in zip(t1.raw_states, t2.raw_states):
        assert np.array_equal(a.occupancy, b.occupancy)
    assert t1.samples == t2.samples


def test_backends_agree_closely():
    # Per-backend runs are exact; across backends only tight agreement is claimed.
    results = {}
    previous = kernels.active_backend()
    try:
        for name in ("numba", "numpy"):
            try:
                kernels.set_backend(name)
            except kernels.KernelBackendError:
                continue
            traj = simulate(_demo_topology(), _demo_params(), horizon=2.0,
                            mode=Mode.MEAN_FIELD, initial_state=_demo_initial(), dt=0.05)
            results[name] = traj.final_state.occupancy
    finally:
        kernels.set_backend(previous)
    if len(results) < 2:
        pytest.skip("only one backend available")
    assert np.allclose(results["numba"], results["numpy"], rtol=0, atol=1e-10)


_rate = st.floats(min_value=0.0, max_value=2.0, allow_nan=False)


@settings(max_examples=25, deadline=None)
@given(
    beta=_rate, sigma=_rate, alpha=_rate, upsilon=_rate, rho=_rate,
    xi=_rate, gamma=_rate, nu=_rate, eta=_rate, omega=_rate,
    kappa=st.floats(min_value=0.0, max_value=1.0),
    steps=st.integers(min_value=1, max_value=40),
)
def test_conservation_and_nonnegativity_property(beta, sigma, alpha, upsilon, rho,
                                                 xi, gamma, nu, eta, omega, kappa, steps):
    topo = build_topology(
        [{"id": "a"}, {"id": "b"}, {"id": "c"}],
        [("a", "b", 1.0), ("b", "c", 0.5), ("a", "c", 0.25)],
    )
    params = PropagationParams(beta=beta, kappa_e=kappa, sigma=sigma, alpha=alpha,
                               upsilon=upsilon, rho=rho, xi=xi, gamma=gamma, nu=nu,
                               eta=eta, omega=omega)
    occ = np.zeros((3, 6))
    occ[0, 1] = 1.0
    occ[1, 0] = 1.0
    occ[2, 3] = 1.0
    state = CompartmentState.mean_field(occ)
    for _ in range(steps):
        state = mean_field_step(state, params, topo, 0.02)
        assert state.occupancy.min() >= 0.0
        assert np.abs(state.occupancy.sum(axis=1) - 1.0).max() <= 1e-9
