import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from iontrap_ut.dynamics import InitialStateSpec, TimeSeries, observables, prepare_initial, timeseries_from_states
from iontrap_ut.fockspace import Truncation
from iontrap_ut.model import DetuningError, SpinFockState, SystemParams
from iontrap_ut.oracle import compare_timeseries, direct_propagate, rwa_jcm_evolve


def test_direct_t0(standard):
    p, tr = standard
    psi = prepare_initial(InitialStateSpec.paper(p), tr)
    np.testing.assert_allclose(direct_propagate(p, psi, [0.0])[0], psi.amplitudes, atol=1e-14)


def test_direct_eta0_rabi():
    p = SystemParams(0.0, 1.0, 0.5)
    t = np.linspace(0, 30, 301)
    states = direct_propagate(p, SpinFockState.basis("e", 0, Truncation(8)), t)
    assert np.max(np.abs(observables(states)["p_excited"] - np.cos(0.5 * t) ** 2)) <= 1e-10
    assert np.max(np.abs(np.linalg.norm(states, axis=1) - 1)) <= 1e-12


def test_direct_accepts_detuning():
    p = SystemParams(0.0, 1.0, 0.5, delta=0.4)
    t = np.linspace(0, 10, 50)
    states = direct_propagate(p, SpinFockState.basis("e", 0, Truncation(6)), t)
    # detuned two-level Rabi formula
    W = math.sqrt(0.5**2 + 0.2**2)
    pe = 1 - (0.5 / W) ** 2 * np.sin(W * t) ** 2
    assert np.max(np.abs(observables(states)["p_excited"] - pe)) <= 1e-10


def test_direct_truncation_convergence():
    p = SystemParams(0.2, 1.0, 0.5)
    t = np.linspace(0, 50, 100)
    spec = InitialStateSpec.paper(p)
    a = direct_propagate(p, prepare_initial(spec, Truncation(60)), t)
    b = direct_propagate(p, prepare_initial(spec, Truncation(70)), t)
    pad = np.zeros((len(t), 140), dtype=complex)
    pad[:, :60], pad[:, 70:130] = a[:, :60], a[:, 60:]
    assert np.max(np.abs(pad - b)) <= 1e-8


@settings(max_examples=10, deadline=None)
@given(st.floats(0.0, 20.0), st.floats(0.0, 20.0))
def test_direct_group_property(t1, t2):
    p = SystemParams(0.3, 1.0, 0.6)
    psi = prepare_initial(InitialStateSpec.paper(p), Truncation(30))
    mid = direct_propagate(p, psi, [t1])[0]
    two_step = direct_propagate(p, mid, [t2])[0]
    one_step = direct_propagate(p, psi, [t1 + t2])[0]
    assert np.max(np.abs(two_step - one_step)) <= 1e-10


def test_rwa_eta0_populations_constant():
    p = SystemParams(0.0, 1.0, 0.5)
    rng = np.random.default_rng(3)
    v = rng.normal(size=20) + 1j * rng.normal(size=20)
    states = rwa_jcm_evolve(p, v / np.linalg.norm(v), np.linspace(0, 10, 40))
    pops = np.abs(states) ** 2
    assert np.max(np.ptp(pops, axis=0)) <= 1e-12


def test_rwa_vacuum_rabi():
    p = SystemParams(0.1, 1.0, 0.5)
    t = np.linspace(0, 100, 500)
    states = rwa_jcm_evolve(p, SpinFockState.basis("e", 0, Truncation(10)), t)
    assert np.max(np.abs(observables(states)["p_excited"] - np.cos(p.lam * t) ** 2)) <= 1e-12


def test_rwa_detuned_block_matches_matrix_exponential():
    # independent check of the closed-form 2x2 propagator against numpy eigh
    p = SystemParams(0.3, 1.0, 0.7)
    n = 2
    H = np.array([[p.nu * n + p.omega, 1j * p.lam * math.sqrt(n + 1)],
                  [-1j * p.lam * math.sqrt(n + 1), p.nu * (n + 1) - p.omega]])
    w, V = np.linalg.eigh(H)
    t = 3.7
    exact = (V * np.exp(-1j * w * t)) @ V.conj().T @ np.array([0.6, 0.8j])
    psi0 = np.zeros(12, dtype=complex)
    psi0[n], psi0[6 + n + 1] = 0.6, 0.8j
    out = rwa_jcm_evolve(p, psi0, [t])[0]
    np.testing.assert_allclose([out[n], out[6 + n + 1]], exact, atol=1e-13)


@settings(max_examples=20, deadline=None)
@given(st.floats(0.0, 1.0), st.floats(0.0, 1.0), st.floats(0.0, 50.0))
def test_rwa_block_conservation(eta, omega, t):
    p = SystemParams(eta, 1.0, omega)
    N = 8
    rng = np.random.default_rng(0)
    v = rng.normal(size=2 * N) + 1j * rng.normal(size=2 * N)
    v /= np.linalg.norm(v)
    out = rwa_jcm_evolve(p, v, [0.0, t])
    for n in range(N - 1):
        block = [n, N + n + 1]
        assert abs(np.sum(np.abs(out[1, block]) ** 2) - np.sum(np.abs(v[block]) ** 2)) <= 1e-12


def test_rwa_rejects_detuning():
    with pytest.raises(DetuningError):
        rwa_jcm_evolve(SystemParams(0.1, 1.0, 0.5, delta=0.1), np.zeros(8), [0.0])


def test_compare_identical_and_perturbed():
    tr = Truncation(6)
    t = np.linspace(0, 1, 5)
    states = direct_propagate(SystemParams(0.1, 1.0, 0.5), SpinFockState.basis("e", 0, tr), t)
    rep = compare_timeseries(states, states)
    assert rep.max_state_deviation == 0 and rep.max_observable_deviation == 0
    assert len(rep.per_time_deviations) == 5

    ts = timeseries_from_states(t, states)
    bumped = TimeSeries(ts.times, ts.p_excited.copy(), ts.inversion, ts.mean_n, ts.norm_defect)
    bumped.p_excited[2] += 1e-3
    rep = compare_timeseries(ts, bumped)
    assert rep.max_observable_deviation == pytest.approx(1e-3, rel=1e-9)
    assert math.isnan(rep.max_state_deviation)

    moved = states.copy()
    moved[3, 0] += 1e-3
    assert compare_timeseries(states, moved).max_state_deviation == pytest.approx(1e-3, rel=1e-9)


def test_compare_grid_mismatch():
    a = np.zeros((4, 6), dtype=complex)
    a[:, 0] = 1
    with pytest.raises(ValueError):
        compare_timeseries(a, a[:3])
    ts = timeseries_from_states(np.arange(4.0), a)
    other = timeseries_from_states(np.arange(4.0) + 1, a)
    with pytest.raises(ValueError, match="time grids"):
        compare_timeseries(ts, other)
