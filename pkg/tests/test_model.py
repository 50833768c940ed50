import math

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import maxabs
from iontrap_ut.fockspace import Truncation, hermiticity_defect, ladder_operators, parity, quadratures
from iontrap_ut.model import (
    DetuningError,
    SpinFockState,
    SystemParams,
    atomic_transforms,
    build_diagonalizable,
    build_ion_hamiltonian,
    build_linearized,
    build_resonant,
    build_T,
    conjugate,
    full_chain,
    guard_indices,
)

# ground eigenvalue of the N=40 ion Hamiltonian (eta=0.2, nu=1, omega=0.5), from an
# independent script: entrywise X, scipy.linalg.expm for exp(i eta X), eigvalsh
GROUND_N40 = -0.4950125312494106

params = st.builds(
    SystemParams,
    eta=st.floats(0.0, 1.0),
    nu=st.floats(0.5, 2.0),
    omega=st.floats(0.0, 1.5),
)


def test_params_validation():
    with pytest.raises(ValueError, match="eta"):
        SystemParams(-0.1, 1.0, 0.5)
    with pytest.raises(ValueError, match="nu"):
        SystemParams(0.1, 0.0, 0.5)
    with pytest.raises(ValueError, match="omega"):
        SystemParams(0.1, 1.0, -0.5)


def test_derived_parameters():
    p = SystemParams(0.2, 1.0, 0.5)
    assert p.lam == pytest.approx(0.1)
    assert p.beta == -0.1j
    assert p.energy_shift == pytest.approx(0.01)


def test_state_ordering():
    tr = Truncation(4)
    assert SpinFockState.basis("e", 2, tr).amplitudes[2] == 1
    assert SpinFockState.basis("g", 0, tr).amplitudes[4] == 1
    with pytest.raises(ValueError):
        SpinFockState(np.zeros(7), tr)


def test_ion_hamiltonian_eta0():
    p = SystemParams(0.0, 1.0, 0.5)
    tr = Truncation(2)
    H = build_ion_hamiltonian(p, tr)
    np.testing.assert_array_equal(H[:2, 2:], 0.5 * np.eye(2))
    np.testing.assert_allclose(np.linalg.eigvalsh(H), [-0.5, 0.5, 0.5, 1.5], atol=1e-15)


def test_ion_hamiltonian_hermitian(standard):
    p, tr = standard
    H = build_ion_hamiltonian(p, tr)
    assert hermiticity_defect(H, guard_indices(p, tr)) <= 1e-12


def test_ion_hamiltonian_ground_against_expm(standard):
    p, tr = standard
    N = tr.dim
    X = np.zeros((N, N))
    for n in range(N - 1):
        X[n, n + 1] = X[n + 1, n] = math.sqrt(n + 1)
    K = scipy.linalg.expm(1j * p.eta * X)
    H = build_ion_hamiltonian(p, tr)
    assert maxabs(H[:N, N:] - p.omega * K) <= 1e-12
    assert np.linalg.eigvalsh(H)[0] == pytest.approx(GROUND_N40, abs=1e-10)


def test_ion_hamiltonian_detuning_diagonal():
    p = SystemParams(0.1, 1.0, 0.5, delta=0.3)
    tr = Truncation(5)
    H = build_ion_hamiltonian(p, tr)
    assert H[0, 0] == pytest.approx(0.15)
    assert H[5, 5] == pytest.approx(-0.15)


def test_T_eta0():
    T = build_T(SystemParams(0.0, 1.0, 0.5), Truncation(3))
    I = np.eye(3)
    np.testing.assert_allclose(T, np.block([[I, -I], [I, I]]) / math.sqrt(2), atol=0)


@settings(max_examples=20, deadline=None)
@given(params)
def test_chain_unitarity(p):
    tr = Truncation(40)
    keep = guard_indices(p, tr)
    for U in (build_T(p, tr), full_chain(p, tr)):
        assert maxabs(U.conj().T @ U - np.eye(80), keep) <= 1e-10


def test_linearized_equals_conjugated(standard):
    p, tr = standard
    lin = conjugate(build_ion_hamiltonian(p, tr), build_T(p, tr))
    assert maxabs(lin - build_linearized(p, tr), guard_indices(p, tr)) <= 1e-8


def test_linearized_eta0():
    p = SystemParams(0.0, 1.0, 0.5)
    tr = Truncation(6)
    L = build_linearized(p, tr)
    n = np.diag(np.arange(6))
    np.testing.assert_array_equal(L[:6, :6], n + 0.5 * np.eye(6))
    np.testing.assert_array_equal(L[6:, 6:], n - 0.5 * np.eye(6))
    assert not L[:6, 6:].any()


def test_linearized_offdiagonal_hermitian(standard):
    p, tr = standard
    off = build_linearized(p, tr)[:40, 40:]
    assert maxabs(off - off.conj().T) == 0.0


def test_transformed_builders_reject_detuning():
    p = SystemParams(0.2, 1.0, 0.5, delta=0.1)
    tr = Truncation(10)
    for builder in (build_linearized, build_resonant, build_diagonalizable):
        with pytest.raises(DetuningError, match="out-of-scope detuning"):
            builder(p, tr)


def test_resonant_scalar_shift():
    p = SystemParams(0.2, 1.0, 0.5)
    tr = Truncation(20)
    diff = build_linearized(p, tr) - build_resonant(p, tr)
    np.testing.assert_allclose(diff, 0.01 * np.eye(40), rtol=0, atol=1e-14)
    ev_l = np.linalg.eigvalsh(build_linearized(p, tr))
    ev_r = np.linalg.eigvalsh(build_resonant(p, tr))
    assert np.max(np.abs(ev_l - ev_r - p.energy_shift)) <= 1e-12


def test_resonant_eta0_spectrum():
    p = SystemParams(0.0, 1.0, 0.5)
    ev = np.linalg.eigvalsh(build_resonant(p, Truncation(5)))
    expected = np.sort([n + s * 0.5 for n in range(5) for s in (1, -1)])
    np.testing.assert_allclose(ev, expected, atol=1e-15)


def test_atomic_transforms():
    tr = Truncation(3)
    T1, T2 = atomic_transforms(tr)
    np.testing.assert_allclose(T1.conj().T @ T1, np.eye(6), atol=1e-15)
    np.testing.assert_array_equal(T2 @ T2, np.eye(6))
    np.testing.assert_array_equal(T2, T2.conj().T)
    np.testing.assert_array_equal(T2[:3, :3], np.diag([1, -1, 1]))


def test_conjugate_identity_and_errors():
    H = np.arange(16.0).reshape(4, 4)
    np.testing.assert_array_equal(conjugate(H, np.eye(4)), H)
    with pytest.raises(ValueError, match="dimension mismatch"):
        conjugate(H, np.eye(3))


@settings(max_examples=20, deadline=None)
@given(params)
def test_conjugation_preserves_hermiticity(p):
    tr = Truncation(20)
    H = build_resonant(p, tr)
    out = conjugate(H, full_chain(p, tr))
    assert hermiticity_defect(out) <= max(10 * hermiticity_defect(H), 1e-13 * (1 + np.abs(H).max()))


def _printed_forms(p, tr):
    _, _, n = ladder_operators(tr)
    _, Y = quadratures(tr)
    P = parity(tr)
    I = np.eye(tr.dim)
    A = p.nu * n + 1j * p.lam * Y
    B = p.nu * n - 1j * p.lam * Y
    after_T1 = np.block([[B, p.omega * I], [p.omega * I, A]])
    after_T2 = np.block([[A, p.omega * P], [p.omega * P, A]])
    return after_T1, after_T2


@settings(max_examples=20, deadline=None)
@given(params, st.integers(4, 30))
def test_intermediate_steps_exact(p, N):
    tr = Truncation(N)
    T1, T2 = atomic_transforms(tr)
    after_T1, after_T2 = _printed_forms(p, tr)
    s1 = conjugate(build_resonant(p, tr), T1)
    s2 = conjugate(s1, T2)
    s3 = conjugate(s2, T1)
    assert maxabs(s1 - after_T1) <= 1e-12
    assert maxabs(s2 - after_T2) <= 1e-12
    assert maxabs(s3 - build_diagonalizable(p, tr)) <= 1e-12


def _chain_deviation(p, tr):
    U = full_chain(p, tr)
    chained = conjugate(build_ion_hamiltonian(p, tr), U) - p.energy_shift * np.eye(tr.spin_dim)
    return maxabs(chained - build_diagonalizable(p, tr), guard_indices(p, tr))


@settings(max_examples=15, deadline=None)
@given(st.builds(SystemParams, eta=st.floats(0.0, 0.5), nu=st.floats(0.5, 2.0), omega=st.floats(0.0, 1.5)))
def test_closed_form_vs_full_conjugation(p):
    assert _chain_deviation(p, Truncation(40)) <= 1e-8


def test_closed_form_vs_full_conjugation_large_eta():
    # the N/4 guard cap is too small for eta = 1 at N = 40; N = 80 is enough
    assert _chain_deviation(SystemParams(1.0, 1.0, 0.7), Truncation(80)) <= 1e-8


def test_diagonalizable_structure():
    tr = Truncation(8)
    D0 = build_diagonalizable(SystemParams(0.0, 1.0, 0.5), tr)
    n = np.arange(8)
    np.testing.assert_array_equal(np.diag(D0)[:8], n - 0.5 * (-1.0) ** n)
    D = build_diagonalizable(SystemParams(0.3, 1.0, 0.5), tr)
    assert not D[:8, 8:].any() and not D[8:, :8].any()
    assert hermiticity_defect(D) == 0.0


def test_spectrum_preserved_by_chain():
    p = SystemParams(0.2, 1.0, 0.5)
    tr = Truncation(40)
    a = np.linalg.eigvalsh(build_resonant(p, tr))
    b = np.linalg.eigvalsh(build_diagonalizable(p, tr))
    assert np.max(np.abs(a - b)) <= 1e-8
