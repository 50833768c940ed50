"""Time evolution through the diagonalizing frame.

Pipeline: physical initial state -> ``U^dag`` (primed frame) -> expansion in
branch eigenvectors -> phases ``exp(-i Lambda t)`` -> ``U`` back to the
physical frame. The primed-frame spectrum omits the constant ``nu eta^2 / 4``;
physical state vectors get it back as the global phase ``exp(-i nu eta^2 t / 4)``
so they can be compared directly with brute-force propagation.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .fockspace import Truncation, coherent_state
from .model import SpinFockState, SystemParams, build_T, full_chain
from .spectral import EigenPair, Eigensystem, solve_eigensystem

__all__ = [
    "TruncationWarning",
    "InitialStateSpec",
    "TimeSeries",
    "Expansion",
    "prepare_initial",
    "frame_transform",
    "linearized_frame",
    "expand_in_eigenbasis",
    "evolve",
    "observables",
    "timeseries_from_states",
    "run_evolution",
]

LEAKAGE_LIMIT = 1e-3


class TruncationWarning(UserWarning):
    pass


@dataclass(frozen=True)
class InitialStateSpec:
    """Product state ``(c_e |e> + c_g |g>) (x) |motional>``.

    ``motional`` is ``"coherent"`` (uses ``alpha``) or ``"fock"`` (uses ``n``).
    """

    motional: str = "coherent"
    alpha: complex = 0j
    n: int = 0
    c_e: complex = 1.0
    c_g: complex = 0.0

    def __post_init__(self):
        if self.motional not in ("coherent", "fock"):
            raise ValueError(f"motional must be 'coherent' or 'fock', got {self.motional!r}")
        if self.motional == "fock" and self.n < 0:
            raise ValueError(f"Fock index must be >= 0, got {self.n}")
        norm = abs(self.c_e) ** 2 + abs(self.c_g) ** 2
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"atomic amplitudes must satisfy |c_e|^2 + |c_g|^2 = 1, got {norm!r}")

    @classmethod
    def paper(cls, p: SystemParams) -> "InitialStateSpec":
        """``(1/sqrt2) |beta> (|g> - |e>)`` with ``beta = -i eta / 2``."""
        r = 1 / np.sqrt(2.0)
        return cls("coherent", alpha=p.beta, c_e=-r, c_g=r)


@dataclass
class TimeSeries:
    times: np.ndarray
    p_excited: np.ndarray
    inversion: np.ndarray
    mean_n: np.ndarray
    norm_defect: np.ndarray
    valid: bool = True
    leakage: float = 0.0
    states: np.ndarray | None = field(default=None, repr=False)


@dataclass(frozen=True)
class Expansion:
    """Coefficients ``A_l`` of a primed-frame state over converged eigenpairs."""

    coeffs: np.ndarray
    pairs: list[EigenPair] = field(repr=False)
    trunc: Truncation
    leakage: float


def prepare_initial(spec: InitialStateSpec, trunc: Truncation) -> SpinFockState:
    if spec.motional == "fock":
        if spec.n >= trunc.dim:
            raise ValueError(f"Fock index {spec.n} must be < N={trunc.dim}")
        motion = np.zeros(trunc.dim, dtype=complex)
        motion[spec.n] = 1.0
    else:
        motion = coherent_state(spec.alpha, trunc)
    return SpinFockState(np.concatenate([spec.c_e * motion, spec.c_g * motion]), trunc)


def _check_dim(state: SpinFockState, trunc: Truncation):
    if state.trunc.dim != trunc.dim:
        raise ValueError(f"dimension mismatch: state N={state.trunc.dim}, requested N={trunc.dim}")


def frame_transform(state: SpinFockState, p: SystemParams, trunc: Truncation, direction: str) -> SpinFockState:
    """``to_primed`` applies ``U^dag``, ``to_physical`` applies ``U = T T1 T2 T1``."""
    p.require_resonant()
    _check_dim(state, trunc)
    U = full_chain(p, trunc)
    if direction == "to_primed":
        return SpinFockState(U.conj().T @ state.amplitudes, trunc)
    if direction == "to_physical":
        return SpinFockState(U @ state.amplitudes, trunc)
    raise ValueError(f"direction must be 'to_primed' or 'to_physical', got {direction!r}")


def linearized_frame(states: np.ndarray, p: SystemParams, trunc: Truncation, inverse: bool = False) -> np.ndarray:
    """Map physical-frame amplitudes (rows) to the linearized frame, ``psi -> T^dag psi``.

    ``inverse=True`` maps back with ``T``.
    """
    T = build_T(p, trunc)
    M = T if inverse else T.conj().T
    return np.asarray(states) @ M.T


def expand_in_eigenbasis(state_primed: SpinFockState, eigensystem: Eigensystem) -> Expansion:
    """``A_l = <Psi_l | psi'>`` over converged pairs of both branches.

    ``leakage`` is ``|psi'|^2 - sum |A_l|^2``: weight the converged basis misses.
    """
    trunc = eigensystem.trunc
    _check_dim(state_primed, trunc)
    pairs = eigensystem.pairs(converged_only=True)
    A = np.empty(len(pairs), dtype=complex)
    for i, q in enumerate(pairs):
        part = state_primed.excited if q.branch.sign < 0 else state_primed.ground
        A[i] = np.vdot(q.coeffs, part)
    leakage = float(state_primed.norm**2 - np.sum(np.abs(A) ** 2))
    if abs(leakage) > LEAKAGE_LIMIT:
        warnings.warn(
            f"eigenbasis completeness defect {leakage:.3e} exceeds {LEAKAGE_LIMIT:g}; increase N",
            TruncationWarning,
            stacklevel=2,
        )
    return Expansion(A, pairs, trunc, leakage)


def _basis_matrix(pairs: list[EigenPair], trunc: Truncation) -> np.ndarray:
    N = trunc.dim
    V = np.zeros((2 * N, len(pairs)), dtype=complex)
    for i, q in enumerate(pairs):
        off = 0 if q.branch.sign < 0 else N
        V[off : off + N, i] = q.coeffs
    return V


def evolve(expansion: Expansion, t_grid) -> np.ndarray:
    """Primed-frame states ``sum_l A_l exp(-i Lambda_l t) |Psi_l>``, one row per time."""
    t = np.asarray(t_grid, dtype=float)
    V = _basis_matrix(expansion.pairs, expansion.trunc)
    lam = np.array([q.lambda_l for q in expansion.pairs])
    phases = np.exp(-1j * np.outer(t, lam)) * expansion.coeffs
    return phases @ V.T


def observables(state) -> dict:
    """Excited population, inversion, mean phonon number and phonon distribution."""
    if isinstance(state, SpinFockState):
        amps = state.amplitudes
    else:
        amps = np.asarray(state)
    N = amps.shape[-1] // 2
    pe_n = np.abs(amps[..., :N]) ** 2
    pg_n = np.abs(amps[..., N:]) ** 2
    norm2 = np.sum(pe_n + pg_n, axis=-1)
    p_excited = np.sum(pe_n, axis=-1) / norm2
    dist = (pe_n + pg_n) / norm2[..., None]
    return {
        "p_excited": p_excited,
        "inversion": 2.0 * p_excited - 1.0,
        "mean_n": dist @ np.arange(N),
        "phonon_distribution": dist,
    }


def timeseries_from_states(times, states: np.ndarray, **extra) -> TimeSeries:
    obs = observables(states)
    norm_defect = np.abs(np.linalg.norm(states, axis=-1) - 1.0)
    return TimeSeries(
        np.asarray(times, dtype=float),
        obs["p_excited"],
        obs["inversion"],
        obs["mean_n"],
        norm_defect,
        states=states,
        **extra,
    )


def run_evolution(
    p: SystemParams,
    spec: InitialStateSpec,
    trunc: Truncation,
    t_grid,
    eigensystem: Eigensystem | None = None,
) -> TimeSeries:
    """Physical-frame trajectory from the spectral pipeline.

    The returned series keeps the physical state vectors in ``states`` with the
    global phase ``exp(-i nu eta^2 t / 4)`` restored. ``valid`` is False when the
    eigenbasis misses more than ``1e-3`` of the initial state.
    """
    p.require_resonant()
    eigensystem = eigensystem or solve_eigensystem(p, trunc)
    psi0 = prepare_initial(spec, trunc)
    primed = frame_transform(psi0, p, trunc, "to_primed")
    expansion = expand_in_eigenbasis(primed, eigensystem)
    t = np.asarray(t_grid, dtype=float)
    U = full_chain(p, trunc)
    physical = evolve(expansion, t) @ U.T
    physical *= np.exp(-1j * p.energy_shift * t)[:, None]
    return timeseries_from_states(
        t, physical, valid=abs(expansion.leakage) <= LEAKAGE_LIMIT, leakage=expansion.leakage
    )
