"""Ion-laser Hamiltonian and its transformation chain on spin (x) Fock space.

Basis ordering is fixed: indices ``0..N-1`` are ``|e>|n>`` and ``N..2N-1`` are
``|g>|n>``. Units have hbar = 1, so every Hamiltonian is in angular-frequency
units of the caller's choosing (conventionally the trap frequency ``nu = 1``).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fockspace import (
    Truncation,
    displacement,
    guard_band,
    ladder_operators,
    parity,
    quadratures,
)

__all__ = [
    "DetuningError",
    "SystemParams",
    "SpinFockState",
    "build_ion_hamiltonian",
    "build_T",
    "build_linearized",
    "build_resonant",
    "atomic_transforms",
    "conjugate",
    "full_chain",
    "build_diagonalizable",
    "guard_indices",
]


class DetuningError(ValueError):
    """Raised when a transformed-frame routine gets a nonzero detuning."""


@dataclass(frozen=True)
class SystemParams:
    """Lamb-Dicke parameter, trap frequency, laser coupling and detuning."""

    eta: float
    nu: float
    omega: float
    delta: float = 0.0

    def __post_init__(self):
        for name in ("eta", "nu", "omega", "delta"):
            value = getattr(self, name)
            if not np.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value!r}")
        if self.eta < 0:
            raise ValueError(f"eta must satisfy eta >= 0, got {self.eta}")
        if self.nu <= 0:
            raise ValueError(f"nu must satisfy nu > 0, got {self.nu}")
        if self.omega < 0:
            raise ValueError(f"omega must satisfy omega >= 0, got {self.omega}")

    @property
    def lam(self) -> float:
        """Effective coupling ``eta * nu / 2`` of the linearized Hamiltonian."""
        return 0.5 * self.eta * self.nu

    @property
    def beta(self) -> complex:
        """Displacement amplitude ``-i eta / 2`` used by the linearizing transform."""
        return -0.5j * self.eta

    @property
    def energy_shift(self) -> float:
        """Constant ``nu eta^2 / 4`` dropped between the linearized and resonant forms."""
        return 0.25 * self.nu * self.eta**2

    def require_resonant(self):
        if self.delta != 0:
            raise DetuningError(
                f"out-of-scope detuning: delta={self.delta!r}; transformed frames require delta = 0"
            )


@dataclass(frozen=True)
class SpinFockState:
    """Amplitudes over ``|e>|n>`` (first half) then ``|g>|n>`` (second half)."""

    amplitudes: np.ndarray
    trunc: Truncation

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape != (self.trunc.spin_dim,):
            raise ValueError(
                f"expected {self.trunc.spin_dim} amplitudes for N={self.trunc.dim}, got shape {amps.shape}"
            )
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def basis(cls, atomic: str, n: int, trunc: Truncation) -> "SpinFockState":
        if atomic not in ("e", "g"):
            raise ValueError(f"atomic label must be 'e' or 'g', got {atomic!r}")
        if not 0 <= n < trunc.dim:
            raise ValueError(f"Fock index {n} outside truncation N={trunc.dim}")
        amps = np.zeros(trunc.spin_dim, dtype=complex)
        amps[n if atomic == "e" else trunc.dim + n] = 1.0
        return cls(amps, trunc)

    @property
    def excited(self) -> np.ndarray:
        return self.amplitudes[: self.trunc.dim]

    @property
    def ground(self) -> np.ndarray:
        return self.amplitudes[self.trunc.dim :]

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


def _blocks(ee, eg, ge, gg) -> np.ndarray:
    return np.block([[ee, eg], [ge, gg]])


def guard_indices(p: SystemParams, trunc: Truncation) -> np.ndarray:
    """Indices of the trusted block in the 2N space.

    The largest displacement appearing anywhere in the chain is ``exp(i eta X)``,
    i.e. ``|beta| = eta``; its guard band is removed from both atomic blocks.
    """
    N = trunc.dim
    keep = N - guard_band(p.eta, trunc)
    return np.r_[0:keep, N : N + keep]


def build_ion_hamiltonian(p: SystemParams, trunc: Truncation) -> np.ndarray:
    """Raman-driven ion Hamiltonian with the full ``exp(i eta X)`` coupling."""
    _, _, n = ladder_operators(trunc)
    kick = displacement(1j * p.eta, trunc)  # exp(i eta X)
    I = np.eye(trunc.dim)
    return _blocks(
        p.nu * n + 0.5 * p.delta * I,
        p.omega * kick,
        p.omega * kick.conj().T,
        p.nu * n - 0.5 * p.delta * I,
    )


def build_T(p: SystemParams, trunc: Truncation) -> np.ndarray:
    """Linearizing transform ``(1/sqrt2) [[D^dag, -D^dag], [D, D]]`` with ``D = D(beta)``."""
    D = displacement(p.beta, trunc)
    Dd = D.conj().T
    return _blocks(Dd, -Dd, D, D) / np.sqrt(2.0)


def build_resonant(p: SystemParams, trunc: Truncation) -> np.ndarray:
    """Linearized Hamiltonian at ``delta = 0`` without the constant ``nu eta^2 / 4``."""
    p.require_resonant()
    _, _, n = ladder_operators(trunc)
    _, Y = quadratures(trunc)
    I = np.eye(trunc.dim)
    off = 1j * p.lam * Y
    return _blocks(p.nu * n + p.omega * I, off, off, p.nu * n - p.omega * I)


def build_linearized(p: SystemParams, trunc: Truncation) -> np.ndarray:
    """Closed form of ``T^dag H T`` (``delta = 0`` only)."""
    return build_resonant(p, trunc) + p.energy_shift * np.eye(trunc.spin_dim)


def atomic_transforms(trunc: Truncation) -> tuple[np.ndarray, np.ndarray]:
    """``T1 = (1/sqrt2)[[1, 1], [-1, 1]]`` and ``T2 = diag((-1)^n, 1)`` in atomic blocks."""
    I = np.eye(trunc.dim, dtype=complex)
    Z = np.zeros_like(I)
    T1 = _blocks(I, I, -I, I) / np.sqrt(2.0)
    T2 = _blocks(parity(trunc), Z, Z, I)
    return T1, T2


def conjugate(H: np.ndarray, U: np.ndarray) -> np.ndarray:
    """Return ``U^dag H U``."""
    H = np.asarray(H)
    U = np.asarray(U)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise ValueError(f"H must be square, got shape {H.shape}")
    if U.shape != H.shape:
        raise ValueError(f"dimension mismatch: H {H.shape} vs U {U.shape}")
    return U.conj().T @ H @ U


def full_chain(p: SystemParams, trunc: Truncation) -> np.ndarray:
    """``U = T T1 T2 T1``; ``U^dag H U`` is block diagonal in the atomic basis."""
    T1, T2 = atomic_transforms(trunc)
    return build_T(p, trunc) @ T1 @ T2 @ T1


def build_diagonalizable(p: SystemParams, trunc: Truncation) -> np.ndarray:
    """Atomic-diagonal form ``nu n + i lam Y - omega sigma_z (-1)^n``.

    sigma_z is +1 on ``|e>``, so the excited block carries ``-omega (-1)^n``.
    """
    p.require_resonant()
    _, _, n = ladder_operators(trunc)
    _, Y = quadratures(trunc)
    P = parity(trunc)
    common = p.nu * n + 1j * p.lam * Y
    Z = np.zeros_like(common)
    return _blocks(common - p.omega * P, Z, Z, common + p.omega * P)
