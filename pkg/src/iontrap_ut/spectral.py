"""Eigenproblem of the atomic-diagonal Hamiltonian, one atomic branch at a time.

Each branch matrix ``nu n + i lam Y + s omega (-1)^n`` (``s = -1`` excited,
``s = +1`` ground) is tridiagonal in the Fock basis. The substitution
``C_n = i^n B_n`` turns it into a real symmetric tridiagonal matrix with
diagonal ``nu n + s omega (-1)^n`` and off-diagonal ``-lam sqrt(n + 1)``, which
is what the eigensolver works on.

The three-term coefficient recursion is kept as an independent check on
each eigenpair. Forward recursion toward a decaying eigenvector is
exponentially unstable (the growing solution swamps it), so the check runs in
``mpmath`` arithmetic with the eigenvalue polished to a root of the truncated
boundary condition ``C_N = 0``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import mpmath
import numpy as np
from scipy.linalg import eigh_tridiagonal

from .fockspace import Truncation, guard_band, ladder_operators, parity, quadratures
from .model import SystemParams

__all__ = [
    "Branch",
    "EigenPair",
    "Eigensystem",
    "RecursionCheck",
    "branch_matrix",
    "gauged_tridiagonal",
    "branch_eigensystem",
    "solve_eigensystem",
    "recursion_coefficients",
    "refine_eigenvalue",
    "verify_recursion",
]

GAUGE_THRESHOLD = 1e-10
CONVERGENCE_WEIGHT = 1e-8
SEED_THRESHOLD = 1e-13


class Branch(enum.Enum):
    EXCITED = "excited"
    GROUND = "ground"

    @property
    def sign(self) -> int:
        return -1 if self is Branch.EXCITED else 1


@dataclass(frozen=True)
class EigenPair:
    branch: Branch
    index: int
    lambda_l: float
    coeffs: np.ndarray = field(repr=False)
    residual: float
    converged: bool


@dataclass(frozen=True)
class Eigensystem:
    excited: list[EigenPair]
    ground: list[EigenPair]
    trunc: Truncation

    def pairs(self, converged_only: bool = False) -> list[EigenPair]:
        out = self.excited + self.ground
        return [q for q in out if q.converged] if converged_only else out

    def eigenvalues(self, converged_only: bool = False) -> np.ndarray:
        return np.sort([q.lambda_l for q in self.pairs(converged_only)])


def branch_matrix(branch: Branch, p: SystemParams, trunc: Truncation) -> np.ndarray:
    p.require_resonant()
    _, _, n = ladder_operators(trunc)
    _, Y = quadratures(trunc)
    return p.nu * n + 1j * p.lam * Y + branch.sign * p.omega * parity(trunc)


def gauged_tridiagonal(branch: Branch, p: SystemParams, trunc: Truncation) -> tuple[np.ndarray, np.ndarray]:
    """Diagonal and off-diagonal of the real form of the branch matrix."""
    p.require_resonant()
    n = np.arange(trunc.dim, dtype=float)
    diag = p.nu * n + branch.sign * p.omega * (-1.0) ** n
    off = -p.lam * np.sqrt(n[:-1] + 1.0)
    return diag, off


def _fix_phase(v: np.ndarray) -> np.ndarray:
    big = np.flatnonzero(np.abs(v) > GAUGE_THRESHOLD)
    if big.size == 0:
        return v
    lead = v[big[0]]
    return v * (abs(lead) / lead)


def branch_eigensystem(branch: Branch, p: SystemParams, trunc: Truncation) -> list[EigenPair]:
    """All ``N`` eigenpairs of one branch, ascending in eigenvalue.

    Pairs with more than ``1e-8`` probability in the guard band are flagged
    ``converged=False``.
    """
    diag, off = gauged_tridiagonal(branch, p, trunc)
    w, B = eigh_tridiagonal(diag, off)
    N = trunc.dim
    to_fock = 1j ** np.arange(N)
    M = branch_matrix(branch, p, trunc)
    k = guard_band(p.eta, trunc)
    pairs = []
    for l in range(N):
        c = _fix_phase(to_fock * B[:, l])
        residual = float(np.max(np.abs(M @ c - w[l] * c)))
        tail = float(np.sum(np.abs(c[N - k :]) ** 2)) if k else 0.0
        pairs.append(
            EigenPair(branch, l, float(w[l]), c, residual, tail <= CONVERGENCE_WEIGHT)
        )
    return pairs


def solve_eigensystem(p: SystemParams, trunc: Truncation) -> Eigensystem:
    return Eigensystem(
        branch_eigensystem(Branch.EXCITED, p, trunc),
        branch_eigensystem(Branch.GROUND, p, trunc),
        trunc,
    )


# --- coefficient recursion -------------------------------------------------


def _check_recursion_params(p: SystemParams):
    p.require_resonant()
    if p.lam <= 0:
        raise ValueError("recursion divides by lam = eta*nu/2, which must be > 0")


def _recursion_terms(lam_value, branch, p, n_terms, c0, ctx):
    """``C_0 .. C_{n_terms-1}`` from the three-term relation in arithmetic ``ctx``.

    Row ``m`` of the eigen-equation gives
    ``C_{m+1} = sqrt(m)/sqrt(m+1) C_{m-1} - (i/lam)(Lambda - nu m - s omega (-1)^m)/sqrt(m+1) C_m``;
    for the excited branch at ``m = n + 1`` this is the bracket
    ``[Lambda + omega (-1)^(n+1) - nu (n+1)]``.
    """
    if ctx is math:
        lam, nu, om, L = p.lam, p.nu, p.omega, complex(lam_value)
        sqrt, one_i, c = math.sqrt, 1j, [complex(c0)]
    else:
        lam = ctx.mpf(p.eta) * ctx.mpf(p.nu) / 2
        nu, om, L = ctx.mpf(p.nu), ctx.mpf(p.omega), ctx.mpf(lam_value)
        sqrt, one_i, c = ctx.sqrt, ctx.mpc(0, 1), [ctx.mpc(c0)]
    s = branch.sign
    if n_terms > 1:
        c.append(-one_i * (L - s * om) / lam * c[0])
    for m in range(1, n_terms - 1):
        bracket = L - nu * m - s * om * (-1) ** m
        c.append(sqrt(m) / sqrt(m + 1) * c[m - 1] - one_i / lam * bracket / sqrt(m + 1) * c[m])
    return c


def _working_digits(lam_value: float, p: SystemParams, n_terms: int) -> int:
    # decimal digits lost to growth of the dominant solution, plus headroom
    growth = 0.0
    for m in range(n_terms):
        ratio = (abs(lam_value - p.nu * m) + p.omega + p.nu) / (p.lam * math.sqrt(m + 1))
        growth += max(0.0, math.log10(ratio))
    return int(30 + growth)


def recursion_coefficients(
    lam_value,
    branch: Branch,
    p: SystemParams,
    trunc: Truncation,
    c0: complex = 1.0,
    dps: int | None = None,
) -> np.ndarray:
    """Generate ``C_0 .. C_{N-1}`` for eigenvalue ``lam_value`` from seed ``c0``.

    With ``dps`` the recursion runs in ``mpmath`` at that many decimal digits
    (``lam_value`` may then be an ``mpf``); otherwise in double precision, where
    the sequence is only trustworthy for the first few terms.
    """
    _check_recursion_params(p)
    if dps is None:
        with np.errstate(over="ignore", invalid="ignore"):
            terms = _recursion_terms(lam_value, branch, p, trunc.dim, c0, math)
        return np.array(terms, dtype=complex)
    with mpmath.workdps(dps):
        terms = _recursion_terms(lam_value, branch, p, trunc.dim, c0, mpmath.mp)
        return np.array([complex(t) for t in terms], dtype=complex)


def refine_eigenvalue(lam_value: float, branch: Branch, p: SystemParams, trunc: Truncation, dps: int | None = None):
    """Polish an eigenvalue to a root of ``C_N(Lambda) = 0`` by secant iteration.

    ``C_N`` is the first coefficient beyond the truncation; it vanishes exactly
    at eigenvalues of the truncated branch matrix. Returns an ``mpf``.
    """
    _check_recursion_params(p)
    N = trunc.dim
    dps = dps or _working_digits(lam_value, p, N + 1)
    with mpmath.workdps(dps):
        phase = mpmath.mpc(0, -1) ** N

        def boundary(x):
            return (_recursion_terms(x, branch, p, N + 1, 1, mpmath.mp)[N] * phase).real

        return +mpmath.findroot(boundary, mpmath.mpf(lam_value), solver="secant", verify=False)


class RecursionCheck(NamedTuple):
    """Outcome of :func:`verify_recursion`.

    ``status`` is ``"ok"``, ``"seed-degenerate"`` (``|C_0|`` below 1e-13) or
    ``"zero-coupling"`` (``lam = 0``); the last two carry ``deviation = nan``.
    ``eigenvalue_shift`` is the polish applied to the pair's eigenvalue.
    """

    deviation: float
    status: str
    eigenvalue_shift: float = math.nan


def verify_recursion(
    pair: EigenPair,
    p: SystemParams,
    trunc: Truncation,
    polish_tol: float = 1e-9,
) -> RecursionCheck:
    """Regenerate ``pair.coeffs`` by recursion from ``C_0`` and report the max deviation.

    The eigenvalue is polished only if the root lies within
    ``polish_tol * (1 + |Lambda|)`` of it; a wrong eigenvalue is used as given
    and shows up as a large deviation.
    """
    p.require_resonant()
    if p.lam == 0:
        return RecursionCheck(math.nan, "zero-coupling")
    c0 = complex(pair.coeffs[0])
    if abs(c0) < SEED_THRESHOLD:
        return RecursionCheck(math.nan, "seed-degenerate")
    N = trunc.dim
    dps = _working_digits(pair.lambda_l, p, N + 1)
    root = refine_eigenvalue(pair.lambda_l, pair.branch, p, trunc, dps)
    shift = float(root - pair.lambda_l)
    with mpmath.workdps(dps):
        use = root if abs(shift) <= polish_tol * (1 + abs(pair.lambda_l)) else mpmath.mpf(pair.lambda_l)
        terms = _recursion_terms(use, pair.branch, p, N, c0, mpmath.mp)
        keep = N - guard_band(p.eta, trunc)
        dev = max(abs(terms[n] - complex(pair.coeffs[n])) for n in range(keep))
        return RecursionCheck(float(dev), "ok", shift)
