"""Truncation convergence of the low spectrum and of the spectral-pipeline trajectory."""
import argparse

import numpy as np

from iontrap_ut.dynamics import InitialStateSpec, run_evolution
from iontrap_ut.fockspace import Truncation
from iontrap_ut.model import SystemParams
from iontrap_ut.spectral import Branch, branch_eigensystem


def pad(states, small, big):
    out = np.zeros((states.shape[0], 2 * big), dtype=complex)
    out[:, :small] = states[:, :small]
    out[:, big : big + small] = states[:, small:]
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--eta", type=float, default=0.2)
    ap.add_argument("--omega", type=float, default=0.5)
    ap.add_argument("--Ns", type=int, nargs="+", default=[20, 30, 40, 50, 60, 70, 80])
    ap.add_argument("--t-max", type=float, default=50.0)
    args = ap.parse_args()
    p = SystemParams(args.eta, 1.0, args.omega)
    t = np.linspace(0, args.t_max, 500)
    spec = InitialStateSpec.paper(p)
    print("N,N_next,eig_change_low_half,state_change")
    for N, M in zip(args.Ns, args.Ns[1:]):
        a, b = Truncation(N), Truncation(M)
        k = N // 2
        eig = max(
            np.max(np.abs(np.subtract(
                [q.lambda_l for q in branch_eigensystem(br, p, a)[:k]],
                [q.lambda_l for q in branch_eigensystem(br, p, b)[:k]],
            )))
            for br in Branch
        )
        sa = run_evolution(p, spec, a, t).states
        sb = run_evolution(p, spec, b, t).states
        print(f"{N},{M},{eig:.3e},{np.max(np.abs(pad(sa, N, M) - sb)):.3e}")


if __name__ == "__main__":
    main()
