"""Sweep eta at nu = 2 omega and print how far the RWA Jaynes-Cummings
solution drifts from the full dynamics over three vacuum-Rabi periods.

    python scripts/rwa_breakdown.py --N 60 --etas 0.02 0.05 0.1 0.2 0.3 0.5
"""
import argparse
import math

import numpy as np

from iontrap_ut.dynamics import evolve, expand_in_eigenbasis, frame_transform, linearized_frame
from iontrap_ut.fockspace import Truncation
from iontrap_ut.model import SpinFockState, SystemParams, full_chain
from iontrap_ut.oracle import compare_timeseries, rwa_jcm_evolve
from iontrap_ut.spectral import solve_eigensystem


def rwa_deviation(eta, trunc, samples=1500):
    p = SystemParams(eta, 1.0, 0.5)
    t = np.linspace(0, 3 * math.pi / p.lam, samples)
    lin0 = SpinFockState.basis("e", 0, trunc)
    phys0 = SpinFockState(linearized_frame(lin0.amplitudes, p, trunc, inverse=True), trunc)
    ex = expand_in_eigenbasis(frame_transform(phys0, p, trunc, "to_primed"), solve_eigensystem(p, trunc))
    full_lin = linearized_frame(evolve(ex, t) @ full_chain(p, trunc).T, p, trunc)
    return compare_timeseries(full_lin, rwa_jcm_evolve(p, lin0, t)).max_observable_deviation


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--N", type=int, default=60)
    ap.add_argument("--etas", type=float, nargs="+", default=[0.02, 0.05, 0.1, 0.2, 0.3, 0.5])
    args = ap.parse_args()
    trunc = Truncation(args.N)
    print("eta,lambda,max_observable_deviation")
    for eta in args.etas:
        print(f"{eta:g},{0.5 * eta:g},{rwa_deviation(eta, trunc):.6e}")


if __name__ == "__main__":
    main()
