"""Overlap of the transformed initial state with |0>|e>, numerically and in closed form."""
import argparse
import math

from iontrap_ut.dynamics import InitialStateSpec, frame_transform, prepare_initial
from iontrap_ut.fockspace import Truncation
from iontrap_ut.model import SystemParams


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--N", type=int, default=60)
    ap.add_argument("--etas", type=float, nargs="+", default=[0.05, 0.1, 0.2, 0.3, 0.5, 0.8])
    args = ap.parse_args()
    trunc = Truncation(args.N)
    print("eta,overlap,closed_form")
    for eta in args.etas:
        p = SystemParams(eta, 1.0, 0.5)
        primed = frame_transform(prepare_initial(InitialStateSpec.paper(p), trunc), p, trunc, "to_primed")
        closed = 0.25 * (1 + math.exp(-eta**2 / 2)) ** 2
        print(f"{eta:g},{abs(primed.amplitudes[0]) ** 2:.12f},{closed:.12f}")


if __name__ == "__main__":
    main()
