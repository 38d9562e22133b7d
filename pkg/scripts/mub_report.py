"""Exact unbiasedness, Wigner criteria and Mean King success for a list of prime-power dimensions."""

import argparse
import time

from mubkit.meanking import mk_protocol_sim
from mubkit.mub import exact_overlap_check, mub_for
from mubkit.phasespace import wigner_basis, wigner_criteria


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("dims", nargs="*", type=int, default=[2, 3, 4, 5, 7, 8, 9])
    args = ap.parse_args()
    print(f"{'N':>3} {'exact MU':>9} {'W1-W5':>6} {'W6':>5} {'king':>5} {'sec':>6}")
    for N in args.dims:
        t0 = time.perf_counter()
        m = mub_for(N)
        mu = exact_overlap_check(m)
        rep = wigner_criteria(wigner_basis(m))
        w = all(rep[k] for k in ("W1", "W2", "W3", "W4", "W5"))
        king = all(v == 1 for v in mk_protocol_sim(m).success.values()) if N <= 9 else None
        print(f"{N:>3} {str(mu):>9} {str(w):>6} {str(rep['W6']):>5} {str(king):>5} {time.perf_counter() - t0:>6.2f}")


if __name__ == "__main__":
    main()
