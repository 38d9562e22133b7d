"""CSV of N, g(N), g(N)/(N-1) and primality for plotting; summary counts on stdout."""

import argparse
import csv
import sys

from mubkit.numth import g_exact, is_prime_trial


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max", type=int, default=1000)
    ap.add_argument("--out", default="-")
    args = ap.parse_args()
    fh = sys.stdout if args.out == "-" else open(args.out, "w", newline="")
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["N", "g_exact", "g", "g_over_N_minus_1", "prime"])
    neg = 0
    for N in range(2, args.max + 1):
        g = g_exact(N)
        neg += g.sign() < 0
        w.writerow([N, repr(g), float(g), float(g) / (N - 1), int(is_prime_trial(N))])
    if fh is not sys.stdout:
        fh.close()
    print(f"N <= {args.max}: {neg} values with g(N) < 0", file=sys.stderr)


if __name__ == "__main__":
    main()
