"""Count kets unbiased to (1, H) for the N=5 and N=6 reference matrices and write a JSON report."""

import argparse
import json
import time

from mubkit.hadamard import F6, dita, fourier, tao_s6
from mubkit.search import extendability_probe, unbiased_residual, unbiased_vector_search

TARGETS = {"F5": lambda: fourier(5), "F00": lambda: F6(0, 0), "D0": lambda: dita(0), "tao": tao_s6}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--which", nargs="+", default=sorted(TARGETS), choices=sorted(TARGETS))
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--restarts", type=int, default=100000)
    ap.add_argument("--patience", type=int, default=500)
    ap.add_argument("--out", default="census.json")
    args = ap.parse_args()
    rows = {}
    for name in args.which:
        H = TARGETS[name]()
        t0 = time.perf_counter()
        cat = unbiased_vector_search(H, restarts=args.restarts, seed=args.seed, patience=args.patience)
        row = {"N_v": cat.N_v, "N_t": cat.N_t, "restarts": cat.restarts, "saturated": cat.complete,
               "max_residual": max((unbiased_residual(H.entries, z) for z in cat.vectors), default=0.0),
               "seconds": round(time.perf_counter() - t0, 2)}
        if cat.complete and cat.N_t >= 2:
            row["probe"] = {k: v for k, v in extendability_probe(cat).items() if k != "pair"}
        rows[name] = row
        print(name, row)
    with open(args.out, "w") as fh:
        json.dump({"seed": args.seed, "patience": args.patience, "tolerance": 1e-10, "rows": rows}, fh, indent=2)


if __name__ == "__main__":
    main()
