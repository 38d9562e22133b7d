"""Command-line front end.  JSON is the canonical output; ascii and csv are
offered where a table or grid reads better.  Exit codes: 0 ok, 1 a
verification failed, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from . import bellproto, gf, hadamard, meanking, mub, numth, phasespace, search
from .cnum import CMatrix

TOL = 1e-9


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    subcommand: str
    params: dict = field(default_factory=dict)
    seed: int = 0
    tolerances: dict = field(default_factory=dict)
    out: str | None = None
    format: str | None = None
    threads: int = 1


@dataclass
class Result:
    payload: object  # dict for json, str for ascii/csv
    ok: bool = True
    text: str | None = None  # human form, used when format is ascii
    table: list | None = None  # rows for csv


# --- helpers ---------------------------------------------------------------------

def _default_seed() -> int:
    raw = os.environ.get("MUBKIT_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"MUBKIT_SEED must be an integer, got {raw!r}")


def _n_from(args) -> int:
    if getattr(args, "n", None) is not None:
        N = args.n
    elif getattr(args, "p", None) is not None:
        N = args.p ** args.m
    else:
        raise UsageError("give --n N or --p P [--m M]")
    if gf.prime_power(N) is None:
        raise UsageError(f"N = {N} is not a prime power")
    return N


def _spec(args) -> gf.GfSpec:
    return gf.gf_for(_n_from(args))


def _rand_ket(N: int, rng) -> np.ndarray:
    v = rng.normal(size=N) + 1j * rng.normal(size=N)
    return v / np.linalg.norm(v)


def _cplx(z) -> list:
    return [float(np.real(z)), float(np.imag(z))]


def _cmat(M) -> dict:
    M = np.asarray(M)
    return {"re": M.real.tolist(), "im": M.imag.tolist()}


def _jsonify(x):
    if isinstance(x, dict):
        return {str(k): _jsonify(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonify(v) for v in x]
    if isinstance(x, np.ndarray):
        return _jsonify(x.tolist())
    if isinstance(x, (np.bool_, bool)):
        return bool(x)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.floating):
        return float(x)
    if isinstance(x, complex):
        return _cplx(x)
    if isinstance(x, Fraction):
        return str(x)
    return x


def _param(tok: str):
    for conv in (int, float, complex):
        try:
            return conv(tok)
        except ValueError:
            pass
    raise UsageError(f"cannot read parameter {tok!r}")


def _family_token(tok: str) -> hadamard.HMat:
    """NAME or NAME:p1,p2,... e.g. F6:0.1,0.2 or karlsson:0.3,0.4,0.5,1j."""
    name, _, rest = tok.partition(":")
    params = [_param(t) for t in rest.split(",") if t] if rest else []
    if name == "galois_fourier":
        if len(params) != 1:
            raise UsageError("galois_fourier takes N")
        return hadamard.galois_fourier(gf.gf_for(params[0]))
    if name not in hadamard.FAMILIES:
        raise UsageError(f"unknown family {name!r}; see `hadamard list`")
    try:
        return hadamard.family(name, *params)
    except TypeError as e:
        raise UsageError(f"bad parameters for {name}: {e}")


def _family_from_flags(args) -> hadamard.HMat:
    name = args.family
    if name in ("F6", "F6T"):
        return hadamard.family(name, args.a, args.b)
    if name in ("F4", "dita"):
        return hadamard.family(name, args.a)
    if name == "fourier":
        return hadamard.family(name, args.n or 6)
    if name in ("tao_s6", "bjorck_c6"):
        return hadamard.family(name)
    if args.spec:
        return _family_token(args.spec)
    raise UsageError(f"family {name!r} needs --spec NAME:params")


def _selftest(name: str, checks: dict) -> Result:
    ok = all(bool(v) for v in checks.values())
    text = "\n".join(f"{k}: {'PASS' if v else 'FAIL'}" for k, v in checks.items())
    return Result({"selftest": name, "checks": checks, "pass": ok}, ok, text)


# --- subcommands ---------------------------------------------------------------------

def cmd_field(args, cfg, rng) -> Result:
    spec = gf.gf_new(args.p, args.m, args.mu)
    if args.selftest:
        checks = {}
        for p, m in ((2, 2), (2, 3), (3, 2), (5, 1)):
            checks[f"axioms GF({p}^{m})"] = all(gf.gf_verify_axioms(gf.gf_new(p, m)).values())
        return _selftest("field", checks)
    rep = {"field": spec.to_json(), "N": spec.N}
    if spec.N <= 256:
        rep["axioms"] = gf.gf_verify_axioms(spec)
    ok = all(rep.get("axioms", {True: True}).values())
    return Result(rep, ok)


def _mub_from(args) -> mub.MubSet:
    N = _n_from(args)
    return mub.mub_for(N, conjugate=getattr(args, "conjugate", False))


def cmd_mub(args, cfg, rng) -> Result:
    if args.selftest:
        return _selftest("mub", {f"exact MU N={N}": mub.exact_overlap_check(mub.mub_for(N)) for N in (2, 3, 4, 5, 8, 9)})
    m = _mub_from(args)
    N = m.N
    if args.export:
        H = [mub.hadamard_of_basis(m, j).to_json(N) for j in range(N)]
        A = [mub.phase_matrix(m, j).to_json(N) for j in range(N)]
        return Result({"N": N, "hadamards": H, "phase_matrices": A})
    rep = {"N": N, "alpha_exponents": m.alpha.exps.tolist(), "alpha_order": m.alpha.L,
           "symmetric": m.alpha.symmetric, "exact_mu": mub.exact_overlap_check(m)}
    return Result(rep, rep["exact_mu"])


def cmd_verify(args, cfg, rng) -> Result:
    if args.selftest:
        return cmd_mub(args, cfg, rng)
    m = _mub_from(args)
    ok = mub.exact_overlap_check(m)
    N = m.N
    line = f"all N+1 bases pairwise MU: {'PASS' if ok else 'FAIL'}"
    rep = {"N": N, "bases": N + 1, "pairs": N * (N + 1) // 2, "exact": True, "tolerance": 0, "pass": ok,
           "message": line}
    return Result(rep, ok, line)


def _export_roundtrip(N: int) -> bool:
    m = mub.mub_for(N)
    mats = list(m.bases) + [mub.hadamard_of_basis(m, j) for j in range(N)] + [mub.phase_matrix(m, j) for j in range(N)]
    return all(CMatrix.from_json(json.loads(json.dumps(M.to_json(N))), N).exact_equal(M) for M in mats)


def cmd_export(args, cfg, rng) -> Result:
    if args.selftest:
        return _selftest("export", {f"json round trip N={N}": _export_roundtrip(N) for N in (2, 3, 4, 5, 8, 9)})
    m = _mub_from(args)
    N = m.N
    idx = range(N + 1) if args.basis is None else [args.basis]
    if args.basis is not None and not 0 <= args.basis <= N:
        raise UsageError(f"basis index must be in 0..{N}")
    if args.what == "bases":
        mats = {str(j): m.bases[j].to_json(N) for j in idx}
    elif args.what == "hadamards":
        mats = {str(j): mub.hadamard_of_basis(m, j).to_json(N) for j in idx if j < N}
    else:
        mats = {str(j): mub.phase_matrix(m, j).to_json(N) for j in idx if j < N}
    return Result({"N": N, "what": args.what, "matrices": mats})


def cmd_bell(args, cfg, rng) -> Result:
    if args.selftest:
        return _selftest("bell", {f"dense coding N={N}": _dense(gf.gf_for(N))["ok"] for N in (2, 3, 4)})
    rep = _dense(_spec(args))
    return Result(rep, rep["ok"])


def _dense(spec) -> dict:
    N = spec.N
    worst, ok = 1.0, True
    for m in range(N):
        for n in range(N):
            got, p = bellproto.dense_coding_sim(spec, m, n)
            ok &= got == (m, n) and abs(p - 1) < TOL
            worst = min(worst, p)
    return {"N": N, "messages": N * N, "all_decoded": bool(ok), "min_probability": worst, "tolerance": TOL,
            "ok": bool(ok)}


def _teleport(spec, rng) -> dict:
    N = spec.N
    psi = _rand_ket(N, rng)
    br = bellproto.teleport_sim(spec, psi)
    pdev = max(abs(b.probability - 1 / N ** 2) for b in br)
    fdev = max(abs(b.fidelity - 1) for b in br)
    return {"N": N, "psi": [_cplx(z) for z in psi], "branches": [asdict(b) for b in br],
            "max_probability_error": pdev, "max_fidelity_error": fdev, "tolerance": TOL,
            "ok": bool(pdev < TOL and fdev < TOL)}


def cmd_teleport(args, cfg, rng) -> Result:
    if args.selftest:
        return _selftest("teleport", {f"teleport N={N}": _teleport(gf.gf_for(N), rng)["ok"] for N in (2, 3, 4)})
    rep = _teleport(_spec(args), rng)
    return Result(rep, rep["ok"])


def _clone(spec, rng) -> dict:
    N = spec.N
    a = rng.normal(size=(N, N)) + 1j * rng.normal(size=(N, N))
    a /= np.linalg.norm(a)
    psi = _rand_ket(N, rng)
    r = bellproto.cerf_clone(spec, a, psi)
    return {"N": N, "rho1": _cmat(r.rho1), "rho3": _cmat(r.rho3), "residual_rho1": r.residual1,
            "residual_rho3": r.residual3, "tolerance": TOL, "ok": bool(max(r.residual1, r.residual3) < TOL)}


def cmd_clone(args, cfg, rng) -> Result:
    if args.selftest:
        return _selftest("clone", {f"closed forms N={N}": _clone(gf.gf_for(N), rng)["ok"] for N in (2, 3)})
    rep = _clone(_spec(args), rng)
    return Result(rep, rep["ok"])


def _swap(spec, m, n) -> dict:
    br = bellproto.swap_sim(spec, m, n)
    N = spec.N
    fdev = max(abs(b.fidelity - 1) for b in br)
    pdev = max(abs(b.probability - 1 / N ** 2) for b in br)
    return {"N": N, "m": m, "n": n, "branches": [asdict(b) for b in br], "max_fidelity_error": fdev,
            "max_probability_error": pdev, "tolerance": TOL, "ok": bool(fdev < TOL and pdev < TOL)}


def cmd_swap(args, cfg, rng) -> Result:
    if args.selftest:
        return _selftest("swap", {f"swap N={N}": _swap(gf.gf_for(N), 1, 1)["ok"] for N in (2, 3)})
    spec = _spec(args)
    rep = _swap(spec, args.mm % spec.N, args.nn % spec.N)
    return Result(rep, rep["ok"])


def _king(N: int) -> dict:
    m = mub.mub_for(N)
    rep = meanking.mk_protocol_sim(m)
    return {"N": N, "exact": rep.exact, "success": {f"{i},{k}": v for (i, k), v in sorted(rep.success.items())},
            "all_certain": all(v == 1 for v in rep.success.values()), "tolerance": 0}


def cmd_meanking(args, cfg, rng) -> Result:
    if args.selftest:
        return _selftest("meanking", {f"success 1 N={N}": _king(N)["all_certain"] for N in (2, 3, 4)})
    N = _n_from(args)
    spec = gf.gf_for(N)
    if args.grids:
        grids = [meanking.k_grid(spec, i) for i in range(N + 1)]
        text = "\n\n".join(f"i = {i}\n" + meanking.render_grid(g) for i, g in enumerate(grids))
        return Result({"N": N, "grids": grids, "layout": "grid[n][m]; ascii rows run n = N-1 down to 0"},
                      True, text)
    rep = _king(N)
    return Result(rep, rep["all_certain"])


def _wigner(N: int, twist, rng) -> dict:
    spec = gf.gf_for(N)
    if twist:
        if len(twist) != N:
            raise UsageError(f"--twist needs N = {N} field elements")
        basis = phasespace.twisted_wigner(spec, twist)
    else:
        basis = phasespace.wigner_basis(mub.mub_for(N))
    crit = phasespace.wigner_criteria(basis)
    cov = {str(i): phasespace.clifford_covariance(basis, i) for i in range(N)}
    rho = phasespace.random_density(N, rng)
    rep = {"N": N, "twist": list(twist or []), "criteria": crit, "clifford_covariance_error": cov,
           "wigner_function": phasespace.wigner_analyze(basis, rho), "tolerance": 1e-10}
    rep["ok"] = all(v for k, v in crit.items() if v is not None)
    return rep


def cmd_wigner(args, cfg, rng) -> Result:
    if args.selftest:
        return _selftest("wigner", {f"W1-W5 N={N}": _wigner(N, None, rng)["ok"] for N in (2, 3, 4, 5)})
    rep = _wigner(_n_from(args), args.twist, rng)
    return Result(rep, rep["ok"])


def _tomo(N: int, trials: int, rng) -> dict:
    T = phasespace.Tomographer(mub.mub_for(N))
    errs = []
    for _ in range(trials):
        rho = phasespace.random_density(N, rng)
        errs.append(float(np.linalg.norm(rho - T.reconstruct(T.probabilities(rho)))))
    return {"N": N, "trials": trials, "max_frobenius_error": max(errs), "tolerance": TOL,
            "ok": bool(max(errs) < TOL)}


def cmd_tomo(args, cfg, rng) -> Result:
    if args.selftest:
        return _selftest("tomo", {f"round trip N={N}": _tomo(N, 10, rng)["ok"] for N in (2, 3, 4, 5)})
    rep = _tomo(_n_from(args), args.trials, rng)
    return Result(rep, rep["ok"])


def cmd_hadamard(args, cfg, rng) -> Result:
    if args.selftest:
        checks = {f"is_hadamard {t}": hadamard.is_hadamard(_family_token(t))
                  for t in ("fourier:6", "F6:0.1,0.2", "F6T:0.3,0.1", "dita:0.05", "tao_s6", "bjorck_c6")}
        checks["defect F5 = 0"] = hadamard.defect(hadamard.fourier(5)) == 0
        checks["defect F4 = 1"] = hadamard.defect(hadamard.fourier(4)) == 1
        return _selftest("hadamard", checks)
    act = args.action
    tol = args.tol
    if act == "list":
        return Result({"families": sorted(hadamard.FAMILIES),
                       "syntax": "NAME or NAME:p1,p2,..."})
    if act == "muhm":
        if args.n is None:
            raise UsageError("muhm needs --n N")
        try:
            _, rep = hadamard.standard_muhm(args.n)
        except hadamard.BadParameter as e:
            raise UsageError(str(e))
        rep = {"N": args.n, "maximal": rep["maximal"], "failing_shifts": rep["failing_shifts"],
               "pairs": {f"{s},{r}": v for (s, r), v in rep["pairs"].items()}, "tolerance": 1e-10}
        return Result(rep, rep["maximal"])
    if not args.matrix:
        raise UsageError(f"hadamard {act} needs a family token such as F6:0.1,0.2")
    H = _family_token(args.matrix[0])
    if act == "build":
        return Result(H.to_json())
    if act == "check":
        ok = hadamard.is_hadamard(H, tol)
        return Result({"family": H.family, "N": H.N, "is_hadamard": ok, "h2_reducible": hadamard.h2_reducible(H),
                       "tolerance": tol}, ok)
    if act == "defect":
        try:
            d = hadamard.defect(H)
        except hadamard.IllConditioned as e:
            return Result({"family": H.family, "N": H.N, "defect": None, "ranks": e.ranks,
                           "thresholds": [1e-8, 1e-6]}, False)
        return Result({"family": H.family, "N": H.N, "defect": d, "thresholds": [1e-8, 1e-6]})
    if act == "equiv":
        if len(args.matrix) != 2:
            raise UsageError("equiv needs two family tokens")
        H2 = _family_token(args.matrix[1])
        try:
            c = hadamard.equivalent(H, H2, budget=args.budget, tol=tol)
        except hadamard.SizeMismatch as e:
            raise UsageError(str(e))
        w = None
        if c.witness:
            w = {"rows": c.witness["rows"], "cols": c.witness["cols"],
                 "row_phase": [_cplx(z) for z in c.witness["row_phase"]],
                 "col_phase": [_cplx(z) for z in c.witness["col_phase"]]}
        return Result({"verdict": c.verdict, "witness": w, "invariant_gap": c.invariant_gap, "tolerance": tol})
    raise UsageError(f"unknown hadamard action {act!r}")


def cmd_search(args, cfg, rng) -> Result:
    if args.selftest:
        I = np.eye(3)
        F = hadamard.fourier(3).entries / math.sqrt(3)
        checks = {"D2(1, F3) = N - 1": abs(search.grassmann_d2(I, F) - 2) < 1e-10,
                  "dual route agrees": abs(search.grassmann_d2(I, F) - search.grassmann_d2_planes(I, F)) < 1e-10,
                  "simplex": search.is_simplex(search.basis_vectors(F))}
        cat = search.unbiased_vector_search(hadamard.fourier(3), restarts=2000, seed=cfg.seed, patience=100)
        checks["F3 catalog has 6 kets"] = cat.N_v == 6
        return _selftest("search", checks)
    act = args.action
    if act == "haar":
        N = args.n or 2
        mean, se = search.haar_d2(N, args.samples, rng)
        exp = search.haar_d2_expected(N)
        ok = abs(mean - exp) <= 2 * se
        return Result({"N": N, "samples": args.samples, "mean": mean, "stderr": se, "expected": exp,
                       "tolerance": "2 standard errors", "ok": ok}, ok)
    if act == "constellation":
        shape = tuple(int(t) for t in args.shape.split(","))
        try:
            r = search.constellation_search(shape, args.n or 6, restarts=args.restarts, seed=cfg.seed)
        except ValueError as e:
            raise UsageError(str(e))
        return Result({"shape": list(r.shape), "N": r.N, "best_penalty": r.penalty, "penalties": r.penalties,
                       "success": r.success, "success_threshold": 1e-12})
    H = _family_from_flags(args)
    cat = search.unbiased_vector_search(H, restarts=args.restarts, tol=args.tol, seed=cfg.seed,
                                        patience=args.patience)
    rep = cat.to_json()
    rep["tolerance"] = args.tol
    if act == "unbiased":
        return Result(rep, True)
    if act == "probe":
        try:
            pr = search.extendability_probe(cat)
        except search.IncompleteCatalog as e:
            return Result({"catalog": {"N_v": cat.N_v, "N_t": cat.N_t, "complete": cat.complete},
                           "error": str(e)}, False)
        pr["pair"] = list(pr["pair"])
        return Result({"N_v": cat.N_v, "N_t": cat.N_t, "probe": pr})
    raise UsageError(f"unknown search action {act!r}")


def cmd_gnum(args, cfg, rng) -> Result:
    if args.selftest:
        checks = {"g(N) = 0 iff N prime, N <= 200": all(
            numth.is_prime_via_g(N) == numth.is_prime_trial(N) for N in range(2, 201))}
        checks["h(6) = h(2) h(3)"] = numth.h(6) == numth.h(2) * numth.h(3)
        return _selftest("gnum", checks)
    if args.max < 2:
        raise UsageError("--max must be at least 2")
    rows, neg = [], 0
    for N in range(2, args.max + 1):
        g = numth.g_exact(N)
        s = g.sign()
        neg += s < 0
        rows.append({"N": N, "g": float(g), "g_over_N_minus_1": float(g) / (N - 1), "exact": repr(g),
                     "prime": g.is_zero()})
    rep = {"max": args.max, "negatives": neg, "primes": sum(r["prime"] for r in rows), "rows": rows,
           "tolerance": 0}
    table = [["N", "g", "g_over_N_minus_1", "prime"]] + [[r["N"], repr(r["g"]), repr(r["g_over_N_minus_1"]),
                                                          int(r["prime"])] for r in rows]
    return Result(rep, True, table=table)


COMMANDS = {
    "field": cmd_field, "mub": cmd_mub, "verify": cmd_verify, "bell": cmd_bell, "teleport": cmd_teleport,
    "clone": cmd_clone, "swap": cmd_swap, "meanking": cmd_meanking, "wigner": cmd_wigner, "tomo": cmd_tomo,
    "hadamard": cmd_hadamard, "search": cmd_search, "gnum": cmd_gnum, "export": cmd_export,
}


# --- parser ------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    def common(p, default):
        p.add_argument("--seed", type=int, default=default(None), help="RNG seed (default: $MUBKIT_SEED or 0)")
        p.add_argument("--threads", type=int, default=default(1), help="worker threads (all kernels run serially)")
        p.add_argument("--format", choices=["json", "csv", "ascii"], default=default(None))
        p.add_argument("--out", default=default(None), help="write output to this file")

    P = _Parser(prog="mubkit", description="Mutually unbiased bases, Hadamard matrices and related tools.")
    common(P, lambda v: v)
    # the same flags after the subcommand; SUPPRESS keeps the top-level values when absent
    shared = _Parser(add_help=False)
    common(shared, lambda v: argparse.SUPPRESS)
    sub = P.add_subparsers(dest="cmd", parser_class=_Parser)

    def add(name, help_):
        sp = sub.add_parser(name, help=help_, parents=[shared])
        sp.add_argument("--selftest", action="store_true", help="run this module's invariant suite")
        return sp

    def dim(sp, pm=True):
        sp.add_argument("--n", type=int, default=None)
        if pm:
            sp.add_argument("--p", type=int, default=None)
            sp.add_argument("--m", type=int, default=1)

    sp = add("field", "build GF(p^m) and check its axioms")
    sp.add_argument("--p", type=int, default=2)
    sp.add_argument("--m", type=int, default=1)
    sp.add_argument("--mu", type=int, nargs="+", default=None, help="coefficients of x^m = sum mu_l x^l")
    for name, help_ in (("mub", "build the N+1 bases"), ("verify", "exact pairwise unbiasedness"),
                        ("export", "export bases, Hadamards or phase matrices")):
        sp = add(name, help_)
        dim(sp)
        sp.add_argument("--conjugate", action="store_true", help="conjugate phases (p = 2 only)")
        if name == "mub":
            sp.add_argument("--export", action="store_true", help="exact JSON of the Hadamard and phase matrices")
        if name == "export":
            sp.add_argument("--basis", type=int, default=None)
            sp.add_argument("--what", choices=["bases", "hadamards", "phases"], default="bases")
    for name in ("bell", "teleport", "clone"):
        dim(add(name, f"{name} simulation"))
    sp = add("swap", "entanglement swapping")
    dim(sp)
    sp.add_argument("--mm", type=int, default=1)
    sp.add_argument("--nn", type=int, default=1)
    sp = add("meanking", "Mean King protocol")
    dim(sp)
    sp.add_argument("--grids", action="store_true")
    sp = add("wigner", "Wigner basis criteria")
    dim(sp)
    sp.add_argument("--twist", type=int, nargs="+", default=None, help="field elements b_0..b_{N-1}")
    sp = add("tomo", "tomography round trip")
    dim(sp)
    sp.add_argument("--trials", type=int, default=100)
    sp = add("hadamard", "complex Hadamard catalog")
    sp.add_argument("action", nargs="?", choices=["list", "build", "check", "equiv", "defect", "muhm"],
                    default="list")
    sp.add_argument("matrix", nargs="*", help="NAME or NAME:p1,p2,...")
    sp.add_argument("--n", type=int, default=None)
    sp.add_argument("--tol", type=float, default=1e-10)
    sp.add_argument("--budget", type=int, default=10 ** 6)
    sp = add("search", "numerical searches")
    sp.add_argument("action", nargs="?", choices=["unbiased", "constellation", "haar", "probe"], default="unbiased")
    sp.add_argument("--family", default="F6")
    sp.add_argument("--spec", default=None, help="family token for other families")
    sp.add_argument("--a", type=float, default=0.0)
    sp.add_argument("--b", type=float, default=0.0)
    sp.add_argument("--n", type=int, default=None)
    sp.add_argument("--restarts", type=int, default=100000)
    sp.add_argument("--patience", type=int, default=500)
    sp.add_argument("--tol", type=float, default=1e-10)
    sp.add_argument("--samples", type=int, default=10000)
    sp.add_argument("--shape", default="6,6,6,6")
    sp = add("gnum", "the prime-distinguishing function g(N)")
    sp.add_argument("--max", type=int, default=50)
    sp.add_argument("--csv", action="store_true")
    return P


def _render(res: Result, fmt: str) -> str:
    if fmt == "ascii" and res.text is not None:
        return res.text + "\n"
    if fmt == "csv":
        if res.table is None:
            raise UsageError("this subcommand has no csv form")
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(res.table)
        return buf.getvalue()
    return json.dumps(_jsonify(res.payload), sort_keys=True, indent=2) + "\n"


def dispatch(argv) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.cmd is None:
            raise UsageError("choose a subcommand; try --help")
        seed = args.seed if args.seed is not None else _default_seed()
        fmt = args.format
        if args.cmd == "gnum" and args.csv:
            fmt = "csv"
        if fmt is None:
            fmt = "ascii" if (args.cmd == "verify" or getattr(args, "grids", False) or args.selftest) else "json"
        cfg = RunConfig(args.cmd, {k: v for k, v in vars(args).items() if k not in ("seed", "out", "format")},
                        seed, {"default": TOL}, args.out, fmt, args.threads)
        rng = np.random.default_rng(seed)
        try:
            res = COMMANDS[args.cmd](args, cfg, rng)
        except (gf.NotPrime, hadamard.BadParameter, ValueError) as e:
            if isinstance(e, UsageError):
                raise
            raise UsageError(str(e))
        text = _render(res, fmt)
    except UsageError as e:
        print(f"mubkit: usage error: {e}", file=sys.stderr)
        return 2
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if res.ok else 1


def main(argv=None) -> int:
    return dispatch(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
