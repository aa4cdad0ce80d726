"""Command-line interface.

Exit codes: 0 verified, 1 verification failed, 2 invalid input,
3 resource cap exceeded, 4 I/O error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
from fractions import Fraction

from . import __version__, _kernels
from .errors import DomainError, EkrError, ResourceError
from .exact import binomial, format_rational
from .families import DESIGN_NAMES, DEFAULT_BRUTE_CAP, SetFamily, brute_alpha, design_consistency_check, design_registry, star_family
from .formats import dump_coo
from .pseudoadjacency import descriptor, verify_coefficient_identity, verify_equality
from .scheme import DEFAULT_MATERIALIZE_CAP, SchemeParams, convert, inner_distribution, valid_triples
from .spectral import DEFAULT_SPECTRAL_CAP, certify_extremes

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INVALID = 2
EXIT_RESOURCE = 3
EXIT_IO = 4

CAP_ENV = "EKR_KIT_CAP"


class UsageError(Exception):
    """Bad flags; maps to exit code 2."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _r(x: Fraction | int | None):
    return None if x is None else format_rational(x)


def _params_json(p: SchemeParams) -> dict:
    return {"n": p.n, "k": p.k, "t": p.t, "N": p.N, "ekr_threshold": p.ekr_threshold, "in_ekr_range": p.in_ekr_range}


def _coeffs_json(vec) -> dict:
    return {f"{vec.tag}_{m}": format_rational(c) for m, c in sorted(vec.coeffs.items(), reverse=True)}


def _cap(args, default: int) -> int:
    if getattr(args, "cap_n", None) is not None:
        return args.cap_n
    env = os.environ.get(CAP_ENV)
    if env:
        try:
            value = int(env)
        except ValueError:
            raise UsageError(f"{CAP_ENV} must be an integer, got {env!r}") from None
        if value < 0:
            raise UsageError(f"{CAP_ENV} must be nonnegative")
        return value
    return default


def _triple(args) -> SchemeParams:
    return SchemeParams(args.n, args.k, args.t)


# -- commands ----------------------------------------------------------------
# Each returns (exit_code, results_dict, text_lines).

def cmd_verify_equality(args):
    mode = args.mode
    n_max = args.n_max if args.n_max is not None else (24 if mode == "coefficients" else 12)
    k_max = args.k_max if args.k_max is not None else (8 if mode == "coefficients" else 5)
    triples = valid_triples(n_max, k_max, args.n_min)
    if not triples:
        raise UsageError(f"no valid (n,k,t) with {args.n_min} <= n <= {n_max}, k <= {k_max}")
    cap = _cap(args, DEFAULT_MATERIALIZE_CAP)
    rows = []
    lines = []
    all_ok = True
    for p in triples:
        rep = verify_equality(p, mode, cap=cap)
        ids = [verify_coefficient_identity(p, i) for i in range(p.t)]
        ok = rep.equal and all(c.holds for c in ids)
        all_ok &= ok
        row = {
            "n": p.n, "k": p.k, "t": p.t, "equal": rep.equal,
            "identity": [{"i": c.i, "lhs": _r(c.lhs), "rhs": _r(c.rhs), "holds": c.holds} for c in ids],
        }
        if not rep.equal:
            row["mismatches"] = [{"index": m, "schrijver": _r(a), "wilson": _r(b)} for m, a, b in rep.mismatches]
            if rep.first_entry_mismatch:
                row["first_entry_mismatch"] = list(rep.first_entry_mismatch)
        rows.append(row)
        lines.append(f"({p.n},{p.k},{p.t}) {'equal' if ok else 'NOT EQUAL'}")
    lines.append(f"{sum(r['equal'] for r in rows)}/{len(rows)} triples equal ({mode})")
    results = {"mode": mode, "n_min": args.n_min, "n_max": n_max, "k_max": k_max, "triples": rows, "all_equal": all_ok}
    return (EXIT_OK if all_ok else EXIT_FAILED), results, lines


def cmd_coeffs(args):
    p = _triple(args)
    vec = convert(descriptor(p, args.matrix).coeffs, args.basis)
    results = {"params": _params_json(p), "matrix": args.matrix, "basis": args.basis, "coefficients": _coeffs_json(vec)}
    lines = [f"{args.matrix} ({p.n},{p.k},{p.t}) in basis {args.basis}:"]
    lines += [f"  {key}: {val}" for key, val in results["coefficients"].items()] or ["  0"]
    return EXIT_OK, results, lines


def _psd_json(c) -> dict:
    out = {"verdict": c.verdict, "positive_pivots": len(c.pivots)}
    if not c.is_psd:
        out["failure"] = c.failure
        out["failure_at"] = list(c.failure_at)
        out["witness"] = [_r(x) for x in c.witness]
        out["witness_value"] = _r(c.witness_value)
    return out


def cmd_spectrum(args):
    p = _triple(args)
    cap = _cap(args, DEFAULT_SPECTRAL_CAP)
    cert = certify_extremes(p, descriptor(p, args.matrix), cap=cap)
    results = {
        "params": _params_json(p),
        "matrix": args.matrix,
        "row_sum_eigenvalue": _r(cert.row_sum_eigenvalue),
        "shifted_psd": _psd_json(cert.shifted_psd),
        "shifted_rank": cert.shifted_rank,
        "top_psd": _psd_json(cert.top_psd),
        "lambda_max_certified": _r(cert.lambda_max_certified) or "uncertified",
        "lambda_min_certified": _r(cert.lambda_min_certified) or "uncertified",
        "hoffman_bound": _r(cert.hoffman_bound),
        "ekr_bound": str(binomial(p.n - p.t, p.k - p.t)),
    }
    lines = [
        f"{args.matrix} ({p.n},{p.k},{p.t}), N = {cert.N}, EKR threshold {p.ekr_threshold}",
        f"  row sum            {results['row_sum_eigenvalue']}",
        f"  M + I              {cert.shifted_psd.verdict}, rank {cert.shifted_rank}",
        f"  lambda_max         {results['lambda_max_certified']}",
        f"  lambda_min         {results['lambda_min_certified']}",
        f"  hoffman bound      {results['hoffman_bound'] or 'absent'}",
    ]
    return (EXIT_OK if cert.certified else EXIT_FAILED), results, lines


def cmd_matrix(args):
    p = _triple(args)
    cap = _cap(args, DEFAULT_MATERIALIZE_CAP)
    M = descriptor(p, args.matrix).materialize(cap=cap)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            nnz = dump_coo(M, fh)
        results = {"params": _params_json(p), "matrix": args.matrix, "path": args.out, "N": M.N, "nnz": nnz}
        return EXIT_OK, results, [f"wrote {args.matrix} ({p.n},{p.k},{p.t}): {M.N}x{M.N}, {nnz} entries to {args.out}"]
    dump_coo(M, args.stdout)
    return EXIT_OK, None, []


def cmd_alpha(args):
    p = _triple(args)
    cap = _cap(args, DEFAULT_BRUTE_CAP)
    res = brute_alpha(p, cap=cap)
    bound = binomial(p.n - p.t, p.k - p.t)
    results = {
        "params": _params_json(p),
        "alpha": res.alpha,
        "ekr_bound": bound,
        "star_size": len(star_family(p)),
        "witness": [list(b) for b in res.witness.blocks],
    }
    lines = [f"alpha(G({p.n},{p.k},{p.t})) = {res.alpha}   (C(n-t,k-t) = {bound})"]
    lines += ["  " + " ".join(map(str, b)) for b in res.witness.blocks]
    return EXIT_OK, results, lines


def cmd_inner_dist(args):
    if args.family:
        fam = SetFamily.read(args.family)
        source = args.family
    elif args.design:
        fam = design_registry(args.design).family
        source = args.design
    else:
        raise UsageError("inner-dist needs --family PATH or --design NAME")
    e = inner_distribution((fam.n, fam.k), fam)
    results = {"source": source, "n": fam.n, "k": fam.k, "size": len(fam), "inner_distribution": [_r(x) for x in e]}
    return EXIT_OK, results, [", ".join(results["inner_distribution"])]


def cmd_designs(args):
    names = [args.name] if args.name else list(DESIGN_NAMES)
    out = []
    lines = []
    ok = True
    for name in names:
        rec = design_registry(name)
        entry = {"name": name, "t": rec.t, "n": rec.n, "k": rec.k, "lambda": rec.lam, "blocks": len(rec.family)}
        lines.append(f"{name}: {rec.t}-({rec.n},{rec.k},{rec.lam}), {len(rec.family)} blocks")
        if args.check:
            rep = design_consistency_check(rec)
            ok &= rep.ok
            entry["inner_distribution"] = [_r(x) for x in rep.inner_distribution]
            entry["a_vector"] = {f"a_{m}": _r(v) for m, v in sorted(rep.a_entries.items(), reverse=True)}
            entry["matches"] = rep.ok
            lines.append(f"  inner distribution {', '.join(entry['inner_distribution'])}")
            for m, v in sorted(rep.a_entries.items(), reverse=True):
                mark = "ok" if m not in rep.mismatches else "MISMATCH"
                lines.append(f"  a_{m} = {_r(v)}  e_{m} = {_r(rep.inner_distribution[m])}  {mark}")
        out.append(entry)
    return (EXIT_OK if ok else EXIT_FAILED), {"designs": out, "all_match": ok}, lines


# -- plumbing ----------------------------------------------------------------

def _nonneg_int(s: str) -> int:
    try:
        v = int(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {s!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {v}")
    return v


def _global_flags(suppress: bool) -> argparse.ArgumentParser:
    d = argparse.SUPPRESS if suppress else None
    g = argparse.ArgumentParser(add_help=False)
    g.add_argument("--format", choices=("text", "json"), default=argparse.SUPPRESS if suppress else "text")
    g.add_argument("--out", default=d, help="write the report (or the matrix) to this path")
    g.add_argument("--cap-n", type=_nonneg_int, default=d, help="override the size cap for this command")
    return g


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ekr-kit", description=__doc__.splitlines()[0], parents=[_global_flags(False)])
    parser.add_argument("--version", action="version", version=f"ekr-kit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    common = [_global_flags(True)]

    def triple(sp):
        sp.add_argument("--n", type=int, required=True)
        sp.add_argument("--k", type=int, required=True)
        sp.add_argument("--t", type=int, required=True)

    sp = sub.add_parser("verify-equality", parents=common, help="check S(n,k,t) == Omega(n,k,t) over a grid")
    sp.add_argument("--n-min", type=int, default=1)
    sp.add_argument("--n-max", type=int)
    sp.add_argument("--k-max", type=int)
    sp.add_argument("--mode", choices=("coefficients", "materialized"), default="coefficients")
    sp.set_defaults(func=cmd_verify_equality)

    sp = sub.add_parser("coeffs", parents=common, help="print basis coefficients of a matrix")
    triple(sp)
    sp.add_argument("--matrix", choices=("schrijver", "wilson"), default="wilson")
    sp.add_argument("--basis", choices=("A", "D"), default="D")
    sp.set_defaults(func=cmd_coeffs)

    sp = sub.add_parser("spectrum", parents=common, help="certify extreme eigenvalues and the Hoffman bound")
    triple(sp)
    sp.add_argument("--matrix", choices=("schrijver", "wilson"), default="wilson")
    sp.set_defaults(func=cmd_spectrum)

    sp = sub.add_parser("matrix", parents=common, help="export a dense matrix in rational-coo format")
    triple(sp)
    sp.add_argument("--matrix", choices=("schrijver", "wilson"), default="wilson")
    sp.set_defaults(func=cmd_matrix)

    sp = sub.add_parser("alpha", parents=common, help="brute-force independence number of G(n,k,t)")
    triple(sp)
    sp.set_defaults(func=cmd_alpha)

    sp = sub.add_parser("inner-dist", parents=common, help="inner distribution of a set family")
    sp.add_argument("--family", help="block file ('n=<int> k=<int>' header, one block per line)")
    sp.add_argument("--design", choices=DESIGN_NAMES)
    sp.set_defaults(func=cmd_inner_dist)

    sp = sub.add_parser("designs", parents=common, help="registered Steiner systems")
    sp.add_argument("--name", choices=DESIGN_NAMES)
    sp.add_argument("--check", action="store_true", help="compare the a-vector with the inner distribution")
    sp.set_defaults(func=cmd_designs)
    return parser


def _emit(args, argv, code, results, lines, elapsed, stdout, stderr) -> int:
    if results is None:
        return code
    if args.format == "json":
        report = {
            "command": args.command,
            "argv": list(argv),
            "exit_code": code,
            "results": results,
            "backend": _kernels.BACKEND,
            "version": __version__,
            "timing_seconds": round(elapsed, 6),
        }
        text = json.dumps(report, indent=2) + "\n"
    else:
        text = "\n".join(lines) + "\n"
    if args.out and args.command != "matrix":
        try:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            stderr.write(f"ekr-kit: {exc}\n")
            return EXIT_IO
    else:
        stdout.write(text)
    return code


def main(argv=None, stdout=None, stderr=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        stderr.write(f"ekr-kit: error: {exc}\n")
        return EXIT_INVALID
    for name, default in (("format", "text"), ("out", None), ("cap_n", None)):
        if not hasattr(args, name):
            setattr(args, name, default)
    args.stdout = stdout
    start = time.perf_counter()
    try:
        code, results, lines = args.func(args)
    except (UsageError, DomainError) as exc:
        stderr.write(f"ekr-kit: error: {exc}\n")
        return EXIT_INVALID
    except ResourceError as exc:
        stderr.write(f"ekr-kit: {exc}\n")
        return EXIT_RESOURCE
    except OSError as exc:
        stderr.write(f"ekr-kit: {exc}\n")
        return EXIT_IO
    except EkrError as exc:
        stderr.write(f"ekr-kit: internal error: {exc}\n")
        return EXIT_FAILED
    return _emit(args, argv, code, results, lines, time.perf_counter() - start, stdout, stderr)


if __name__ == "__main__":
    sys.exit(main())
