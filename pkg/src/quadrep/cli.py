"""Command-line entry point: ``quadrep <subcommand> [flags]``.

Exit codes: 0 success, 1 computational error (or a failed exact check in
verify-all), 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import reports
from .errors import QuadRepError

EXIT_OK, EXIT_COMPUTE, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _rational(s: str) -> Fraction:
    try:
        v = Fraction(s)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {s!r}")
    return v


def _int_list(s: str) -> list[int]:
    try:
        return [int(x) for x in s.replace(" ", "").split(",") if x]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers: {s!r}")


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="quadrep", description="Representation numbers of positive definite forms")
    sub = p.add_subparsers(dest="cmd", required=True, metavar="subcommand")

    def add(name, help_, *flags):
        sp = sub.add_parser(name, help=help_)
        for f in flags:
            FLAGS[f](sp)
        sp.add_argument("--format", choices=("csv", "json"), default="csv")
        sp.add_argument("--out", metavar="DIR")
        return sp

    add("validate", "check a form file and print its invariants", "form")
    add("count", "r(Q, n) by exact enumeration", "form", "n", "budget", "threads")
    add("minima", "successive minima with witness vectors", "form", "budget")
    add("density", "sigma_infinity, every finite sigma_p and the tail enclosure", "form", "n", "cutoff")
    add("rho", "enclosure of the main term rho(n, Q)", "form", "n", "cutoff")
    add("split", "r = rho + tau with interval enclosures", "form", "n", "cutoff", "budget", "threads")
    add("pairs", "pair table A_d(n, t) for all t", "d", "n")
    sp = add("caps", "cap counts mu(x; n, Y) over the sphere", "d", "n", "Y2")
    sp.add_argument("--threshold", type=float, help="default: natural log of n")
    sp = add("ortho", "pair count via orthogonal lattices, or the lattice orthogonal to --v", "d", "n", "t")
    sp.add_argument("--v", type=_int_list, metavar="INTS", help="comma-separated integer vector")
    sp = add("verify-all", "run every acceptance check and write reports",
             "eps", "cutoff", "seed", "threads", "budget")
    sp.add_argument("--profile", choices=("quick", "full"), default="quick")
    sp.add_argument("--only", type=_int_list, metavar="IDS", help="criteria ids 1-10")
    sp.add_argument("--skip-determinism", action="store_true")
    sp = add("generate-family", "seeded test family as form JSON", "seed")
    sp.add_argument("--count", type=int, default=20)
    sp.add_argument("--H", type=int, default=3)
    sp.add_argument("--k", type=_int_list, default=[4, 5, 6], metavar="INTS")
    return p


FLAGS = {
    "form": lambda sp: sp.add_argument("--form", required=True, metavar="PATH"),
    "n": lambda sp: sp.add_argument("--n", type=int, required=True),
    "d": lambda sp: sp.add_argument("--d", type=int, required=True),
    "t": lambda sp: sp.add_argument("--t", type=int),
    "Y2": lambda sp: sp.add_argument("--Y2", type=_rational, required=True, metavar="RATIONAL"),
    "eps": lambda sp: sp.add_argument("--eps", type=float, default=0.1),
    "cutoff": lambda sp: sp.add_argument("--cutoff", type=int, default=10**4),
    "seed": lambda sp: sp.add_argument("--seed", type=int, default=2026),
    "threads": lambda sp: sp.add_argument("--threads", type=int),
    "budget": lambda sp: sp.add_argument("--budget", type=int, default=10**9),
}


def _check(cond, msg):
    if not cond:
        raise UsageError(msg)


def _threads(args) -> int:
    t = args.threads
    if t is None:
        env = os.environ.get("QUADREP_THREADS")
        if env:
            _check(env.isdigit(), f"QUADREP_THREADS must be a positive integer, got {env!r}")
            t = int(env)
        else:
            t = 1
    _check(t >= 1, "--threads must be >= 1")
    return t


def _load_form(path: str):
    from .forms import QuadraticForm

    try:
        with open(path) as fh:
            return QuadraticForm.from_json(json.load(fh))
    except (OSError, json.JSONDecodeError, KeyError, TypeError, ValueError) as e:
        raise UsageError(f"--form {path}: {e}")


def _validate(args):
    """Input checks that run before any expensive work."""
    g = vars(args)
    if "threads" in g:
        args.threads = _threads(args)
    if g.get("n") is not None:
        _check(args.n >= (0 if args.cmd in ("count", "split") else 1), f"--n must be positive, got {args.n}")
    if g.get("d") is not None:
        _check(args.d >= 1, f"--d must be >= 1, got {args.d}")
    if g.get("budget") is not None:
        _check(args.budget >= 1, "--budget must be positive")
    if g.get("cutoff") is not None:
        _check(args.cutoff >= 2, "--cutoff must be >= 2")
    if g.get("eps") is not None:
        _check(args.eps > 0, "--eps must be positive")
    if g.get("Y2") is not None:
        _check(args.Y2 >= 0, "--Y2 must be nonnegative")
    if args.cmd == "ortho":
        if args.v is None:
            _check(args.t is not None, "ortho needs --t (or --v)")
            _check(-args.n <= args.t <= args.n, "--t must satisfy -n <= t <= n")
        else:
            _check(len(args.v) == args.d, f"--v has {len(args.v)} entries but --d is {args.d}")
            _check(any(args.v), "--v must be nonzero")
    if args.cmd == "generate-family":
        _check(args.count >= 1, "--count must be >= 1")
        _check(args.H >= 1, "--H must be >= 1")
        _check(all(k >= 1 for k in args.k) and args.k, "--k must list positive ranks")
    if args.cmd == "verify-all" and args.only:
        _check(all(1 <= i <= 10 for i in args.only), "--only takes criteria ids 1-10")
    if g.get("form"):
        args.form_obj = _load_form(args.form)


# ---------------------------------------------------------------- output

def _emit(args, name: str, header, rows, scalars: dict | None = None):
    if args.format == "json":
        obj = dict(scalars or {})
        if header is not None:
            obj["rows"] = [dict(zip(header, [reports.fmt_value(v) for v in r])) for r in rows]
        text = reports.json_text(obj)
        fname = f"{name}.json"
    else:
        if header is None:
            header, rows = list(scalars), [list(scalars.values())]
        text = reports.csv_text(header, rows)
        fname = f"{name}.csv"
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        with open(os.path.join(args.out, fname), "w", newline="") as fh:
            fh.write(text)
    sys.stdout.write(text)


def _iv(iv):
    lo, hi = reports.fmt_interval(iv)
    return lo, hi


# ---------------------------------------------------------------- commands

def cmd_validate(args):
    f = args.form_obj
    _emit(args, "validate", None, None,
          {"dim": f.dim, "discriminant": f.discriminant, "level": f.level, "primitive": f.primitive})


def cmd_count(args):
    from .enumeration import count_representations

    r = count_representations(args.form_obj, args.n, budget=args.budget, threads=_threads(args))
    if args.format == "csv" and not args.out:
        print(r)
        return
    _emit(args, "count", None, None, {"n": args.n, "r": r})


def cmd_minima(args):
    from .forms import successive_minima

    prof = successive_minima(args.form_obj, budget=args.budget)
    rows = [(i + 1, m, " ".join(map(str, w))) for i, (m, w) in enumerate(zip(prof.minima, prof.witnesses))]
    _emit(args, "minima", ["index", "minimum", "witness"], rows)


def cmd_density(args):
    from .local_densities import density_profile

    prof = density_profile(args.form_obj, args.n, args.cutoff)
    rows = [("infinity", *_iv(prof.sigma_infinity)), ("tail", *_iv(prof.tail))]
    rows += [(p, str(s), str(s)) for p, s in sorted(prof.finite_densities.items())]
    rows.append(("rho", *_iv(prof.rho)))
    _emit(args, "density", ["place", "lo", "hi"], rows)


def cmd_rho(args):
    from .local_densities import rho

    lo, hi = _iv(rho(args.form_obj, args.n, args.cutoff))
    _emit(args, "rho", None, None, {"n": args.n, "rho_lo": lo, "rho_hi": hi})


def cmd_split(args):
    from .eisenstein import split
    from .enumeration import count_representations

    r = count_representations(args.form_obj, args.n, budget=args.budget, threads=_threads(args))
    sp = split(args.form_obj, args.n, args.cutoff, r=r)
    rl, rh = _iv(sp.rho)
    tl, th = _iv(sp.tau)
    _emit(args, "split", None, None, {"n": args.n, "r": sp.r, "rho_lo": rl, "rho_hi": rh, "tau_lo": tl, "tau_hi": th})


def cmd_pairs(args):
    from .sphere import pair_table

    tab = pair_table(args.d, args.n)
    _emit(args, "pairs", ["t", "A"], sorted(tab.table.items(), reverse=True))


def cmd_caps(args):
    from .sphere import cap_stats

    st = cap_stats(args.d, args.n, args.Y2, args.threshold)
    thr = f"{st.threshold:.12f}" if isinstance(st.threshold, float) else str(st.threshold)
    if args.format == "json":
        _emit(args, "caps", ["mu", "points"], sorted(st.histogram.items()),
              {"d": args.d, "n": args.n, "Y2": args.Y2, "size": st.size, "mean": st.mean,
               "threshold": thr, "probability_above": st.threshold_prob})
        return
    rows = [("size", st.size), ("mean", st.mean), ("threshold", thr), ("probability_above", st.threshold_prob)]
    rows += [(f"hist_{m}", c) for m, c in sorted(st.histogram.items())]
    _emit(args, "caps", ["key", "value"], rows)


def cmd_ortho(args):
    if args.v is not None:
        from .forms import ortho_lattice

        L = ortho_lattice(args.v)
        rows = [(i + 1, " ".join(map(str, b)), " ".join(map(str, g))) for i, (b, g) in enumerate(zip(L.basis, L.gram))]
        if args.format == "json":
            _emit(args, "ortho", ["index", "basis", "gram_row"], rows, {"v": args.v, "disc": L.disc})
        else:
            _emit(args, "ortho", ["index", "basis", "gram_row"], rows)
        return
    from .sphere import pair_count_via_ortho

    a = pair_count_via_ortho(args.d, args.n, args.t)
    _emit(args, "ortho", None, None, {"d": args.d, "n": args.n, "t": args.t, "A": a})


def cmd_verify_all(args):
    from .verify import RunConfig, verify_all

    cfg = RunConfig(eps=args.eps, cutoff=args.cutoff, budget=args.budget, threads=_threads(args),
                    out=args.out, fmt=args.format, seed=args.seed, profile=args.profile)
    results, written = verify_all(cfg, log=lambda line: print(line, flush=True),
                                  determinism=not args.skip_determinism, only=args.only)
    for path in written:
        print(f"wrote {path}")
    failed = [r.id for r in results if r.kind == "exact" and not r.passed]
    flagged = [r.id for r in results if r.kind == "report" and not r.passed]
    print(f"exact failures: {failed or 'none'}; flagged reports: {flagged or 'none'}")
    return EXIT_COMPUTE if failed else EXIT_OK


def cmd_generate_family(args):
    from .family import FamilySpec, generate_family

    spec = FamilySpec(seed=args.seed, k_values=tuple(args.k), count=args.count, H=args.H)
    generate_family(spec)
    obj = {"seed": args.seed, "H": args.H, "k_values": list(args.k),
           "forms": [{"id": i, **f.to_json()} for i, f in zip(spec.ids, spec.forms)]}
    text = reports.json_text(obj)
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        for i, f in zip(spec.ids, spec.forms):
            reports.write_json(os.path.join(args.out, f"{i}.json"), f.to_json())
        reports.write_json(os.path.join(args.out, "family.json"), obj)
    sys.stdout.write(text)


COMMANDS = {
    "validate": cmd_validate, "count": cmd_count, "minima": cmd_minima, "density": cmd_density,
    "rho": cmd_rho, "split": cmd_split, "pairs": cmd_pairs, "caps": cmd_caps, "ortho": cmd_ortho,
    "verify-all": cmd_verify_all, "generate-family": cmd_generate_family,
}


def run_subcommand(argv) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:  # argparse already printed the offending flag
        return EXIT_USAGE if e.code else EXIT_OK
    try:
        _validate(args)
        rc = COMMANDS[args.cmd](args)
    except UsageError as e:
        print(f"quadrep {args.cmd}: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (QuadRepError, ValueError) as e:
        print(f"quadrep {args.cmd}: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_COMPUTE
    return rc or EXIT_OK


def main(argv=None) -> None:
    sys.exit(run_subcommand(sys.argv[1:] if argv is None else argv))


if __name__ == "__main__":
    main()
