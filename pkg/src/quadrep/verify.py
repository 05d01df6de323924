"""Batch verification: every exact identity and every bound-ratio report.

Each ``check_*`` function is one acceptance criterion.  ``verify_all`` runs
them at the sizes of a profile ('quick' or 'full') and writes the reports.
Report files never contain timings, thread counts or paths, so they are
byte-identical across runs and thread counts.
"""
from __future__ import annotations

import math
import os
import tempfile
import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from sympy import primerange

from . import reports
from .eisenstein import (
    BoundReport,
    cor42_ratio,
    lemma33_ratio,
    lemma41_ratio,
    split,
    theorem14_condition,
    theorem14_ratio,
)
from .enumeration import count_representations, cumulative_counts, naive_box_counts, representation_numbers
from .errors import QuadRepError
from .family import FamilySpec, generate_family, small_discriminant_family
from .forms import scaled_identity, successive_minima
from .gauss import gauss_sum, gauss_sums_direct_all, ramanujan_sum, ramanujan_table
from .local_densities import rho, sigma_infinity, sigma_infinity_sphere_volume, sigma_p, sigma_p_direct
from .reports import fmt_interval
from .sphere import (
    OrthoPairCounter,
    cap_stats,
    covering_check,
    even_floor_of_power,
    mean_mu_identity,
    pair_table,
    pair_table_via_ortho,
)


@dataclass
class RunConfig:
    eps: float = 0.1
    cutoff: int = 10**4
    budget: int = 10**9
    threads: int = 1
    out: str | None = None
    fmt: str = "csv"
    seed: int = 2026
    profile: str = "quick"

    def __post_init__(self):
        if self.budget <= 0 or self.threads <= 0 or self.cutoff < 2:
            raise ValueError("budget, threads must be positive and cutoff >= 2")
        if self.fmt not in ("csv", "json"):
            raise ValueError("format must be csv or json")
        if self.profile not in PROFILES:
            raise ValueError(f"unknown profile {self.profile!r}")


PROFILES = {
    "full": dict(
        c1_forms=20, c1_nmax=200, c1_H=3,
        c2_forms=20, c2_nmax=50, c2_primes=(2, 3, 5, 7, 11, 13),
        c3_odd=999, c3_direct=500, c3_ram=10**4,
        c4_nmax=200,
        c5=((5, 120), (6, 60)),
        c6_nmax=120,
        c8_ns=(400, 900, 2500),
        c9_ns=(400, 900, 2500, 4900),
        c10_t14=(256, 65536), c10_l33=((5, 512, 10**5), (6, 2048, 10**4)), c10_l33_forms=4,
        c10_l41=((5, 1024), (6, 362)), c10_c42_x=(8, 128),
    ),
    "quick": dict(
        c1_forms=4, c1_nmax=40, c1_H=3,
        c2_forms=3, c2_nmax=8, c2_primes=(2, 3, 5),
        c3_odd=99, c3_direct=60, c3_ram=500,
        c4_nmax=12,
        c5=((5, 12), (6, 6)),
        c6_nmax=12,
        c8_ns=(400,),
        c9_ns=(400, 900),
        c10_t14=(256, 2048), c10_l33=((5, 64, 10**4),), c10_l33_forms=2,
        c10_l41=((5, 64),), c10_c42_x=(8, 32),
    ),
}

CRITERIA = {
    1: "representation counts match box enumeration",
    2: "local densities match stabilized direct counts",
    3: "Gauss and Ramanujan sums match literal sums",
    4: "calibrated main term contains r(2I8, n)",
    5: "pair table equals orthogonal-lattice count",
    6: "mean cap count identity",
    7: "pair table invariants",
    8: "covering regime: P[mu > log n] > 1/2",
    9: "small-cap regime: mean cap count does not grow",
    10: "bound ratios stable across the n-range",
    11: "reports byte-identical across runs and threads",
}


@dataclass
class CheckResult:
    id: int
    name: str
    kind: str  # 'exact' or 'report'
    passed: bool
    detail: str
    seconds: float = 0.0
    tables: dict = field(default_factory=dict)  # table name -> (header, rows)
    summary: dict = field(default_factory=dict)

    def line(self) -> str:
        tag = "PASS" if self.passed else ("FAIL" if self.kind == "exact" else "FLAG")
        return f"[{tag}] criterion {self.id:2d}: {self.name} ({self.seconds:.1f}s) {self.detail}"


def _family(cfg: RunConfig, count: int, H: int):
    spec = FamilySpec(seed=cfg.seed, k_values=(4, 5, 6), count=count, H=H)
    forms = generate_family(spec)
    return list(zip(spec.ids, forms))


# ---------------------------------------------------------------- criteria

def check_counts(cfg: RunConfig, forms: int, n_max: int, H: int = 3) -> CheckResult:
    bad = []
    for fid, f in _family(cfg, forms, H):
        box = naive_box_counts(f, n_max)
        for n in range(n_max + 1):
            r = count_representations(f, n, budget=cfg.budget, threads=cfg.threads)
            if r != box[n]:
                bad.append((fid, n, r, box[n]))
    return CheckResult(1, CRITERIA[1], "exact", not bad,
                       f"{forms} forms, n <= {n_max}, mismatches={len(bad)}" + (f" first={bad[0]}" if bad else ""))


def check_local_densities(cfg: RunConfig, forms: int, n_max: int, primes) -> CheckResult:
    bad = []
    for fid, f in _family(cfg, forms, 3):
        for n in range(1, n_max + 1):
            for p in primes:
                direct = sigma_p_direct(f, n, p)  # three stabilization levels checked inside
                fast = sigma_p(f, n, p)
                formula = sigma_p(f, n, p, method="formula")
                if not direct == fast == formula:
                    bad.append((fid, n, p, str(direct), str(fast), str(formula)))
    return CheckResult(2, CRITERIA[2], "exact", not bad,
                       f"{forms} forms, n <= {n_max}, p in {list(primes)}, mismatches={len(bad)}"
                       + (f" first={bad[0]}" if bad else ""))


def check_gauss_ramanujan(odd_max: int, direct_max: int, ram_max: int) -> CheckResult:
    errs = []
    for m in range(1, odd_max + 1, 2):
        for h in range(1, m + 1):
            if gcd(h, m) == 1 and gauss_sum(h, m).abs2() != m:
                errs.append(("abs2", h, m))
    worst = 0.0
    for m in range(1, direct_max + 1):
        direct = gauss_sums_direct_all(m)
        for h in range(m):
            if gcd(h, m) == 1:
                z = complex(gauss_sum(h, m))
                worst = max(worst, abs(z - complex(direct[h])))
    if worst > 1e-9:
        errs.append(("direct", worst))
    qs = sorted((p, t) for p in primerange(2, ram_max + 1) for t in range(1, ram_max.bit_length() + 1)
                if p**t <= ram_max)
    for p, t in qs:
        q = p**t
        # both sides are q-periodic in n, so one full period covers every n
        closed = [ramanujan_sum(n, p, t) for n in range(q)]
        if closed != ramanujan_table(q):
            errs.append(("ramanujan", q))
    return CheckResult(3, CRITERIA[3], "exact", not errs,
                       f"odd m <= {odd_max}, direct m <= {direct_max} (max err {worst:.2e}), "
                       f"{len(qs)} prime powers <= {ram_max}; errors={len(errs)}")


def check_calibration(cfg: RunConfig, n_max: int) -> CheckResult:
    f = scaled_identity(8)
    r = representation_numbers(f, n_max, budget=cfg.budget, threads=cfg.threads)
    sphere_scale = sigma_infinity_sphere_volume(f) / sigma_infinity(f)
    rows = []
    outside = []
    worst = Fraction(0)
    worst_sphere = Fraction(0)
    for n in range(1, n_max + 1):
        rh = rho(f, n, cfg.cutoff)
        tau_hi = max(abs(r[n] - rh.lo), abs(r[n] - rh.hi))
        if not rh.contains(r[n]):
            outside.append(n)
        worst = max(worst, tau_hi / r[n])
        alt = rh * sphere_scale
        worst_sphere = max(worst_sphere, min(abs(r[n] - alt.lo), abs(r[n] - alt.hi)) / r[n])
        lo, hi = fmt_interval(rh)
        tl, th = fmt_interval(rh.__rsub__(r[n]))
        rows.append((n, r[n], lo, hi, tl, th, reports.fmt_endpoint(tau_hi / r[n], "up")))
    ok = not outside and worst <= Fraction(1, 100)
    return CheckResult(
        4, CRITERIA[4], "exact", ok,
        f"n <= {n_max}, cutoff {cfg.cutoff}: outside={outside[:5]}, max|tau|/r={float(worst):.3e}; "
        f"with vol(S^(k-1))/sqrt(D) the min |tau|/r would be {float(worst_sphere):.3f}",
        tables={"calibration": (["n", "r", "rho_lo", "rho_hi", "tau_lo", "tau_hi", "abs_tau_over_r"], rows)},
        summary={"max_abs_tau_over_r": reports.fmt_endpoint(worst, "up"),
                 "sphere_volume_constant_ratio": reports.fmt_endpoint(sphere_scale.hi, "up")},
    )


def check_pairs(grid) -> tuple[CheckResult, CheckResult, dict]:
    """Criteria 5 and 7 on the same grid; returns the naive tables for reuse."""
    mism, inv_err = [], []
    tables = {}
    rows = []
    for d, n_max in grid:
        counter = OrthoPairCounter(d)
        for n in range(1, n_max + 1):
            a = pair_table(d, n)
            b = pair_table_via_ortho(d, n, counter)
            tables[(d, n)] = a
            same = a.table == b.table
            errs = a.check_invariants()
            if not same:
                mism.append((d, n))
            if errs:
                inv_err.append((d, n, errs))
            rows.append((d, n, a.size, same, not errs))
    grid_s = ", ".join(f"d={d} n<={m}" for d, m in grid)
    c5 = CheckResult(5, CRITERIA[5], "exact", not mism, f"{grid_s}: mismatches={mism[:5]}",
                     tables={"pairs": (["d", "n", "size", "methods_agree", "invariants_ok"], rows)})
    c7 = CheckResult(7, CRITERIA[7], "exact", not inv_err, f"{grid_s}: violations={inv_err[:3]}")
    return c5, c7, tables


def check_mean_identity(d: int, n_max: int, tables: dict | None = None) -> CheckResult:
    bad = []
    count = 0
    for n in range(1, n_max + 1):
        ysqs = sorted({1, 2, 3, 4, 8, 2 * math.ceil(n ** 0.25 - 1e-12)})
        tab = (tables or {}).get((d, n)) or pair_table(d, n)
        for y in ysqs:
            lhs, rhs = mean_mu_identity(d, n, y, tab)
            count += 1
            if lhs != rhs:
                bad.append((n, y, str(lhs), str(rhs)))
    return CheckResult(6, CRITERIA[6], "exact", not bad, f"d={d}, n <= {n_max}, {count} cases, unequal={bad[:3]}")


def check_covering(ns, d: int = 5) -> CheckResult:
    rows = []
    fails = []
    for n in ns:
        m = even_floor_of_power(n, 2 * (1 / 8 + 0.05))
        rep = covering_check(d, n, m)
        rows.append((d, n, m, f"{rep.threshold:.12f}", rep.size, rep.probability,
                     reports.fmt_endpoint(rep.probability, "down"), rep.majority))
        if not rep.majority:
            fails.append(n)
    return CheckResult(8, CRITERIA[8], "report", not fails,
                       f"n in {list(ns)}: P = " + ", ".join(str(r[6]) for r in rows),
                       tables={"covering": (["d", "n", "Y2_effective", "threshold", "size", "probability",
                                             "probability_decimal", "majority"], rows)})


def check_small_caps(ns, d: int = 5) -> CheckResult:
    rows = []
    means = []
    for n in ns:
        m = even_floor_of_power(n, 2 * (1 / 8 - 0.05))
        st = cap_stats(d, n, max(m, 0), threshold=0)
        means.append(st.mean)
        rows.append((d, n, m, st.size, st.mean, reports.fmt_endpoint(st.mean, "up")))
    ok = max(means) <= means[0]
    return CheckResult(9, CRITERIA[9], "report", ok,
                       "mean mu = " + ", ".join(f"{n}:{float(v):.4f}" for n, v in zip(ns, means)),
                       tables={"small_caps": (["d", "n", "Y2_effective", "size", "mean_mu", "mean_mu_decimal"], rows)})


def _log_grid(lo: int, hi: int, per_octave: int):
    out = set()
    i = 0
    while True:
        v = round(lo * 2 ** (i / per_octave))
        if v > hi:
            break
        out.add(v)
        i += 1
    return sorted(out)


def check_bounds(cfg: RunConfig, prof: dict) -> CheckResult:
    eps = cfg.eps
    t14 = BoundReport("theorem14", eps)
    t14n = BoundReport("theorem14_level", eps)
    l33 = BoundReport("lemma33", eps)
    l33h = BoundReport("lemma33_gcd_half", eps)
    l41 = BoundReport("lemma41", eps)
    c42 = BoundReport("cor42", eps)
    rows = {}

    def row(fid, f, n):
        key = (fid, n)
        if key not in rows:
            rows[key] = {"form_id": fid, "k": f.dim, "D": f.discriminant, "N": f.level, "n": n}
        return rows[key]

    lo, hi = prof["c10_t14"]
    for name, f in small_discriminant_family(cfg.seed, 4):
        fid = f"{name}-k4"
        for n in _log_grid(lo, hi, 4):
            if not theorem14_condition(f, n):
                continue
            r = count_representations(f, n, budget=cfg.budget, threads=cfg.threads)
            a = theorem14_ratio(f, n, eps, r=r)
            b = theorem14_ratio(f, n, eps, r=r, modulus="N")
            t14.add(fid, n, a)
            t14n.add(fid, n, b)
            rw = row(fid, f, n)
            rw.update(r=r, theorem14=a, theorem14_level=b, condition_ok=True)

    for k, top, cutoff in prof["c10_l33"]:
        spec = FamilySpec(seed=cfg.seed, k_values=(k,), count=prof["c10_l33_forms"], H=1)
        generate_family(spec)
        for fid, f in zip(spec.ids, spec.forms):
            for n in _log_grid(16, top, 2):
                r = count_representations(f, n, budget=cfg.budget, threads=cfg.threads)
                sp = split(f, n, cutoff, r=r)
                a = lemma33_ratio(f, n, eps, sp=sp)
                b = lemma33_ratio(f, n, eps, sp=sp, gcd_power=Fraction(1, 2))
                l33.add(fid, n, a)
                l33h.add(fid, n, b)
                rw = row(fid, f, n)
                rw.update(r=r, rho=sp.rho, tau=sp.tau, lemma33=a, lemma33_gcd_half=b,
                          condition_ok=theorem14_condition(f, n))

    xlo, xhi = prof["c10_c42_x"]
    c42_rows = []
    for k, top in prof["c10_l41"]:
        for name, f in small_discriminant_family(cfg.seed, k):
            fid = f"{name}-k{k}"
            mins = successive_minima(f).minima
            for n in _log_grid(16, top, 2):
                r = count_representations(f, n, budget=cfg.budget, threads=cfg.threads)
                a = lemma41_ratio(f, n, eps, minima=mins, r=r)
                l41.add(fid, n, a)
                rw = row(fid, f, n)
                rw.update(r=r, lemma41=a, condition_ok=theorem14_condition(f, n))
            for x in _log_grid(xlo, xhi, 2):
                s1, s2 = cumulative_counts(f, x, budget=cfg.budget, threads=cfg.threads)
                a = cor42_ratio(f, x, eps, second_moment=s2)
                c42.add(fid, x, a)
                lo_s, hi_s = fmt_interval(a)
                c42_rows.append((fid, f.dim, f.discriminant, f.level, x, s1, s2, lo_s, hi_s))

    ratio_names = ["theorem14", "theorem14_level", "lemma33", "lemma33_gcd_half", "lemma41"]
    header = ["form_id", "k", "D", "N", "n", "r", "rho_lo", "rho_hi", "tau_lo", "tau_hi"]
    for nm in ratio_names:
        header += [f"ratio_{nm}_lo", f"ratio_{nm}_hi"]
    header.append("condition_ok")
    out_rows = []
    for key in sorted(rows):
        rw = rows[key]
        line = [rw["form_id"], rw["k"], rw["D"], rw["N"], rw["n"], rw.get("r")]
        for nm in ("rho", "tau"):
            line += list(fmt_interval(rw[nm])) if nm in rw else ["", ""]
        for nm in ratio_names:
            line += list(fmt_interval(rw[nm])) if nm in rw else ["", ""]
        line.append(rw.get("condition_ok"))
        out_rows.append(line)

    reps = [t14, t14n, l33, l33h, l41, c42]
    summ = {}
    for rep in reps:
        lo_m, hi_m = rep.half_maxima()
        summ[rep.name] = {
            "points": len(rep.included()),
            "family_max": reports.fmt_endpoint(rep.family_max(), "up"),
            "lower_half_max": reports.fmt_endpoint(lo_m, "up"),
            "upper_half_max": reports.fmt_endpoint(hi_m, "up"),
            "stable": rep.stable(),
            "eps": eps,
        }
    checked = [t14, l33, l41, c42]
    ok = all(rep.stable() and rep.included() for rep in checked)
    detail = "; ".join(
        f"{rep.name}: {float(rep.half_maxima()[0]):.3e} -> {float(rep.half_maxima()[1]):.3e}" for rep in checked
    )
    return CheckResult(
        10, CRITERIA[10], "report", ok, detail,
        tables={
            "bounds": (header, out_rows),
            "cor42": (["form_id", "k", "D", "N", "x", "sum_r", "sum_r2", "ratio_lo", "ratio_hi"], c42_rows),
        },
        summary=summ,
    )


# ---------------------------------------------------------------- driver

def _timed(fn, *a, **kw):
    t = time.perf_counter()
    res = fn(*a, **kw)
    dt = time.perf_counter() - t
    for r in res if isinstance(res, tuple) else (res,):
        if isinstance(r, CheckResult):
            r.seconds = dt
    return res


def run_checks(cfg: RunConfig, only=None, log=None) -> list[CheckResult]:
    prof = PROFILES[cfg.profile]
    want = set(only or range(1, 11))
    results = []

    def emit(r):
        results.append(r)
        if log:
            log(r.line())

    def guarded(cid, fn, *a):
        try:
            return _timed(fn, *a)
        except QuadRepError as e:
            return CheckResult(cid, CRITERIA[cid], "exact", False, f"error: {type(e).__name__}: {e}")

    if 1 in want:
        emit(guarded(1, check_counts, cfg, prof["c1_forms"], prof["c1_nmax"], prof["c1_H"]))
    if 2 in want:
        emit(guarded(2, check_local_densities, cfg, prof["c2_forms"], prof["c2_nmax"], prof["c2_primes"]))
    if 3 in want:
        emit(guarded(3, check_gauss_ramanujan, prof["c3_odd"], prof["c3_direct"], prof["c3_ram"]))
    if 4 in want:
        emit(guarded(4, check_calibration, cfg, prof["c4_nmax"]))
    tables = {}
    if want & {5, 7}:
        res = guarded(5, check_pairs, prof["c5"])
        if isinstance(res, CheckResult):
            emit(res)
        else:
            c5, c7, tables = res
            if 5 in want:
                emit(c5)
            if 7 in want:
                emit(c7)
    if 6 in want:
        emit(guarded(6, check_mean_identity, 5, prof["c6_nmax"], tables))
    if 8 in want:
        emit(guarded(8, check_covering, prof["c8_ns"]))
    if 9 in want:
        emit(guarded(9, check_small_caps, prof["c9_ns"]))
    if 10 in want:
        emit(guarded(10, check_bounds, cfg, prof))
    results.sort(key=lambda r: r.id)
    return results


def write_reports(cfg: RunConfig, results: list[CheckResult], out: str) -> list[str]:
    os.makedirs(out, exist_ok=True)
    written = []
    for r in results:
        for name, (header, rows) in sorted(r.tables.items()):
            if cfg.fmt == "csv":
                path = os.path.join(out, f"{name}.csv")
                reports.write_csv(path, header, rows)
            else:
                path = os.path.join(out, f"{name}.json")
                reports.write_json(path, [dict(zip(header, [reports.fmt_value(v) for v in row])) for row in rows])
            written.append(path)
    summary = {
        "config": {"eps": cfg.eps, "cutoff": cfg.cutoff, "budget": cfg.budget, "seed": cfg.seed,
                   "profile": cfg.profile, "format": cfg.fmt},
        "checks": [
            {"id": r.id, "name": r.name, "kind": r.kind, "passed": r.passed, "detail": r.detail, "summary": r.summary}
            for r in results
        ],
        "exact_checks_passed": all(r.passed for r in results if r.kind == "exact"),
    }
    path = os.path.join(out, "summary.json")
    reports.write_json(path, summary)
    written.append(path)
    return sorted(written)


def read_tree(out: str) -> dict:
    res = {}
    for name in sorted(os.listdir(out)):
        with open(os.path.join(out, name), "rb") as fh:
            res[name] = fh.read()
    return res


def check_determinism(cfg: RunConfig, only=None) -> CheckResult:
    """Run the suite twice at 1 thread and once at 8; compare report bytes."""
    trees = []
    for threads in (1, 1, 8):
        c = RunConfig(eps=cfg.eps, cutoff=cfg.cutoff, budget=cfg.budget, threads=threads,
                      fmt=cfg.fmt, seed=cfg.seed, profile="quick")
        with tempfile.TemporaryDirectory() as tmp:
            write_reports(c, run_checks(c, only=only), tmp)
            trees.append(read_tree(tmp))
    same = trees[0] == trees[1] == trees[2]
    return CheckResult(11, CRITERIA[11], "exact", same,
                       f"{len(trees[0])} report files compared across runs (threads 1, 1, 8)")


def verify_all(cfg: RunConfig, log=None, determinism: bool = True, only=None) -> tuple[list[CheckResult], list[str]]:
    """Run the checks (plus the determinism check) and write reports when cfg.out is set."""
    results = run_checks(cfg, only=only, log=log)
    if determinism:
        r11 = _timed(check_determinism, cfg, only)
        if log:
            log(r11.line())
        results.append(r11)
    written = write_reports(cfg, results, cfg.out) if cfg.out else []
    return results, written
