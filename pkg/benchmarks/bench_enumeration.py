"""Compiled vs pure-Python enumeration kernel.

    python benchmarks/bench_enumeration.py [--repeat 3]

Each case is timed under both backends and the counts are checked for
agreement.  The Python kernel is slow, so the cases are kept small.
"""
import argparse
import time

from quadrep.enumeration import available_backends, count_representations, representation_numbers, use_backend
from quadrep.family import FamilySpec, generate_family, small_discriminant_family
from quadrep.forms import scaled_identity

def cases():
    spec = FamilySpec(seed=7, k_values=(4, 5, 6), count=3, H=2)
    generate_family(spec)
    out = [(fid, f, 400) for fid, f in zip(spec.ids, spec.forms)]
    for name, f in small_discriminant_family(2026, 4)[:2]:
        out.append((f"{name}-k4", f, 200))
    out.append(("2I5 (sum)", scaled_identity(5), 60))
    return out


def _time(fn, repeat):
    best, val = float("inf"), None
    for _ in range(repeat):
        t = time.perf_counter()
        val = fn()
        best = min(best, time.perf_counter() - t)
    return best, val


def main(argv=None):
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    backs = available_backends()
    print(f"backends: {', '.join(backs)}")
    print(f"{'case':<18}{'n':>6}" + "".join(f"{b + ' s':>14}" for b in backs) + f"{'speedup':>10}")
    for name, f, n in cases():
        times, vals = {}, {}
        for b in backs:
            with use_backend(b):
                if name.endswith("(sum)"):
                    times[b], vals[b] = _time(lambda: representation_numbers(f, n), args.repeat)
                else:
                    times[b], vals[b] = _time(lambda: count_representations(f, n), args.repeat)
        if len({str(v) for v in vals.values()}) != 1:
            raise SystemExit(f"backends disagree on {name}")
        speed = times["python"] / times["compiled"] if "compiled" in times else float("nan")
        print(f"{name:<18}{n:>6}" + "".join(f"{times[b]:>14.4f}" for b in backs) + f"{speed:>10.1f}")


if __name__ == "__main__":
    main()
