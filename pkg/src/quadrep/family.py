"""Seeded test families of positive definite forms.

The generator is SplitMix64 (Steele, Lea, Flood 2014): state advances by
0x9E3779B97F4A7C15 and each output is the usual xor-shift-multiply mix.
Integers in [lo, hi] are drawn by rejection on the top of the 64-bit range,
so a family is reproducible from its seed in any language.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .errors import FormError, GenerationExhausted
from .forms import QuadraticForm, validate

_MASK = (1 << 64) - 1
MAX_REJECTIONS = 10**5


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & _MASK

    def next(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def randint(self, lo: int, hi: int) -> int:
        r = hi - lo + 1
        limit = (1 << 64) - ((1 << 64) % r)
        while True:
            x = self.next()
            if x < limit:
                return lo + x % r


@dataclass
class FamilySpec:
    seed: int
    k_values: tuple = (4, 5, 6)
    count: int = 20
    H: int = 3
    det_bound: int = 10**12
    forms: list = field(default_factory=list)
    ids: list = field(default_factory=list)


def _draw(rng: SplitMix64, k: int, H: int):
    M = [[rng.randint(-H, H) for _ in range(k)] for _ in range(k)]
    d = [rng.randint(1, H) for _ in range(k)]
    return [
        [2 * (sum(M[l][i] * M[l][j] for l in range(k)) + (d[i] if i == j else 0)) for j in range(k)]
        for i in range(k)
    ]


def generate_family(spec: FamilySpec) -> list[QuadraticForm]:
    """Forms A = 2 M^T M + 2 diag(d) with M in [-H, H], d in [1, H], cycling through k_values."""
    if spec.H < 1:
        raise ValueError("H must be >= 1")
    rng = SplitMix64(spec.seed)
    forms, ids = [], []
    rejections = 0
    i = 0
    while len(forms) < spec.count:
        k = spec.k_values[i % len(spec.k_values)]
        raw = _draw(rng, k, spec.H)
        try:
            f = validate(raw)
        except FormError:
            f = None
        if f is None or not f.primitive or f.discriminant > spec.det_bound:
            rejections += 1
            if rejections >= MAX_REJECTIONS:
                raise GenerationExhausted(f"{rejections} rejections for seed {spec.seed}")
            continue
        forms.append(f)
        ids.append(f"s{spec.seed}-{len(forms) - 1:03d}-k{k}")
        i += 1
    spec.forms, spec.ids = forms, ids
    return forms


def cartan_a(k: int):
    return [[2 if i == j else (-1 if abs(i - j) == 1 else 0) for j in range(k)] for i in range(k)]


def cartan_d(k: int):
    g = cartan_a(k)
    # branch the last node off the third-to-last one
    g[k - 1][k - 2] = g[k - 2][k - 1] = 0
    g[k - 1][k - 3] = g[k - 3][k - 1] = -1
    return g


def cartan_e6():
    g = cartan_a(5) + [[0] * 5]
    g = [r + [0] for r in g]
    g[5][5] = 2
    g[5][2] = g[2][5] = -1
    return g


def block_sum(*blocks):
    k = sum(len(b) for b in blocks)
    g = [[0] * k for _ in range(k)]
    o = 0
    for b in blocks:
        for i, r in enumerate(b):
            for j, x in enumerate(r):
                g[o + i][o + j] = x
        o += len(b)
    return g


def _ident(k, c=2):
    return [[c if i == j else 0 for j in range(k)] for i in range(k)]


SMALL_DISC = {
    4: {
        "D4": cartan_d(4),
        "A4": cartan_a(4),
        "A3+A1": block_sum(cartan_a(3), cartan_a(1)),
        "A2+A2": block_sum(cartan_a(2), cartan_a(2)),
        "A2+2A1": block_sum(cartan_a(2), _ident(2)),
        "I4": _ident(4),
    },
    5: {"D5": cartan_d(5), "A5": cartan_a(5), "A4+A1": block_sum(cartan_a(4), cartan_a(1)), "I5": _ident(5)},
    6: {"E6": cartan_e6(), "D6": cartan_d(6), "A6": cartan_a(6), "I6": _ident(6)},
}


def random_unimodular(rng: SplitMix64, k: int, steps: int = 6, h: int = 1):
    """Product of elementary matrices with small entries."""
    U = [[int(i == j) for j in range(k)] for i in range(k)]
    for _ in range(steps):
        i = rng.randint(0, k - 1)
        j = rng.randint(0, k - 2)
        j = j + 1 if j >= i else j
        c = rng.randint(-h, h) or 1
        for row in U:
            row[j] += c * row[i]
    return U


def small_discriminant_family(seed: int, k: int = 4) -> list[tuple[str, QuadraticForm]]:
    """Root-lattice forms of rank k and small discriminant, written in scrambled bases."""
    rng = SplitMix64(seed)
    out = []
    for name, g in SMALL_DISC[k].items():
        f = validate(g)
        out.append((name, f.transform(random_unimodular(rng, k))))
    return out
