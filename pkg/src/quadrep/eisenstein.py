"""r(Q, n) = rho(n, Q) + tau(n, Q) and the bound ratios built on it."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .enumeration import count_representations, cumulative_counts
from .forms import QuadraticForm, successive_minima
from .intervals import DEFAULT_BITS, Interval, float_power_interval, power_interval, sqrt_interval
from .local_densities import rho as rho_interval

DEFAULT_EPS = 0.1
DEFAULT_CUTOFF = 10**4


@dataclass(frozen=True)
class EisensteinSplit:
    form: QuadraticForm
    n: int
    r: int
    rho: Interval
    tau: Interval

    def consistent(self) -> bool:
        """r lies in rho + tau (interval sum)."""
        return (self.rho + self.tau).contains(self.r)


def split(form: QuadraticForm, n: int, cutoff: int = DEFAULT_CUTOFF, r: int | None = None,
          bits: int = DEFAULT_BITS, budget: int | None = None) -> EisensteinSplit:
    if form.dim < 4:
        raise ValueError("split needs k >= 4")
    if n < 1:
        raise ValueError("n must be >= 1")
    if r is None:
        r = count_representations(form, n) if budget is None else count_representations(form, n, budget=budget)
    rh = rho_interval(form, n, cutoff, bits)
    tau = Interval(r - rh.hi, r - rh.lo)
    return EisensteinSplit(form, n, r, rh, tau)


def _pow(base, exponent, bits=60) -> Interval:
    """base ** exponent with exact handling of integer and half-integer exponents."""
    e = Fraction(exponent).limit_denominator(10**6) if isinstance(exponent, float) else Fraction(exponent)
    if e.denominator in (1, 2) and Fraction(exponent) == e:
        return power_interval(base, e.numerator, e.denominator, bits)
    return float_power_interval(base, float(exponent), bits)


def theorem14_condition(form: QuadraticForm, n: int) -> bool:
    """D <= n^{(k-3)/(2(k-2))}, decided exactly as D^{2(k-2)} <= n^{k-3}."""
    k = form.dim
    return form.discriminant ** (2 * (k - 2)) <= n ** (k - 3)


def theorem14_ratio(form: QuadraticForm, n: int, eps: float = DEFAULT_EPS, r: int | None = None,
                    modulus: str = "D") -> Interval:
    """r sqrt(D) / (n^{(k-2)/2} gcd(M, n)^{1/2} n^eps), M = D or the level N."""
    k = form.dim
    if r is None:
        r = count_representations(form, n)
    if r == 0:
        return Interval(0)
    D = form.discriminant
    M = D if modulus == "D" else form.level
    num = sqrt_interval(D, 80) * r
    den = power_interval(n, k - 2, 2, 80) * sqrt_interval(gcd(M, n), 80) * _pow(n, eps)
    return (num / den).rounded(80)


def lemma33_ratio(form: QuadraticForm, n: int, eps: float = DEFAULT_EPS, sp: EisensteinSplit | None = None,
                  gcd_power: Fraction = Fraction(1, 4), cutoff: int = DEFAULT_CUTOFF) -> Interval:
    """|tau| / (D^{(k-3)/2} n^{(k-1)/4} gcd(n, D)^{gcd_power} n^eps)."""
    if sp is None:
        sp = split(form, n, cutoff)
    if sp.r == 0 and sp.rho.hi == 0:
        return Interval(0)
    k = form.dim
    D = form.discriminant
    den = (
        power_interval(D, k - 3, 2, 80)
        * _pow(n, Fraction(k - 1, 4))
        * _pow(gcd(n, D), gcd_power)
        * _pow(n, eps)
    )
    return (sp.tau.abs() / den).rounded(80)


def lemma41_denominator(minima, n: int) -> Interval:
    """1 + sum_{j=3..k} n^{(j-2)/2} / (mu_3 ... mu_j)^{1/2}."""
    total = Interval(1)
    pm = 1
    for j in range(3, len(minima) + 1):
        pm *= minima[j - 1]
        total = total + sqrt_interval(Fraction(n ** (j - 2), pm), 80)
    return total


def lemma41_ratio(form: QuadraticForm, n: int, eps: float = DEFAULT_EPS, minima=None,
                  r: int | None = None) -> Interval:
    if r is None:
        r = count_representations(form, n)
    if r == 0:
        return Interval(0)
    if minima is None:
        minima = successive_minima(form).minima
    return (Interval(r) / (lemma41_denominator(minima, n) * _pow(n, eps))).rounded(80)


def cor42_bound(k: int, D: int, x: int, eps: float = DEFAULT_EPS) -> Interval:
    """x^eps (x^{k-2} + x^{k-3/2} / D^{1/2} + x^{k-1} / D^{1-1/k})."""
    t1 = Interval(Fraction(x) ** (k - 2))
    t2 = power_interval(x, 2 * k - 3, 2, 80) / sqrt_interval(D, 80)
    t3 = Interval(Fraction(x) ** (k - 1)) / _pow(D, Fraction(k - 1, k))
    return (t1 + t2 + t3) * _pow(x, eps)


def cor42_ratio(form: QuadraticForm, x: int, eps: float = DEFAULT_EPS, second_moment: int | None = None) -> Interval:
    if x < 1:
        raise ValueError("x must be >= 1")
    if second_moment is None:
        second_moment = cumulative_counts(form, x)[1]
    return (Interval(second_moment) / cor42_bound(form.dim, form.discriminant, x, eps)).rounded(80)


@dataclass
class BoundReport:
    """Ratios of one bound over a family; the maximum is taken over included points only."""

    name: str
    eps: float
    rows: list = field(default_factory=list)  # (form_id, n, ratio Interval, condition_ok)

    def add(self, form_id: str, n: int, ratio: Interval, condition_ok: bool = True):
        self.rows.append((form_id, n, ratio, condition_ok))

    def included(self):
        return [row for row in self.rows if row[3]]

    def family_max(self) -> Fraction:
        vals = [row[2].hi for row in self.included()]
        return max(vals) if vals else Fraction(0)

    def half_maxima(self) -> tuple[Fraction, Fraction]:
        """Maxima over the lower and upper halves of the distinct n values."""
        ns = sorted({row[1] for row in self.included()})
        if not ns:
            return Fraction(0), Fraction(0)
        cut = ns[(len(ns) - 1) // 2]
        lo = [row[2].hi for row in self.included() if row[1] <= cut]
        hi = [row[2].hi for row in self.included() if row[1] > cut]
        return (max(lo) if lo else Fraction(0), max(hi) if hi else Fraction(0))

    def stable(self, slack: Fraction = Fraction(11, 10)) -> bool:
        lo, hi = self.half_maxima()
        return hi <= slack * lo
