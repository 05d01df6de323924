"""Positive definite integral quadratic forms and their basic invariants.

A form in k variables is stored through its even Gram matrix
``A = [d^2 Q / dx_i dx_j]`` so that ``Q(x) = x^T A x / 2``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import gcd, lcm

from .errors import BudgetExceeded, NotPositiveDefinite, NotSymmetric, OddDiagonal
from .linalg import (
    adjugate,
    content,
    det_bareiss,
    hermite_normal_form,
    integer_kernel_of_row,
    leading_minors,
    rank_fraction,
    solve_in_basis,
)

MINIMA_BUDGET = 10**8


@dataclass(frozen=True, eq=False)
class QuadraticForm:
    gram: tuple

    @property
    def dim(self) -> int:
        return len(self.gram)

    @cached_property
    def discriminant(self) -> int:
        return det_bareiss(self.gram)

    @cached_property
    def level(self) -> int:
        return level(self)

    @cached_property
    def primitive(self) -> bool:
        g = 0
        k = self.dim
        for i in range(k):
            g = gcd(g, self.gram[i][i] // 2)
            for j in range(i + 1, k):
                g = gcd(g, self.gram[i][j])
        return g == 1

    def __eq__(self, other):
        return isinstance(other, QuadraticForm) and self.gram == other.gram

    def __hash__(self):
        return hash(self.gram)

    def __repr__(self):
        return f"QuadraticForm({[list(r) for r in self.gram]})"

    def value(self, x) -> int:
        """Q(x) for an integer vector x."""
        a = self.gram
        k = self.dim
        s = 0
        for i in range(k):
            xi = x[i]
            if xi:
                s += a[i][i] * xi * xi
                for j in range(i + 1, k):
                    s += 2 * a[i][j] * xi * x[j]
        return s // 2

    def transform(self, u) -> "QuadraticForm":
        """The form x -> Q(U x), Gram U^T A U."""
        k = self.dim
        a = self.gram
        au = [[sum(a[i][l] * u[l][j] for l in range(k)) for j in range(k)] for i in range(k)]
        g = [[sum(u[l][i] * au[l][j] for l in range(k)) for j in range(k)] for i in range(k)]
        return validate(g)

    def to_json(self) -> dict:
        def enc(x):
            return str(x) if abs(x) >= 2**63 else x

        return {"dim": self.dim, "gram": [[enc(x) for x in r] for r in self.gram]}

    @classmethod
    def from_json(cls, obj) -> "QuadraticForm":
        if isinstance(obj, str):
            obj = json.loads(obj)
        gram = [[int(x) for x in row] for row in obj["gram"]]
        if "dim" in obj and int(obj["dim"]) != len(gram):
            raise ValueError(f"dim {obj['dim']} does not match a {len(gram)}x{len(gram)} gram")
        return validate(gram)


def validate(raw) -> QuadraticForm:
    """Check a square integer matrix and wrap it as a :class:`QuadraticForm`."""
    rows = [list(r) for r in raw]
    k = len(rows)
    if k == 0 or any(len(r) != k for r in rows):
        raise ValueError("gram matrix must be square and non-empty")
    for r in rows:
        for x in r:
            if isinstance(x, bool) or int(x) != x:
                raise ValueError(f"non-integer entry {x!r}")
    rows = [[int(x) for x in r] for r in rows]
    for i in range(k):
        for j in range(i + 1, k):
            if rows[i][j] != rows[j][i]:
                raise NotSymmetric(f"A[{i}][{j}]={rows[i][j]} != A[{j}][{i}]={rows[j][i]}")
    for i in range(k):
        if rows[i][i] % 2:
            raise OddDiagonal(f"diagonal entry A[{i}][{i}]={rows[i][i]} is odd")
    minors = leading_minors(rows)
    for i in range(1, k + 1):
        if minors[i] <= 0:
            raise NotPositiveDefinite(f"leading principal minor of order {i} is {minors[i]}")
    form = QuadraticForm(tuple(tuple(r) for r in rows))
    form.__dict__["discriminant"] = minors[k]
    return form


def diagonal_form(*coeffs) -> QuadraticForm:
    """Form sum c_i x_i^2 (Gram diag(2 c_i))."""
    k = len(coeffs)
    return validate([[2 * coeffs[i] if i == j else 0 for j in range(k)] for i in range(k)])


def scaled_identity(k: int, c: int = 1) -> QuadraticForm:
    return diagonal_form(*([c] * k))


def level(form: QuadraticForm) -> int:
    """Least N > 0 with N A^{-1} even integral, read off the adjugate."""
    d = form.discriminant
    adj = adjugate(form.gram)
    n = 1
    k = form.dim
    for i in range(k):
        n = lcm(n, 2 * d // gcd(2 * d, adj[i][i]))
        for j in range(i + 1, k):
            n = lcm(n, d // gcd(d, adj[i][j]))
    return n


def is_even_integral_multiple(form: QuadraticForm, n: int) -> bool:
    """Whether n A^{-1} is an even integral matrix (direct check, used by tests)."""
    d = form.discriminant
    adj = adjugate(form.gram)
    for i in range(form.dim):
        for j in range(form.dim):
            v = Fraction(n * adj[i][j], d)
            if v.denominator != 1 or (i == j and v.numerator % 2):
                return False
    return True


@dataclass(frozen=True)
class MinimaProfile:
    minima: tuple
    witnesses: tuple


def successive_minima(form: QuadraticForm, budget: int = MINIMA_BUDGET) -> MinimaProfile:
    """Exact successive minima by exhaustive short-vector enumeration."""
    from .enumeration import list_short_vectors

    k = form.dim
    bound = max(form.gram[i][i] // 2 for i in range(k))
    while True:
        vecs = list_short_vectors(form, bound, budget=budget)
        vecs.sort(key=lambda x: (form.value(x), tuple(-c for c in x)))
        chosen = []
        for x in vecs:
            # skip -x duplicates cheaply: rank test handles them anyway
            if rank_fraction(chosen + [list(x)]) > len(chosen):
                chosen.append(list(x))
                if len(chosen) == k:
                    return MinimaProfile(
                        tuple(form.value(w) for w in chosen), tuple(tuple(w) for w in chosen)
                    )
        bound *= 2


@dataclass(frozen=True)
class OrthoLattice:
    v: tuple
    v_primitive: tuple
    basis: tuple
    gram: tuple
    disc: int

    @property
    def ambient_dim(self) -> int:
        return len(self.v)

    def coordinates(self, x):
        """Rational coordinates of x in the basis (None if x is not in the span)."""
        return solve_in_basis(self.basis, x)

    def as_form(self) -> QuadraticForm:
        """The lattice norm |w|^2 as an even-convention form (Gram 2 A_L)."""
        return validate([[2 * x for x in r] for r in self.gram])


def ortho_lattice(v) -> OrthoLattice:
    v = tuple(int(x) for x in v)
    if not any(v):
        raise ValueError("v must be nonzero")
    c = content(v)
    vp = tuple(x // c for x in v)
    basis = hermite_normal_form(integer_kernel_of_row(vp))
    gram = tuple(tuple(sum(a * b for a, b in zip(bi, bj)) for bj in basis) for bi in basis)
    disc = det_bareiss(gram)
    norm = sum(x * x for x in vp)
    if disc != norm:
        raise AssertionError(f"ortho lattice disc {disc} != |v'|^2 {norm}")
    return OrthoLattice(v, vp, tuple(tuple(b) for b in basis), gram, disc)
