"""Bernoulli numbers, Bernoulli polynomials and the basis-change matrices.

Conventions: ``B_1 = -1/2``. Row ``i`` (0-based) of ``M`` holds the ascending
monomial coefficients of ``B_i(x)``, so ``B(x) = M @ T(x)`` with
``T(x) = [1, x, ..., x^N]``. ``Q`` is the exact inverse of ``M``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from math import comb, factorial
from typing import Callable, Sequence

import numpy as np

from . import exact
from .quadrature import gauss_legendre


@dataclass(frozen=True)
class BernoulliTable:
    numbers: tuple[Fraction, ...]

    def __len__(self) -> int:
        return len(self.numbers)

    def __getitem__(self, k: int) -> Fraction:
        return self.numbers[k]

    @property
    def order(self) -> int:
        """Largest truncation order N this table can serve (needs B_0..B_{2N+2})."""
        return (len(self.numbers) - 3) // 2

    def require(self, last_index: int) -> None:
        if last_index >= len(self.numbers):
            raise ValueError(
                f"Bernoulli table holds B_0..B_{len(self.numbers) - 1}, need B_{last_index}"
            )


def kronecker_bernoulli(n: int) -> Fraction:
    """B_n from Kronecker's double sum (valid for n != 1)."""
    total = Fraction(0)
    for k in range(1, n + 2):
        power_sum = sum(j**n for j in range(1, k + 1))
        total += Fraction((-1) ** k * comb(n + 1, k) * power_sum, k)
    return -total


def recurrence_bernoulli(count: int) -> list[Fraction]:
    """B_0..B_{count-1} from sum_{k=0}^{n} C(n+1, k) B_k = 0."""
    b = [Fraction(1)]
    for n in range(1, count):
        s = sum(comb(n + 1, k) * b[k] for k in range(n))
        b.append(-s / (n + 1))
    return b[:count]


@lru_cache(maxsize=None)
def bernoulli_numbers(count: int) -> BernoulliTable:
    """Return B_0..B_{count-1}, computed by Kronecker's formula.

    Every value is cross-checked against the binomial recurrence; a mismatch
    raises ``ArithmeticError``.
    """
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    numbers = []
    for n in range(count):
        numbers.append(Fraction(-1, 2) if n == 1 else kronecker_bernoulli(n))
    oracle = recurrence_bernoulli(count)
    for n, (got, want) in enumerate(zip(numbers, oracle)):
        if got != want:
            raise ArithmeticError(f"Kronecker B_{n} = {got} disagrees with recurrence value {want}")
    return BernoulliTable(tuple(numbers))


def build_m_matrix(table: BernoulliTable, n: int) -> np.ndarray:
    table.require(n)
    m = exact.zeros(n + 1, n + 1)
    for i in range(n + 1):
        for j in range(i + 1):
            m[i, j] = comb(i, i - j) * table[i - j]
    return m


def build_q_matrix(table: BernoulliTable, n: int) -> np.ndarray:
    # row i: x^i = (1/(i+1)) sum_{k<=i} C(i+1, k) B_k(x)
    table.require(n)
    q = exact.zeros(n + 1, n + 1)
    for i in range(n + 1):
        for j in range(i + 1):
            q[i, j] = Fraction(comb(i + 1, j), i + 1)
    return q


def product_integral(table: BernoulliTable, n: int, m: int) -> Fraction:
    """Exact value of the integral of B_n * B_m over [0, 1]."""
    if n == 0 and m == 0:
        return Fraction(1)
    if n == 0 or m == 0:
        return Fraction(0)
    table.require(n + m)
    sign = -1 if (n - 1) % 2 else 1
    return sign * Fraction(factorial(m) * factorial(n), factorial(m + n)) * table[n + m]


def build_dual_matrix(table: BernoulliTable, n: int) -> np.ndarray:
    table.require(2 * n)
    d = exact.zeros(n + 1, n + 1)
    for i in range(n + 1):
        for j in range(i, n + 1):
            d[i, j] = d[j, i] = product_integral(table, i, j)
    return d


def horner(coeffs: Sequence[float], x):
    """Evaluate an ascending-coefficient polynomial at ``x`` (scalar or array)."""
    acc = x * 0 if isinstance(x, Fraction) else 0.0 * np.asarray(x, dtype=float)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


@dataclass(frozen=True)
class BasisContext:
    """Exact basis data for truncation order N, plus float copies for the solver."""

    order: int
    table: BernoulliTable = field(repr=False)
    m_matrix: np.ndarray = field(repr=False)
    q_matrix: np.ndarray = field(repr=False)
    dual_matrix: np.ndarray = field(repr=False)

    @property
    def size(self) -> int:
        return self.order + 1

    @cached_property
    def m_float(self) -> np.ndarray:
        return exact.to_float(self.m_matrix)

    @cached_property
    def q_float(self) -> np.ndarray:
        return exact.to_float(self.q_matrix)

    @cached_property
    def dual_float(self) -> np.ndarray:
        return exact.to_float(self.dual_matrix)

    @cached_property
    def dual_inverse(self) -> np.ndarray:
        return exact.inverse(self.dual_matrix)

    @cached_property
    def legendre_to_bernoulli(self) -> np.ndarray:
        """Row k: Bernoulli coefficients of the shifted Legendre polynomial P_k(2x - 1)."""
        n = self.order
        p = exact.zeros(n + 1, n + 1)
        for k in range(n + 1):
            for i in range(k + 1):
                p[k, i] = Fraction((-1) ** (k + i) * comb(k, i) * comb(k + i, i))
        return p @ self.q_matrix


@lru_cache(maxsize=None)
def basis_context(n: int) -> BasisContext:
    if n < 0:
        raise ValueError(f"order must be >= 0, got {n}")
    table = bernoulli_numbers(2 * n + 3)
    return BasisContext(
        order=n,
        table=table,
        m_matrix=build_m_matrix(table, n),
        q_matrix=build_q_matrix(table, n),
        dual_matrix=build_dual_matrix(table, n),
    )


def eval_basis(ctx: BasisContext, x) -> np.ndarray:
    """[B_0(x), ..., B_N(x)]; for array ``x`` the basis index is the leading axis."""
    return np.array([horner(row[: i + 1], x) for i, row in enumerate(ctx.m_float)])


def eval_series(ctx: BasisContext, coeffs: Sequence[float], x):
    return np.tensordot(np.asarray(coeffs, dtype=float), eval_basis(ctx, x), axes=(0, 0))


def expand_polynomial(ctx: BasisContext, mono_coeffs: Sequence) -> np.ndarray:
    """Exact Bernoulli coefficients of an ascending-monomial polynomial of degree <= N."""
    coeffs = list(mono_coeffs)
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    if len(coeffs) > ctx.size:
        raise ValueError(f"polynomial degree {len(coeffs) - 1} exceeds basis order {ctx.order}")
    t = exact.zeros(ctx.size)
    t[: len(coeffs)] = exact.as_fractions(coeffs)
    return ctx.q_matrix.T @ t


def to_monomial(ctx: BasisContext, coeffs: Sequence) -> np.ndarray:
    """Inverse of :func:`expand_polynomial`; exact for rational input."""
    c = np.asarray(coeffs, dtype=object if exact.is_rational(coeffs) else float)
    m = ctx.m_matrix if c.dtype == object else ctx.m_float
    return m.T @ c


def project(ctx: BasisContext, f: Callable[[float], float] | Sequence, rtol: float = 1e-14) -> np.ndarray:
    """Best L2([0,1]) approximation of ``f`` in span{B_0..B_N}.

    ``f`` may be a callable, integrated numerically, or a sequence of ascending
    monomial coefficients, handled exactly.
    """
    if not callable(f):
        coeffs = list(f)
        if len(coeffs) <= ctx.size:
            return expand_polynomial(ctx, coeffs)
        # exact moments of a higher-degree polynomial against each basis element
        g = exact.zeros(ctx.size)
        for j, row in enumerate(ctx.m_matrix):
            g[j] = sum(
                (Fraction(c) * row[k] / (p + k + 1) for p, c in enumerate(coeffs) for k in range(j + 1)),
                Fraction(0),
            )
        return ctx.dual_inverse @ g
    # Same minimiser as D^{-1} <f, B>, but moments are taken against the orthogonal
    # shifted Legendre family so the Gram matrix (cond ~1e18 at N=15) is never inverted.
    weights = 2.0 * np.arange(ctx.size) + 1.0
    moments = gauss_legendre(
        lambda t: f(t) * np.polynomial.legendre.legvander(2.0 * t - 1.0, ctx.order)[..., :].ravel(),
        0.0,
        1.0,
        rtol=rtol,
    )
    return exact.to_float(ctx.legendre_to_bernoulli).T @ (weights * moments)
