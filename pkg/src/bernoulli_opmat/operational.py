"""Operational matrices acting on Bernoulli coefficient vectors.

All matrices follow the row convention ``op(B)(x) ~ K @ B(x)``. A polynomial
with coefficient vector ``a`` therefore maps to ``K.T @ a``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from math import comb
from typing import Sequence

import numpy as np

from . import exact
from .basis import BasisContext, basis_context, product_integral


def build_derivative_matrix(ctx: BasisContext) -> np.ndarray:
    d = exact.zeros(ctx.size, ctx.size)
    for i in range(1, ctx.size):
        d[i, i - 1] = Fraction(i)
    return d


def overflow_projection(ctx: BasisContext) -> np.ndarray:
    """Coefficients of the L2 projection of (B_{N+1}(x) - B_{N+1}) / (N+1) onto B_0..B_N."""
    n1 = ctx.order + 1
    ctx.table.require(2 * ctx.order + 1)
    g = exact.zeros(ctx.size)
    g[0] = -ctx.table[n1] / n1
    for j in range(1, ctx.size):
        g[j] = product_integral(ctx.table, n1, j) / n1
    return exact.solve(ctx.dual_matrix, g)


def build_integration_matrix(ctx: BasisContext) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(I, xi)`` with ``int_0^x B(t) dt ~ I @ B(x)``.

    Rows 0..N-1 are exact; row N is the projection ``xi`` of the degree N+1
    antiderivative.
    """
    n = ctx.order
    u = exact.zeros(ctx.size, ctx.size)
    # row i-1 holds monomial coefficients of (B_i(x) - B_i) / i
    for i in range(1, n + 1):
        for k in range(i):
            u[i - 1, i - k] = Fraction(comb(i, k), i) * ctx.table[k]
    xi = overflow_projection(ctx)
    u[n] = xi @ ctx.m_matrix
    return u @ ctx.q_matrix, xi


def monomial_toeplitz(n_vec: Sequence) -> np.ndarray:
    """Upper-triangular Toeplitz ``N~`` with ``N~[i, j] = n[j - i]`` for ``j >= i``."""
    n_vec = np.asarray(n_vec)
    size = len(n_vec)
    out = exact.zeros(size, size) if n_vec.dtype == object else np.zeros((size, size))
    for i in range(size):
        out[i, i:] = n_vec[: size - i]
    return out


def build_product_matrix(ctx: BasisContext, c: Sequence) -> np.ndarray:
    """Product matrix ``C~ = M N~ Q`` for the coefficient vector ``c``.

    ``p.T @ C~`` is the Bernoulli expansion of ``p(x) * c(x)`` with every
    monomial above degree N dropped; exact when the degrees sum to at most N.
    """
    c = np.asarray(c, dtype=object if exact.is_rational(c) else float)
    if c.shape != (ctx.size,):
        raise ValueError(f"coefficient vector must have length {ctx.size}, got {c.shape}")
    if c.dtype == object:
        return ctx.m_matrix @ monomial_toeplitz(ctx.m_matrix.T @ c) @ ctx.q_matrix
    return ctx.m_float @ monomial_toeplitz(ctx.m_float.T @ c) @ ctx.q_float


@lru_cache(maxsize=None)
def projected_product_tensor(n: int) -> np.ndarray:
    """``G[j]`` maps ``p`` to the L2 projection of ``p(x) * B_j(x)``: ``proj(p c) = sum_j c_j p @ G[j]``.

    Built exactly from the triple integrals ``int B_i B_j B_l`` and the inverse dual matrix.
    """
    ctx = basis_context(n)
    size = ctx.size
    # int_0^1 x^(a+b+c) dx, contracted one monomial axis at a time
    hilbert = np.empty((size, size, size), dtype=object)
    for a in range(size):
        for b in range(size):
            for c in range(size):
                hilbert[a, b, c] = Fraction(1, a + b + c + 1)
    m = ctx.m_matrix
    t = np.tensordot(m, hilbert, axes=(1, 0))
    t = np.tensordot(m, t, axes=(1, 1)).transpose(1, 0, 2)
    t = np.tensordot(t, m, axes=(2, 1))
    d_inv = ctx.dual_inverse
    return np.array([t[:, j, :] @ d_inv for j in range(size)], dtype=object)


@lru_cache(maxsize=None)
def _projected_product_tensor_float(n: int) -> np.ndarray:
    return exact.to_float(projected_product_tensor(n))


def build_projected_product_matrix(ctx: BasisContext, c: Sequence) -> np.ndarray:
    """Galerkin product matrix: ``p.T @ C`` is the L2 projection of ``p(x) * c(x)`` onto the basis.

    Agrees with :func:`build_product_matrix` whenever the degrees sum to at most N.
    """
    rational = exact.is_rational(c)
    c = np.asarray(c, dtype=object if rational else float)
    if c.shape != (ctx.size,):
        raise ValueError(f"coefficient vector must have length {ctx.size}, got {c.shape}")
    g = projected_product_tensor(ctx.order) if rational else _projected_product_tensor_float(ctx.order)
    return np.tensordot(c, g, axes=(0, 0))


PRODUCT_BUILDERS = {
    "truncated": build_product_matrix,
    "projected": build_projected_product_matrix,
}


@dataclass(frozen=True)
class OperationalSet:
    ctx: BasisContext = field(repr=False)
    deriv: np.ndarray = field(repr=False)
    integ: np.ndarray = field(repr=False)
    xi_vector: np.ndarray = field(repr=False)

    @property
    def order(self) -> int:
        return self.ctx.order

    @cached_property
    def deriv_float(self) -> np.ndarray:
        return exact.to_float(self.deriv)

    @cached_property
    def integ_float(self) -> np.ndarray:
        return exact.to_float(self.integ)

    @cached_property
    def overflow_residual_norm(self) -> float:
        """L2 norm of the error made by the last integration row."""
        # ||f - Pf||^2 = ||f||^2 - ||Pf||^2 with f = (B_{N+1} - B_{N+1}(0)) / (N+1)
        n1 = self.order + 1
        b = self.ctx.table[n1]
        norm_f = (product_integral(self.ctx.table, n1, n1) + b * b) / (n1 * n1)
        norm_p = self.xi_vector @ self.ctx.dual_matrix @ self.xi_vector
        return float(norm_f - norm_p) ** 0.5


def build_operational_set(ctx: BasisContext) -> OperationalSet:
    integ, xi = build_integration_matrix(ctx)
    return OperationalSet(ctx=ctx, deriv=build_derivative_matrix(ctx), integ=integ, xi_vector=xi)


@lru_cache(maxsize=None)
def operational_set(n: int) -> OperationalSet:
    return build_operational_set(basis_context(n))
