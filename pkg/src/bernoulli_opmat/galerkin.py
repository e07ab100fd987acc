"""Galerkin reduction of polynomial-coefficient IVPs on [0, 1].

The highest derivative is the unknown series ``u^(m) = A.T @ B(x)``; lower
derivatives come from repeated application of the integration matrix plus the
Taylor polynomial of the initial data:

    u^(k)(x) = ((I.T)^(m-k) A + v_k).T @ B(x),   v_k ~ sum_l u^(k+l)(0) x^l / l!

The equation ``sum_k p_k u^(k) + q u^2 = r`` becomes a residual vector ``R(A)`` in
the Bernoulli basis; the Galerkin system ``R(A).T @ D = 0`` is equivalent to
``R(A) = 0`` because the dual matrix is invertible.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Sequence

import numpy as np

from . import exact
from .basis import eval_series, expand_polynomial, horner
from .operational import PRODUCT_BUILDERS, OperationalSet, operational_set

log = logging.getLogger(__name__)

MAX_NEWTON_ITERATIONS = 50
ARMIJO_C = 1e-4
MIN_STEP = 1e-4
DEFAULT_PRODUCT = "projected"
ROUNDOFF_FACTOR = 16.0
REFINEMENT_STEPS = 4


class SolverError(RuntimeError):
    def __init__(self, message: str, residual_norm: float | None = None):
        super().__init__(message)
        self.residual_norm = residual_norm


def _trim(coeffs: Sequence) -> list:
    out = list(coeffs)
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out or [0]


def _degree(coeffs: Sequence) -> int:
    trimmed = _trim(coeffs)
    return 0 if len(trimmed) == 1 else len(trimmed) - 1


@dataclass(frozen=True)
class IvpProblem:
    """``sum_k coeff_polys[k](x) * u^(k)(x) + quad_poly(x) * u(x)^2 = rhs_poly(x)`` on [0, 1].

    Polynomials are ascending monomial coefficient lists; ``init_conditions`` holds
    ``[u(0), u'(0), ...]`` (one value per order).
    """

    order: int
    coeff_polys: tuple[tuple, ...]
    rhs_poly: tuple
    init_conditions: tuple
    quad_poly: tuple | None = None

    def __post_init__(self):
        if self.order not in (1, 2):
            raise ValueError(f"order must be 1 or 2, got {self.order}")
        if len(self.coeff_polys) != self.order + 1:
            raise ValueError(f"need {self.order + 1} coefficient polynomials, got {len(self.coeff_polys)}")
        if len(self.init_conditions) != self.order:
            raise ValueError(f"need {self.order} initial conditions, got {len(self.init_conditions)}")

    @property
    def is_linear(self) -> bool:
        return self.quad_poly is None or all(c == 0 for c in self.quad_poly)

    @property
    def max_degree(self) -> int:
        polys = [*self.coeff_polys, self.rhs_poly]
        if not self.is_linear:
            polys.append(self.quad_poly)
        return max(_degree(p) for p in polys)

    def linearized(self) -> IvpProblem:
        return IvpProblem(self.order, self.coeff_polys, self.rhs_poly, self.init_conditions)


@dataclass(frozen=True)
class SpectralSolution:
    a_vector: np.ndarray
    order: int
    init_vectors: tuple[np.ndarray, ...]
    ops: OperationalSet = field(repr=False)
    product: str = DEFAULT_PRODUCT
    exact_mode: bool = False
    newton_iters: int | None = None
    residual_norm: float = 0.0

    @property
    def n(self) -> int:
        return self.ops.order

    def coefficients(self, level: int = 0) -> np.ndarray:
        """Bernoulli coefficients of ``u^(level)``."""
        if not 0 <= level <= self.order:
            raise ValueError(f"derivative level must lie in 0..{self.order}, got {level}")
        return _level_vector(self.ops, self.a_vector, self.init_vectors, self.order, level, self.exact_mode)

    def evaluate(self, x, level: int = 0):
        coeffs = self.coefficients(level)
        if not self.exact_mode:
            return eval_series(self.ops.ctx, coeffs, x)
        mono = self.ops.ctx.m_matrix.T @ coeffs
        values = [float(horner(mono, Fraction(t))) for t in np.ravel(np.asarray(x, dtype=float))]
        return values[0] if np.ndim(x) == 0 else np.array(values).reshape(np.shape(x))


def evaluate_solution(sol: SpectralSolution, x, derivative_level: int = 0):
    return sol.evaluate(x, derivative_level)


def _integ(ops: OperationalSet, exact_mode: bool) -> np.ndarray:
    return ops.integ if exact_mode else ops.integ_float


def _level_vector(ops, a, init_vectors, order, level, exact_mode) -> np.ndarray:
    w = a
    it = _integ(ops, exact_mode).T
    for _ in range(order - level):
        w = it @ w
    return w + init_vectors[level]


def init_vectors(problem: IvpProblem, ops: OperationalSet, exact_mode: bool = False) -> tuple[np.ndarray, ...]:
    """Bernoulli expansions of the Taylor terms sum_l u^(k+l)(0) x^l / l!, per level k."""
    out = []
    ic = list(problem.init_conditions)
    for k in range(problem.order + 1):
        taylor = [Fraction(c) / factorial(l) for l, c in enumerate(ic[k:])] or [0]
        vec = expand_polynomial(ops.ctx, taylor)
        out.append(vec if exact_mode else exact.to_float(vec))
    return tuple(out)


def _check_degrees(problem: IvpProblem, ops: OperationalSet) -> None:
    n = ops.order
    if problem.max_degree > n:
        raise ValueError(f"problem polynomial degree {problem.max_degree} exceeds basis order N={n}")
    if n < problem.order:
        raise ValueError(f"basis order N={n} must be at least the ODE order {problem.order}")


def _expansions(problem: IvpProblem, ops: OperationalSet, exact_mode: bool):
    conv = (lambda v: v) if exact_mode else exact.to_float
    coeffs = [conv(expand_polynomial(ops.ctx, p)) for p in problem.coeff_polys]
    rhs = conv(expand_polynomial(ops.ctx, problem.rhs_poly))
    quad = None if problem.is_linear else conv(expand_polynomial(ops.ctx, problem.quad_poly))
    return coeffs, rhs, quad


def assemble_residual(
    problem: IvpProblem,
    ops: OperationalSet,
    a: Sequence,
    exact_mode: bool | None = None,
    product: str = DEFAULT_PRODUCT,
) -> np.ndarray:
    """Bernoulli coefficients of the equation residual for the trial vector ``a``.

    Each known polynomial ``p`` multiplies an unknown-dependent vector ``w`` as
    ``p.T @ C~(w)``; ``u^2`` is ``u.T @ C~(u)``.
    """
    _check_degrees(problem, ops)
    if exact_mode is None:
        exact_mode = exact.is_rational(a)
    a = exact.rational_array(a) if exact_mode else np.asarray(a, dtype=float)
    if a.shape != (ops.ctx.size,):
        raise ValueError(f"trial vector must have length {ops.ctx.size}, got {a.shape}")
    coeffs, rhs, quad = _expansions(problem, ops, exact_mode)
    ivs = init_vectors(problem, ops, exact_mode)
    mult = _product_builder(product)

    residual = -rhs
    for k, p in enumerate(coeffs):
        w = _level_vector(ops, a, ivs, problem.order, k, exact_mode)
        residual = residual + p @ mult(ops.ctx, w)
    if quad is not None:
        u = _level_vector(ops, a, ivs, problem.order, 0, exact_mode)
        u_sq = u @ mult(ops.ctx, u)
        residual = residual + quad @ mult(ops.ctx, u_sq)
    return residual


def linear_system(
    problem: IvpProblem, ops: OperationalSet, exact_mode: bool = False, product: str = DEFAULT_PRODUCT
):
    """``(L, b)`` such that the linear part of the residual is ``L @ a - b``.

    Uses ``p.T @ C~(w) = C~(p).T @ w``; both product operators are symmetric in their factors.
    """
    mult = _product_builder(product)
    coeffs, rhs, _ = _expansions(problem, ops, exact_mode)
    ivs = init_vectors(problem, ops, exact_mode)
    size = ops.ctx.size
    it = _integ(ops, exact_mode).T
    lin = exact.zeros(size, size) if exact_mode else np.zeros((size, size))
    b = rhs
    for k, p in enumerate(coeffs):
        times_p = mult(ops.ctx, p).T
        power = exact.identity(size) if exact_mode else np.eye(size)
        for _ in range(problem.order - k):
            power = it @ power
        lin = lin + times_p @ power
        b = b - times_p @ ivs[k]
    return lin, b


def residual_jacobian(
    problem: IvpProblem, ops: OperationalSet, a: np.ndarray, product: str = DEFAULT_PRODUCT
) -> np.ndarray:
    """Analytic Jacobian of :func:`assemble_residual` (floating point)."""
    mult = _product_builder(product)
    lin, _ = linear_system(problem, ops, product=product)
    if problem.is_linear:
        return lin
    _, _, quad = _expansions(problem, ops, False)
    ivs = init_vectors(problem, ops)
    u = _level_vector(ops, a, ivs, problem.order, 0, False)
    du_da = np.linalg.matrix_power(ops.integ_float.T, problem.order)
    # d(u.T C~(u)) = C~(u).T du + C~(du).T u; the two one-sided terms coincide
    cu = mult(ops.ctx, u).T
    square = cu @ du_da + cu @ du_da
    return mult(ops.ctx, quad).T @ square + lin


def _product_builder(product: str):
    try:
        return PRODUCT_BUILDERS[product]
    except KeyError:
        raise ValueError(f"unknown product operator {product!r}; choose from {sorted(PRODUCT_BUILDERS)}") from None


def _solve_linear(problem: IvpProblem, ops: OperationalSet, exact_mode: bool, product: str) -> np.ndarray:
    lin, b = linear_system(problem, ops, exact_mode, product)
    try:
        if exact_mode:
            return exact.solve(lin, b)
        return np.linalg.solve(lin, b)
    except (np.linalg.LinAlgError, exact.SingularMatrixError) as err:
        raise SolverError(f"linear Galerkin system is singular: {err}") from err


def solve(
    problem: IvpProblem,
    n: int,
    *,
    exact_mode: bool = False,
    product: str = DEFAULT_PRODUCT,
    tol: float = 1e-12,
    max_iter: int = MAX_NEWTON_ITERATIONS,
) -> SpectralSolution:
    """Solve ``problem`` with N = ``n``.

    ``product`` selects how products are mapped back into the basis: ``"projected"``
    (L2 projection of the exact product) or ``"truncated"`` (monomials above
    degree N dropped). Linear problems take one dense solve; problems with a
    ``u^2`` term use damped Newton started from the linearised solution.
    """
    _product_builder(product)
    ops = operational_set(n)
    _check_degrees(problem, ops)
    if exact_mode and not problem.is_linear:
        raise ValueError("exact mode supports linear problems only")

    if problem.is_linear:
        # the Galerkin matrix is rational, so solve exactly and round once
        a = _solve_linear(problem, ops, True, product)
        if not exact_mode:
            a = exact.to_float(a)
        res_norm = float(np.max(np.abs(exact.to_float(assemble_residual(problem, ops, a, exact_mode, product)))))
        if res_norm > tol and (exact_mode or res_norm > _roundoff_floor(linear_system(problem, ops, False, product)[0], a)):
            raise SolverError(f"linear solve left residual {res_norm:.3e}", res_norm)
        return SpectralSolution(
            a, problem.order, init_vectors(problem, ops, exact_mode), ops, product, exact_mode, None, res_norm
        )

    a, iters, res_norm = _newton(problem, ops, tol, max_iter, product)
    return SpectralSolution(a, problem.order, init_vectors(problem, ops), ops, product, False, iters, res_norm)


def _roundoff_floor(jac: np.ndarray, a: np.ndarray) -> float:
    return ROUNDOFF_FACTOR * np.finfo(float).eps * np.abs(jac).sum(axis=1).max() * np.abs(a).max()


def _newton(problem: IvpProblem, ops: OperationalSet, tol: float, max_iter: int, product: str):
    a = _solve_linear(problem.linearized(), ops, False, product)
    res = assemble_residual(problem, ops, a, False, product)
    norm2 = np.linalg.norm(res)
    for it in range(1, max_iter + 1):
        jac = residual_jacobian(problem, ops, a, product)
        try:
            delta = np.linalg.solve(jac, -res)
        except np.linalg.LinAlgError as err:
            raise SolverError(f"singular Jacobian at iteration {it}", float(np.max(np.abs(res)))) from err
        step = 1.0
        while True:
            trial = a + step * delta
            trial_res = assemble_residual(problem, ops, trial, False, product)
            trial_norm = np.linalg.norm(trial_res)
            if trial_norm <= (1.0 - ARMIJO_C * step) * norm2 or step <= MIN_STEP:
                break
            step *= 0.5
        a, res, norm2 = trial, trial_res, trial_norm
        inf_norm = float(np.max(np.abs(res)))
        # float evaluation of R cannot resolve below ~eps |J| |A|; matters for N >= 16
        floor = _roundoff_floor(jac, a)
        log.debug("newton iter %d: step %.3g, |R|_inf %.3e, floor %.1e", it, step, inf_norm, floor)
        if inf_norm <= tol:
            return a, it, inf_norm
        if inf_norm <= floor:
            return _refine(problem, ops, a, it, inf_norm, tol, product)
    raise SolverError(
        f"Newton did not converge in {max_iter} iterations (|R|_inf = {float(np.max(np.abs(res))):.3e})",
        float(np.max(np.abs(res))),
    )


def _exact_residual(problem: IvpProblem, ops: OperationalSet, a: np.ndarray, product: str) -> np.ndarray:
    rational = [Fraction(float(v)) for v in a]
    return exact.to_float(assemble_residual(problem, ops, rational, True, product))


def _refine(problem: IvpProblem, ops: OperationalSet, a: np.ndarray, iters: int, float_norm: float, tol: float, product: str):
    """Mixed-precision refinement: exact residual at the float iterate, float Jacobian for the correction.

    Used once float Newton has stalled at its rounding floor; keeps the best iterate seen.
    """
    best_a, best_norm = a, float_norm
    res = _exact_residual(problem, ops, a, product)
    norm = float(np.max(np.abs(res)))
    if norm < best_norm:
        best_a, best_norm = a, norm
    for _ in range(REFINEMENT_STEPS):
        if best_norm <= tol:
            break
        a = a + np.linalg.solve(residual_jacobian(problem, ops, a, product), -res)
        res = _exact_residual(problem, ops, a, product)
        norm = float(np.max(np.abs(res)))
        log.debug("refinement: exact |R|_inf %.3e", norm)
        if norm < best_norm:
            best_a, best_norm = a, norm
    return best_a, iters, best_norm
