"""The four reference initial-value problems and their closed-form solutions."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .galerkin import DEFAULT_PRODUCT, IvpProblem, SpectralSolution, solve
from .quadrature import gauss_legendre

TABLE_POINTS = (0.0, 0.2, 0.4, 0.6, 0.8, 1.0)
DEFAULT_RMS_POINTS = 101
MIN_ORDER, MAX_ORDER = 2, 20


def bessel_j0(x: float) -> float:
    """J_0 by its power series, summed until a term drops below 1e-18."""
    total, term, i = 1.0, 1.0, 0
    while True:
        i += 1
        term *= -(x * x) / (4.0 * i * i)
        total += term
        if abs(term) < 1e-18:
            return total


def lane_emden_exact(x: float) -> float:
    return x**4 - x**3


_SQRT2 = math.sqrt(2.0)
_TANH_SHIFT = 0.5 * math.log((_SQRT2 - 1.0) / (_SQRT2 + 1.0))


def riccati_tanh_exact(x: float) -> float:
    return 1.0 + _SQRT2 * math.tanh(_SQRT2 * x + _TANH_SHIFT)


def riccati_erf_exact(x: float) -> float:
    if x == 0.0:
        area = 0.0
    else:
        area = float(gauss_legendre(lambda t: math.exp(-t * t), 0.0, x, rtol=1e-14))
    return x + math.exp(-x * x) / (1.0 + area)


@dataclass(frozen=True)
class Benchmark:
    name: str
    problem: IvpProblem
    exact_scalar: Callable[[float], float] = field(repr=False)
    description: str = ""
    table_points: tuple[float, ...] = TABLE_POINTS
    # reference RMS errors by N, used only for side-by-side reporting
    reference_rms: dict[int, float] = field(default_factory=dict, repr=False)

    def exact(self, x):
        if np.ndim(x) == 0:
            return self.exact_scalar(float(x))
        return np.array([self.exact_scalar(float(t)) for t in np.ravel(x)]).reshape(np.shape(x))


BENCHMARKS: dict[str, Benchmark] = {
    b.name: b
    for b in (
        Benchmark(
            "bessel0",
            IvpProblem(order=2, coeff_polys=((0, 1), (1,), (0, 1)), rhs_poly=(0,), init_conditions=(1, 0)),
            bessel_j0,
            "x u'' + u' + x u = 0, u(0) = 1, u'(0) = 0",
            reference_rms={2: 7.9298e-4, 4: 2.5651e-6, 6: 3.7742e-9, 8: 3.1762e-12, 10: 1.901e-15},
        ),
        Benchmark(
            "lane-emden",
            IvpProblem(
                order=2,
                coeff_polys=((0, 0, 1), (8,), (0, 1)),
                rhs_poly=(0, 0, -30, 44, 0, -1, 1),
                init_conditions=(0, 0),
            ),
            lane_emden_exact,
            "x u'' + 8 u' + x^2 u = x^6 - x^5 + 44 x^3 - 30 x^2, u(0) = u'(0) = 0",
        ),
        Benchmark(
            "riccati-tanh",
            IvpProblem(order=1, coeff_polys=((-2,), (1,)), rhs_poly=(1,), init_conditions=(0,), quad_poly=(1,)),
            riccati_tanh_exact,
            "u' = 2u - u^2 + 1, u(0) = 0",
            reference_rms={4: 1.3164e-3, 6: 5.7405e-5, 8: 2.2057e-6, 10: 7.7612e-8, 14: 6.9755e-11},
        ),
        Benchmark(
            "riccati-erf",
            IvpProblem(order=1, coeff_polys=((0,), (1,)), rhs_poly=(1, 0, 1), init_conditions=(1,), quad_poly=(1,)),
            riccati_erf_exact,
            "u' = 1 + x^2 - u^2, u(0) = 1",
            reference_rms={2: 3.0751e-3, 4: 2.3575e-5, 6: 1.0961e-6, 8: 8.8580e-9, 10: 2.0730e-10},
        ),
    )
}


def get_benchmark(name: str) -> Benchmark:
    try:
        return BENCHMARKS[name]
    except KeyError:
        raise ValueError(f"unknown benchmark {name!r}; available: {', '.join(BENCHMARKS)}") from None


@dataclass
class SolveReport:
    name: str
    n: int
    point_values: list[tuple[float, float, float | None, float | None]]
    rms: float | None
    newton_iters: int | None
    residual_norm: float
    grid_values: list[tuple[float, float, float | None, float | None]] = field(repr=False, default_factory=list)
    solution: SpectralSolution | None = field(repr=False, default=None)

    @property
    def max_table_error(self) -> float | None:
        errs = [e for *_, e in self.point_values if e is not None]
        return max(errs) if errs else None


def rms_error(approx, exact) -> float:
    diff = np.asarray(approx, dtype=float) - np.asarray(exact, dtype=float)
    return float(np.sqrt(np.mean(diff**2)))


def _rows(sol: SpectralSolution, xs, exact_fn) -> list:
    approx = sol.evaluate(np.asarray(xs, dtype=float))
    rows = []
    for x, y in zip(xs, np.atleast_1d(approx)):
        if exact_fn is None:
            rows.append((float(x), float(y), None, None))
        else:
            ref = float(exact_fn(float(x)))
            rows.append((float(x), float(y), ref, abs(float(y) - ref)))
    return rows


def report_solution(
    name: str,
    sol: SpectralSolution,
    rms_points: int = DEFAULT_RMS_POINTS,
    exact_fn: Callable[[float], float] | None = None,
    table_points=TABLE_POINTS,
) -> SolveReport:
    if rms_points < 2:
        raise ValueError(f"rms_points must be >= 2, got {rms_points}")
    grid = np.linspace(0.0, 1.0, rms_points)
    grid_rows = _rows(sol, grid, exact_fn)
    rms = None
    if exact_fn is not None:
        rms = rms_error([r[1] for r in grid_rows], [r[2] for r in grid_rows])
    return SolveReport(
        name=name,
        n=sol.n,
        point_values=_rows(sol, table_points, exact_fn),
        rms=rms,
        newton_iters=sol.newton_iters,
        residual_norm=sol.residual_norm,
        grid_values=grid_rows,
        solution=sol,
    )


def run_benchmark(
    name: str,
    n: int,
    rms_points: int = DEFAULT_RMS_POINTS,
    *,
    exact_mode: bool = False,
    product: str = DEFAULT_PRODUCT,
) -> SolveReport:
    bench = get_benchmark(name)
    if not MIN_ORDER <= n <= MAX_ORDER:
        raise ValueError(f"N must lie in {MIN_ORDER}..{MAX_ORDER}, got {n}")
    sol = solve(bench.problem, n, exact_mode=exact_mode, product=product)
    return report_solution(name, sol, rms_points, bench.exact_scalar, bench.table_points)


def coefficient_decay(name: str, orders, product: str = DEFAULT_PRODUCT) -> list[tuple[int, int, float]]:
    """``(N, i, |a_i|)`` rows of the highest-derivative coefficients for each N."""
    bench = get_benchmark(name)
    rows = []
    for n in orders:
        if not MIN_ORDER <= n <= MAX_ORDER:
            raise ValueError(f"N must lie in {MIN_ORDER}..{MAX_ORDER}, got {n}")
        sol = solve(bench.problem, n, product=product)
        rows.extend((n, i, abs(float(a))) for i, a in enumerate(sol.a_vector))
    return rows
