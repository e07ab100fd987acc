import math

import numpy as np
import pytest

from bernoulli_opmat.benchmarks import (
    BENCHMARKS,
    TABLE_POINTS,
    bessel_j0,
    coefficient_decay,
    get_benchmark,
    report_solution,
    rms_error,
    run_benchmark,
)
from bernoulli_opmat.galerkin import solve

# reference comparison tables (10 decimals), keyed by benchmark then N
REFERENCE_TABLES = {
    "bessel0": {
        2: (1.0014754886, 0.9895787397, 0.9598567615, 0.9123095542, 0.8469371176, 0.7637394519),
        4: (0.9999950817, 0.9900259566, 0.9603965639, 0.9120062526, 0.8462868378, 0.7652025998),
        6: (1.0000000075, 0.9900249747, 0.9603982244, 0.9120048657, 0.8462873503, 0.7651976790),
        8: (1.0000000000, 0.9900249722, 0.9603982267, 0.9120048635, 0.8462873527, 0.7651976866),
        10: (1.0000000000, 0.9900249722, 0.9603982267, 0.9120048635, 0.8462873527, 0.7651976866),
    },
    "riccati-tanh": {
        4: (0.0025265013, 0.2412798535, 0.5687080628, 0.9529191921, 1.3465915432, 1.6869736561),
        6: (0.0001128571, 0.2419431649, 0.5678457562, 0.9535337210, 1.3464020534, 1.6896112463),
        8: (0.0000044867, 0.2419774162, 0.5678129586, 0.9535648227, 1.3463645265, 1.6894939049),
        10: (0.0000000000, 0.2419768508, 0.5678121631, 0.9535661622, 1.3463636335, 1.6894985427),
        14: (0.0000000000, 0.2419767996, 0.5678121662, 0.9535662164, 1.3463636553, 1.6894983916),
    },
    "riccati-erf": {
        2: (1.0058680884, 0.9999551044, 1.0168990769, 1.0567000057, 1.1193578910, 1.2048727327),
        4: (1.0000458868, 1.0024189537, 1.0176602221, 1.0544519892, 1.1181039457, 1.2105531747),
        6: (1.0000021902, 1.0024205376, 1.0176502287, 1.0544674572, 1.1180918378, 1.2105968244),
        8: (0.9999999813, 1.0024198267, 1.0176508744, 1.0544668142, 1.1180925448, 1.2105990333),
        10: (1.0000000000, 1.0024198255, 1.0176508789, 1.0544668099, 1.1180925453, 1.2105990151),
    },
}
REFERENCE_EXACT = {
    "bessel0": (1.0000000000, 0.9900249722, 0.9603982267, 0.9120048635, 0.8462873527, 0.7651976866),
    "riccati-tanh": (0.0000000000, 0.2419767996, 0.5678121663, 0.9535662164, 1.3463636554, 1.6894983916),
    "riccati-erf": (1.0000000000, 1.0024198255, 1.0176508789, 1.0544668099, 1.1180925454, 1.2105990147),
}

# (benchmark, N) entries at x = 0 that differ from our value beyond rounding; see
# test_reference_initial_values_known_differences
KNOWN_X0_DIFFERENCES = {("riccati-tanh", 6), ("riccati-tanh", 10), ("riccati-erf", 10)}


def fd_derivatives(f, x, h=1e-3):
    """First and second derivatives by 5-point central differences."""
    fm2, fm1, f0, fp1, fp2 = (f(x + k * h) for k in (-2, -1, 0, 1, 2))
    d1 = (fm2 - 8 * fm1 + 8 * fp1 - fp2) / (12 * h)
    d2 = (-fm2 + 16 * fm1 - 30 * f0 + 16 * fp1 - fp2) / (12 * h * h)
    return f0, d1, d2


SELF_CHECK_X = np.random.default_rng(11).uniform(0.05, 0.95, 20)


class TestExactSolutions:
    def test_bessel_ode(self):
        for x in SELF_CHECK_X:
            u, du, d2u = fd_derivatives(bessel_j0, x)
            assert abs(x * d2u + du + x * u) < 1e-8

    def test_lane_emden_ode(self):
        f = BENCHMARKS["lane-emden"].exact_scalar
        for x in SELF_CHECK_X:
            u, du, d2u = fd_derivatives(f, x)
            assert abs(x * d2u + 8 * du + x * x * u - (x**6 - x**5 + 44 * x**3 - 30 * x**2)) < 1e-8

    def test_tanh_ode(self):
        f = BENCHMARKS["riccati-tanh"].exact_scalar
        for x in SELF_CHECK_X:
            u, du, _ = fd_derivatives(f, x)
            assert abs(du - (2 * u - u * u + 1)) < 1e-8

    def test_erf_ode(self):
        f = BENCHMARKS["riccati-erf"].exact_scalar
        for x in SELF_CHECK_X:
            u, du, _ = fd_derivatives(f, x)
            assert abs(du - (1 + x * x - u * u)) < 1e-8

    @pytest.mark.parametrize("name", sorted(REFERENCE_EXACT))
    def test_reference_exact_column(self, name):
        got = BENCHMARKS[name].exact(np.array(TABLE_POINTS))
        np.testing.assert_allclose(got, REFERENCE_EXACT[name], rtol=0, atol=1e-10)

    def test_initial_values(self):
        for bench in BENCHMARKS.values():
            assert bench.exact(0.0) == pytest.approx(float(bench.problem.init_conditions[0]), abs=1e-15)

    def test_bessel_series_against_scipy(self):
        special = pytest.importorskip("scipy.special")
        xs = np.linspace(0, 1, 11)
        np.testing.assert_allclose([bessel_j0(x) for x in xs], special.j0(xs), rtol=0, atol=1e-15)

    def test_erf_integral_against_math(self):
        f = BENCHMARKS["riccati-erf"].exact_scalar
        for x in (0.3, 0.7, 1.0):
            area = math.sqrt(math.pi) / 2 * math.erf(x)
            assert f(x) == pytest.approx(x + math.exp(-x * x) / (1 + area), abs=1e-15)


TABLE_CASES = [(name, n) for name, table in REFERENCE_TABLES.items() for n in table]


@pytest.mark.parametrize("name,n", TABLE_CASES)
def test_reference_table_columns(name, n):
    report = run_benchmark(name, n)
    got = [row[1] for row in report.point_values]
    want = REFERENCE_TABLES[name][n]
    start = 1 if (name, n) in KNOWN_X0_DIFFERENCES else 0
    np.testing.assert_allclose(got[start:], want[start:], rtol=0, atol=1e-10)


def test_reference_initial_values_known_differences():
    # the N=6 tanh entry agrees in magnitude but is printed without its minus sign
    assert run_benchmark("riccati-tanh", 6).point_values[0][1] == pytest.approx(-0.0001128571, abs=1e-10)
    # at N=10 the x=0 entries equal the initial data although the rest of each column matches ours
    assert run_benchmark("riccati-tanh", 10).point_values[0][1] == pytest.approx(-1.511e-7, abs=1e-10)
    assert run_benchmark("riccati-erf", 10).point_values[0][1] == pytest.approx(0.9999999996, abs=1e-10)


RMS_CASES = [(name, n, ref) for name, b in BENCHMARKS.items() for n, ref in b.reference_rms.items()]


@pytest.mark.parametrize("name,n,ref", RMS_CASES)
def test_rms_within_factor_100(name, n, ref):
    rms = run_benchmark(name, n).rms
    # at N=10 Bessel both values sit at the rounding level
    assert ref / 100 <= max(rms, 1e-14) and rms <= ref * 100


class TestRunBenchmark:
    def test_bessel_n8(self):
        report = run_benchmark("bessel0", 8)
        assert report.point_values[2][1] == pytest.approx(0.9603982267, abs=1e-10)
        assert report.rms == pytest.approx(3.18e-12, rel=0.5)

    def test_tanh_n10(self):
        report = run_benchmark("riccati-tanh", 10)
        assert report.point_values[1][1] == pytest.approx(0.2419768508, abs=1e-10)
        assert report.newton_iters <= 15

    def test_lane_emden_n6(self):
        report = run_benchmark("lane-emden", 6)
        assert report.max_table_error <= 1e-12
        assert report.newton_iters is None

    def test_report_shape(self):
        report = run_benchmark("riccati-erf", 4, rms_points=11)
        assert len(report.grid_values) == 11
        assert [row[0] for row in report.point_values] == list(TABLE_POINTS)
        approx = [row[1] for row in report.grid_values]
        assert report.rms == pytest.approx(rms_error(approx, [row[2] for row in report.grid_values]))

    def test_rms_definition(self):
        assert rms_error([1.0, 2.0], [1.0, 0.0]) == pytest.approx(math.sqrt(2.0))

    def test_unknown(self):
        with pytest.raises(ValueError, match="unknown benchmark"):
            get_benchmark("airy")

    @pytest.mark.parametrize("n", [1, 21])
    def test_order_range(self, n):
        with pytest.raises(ValueError, match="N must lie"):
            run_benchmark("bessel0", n)

    def test_rms_points_checked(self):
        sol = solve(BENCHMARKS["bessel0"].problem, 4)
        with pytest.raises(ValueError, match="rms_points"):
            report_solution("x", sol, rms_points=1)

    def test_report_without_exact(self):
        sol = solve(BENCHMARKS["bessel0"].problem, 4)
        report = report_solution("x", sol, rms_points=5)
        assert report.rms is None and report.max_table_error is None


class TestCoefficientDecay:
    def test_row_count(self):
        for name in BENCHMARKS:
            if name != "lane-emden":
                assert len(coefficient_decay(name, [2])) == 3

    def test_lane_emden_tail_vanishes(self):
        rows = coefficient_decay("lane-emden", [6])
        assert all(v <= 1e-12 for n, i, v in rows if i >= 3)
        assert [v for n, i, v in rows if i < 3] == [1.0, 6.0, 12.0]

    def test_bessel_decays(self):
        rows = coefficient_decay("bessel0", [4, 6, 8, 10])
        for n in (4, 6, 8, 10):
            values = [v for m, i, v in rows if m == n and i >= 2]
            assert values == sorted(values, reverse=True)
