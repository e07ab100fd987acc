"""Plain-text problem files.

One ``key = value`` pair per line, ``#`` starts a comment. Values are JSON
literals; any number may also be written as a quoted fraction such as ``"1/3"``.
Polynomials are ascending monomial coefficient lists::

    # x u'' + 8 u' + x^2 u = x^6 - x^5 + 44 x^3 - 30 x^2
    order = 2
    coeff_polys = [[0, 0, 1], [8], [0, 1]]
    rhs_poly = [0, 0, -30, 44, 0, -1, 1]
    init_conditions = [0, 0]
    N = 6
    rms_points = 101

``quad_poly`` (coefficient of ``u^2``) is optional.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .benchmarks import DEFAULT_RMS_POINTS, MAX_ORDER, MIN_ORDER
from .galerkin import IvpProblem

REQUIRED = ("order", "coeff_polys", "rhs_poly", "init_conditions", "N")
OPTIONAL = ("quad_poly", "rms_points")


class ProblemFileError(ValueError):
    def __init__(self, message: str, source: str = "<string>", line: int | None = None, key: str | None = None):
        where = source if line is None else f"{source}:{line}"
        if key is not None:
            where += f" [{key}]"
        super().__init__(f"{where}: {message}")
        self.line = line
        self.key = key


@dataclass(frozen=True)
class ProblemSpec:
    problem: IvpProblem
    n: int
    rms_points: int = DEFAULT_RMS_POINTS


def _number(value, fail):
    if isinstance(value, bool):
        fail(f"expected a number, got {value!r}")
    if isinstance(value, int):
        return value
    if isinstance(value, float):
        return value
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            fail(f"cannot read {value!r} as a number")
    fail(f"expected a number, got {type(value).__name__}")


def _poly(value, fail) -> tuple:
    if not isinstance(value, list) or not value:
        fail("expected a non-empty list of coefficients")
    return tuple(_number(v, fail) for v in value)


def _int(value, fail) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        fail(f"expected an integer, got {value!r}")
    return value


def parse_problem(text: str, source: str = "<string>") -> ProblemSpec:
    raw: dict[str, tuple[object, int]] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ProblemFileError("expected 'key = value'", source, lineno)
        key, _, value_text = stripped.partition("=")
        key = key.strip()
        if key not in REQUIRED + OPTIONAL:
            raise ProblemFileError(f"unknown key {key!r}", source, lineno, key)
        if key in raw:
            raise ProblemFileError(f"duplicate key (first given on line {raw[key][1]})", source, lineno, key)
        try:
            value = json.loads(value_text.strip())
        except json.JSONDecodeError as exc:
            raise ProblemFileError(f"malformed value: {exc.msg}", source, lineno, key) from None
        raw[key] = (value, lineno)

    for key in REQUIRED:
        if key not in raw:
            raise ProblemFileError("missing required key", source, None, key)

    def field(key):
        value, lineno = raw[key]

        def fail(message):
            raise ProblemFileError(message, source, lineno, key)

        return value, fail

    order_v, fail = field("order")
    order = _int(order_v, fail)
    if order not in (1, 2):
        fail(f"order must be 1 or 2, got {order}")

    polys_v, fail = field("coeff_polys")
    if not isinstance(polys_v, list) or len(polys_v) != order + 1:
        fail(f"expected a list of {order + 1} coefficient lists (one per derivative level 0..{order})")
    coeff_polys = tuple(_poly(p, fail) for p in polys_v)

    rhs_v, fail = field("rhs_poly")
    rhs = _poly(rhs_v, fail)

    ic_v, fail = field("init_conditions")
    if not isinstance(ic_v, list) or len(ic_v) != order:
        fail(f"expected {order} initial values [u(0){', du/dx(0)' if order == 2 else ''}]")
    ic = tuple(_number(v, fail) for v in ic_v)

    n_v, fail = field("N")
    n = _int(n_v, fail)
    if not MIN_ORDER <= n <= MAX_ORDER:
        fail(f"N must lie in {MIN_ORDER}..{MAX_ORDER}, got {n}")

    quad = None
    if "quad_poly" in raw:
        quad_v, fail = field("quad_poly")
        quad = _poly(quad_v, fail)

    rms_points = DEFAULT_RMS_POINTS
    if "rms_points" in raw:
        rms_v, fail = field("rms_points")
        rms_points = _int(rms_v, fail)
        if rms_points < 2:
            fail("rms_points must be >= 2")

    try:
        problem = IvpProblem(order, coeff_polys, rhs, ic, quad)
    except ValueError as exc:
        raise ProblemFileError(str(exc), source) from None
    if problem.max_degree > n:
        raise ProblemFileError(f"polynomial degree {problem.max_degree} exceeds N={n}", source, raw["N"][1], "N")
    return ProblemSpec(problem, n, rms_points)


def load_problem_file(path: str | Path) -> ProblemSpec:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ProblemFileError(f"cannot read file: {exc.strerror}", str(path)) from None
    return parse_problem(text, str(path))
