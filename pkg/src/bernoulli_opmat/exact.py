"""Dense linear algebra over exact rationals.

Matrices are numpy object arrays holding :class:`fractions.Fraction` entries,
so ``@`` and elementwise arithmetic stay exact.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np


class SingularMatrixError(ArithmeticError):
    pass


def rational_array(values: Iterable) -> np.ndarray:
    src = np.asarray(values, dtype=object)
    return np.array([Fraction(v) for v in src.ravel()], dtype=object).reshape(src.shape)


def zeros(n: int, m: int | None = None) -> np.ndarray:
    shape = (n,) if m is None else (n, m)
    out = np.empty(shape, dtype=object)
    out.fill(Fraction(0))
    return out


def identity(n: int) -> np.ndarray:
    out = zeros(n, n)
    for i in range(n):
        out[i, i] = Fraction(1)
    return out


def to_float(a: np.ndarray) -> np.ndarray:
    return np.array(a, dtype=float)


def is_rational(values) -> bool:
    """True when every entry is an int or Fraction (bools and floats excluded)."""
    flat = np.ravel(np.asarray(values, dtype=object))
    return all(isinstance(v, (int, Fraction)) and not isinstance(v, bool) for v in flat)


def is_lower_triangular(a: np.ndarray) -> bool:
    n = a.shape[0]
    return all(a[i, j] == 0 for i in range(n) for j in range(i + 1, n))


def solve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve ``a @ x = b`` exactly by Gaussian elimination with pivoting on nonzeros.

    ``b`` may be a vector or a matrix of right-hand sides.
    """
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError(f"square matrix required, got shape {a.shape}")
    vector_rhs = b.ndim == 1
    m = np.array(a, dtype=object, copy=True)
    rhs = np.array(b, dtype=object, copy=True).reshape(n, -1)

    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r, col] != 0), None)
        if pivot is None:
            raise SingularMatrixError(f"matrix is singular (no pivot in column {col})")
        if pivot != col:
            m[[col, pivot]] = m[[pivot, col]]
            rhs[[col, pivot]] = rhs[[pivot, col]]
        p = m[col, col]
        for r in range(col + 1, n):
            f = m[r, col]
            if f == 0:
                continue
            f = f / p
            m[r, col:] = m[r, col:] - f * m[col, col:]
            rhs[r] = rhs[r] - f * rhs[col]

    x = zeros(n, rhs.shape[1])
    for r in range(n - 1, -1, -1):
        s = rhs[r] - m[r, r + 1:] @ x[r + 1:] if r + 1 < n else rhs[r]
        x[r] = s / m[r, r]
    return x[:, 0] if vector_rhs else x


def inverse(a: np.ndarray) -> np.ndarray:
    return solve(a, identity(a.shape[0]))


def as_fractions(values: Sequence) -> list[Fraction]:
    return [Fraction(v) for v in values]
