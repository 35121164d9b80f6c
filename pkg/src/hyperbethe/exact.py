"""Exact rational linear algebra on numpy object arrays of ``Fraction``.

Matrices are plain ``numpy.ndarray`` with ``dtype=object`` so that ``@``,
slicing and transposition work as usual while every entry stays an exact
``fractions.Fraction``.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from numbers import Rational
from typing import Iterable, Sequence

import numpy as np


def to_fraction(value) -> Fraction:
    """Parse ``"p/q"`` strings, ints, Fractions and floats (exactly)."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot interpret {value!r} as a rational number")


def fraction_str(value: Fraction) -> str:
    """Serialize as ``"p/q"`` (denominator always present)."""
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def is_exact(values: Iterable) -> bool:
    return all(isinstance(v, (int, Fraction)) and not isinstance(v, bool) for v in values)


def qmatrix(rows: Sequence[Sequence], shape: tuple[int, int] | None = None) -> np.ndarray:
    """Build an object matrix of Fractions."""
    if shape is not None and len(rows) == 0:
        return np.empty(shape, dtype=object)
    out = np.array([[to_fraction(x) for x in row] for row in rows], dtype=object)
    if out.ndim != 2:
        out = out.reshape(len(rows), -1)
    return out


def qvector(values: Sequence) -> np.ndarray:
    return np.array([to_fraction(x) for x in values], dtype=object)


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


def rref(matrix: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns."""
    m = np.array(matrix, dtype=object, copy=True)
    if m.ndim != 2:
        raise ValueError("rref expects a 2-d matrix")
    n_rows, n_cols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(n_cols):
        if r == n_rows:
            break
        piv = next((i for i in range(r, n_rows) if m[i, c] != 0), None)
        if piv is None:
            continue
        if piv != r:
            m[[r, piv]] = m[[piv, r]]
        p = m[r, c]
        if p != 1:
            m[r, c:] = [x / p for x in m[r, c:]]
        for i in range(n_rows):
            if i != r and m[i, c] != 0:
                f = m[i, c]
                m[i, c:] = m[i, c:] - f * m[r, c:]
        pivots.append(c)
        r += 1
    return m, pivots


def rank(matrix) -> int:
    m = np.asarray(matrix, dtype=object)
    if m.size == 0:
        return 0
    return len(rref(m)[1])


def nullspace(matrix: np.ndarray, n_cols: int | None = None) -> np.ndarray:
    """Basis of the right kernel, returned as columns of a matrix.

    Each basis vector has a single free coordinate equal to 1, so the result
    is canonical for a given matrix.
    """
    m = np.asarray(matrix, dtype=object)
    if m.size == 0:
        n = m.shape[1] if m.ndim == 2 else int(n_cols or 0)
        return identity(n)
    red, pivots = rref(m)
    n = red.shape[1]
    free = [c for c in range(n) if c not in pivots]
    basis = zeros(n, len(free))
    for col, f in enumerate(free):
        basis[f, col] = Fraction(1)
        for row, p in enumerate(pivots):
            basis[p, col] = -red[row, f]
    return basis


def solve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Exact solution of ``a @ x = b`` for square nonsingular ``a``."""
    a = np.asarray(a, dtype=object)
    b = np.asarray(b, dtype=object)
    vec = b.ndim == 1
    rhs = b.reshape(-1, 1) if vec else b
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("solve expects a square matrix")
    red, pivots = rref(np.hstack([a, rhs]))
    if pivots[:n] != list(range(n)) or (len(pivots) > n):
        raise np.linalg.LinAlgError("singular matrix")
    x = red[:, n:]
    return x[:, 0] if vec else x


def inverse(a: np.ndarray) -> np.ndarray:
    return solve(a, identity(np.asarray(a).shape[0]))


def det(a: np.ndarray) -> Fraction:
    """Determinant by fraction-exact Gaussian elimination."""
    m = np.array(a, dtype=object, copy=True)
    n = m.shape[0]
    if n == 0:
        return Fraction(1)
    sign = 1
    result = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i, c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[[c, piv]] = m[[piv, c]]
            sign = -sign
        p = m[c, c]
        result *= p
        for i in range(c + 1, n):
            if m[i, c] != 0:
                f = m[i, c] / p
                m[i, c:] = m[i, c:] - f * m[c, c:]
    return sign * result


def column_space_solve(basis: np.ndarray, vectors: np.ndarray) -> np.ndarray:
    """Coordinates ``c`` with ``basis @ c == vectors``; raises if not in span."""
    basis = np.asarray(basis, dtype=object)
    vectors = np.asarray(vectors, dtype=object)
    vec = vectors.ndim == 1
    rhs = vectors.reshape(-1, 1) if vec else vectors
    d = basis.shape[1]
    if d == 0:
        if any(x != 0 for x in rhs.flat):
            raise ValueError("vector not in the (zero) span")
        out = zeros(0, rhs.shape[1])
        return out[:, 0] if vec else out
    red, pivots = rref(np.hstack([basis, rhs]))
    if any(p >= d for p in pivots) or len(pivots) < d:
        raise ValueError("vectors not in the column span or basis dependent")
    coords = red[:d, d:]
    return coords[:, 0] if vec else coords


def is_zero(a) -> bool:
    return all(x == 0 for x in np.asarray(a, dtype=object).flat)


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def to_float(a) -> np.ndarray:
    return np.asarray(a, dtype=object).astype(float)


def subspace_intersection(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Basis (columns) of span(a) ∩ span(b) by stacked-kernel elimination."""
    a = np.asarray(a, dtype=object)
    b = np.asarray(b, dtype=object)
    if a.shape[1] == 0 or b.shape[1] == 0:
        return zeros(a.shape[0], 0)
    ker = nullspace(np.hstack([a, -b]))
    out = a @ ker[: a.shape[1], :]
    red, pivots = rref(out.T)
    return red[: len(pivots)].T


def common_denominator(a) -> int:
    den = 1
    for x in np.asarray(a, dtype=object).flat:
        d = x.denominator if isinstance(x, Fraction) else 1
        if den % d:
            den = den * d // gcd(den, d)
    return den


def to_integer(a) -> tuple[np.ndarray, int]:
    """``(N, d)`` with ``a == N / d`` and ``N`` an object array of Python ints."""
    a = np.asarray(a, dtype=object)
    den = common_denominator(a)
    flat = [int(x * den) for x in a.flat]
    out = np.empty(a.shape, dtype=object)
    out.flat[:] = flat
    return out, den


def from_integer(n: np.ndarray, den: int) -> np.ndarray:
    out = np.empty(n.shape, dtype=object)
    out.flat[:] = [Fraction(int(x), den) for x in n.flat]
    return out


def matmul(a, b) -> np.ndarray:
    """Exact product computed on integer-scaled copies (much faster than Fraction arithmetic)."""
    ia, da = to_integer(a)
    ib, db = to_integer(b)
    if ia.shape[-1] == 0:
        return zeros(ia.shape[0], ib.shape[1])
    return from_integer(ia.dot(ib), da * db)


def commutes(a, b) -> bool:
    ia, _ = to_integer(a)
    ib, _ = to_integer(b)
    if ia.size == 0:
        return True
    return all(x == 0 for x in (ia.dot(ib) - ib.dot(ia)).flat)


def unit_rows(basis: np.ndarray) -> list[int] | None:
    """Rows of ``basis`` that form an identity matrix, one per column, if they exist."""
    basis = np.asarray(basis, dtype=object)
    found: dict[int, int] = {}
    for r in range(basis.shape[0]):
        nz = [c for c in range(basis.shape[1]) if basis[r, c] != 0]
        if len(nz) == 1 and basis[r, nz[0]] == 1 and nz[0] not in found:
            found[nz[0]] = r
    if len(found) != basis.shape[1]:
        return None
    return [found[c] for c in range(basis.shape[1])]


def restrict_to_span(op: np.ndarray, basis: np.ndarray) -> np.ndarray:
    """Matrix ``M`` with ``op @ basis == basis @ M``; raises ValueError if the span is not invariant."""
    image = matmul(op, basis)
    rows = unit_rows(basis)
    if rows is None:
        return column_space_solve(basis, image)
    coords = image[rows, :]
    if basis.shape[1] and not is_zero(matmul(basis, coords) - image):
        raise ValueError("vectors not in the column span")
    return coords
