"""
Dense Gaussian elimination over F_q on integer-code matrices.

All functions take the :class:`~resupal.gfield.Field` first and return new
``int64`` arrays.  Row reduction returns ``(R, pivots)`` with ``R`` in
reduced row-echelon form, the convention the rest of the package relies on
for canonical subspace bases and deterministic quotient representatives.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatch, DivisionByZero
from .gfield import Field


def rref(F: Field, A: np.ndarray) -> tuple[np.ndarray, list[int]]:
    R = np.array(A, dtype=np.int64, copy=True)
    if R.ndim != 2:
        raise DimensionMismatch(f"expected a matrix, got shape {R.shape}")
    rows, cols = R.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(R[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            R[[r, k]] = R[[k, r]]
        R[r] = F.mul(F.inv(int(R[r, c])), R[r])
        factors = R[:, c].copy()
        factors[r] = 0
        others = np.nonzero(factors)[0]
        if others.size:
            R[others] = F.sub(R[others], F.mul(factors[others, None], R[r][None, :]))
        pivots.append(c)
        r += 1
    return R, pivots


def rank(F: Field, A: np.ndarray) -> int:
    A = np.asarray(A)
    if A.size == 0:
        return 0
    return len(rref(F, A)[1])


def row_basis(F: Field, A: np.ndarray, ncols: int | None = None) -> np.ndarray:
    """Reduced echelon basis (rows) of the row space of ``A``."""
    A = np.asarray(A, dtype=np.int64)
    if A.size == 0:
        width = ncols if ncols is not None else (A.shape[1] if A.ndim == 2 else 0)
        return np.zeros((0, width), dtype=np.int64)
    R, piv = rref(F, A)
    return R[: len(piv)]


def nullspace(F: Field, A: np.ndarray) -> np.ndarray:
    """Rows spanning ``{v : A v = 0}``; one row per free column."""
    A = np.asarray(A, dtype=np.int64)
    cols = A.shape[1]
    if A.shape[0] == 0:
        return np.eye(cols, dtype=np.int64)
    R, piv = rref(F, A)
    free = [c for c in range(cols) if c not in set(piv)]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for t, f in enumerate(free):
        basis[t, f] = 1
        for i, pc in enumerate(piv):
            basis[t, pc] = F.neg(int(R[i, f]))
    return basis


def solve(F: Field, A: np.ndarray, b: np.ndarray) -> np.ndarray | None:
    """One solution of ``A x = b`` (free variables set to zero) or None."""
    A = np.asarray(A, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64).reshape(-1)
    cols = A.shape[1]
    if A.shape[0] != b.shape[0]:
        raise DimensionMismatch(f"{A.shape} system with rhs of length {b.shape[0]}")
    if A.shape[0] == 0:
        return np.zeros(cols, dtype=np.int64)
    R, piv = rref(F, np.hstack([A, b[:, None]]))
    if piv and piv[-1] == cols:
        return None
    x = np.zeros(cols, dtype=np.int64)
    for i, pc in enumerate(piv):
        x[pc] = R[i, cols]
    return x


def inverse(F: Field, A: np.ndarray) -> np.ndarray:
    A = np.asarray(A, dtype=np.int64)
    n = A.shape[0]
    if A.shape != (n, n):
        raise DimensionMismatch(f"cannot invert a {A.shape} matrix")
    R, piv = rref(F, np.hstack([A, np.eye(n, dtype=np.int64)]))
    if piv[:n] != list(range(n)):
        raise DivisionByZero("matrix is singular")
    return R[:, n:]


def in_span(F: Field, basis: np.ndarray, v: np.ndarray) -> bool:
    basis = np.asarray(basis, dtype=np.int64)
    v = np.asarray(v, dtype=np.int64)
    if not np.any(v):
        return True
    if basis.size == 0:
        return False
    return rank(F, np.vstack([basis, v[None, :]])) == rank(F, basis)


def coordinates(F: Field, basis: np.ndarray, v: np.ndarray) -> np.ndarray | None:
    """Coefficients ``c`` with ``c @ basis = v``, or None outside the span."""
    basis = np.asarray(basis, dtype=np.int64)
    if basis.shape[0] == 0:
        return np.zeros(0, dtype=np.int64) if not np.any(v) else None
    return solve(F, basis.T, v)


def complement(F: Field, sub: np.ndarray, full: np.ndarray) -> np.ndarray:
    """Rows of ``full`` that extend a basis of ``sub`` to a basis of ``span(full)``.

    Candidates are taken in order, so the result is deterministic for a
    fixed ``full``.
    """
    sub = np.asarray(sub, dtype=np.int64)
    full = np.asarray(full, dtype=np.int64)
    width = full.shape[1] if full.ndim == 2 else sub.shape[1]
    picked: list[np.ndarray] = []
    current = sub.reshape(-1, width) if sub.size else np.zeros((0, width), np.int64)
    r = rank(F, current) if current.shape[0] else 0
    for row in full:
        trial = np.vstack([current, row[None, :]])
        rt = rank(F, trial)
        if rt > r:
            picked.append(row)
            current, r = trial, rt
    if not picked:
        return np.zeros((0, width), dtype=np.int64)
    return np.array(picked, dtype=np.int64)


def intersect(F: Field, U: np.ndarray, V: np.ndarray) -> np.ndarray:
    """Row basis of ``span(U) ∩ span(V)``."""
    U = np.asarray(U, dtype=np.int64)
    V = np.asarray(V, dtype=np.int64)
    if U.shape[0] == 0 or V.shape[0] == 0:
        return np.zeros((0, U.shape[1] if U.ndim == 2 else V.shape[1]), np.int64)
    # a U = b V  <=>  [U; -V]^T [a; b] = 0
    stacked = np.vstack([U, F.neg(V)])
    kernel = nullspace(F, stacked.T)
    if kernel.shape[0] == 0:
        return np.zeros((0, U.shape[1]), dtype=np.int64)
    vectors = F.matmul(kernel[:, : U.shape[0]], U)
    return row_basis(F, vectors, U.shape[1])
