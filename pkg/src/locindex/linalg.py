"""Rank, inverse and determinant over the two scalar realizations.

Exact routines work on numpy object arrays (or sparse column dicts) of
Fractions / Cyclotomic numbers. Floating routines use an SVD with an absolute
cutoff and an ambiguity band that raises instead of guessing.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .errors import AmbiguousRankError, ConstructionError
from .scalars import exact_eye, is_zero

RANK_CUTOFF = 1e-9
AMBIGUITY_FLOOR = 1e-12


def sparse_rank(columns):
    """Exact rank of a sparse matrix given as an iterable of ``{row: value}`` dicts.

    Column-by-column reduction keyed by the smallest row index; fill-in stays
    small for the boundary matrices built in this package.
    """
    pivots = {}
    rank = 0
    for col in columns:
        v = {r: c for r, c in col.items() if not is_zero(c)}
        while v:
            lead = min(v)
            piv = pivots.get(lead)
            if piv is None:
                inv = 1 / v[lead]
                pivots[lead] = {r: c * inv for r, c in v.items()}
                rank += 1
                break
            f = v[lead]
            for r, c in piv.items():
                nv = v.get(r, 0) - f * c
                if is_zero(nv):
                    v.pop(r, None)
                else:
                    v[r] = nv
    return rank


def float_rank(mat, cutoff=RANK_CUTOFF, floor=AMBIGUITY_FLOOR):
    mat = np.asarray(mat, dtype=complex)
    if mat.size == 0:
        return 0
    s = np.linalg.svd(mat, compute_uv=False)
    ambiguous = s[(s >= floor) & (s <= cutoff)]
    if ambiguous.size:
        raise AmbiguousRankError(
            f"{ambiguous.size} singular value(s) inside the ambiguity band [{floor}, {cutoff}]",
            singular_values=s.tolist(),
        )
    return int(np.sum(s > cutoff))


def dense_rank_exact(mat):
    mat = np.asarray(mat, dtype=object)
    if mat.size == 0:
        return 0
    cols = []
    for j in range(mat.shape[1]):
        cols.append({i: mat[i, j] for i in range(mat.shape[0]) if not is_zero(mat[i, j])})
    return sparse_rank(cols)


def rank(mat, kind):
    return dense_rank_exact(mat) if kind == "rational" else float_rank(mat)


def _gauss_jordan(mat):
    """Return (inverse or None, determinant) for a square exact matrix."""
    n = mat.shape[0]
    a = np.array(mat, dtype=object, copy=True)
    inv = exact_eye(n)
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if not is_zero(a[r, col])), None)
        if piv is None:
            return None, Fraction(0)
        if piv != col:
            a[[col, piv]] = a[[piv, col]]
            inv[[col, piv]] = inv[[piv, col]]
            det = -det
        p = a[col, col]
        det = det * p
        pinv = 1 / p
        a[col] = a[col] * pinv
        inv[col] = inv[col] * pinv
        for r in range(n):
            if r != col and not is_zero(a[r, col]):
                f = a[r, col]
                a[r] = a[r] - f * a[col]
                inv[r] = inv[r] - f * inv[col]
    return inv, det


def det_exact(mat):
    return _gauss_jordan(np.asarray(mat, dtype=object))[1]


def inverse(mat, kind, cond_limit=1e12):
    """Inverse; raises ConstructionError when the matrix is (numerically) singular."""
    if kind == "rational":
        inv, det = _gauss_jordan(np.asarray(mat, dtype=object))
        if inv is None:
            raise ConstructionError("matrix is singular (exact determinant 0)")
        return inv
    mat = np.asarray(mat, dtype=complex)
    cond = np.linalg.cond(mat) if mat.size else 1.0
    if not np.isfinite(cond) or cond > cond_limit:
        raise ConstructionError(f"matrix is numerically singular (condition number {cond:.3e})")
    return np.linalg.inv(mat)


def condition_number(mat):
    mat = np.asarray(mat, dtype=complex)
    return float(np.linalg.cond(mat)) if mat.size else 1.0
