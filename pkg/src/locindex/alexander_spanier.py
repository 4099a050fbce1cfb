"""Alexander-Spanier cochains, their coboundary and (localized) cohomology."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import BudgetError, ValidationError
from .linalg import float_rank, sparse_rank
from .scalars import check_kind, is_zero
from .space import INFINITY, DiagonalNeighborhood, tuple_support_radius

DEFAULT_DEGREE_CAP = 3
DEFAULT_TUPLE_BUDGET = 2_000_000
FLOAT_ANTISYM_MAX_DEGREE = 12


def _perm_sign(perm):
    sign, seen = 1, [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


@dataclass(frozen=True, eq=False)
class ASCochain:
    """Sparse function on (degree+1)-tuples of points.

    ``entries`` only stores nonzero values. ``antisymmetric`` is set by
    :func:`antisymmetrize`; :meth:`check_antisymmetric` verifies it.
    """

    degree: int
    space: object
    entries: dict = field(default_factory=dict)
    antisymmetric: bool = False

    def __post_init__(self):
        if self.degree < 0:
            raise ValidationError("cochain degree must be >= 0")
        clean = {}
        for key, val in self.entries.items():
            key = tuple(int(k) for k in key)
            if len(key) != self.degree + 1:
                raise ValidationError(f"key {key} has wrong length for degree {self.degree}")
            if any(k < 0 or k >= self.space.n_points for k in key):
                raise ValidationError(f"key {key} has an out-of-range point")
            if not is_zero(val):
                clean[key] = val
        object.__setattr__(self, "entries", clean)

    @property
    def support_radius(self):
        if not self.entries:
            return 0.0
        return max(tuple_support_radius(self.space, k) for k in self.entries)

    def __call__(self, *tup):
        if len(tup) == 1 and isinstance(tup[0], tuple):
            tup = tup[0]
        return self.entries.get(tuple(tup), Fraction(0))

    def is_zero(self):
        return not self.entries

    def _combine(self, other, sign):
        if other.degree != self.degree or other.space is not self.space:
            raise ValidationError("cochains live on different spaces or degrees")
        out = dict(self.entries)
        for k, v in other.entries.items():
            out[k] = out.get(k, 0) + sign * v
        return ASCochain(self.degree, self.space, out)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def scale(self, c):
        return ASCochain(self.degree, self.space, {k: c * v for k, v in self.entries.items()}, self.antisymmetric)

    def check_antisymmetric(self):
        for key, val in self.entries.items():
            for i, j in itertools.combinations(range(len(key)), 2):
                swapped = list(key)
                swapped[i], swapped[j] = swapped[j], swapped[i]
                if not is_zero(self(tuple(swapped)) + val):
                    return False
        return True

    def restricted(self, neighborhood):
        return ASCochain(self.degree, self.space,
                         {k: v for k, v in self.entries.items() if neighborhood.contains(self.space, k)})

    def equals(self, other, atol=0.0):
        diff = self - other
        return all(abs(complex(v)) <= atol for v in diff.entries.values()) if atol else diff.is_zero()


def constant_cochain(space, degree, value=Fraction(1)):
    n = space.n_points
    if n ** (degree + 1) > DEFAULT_TUPLE_BUDGET:
        raise BudgetError("constant cochain too large", n ** (degree + 1), DEFAULT_TUPLE_BUDGET)
    return ASCochain(degree, space, {t: value for t in itertools.product(range(n), repeat=degree + 1)})


def indicator(space, tup, value=Fraction(1)):
    return ASCochain(len(tup) - 1, space, {tuple(tup): value})


def coboundary(f, neighborhood=None):
    """Alternating face sum; optionally evaluated only on tuples in ``neighborhood``."""
    n = f.space.n_points
    out = {}
    for key, val in f.entries.items():
        for i in range(len(key) + 1):
            sign = -1 if i % 2 else 1
            for p in range(n):
                t = key[:i] + (p,) + key[i:]
                out[t] = out.get(t, 0) + sign * val
    df = ASCochain(f.degree + 1, f.space, out)
    return df.restricted(neighborhood) if neighborhood is not None else df


def antisymmetrize(f):
    q = f.degree
    exact = all(isinstance(v, (int, Fraction)) or type(v).__name__ == "Cyclotomic" for v in f.entries.values())
    if not exact and q > FLOAT_ANTISYM_MAX_DEGREE:
        raise ValidationError(f"antisymmetrization of floating cochains refused for degree {q} (factorial weight)")
    weight = Fraction(1, math.factorial(q + 1)) if exact else 1.0 / math.factorial(q + 1)
    out = {}
    perms = [(p, _perm_sign(p)) for p in itertools.permutations(range(q + 1))]
    for key, val in f.entries.items():
        for perm, sign in perms:
            # (f o sigma)(x) = f(x_sigma(0), ...); collect the contribution of ``key``
            t = [None] * (q + 1)
            for pos, src in enumerate(perm):
                t[src] = key[pos]
            t = tuple(t)
            out[t] = out.get(t, 0) + sign * weight * val
    return ASCochain(q, f.space, out, antisymmetric=True)


def cochain_space_basis(space, degree, eps=INFINITY, budget=DEFAULT_TUPLE_BUDGET):
    """Lexicographically ordered (degree+1)-tuples lying in the eps-neighbourhood."""
    hood = DiagonalNeighborhood(eps)
    n = space.n_points
    if eps == INFINITY:
        if n ** (degree + 1) > budget:
            raise BudgetError(f"{n ** (degree + 1)} tuples exceed the budget", n ** (degree + 1), budget)
        return list(itertools.product(range(n), repeat=degree + 1))
    out = []
    frontier = [()]
    for _ in range(degree + 1):
        nxt = []
        for pre in frontier:
            for p in range(n):
                t = pre + (p,)
                if hood.contains(space, t):
                    nxt.append(t)
        frontier = nxt
        if len(frontier) > budget:
            raise BudgetError(f"{len(frontier)} tuples exceed the budget", len(frontier), budget)
    out = frontier
    return out


def coboundary_columns(space, degree, eps, src_basis=None, dst_basis=None):
    """Sparse matrix of d: C^degree -> C^(degree+1) restricted to the neighbourhood."""
    src = src_basis if src_basis is not None else cochain_space_basis(space, degree, eps)
    dst = dst_basis if dst_basis is not None else cochain_space_basis(space, degree + 1, eps)
    row = {t: i for i, t in enumerate(dst)}
    n = space.n_points
    cols = []
    for t in src:
        col = {}
        for i in range(len(t) + 1):
            sign = -1 if i % 2 else 1
            for p in range(n):
                r = row.get(t[:i] + (p,) + t[i:])
                if r is not None:
                    col[r] = col.get(r, 0) + sign
        cols.append({r: Fraction(v) for r, v in col.items() if v})
    return cols, len(dst)


def _dense(cols, nrows):
    mat = np.zeros((nrows, len(cols)))
    for j, col in enumerate(cols):
        for i, v in col.items():
            mat[i, j] = float(v)
    return mat


def cohomology_ranks(space, max_degree, eps=INFINITY, scalar_kind="rational",
                     degree_cap=DEFAULT_DEGREE_CAP, budget=DEFAULT_TUPLE_BUDGET):
    """Betti numbers of the eps-localized Alexander-Spanier complex, degrees 0..max_degree."""
    check_kind(scalar_kind)
    if max_degree < 0:
        raise ValidationError("max_degree must be >= 0")
    if max_degree + 1 > degree_cap:
        raise ValidationError(
            f"degree {max_degree + 1} cochains exceed the degree cap {degree_cap}; raise the cap explicitly")
    bases = [cochain_space_basis(space, q, eps, budget) for q in range(max_degree + 2)]
    ranks_d = []
    for q in range(max_degree + 1):
        cols, nrows = coboundary_columns(space, q, eps, bases[q], bases[q + 1])
        ranks_d.append(sparse_rank(cols) if scalar_kind == "rational" else float_rank(_dense(cols, nrows)))
    betti = []
    for q in range(max_degree + 1):
        below = ranks_d[q - 1] if q > 0 else 0
        betti.append(len(bases[q]) - ranks_d[q] - below)
    return betti


def epsilon_grid(space):
    """Descending scan grid: a collar above the largest distance, then each positive distance."""
    pos = sorted((d for d in space.distinct_distances() if d > 0), reverse=True)
    if not pos:
        return [1.0, 0.0]
    gap = pos[0] - pos[1] if len(pos) > 1 else pos[0]
    return [pos[0] + gap] + pos


@dataclass
class LocalizedCohomology:
    ranks: list | None
    stabilization_eps: float | None
    stabilized: bool
    scan: list
    note: str = ("projective limit over neighbourhoods realized as a descending scan of metric "
                 "thresholds; stabilization = equal ranks at two consecutive grid values")

    def report(self, space):
        return {
            "space": space.to_json(),
            "epsilon": self.stabilization_eps,
            "degrees": list(range(len(self.ranks))) if self.ranks else [],
            "ranks": self.ranks,
            "stabilized": self.stabilized,
            "scan": [{"epsilon": e, "ranks": r} for e, r in self.scan],
            "note": self.note,
        }


def localized_cohomology(space, max_degree, scalar_kind="rational", grid=None,
                         degree_cap=DEFAULT_DEGREE_CAP):
    grid = list(grid) if grid is not None else epsilon_grid(space)
    scan = []
    for eps in grid:
        scan.append((eps, cohomology_ranks(space, max_degree, eps, scalar_kind, degree_cap)))
        if len(scan) >= 2 and scan[-1][1] == scan[-2][1]:
            return LocalizedCohomology(scan[-1][1], eps, True, scan)
    return LocalizedCohomology(None, None, False, scan)


def cohomology_report(space, max_degree, eps, scalar_kind="rational", degree_cap=DEFAULT_DEGREE_CAP):
    ranks = cohomology_ranks(space, max_degree, eps, scalar_kind, degree_cap)
    return {
        "space": space.to_json(),
        "epsilon": "inf" if eps == INFINITY else eps,
        "degrees": list(range(max_degree + 1)),
        "ranks": ranks,
        "stabilized": False,
    }
