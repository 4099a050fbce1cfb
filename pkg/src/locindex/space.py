"""Finite models of the base space and of neighbourhoods of its diagonals."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

from .errors import InvalidSpaceError, ValidationError

INFINITY = math.inf  # distance between components; also the "no localization" radius


@dataclass(frozen=True, eq=False)
class FinitePointSpace:
    """Finite metric space, optionally carrying a simplicial structure.

    ``faces`` is the closure of ``simplices`` under taking subsets (sorted
    vertex tuples); it is empty when no simplicial structure is attached.
    """

    n_points: int
    metric: np.ndarray
    simplices: tuple | None = None
    label: str = ""
    faces: frozenset = field(default=frozenset(), repr=False)

    def __post_init__(self):
        m = np.asarray(self.metric, dtype=float)
        if m.shape != (self.n_points, self.n_points):
            raise InvalidSpaceError("metric shape does not match n_points")
        if np.any(np.diag(m) != 0):
            raise InvalidSpaceError("metric must vanish on the diagonal")
        if not np.array_equal(m, m.T) or np.any(m < 0):
            raise InvalidSpaceError("metric must be symmetric and nonnegative")
        m.setflags(write=False)
        object.__setattr__(self, "metric", m)
        if self.simplices is not None:
            faces = set()
            for s in self.simplices:
                if any(v < 0 or v >= self.n_points for v in s):
                    raise InvalidSpaceError(f"simplex {s} has an out-of-range vertex")
                s = tuple(sorted(set(s)))
                for k in range(1, len(s) + 1):
                    faces.update(itertools.combinations(s, k))
            object.__setattr__(self, "faces", frozenset(faces))

    @property
    def has_simplices(self):
        return self.simplices is not None

    def distance(self, i, j):
        return self.metric[i, j]

    def is_face(self, vertices):
        return tuple(sorted(set(vertices))) in self.faces

    def distinct_distances(self):
        """Sorted distinct finite pairwise distances (0 included)."""
        vals = np.unique(self.metric[np.isfinite(self.metric)])
        return [float(v) for v in vals]

    def to_json(self):
        if self.label.startswith("circle("):
            return {"kind": "circle", "n": self.n_points}
        return {"kind": "simplicial", "maximal_simplices": [list(s) for s in self.simplices or ()]}

    def __repr__(self):
        return f"FinitePointSpace({self.label or self.n_points})"


@dataclass(frozen=True)
class DiagonalNeighborhood:
    """Metric epsilon-neighbourhood of the diagonal in a power of a space.

    On a space with simplicial structure a finite radius additionally requires
    the tuple's vertex set to be a face; ``radius = INFINITY`` means no
    localization at all.
    """

    radius: float

    def __post_init__(self):
        if not (self.radius >= 0):
            raise ValidationError("neighbourhood radius must be nonnegative")

    def contains(self, space, tup):
        if self.radius == INFINITY:
            return True
        if tuple_support_radius(space, tup) > self.radius:
            return False
        return not space.has_simplices or space.is_face(tup)


def circle_space(n):
    """``n`` uniform points on the unit circle with arc-length metric."""
    if n < 3:
        raise InvalidSpaceError("circle_space needs n >= 3")
    k = np.arange(n)
    steps = np.abs(k[:, None] - k[None, :])
    steps = np.minimum(steps, n - steps)
    metric = steps * (2 * math.pi / n)
    edges = tuple((i, (i + 1) % n) for i in range(n))
    return FinitePointSpace(n, metric, simplices=edges, label=f"circle({n})")


def simplicial_space(maximal_simplices, label=""):
    """Space on the vertices of a simplicial complex, metric = 1-skeleton graph distance."""
    if not maximal_simplices:
        raise InvalidSpaceError("empty simplicial complex")
    simplices = tuple(tuple(int(v) for v in s) for s in maximal_simplices)
    if any(len(s) == 0 for s in simplices):
        raise InvalidSpaceError("empty simplex")
    vertices = sorted({v for s in simplices for v in s})
    if vertices != list(range(len(vertices))):
        raise InvalidSpaceError("vertex indices must be contiguous from 0")
    n = len(vertices)
    rows, cols = [], []
    for s in simplices:
        for a, b in itertools.combinations(sorted(set(s)), 2):
            rows += [a, b]
            cols += [b, a]
    graph = csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(n, n))
    metric = shortest_path(graph, unweighted=True, directed=False)
    return FinitePointSpace(n, metric, simplices=simplices, label=label or f"simplicial{list(map(list, simplices))}")


def metric_space(metric, label="metric"):
    """Bare metric space without simplicial structure."""
    metric = np.asarray(metric, dtype=float)
    return FinitePointSpace(metric.shape[0], metric, None, label)


def triangle_graph():
    return simplicial_space([[0, 1], [1, 2], [2, 0]], label="triangle")


def tetrahedron_boundary():
    return simplicial_space([[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]], label="tetrahedron-boundary")


def tuple_support_radius(space, tup):
    """Largest pairwise distance among the points of ``tup``."""
    tup = tuple(tup)
    if not tup:
        raise ValidationError("empty tuple has no support radius")
    if any(i < 0 or i >= space.n_points for i in tup):
        raise ValidationError(f"tuple {tup} has an out-of-range point")
    idx = np.array(tup)
    return float(space.metric[np.ix_(idx, idx)].max())


def relabel(space, perm):
    """Same space with point ``i`` renamed ``perm[i]``."""
    perm = list(perm)
    n = space.n_points
    inv = np.argsort(perm)
    metric = space.metric[np.ix_(inv, inv)]
    simplices = None
    if space.simplices is not None:
        simplices = tuple(tuple(perm[v] for v in s) for s in space.simplices)
    return FinitePointSpace(n, metric, simplices, space.label)


def space_from_json(desc):
    if not isinstance(desc, dict) or "kind" not in desc:
        raise ValidationError("space description must be an object with a 'kind'")
    kind = desc["kind"]
    if kind == "circle":
        _strict(desc, {"kind", "n"})
        return circle_space(int(desc["n"]))
    if kind == "simplicial":
        _strict(desc, {"kind", "maximal_simplices", "label"})
        return simplicial_space(desc["maximal_simplices"], desc.get("label", ""))
    raise ValidationError(f"unknown space kind {kind!r}")


def _strict(desc, allowed):
    extra = set(desc) - set(allowed)
    if extra:
        raise ValidationError(f"unknown field(s) {sorted(extra)}")
