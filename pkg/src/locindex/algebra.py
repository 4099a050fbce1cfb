"""Finite-dimensional semisimple algebras realized as direct sums of matrix algebras.

Every algebra used in the package (C, C+C, M_k, M_k(A) for such A, and the
algebra of kernel operators on a finite space) has a basis of matrix units,
so products of basis elements are either zero or another basis element.
Elements are flat coefficient vectors in that basis.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import ValidationError
from .scalars import check_kind, is_zero

ASSOCIATIVITY_SAMPLE = 2000


@dataclass(frozen=True, eq=False)
class FiniteAlgebra:
    """Direct sum of full matrix algebras ``M_{n_0} (+) M_{n_1} (+) ...``.

    For ``kind == "kernel"`` the algebra is ``M_{k N}`` acting on ``k`` copies
    of the points of ``space``; row index ``a*N + x`` sits at point ``x``.
    """

    kind: str
    blocks: tuple
    space: object = None
    block_dim: int = 1
    label: str = ""
    _units: list = field(default=None, repr=False)
    _offsets: tuple = field(default=None, repr=False)

    def __post_init__(self):
        if not self.blocks or any(b < 1 for b in self.blocks):
            raise ValidationError("algebra blocks must be positive sizes")
        units, offsets, off = [], [], 0
        for bi, n in enumerate(self.blocks):
            offsets.append(off)
            for i in range(n):
                for j in range(n):
                    units.append((bi, i, j))
            off += n * n
        object.__setattr__(self, "_units", units)
        object.__setattr__(self, "_offsets", tuple(offsets))
        self._check_associativity()

    # -- basis
    @property
    def dim(self):
        return len(self._units)

    def unit_index(self, block, i, j):
        return self._offsets[block] + i * self.blocks[block] + j

    def unit(self, idx):
        return self._units[idx]

    def unit_product(self, a, b):
        """Index of e_a * e_b, or None when the product vanishes."""
        ba, ia, ja = self._units[a]
        bb, ib, jb = self._units[b]
        if ba != bb or ja != ib:
            return None
        return self.unit_index(ba, ia, jb)

    def _check_associativity(self):
        d = self.dim
        if d ** 3 <= ASSOCIATIVITY_SAMPLE:
            triples = itertools.product(range(d), repeat=3)
        else:
            rng = random.Random(0)
            triples = ((rng.randrange(d), rng.randrange(d), rng.randrange(d)) for _ in range(ASSOCIATIVITY_SAMPLE))
        for a, b, c in triples:
            ab = self.unit_product(a, b)
            bc = self.unit_product(b, c)
            left = None if ab is None else self.unit_product(ab, c)
            right = None if bc is None else self.unit_product(a, bc)
            if left != right:
                raise ValidationError(f"basis triple {(a, b, c)} violates associativity")

    # -- elements
    def zero(self, kind="rational"):
        check_kind(kind)
        if kind == "rational":
            out = np.empty(self.dim, dtype=object)
            out.fill(Fraction(0))
            return out
        return np.zeros(self.dim, dtype=complex)

    def one(self, kind="rational"):
        out = self.zero(kind)
        for b, n in enumerate(self.blocks):
            for i in range(n):
                out[self.unit_index(b, i, i)] = 1 if kind == "float" else Fraction(1)
        return out

    def basis_element(self, idx, kind="rational"):
        out = self.zero(kind)
        out[idx] = 1 if kind == "float" else Fraction(1)
        return out

    def block_matrices(self, x):
        """Split an element into its block matrices."""
        x = np.asarray(x)
        mats = []
        for b, n in enumerate(self.blocks):
            off = self._offsets[b]
            mats.append(x[off:off + n * n].reshape(n, n))
        return mats

    def from_blocks(self, mats):
        if len(mats) != len(self.blocks):
            raise ValidationError("wrong number of blocks")
        parts = []
        for m, n in zip(mats, self.blocks):
            m = np.asarray(m)
            if m.shape != (n, n):
                raise ValidationError(f"block of shape {m.shape}, expected {(n, n)}")
            parts.append(m.reshape(-1))
        return np.concatenate(parts)

    def from_matrix(self, mat):
        """Element of a single-block algebra from its matrix."""
        if len(self.blocks) != 1:
            raise ValidationError("from_matrix needs a single-block algebra")
        return self.from_blocks([np.asarray(mat)])

    def mul(self, x, y):
        return self.from_blocks([a @ b for a, b in zip(self.block_matrices(x), self.block_matrices(y))])

    def is_commutative(self):
        return all(n == 1 for n in self.blocks)

    # -- support data
    def unit_point_pair(self, idx):
        if self.kind != "kernel":
            raise ValidationError("support data needs an algebra of kernel operators on a space")
        _, i, j = self._units[idx]
        N = self.space.n_points
        return i % N, j % N

    def unit_propagation(self, idx):
        x, y = self.unit_point_pair(idx)
        return float(self.space.metric[x, y])

    def propagation(self, x):
        best = 0.0
        for idx, v in enumerate(x):
            if not is_zero(v) and (not isinstance(v, complex) or abs(v) > 1e-12):
                best = max(best, self.unit_propagation(idx))
        return best

    def describe(self):
        out = {"kind": self.kind, "blocks": list(self.blocks)}
        if self.kind == "kernel":
            out["space"] = self.space.to_json()
            out["block_dim"] = self.block_dim
        return out


def matrix_algebra(k):
    return FiniteAlgebra("matrix", (int(k),), label=f"M_{k}")


def scalar_algebra(n=1):
    """C^n with componentwise product."""
    return FiniteAlgebra("scalars", (1,) * int(n), label="C" if n == 1 else f"C^{n}")


def direct_sum(*algebras):
    return FiniteAlgebra("direct_sum", tuple(b for a in algebras for b in a.blocks),
                         label=" (+) ".join(a.label for a in algebras))


def matrices_over(alg, k):
    """M_k(A); for A = (+) M_{n_b} this is (+) M_{k n_b}."""
    return FiniteAlgebra("matrix_over", tuple(k * b for b in alg.blocks), label=f"M_{k}({alg.label})")


def kernel_algebra(space, block_dim=1):
    """All kernel operators on ``block_dim`` copies of the points of ``space``."""
    return FiniteAlgebra("kernel", (block_dim * space.n_points,), space=space, block_dim=block_dim,
                         label=f"K({space.label})")


def algebra_from_json(desc):
    from .space import space_from_json

    if not isinstance(desc, dict) or "kind" not in desc:
        raise ValidationError("algebra description must be an object with a 'kind'")
    kind = desc["kind"]
    allowed = {"matrix": {"kind", "k"}, "scalars": {"kind", "n"}, "matrix_over": {"kind", "k", "base"},
               "kernel": {"kind", "space", "block_dim"}}
    if kind not in allowed:
        raise ValidationError(f"unknown algebra kind {kind!r}")
    extra = set(desc) - allowed[kind]
    if extra:
        raise ValidationError(f"unknown field(s) {sorted(extra)}")
    if kind == "matrix":
        return matrix_algebra(int(desc["k"]))
    if kind == "scalars":
        return scalar_algebra(int(desc.get("n", 1)))
    if kind == "matrix_over":
        return matrices_over(algebra_from_json(desc["base"]), int(desc["k"]))
    return kernel_algebra(space_from_json(desc["space"]), int(desc.get("block_dim", 1)))
