"""Tensor chains, the bar and Hochschild boundaries, cyclic symmetry,
S-localization over ``S = C + Ce``, Chern character cycles and rank-based
(local) Hochschild / cyclic homology.

Sign conventions: the cyclic operator is
``lam(f0 x ... x fr) = (-1)^r fr x f0 x ... x f(r-1)``; a chain is cyclic
symmetric when ``lam(c) = c``, which is the same as
``f1 x ... x fr x f0 = (-1)^r f0 x ... x fr`` termwise.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .algebra import FiniteAlgebra, kernel_algebra
from .errors import BudgetError, ContextError, ValidationError
from .linalg import float_rank, sparse_rank
from .scalars import check_kind, is_zero

DEFAULT_BUDGET = 2_000_000
VARIANTS = ("hochschild", "cyclic_bprime", "cyclic_quotient")


def _as_vec(x, kind):
    return np.array(x, dtype=object if kind == "rational" else complex)


def _vec_is_zero(v, atol=0.0):
    if atol:
        return all(abs(complex(c)) <= atol for c in v)
    return all(is_zero(c) for c in v)


class TensorChain:
    """Finite linear combination of elementary tensors ``f0 x ... x fr``.

    Terms are kept merged by factor tuple with zero coefficients dropped.
    Different factor tuples can represent the same tensor (``2a x b`` versus
    ``a x 2b``); :meth:`expand` gives the canonical coordinates in the basis of
    tensors of basis elements, and equality goes through it.
    """

    def __init__(self, algebra, degree, kind="rational", terms=None):
        self.algebra = algebra
        self.degree = degree
        self.kind = check_kind(kind)
        self.terms = {}
        for key, c in (terms or {}).items():
            self._accumulate(key, c)

    @classmethod
    def from_factors(cls, algebra, factor_lists, kind="rational"):
        """``factor_lists``: iterable of ``(coefficient, [f0, ..., fr])``."""
        out = None
        for coeff, factors in factor_lists:
            if out is None:
                out = cls(algebra, len(factors) - 1, kind)
            out.add_term(coeff, factors)
        if out is None:
            raise ValidationError("empty term list; use TensorChain(algebra, degree) for zero")
        return out

    @classmethod
    def from_basis(cls, algebra, coords, kind="rational"):
        items = list(coords.items())
        degree = len(items[0][0]) - 1 if items else 0
        out = cls(algebra, degree, kind)
        for key, c in items:
            out.add_term(c, [algebra.basis_element(i, kind) for i in key])
        return out

    def _accumulate(self, key, c):
        if is_zero(c) or any(_vec_is_zero(f) for f in key):
            return
        new = self.terms.get(key, 0) + c
        if is_zero(new) or (self.kind == "float" and abs(new) == 0):
            self.terms.pop(key, None)
        else:
            self.terms[key] = new

    def add_term(self, coeff, factors):
        if len(factors) != self.degree + 1:
            raise ValidationError(f"expected {self.degree + 1} factors, got {len(factors)}")
        key = tuple(tuple(_as_vec(f, self.kind)) for f in factors)
        if any(len(f) != self.algebra.dim for f in key):
            raise ValidationError("factor is not an element of the chain's algebra")
        self._accumulate(key, coeff)
        return self

    def items(self):
        for key, c in self.terms.items():
            yield c, [_as_vec(f, self.kind) for f in key]

    def copy(self):
        out = TensorChain(self.algebra, self.degree, self.kind)
        out.terms = dict(self.terms)
        return out

    def _check_compat(self, other):
        if other.algebra is not self.algebra or other.degree != self.degree:
            raise ValidationError("chains live in different algebras or degrees")

    def __add__(self, other):
        self._check_compat(other)
        out = self.copy()
        for key, c in other.terms.items():
            out._accumulate(key, c)
        return out

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        out = TensorChain(self.algebra, self.degree, self.kind)
        for key, v in self.terms.items():
            out._accumulate(key, c * v)
        return out

    def __neg__(self):
        return self.scale(-1)

    def expand(self, budget=DEFAULT_BUDGET):
        """Canonical coordinates ``{(i0, ..., ir): coeff}`` in the basis of basis tensors."""
        out = {}
        for key, c in self.terms.items():
            supports = [[(i, v) for i, v in enumerate(f) if not is_zero(v)] for f in key]
            size = math.prod(len(s) for s in supports)
            if size > budget:
                raise BudgetError(f"expanding a term needs {size} basis tensors", size, budget)
            for combo in itertools.product(*supports):
                val = c
                for _, v in combo:
                    val = val * v
                idx = tuple(i for i, _ in combo)
                out[idx] = out.get(idx, 0) + val
        return {k: v for k, v in out.items() if not is_zero(v)}

    def is_zero(self, atol=1e-9):
        coords = self.expand()
        if self.kind == "float":
            return all(abs(v) <= atol for v in coords.values())
        return not coords

    def equals(self, other, atol=1e-9):
        self._check_compat(other)
        return (self - other).is_zero(atol)

    def __repr__(self):
        return f"TensorChain(degree={self.degree}, terms={len(self.terms)}, algebra={self.algebra.label})"


def zero_chain(algebra, degree, kind="rational"):
    return TensorChain(algebra, degree, kind)


# --------------------------------------------------------------------------
# boundaries and the cyclic operator

def bar_bprime(c):
    """b'(f0 x ... x fr) = sum_{s<r} (-1)^s f0 x ... x f_s f_(s+1) x ... x fr."""
    alg, r = c.algebra, c.degree
    out = TensorChain(alg, r - 1, c.kind)
    if r < 1:
        return out
    for coeff, fs in c.items():
        for s in range(r):
            merged = fs[:s] + [alg.mul(fs[s], fs[s + 1])] + fs[s + 2:]
            out.add_term(coeff if s % 2 == 0 else -coeff, merged)
    return out


def hochschild_b(c):
    """b = b' + (-1)^r fr f0 x f1 x ... x f(r-1)."""
    out = bar_bprime(c)
    r = c.degree
    if r < 1:
        return out
    for coeff, fs in c.items():
        wrapped = [c.algebra.mul(fs[r], fs[0])] + fs[1:r]
        out.add_term(coeff if r % 2 == 0 else -coeff, wrapped)
    return out


def cyclic_operator(c):
    r = c.degree
    out = TensorChain(c.algebra, r, c.kind)
    sign = -1 if r % 2 else 1
    for coeff, fs in c.items():
        out.add_term(sign * coeff, [fs[r]] + fs[:r])
    return out


def cyclic_symmetrize(c):
    """Average over the signed cyclic group; an idempotent projection onto symmetric chains."""
    r = c.degree
    if r < 0:
        return c.copy()
    acc = c.copy()
    cur = c
    for _ in range(r):
        cur = cyclic_operator(cur)
        acc = acc + cur
    weight = Fraction(1, r + 1) if c.kind == "rational" else 1.0 / (r + 1)
    return acc.scale(weight)


def has_cyclic_symmetry(c, atol=1e-9):
    """Termwise check of ``f1 x ... x fr x f0 = (-1)^r f0 x ... x fr``."""
    r = c.degree
    rotated = TensorChain(c.algebra, r, c.kind)
    for coeff, fs in c.items():
        rotated.add_term(coeff, fs[1:] + fs[:1])
    sign = -1 if r % 2 else 1
    return rotated.equals(c.scale(sign), atol)


# --------------------------------------------------------------------------
# matrices over the algebra and Chern character cycles

@dataclass
class AlgebraMatrix:
    """n x n matrix with entries in a FiniteAlgebra (``entries[i][j]`` are element vectors)."""

    algebra: FiniteAlgebra
    entries: list
    kind: str = "rational"

    @property
    def n(self):
        return len(self.entries)

    @classmethod
    def scalar(cls, algebra, mat, kind="rational"):
        """Matrix of multiples of the unit, e.g. a complex matrix over C."""
        one = algebra.one(kind)
        mat = np.asarray(mat, dtype=object)
        return cls(algebra, [[one * mat[i, j] for j in range(mat.shape[1])] for i in range(mat.shape[0])], kind)

    @classmethod
    def single(cls, algebra, element, kind="rational"):
        return cls(algebra, [[_as_vec(element, kind)]], kind)

    def __matmul__(self, other):
        alg, n = self.algebra, self.n
        out = []
        for i in range(n):
            row = []
            for k in range(n):
                acc = alg.zero(self.kind)
                for j in range(n):
                    acc = acc + alg.mul(self.entries[i][j], other.entries[j][k])
                row.append(acc)
            out.append(row)
        return AlgebraMatrix(alg, out, self.kind)

    def __sub__(self, other):
        return AlgebraMatrix(self.algebra, [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.entries, other.entries)], self.kind)

    def identity(self):
        alg = self.algebra
        one, zero = alg.one(self.kind), alg.zero(self.kind)
        return AlgebraMatrix(alg, [[one if i == j else zero for j in range(self.n)] for i in range(self.n)], self.kind)

    def is_close(self, other, atol=1e-9):
        for r1, r2 in zip(self.entries, other.entries):
            for a, b in zip(r1, r2):
                if not _vec_is_zero(a - b, atol if self.kind == "float" else 0.0):
                    return False
        return True

    def _big_blocks(self):
        """M_n(A) = (+) M_{n n_b}: one big matrix per algebra block."""
        alg, n = self.algebra, self.n
        bigs = []
        for b, nb in enumerate(alg.blocks):
            big = np.empty((n * nb, n * nb), dtype=object if self.kind == "rational" else complex)
            for i in range(n):
                for j in range(n):
                    big[i * nb:(i + 1) * nb, j * nb:(j + 1) * nb] = alg.block_matrices(self.entries[i][j])[b]
            bigs.append(big)
        return bigs

    def inverse(self):
        from . import linalg

        alg, n = self.algebra, self.n
        invs = [linalg.inverse(big, self.kind) for big in self._big_blocks()]
        out = []
        for i in range(n):
            row = []
            for j in range(n):
                mats = [inv[i * nb:(i + 1) * nb, j * nb:(j + 1) * nb] for inv, nb in zip(invs, alg.blocks)]
                row.append(alg.from_blocks(mats))
            out.append(row)
        return AlgebraMatrix(alg, out, self.kind)


def generalized_trace(mats, coeff=1):
    """tr(m0 x ... x mr) = sum over cyclic index contractions (m0)_{i0 i1} x ... x (mr)_{ir i0}."""
    alg, kind, n = mats[0].algebra, mats[0].kind, mats[0].n
    r = len(mats) - 1
    out = TensorChain(alg, r, kind)
    for idx in itertools.product(range(n), repeat=r + 1):
        factors = [mats[k].entries[idx[k]][idx[(k + 1) % (r + 1)]] for k in range(r + 1)]
        out.add_term(coeff, factors)
    return out


def chern_even(p, q, atol=1e-9):
    """1/q! tr(p x ... x p), 2q+1 factors."""
    if q < 0:
        raise ValidationError("q must be >= 0")
    if not (p @ p).is_close(p, atol):
        raise ValidationError("p is not idempotent")
    coeff = Fraction(1, math.factorial(q)) if p.kind == "rational" else 1.0 / math.factorial(q)
    return generalized_trace([p] * (2 * q + 1), coeff)


def chern_odd(u, q, atol=1e-9):
    """(-1)^(q-1) (q-1)!/(2q-1)! tr((u^-1 - 1) x (u - 1) x ...), 2q factors."""
    if q < 1:
        raise ValidationError("odd Chern components need q >= 1")
    u_inv = u.inverse()
    one = u.identity()
    x, y = u_inv - one, u - one
    c = (-1) ** (q - 1) * Fraction(math.factorial(q - 1), math.factorial(2 * q - 1))
    if u.kind == "float":
        c = float(c)
    return generalized_trace([x, y] * q, c)


# --------------------------------------------------------------------------
# S-localization

@dataclass
class SeparableRingContext:
    """The separable subring ``S = C + Ce`` spanned by an idempotent ``e``."""

    algebra: FiniteAlgebra
    e: np.ndarray
    kind: str = "rational"
    complement: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        self.e = _as_vec(self.e, self.kind)
        atol = 1e-9 if self.kind == "float" else 0.0
        if not _vec_is_zero(self.algebra.mul(self.e, self.e) - self.e, atol):
            raise ContextError("e is not idempotent")
        self.complement = self.algebra.one(self.kind) - self.e

    @property
    def idempotents(self):
        """Orthogonal idempotents summing to 1 that span S (zero ones omitted)."""
        return [f for f in (self.e, self.complement) if not _vec_is_zero(f)]

    def diagonal_types(self):
        """For ``e`` a sum of diagonal matrix units: type (0 = in e, 1 = not) per row index, per block."""
        alg = self.algebra
        types = []
        for b, n in enumerate(alg.blocks):
            t = []
            for i in range(n):
                for j in range(n):
                    v = self.e[alg.unit_index(b, i, j)]
                    if i != j and not is_zero(v):
                        raise ContextError("basis-level S-localization needs e diagonal in matrix units")
                    if i == j and not (is_zero(v) or v == 1):
                        raise ContextError("basis-level S-localization needs e a sum of diagonal units")
                t.append(0 if (not is_zero(self.e[alg.unit_index(b, i, i)])) else 1)
            types.append(t)
        return types


def s_relation(ctx, a, b, position, degree, filler):
    """Relation instance ``.. x a x e b x .. - .. x a e x b x ..`` at tensor sign ``position``.

    ``filler`` supplies the other factors (a list of ``degree + 1`` elements;
    the two at ``position``/``position+1`` are replaced). The wraparound sign
    (position == degree) relates ``(e b) x .. x a`` and ``b x .. x (a e)``.
    """
    alg = ctx.algebra
    r = degree
    left = list(filler)
    right = list(filler)
    if position < r:
        left[position], left[position + 1] = a, alg.mul(ctx.e, b)
        right[position], right[position + 1] = alg.mul(a, ctx.e), b
    else:
        left[r], left[0] = a, alg.mul(ctx.e, b)
        right[r], right[0] = alg.mul(a, ctx.e), b
    one = Fraction(1) if ctx.kind == "rational" else 1.0
    return TensorChain.from_factors(alg, [(one, left), (-one, right)], ctx.kind)


def s_normal_form(c, ctx, cyclic=True, order=None):
    """Canonical representative modulo ``a x eb = ae x b`` at every tensor sign.

    Each sign is resolved by inserting ``1 = e + (1-e)``: ``a x b`` becomes
    ``sum_g a g x g b``. The per-sign projections commute, so any ``order``
    of the positions gives the same result.
    """
    if c.algebra is not ctx.algebra:
        raise ContextError("context and chain live in different algebras")
    alg, r = c.algebra, c.degree
    positions = list(range(r + (1 if cyclic else 0)))
    if order is not None:
        if sorted(order) != positions:
            raise ValidationError(f"order must be a permutation of {positions}")
        positions = list(order)
    idems = ctx.idempotents
    cur = c
    for pos in positions:
        nxt = TensorChain(alg, r, c.kind)
        for coeff, fs in cur.items():
            for g in idems:
                new = list(fs)
                if pos < r:
                    new[pos] = alg.mul(fs[pos], g)
                    new[pos + 1] = alg.mul(g, fs[pos + 1])
                elif r == 0:
                    new[0] = alg.mul(g, alg.mul(fs[0], g))
                else:
                    new[r] = alg.mul(fs[r], g)
                    new[0] = alg.mul(g, fs[0])
                nxt.add_term(coeff, new)
        cur = nxt
    return cur


def residue_element(R, algebra=None):
    """Turn a KernelOperator into (algebra, element): kernel algebra in the position basis, M_n otherwise."""
    from .algebra import matrix_algebra

    if algebra is None:
        if R.basis_tag == "position" and R.space is not None:
            algebra = kernel_algebra(R.space, block_dim=len(R.row_blocks))
        else:
            algebra = matrix_algebra(R.rows)
    return algebra, algebra.from_matrix(R.entries)


def residue_identity_holds(R_elem, ctx, atol=1e-9):
    alg = ctx.algebra
    lhs = alg.mul(R_elem, R_elem)
    rhs = R_elem - (alg.mul(ctx.e, R_elem) + alg.mul(R_elem, ctx.e))
    return _vec_is_zero(lhs - rhs, atol if ctx.kind == "float" else 0.0)


def chern_residue(R_elem, ctx, q, atol=1e-9):
    """S-normal form of 1/q! tr(R x_S ... x_S R), 2q+1 factors."""
    if not residue_identity_holds(R_elem, ctx, atol):
        raise ValidationError("R does not satisfy R^2 = R - (eR + Re) for this e")
    coeff = Fraction(1, math.factorial(q)) if ctx.kind == "rational" else 1.0 / math.factorial(q)
    raw = TensorChain.from_factors(ctx.algebra, [(coeff, [R_elem] * (2 * q + 1))], ctx.kind)
    return s_normal_form(raw, ctx)


def chern_residue_boundaries(R_elem, ctx, q, atol=1e-9):
    """Boundary behaviour of the residue cycle in the S-localized complexes.

    ``bprime_zero``: S-normal form of b'(Ch) vanishes (cyclic-symmetric
    chains with b'). ``b_cyclic_zero``: S-normal form of b(Ch) vanishes after
    cyclic symmetrization, i.e. in the quotient by (1 - lam).
    ``b_literal_zero``: the Hochschild image itself normalizes to 0.
    """
    ch = chern_residue(R_elem, ctx, q, atol)
    bb = s_normal_form(hochschild_b(ch), ctx)
    bp = s_normal_form(bar_bprime(ch), ctx)
    return {
        "chain_terms": len(ch.terms),
        "cyclic_symmetric": has_cyclic_symmetry(ch, atol),
        "bprime_zero": bp.is_zero(atol),
        "b_cyclic_zero": cyclic_symmetrize(bb).is_zero(atol),
        "b_literal_zero": bb.is_zero(atol),
    }


def chain_support_radius(c, mode="sum"):
    """Max over terms of the summed (or maximal) factor propagations."""
    if c.algebra.kind != "kernel":
        raise ValidationError("support radius needs an algebra of kernel operators on a space")
    if mode not in ("sum", "max"):
        raise ValidationError("mode must be 'sum' or 'max'")
    best = 0.0
    for _, fs in c.items():
        props = [c.algebra.propagation(f) for f in fs]
        best = max(best, sum(props) if mode == "sum" else max(props))
    return best


# --------------------------------------------------------------------------
# homology of basis-tensor complexes

@dataclass
class _BasisComplex:
    algebra: FiniteAlgebra
    eps: float | None
    types: list | None  # S-localization types per block row index
    support_mode: str = "sum"

    def unit_ok_prefix(self, prefix):
        """Whether a tuple prefix can still extend to an admissible tensor."""
        if self.eps is not None:
            props = [self.algebra.unit_propagation(u) for u in prefix]
            total = sum(props) if self.support_mode == "sum" else max(props)
            if total > self.eps:
                return False
            space = self.algebra.space
            if space.has_simplices and self.eps != math.inf:
                pts = {p for u in prefix for p in self.algebra.unit_point_pair(u)}
                if not space.is_face(pts):
                    return False
        if self.types is not None and len(prefix) >= 2:
            if self._right(prefix[-2]) != self._left(prefix[-1]):
                return False
        return True

    def _left(self, u):
        b, i, _ = self.algebra.unit(u)
        return (b, self.types[b][i])

    def _right(self, u):
        b, _, j = self.algebra.unit(u)
        return (b, self.types[b][j])

    def admissible(self, t):
        if self.types is not None and self._right(t[-1]) != self._left(t[0]):
            return False
        return True

    def basis(self, r, budget):
        d = self.algebra.dim
        if self.eps is None and self.types is None:
            size = d ** (r + 1)
            if size > budget:
                raise BudgetError(f"degree {r} chain space has dimension {size} > budget {budget}", size, budget)
            return list(itertools.product(range(d), repeat=r + 1))
        frontier = [()]
        for _ in range(r + 1):
            frontier = [p + (u,) for p in frontier for u in range(d) if self.unit_ok_prefix(p + (u,))]
            if len(frontier) > budget:
                raise BudgetError(f"degree {r} chain space exceeds budget {budget}", len(frontier), budget)
        return [t for t in frontier if self.admissible(t)]

    def boundary_terms(self, t, with_wrap):
        alg = self.algebra
        r = len(t) - 1
        out = []
        for s in range(r):
            p = alg.unit_product(t[s], t[s + 1])
            if p is not None:
                out.append((t[:s] + (p,) + t[s + 2:], -1 if s % 2 else 1))
        if with_wrap and r >= 1:
            p = alg.unit_product(t[r], t[0])
            if p is not None:
                out.append(((p,) + t[1:r], -1 if r % 2 else 1))
        return out


def _rotation_class(t):
    """(representative, sign, killed) of a basis tensor in the quotient by (1 - lam)."""
    r = len(t) - 1
    step_sign = -1 if r % 2 else 1
    best, best_sign = t, 1
    killed = False
    cur, sign = t, 1
    for k in range(1, r + 1):
        cur = (cur[-1],) + cur[:-1]
        sign *= step_sign
        if cur == t and sign == -1:
            killed = True
        if cur < best:
            best, best_sign = cur, sign
    # lam^k t = sign_k rot^k t, so t = sign_k * lam^k(...) class: [t] = sign_k^{-1} [rot^k t]
    return best, best_sign, killed


def _boundary_columns(cx, variant, src, dst):
    """Columns of the boundary from degree-r basis ``src`` to degree-(r-1) basis ``dst``."""
    if variant == "hochschild":
        row = {t: i for i, t in enumerate(dst)}
        cols = []
        for t in src:
            col = {}
            for s, sign in cx.boundary_terms(t, True):
                i = row.get(s)
                if i is None:
                    raise AssertionError("boundary left the subcomplex")
                col[i] = col.get(i, 0) + sign
            cols.append({i: Fraction(v) for i, v in col.items() if v})
        return cols
    row = {t: i for i, t in enumerate(dst)}
    cols = []
    for t in src:
        col = {}
        if variant == "cyclic_quotient":
            for s, sign in cx.boundary_terms(t, True):
                rep, rsign, killed = _rotation_class(s)
                if killed:
                    continue
                i = row[rep]
                col[i] = col.get(i, 0) + sign * rsign
        else:  # cyclic_bprime: b' applied to the invariant vector sum_k lam^k t
            r = len(t) - 1
            step_sign = -1 if r % 2 else 1
            cur, csign = t, 1
            acc = {}
            for _ in range(r + 1):
                for s, sign in cx.boundary_terms(cur, False):
                    acc[s] = acc.get(s, 0) + csign * sign
                cur = (cur[-1],) + cur[:-1]
                csign *= step_sign
            # coordinates in the invariant basis: read the coefficient at each representative
            for s, v in acc.items():
                i = row.get(s)
                if i is None or not v:
                    continue
                period = _period(s)
                col[i] = col.get(i, 0) + Fraction(v * period, len(s))
        cols.append({i: Fraction(v) for i, v in col.items() if v})
    return cols


def _period(t):
    for p in range(1, len(t) + 1):
        if len(t) % p == 0 and t[p:] + t[:p] == t:
            return p
    return len(t)


def _cyclic_basis(basis):
    reps = []
    seen = set()
    for t in basis:
        rep, _, killed = _rotation_class(t)
        if killed or rep in seen:
            continue
        seen.add(rep)
        reps.append(rep)
    return sorted(reps)


def _dense(cols, nrows):
    mat = np.zeros((nrows, len(cols)))
    for j, col in enumerate(cols):
        for i, v in col.items():
            mat[i, j] = float(v)
    return mat


def homology_ranks(algebra, variant="hochschild", degrees=(0, 2), eps=None, sring=None,
                   kind="rational", budget=DEFAULT_BUDGET, support_mode="sum"):
    """Betti numbers of the chosen complex for degrees ``degrees[0] .. degrees[1]``.

    ``eps`` keeps only basis tensors whose support (summed or maximal unit
    propagation) is at most ``eps``; ``sring`` restricts to the S-normal-form
    basis (tensors whose adjacent matrix units meet in the same Peirce type).
    """
    check_kind(kind)
    if variant not in VARIANTS:
        raise ValidationError(f"unknown variant {variant!r}; expected one of {VARIANTS}")
    lo, hi = degrees
    if lo < 0 or hi < lo:
        raise ValidationError("degrees must satisfy 0 <= lo <= hi")
    if eps is not None and algebra.kind != "kernel":
        raise ValidationError("support filtering needs an algebra of kernel operators")
    types = sring.diagonal_types() if sring is not None else None
    cx = _BasisComplex(algebra, eps, types, support_mode)
    total = sum(algebra.dim ** (r + 1) for r in range(lo, hi + 2))
    if eps is None and types is None and total > budget:
        raise BudgetError(f"chain spaces of total dimension {total} exceed budget {budget}", total, budget)
    bases = {}
    for r in range(max(lo - 1, 0), hi + 2):
        b = cx.basis(r, budget)
        bases[r] = b if variant == "hochschild" else _cyclic_basis(b)
    ranks_d = {}
    for r in range(max(lo, 1), hi + 2):
        cols = _boundary_columns(cx, variant, bases[r], bases[r - 1])
        ranks_d[r] = sparse_rank(cols) if kind == "rational" else float_rank(_dense(cols, len(bases[r - 1])))
    out = []
    for r in range(lo, hi + 1):
        out.append(len(bases[r]) - ranks_d.get(r, 0) - ranks_d[r + 1])
    return out


def cyclic_report(algebra, variant, degrees, eps=None, sring=None, kind="rational", budget=DEFAULT_BUDGET):
    ranks = homology_ranks(algebra, variant, degrees, eps, sring, kind, budget)
    return {
        "algebra": algebra.describe(),
        "variant": variant,
        "degrees": list(range(degrees[0], degrees[1] + 1)),
        "ranks": ranks,
        "epsilon": eps,
        "separable_e": sring is not None,
        "support_mode": "sum",
    }


# --------------------------------------------------------------------------
# local Hochschild homology of kernel operators

def simplicial_homology_ranks(space, max_degree):
    """Betti numbers of the simplicial complex attached to ``space`` (rational coefficients)."""
    if not space.has_simplices:
        raise ValidationError("space has no simplicial structure")
    by_dim = {}
    for f in space.faces:
        by_dim.setdefault(len(f) - 1, []).append(f)
    for k in by_dim:
        by_dim[k].sort()
    ranks_d = {}
    for k in range(1, max_degree + 2):
        src = by_dim.get(k, [])
        row = {f: i for i, f in enumerate(by_dim.get(k - 1, []))}
        cols = []
        for f in src:
            cols.append({row[f[:i] + f[i + 1:]]: Fraction(-1 if i % 2 else 1) for i in range(len(f))})
        ranks_d[k] = sparse_rank(cols)
    return [len(by_dim.get(k, [])) - ranks_d.get(k, 0) - ranks_d[k + 1] for k in range(max_degree + 1)]


def support_grid(space, max_degree):
    """Descending scan grid for summed supports: all sums of up to max_degree+2 distances, plus a collar."""
    dists = [d for d in space.distinct_distances() if d > 0]
    sums = {0.0}
    for _ in range(max_degree + 2):
        sums |= {s + d for s in sums for d in dists}
    vals = sorted(sums, reverse=True)
    collar = vals[0] + (vals[0] - vals[1] if len(vals) > 1 else 1.0)
    return [collar] + vals


def local_hochschild_experiment(space, max_degree=1, eps_grid=None, budget=DEFAULT_BUDGET, kind="rational"):
    if max_degree > 2:
        raise ValidationError("the local Hochschild experiment is limited to max_degree <= 2")
    alg = kernel_algebra(space)
    grid = list(eps_grid) if eps_grid is not None else support_grid(space, max_degree)
    scan = []
    stable = None
    for eps in grid:
        ranks = homology_ranks(alg, "hochschild", (0, max_degree), eps=eps, kind=kind, budget=budget)
        scan.append({"epsilon": eps, "ranks": ranks})
        if stable is None and len(scan) >= 2 and scan[-1]["ranks"] == scan[-2]["ranks"]:
            stable = (ranks, eps)
    singular = simplicial_homology_ranks(space, max_degree) if space.has_simplices else None
    return {
        "space": space.to_json(),
        "algebra": alg.describe(),
        "support_mode": "sum",
        "scan": scan,
        "stabilized": stable is not None,
        "ranks": stable[0] if stable else None,
        "stabilization_eps": stable[1] if stable else None,
        "singular_homology": singular,
        "matches_singular": bool(stable and singular == stable[0]),
    }
