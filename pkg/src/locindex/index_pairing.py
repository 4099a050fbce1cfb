"""The tau pairing of a residue kernel with Alexander-Spanier cochains,
index reports, restriction of kernel chains to the diagonal and side-by-side
probes of the symbol and residue routes.

Integration uses counting measure on the finite space, so the degree-0
pairing with the constant cochain is the plain matrix trace.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .algebra import scalar_algebra
from .alexander_spanier import ASCochain, antisymmetrize, coboundary, constant_cochain, indicator
from .cyclic_homology import (AlgebraMatrix, SeparableRingContext, TensorChain, chern_odd, chern_residue,
                              residue_element)
from .errors import ValidationError
from .operator_model import (block_kernel, fredholm_index, model_residue, sign_conventions, to_position_kernel)
from .scalars import Cyclotomic, format_scalar, is_zero
from .space import circle_space

MEASURE = "counting measure, weight 1 per point"


def _zero_like(kind):
    return Fraction(0) if kind == "rational" else 0j


def _block_trace_product(K, tup, kind):
    """tr K(x0,x1) K(x1,x2) ... K(xq,x0) for block kernels K[x, y]."""
    q = len(tup) - 1
    m = K[tup[0], tup[1 % (q + 1)]]
    for i in range(1, q + 1):
        m = m @ K[tup[i], tup[(i + 1) % (q + 1)]]
    return sum(m.diagonal(), _zero_like(kind))


def _check_space(R_pos, phi):
    if R_pos.basis_tag != "position" or R_pos.space is None:
        raise ValidationError("tau pairing needs a kernel in the position basis")
    if phi.space is not R_pos.space:
        if (phi.space.n_points != R_pos.space.n_points
                or not np.array_equal(phi.space.metric, R_pos.space.metric)):
            raise ValidationError("cochain and kernel live on different spaces")


def tau_pairing(R_pos, phi, q=None):
    """sum over (q+1)-tuples of tr R(x0,x1) ... R(xq,x0) * phi(x0, ..., xq)."""
    q = phi.degree if q is None else q
    if q % 2:
        raise ValidationError(f"the pairing is defined for even degrees only, got q={q}")
    if phi.degree != q:
        raise ValidationError(f"cochain degree {phi.degree} does not match q={q}")
    _check_space(R_pos, phi)
    K = block_kernel(R_pos)
    total = _zero_like(R_pos.kind)
    for tup in sorted(phi.entries):
        total = total + _block_trace_product(K, tup, R_pos.kind) * phi.entries[tup]
    return total


def pairing_tensor(R_pos, q):
    """All values tr R(x0,x1)...R(xq,x0) as a dict over tuples (for repeated pairings)."""
    K = block_kernel(R_pos)
    N = R_pos.space.n_points
    out = {}
    for tup in itertools.product(range(N), repeat=q + 1):
        v = _block_trace_product(K, tup, R_pos.kind)
        if not is_zero(v):
            out[tup] = v
    return out


def as_cycle_check(R_pos, q=2, trials=50, seed=0, value_range=3):
    """Max |tau(d psi)| over seeded random antisymmetric integer (q-1)-cochains."""
    if q < 2 or q % 2:
        raise ValidationError("cycle check needs an even q >= 2")
    space = R_pos.space
    table = pairing_tensor(R_pos, q)
    rng = random.Random(seed)
    worst = 0.0
    exact_worst = _zero_like(R_pos.kind)
    for _ in range(trials):
        psi = ASCochain(q - 1, space, {t: Fraction(rng.randint(-value_range, value_range))
                                       for t in itertools.product(range(space.n_points), repeat=q)})
        dpsi = coboundary(antisymmetrize(psi))
        val = sum((table[t] * v for t, v in dpsi.entries.items() if t in table), _zero_like(R_pos.kind))
        if abs(complex(val)) > worst or (R_pos.kind == "rational" and not is_zero(val) and is_zero(exact_worst)):
            worst = max(worst, abs(complex(val)))
            exact_worst = val
    return exact_worst if R_pos.kind == "rational" else worst


# --------------------------------------------------------------------------
# restriction of kernel chains to the diagonal

@dataclass
class DiagonalCurrent:
    """phi -> sum over tuples of tr f0(x0,x1) ... fr(xr,x0) phi(x0, ..., xr)."""

    chain: TensorChain

    @property
    def degree(self):
        return self.chain.degree

    def __call__(self, phi):
        c = self.chain
        if phi.degree != c.degree:
            raise ValidationError(f"current of degree {c.degree} applied to a cochain of degree {phi.degree}")
        alg = c.algebra
        N = alg.space.n_points
        k = alg.block_dim
        total = _zero_like(c.kind)
        for coeff, fs in c.items():
            kernels = [np.asarray(f).reshape(k, N, k, N).transpose(1, 3, 0, 2) for f in fs]
            for tup in sorted(phi.entries):
                r = len(tup) - 1
                m = kernels[0][tup[0], tup[1 % (r + 1)]]
                for i in range(1, r + 1):
                    m = m @ kernels[i][tup[i], tup[(i + 1) % (r + 1)]]
                total = total + coeff * sum(m.diagonal(), _zero_like(c.kind)) * phi.entries[tup]
        return total


def restrict_to_diagonal(c):
    if c.algebra.kind != "kernel":
        raise ValidationError("restriction to the diagonal needs an algebra of kernel operators")
    return DiagonalCurrent(c)


def position_context(R_pos):
    """Kernel algebra, residue element and the pointwise projection onto the second block."""
    alg, R = residue_element(R_pos)
    if alg.block_dim != 2:
        raise ValidationError("residue kernels carry two blocks")
    N = alg.space.n_points
    e = np.zeros((2 * N, 2 * N), dtype=object if R_pos.kind == "rational" else complex)
    e.fill(Fraction(0) if R_pos.kind == "rational" else 0)
    for x in range(N):
        e[N + x, N + x] = Fraction(1) if R_pos.kind == "rational" else 1.0
    return alg, R, SeparableRingContext(alg, alg.from_matrix(e), R_pos.kind)


def residue_route_pairing(R_pos, phi, q):
    """Pair the diagonal restriction of the S-localized residue Chern chain (2q+1 factors) with phi."""
    alg, R, ctx = position_context(R_pos)
    return restrict_to_diagonal(chern_residue(R, ctx, q))(phi)


# --------------------------------------------------------------------------
# reports

@dataclass
class IndexReport:
    model: dict
    q: int
    tau_value: object
    oracle_index: int
    classical_index: int
    comparisons: dict = field(default_factory=dict)
    phi_support_radius: float = 0.0
    residue_propagation: float = 0.0
    conventions: dict = field(default_factory=dict)

    @property
    def locality_flag(self):
        """True when the kernel spreads further than the cochain's support (outside the local regime)."""
        return self.residue_propagation > self.phi_support_radius

    def to_json(self):
        return {
            "model": self.model,
            "q": self.q,
            "tau_value": format_scalar(self.tau_value),
            "oracle_index": self.oracle_index,
            "classical_index": self.classical_index,
            "comparisons": {k: [format_scalar(a), format_scalar(b)] for k, (a, b) in self.comparisons.items()},
            "phi_support_radius": self.phi_support_radius,
            "residue_propagation": self.residue_propagation,
            "locality_exceeded": self.locality_flag,
            "conventions": self.conventions,
        }


def default_space(model, N=None):
    N = N or max(model.truncation, model.codomain_dim, 3)
    return circle_space(N)


def index_class(model, phi=None, N=None):
    """Full pipeline: operators, residue, position kernel, pairing, oracle index."""
    data = model_residue(model)
    space = phi.space if phi is not None else default_space(model, N)
    if phi is None:
        phi = constant_cochain(space, 0)
    if phi.degree > 0 and not phi.antisymmetric and not phi.check_antisymmetric():
        phi = antisymmetrize(phi)
    R_pos = to_position_kernel(data.R, space)
    tau = tau_pairing(R_pos, phi)
    trace_R = data.R.trace()
    conventions = dict(sign_conventions())
    conventions["measure"] = MEASURE
    conventions["phi_antisymmetrized"] = phi.degree > 0
    return IndexReport(
        model=model.describe(),
        q=phi.degree,
        tau_value=tau,
        oracle_index=fredholm_index(data.A),
        classical_index=-model.winding,
        comparisons={"tau_vs_trace_R": (tau, trace_R)},
        phi_support_radius=phi.support_radius,
        residue_propagation=R_pos.propagation,
        conventions=conventions,
    )


def _symbol_values(model, space):
    """u evaluated at the points zeta^x of the circle, exactly in rational mode."""
    N = space.n_points
    vals = []
    for x in range(N):
        acc = Fraction(0) if model.kind == "rational" else 0j
        for k, c in model.symbol_coeffs.items():
            if model.kind == "rational":
                acc = acc + c * Cyclotomic.root_of_unity(N, (x * k) % N)
            else:
                acc = acc + c * np.exp(2j * math.pi * x * k / N)
        vals.append(acc)
    return vals


def pair_pointwise_chain(c, phi):
    """Pair a chain over C^N (functions on the points) with a cochain: sum f0(x0)...fr(xr) phi(x)."""
    if c.degree != phi.degree:
        raise ValidationError("degree mismatch")
    total = _zero_like(c.kind)
    for key, v in c.expand().items():
        total = total + v * phi(key)
    return total


def _winding_cochain(space):
    """Antisymmetric 1-cochain: signed short-arc step count between points (exact rationals)."""
    N = space.n_points
    entries = {}
    for a in range(N):
        for b in range(N):
            s = (b - a) % N
            if s > N / 2:
                s -= N
            elif s == N / 2:
                s = 0
            if s:
                entries[(a, b)] = Fraction(s)
    return ASCochain(1, space, entries, antisymmetric=True)


def even_panel(space, degree):
    if degree == 0:
        return {"constant": constant_cochain(space, 0)}
    N = space.n_points
    t = tuple((i % N) for i in range(degree + 1))
    return {
        "constant": constant_cochain(space, degree),
        "alt_indicator": antisymmetrize(indicator(space, t)),
    }


def conjecture_probe(model, q_max=1, N=None):
    """Symbol route next to residue route at every q <= q_max; values only, nothing asserted."""
    space = default_space(model, N)
    data = model_residue(model)
    R_pos = to_position_kernel(data.R, space)
    rows = [{
        "q": 0,
        "symbol_side": {"winding": model.winding},
        "residue_side": {"tau_constant": format_scalar(tau_pairing(R_pos, constant_cochain(space, 0))),
                         "trace_R": format_scalar(data.R.trace())},
        "q0_columns_equal": model.winding == data.R.trace() == tau_pairing(R_pos, constant_cochain(space, 0)),
    }]
    if q_max >= 1:
        alg_c = scalar_algebra(space.n_points)
        u = AlgebraMatrix.single(alg_c, np.array(_symbol_values(model, space), dtype=object), model.kind)
    for q in range(1, q_max + 1):
        symbol = {}
        ch_u = chern_odd(u, q)
        if 2 * q - 1 == 1:
            symbol["winding_cochain"] = format_scalar(pair_pointwise_chain(ch_u, _winding_cochain(space)))
        symbol["constant"] = format_scalar(pair_pointwise_chain(ch_u, constant_cochain(space, 2 * q - 1)))
        residue = {}
        for name, phi in even_panel(space, 2 * q).items():
            residue[f"tau_{name}"] = format_scalar(tau_pairing(R_pos, phi))
            residue[f"restricted_chern_{name}"] = format_scalar(residue_route_pairing(R_pos, phi, q))
        rows.append({"q": q, "symbol_side": symbol, "residue_side": residue})
    return {
        "label": "conjecture probe",
        "asserted": "nothing beyond q = 0",
        "model": model.describe(),
        "space": space.to_json(),
        "measure": MEASURE,
        "rows": rows,
        "conventions": sign_conventions(),
    }
