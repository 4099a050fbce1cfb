"""Experiment runner.

Exit codes: 0 success, 2 invalid input or failed precondition, 3 budget
exceeded, 4 internal consistency failure (also used when the suite has a
failing row). Errors are printed to stderr as one JSON object.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

import numpy as np

from . import acceptance
from .algebra import algebra_from_json
from .alexander_spanier import (DEFAULT_DEGREE_CAP, ASCochain, cohomology_report, constant_cochain,
                                localized_cohomology)
from .cyclic_homology import (DEFAULT_BUDGET, VARIANTS, SeparableRingContext, cyclic_report,
                              local_hochschild_experiment)
from .errors import BudgetError, ConsistencyError, LocIndexError, ValidationError
from .index_pairing import conjecture_probe, index_class
from .operator_model import model_from_json, operator_report
from .reporting import render
from .scalars import parse_exact
from .space import INFINITY, DiagonalNeighborhood, circle_space, space_from_json

SUBCOMMANDS = ("as-cohomology", "cyclic", "index", "pair", "probe", "suite")


def _strict(cfg, allowed, where):
    if not isinstance(cfg, dict):
        raise ValidationError(f"{where} config must be a JSON object")
    extra = set(cfg) - set(allowed)
    if extra:
        raise ValidationError(f"unknown field(s) in {where} config: {sorted(extra)}")


def _require(cfg, key, where):
    if key not in cfg:
        raise ValidationError(f"{where} config needs '{key}'")
    return cfg[key]


def _epsilon(value):
    if value is None:
        return None
    if value in ("inf", "infinity") or value == INFINITY:
        return INFINITY
    try:
        eps = float(value)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"bad epsilon {value!r}") from exc
    if eps < 0:
        raise ValidationError("epsilon must be nonnegative")
    return eps


# --------------------------------------------------------------------------
# subcommands

def run_as_cohomology(cfg, args):
    _strict(cfg, {"space", "max_degree", "epsilon", "grid"}, "as-cohomology")
    space = space_from_json(_require(cfg, "space", "as-cohomology"))
    max_degree = int(cfg.get("max_degree", 1))
    eps = _epsilon(cfg.get("epsilon"))
    if eps is not None:
        return cohomology_report(space, max_degree, eps, args.scalar, args.degree_cap)
    grid = [_epsilon(g) for g in cfg["grid"]] if "grid" in cfg else None
    return localized_cohomology(space, max_degree, args.scalar, grid, args.degree_cap).report(space)


def _separable(alg, desc, kind):
    """``separable_e``: full coefficient vector, or per-block lists of diagonal 0/1 entries."""
    if desc is None:
        return None
    if isinstance(desc, dict):
        _strict(desc, {"diagonal"}, "separable_e")
        diag = desc["diagonal"]
        if len(diag) != len(alg.blocks) or any(len(d) != n for d, n in zip(diag, alg.blocks)):
            raise ValidationError("separable_e.diagonal needs one list per block of matching size")
        mats = [np.diag([Fraction(parse_exact(v)) for v in d]).astype(object) for d in diag]
        return SeparableRingContext(alg, alg.from_blocks(mats), kind)
    vec = [parse_exact(v) for v in desc]
    if len(vec) != alg.dim:
        raise ValidationError(f"separable_e has {len(vec)} coefficients, algebra dimension is {alg.dim}")
    return SeparableRingContext(alg, np.array(vec, dtype=object), kind)


def run_cyclic(cfg, args):
    if "space" in cfg:
        _strict(cfg, {"space", "max_degree", "grid"}, "cyclic (local Hochschild)")
        space = space_from_json(cfg["space"])
        grid = [float(g) for g in cfg["grid"]] if "grid" in cfg else None
        return local_hochschild_experiment(space, int(cfg.get("max_degree", 1)), grid, args.budget, args.scalar)
    _strict(cfg, {"algebra", "variant", "degrees", "epsilon", "separable_e"}, "cyclic")
    alg = algebra_from_json(_require(cfg, "algebra", "cyclic"))
    variant = cfg.get("variant", "cyclic_bprime")
    if variant not in VARIANTS:
        raise ValidationError(f"variant must be one of {VARIANTS}")
    degrees = cfg.get("degrees", [0, 2])
    if not (isinstance(degrees, list) and len(degrees) == 2):
        raise ValidationError("degrees must be [lo, hi]")
    eps = _epsilon(cfg.get("epsilon"))
    sring = _separable(alg, cfg.get("separable_e"), "rational")
    return cyclic_report(alg, variant, (int(degrees[0]), int(degrees[1])), eps, sring, args.scalar, args.budget)


def run_index(cfg, args):
    _strict(cfg, {"model"}, "index")
    model = model_from_json(_require(cfg, "model", "index"), args.scalar)
    return operator_report(model)


def _phi(desc, space, q):
    if desc is None:
        desc = {"kind": "constant"}
    _strict(desc, {"kind", "entries", "epsilon"}, "phi")
    kind = desc.get("kind")
    if kind == "constant":
        if "entries" in desc:
            raise ValidationError("constant phi takes no entries")
        phi = constant_cochain(space, q)
    elif kind == "explicit":
        entries = {}
        for item in _require(desc, "entries", "phi"):
            if not (isinstance(item, list) and len(item) == 2):
                raise ValidationError("explicit phi entries are [[x0, ..., xq], value] pairs")
            entries[tuple(int(x) for x in item[0])] = parse_exact(item[1])
        phi = ASCochain(q, space, entries)
    else:
        raise ValidationError("phi.kind must be 'constant' or 'explicit'")
    eps = _epsilon(desc.get("epsilon"))
    if eps is not None:
        phi = phi.restricted(DiagonalNeighborhood(eps))
    return phi


def run_pair(cfg, args):
    _strict(cfg, {"model", "phi", "q", "N"}, "pair")
    model = model_from_json(_require(cfg, "model", "pair"), args.scalar)
    q = int(cfg.get("q", 0))
    N = int(cfg.get("N", max(model.truncation, model.codomain_dim, 3)))
    phi = _phi(cfg.get("phi"), circle_space(N), q)
    return index_class(model, phi).to_json()


def run_probe(cfg, args):
    _strict(cfg, {"model", "q_max", "N"}, "probe")
    model = model_from_json(_require(cfg, "model", "probe"), args.scalar)
    return conjecture_probe(model, int(cfg.get("q_max", 1)), cfg.get("N"))


def run_suite(cfg, args):
    _strict(cfg, {"only"}, "suite")
    rows = acceptance.run_suite(args.seed, cfg.get("only"))
    for r in rows:
        print(r.line(), file=sys.stderr)
    return {"seed": args.seed, "all_passed": all(r.passed for r in rows), "rows": [r.to_json() for r in rows]}


RUNNERS = {"as-cohomology": run_as_cohomology, "cyclic": run_cyclic, "index": run_index, "pair": run_pair,
           "probe": run_probe, "suite": run_suite}


# --------------------------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(prog="locindex", description="Finite-scale experiments on localized index pairings.")
    p.add_argument("subcommand", choices=SUBCOMMANDS)
    p.add_argument("--config", help="JSON config file ('-' for stdin)")
    p.add_argument("--scalar", choices=("rational", "float"), default="rational")
    p.add_argument("--out", help="output path (default: stdout)")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--degree-cap", type=int, default=DEFAULT_DEGREE_CAP)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    return p


def _load_config(path):
    if path is None:
        return {}
    try:
        text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    except OSError as exc:
        raise ValidationError(f"cannot read config: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"malformed JSON config: {exc}") from exc


def _fail(exc, code):
    payload = {"error": type(exc).__name__, "message": str(exc), "exit_code": code}
    for attr in ("dimension", "budget", "s0_norm", "s1_norm"):
        if getattr(exc, attr, None) is not None:
            payload[attr] = getattr(exc, attr)
    print(json.dumps(payload, sort_keys=True), file=sys.stderr)
    return code


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = _load_config(args.config)
        report = RUNNERS[args.subcommand](cfg, args)
    except BudgetError as exc:
        return _fail(exc, 3)
    except ConsistencyError as exc:
        return _fail(exc, 4)
    except (ValidationError, LocIndexError) as exc:
        return _fail(exc, 2)
    except (TypeError, ValueError, KeyError) as exc:
        return _fail(exc, 2)
    text = render(report, args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.subcommand == "suite" and not report["all_passed"]:
        return 4
    return 0


if __name__ == "__main__":
    sys.exit(main())
