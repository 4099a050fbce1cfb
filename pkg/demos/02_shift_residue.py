"""Residue of the connecting construction for shift-type Toeplitz models.

For u = z^w the parametrix leaves a rank-|w| defect in one of S0, S1, and the
residue R = P - e carries it: trace R is the rank-nullity index of the
rectangular model. The classical Hardy-space index has the opposite sign and
is printed next to it.
"""

from fractions import Fraction

from locindex.operator_model import ToeplitzModel, monomial_model, operator_report

print(f"{'symbol':>14s} {'trace R':>8s} {'S0^2-S1^2':>10s} {'rank-nullity':>13s} {'classical':>10s} {'det L':>6s}")
models = [monomial_model(w, K=8) for w in range(-3, 4)]
models += [ToeplitzModel(10, {0: Fraction(2), 1: Fraction(1)}), ToeplitzModel(10, {0: Fraction(1, 3), 1: Fraction(1)})]
for m in models:
    r = operator_report(m)
    sym = " + ".join(f"{c}z^{k}" for k, c in sorted(m.symbol_coeffs.items()))
    print(f"{sym:>14s} {str(r['trace_R']):>8s} {str(r['trace_S0_sq'] - r['trace_S1_sq']):>10s} "
          f"{r['rank_nullity_index']:>13d} {r['classical_index']:>10d} {str(r['det_L']):>6s}")

print("\nConventions:")
for k, v in operator_report(monomial_model(1, K=4))["conventions"].items():
    print(f"  {k}: {v}")
