"""Pairing the residue kernel with cochains on the circle.

The residue of u = z is moved to N points by a DFT. Its degree-0 pairing with
the constant cochain is the trace; in degree 2 the pairing kills coboundaries
of antisymmetric cochains, exactly, in Q(zeta_N). The probe lines up the
symbol side and the residue side without claiming they agree past degree 0.
"""

import json

from locindex.alexander_spanier import antisymmetrize, constant_cochain, indicator
from locindex.index_pairing import as_cycle_check, conjecture_probe, residue_route_pairing, tau_pairing
from locindex.operator_model import model_residue, monomial_model, to_position_kernel
from locindex.reporting import canonical
from locindex.space import circle_space

sp = circle_space(8)
R = to_position_kernel(model_residue(monomial_model(1, K=4)).R, sp)
print("propagation of the residue kernel:", round(R.propagation, 4))
print("tau, constant 0-cochain:", tau_pairing(R, constant_cochain(sp, 0)))
phi = antisymmetrize(indicator(sp, (0, 1, 2)))
print("tau, alternating indicator of (0,1,2):", tau_pairing(R, phi))
print("same value through the restricted Chern chain:", residue_route_pairing(R, phi, 1))
print("largest |tau(d psi)| over 20 random psi:", as_cycle_check(R, 2, trials=20, seed=4))

print(json.dumps(canonical(conjecture_probe(monomial_model(2, K=5), q_max=1))["rows"], indent=1))
