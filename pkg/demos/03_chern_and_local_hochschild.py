"""Chern cycles, the separable-ring normal form, and local Hochschild homology.

The even Chern chain of an idempotent is killed by b' exactly; under b it only
vanishes after passing to the quotient by the cyclic action. The residue of a
shift model behaves the same way once tensors are taken over C + Ce.
"""

import numpy as np
from fractions import Fraction

from locindex.algebra import kernel_algebra, matrix_algebra
from locindex.cyclic_homology import (AlgebraMatrix, SeparableRingContext, bar_bprime, chern_even,
                                      chern_residue_boundaries, cyclic_symmetrize, hochschild_b,
                                      homology_ranks, local_hochschild_experiment, residue_element)
from locindex.operator_model import model_residue, monomial_model
from locindex.space import circle_space, triangle_graph

M2 = matrix_algebra(2)
p = AlgebraMatrix.single(M2, M2.from_matrix(np.array([[Fraction(1), Fraction(1)], [Fraction(0), Fraction(0)]],
                                                     dtype=object)))
for q in range(3):
    ch = chern_even(p, q)
    print(f"Ch_{2 * q}(p): b'=0 {bar_bprime(ch).is_zero()}, b=0 {hochschild_b(ch).is_zero()}, "
          f"b=0 mod (1-lambda) {cyclic_symmetrize(hochschild_b(ch)).is_zero()}")

for w in (1, 2):
    data = model_residue(monomial_model(w, K=2 * w + 2))
    alg, R = residue_element(data.R)
    ctx = SeparableRingContext(alg, alg.from_matrix(data.e.entries))
    print(f"residue chain for z^{w}:", chern_residue_boundaries(R, ctx, 1))

print("\nHochschild ranks of M_2, degrees 0..2:", homology_ranks(M2, "hochschild", (0, 2)))
print("cyclic ranks of M_2, degrees 0..3:   ", homology_ranks(M2, "cyclic_bprime", (0, 3)))

for sp in (triangle_graph(), circle_space(4)):
    rep = local_hochschild_experiment(sp, 1)
    print(f"\nlocal Hochschild of {sp.label} (kernel algebra of dimension {kernel_algebra(sp).dim}):")
    for row in rep["scan"]:
        print(f"  support <= {row['epsilon']:.3g}: {row['ranks']}")
    print(f"  settled at {rep['ranks']}, simplicial homology {rep['singular_homology']}")
