"""Alexander-Spanier cohomology of small spaces, with and without localization.

Without a support condition every cochain complex here is acyclic: only the
constants survive. Restricting to tuples near the diagonal recovers the
cohomology of the underlying polyhedron.
"""

from locindex.alexander_spanier import cohomology_ranks, localized_cohomology
from locindex.space import INFINITY, circle_space, tetrahedron_boundary, triangle_graph

print("All tuples allowed:")
for sp in (circle_space(3), circle_space(5), triangle_graph()):
    print(f"  {sp.label:22s} ranks {cohomology_ranks(sp, 2, INFINITY)}")

print("\nLocalized, scanning the radius downward until the ranks settle:")
for sp, top in ((triangle_graph(), 1), (circle_space(6), 1), (tetrahedron_boundary(), 2)):
    loc = localized_cohomology(sp, top)
    scan = ", ".join(f"{eps:.3g}->{r}" for eps, r in loc.scan)
    print(f"  {sp.label:22s} ranks {loc.ranks} at radius {loc.stabilization_eps:.3g}   scan: {scan}")
