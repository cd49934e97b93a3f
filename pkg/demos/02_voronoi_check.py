"""
Checking a Voronoi identity numerically
=======================================

The smoothed, twisted sum of Hecke eigenvalues of Delta on one side, the dual
sum with Hankel transforms and local constants on the other.
"""
from voronoi_lab.acceptance import headline_instance, twisted_instance
from voronoi_lab.voronoi import verify

inst = headline_instance()
rep = verify(inst)
print("lhs ", rep.lhs)
print("rhs ", rep.rhs)
print("relative error %.2e (tolerance %.0e), path %s" % (rep.rel_error, rep.tolerance, rep.path))
print("dual terms", rep.dual.terms, "tail bound %.1e" % rep.dual.tail)

# ramified twist: the corrected local table closes the identity, the table as printed does not
for variant in ("corrected", "table"):
    r = verify(twisted_instance(variant))
    print("%-9s table: relative error %.2e" % (variant, r.rel_error))
