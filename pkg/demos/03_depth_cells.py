"""
Depth-aspect dissection
=======================

Split the units mod l^n into Farey cells around the square roots of alpha,
then compare the stationary-phase closed form for each cell's local sum
with a brute-force evaluation.
"""
import numpy as np

from voronoi_lab import depthlab as dl
from voronoi_lab.newforms import catalog

inst = dl.desk_instance()
cells = dl.farey_dissect(inst)
print(len(cells), "cells, depths", sorted({s.k for s in cells}))

g = dl.quadratic_gauss_sign(inst.l, inst.n)
ms = [m for m in range(1, inst.l ** 3) if m % inst.l]
worst = 0.0
for s in cells:
    for c in dl.c_range(s, inst):
        if dl.closed_form_valid(s, inst, c):
            d = dl.l_sc_closed_form(s, inst, c, ms, g) - dl.l_sc_bruteforce(s, inst, c, ms)
            worst = max(worst, np.abs(d).max())
print("closed form vs brute force: %.1e" % worst)

# the cells add back up to the whole twisted sum
lam = catalog("delta", 256).lambdas(201)
total, direct = dl.partition_identity(inst, lam)
print("sum over cells", total)
print("direct sum    ", direct)
