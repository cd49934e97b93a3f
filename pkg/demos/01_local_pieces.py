"""
Local building blocks
=====================

Gauss sums and epsilon factors of characters of (Z/p^e)^x, then a round trip
through the finite Mellin transform on functions of the units.
"""
import numpy as np

from voronoi_lab.characters import MultiplicativeCharacter, epsilon_factor
from voronoi_lab.mellin import UnitBruhatFunction, mellin_inverse, mellin_spectrum

# a character mod 25 of conductor exponent 2, picked by the image of a generator
mu = MultiplicativeCharacter(5, 2, 1)
eps = epsilon_factor(mu)
print("epsilon:", eps)
print("|epsilon| =", abs(eps))
# epsilon(mu) epsilon(mu^-1) = mu(-1)
print(eps * epsilon_factor(mu.inverse()), "vs", mu(-1))

# random function on the units mod 5^2, into the character basis and back
rng = np.random.default_rng(1)
W = UnitBruhatFunction.random(5, 2, rng)
back = mellin_inverse(mellin_spectrum(W))
print("round trip error:", np.abs(back.values - W.values).max())
