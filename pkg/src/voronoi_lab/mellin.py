"""Mellin analysis on Z_p^x and the Laurent-coefficient kernel B_{pi,kappa}.

For unit-supported functions the Mellin transform is finite Fourier analysis
on the cyclic group (Z/p^kappa)^*, done here with an FFT in discrete-log
order.  Measure: d^x y with total mass 1 on Z_p^x.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .characters import (MultiplicativeCharacter, characters_upto, dlog_table,
                         phi, primitive_root)
from .padic import PadicNumber, residue, unit_part, valuation


def _dlog_order(p: int, kappa: int) -> np.ndarray:
    """Residues g^0, g^1, ... mod p^kappa."""
    mod = p ** kappa
    g = primitive_root(p, kappa)
    out = np.empty(phi(p, kappa), dtype=np.int64)
    x = 1
    for j in range(out.size):
        out[j] = x
        x = x * g % mod
    return out


@dataclass(frozen=True, eq=False)
class UnitBruhatFunction:
    """A function on Q_p^x supported on Z_p^x and constant mod p^kappa.

    values[x] for x in range(p^kappa); entries at non-units are forced to 0.
    """
    prime: int
    level: int
    values: np.ndarray

    def __post_init__(self):
        if self.level < 1:
            raise ValueError("level must be >= 1")
        v = np.array(self.values, dtype=complex).reshape(-1)
        if v.size != self.prime ** self.level:
            raise ValueError("need one value per residue mod p^kappa")
        v[::self.prime] = 0
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    @classmethod
    def from_callable(cls, p: int, kappa: int, f: Callable[[int], complex]) -> "UnitBruhatFunction":
        mod = p ** kappa
        return cls(p, kappa, np.array([f(x) if x % p else 0 for x in range(mod)], dtype=complex))

    @classmethod
    def unit_indicator(cls, p: int, kappa: int = 1) -> "UnitBruhatFunction":
        return cls(p, kappa, np.ones(p ** kappa))

    @classmethod
    def random(cls, p: int, kappa: int, rng: np.random.Generator) -> "UnitBruhatFunction":
        n = p ** kappa
        return cls(p, kappa, rng.normal(size=n) + 1j * rng.normal(size=n))

    def __call__(self, x) -> complex:
        p = self.prime
        if isinstance(x, PadicNumber):
            if x.is_zero or x.valuation != 0:
                return 0j
            return complex(self.values[x.unit % p ** self.level])
        if x == 0 or valuation(x, p) != 0:
            return 0j
        return complex(self.values[residue(x, p, self.level)])

    def at_integers(self, m: np.ndarray) -> np.ndarray:
        return self.values[np.mod(m, self.prime ** self.level)]

    def at_level(self, kappa: int) -> "UnitBruhatFunction":
        """The same function viewed as constant modulo p^kappa (kappa >= level)."""
        if kappa < self.level:
            raise ValueError("cannot lower the level")
        idx = np.arange(self.prime ** kappa) % self.prime ** self.level
        return UnitBruhatFunction(self.prime, kappa, self.values[idx])

    def times(self, f: Callable[[np.ndarray], np.ndarray]) -> "UnitBruhatFunction":
        x = np.arange(self.prime ** self.level)
        return UnitBruhatFunction(self.prime, self.level, self.values * f(x))

    def __add__(self, other: "UnitBruhatFunction") -> "UnitBruhatFunction":
        k = max(self.level, other.level)
        return UnitBruhatFunction(self.prime, k, self.at_level(k).values + other.at_level(k).values)

    def __rmul__(self, c: complex) -> "UnitBruhatFunction":
        return UnitBruhatFunction(self.prime, self.level, c * self.values)


@dataclass(frozen=True, eq=False)
class MellinSpectrum:
    """Mellin coefficients indexed by the exponent j of mu_j(g) = e(j/phi(p^kappa))."""
    prime: int
    level: int
    coefficients: np.ndarray

    def __getitem__(self, mu: MultiplicativeCharacter) -> complex:
        if mu.conductor_exponent > self.level:
            return 0j
        return complex(self.coefficients[mu.at_modulus(self.level).log_image])

    def items(self):
        for j, c in enumerate(self.coefficients):
            yield MultiplicativeCharacter(self.prime, self.level, j), complex(c)


def mellin(W: UnitBruhatFunction, mu: MultiplicativeCharacter) -> complex:
    """Integral of W(y) mu(y) over Z_p^x; zero when a(mu) exceeds the level."""
    if mu.prime != W.prime:
        raise ValueError("prime mismatch")
    if mu.conductor_exponent > W.level:
        return 0j
    vals = mu.values_on_units(W.level)
    return complex(np.dot(W.values, vals)) / phi(W.prime, W.level)


def mellin_spectrum(W: UnitBruhatFunction) -> MellinSpectrum:
    order = _dlog_order(W.prime, W.level)
    f = W.values[order]
    # coefficient j: (1/phi) sum_k f[k] e(jk/phi)
    return MellinSpectrum(W.prime, W.level, np.fft.ifft(f))


def mellin_inverse(S: MellinSpectrum) -> UnitBruhatFunction:
    """f(y) = sum_mu mu(y)^{-1} S(mu) on Z_p^x."""
    order = _dlog_order(S.prime, S.level)
    g = np.fft.fft(S.coefficients)
    vals = np.zeros(S.prime ** S.level, dtype=complex)
    vals[order] = g
    return UnitBruhatFunction(S.prime, S.level, vals)


def pre_mellin_inverse(ftilde: Callable[[np.ndarray], np.ndarray], p: int, v: int,
                       n: int = 10_000) -> complex:
    """(log p / 2 pi) int_{-pi/log p}^{pi/log p} ftilde(t) |y|^{-it} dt, v = v_p(y).

    Periodic trapezoid rule; exact for trigonometric polynomials of degree < n.
    """
    L = math.pi / math.log(p)
    t = -L + 2 * L * np.arange(n) / n
    vals = ftilde(t) * np.exp(1j * t * v * math.log(p))
    return complex(vals.mean())


# B function ----------------------------------------------------------------

class NotExpandableError(ValueError):
    pass


@dataclass(frozen=True)
class LaurentRatio:
    """numerator(X) / denominator(1/X) with X = p^{-it}, expanded on |X| = 1.

    numerator: polynomial coefficients in X (index = power).
    denominator_roots: c_j such that the denominator is prod (1 - c_j X^{-1}).
    window: coefficients below window[0] or above window[1] are treated as 0.
    """
    numerator: Tuple[complex, ...]
    denominator_roots: Tuple[complex, ...]
    window: Tuple[int, int] = (-400, 400)
    tol: float = 1e-18

    def factor_series(self, c: complex) -> Dict[int, complex]:
        """Laurent expansion of 1/(1 - c X^{-1}) valid on |X| = 1."""
        r = abs(c)
        if abs(r - 1) < 1e-12:
            raise NotExpandableError("pole on the unit circle")
        out: Dict[int, complex] = {}
        if r < 1:
            k, term = 0, 1 + 0j
            while abs(term) > self.tol and -k >= self.window[0]:
                out[-k] = term
                k += 1
                term *= c
            if abs(term) > self.tol:
                raise NotExpandableError("expansion window too small")
        else:
            # 1/(1 - c/X) = -(X/c) / (1 - X/c)
            k, term = 1, -1 / c
            while abs(term) > self.tol and k <= self.window[1]:
                out[k] = term
                k += 1
                term /= c
            if abs(term) > self.tol:
                raise NotExpandableError("expansion window too small")
        return out

    def coefficients(self) -> Dict[int, complex]:
        series: Dict[int, complex] = {k: complex(c) for k, c in enumerate(self.numerator) if c != 0}
        for c in self.denominator_roots:
            if c == 0:
                continue
            f = self.factor_series(c)
            new: Dict[int, complex] = {}
            for i, a in series.items():
                for j, b in f.items():
                    new[i + j] = new.get(i + j, 0) + a * b
            series = new
        return series

    def coefficient(self, m: int) -> complex:
        return self.coefficients().get(m, 0j)

    def __call__(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=complex)
        num = np.polynomial.polynomial.polyval(X, np.asarray(self.numerator, dtype=complex))
        den = np.ones_like(X)
        for c in self.denominator_roots:
            den = den * (1 - c / X)
        return num / den


def l_ratio(rep, kappa: float) -> LaurentRatio:
    """L(1 - kappa - it, rep~) / L(kappa + it, rep) as a LaurentRatio in X = p^{-it}.

    rep must provide .prime, .l_params() (the beta with L(s) = prod (1 - beta p^-s)^-1)
    and .contragredient().
    """
    p = rep.prime
    num = np.array([1 + 0j])
    for b in rep.l_params():
        num = np.convolve(num, [1, -b * p ** (-kappa)])
    roots = tuple(complex(b) * p ** (-(1 - kappa)) for b in rep.contragredient().l_params())
    return LaurentRatio(tuple(complex(c) for c in num), roots)


_B_CACHE: Dict[tuple, Dict[int, complex]] = {}


def b_function(rep, kappa: float, m: int) -> complex:
    """B_{rep,kappa}(y) for v_p(y) = m: the X^m coefficient of the L-ratio."""
    key = (rep.cache_key(), float(kappa)) if hasattr(rep, "cache_key") else None
    if key is not None and key in _B_CACHE:
        coeffs = _B_CACHE[key]
    else:
        coeffs = l_ratio(rep, kappa).coefficients()
        if key is not None:
            _B_CACHE[key] = coeffs
    return coeffs.get(m, 0j)


def b_function_quadrature(rep, kappa: float, m: int, n: int = 10_000) -> complex:
    """The defining t-integral of B evaluated by the trapezoid rule (oracle)."""
    p = rep.prime
    R = l_ratio(rep, kappa)
    return pre_mellin_inverse(lambda t: R(np.exp(-1j * t * math.log(p))), p, m, n)
