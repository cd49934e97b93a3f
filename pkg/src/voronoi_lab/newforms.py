"""Exact q-expansions of the test newforms from eta quotients.

eta(dz)^r is multiplied in as sparse series: Euler's pentagonal series for
eta and Jacobi's triple-product series for eta^3.  Arithmetic is carried out
modulo a few 31-bit primes in numpy and lifted back to integers by CRT.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .characters import MultiplicativeCharacter
from .hankel import ArchimedeanType
from .localdata import LocalRepresentation, QuasiCharacter

# CRT moduli: the product exceeds 2^123, ample for weight 12 up to n ~ 10^6
_MODULI = (2147483647, 2147483629, 2147483587, 2147483579)


@dataclass(frozen=True)
class EtaQuotientSpec:
    factors: Tuple[Tuple[int, int], ...]  # (d, r_d)

    def __post_init__(self):
        if any(d < 1 for d, _ in self.factors):
            raise ValueError("scales must be positive")
        if any(r < 0 for _, r in self.factors):
            raise ValueError("only holomorphic eta products (r_d >= 0) are supported")
        if sum(d * r for d, r in self.factors) % 24:
            raise ValueError("sum d r_d must be divisible by 24")

    @property
    def weight(self) -> int:
        w2 = sum(r for _, r in self.factors)
        if w2 % 2:
            raise ValueError("half-integral weight")
        return w2 // 2

    @property
    def level(self) -> int:
        return math.lcm(*[d for d, _ in self.factors])

    @property
    def q_offset(self) -> int:
        return sum(d * r for d, r in self.factors) // 24


def _pentagonal(n_max: int, d: int) -> List[Tuple[int, int]]:
    """(exponent, coefficient) of prod (1 - q^{dn}) up to q^{n_max}."""
    out = [(0, 1)]
    k = 1
    while True:
        e1 = d * k * (3 * k - 1) // 2
        if e1 > n_max:
            break
        s = -1 if k % 2 else 1
        out.append((e1, s))
        e2 = d * k * (3 * k + 1) // 2
        if e2 <= n_max:
            out.append((e2, s))
        k += 1
    return out


def _jacobi_cube(n_max: int, d: int) -> List[Tuple[int, int]]:
    """prod (1 - q^{dn})^3 = sum (-1)^k (2k+1) q^{d k(k+1)/2}."""
    out = []
    k = 0
    while d * k * (k + 1) // 2 <= n_max:
        out.append((d * k * (k + 1) // 2, (-1) ** k * (2 * k + 1)))
        k += 1
    return out


def _sparse_mul(dense: np.ndarray, sparse: Sequence[Tuple[int, int]], mod: int) -> np.ndarray:
    n = dense.size
    out = np.zeros(n, dtype=np.int64)
    for e, c in sparse:
        if e >= n:
            continue
        out[e:] = (out[e:] + dense[: n - e] * (c % mod)) % mod
    return out


def _crt(residues: Sequence[np.ndarray]) -> List[int]:
    M = 1
    for m in _MODULI:
        M *= m
    parts = []
    for m in _MODULI:
        Mi = M // m
        parts.append((Mi, pow(Mi, -1, m)))
    out = []
    half = M // 2
    for j in range(residues[0].size):
        x = 0
        for (Mi, inv), r, m in zip(parts, residues, _MODULI):
            x += int(r[j]) * inv % m * Mi
        x %= M
        out.append(x - M if x > half else x)
    return out


@dataclass(frozen=True, eq=False)
class QExpansion:
    """Integer Fourier coefficients a(1..n_max) (index 0 unused), optionally twisted.

    twists: characters chi (mod p^a) multiplied into a(n) at the numeric
    boundary; quadratic twists keep integer coefficients.
    """
    coefficients: Tuple[int, ...]
    weight: int
    level: int
    twists: Tuple[MultiplicativeCharacter, ...] = ()

    @property
    def n_max(self) -> int:
        return len(self.coefficients) - 1

    def a(self, n: int) -> complex:
        if not 1 <= n <= self.n_max:
            raise IndexError(f"coefficient {n} outside 1..{self.n_max}")
        v = self.coefficients[n]
        for chi in self.twists:
            if n % chi.prime == 0:
                return 0
            v = v * _exact_if_real(chi(n))
        return v

    def integer_coefficient(self, n: int) -> int:
        """a(n) as an exact integer (only for real-valued twists)."""
        v = self.a(n)
        if isinstance(v, complex):
            raise TypeError("coefficient is not rational")
        return int(v)


def _exact_if_real(z: complex):
    if abs(z.imag) < 1e-12 and abs(abs(z.real) - 1) < 1e-12:
        return int(round(z.real))
    return z


def expand_eta_quotient(spec: EtaQuotientSpec, n_max: int) -> QExpansion:
    off = spec.q_offset
    length = n_max - off + 1
    residues = []
    for mod in _MODULI:
        series = np.zeros(length, dtype=np.int64)
        series[0] = 1
        for d, r in spec.factors:
            cubes, rest = divmod(r, 3)
            jac = _jacobi_cube(length - 1, d)
            pen = _pentagonal(length - 1, d)
            for _ in range(cubes):
                series = _sparse_mul(series, jac, mod)
            for _ in range(rest):
                series = _sparse_mul(series, pen, mod)
        residues.append(series)
    vals = _crt(residues)
    coeffs = [0] * (n_max + 1)
    for i, v in enumerate(vals):
        coeffs[i + off] = v
    return QExpansion(tuple(coeffs), spec.weight, spec.level)


def normalized_lambda(f: QExpansion, n: int) -> complex:
    """lambda(n) = a(n) / n^{(k-1)/2}."""
    return f.a(n) / n ** ((f.weight - 1) / 2)


def twist(f: QExpansion, chi: MultiplicativeCharacter) -> QExpansion:
    if chi.is_trivial:
        return f
    p = chi.prime
    if f.level % p == 0:
        raise ValueError("level must be coprime to the twisting modulus")
    level = f.level * p ** (2 * chi.conductor_exponent)
    return QExpansion(f.coefficients, f.weight, level, f.twists + (chi,))


def lambda_array(f: QExpansion, n_max: Optional[int] = None) -> np.ndarray:
    """Vector of lambda(n) for n = 0..n_max (entry 0 is 0)."""
    n_max = f.n_max if n_max is None else n_max
    if n_max > f.n_max:
        raise IndexError("expansion too short")
    n = np.arange(n_max + 1)
    a = np.array([float(c) for c in f.coefficients[: n_max + 1]])
    out = np.zeros(n_max + 1, dtype=complex)
    out[1:] = a[1:] / n[1:] ** ((f.weight - 1) / 2)
    for chi in f.twists:
        vals = chi.values_on_units(chi.conductor_exponent)
        out *= vals[n % chi.prime ** chi.conductor_exponent]
    return out


# catalog ------------------------------------------------------------------

DELTA = EtaQuotientSpec(((1, 24),))
LEVEL11 = EtaQuotientSpec(((1, 2), (11, 2)))


def satake_from_lambda(lam: float, omega: complex = 1) -> Tuple[complex, complex]:
    disc = np.sqrt(complex(lam * lam - 4 * omega))
    return (lam + disc) / 2, (lam - disc) / 2


@dataclass(eq=False)
class CatalogForm:
    """A newform with the data the Voronoi machinery needs.

    lam(n) is the normalized eigenvalue; local[p] the representation pi_p at
    p | level.  All catalog forms have trivial central character.
    """
    name: str
    expansion: QExpansion
    arch: ArchimedeanType
    local: Dict[int, LocalRepresentation]
    _lam: Optional[np.ndarray] = None

    @property
    def level(self) -> int:
        return self.expansion.level

    @property
    def weight(self) -> int:
        return self.expansion.weight

    def lambdas(self, n_max: int) -> np.ndarray:
        if self._lam is None or self._lam.size <= n_max:
            if n_max > self.expansion.n_max:
                raise IndexError(f"{self.name}: expansion holds {self.expansion.n_max} terms")
            self._lam = lambda_array(self.expansion)
        return self._lam[: n_max + 1]

    def lam(self, n: int) -> complex:
        return self.lambdas(n)[n]

    def local_rep(self, p: int) -> LocalRepresentation:
        """pi_p; unramified components are rebuilt from lambda(p)."""
        if p in self.local:
            return self.local[p]
        if self.level % p == 0:
            raise KeyError(p)
        return LocalRepresentation.from_hecke(p, complex(self.lam(p)).real)


@lru_cache(maxsize=8)
def _expansion(spec: EtaQuotientSpec, n_max: int) -> QExpansion:
    return expand_eta_quotient(spec, n_max)


def _round_up(n: int) -> int:
    return 1 << max(10, math.ceil(math.log2(n + 1)))


def catalog(name: str, n_max: int = 4096) -> CatalogForm:
    """'delta', 'level11', 'delta_chi3', 'delta_chi5'."""
    n_max = _round_up(n_max)
    if name == "delta":
        f = _expansion(DELTA, n_max)
        return CatalogForm(name, f, ArchimedeanType.holomorphic(12), {})
    if name == "level11":
        f = _expansion(LEVEL11, n_max)
        st = LocalRepresentation.steinberg(QuasiCharacter.unramified(11, f.a(11)))
        return CatalogForm(name, f, ArchimedeanType.holomorphic(2), {11: st})
    if name in ("delta_chi3", "delta_chi5"):
        p = 3 if name == "delta_chi3" else 5
        base = _expansion(DELTA, n_max)
        chi = MultiplicativeCharacter.quadratic(p)
        f = twist(base, chi)
        lam_p = base.coefficients[p] / p ** 5.5
        a1, a2 = satake_from_lambda(lam_p)
        rep = LocalRepresentation.principal(QuasiCharacter(chi, a1), QuasiCharacter(chi, a2))
        return CatalogForm(name, f, ArchimedeanType.holomorphic(12), {p: rep})
    raise KeyError(f"unknown form {name!r}")


CATALOG_NAMES = ("delta", "level11", "delta_chi3", "delta_chi5")
