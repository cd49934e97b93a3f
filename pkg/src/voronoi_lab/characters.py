"""Dirichlet characters of odd prime-power modulus, additive characters and
Gauss sums.

A character mod p^a is stored as the exponent e with mu(g) = e(e/phi(p^a)),
g the least primitive root mod p^a.  Characters are extended to Q_p^x by
mu(p) = 1.  Equality is by values: every character is canonicalized to the
modulus p^{a(mu)}.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Mapping, Union

import numpy as np

from .padic import (DEFAULT, PadicNumber, PadicPrecisionConfig, Rational,
                    padic_log, residue, unit_part, valuation)

TWO_PI_I = 2j * math.pi


def e(x: float) -> complex:
    return cmath.exp(TWO_PI_I * x)


def phi(p: int, a: int) -> int:
    return 1 if a == 0 else (p - 1) * p ** (a - 1)


@lru_cache(maxsize=None)
def primitive_root(p: int, a: int) -> int:
    """Least positive generator of (Z/p^a)^*."""
    if a == 0:
        return 1
    n = phi(p, a)
    factors = _prime_factors(n)
    mod = p ** a
    for g in range(2 if mod > 2 else 1, mod):
        if g % p == 0:
            continue
        if all(pow(g, n // q, mod) != 1 for q in factors):
            return g
    return 1  # modulus 2; unreachable for odd p


def _prime_factors(n: int) -> List[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


@lru_cache(maxsize=64)
def dlog_table(p: int, a: int) -> np.ndarray:
    """Array T of length p^a with T[x] = log_g(x) for units, -1 elsewhere."""
    mod = p ** a
    T = np.full(mod, -1, dtype=np.int64)
    g = primitive_root(p, a)
    x = 1
    for k in range(phi(p, a)):
        T[x] = k
        x = x * g % mod
    T.flags.writeable = False
    return T


def dlog(x: int, p: int, a: int) -> int:
    k = int(dlog_table(p, a)[x % p ** a])
    if k < 0:
        raise ValueError(f"{x} is not a unit mod {p}^{a}")
    return k


@dataclass(frozen=True)
class RootOfUnity:
    order: int
    exponent: int

    def __post_init__(self):
        object.__setattr__(self, "exponent", self.exponent % self.order)

    def __complex__(self) -> complex:
        return e(self.exponent / self.order)

    def value(self) -> complex:
        return complex(self)

    def __mul__(self, other: "RootOfUnity") -> "RootOfUnity":
        Q = self.order * other.order // math.gcd(self.order, other.order)
        return RootOfUnity(Q, self.exponent * (Q // self.order)
                           + other.exponent * (Q // other.order))

    def reduced(self) -> "RootOfUnity":
        g = math.gcd(self.order, self.exponent)
        return RootOfUnity(self.order // g, self.exponent // g) if g else self


def _conductor(p: int, a: int, log_image: int) -> int:
    n = phi(p, a)
    log_image %= n
    if log_image == 0:
        return 0
    c = a
    # trivial on 1 + p^{c-1} iff p^{a-c+1} divides the exponent
    while c > 1 and log_image % p ** (a - c + 1) == 0:
        c -= 1
    return c


def _transfer(p: int, a: int, log_image: int, b: int) -> int:
    """Exponent of the same character written modulo p^b.

    Requires b >= conductor.  Works for lifting (b > a) and restricting.
    """
    if b == a:
        return log_image % phi(p, a)
    if a == 0:
        return 0
    gb = primitive_root(p, b)
    k = dlog(gb, p, a) if b > 0 else 0
    num = log_image * k * phi(p, b)
    den = phi(p, a)
    if num % den:
        raise ValueError("character does not factor through the requested modulus")
    return (num // den) % phi(p, b)


@dataclass(frozen=True, eq=False)
class MultiplicativeCharacter:
    prime: int
    modulus_exponent: int
    log_image: int

    def __post_init__(self):
        if self.prime == 2 and self.modulus_exponent > 0:
            raise ValueError("p = 2 is only supported for the trivial character")
        object.__setattr__(self, "log_image",
                           self.log_image % phi(self.prime, self.modulus_exponent))

    @classmethod
    def trivial(cls, p: int) -> "MultiplicativeCharacter":
        return cls(p, 0, 0)

    @classmethod
    def quadratic(cls, p: int) -> "MultiplicativeCharacter":
        return cls(p, 1, (p - 1) // 2)

    @property
    def generator(self) -> int:
        return primitive_root(self.prime, self.modulus_exponent)

    @property
    def conductor_exponent(self) -> int:
        return _conductor(self.prime, self.modulus_exponent, self.log_image)

    @property
    def order(self) -> int:
        n = phi(self.prime, self.modulus_exponent)
        return n // math.gcd(n, self.log_image)

    def at_modulus(self, b: int) -> "MultiplicativeCharacter":
        if b < self.conductor_exponent:
            raise ValueError("modulus below conductor")
        return MultiplicativeCharacter(
            self.prime, b, _transfer(self.prime, self.modulus_exponent, self.log_image, b))

    def canonical(self) -> "MultiplicativeCharacter":
        return self.at_modulus(self.conductor_exponent)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MultiplicativeCharacter):
            return NotImplemented
        a, b = self.canonical(), other.canonical()
        return (a.prime, a.modulus_exponent, a.log_image) == (b.prime, b.modulus_exponent, b.log_image)

    def __hash__(self):
        c = self.canonical()
        return hash((c.prime, c.modulus_exponent, c.log_image))

    def __repr__(self):
        return (f"Char(p={self.prime}, a={self.modulus_exponent}, e={self.log_image}, "
                f"cond={self.conductor_exponent})")

    def __mul__(self, other: "MultiplicativeCharacter") -> "MultiplicativeCharacter":
        if other.prime != self.prime:
            raise ValueError("mixing primes")
        b = max(self.modulus_exponent, other.modulus_exponent)
        x, y = self.at_modulus(b), other.at_modulus(b)
        return MultiplicativeCharacter(self.prime, b, x.log_image + y.log_image)

    def inverse(self) -> "MultiplicativeCharacter":
        return MultiplicativeCharacter(self.prime, self.modulus_exponent, -self.log_image)

    def conj(self) -> "MultiplicativeCharacter":
        return self.inverse()

    def __pow__(self, k: int) -> "MultiplicativeCharacter":
        return MultiplicativeCharacter(self.prime, self.modulus_exponent, k * self.log_image)

    @property
    def is_trivial(self) -> bool:
        return self.conductor_exponent == 0

    # evaluation ----------------------------------------------------------
    def root(self, x) -> RootOfUnity:
        """mu(x) as an exact root of unity (x nonzero rational or PadicNumber)."""
        p, a = self.prime, self.modulus_exponent
        n = phi(p, a)
        if a == 0:
            return RootOfUnity(1, 0)
        if isinstance(x, PadicNumber):
            if x.is_zero:
                raise ValueError("character evaluated at 0")
            u = x.unit % p ** a
        else:
            if x == 0:
                raise ValueError("character evaluated at 0")
            u = residue(unit_part(x, p), p, a)
        return RootOfUnity(n, self.log_image * dlog(u, p, a))

    def __call__(self, x) -> complex:
        return complex(self.root(x))

    def values_on_units(self, kappa: int) -> np.ndarray:
        """Array over residues mod p^kappa: mu(x) on units, 0 elsewhere."""
        if kappa < self.conductor_exponent:
            raise ValueError("level below conductor")
        c = self.at_modulus(kappa)
        T = dlog_table(self.prime, kappa) if kappa > 0 else np.zeros(1, dtype=np.int64)
        n = phi(self.prime, kappa)
        vals = np.exp(TWO_PI_I * (c.log_image * T % n) / n)
        vals[T < 0] = 0
        return vals

    def to_json(self) -> dict:
        return {"l": self.prime, "a": self.modulus_exponent,
                "gen": self.generator, "log_image": self.log_image}

    @classmethod
    def from_json(cls, d: Mapping) -> "MultiplicativeCharacter":
        ch = cls(int(d["l"]), int(d["a"]), int(d["log_image"]))
        if "gen" in d and int(d["gen"]) != ch.generator:
            raise ValueError("generator mismatch")
        return ch


def char_eval(mu: MultiplicativeCharacter, x) -> complex:
    return mu(x)


def characters_upto(p: int, kappa: int) -> List[MultiplicativeCharacter]:
    """All mu with a(mu) <= kappa, written modulo p^kappa, ordered by exponent."""
    return [MultiplicativeCharacter(p, kappa, j) for j in range(phi(p, kappa))]


def primitive_characters(p: int, a: int) -> List[MultiplicativeCharacter]:
    return [mu for mu in characters_upto(p, a) if mu.conductor_exponent == a]


@dataclass(frozen=True)
class CharacterTuple:
    """Finitely many local characters; evaluation is the product over them."""
    entries: tuple = ()

    @classmethod
    def of(cls, chars: Iterable[MultiplicativeCharacter]) -> "CharacterTuple":
        return cls(tuple(sorted(chars, key=lambda c: c.prime)))

    def __getitem__(self, p: int) -> MultiplicativeCharacter:
        for c in self.entries:
            if c.prime == p:
                return c
        return MultiplicativeCharacter.trivial(p)

    def __call__(self, x: Rational) -> complex:
        out = 1 + 0j
        for c in self.entries:
            out *= c(x)
        return out


# additive characters ------------------------------------------------------

def fractional_part(x: Rational, p: int) -> Fraction:
    """The p-adic fractional part {x}_p in [0,1) with denominator a power of p."""
    x = Fraction(x)
    v = valuation(x.denominator, p)
    if v == 0:
        return Fraction(0)
    pk = p ** v
    rest = x.denominator // pk
    return Fraction(x.numerator * pow(rest, -1, pk) % pk, pk)


def additive_char(p, x: Rational) -> complex:
    """psi_inf(x) = e(x); psi_p(x) = e(-{x}_p) at finite primes."""
    if p in (math.inf, "inf", 0, None):
        return e(float(Fraction(x) % 1))
    return e(-float(fractional_part(x, p)))


# Gauss sums -------------------------------------------------------------

@lru_cache(maxsize=4096)
def _gauss(p: int, a: int, log_image: int) -> complex:
    mod = p ** a
    T = dlog_table(p, a)
    n = phi(p, a)
    x = np.arange(mod)
    units = T >= 0
    # Tate's normalization: sum of mu^{-1}(x) psi(x/p^a)
    ang = (-log_image * T[units] % n) / n - x[units] / mod
    return complex(np.exp(TWO_PI_I * ang).sum() / math.sqrt(mod))


def epsilon_factor(mu: MultiplicativeCharacter) -> complex:
    """Root number eps(1/2, mu) for psi_p unramified.

    Computed as p^{-a/2} sum_x mu^{-1}(x) psi_p(x/p^a) (Tate's integral
    over p^{-a}Z_p^x), which is the normalization that makes the local
    functional equation hold with the Kirillov conventions used here.
    """
    a = mu.conductor_exponent
    if a == 0:
        return 1 + 0j
    c = mu.canonical()
    return _gauss(c.prime, a, c.log_image)


def gauss_sum_spec_form(mu: MultiplicativeCharacter) -> complex:
    """p^{-a/2} sum_x mu(x) psi_p(x/p^a); equals epsilon_factor(mu^{-1})."""
    return epsilon_factor(mu.inverse())


def epsilon_at_s(mu: MultiplicativeCharacter, s: complex) -> complex:
    a = mu.conductor_exponent
    return mu.prime ** ((0.5 - s) * a) * epsilon_factor(mu)


def alpha_of_char(mu: MultiplicativeCharacter, kappa: int,
                  cfg: PadicPrecisionConfig = DEFAULT) -> PadicNumber:
    """alpha in Z_p^x with mu(1 + p^kappa x) = psi_p(alpha log(1 + p^kappa x) / p^n).

    n = a(mu).  alpha is only determined modulo p^{n - kappa}; the returned
    representative is reduced to that modulus.
    """
    p = mu.prime
    n = mu.conductor_exponent
    if n == 0:
        raise ValueError("alpha is undefined for the trivial character")
    if not 1 <= kappa <= n - 1:
        raise ValueError("need 1 <= kappa <= a(mu) - 1")
    u = 1 + p ** kappa
    r = mu.root(u)
    # mu(u) = e(j / p^{n-kappa})
    order = p ** (n - kappa)
    j = r.exponent * order
    if j % r.order:
        raise ArithmeticError("unexpected order of mu on 1 + p^kappa")
    j //= r.order
    lg = padic_log(PadicNumber.from_rational(u, p, cfg), cfg)
    w = lg.unit * p ** (lg.valuation - kappa)   # log(u) = p^kappa * w
    alpha = (-j * pow(w, -1, order)) % order
    return PadicNumber.from_rational(alpha, p, cfg)
