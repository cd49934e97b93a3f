"""Fixed-precision arithmetic in Q_p for odd primes p.

Elements are stored as p^v * u with u a unit known modulo p^N (relative
precision N).  Zero is the only element with infinite valuation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

INF = math.inf

Rational = Union[int, Fraction]


class PrecisionError(ArithmeticError):
    """Raised when an operation would fall below the configured precision."""


class NotASquareError(ValueError):
    """Raised by sqrt_unit when the input is not a square unit."""


@dataclass(frozen=True)
class PadicPrecisionConfig:
    working_precision: int = 24
    minimum_precision: int = 4

    def __post_init__(self):
        if self.working_precision < 1:
            raise ValueError("working precision must be at least 1")

    def check_conductor(self, largest_exponent: int) -> None:
        need = 2 * largest_exponent + 4
        if self.working_precision < need:
            raise PrecisionError(
                f"working precision {self.working_precision} < {need} required "
                f"for conductor exponent {largest_exponent}")


DEFAULT = PadicPrecisionConfig()


def _check_prime(p: int) -> None:
    if p == 2:
        raise ValueError("p = 2 is not supported")
    if p < 2 or any(p % d == 0 for d in range(2, math.isqrt(p) + 1)):
        raise ValueError(f"{p} is not a prime")


def valuation(x: Rational, p: int) -> Union[int, float]:
    """v_p(x) for a rational x; +inf for zero."""
    x = Fraction(x)
    if x == 0:
        return INF
    v = 0
    num, den = x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def unit_part(x: Rational, p: int) -> Fraction:
    """x / p^{v_p(x)} as a rational number."""
    x = Fraction(x)
    v = valuation(x, p)
    if v == INF:
        raise ValueError("zero has no unit part")
    return x / Fraction(p) ** v


def residue(x: Rational, p: int, k: int) -> int:
    """Reduction of a p-integral rational x modulo p^k."""
    x = Fraction(x)
    mod = p ** k
    if x.denominator % p == 0:
        raise ValueError(f"{x} is not {p}-integral")
    return x.numerator * pow(x.denominator, -1, mod) % mod


@dataclass(frozen=True)
class PadicNumber:
    prime: int
    valuation: Union[int, float]
    unit: int
    precision: int

    def __post_init__(self):
        if self.valuation == INF:
            if self.unit != 0:
                raise ValueError("zero must have unit 0")
            return
        if self.unit % self.prime == 0:
            raise ValueError("unit part divisible by p")
        if not 0 < self.unit < self.prime ** self.precision:
            object.__setattr__(self, "unit", self.unit % self.prime ** self.precision)

    # construction -------------------------------------------------------
    @classmethod
    def zero(cls, p: int, cfg: PadicPrecisionConfig = DEFAULT) -> "PadicNumber":
        return cls(p, INF, 0, cfg.working_precision)

    @classmethod
    def from_rational(cls, x: Rational, p: int,
                      cfg: PadicPrecisionConfig = DEFAULT) -> "PadicNumber":
        _check_prime(p)
        N = cfg.working_precision
        v = valuation(x, p)
        if v == INF:
            return cls.zero(p, cfg)
        return cls(p, v, residue(unit_part(x, p), p, N), N)

    @property
    def is_zero(self) -> bool:
        return self.valuation == INF

    def __repr__(self):
        if self.is_zero:
            return f"PadicNumber(0, p={self.prime})"
        return f"PadicNumber({self.prime}^{self.valuation}*{self.unit}, N={self.precision})"

    def abs(self) -> float:
        return 0.0 if self.is_zero else float(self.prime) ** (-self.valuation)

    def to_json(self) -> dict:
        return {"p": self.prime,
                "val": "inf" if self.is_zero else int(self.valuation),
                "unit": str(self.unit),
                "prec": self.precision}

    @classmethod
    def from_json(cls, d: dict) -> "PadicNumber":
        val = INF if d["val"] == "inf" else int(d["val"])
        return cls(int(d["p"]), val, int(d["unit"]), int(d["prec"]))

    # residues -----------------------------------------------------------
    def mod(self, k: int) -> int:
        """Reduction modulo p^k of an element of Z_p."""
        if self.is_zero or self.valuation >= k:
            return 0
        if self.valuation < 0:
            raise ValueError("not in Z_p")
        if k - self.valuation > self.precision:
            raise PrecisionError(f"need {k - self.valuation} digits, have {self.precision}")
        return self.prime ** self.valuation * self.unit % self.prime ** k

    # arithmetic ---------------------------------------------------------
    def _coerce(self, other) -> "PadicNumber":
        if isinstance(other, PadicNumber):
            if other.prime != self.prime:
                raise ValueError("mixing primes")
            return other
        return PadicNumber.from_rational(
            other, self.prime, PadicPrecisionConfig(self.precision))

    def __mul__(self, other) -> "PadicNumber":
        o = self._coerce(other)
        if self.is_zero or o.is_zero:
            return PadicNumber(self.prime, INF, 0, min(self.precision, o.precision))
        N = min(self.precision, o.precision)
        return PadicNumber(self.prime, self.valuation + o.valuation,
                           self.unit * o.unit % self.prime ** N, N)

    __rmul__ = __mul__

    def __neg__(self) -> "PadicNumber":
        if self.is_zero:
            return self
        return PadicNumber(self.prime, self.valuation,
                           -self.unit % self.prime ** self.precision, self.precision)

    def __add__(self, other) -> "PadicNumber":
        o = self._coerce(other)
        if self.is_zero:
            return o
        if o.is_zero:
            return self
        p = self.prime
        x, y = (self, o) if self.valuation <= o.valuation else (o, self)
        shift = y.valuation - x.valuation
        # absolute precision of the sum is min over summands
        absprec = min(x.valuation + x.precision, y.valuation + y.precision)
        rel = absprec - x.valuation
        total = (x.unit + p ** shift * y.unit) % p ** rel
        if total == 0:
            return PadicNumber(p, INF, 0, rel)
        k = 0
        while total % p == 0:
            total //= p
            k += 1
        N = rel - k
        if N < DEFAULT.minimum_precision and N < min(x.precision, y.precision):
            raise PrecisionError(f"cancellation left {N} significant digits")
        return PadicNumber(p, x.valuation + k, total % p ** N, N)

    __radd__ = __add__

    def __sub__(self, other) -> "PadicNumber":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "PadicNumber":
        return self._coerce(other) + (-self)

    def inverse(self) -> "PadicNumber":
        if self.is_zero:
            raise ZeroDivisionError("p-adic zero")
        mod = self.prime ** self.precision
        return PadicNumber(self.prime, -self.valuation, pow(self.unit, -1, mod), self.precision)

    def __truediv__(self, other) -> "PadicNumber":
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other) -> "PadicNumber":
        return self._coerce(other) * self.inverse()

    def __eq__(self, other) -> bool:
        if not isinstance(other, PadicNumber):
            try:
                other = self._coerce(other)
            except (ValueError, TypeError):
                return NotImplemented
        if self.prime != other.prime:
            return False
        if self.is_zero or other.is_zero:
            return self.is_zero and other.is_zero
        N = min(self.precision, other.precision)
        return (self.valuation == other.valuation
                and (self.unit - other.unit) % self.prime ** N == 0)

    def __hash__(self):
        return hash((self.prime, self.valuation))


def padic_log(u: PadicNumber, cfg: PadicPrecisionConfig = DEFAULT) -> PadicNumber:
    """p-adic logarithm of u in 1 + pZ_p via the Taylor series, N relative digits."""
    p = u.prime
    _check_prime(p)
    if u.is_zero or u.valuation != 0 or u.unit % p != 1:
        raise ValueError("padic_log needs u in 1 + pZ_p")
    N = cfg.working_precision
    if u.precision < N:
        raise PrecisionError("input precision below working precision")
    x = u.unit - 1
    if x == 0:
        return PadicNumber.zero(p, cfg)
    vx = valuation(x, p)
    target = N + vx  # for odd p the log has valuation v(u - 1)
    total = Fraction(0)
    k = 1
    # stop once every later term x^k/k lies in p^target Z_p
    while k * vx - math.log(k, p) < target:
        total += Fraction((-1) ** (k + 1) * x ** k, k)
        k += 1
    r = residue(total, p, target)
    if valuation(r, p) != vx:
        raise PrecisionError("log lost its leading digit at working precision")
    return PadicNumber(p, vx, (r // p ** vx) % p ** N, N)


def padic_exp(x: PadicNumber, cfg: PadicPrecisionConfig = DEFAULT) -> PadicNumber:
    """Exponential series on pZ_p; only used to invert padic_log in tests."""
    p = x.prime
    N = cfg.working_precision
    if x.is_zero:
        return PadicNumber.from_rational(1, p, cfg)
    if x.valuation < 1:
        raise ValueError("exp converges only on pZ_p for odd p")
    xi = p ** x.valuation * x.unit
    total = Fraction(0)
    term = Fraction(1)
    k = 0
    # v(x^k/k!) >= k(v - 1/(p-1))
    while k * (x.valuation - 1 / (p - 1)) < N + 1:
        total += term
        k += 1
        term = term * xi / k
    return PadicNumber(p, 0, residue(total, p, N), N)


def legendre(x: int, p: int) -> int:
    x %= p
    if x == 0:
        return 0
    return 1 if pow(x, (p - 1) // 2, p) == 1 else -1


def sqrt_unit(x: PadicNumber, cfg: PadicPrecisionConfig = DEFAULT) -> PadicNumber:
    """Hensel square root of a unit, normalized so the root is in [1, (p-1)/2] mod p."""
    p = x.prime
    _check_prime(p)
    if x.is_zero or x.valuation != 0:
        raise ValueError("sqrt_unit needs a unit")
    N = min(cfg.working_precision, x.precision)
    a = x.unit % p ** N
    if legendre(a, p) != 1:
        raise NotASquareError(f"{a} is not a square modulo {p}")
    r = next(r for r in range(1, (p - 1) // 2 + 1) if (r * r - a) % p == 0)
    k = 1
    while k < N:
        k = min(2 * k, N)
        mod = p ** k
        r = (r - (r * r - a) * pow(2 * r, -1, mod)) % mod
    return PadicNumber(p, 0, r, N)
