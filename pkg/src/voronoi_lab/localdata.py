"""Irreducible admissible representations of GL2(Q_p), p odd, by their
defining data, with L- and epsilon factors, the c-constant tables for
newvector values at g_{t,l,v}, and the p-adic Hankel transform.

Conventions: psi_p(x) = e(-{x}_p); characters of Z_p^x are extended by
mu(p) = 1; a quasi-character is a unit character together with its value
at the uniformizer.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .characters import (MultiplicativeCharacter, additive_char, characters_upto,
                         epsilon_factor, phi)
from .mellin import UnitBruhatFunction, b_function, mellin_spectrum
from .padic import PadicNumber, residue, unit_part, valuation

CharLike = Union["QuasiCharacter", MultiplicativeCharacter]


def zeta_p(p: int, s: float) -> float:
    return 1.0 / (1.0 - p ** (-s))


def complete_homogeneous(params: Sequence[complex], m: int) -> complex:
    """h_m(params): the p^m coefficient of prod (1 - b X)^{-1}."""
    if m < 0:
        return 0j
    if not params:
        return 1 + 0j if m == 0 else 0j
    if len(params) == 1:
        return complex(params[0]) ** m
    a, b = complex(params[0]), complex(params[1])
    out, term = 0j, b ** m
    # sum_{i} a^i b^{m-i}, written without division so a = b is fine
    for i in range(m + 1):
        out += a ** i * b ** (m - i)
    return out


@dataclass(frozen=True)
class QuasiCharacter:
    """chi(u p^k) = ram(u) * unr^k."""
    ram: MultiplicativeCharacter
    unr: complex = 1 + 0j

    @classmethod
    def unramified(cls, p: int, value: complex) -> "QuasiCharacter":
        return cls(MultiplicativeCharacter.trivial(p), complex(value))

    @classmethod
    def coerce(cls, x: CharLike) -> "QuasiCharacter":
        return x if isinstance(x, QuasiCharacter) else cls(x, 1 + 0j)

    @property
    def prime(self) -> int:
        return self.ram.prime

    @property
    def conductor(self) -> int:
        return self.ram.conductor_exponent

    @property
    def is_unramified(self) -> bool:
        return self.conductor == 0

    def __mul__(self, other: CharLike) -> "QuasiCharacter":
        o = QuasiCharacter.coerce(other)
        return QuasiCharacter(self.ram * o.ram, self.unr * o.unr)

    __rmul__ = __mul__

    def inverse(self) -> "QuasiCharacter":
        return QuasiCharacter(self.ram.inverse(), 1 / self.unr)

    def __call__(self, x) -> complex:
        p = self.prime
        if isinstance(x, PadicNumber):
            k = x.valuation
        else:
            k = valuation(x, p)
        return self.ram(x) * self.unr ** k

    def epsilon(self) -> complex:
        """epsilon(1/2, chi) for unramified psi_p."""
        return self.unr ** self.conductor * epsilon_factor(self.ram)

    def same_on_units(self, other: CharLike) -> bool:
        return self.ram == QuasiCharacter.coerce(other).ram

    def key(self) -> tuple:
        c = self.ram.canonical()
        return (c.modulus_exponent, c.log_image, round(self.unr.real, 13), round(self.unr.imag, 13))


@dataclass(frozen=True, eq=False)
class SupercuspidalData:
    """Abstract supercuspidal: conductor, central character and an epsilon oracle.

    epsilon(nu) must return eps(1/2, nu * pi0) and twist_conductor(nu) the
    exponent a(nu * pi0), for every unit character nu (extended by nu(p) = 1).
    """
    prime: int
    conductor: int
    central: QuasiCharacter
    epsilon: Callable[[MultiplicativeCharacter], complex]
    twist_conductor: Callable[[MultiplicativeCharacter], int]
    label: str = "sc"


class MissingEpsilonError(KeyError):
    pass


def depth_zero_supercuspidal(p: int, seed: int = 0) -> SupercuspidalData:
    """A synthetic conductor-p^2 supercuspidal with trivial central character.

    Twisted conductors follow a(nu pi) = max(2, 2 a(nu)); epsilon values are
    fixed pseudo-random unit complex numbers, stable across calls.  Only for
    exercising table bookkeeping; not an actual representation.
    """
    def eps(nu: MultiplicativeCharacter) -> complex:
        c = nu.canonical()
        h = (seed * 1_000_003 + c.modulus_exponent * 7919 + c.log_image * 104729) % 9973
        return cmath.exp(2j * math.pi * h / 9973)

    def cond(nu: MultiplicativeCharacter) -> int:
        return max(2, 2 * nu.conductor_exponent)

    return SupercuspidalData(p, 2, QuasiCharacter.unramified(p, 1), eps, cond,
                             label=f"depth0-sc(seed={seed})")


FAMILIES = ("unramified-ps", "ramified-ps/one", "ramified-ps/distinct",
            "ramified-ps/equal", "steinberg-twist", "supercuspidal")


@dataclass(frozen=True, eq=False)
class LocalRepresentation:
    """pi_p given by its inducing data.

    kind 'ps': chars = (chi1, chi2), pi = chi1 ⊞ chi2;
    kind 'st': chars = (chi,), pi = chi St;
    kind 'sc': sc data and a twisting quasi-character in chars = (tau,).
    """
    prime: int
    kind: str
    chars: Tuple[QuasiCharacter, ...]
    sc: Optional[SupercuspidalData] = None
    complementary: bool = False

    def __post_init__(self):
        if self.kind == "ps":
            c1, c2 = self.chars
            # put the ramified character first in the one-ramified case
            if c1.is_unramified and not c2.is_unramified:
                object.__setattr__(self, "chars", (c2, c1))
            if not self.complementary:
                for c in self.chars:
                    if abs(abs(c.unr) - 1) > 1e-9:
                        raise ValueError("non-unitary Satake parameter; set complementary=True")
        elif self.kind == "st":
            if len(self.chars) != 1:
                raise ValueError("Steinberg twist needs one character")
        elif self.kind == "sc":
            if self.sc is None:
                raise ValueError("supercuspidal needs SupercuspidalData")
            if not self.chars:
                object.__setattr__(self, "chars", (QuasiCharacter.unramified(self.prime, 1),))
        else:
            raise ValueError(f"unknown kind {self.kind}")

    # constructors --------------------------------------------------------
    @classmethod
    def unramified(cls, p: int, alpha1: complex, alpha2: complex,
                   complementary: bool = False) -> "LocalRepresentation":
        return cls(p, "ps", (QuasiCharacter.unramified(p, alpha1),
                             QuasiCharacter.unramified(p, alpha2)),
                   complementary=complementary)

    @classmethod
    def from_hecke(cls, p: int, lam: complex, omega: complex = 1) -> "LocalRepresentation":
        """Unramified rep with lambda(p) = lam and central value omega at p."""
        disc = cmath.sqrt(lam * lam - 4 * omega)
        a1, a2 = (lam + disc) / 2, (lam - disc) / 2
        comp = abs(abs(a1) - 1) > 1e-9
        return cls.unramified(p, a1, a2, complementary=comp)

    @classmethod
    def principal(cls, chi1: CharLike, chi2: CharLike, complementary=False) -> "LocalRepresentation":
        c1, c2 = QuasiCharacter.coerce(chi1), QuasiCharacter.coerce(chi2)
        return cls(c1.prime, "ps", (c1, c2), complementary=complementary)

    @classmethod
    def steinberg(cls, chi: CharLike) -> "LocalRepresentation":
        c = QuasiCharacter.coerce(chi)
        return cls(c.prime, "st", (c,))

    @classmethod
    def supercuspidal(cls, data: SupercuspidalData,
                      twist: Optional[QuasiCharacter] = None) -> "LocalRepresentation":
        t = twist or QuasiCharacter.unramified(data.prime, 1)
        return cls(data.prime, "sc", (t,), sc=data)

    # classification ------------------------------------------------------
    @property
    def family(self) -> str:
        if self.kind == "st":
            return "steinberg-twist"
        if self.kind == "sc":
            return "supercuspidal"
        c1, c2 = self.chars
        if c1.is_unramified and c2.is_unramified:
            return "unramified-ps"
        if c2.is_unramified:
            return "ramified-ps/one"
        if c1.same_on_units(c2):
            return "ramified-ps/equal"
        return "ramified-ps/distinct"

    def __repr__(self):
        parts = ", ".join(f"({c.ram.canonical().modulus_exponent},{c.ram.canonical().log_image};{c.unr:.4g})"
                          for c in self.chars)
        return f"LocalRep(p={self.prime}, {self.family}, [{parts}], a={self.conductor})"

    def cache_key(self) -> tuple:
        extra = (id(self.sc),) if self.sc is not None else ()
        return (self.prime, self.kind) + tuple(c.key() for c in self.chars) + extra

    @property
    def conductor(self) -> int:
        if self.kind == "ps":
            return self.chars[0].conductor + self.chars[1].conductor
        if self.kind == "st":
            return max(1, 2 * self.chars[0].conductor)
        tau = self.chars[0]
        return self.sc.twist_conductor(tau.ram)

    def central_character(self) -> QuasiCharacter:
        if self.kind == "ps":
            return self.chars[0] * self.chars[1]
        if self.kind == "st":
            return self.chars[0] * self.chars[0]
        tau = self.chars[0]
        return self.sc.central * tau * tau

    def twist(self, nu: CharLike) -> "LocalRepresentation":
        n = QuasiCharacter.coerce(nu)
        if self.kind == "sc":
            return LocalRepresentation(self.prime, "sc", (self.chars[0] * n,), sc=self.sc)
        return LocalRepresentation(self.prime, self.kind, tuple(c * n for c in self.chars),
                                   complementary=self.complementary)

    def contragredient(self) -> "LocalRepresentation":
        if self.kind == "sc":
            return self.twist(self.central_character().inverse())
        return LocalRepresentation(self.prime, self.kind, tuple(c.inverse() for c in self.chars),
                                   complementary=self.complementary)

    def l_params(self) -> List[complex]:
        """beta_i with L(s, pi) = prod (1 - beta_i p^{-s})^{-1}."""
        p = self.prime
        if self.kind == "ps":
            return [c.unr for c in self.chars if c.is_unramified]
        if self.kind == "st":
            c = self.chars[0]
            return [c.unr * p ** -0.5] if c.is_unramified else []
        return []

    def satake(self) -> List[complex]:
        """alpha_i used in the c-constant bound: chi_i(p) for principal series, 1 otherwise."""
        if self.kind == "ps":
            return [c.unr for c in self.chars]
        return [1 + 0j, 1 + 0j]

    def local_L(self, s: complex) -> complex:
        out = 1 + 0j
        for b in self.l_params():
            d = 1 - b * self.prime ** (-s)
            if abs(d) < 1e-14:
                raise ZeroDivisionError("pole of the local L-factor")
            out /= d
        return out

    def epsilon(self) -> complex:
        """epsilon(1/2, pi) for unramified psi_p."""
        if self.kind == "ps":
            return self.chars[0].epsilon() * self.chars[1].epsilon()
        if self.kind == "st":
            c = self.chars[0]
            if c.is_unramified:
                return -c.unr
            return c.epsilon() ** 2
        tau = self.chars[0]
        try:
            e0 = self.sc.epsilon(tau.ram)
        except KeyError as exc:
            raise MissingEpsilonError(str(exc)) from exc
        return tau.unr ** self.conductor * e0

    def local_lambda(self, m: int) -> complex:
        """lambda_pi(p^m): Dirichlet coefficients of L(s, pi)."""
        return complete_homogeneous(self.l_params(), m)


def local_lambda(rep: LocalRepresentation, m: int) -> complex:
    return rep.local_lambda(m)


def local_L(rep: LocalRepresentation, s: complex) -> complex:
    return rep.local_L(s)


def b_unramified_display(rep: LocalRepresentation, v: int) -> complex:
    """Closed form of B_{pi,1/2}(y), v = v_p(y), for unramified pi~ (four cases)."""
    if rep.family != "unramified-ps":
        raise ValueError("closed form only for unramified representations")
    p = rep.prime
    rt = rep.contragredient()
    w = rep.central_character().unr
    lam1 = rep.local_lambda(1)

    def lt(k: int) -> complex:
        return rt.local_lambda(k) if k >= 0 else 0j

    if v <= 0:
        return p ** (v / 2) * (lt(-v) - lam1 * lt(1 - v) / p + w * lt(2 - v) / p ** 2)
    if v == 1:
        return p ** -0.5 * (w * lt(1) / p - lam1)
    if v == 2:
        return w / p
    return 0j


# c-constants -----------------------------------------------------------

@dataclass(frozen=True)
class CConstant:
    value: complex
    family: str
    l: int
    t: int
    mu: Tuple[int, int]
    row: str


class NotAddressableError(ValueError):
    """The table has a '-' (structurally absent) entry here."""


def delta_index(rep: LocalRepresentation, mu: MultiplicativeCharacter, l: int = 0) -> int:
    """delta_{mu pi} as listed per family."""
    fam = rep.family
    if fam in ("supercuspidal", "unramified-ps"):
        return 0
    if fam == "steinberg-twist":
        return 1 if mu == rep.chars[0].ram.inverse() else 0
    if fam == "ramified-ps/distinct":
        return 1 if any(mu == c.ram.inverse() for c in rep.chars) else 0
    if fam == "ramified-ps/equal":
        return 2 if mu == rep.chars[0].ram.inverse() else 0
    # one ramified character
    if mu.is_trivial:
        return l
    omega = rep.central_character().ram
    return 1 if mu == omega.inverse() else 0


TABLE_VARIANTS = ("table", "corrected")


def c_constant(rep: LocalRepresentation, l: int, t: int,
               mu: MultiplicativeCharacter, variant: str = "table") -> CConstant:
    """c_p(pi, l, t, mu), dispatched by family and row exactly as tabulated.

    variant="corrected" replaces the equal-restriction entry for mu = chi^{-1},
    t >= 0 by eps(mu) (lambda(p^t)/lambda(p^{t+2}) - 1/p) / zeta_p(1), which is
    what the local functional equation gives; every other entry is unchanged.
    """
    if variant not in TABLE_VARIANTS:
        raise ValueError(f"variant must be one of {TABLE_VARIANTS}")
    p = rep.prime
    fam = rep.family
    if mu.conductor_exponent > l:
        raise NotAddressableError("mu is not in the level-l character group")
    if l == 0 and not mu.is_trivial:
        raise NotAddressableError("row l=0 only has mu = 1")
    if fam == "unramified-ps":
        raise NotAddressableError("no table for unramified representations")
    rep_t = rep.contragredient()
    z1 = zeta_p(p, 1)
    trivial = mu.is_trivial
    row = "l=0" if l == 0 else ("l=1" if l == 1 else "l>1")
    key = (mu.canonical().modulus_exponent, mu.canonical().log_image)

    def eps_mu() -> complex:
        return epsilon_factor(mu)

    def eps_twist() -> complex:
        return rep_t.twist(mu.inverse()).epsilon()

    def out(v, tag):
        return CConstant(complex(v), fam, l, t, key, f"{row}:{tag}")

    if l == 0:
        return out(rep_t.epsilon() / z1, "mu=1")

    if fam == "supercuspidal":
        if trivial:
            return out(-p ** -0.5 * rep_t.epsilon() if l == 1 else 0.0, "mu=1")
        return out(eps_mu() * eps_twist(), "generic")

    if fam == "steinberg-twist":
        chi = rep.chars[0]
        if trivial:
            return out(-rep_t.epsilon() * p ** -0.5 if l == 1 else 0.0, "mu=1")
        if mu == chi.ram.inverse():
            if t <= -2:
                return out(eps_mu() * p ** -1.5, "mu=chi^-1,t<=-2")
            return out(-eps_mu() * p ** 0.5 / zeta_p(p, 2), "mu=chi^-1,t>-2")
        return out(eps_twist() * eps_mu(), "generic")

    if fam == "ramified-ps/distinct":
        if trivial:
            return out(-rep_t.epsilon() * p ** -0.5 if l == 1 else 0.0, "mu=1")
        for chi in rep.chars:
            if mu == chi.ram.inverse():
                a_mp = rep.twist(mu).conductor
                if t <= -a_mp - 1:
                    return out(-eps_twist() * eps_mu() / chi.unr / p, "mu=chi_i^-1,t<=-a-1")
                return out(eps_twist() * eps_mu() / chi.unr / z1, "mu=chi_i^-1,t>-a-1")
        return out(eps_twist() * eps_mu(), "generic")

    if fam == "ramified-ps/equal":
        if trivial:
            return out(-rep_t.epsilon() * p ** -0.5 if l == 1 else 0.0, "mu=1")
        if mu == rep.chars[0].ram.inverse():
            if t <= -2:
                return out(eps_mu() * p ** -2.0, "mu=chi^-1,t<=-2")
            if t == -1:
                return out(-eps_mu() / p / z1, "mu=chi^-1,t=-1")
            tw = rep.twist(mu)
            den = tw.local_lambda(t + 2)
            if abs(den) < 1e-300:
                raise ZeroDivisionError("lambda(p^{t+2}) vanishes; ratio undefined")
            ratio = tw.local_lambda(t) / den
            if variant == "corrected":
                return out(eps_mu() * (ratio - 1 / p) / z1, "mu=chi^-1,t>=0(corrected)")
            return out(eps_mu() * ((1 + 1 / p - p ** -2.0) / z1 ** 2 * ratio - 1 / z1),
                       "mu=chi^-1,t>=0")
        return out(eps_twist() * eps_mu(), "generic")

    # ramified-ps/one
    if l == 1:
        raise NotAddressableError("the one-ramified table has no l=1 row")
    chi1, chi2 = rep.chars
    omega = rep.central_character()
    if trivial:
        return out(rep_t.epsilon() * chi1(p ** l) * p ** (-l / 2), "mu=1")
    if mu == omega.ram.inverse():
        a_mp = rep.twist(mu).conductor
        base = omega.ram(-1) * chi2.unr ** (1 - l)
        if t <= -a_mp - 1:
            return out(-base / p, "mu=omega^-1,t<=-a-1")
        return out(base, "mu=omega^-1,t>-a-1")
    return out(eps_twist() * eps_mu(), "generic")


def c_bound(rep: LocalRepresentation, t: int) -> Tuple[float, float]:
    """(relaxed bound 5 p^{1/2} max(1,t) max(1,|alpha|)^{|t|}, literal 5 p^{1/2} t max|alpha|^t)."""
    p = rep.prime
    amax = max(abs(a) for a in rep.satake())
    relaxed = 5 * math.sqrt(p) * max(1, t) * max(1.0, amax) ** abs(t)
    literal = 5 * math.sqrt(p) * t * amax ** t
    return relaxed, literal


def c_times_lambda(rep: LocalRepresentation, l: int, t: int, mu: MultiplicativeCharacter,
                   variant: str = "table") -> complex:
    """c_p(pi, l, t, mu) * lambda_{mu pi}(p^{t+a(mu pi)+delta}).

    The equal-restriction row mu = chi^{-1}, t >= 0 divides by exactly this
    lambda value, so the product is formed without the division.
    """
    p = rep.prime
    tw = rep.twist(mu)
    a = tw.conductor
    d = delta_index(rep, mu, l)
    lam = tw.local_lambda(t + a + d)
    if (rep.family == "ramified-ps/equal" and l >= 1 and t >= 0
            and mu == rep.chars[0].ram.inverse()):
        z1 = zeta_p(p, 1)
        lt = tw.local_lambda(t)
        if variant == "corrected":
            c_lam = (lt - lam / p) / z1
        else:
            c_lam = (1 + 1 / p - p ** -2.0) / z1 ** 2 * lt - lam / z1
        return epsilon_factor(mu) * c_lam
    if lam == 0:
        return 0j
    return c_constant(rep, l, t, mu, variant).value * lam


def c_expansion_coefficient(rep: LocalRepresentation, t: int, l: int,
                            mu: MultiplicativeCharacter, variant: str = "table") -> complex:
    """c_{t,l}(mu) = c_p zeta_p(1) p^{-(l+t+a(mu pi))/2} lambda_{mu pi}(p^{t+a(mu pi)+delta})."""
    p = rep.prime
    a = rep.twist(mu).conductor
    return c_times_lambda(rep, l, t, mu, variant) * zeta_p(p, 1) * p ** (-(l + t + a) / 2)


def whittaker_at(rep: LocalRepresentation, t: int, l: int, v,
                 variant: str = "table") -> complex:
    """Newvector W_pi(g_{t,l,v}), g_{t,l,v} = a(p^t) w n(v p^{-l}), v a unit."""
    p = rep.prime
    vv = v.valuation if isinstance(v, PadicNumber) else valuation(v, p)
    if vv != 0:
        raise ValueError("v must be a unit")
    if rep.family == "unramified-ps":
        if l == 0:
            return p ** (-t / 2) * rep.local_lambda(t) if t >= 0 else 0j
        # a(gamma) w n(zeta) with zeta = v p^{-l}: spherical computation
        zeta = _as_fraction(v, p) / p ** l
        gamma = 1 if t == 0 else _pow(p, t)
        k = t + 2 * l
        if k < 0:
            return 0j
        omega = rep.central_character()
        return (additive_char(p, -gamma / zeta) * omega(-zeta)
                * p ** (-k / 2) * rep.local_lambda(k))
    total = 0j
    for mu in characters_upto(p, l):
        c = c_expansion_coefficient(rep, t, l, mu, variant)
        if c != 0:
            total += c * mu(v)
    return total


def _pow(p: int, k: int):
    from fractions import Fraction
    return Fraction(p) ** k


def _as_fraction(v, p):
    from fractions import Fraction
    if isinstance(v, PadicNumber):
        return Fraction(v.unit) * Fraction(p) ** v.valuation
    return Fraction(v)


# p-adic Hankel transform ---------------------------------------------------

def hankel_terms(W: UnitBruhatFunction, rep: LocalRepresentation, kappa: Optional[int] = None):
    """Per-character data (mu, a(mu pi~), eps(1/2, mu^{-1} pi) * M[W^omega](mu^{-1}))."""
    p = rep.prime
    kappa = W.level if kappa is None else kappa
    Wk = W.at_level(max(kappa, W.level))
    omega = rep.central_character().ram
    if omega.conductor_exponent > Wk.level:
        Wk = Wk.at_level(omega.conductor_exponent)
    Wom = Wk.times(lambda x: omega.values_on_units(Wk.level)[x])
    spec = mellin_spectrum(Wom)
    rep_t = rep.contragredient()
    # FFT round-off stands in for exact zeros; drop it so the support floor is sharp
    floor = 1e-13 * float(np.abs(spec.coefficients).max(initial=0.0))
    out = []
    for mu in characters_upto(p, kappa):
        m = spec[mu.inverse()]
        if abs(m) <= floor:
            continue
        twisted = rep_t.twist(mu)
        eps = rep.twist(mu.inverse()).epsilon()
        out.append((mu, twisted, eps * m))
    return out


def p_adic_hankel(W: UnitBruhatFunction, rep: LocalRepresentation, y,
                  kappa: Optional[int] = None) -> complex:
    """W~_l(y) = |y|^{-1/2} sum_mu mu(y^{-1}) B_{mu pi~,1/2}(p^{-a(mu pi~)} y^{-1})
    eps(1/2, mu^{-1} pi) M[W^omega](mu^{-1}).

    kappa restricts the character sum to a(mu) <= kappa (default: level of W).
    """
    p = rep.prime
    if isinstance(y, float):
        raise TypeError("pass y as an int, Fraction or PadicNumber; floats lose the p-adic valuation")
    if isinstance(y, PadicNumber):
        v = y.valuation
        yinv = y.inverse()
    else:
        v = valuation(y, p)
        from fractions import Fraction
        yinv = 1 / Fraction(y)
    total = 0j
    for mu, twisted, coef in hankel_terms(W, rep, kappa):
        b = b_function(twisted, 0.5, -twisted.conductor - v)
        if b == 0:
            continue
        total += mu(yinv) * b * coef
    return total * p ** (v / 2)


class HankelTable:
    """Cached p-adic Hankel values on (valuation, unit residue mod p^kappa)."""

    def __init__(self, W: UnitBruhatFunction, rep: LocalRepresentation,
                 kappa: Optional[int] = None):
        self.W, self.rep = W, rep
        self.p = rep.prime
        self.kappa = W.level if kappa is None else kappa
        self.terms = hankel_terms(W, rep, self.kappa)
        self.mod = self.p ** self.kappa
        self._rows: Dict[int, np.ndarray] = {}

    def support_floor(self) -> int:
        """Smallest valuation at which some B factor can be nonzero."""
        lo = 0
        for mu, twisted, coef in self.terms:
            lo = min(lo, -twisted.conductor - len(twisted.l_params()))
        return lo

    def row(self, v: int) -> np.ndarray:
        r = self._rows.get(v)
        if r is None:
            r = np.zeros(self.mod, dtype=complex)
            for mu, twisted, coef in self.terms:
                b = b_function(twisted, 0.5, -twisted.conductor - v)
                if b == 0:
                    continue
                # mu(y^{-1}) = conj(mu(u)) on the unit part u
                r += np.conj(mu.values_on_units(self.kappa)) * (b * coef)
            r *= self.p ** (v / 2)
            self._rows[v] = r
        return r

    def __call__(self, v: int, u_mod: np.ndarray) -> np.ndarray:
        return self.row(v)[u_mod]


def whittaker_via_hankel(rep: LocalRepresentation, t: int, l: int, v) -> complex:
    """W_pi(g_{t,l,v}) from the local functional equation, for pi with L(s, pi) = 1.

    Such a newvector has Kirillov function 1 on Z_p^x, so n(v p^{-l}) turns it
    into y -> psi_p(v y / p^l) on units and the Hankel transform does the rest.
    Independent of the c-constant tables.
    """
    p = rep.prime
    if rep.l_params():
        raise ValueError("only for representations with L(s, pi) = 1")
    if l < 1:
        raise ValueError("need l >= 1")
    from fractions import Fraction
    vf = _as_fraction(v, p)
    kappa = max(l, rep.central_character().conductor)
    f = UnitBruhatFunction.from_callable(
        p, kappa, lambda x: additive_char(p, vf * x / Fraction(p) ** l))
    y = Fraction(p) ** t
    return p ** (-t / 2) * p_adic_hankel(f, rep.contragredient(), y, kappa=kappa)
