"""Depth-aspect constructions: l-adic Farey dissection of Z_l^x, the cell
weights W_l(s; m), and the l-adic oscillatory sums L_{s,c}.

Everything here is exact finite arithmetic on residues modulo powers of l
apart from the final complex exponentials.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .characters import (MultiplicativeCharacter, alpha_of_char, e, epsilon_factor,
                         primitive_characters)
from .hankel import SmoothWindow
from .mellin import UnitBruhatFunction, mellin_spectrum
from .padic import DEFAULT, PadicNumber, PadicPrecisionConfig, legendre, sqrt_unit


class DissectionError(RuntimeError):
    pass


@dataclass(frozen=True, order=True)
class FareyCell:
    """Z_l^x[a, b, k] = {m : b alpha / m - a in l^{q+|r|+k} Z_l}."""
    k: int
    a: int
    b: int


@dataclass(frozen=True)
class DepthInstance:
    """l, n_l = 2n with chi of conductor l^n, dissection parameters q and r, window F on [M, 2M].

    alpha_sign picks the normalization of alpha: +1 is the logarithm
    convention chi(1 + x) = psi_l(alpha x / l^n) for small x, -1 its negative.
    The cell weights are periodic (the property the dissection is built for)
    only with alpha_sign = -1, which is the default.
    """
    l: int
    n_l: int
    chi: MultiplicativeCharacter
    q: int
    r: int = 0
    M: float = 100.0
    beta: float = 1.0
    alpha_sign: int = -1
    cfg: PadicPrecisionConfig = DEFAULT

    def __post_init__(self):
        if self.n_l % 2:
            raise ValueError("n_l must be even")
        if self.chi.prime != self.l or self.chi.conductor_exponent != self.n_l // 2:
            raise ValueError("chi must have conductor exponent n_l / 2")
        if self.q < 1 or abs(self.r) > self.q:
            raise ValueError("need q >= 1 and |r| <= q")
        if 2 * self.q > self.n - 1:
            raise ValueError("alpha is only known modulo l^{n-1}; need 2q <= n - 1")
        if self.alpha_sign not in (1, -1):
            raise ValueError("alpha_sign is +1 or -1")

    @property
    def n(self) -> int:
        return self.n_l // 2

    @property
    def r_plus(self) -> int:
        return max(self.r, 0)

    @property
    def r_minus(self) -> int:
        return max(-self.r, 0)

    @property
    def depth(self) -> int:
        """Residues are compared modulo l^{q+|r|+k_max} = l^{2q}."""
        return 2 * self.q

    @cached_property
    def alpha(self) -> int:
        """alpha modulo l^{n-1} as an integer."""
        al = alpha_of_char(self.chi, 1, self.cfg)
        mod = self.l ** (self.n - 1)
        return self.alpha_sign * al.unit % mod

    def cell_modulus(self, s: FareyCell) -> int:
        return self.l ** (self.q + abs(self.r) + s.k)

    def cell_center(self, s: FareyCell) -> int:
        """m0 with Z_l^x[a,b,k] = m0 + l^{q+|r|+k} Z_l."""
        mod = self.cell_modulus(s)
        return self.alpha * s.b * pow(s.a, -1, mod) % mod

    def in_cell(self, s: FareyCell, m) -> np.ndarray:
        mod = self.cell_modulus(s)
        return np.mod(np.asarray(m), mod) == self.cell_center(s)

    def window(self) -> SmoothWindow:
        return SmoothWindow(self.M, 2 * self.M, self.beta)


def desk_instance(l: int = 5, n_l: int = 8, q: int = 1, r: int = 0, M: float = 100.0,
                  log_image: int = 1) -> DepthInstance:
    chi = MultiplicativeCharacter(l, n_l // 2, log_image)
    return DepthInstance(l, n_l, chi, q, r, M)


# Farey dissection ------------------------------------------------------------

def admissible_cells(inst: DepthInstance) -> List[FareyCell]:
    """All (a, b, k) in S with k <= q - |r|, by increasing k then |a| + b."""
    l = inst.l
    out = []
    for k in range(inst.q - abs(inst.r) + 1):
        B = l ** (k + 2 * inst.r_minus)
        A = l ** (k + 2 * inst.r_plus)
        for b in range(1, B + 1):
            if b % l == 0:
                continue
            for a in range(-A, A + 1):
                if a == 0 or a % l == 0 or math.gcd(a, b) != 1:
                    continue
                out.append(FareyCell(k, a, b))
    out.sort(key=lambda s: (s.k, abs(s.a) + s.b, s.b, s.a))
    return out


def _cell_residues(inst: DepthInstance, s: FareyCell) -> np.ndarray:
    mod = inst.cell_modulus(s)
    big = inst.l ** inst.depth
    return np.arange(inst.cell_center(s), big, mod)


def farey_dissect(inst: DepthInstance) -> List[FareyCell]:
    """Greedy S^0: accept a cell when it is disjoint from every accepted one,
    stop once all unit residues mod l^{2q} are covered."""
    l = inst.l
    big = l ** inst.depth
    owner = np.full(big, -1, dtype=np.int64)
    owner[::l] = -2   # non-units
    remaining = big - big // l
    chosen: List[FareyCell] = []
    for s in admissible_cells(inst):
        res = _cell_residues(inst, s)
        if np.any(owner[res] != -1):
            continue
        owner[res] = len(chosen)
        chosen.append(s)
        remaining -= res.size
        if remaining == 0:
            break
    if remaining:
        missing = np.nonzero(owner == -1)[0][:10]
        raise DissectionError(f"greedy dissection left {remaining} residues uncovered, e.g. {missing.tolist()}")
    check_dissection(inst, chosen)
    return chosen


def check_dissection(inst: DepthInstance, cells: Sequence[FareyCell]) -> None:
    """Exact partition of the unit residues, one k per (a, b), and k <= q - |r|."""
    l = inst.l
    big = l ** inst.depth
    count = np.zeros(big, dtype=np.int64)
    ks: Dict[Tuple[int, int], int] = {}
    for s in cells:
        if s.k > inst.q - abs(inst.r):
            raise DissectionError(f"{s} has k > q - |r|")
        if ks.setdefault((s.a, s.b), s.k) != s.k:
            raise DissectionError(f"(a, b) = ({s.a}, {s.b}) occurs with two values of k")
        count[_cell_residues(inst, s)] += 1
    units = np.arange(big) % l != 0
    if np.any(count[units] != 1) or np.any(count[~units] != 0):
        bad = np.nonzero((count != 1) & units)[0][:10]
        raise DissectionError(f"not a partition of the units; offending residues {bad.tolist()}")


# cell weights ------------------------------------------------------------------

def _psi_l(num: np.ndarray, mod: int) -> np.ndarray:
    """psi_l(num / mod) for a power mod of l: e(-num/mod)."""
    return np.exp(-2j * math.pi * (np.mod(num, mod) / mod))


def w_l_s(s: FareyCell, inst: DepthInstance, m, twisted: bool = False) -> np.ndarray:
    """W_l(s; m) = 1_cell(m) chi(m)^{-1} psi_l(a b^{-1} m / l^n); with twisted=True
    the version multiplied by omega = chi^2, i.e. chi(m) in place of chi(m)^{-1}."""
    m = np.asarray(m, dtype=np.int64)
    mod = inst.l ** inst.n
    chi = inst.chi.values_on_units(inst.n)[np.mod(m, mod)]
    if not twisted:
        chi = np.conj(chi)
    ab = s.a * pow(s.b, -1, mod) % mod
    out = chi * _psi_l(ab * np.mod(m, mod), mod)
    return np.where(inst.in_cell(s, m), out, 0)


def w_l_function(s: FareyCell, inst: DepthInstance, twisted: bool = False) -> UnitBruhatFunction:
    """W_l(s; .) as a function constant modulo l^n."""
    mod = inst.l ** inst.n
    return UnitBruhatFunction(inst.l, inst.n, w_l_s(s, inst, np.arange(mod), twisted))


def periodicity_modulus(s: FareyCell, inst: DepthInstance) -> int:
    """A period in m of the twisted cell weight: l^max(n - h, h) with h = q + |r| + k.

    For 2h <= n this is l^(n - h). Deeper cells need the larger exponent."""
    h = inst.q + abs(inst.r) + s.k
    return inst.l ** max(inst.n - h, h)


def reciprocity_check(a: int, b: int, h_mod: int, m: int) -> float:
    """|e(a b^{-1} m / L) - e(-a L^{-1} m / b) e(a m / (b L))| with L = h_mod,
    inverses taken modulo L and b respectively."""
    if math.gcd(a, b) != 1 or math.gcd(b, h_mod) != 1:
        raise ValueError("need (a, b) = (b, L) = 1")
    lhs = e(Fraction(a * pow(b, -1, h_mod) * m % h_mod, h_mod))
    inv = pow(h_mod, -1, b) if b > 1 else 0
    rhs = e(-Fraction(a * inv * m % b, b)) * e(Fraction(a * m, b * h_mod) % 1)
    return abs(lhs - rhs)


# L_{s,c} -----------------------------------------------------------------------

def l_sc_bruteforce(s: FareyCell, inst: DepthInstance, c: int, m) -> np.ndarray:
    """sum over primitive mu mod l^c of eps(1/2, mu)^2 mu(m b^{-2}) M[W_l^omega(s; .)](mu)."""
    l, n = inst.l, inst.n
    m = np.atleast_1d(np.asarray(m, dtype=np.int64))
    spec = mellin_spectrum(w_l_function(s, inst, twisted=True))
    mod_c = l ** c
    binv2 = pow(s.b * s.b, -1, mod_c)
    out = np.zeros(m.shape, dtype=complex)
    for mu in primitive_characters(l, c):
        coef = spec[mu]
        if coef == 0:
            continue
        vals = mu.values_on_units(c)
        out += epsilon_factor(mu) ** 2 * coef * vals[np.mod(m * binv2, mod_c)]
    return out


def quadratic_gauss_sign(p: int, k: int) -> complex:
    """eps_{p^k}: 1 if p^k = 1 mod 4, i otherwise."""
    return 1 + 0j if pow(p, k, 4) == 1 else 1j


def _sqrt_mod(x: int, p: int, N: int) -> int:
    return sqrt_unit(PadicNumber(p, 0, x % p ** N, N)).unit


def l_sc_stationary(s: FareyCell, inst: DepthInstance, c: int, m: int) -> complex:
    """Phi-sum without the unit gamma: the stationary-phase evaluation of L_{s,c}(m).

    With x = m/(ab), n = n_l/2 and (.)_{1/2} a square root in Z_l^x,

        l^{(2c-n_l)/4} chi(b/a) psi_l(alpha/l^n) sum_{+-} Phi^{+-}(x),
        Phi^{+-}(x) = eps(+-(alpha x)_{1/2}, l^c) chi(alpha + x l^{2(n-c)}/2 +- l^{n-c} R)
                      psi_l(-(x l^{n-c}/2 +- R)/l^c),   R = (alpha x + x^2 l^{2(n-c)}/4)_{1/2},

    where eps(y, l^c) = (y/l)^c eps_{l^c}.  Zero unless alpha b m / a is a square unit.
    """
    l, n = inst.l, inst.n
    if m % l == 0:
        raise ValueError("m must be prime to l")
    N = n + 6
    P = l ** N
    alpha = inst.alpha
    x = m * pow(s.a * s.b, -1, P) % P
    ax = alpha * x % P
    if legendre(ax, l) != 1:
        return 0j
    r1 = _sqrt_mod(ax, l, N)
    lk = l ** (n - c)
    i2, i4 = pow(2, -1, P), pow(4, -1, P)
    R = _sqrt_mod(ax + i4 * lk * lk * x * x, l, N)
    chi = inst.chi.values_on_units(n)
    mod_n, mod_c = l ** n, l ** c
    total = 0j
    for sg in (1, -1):
        eps = legendre(sg * r1, l) ** c * quadratic_gauss_sign(l, c)
        ch = chi[(alpha + i2 * lk * lk * x + sg * lk * R) % mod_n]
        z = (i2 * lk * x + sg * R) % mod_c
        total += eps * ch * e(Fraction(z, mod_c))     # psi_l(-z/l^c) = e({z/l^c})
    pref = l ** ((2 * c - inst.n_l) / 4) * chi[s.b * pow(s.a, -1, mod_n) % mod_n]
    return pref * e(-Fraction(alpha % mod_n, mod_n)) * total


_GAMMA: Dict[Tuple[int, int], complex] = {}


def fit_gamma(inst: DepthInstance) -> complex:
    """The unit gamma for (l, parity of n_l/2), fixed by one brute-force comparison.

    Uses the first cell of the dissection with c = 2 and the first m on the
    square locus; cached so later instances of the same parity reuse it.
    """
    key = (inst.l, inst.n % 2)
    if key in _GAMMA:
        return _GAMMA[key]
    s = farey_dissect(inst)[0]
    for m in range(1, inst.l ** 2):
        if m % inst.l == 0:
            continue
        st = l_sc_stationary(s, inst, 2, m)
        if st != 0:
            g = complex(l_sc_bruteforce(s, inst, 2, m)[0] / st)
            _GAMMA[key] = g
            return g
    raise RuntimeError("no square-locus point found")


def l_sc_closed_form(s: FareyCell, inst: DepthInstance, c: int, m,
                     gamma: Optional[complex] = None) -> np.ndarray:
    """gamma * l_sc_stationary on an array of m; gamma defaults to fit_gamma."""
    g = fit_gamma(inst) if gamma is None else gamma
    m = np.atleast_1d(np.asarray(m, dtype=np.int64))
    return np.array([g * l_sc_stationary(s, inst, c, int(x)) for x in m])


def c_range(s: FareyCell, inst: DepthInstance) -> range:
    """2 <= c <= n_l/2 - q - |r| - k."""
    return range(2, inst.n - inst.q - abs(inst.r) - s.k + 1)


def closed_form_valid(s: FareyCell, inst: DepthInstance, c: int) -> bool:
    """True when the stationary-phase formula is exact for this cell and c.

    That needs 2h <= n with h = q + |r| + k. Deeper cells come out too large by
    l^(h - n/2), with an extra phase when n is odd, whatever c is."""
    return 2 * (inst.q + abs(inst.r) + s.k) <= inst.n and c in c_range(s, inst)


# L_s ------------------------------------------------------------------------

def _m_range(inst: DepthInstance) -> np.ndarray:
    lo = math.floor(inst.M) + 1
    hi = math.ceil(2 * inst.M) - 1
    return np.arange(lo, hi + 1)


def assemble_L_s(s: FareyCell, inst: DepthInstance, lam: np.ndarray) -> complex:
    """sum_m lambda_0(m) e(-a (l^n)^{-1} m / b) W_inf(m) W_l(s; m)
    with W_inf(x) = e(a x / (b l^n)) F(x / M); lam[m] = lambda_0(m)."""
    m = _m_range(inst)
    L = inst.l ** inst.n
    inv = pow(L, -1, s.b) if s.b > 1 else 0
    ph = np.exp(-2j * math.pi * (s.a * inv * m % s.b) / s.b)
    w_inf = np.exp(2j * math.pi * ((s.a * m) % (s.b * L)) / (s.b * L)) * inst.window()(m)
    return complex(np.sum(lam[m] * ph * w_inf * w_l_s(s, inst, m)))


def cell_sum_direct(s: FareyCell, inst: DepthInstance, lam: np.ndarray) -> complex:
    """sum over m in the cell of lambda_pi(m) F(m/M), lambda_pi = chi^{-1} lambda_0."""
    m = _m_range(inst)
    m = m[inst.in_cell(s, m) & (m % inst.l != 0)]
    chi = inst.chi.values_on_units(inst.n)[m % inst.l ** inst.n]
    return complex(np.sum(np.conj(chi) * lam[m] * inst.window()(m)))


def full_sum_direct(inst: DepthInstance, lam: np.ndarray) -> complex:
    """L = sum_m lambda_pi(m) F(m/M); lambda_pi vanishes on multiples of l."""
    m = _m_range(inst)
    m = m[m % inst.l != 0]
    chi = inst.chi.values_on_units(inst.n)[m % inst.l ** inst.n]
    return complex(np.sum(np.conj(chi) * lam[m] * inst.window()(m)))


def partition_identity(inst: DepthInstance, lam: np.ndarray) -> Tuple[complex, complex]:
    """(sum over the dissection of assemble_L_s, L)."""
    cells = farey_dissect(inst)
    return sum(assemble_L_s(s, inst, lam) for s in cells), full_sum_direct(inst, lam)


def voronoi_instance_for_cell(s: FareyCell, inst: DepthInstance, form, tolerance: float = 1e-6):
    """The Voronoi instance whose left side is assemble_L_s(s, inst): form pi_0,
    a/b = a (l^n)^{-1} / b, W_inf = e(a x/(b l^n)) F(x/M), W_l = W_l(s; .)."""
    from .voronoi import VoronoiInstance
    L = inst.l ** inst.n
    a = s.a * pow(L, -1, s.b) % s.b if s.b > 1 else 1
    win = SmoothWindow(inst.M, 2 * inst.M, inst.beta, frequency=s.a / (s.b * L))
    return VoronoiInstance(form, a, s.b, inst.l, win, w_l_function(s, inst), tolerance=tolerance)
