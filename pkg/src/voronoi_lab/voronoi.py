"""Both sides of the twisted Voronoi formula with a p-adic weight at l.

lhs_sum is the finite sum over m; rhs_sum_rough evaluates the dual side
with the N1-places handled by newvector values W(g_{t,k,v}); rhs_sum_full
expands those values in characters and regroups the dual sum by (mu, m1).
"""
from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from itertools import product
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .characters import MultiplicativeCharacter, characters_upto, e
from .hankel import SmoothWindow, hankel_batch, hankel_transform
from .localdata import (HankelTable, LocalRepresentation, QuasiCharacter,
                        NotAddressableError, c_constant, c_times_lambda, delta_index, whittaker_at, whittaker_via_hankel,
                        zeta_p)
from .mellin import UnitBruhatFunction
from .newforms import CatalogForm
from .padic import unit_part, valuation


def factorize(n: int) -> Dict[int, int]:
    out: Dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


@dataclass(frozen=True)
class LevelSplit:
    N0: int
    N1: int
    N2: int
    b0: int
    b1: int
    b2: int

    @property
    def dual_denominator(self) -> int:
        """b0^2 b2^2 b1 N1 N0."""
        return self.b0 ** 2 * self.b2 ** 2 * self.b1 * self.N1 * self.N0

    def branches(self) -> List[str]:
        out = [name for name, v in (("N0", self.N0), ("N1", self.N1), ("N2", self.N2)) if v > 1]
        return out or ["unramified"]


def split_level(N: int, a: int, b: int) -> LevelSplit:
    if math.gcd(a, b) != 1:
        raise ValueError("a/b must be in lowest terms")
    N0 = N1 = N2 = 1
    for p, n in factorize(N).items():
        k = valuation(b, p)
        if k <= 0:
            N0 *= p ** n
        elif k < n:
            N1 *= p ** n
        else:
            N2 *= p ** n
    b1 = math.gcd(b, N1)
    b2 = 1
    for p in factorize(N2):
        b2 *= p ** valuation(b, p)
    return LevelSplit(N0, N1, N2, b // (b1 * b2), b1, b2)


@dataclass(frozen=True)
class TruncationPolicy:
    """Dual sums are generated up to window_factor * y_cut, where |W~_inf| has
    dropped below y_rel of its maximum, then cut after `run` consecutive
    terms below `rel` times the largest term (terms sorted by y)."""
    run: int = 20
    rel: float = 1e-13
    y_rel: float = 1e-13
    window_factor: float = 1.5
    max_terms: int = 3_000_000


PERTURBATIONS = (None, "psi_sign", "epsilon_sign")


@dataclass
class VoronoiInstance:
    form: CatalogForm
    a: int
    b: int
    l: int
    window: SmoothWindow
    W_l: UnitBruhatFunction
    tolerance: float = 1e-6
    policy: TruncationPolicy = field(default_factory=TruncationPolicy)
    c_variant: str = "table"
    whittaker: str = "table"      # N1 values in rhs_sum_rough: "table", "corrected" or "hankel"
    perturb: Optional[str] = None

    def __post_init__(self):
        if math.gcd(self.a, self.b) != 1:
            raise ValueError("gcd(a, b) must be 1")
        if self.b % self.l == 0 or self.form.level % self.l == 0:
            raise ValueError("l must divide neither b nor the level")
        if self.W_l.prime != self.l:
            raise ValueError("W_l lives at the wrong prime")
        if self.perturb not in PERTURBATIONS:
            raise ValueError(f"perturb must be one of {PERTURBATIONS}")

    @property
    def split(self) -> LevelSplit:
        return split_level(self.form.level, self.a, self.b)

    @property
    def pi_l(self) -> LocalRepresentation:
        return self.form.local_rep(self.l)


# left side ----------------------------------------------------------------

def lhs_sum(inst: VoronoiInstance) -> complex:
    lo, hi = inst.window.support
    m = np.arange(max(1, math.floor(lo)), math.ceil(hi) + 1)
    w = inst.window(m.astype(float))
    keep = (w != 0) & (m % inst.l != 0)
    m, w = m[keep], w[keep]
    lam = inst.form.lambdas(int(m.max()) if m.size else 1)[m]
    phase = np.exp(-2j * math.pi * ((inst.a * m) % inst.b) / inst.b)
    return complex(np.sum(phase * lam * w * inst.W_l.at_integers(m)))


def lhs_sum_oracle(inst: VoronoiInstance) -> complex:
    """Term by term with exact rational phases; an independent re-summation."""
    lo, hi = inst.window.support
    total = 0j
    for m in range(max(1, math.floor(lo)), math.ceil(hi) + 1):
        if m % inst.l == 0:
            continue
        w = complex(inst.window(np.array([float(m)]))[0])
        if w == 0:
            continue
        total += e(-Fraction(inst.a * m, inst.b)) * inst.form.lam(m) * w * inst.W_l(m)
    return total


# prefactors ---------------------------------------------------------------

def _central_at(form: CatalogForm, p: int) -> QuasiCharacter:
    return form.local_rep(p).central_character()


def eta_unit(inst: VoronoiInstance, split: Optional[LevelSplit] = None) -> complex:
    """prod_{p|N0} eps(1/2, pi_p) * prod_{p | b0 N2} omega_{pi,p}(-ab)."""
    split = split or inst.split
    out = 1 + 0j
    for p in factorize(split.N0):
        out *= inst.form.local_rep(p).epsilon()
    for p in factorize(split.b0 * split.N2):
        out *= _central_at(inst.form, p)(-inst.a * inst.b)
    return out


def _phase_base(inst: VoronoiInstance, split: LevelSplit) -> Tuple[int, int]:
    """(conj(a N0 N1) mod b0 b2, b0 b2); (0, 1) encodes the empty modulus."""
    mod = split.b0 * split.b2
    if mod == 1:
        return 0, 1
    return pow(inst.a * split.N0 * split.N1, -1, mod), mod


def _l_power_mod(l: int, c: int, mod: int) -> int:
    return pow(l, c, mod) if mod > 1 else 0


# archimedean cut-off -------------------------------------------------------

def archimedean_cutoff(inst: VoronoiInstance, step: float = 1.12,
                       settle: int = 6) -> Tuple[float, float]:
    """(y_cut, max |W~_inf|): scanning y geometrically upward, the first point
    after which `settle` consecutive values stay below policy.y_rel * max."""
    arch = inst.form.arch
    y = 1e-4 / inst.window.support[1]
    peak, below, last_above = 0.0, 0, y
    while y < 1e8:
        v = max(abs(hankel_transform(inst.window, arch, y, s).value)
                for s in ((1,) if arch.kind == "holomorphic" else (1, -1)))
        peak = max(peak, v)
        if peak > 0 and v < inst.policy.y_rel * peak:
            below += 1
            if below >= settle:
                return last_above * step, peak
        else:
            below, last_above = 0, y
        y *= step
    raise RuntimeError("archimedean transform does not decay on the scanned range")


# dual-sum bookkeeping -------------------------------------------------------

@dataclass
class DualSum:
    value: complex
    terms: int
    cut_index: int
    tail: float
    max_term: float
    quadrature_error: float
    c_range: Tuple[int, int]

    def to_json(self) -> dict:
        return {"value": [repr(self.value.real), repr(self.value.imag)], "terms": self.terms,
                "cut_index": self.cut_index, "tail": repr(self.tail),
                "max_term": repr(self.max_term), "quadrature_error": repr(self.quadrature_error),
                "c_range": list(self.c_range)}


def _truncate(y: np.ndarray, terms: np.ndarray, policy: TruncationPolicy,
              prefactor: complex) -> Tuple[complex, int, float, float]:
    order = np.argsort(y, kind="stable")
    t = terms[order] * prefactor
    mags = np.abs(t)
    if t.size == 0:
        return 0j, 0, 0.0, 0.0
    peak = float(mags.max())
    small = mags < policy.rel * peak
    start = int(np.argmax(mags))
    cut = t.size
    run = 0
    for i in range(start, t.size):
        run = run + 1 if small[i] else 0
        if run >= policy.run:
            cut = i + 1
            break
    kept = t[:cut]
    tail = float(mags[cut:].sum())
    # pairwise summation keeps the result reproducible
    return complex(np.sum(kept)), cut, tail, peak


def _c_range(inst: VoronoiInstance, table: HankelTable, split: LevelSplit,
             y_max: float, m1_min: int = 1) -> Tuple[int, int]:
    D = split.dual_denominator
    lo = table.support_floor()
    hi = math.floor(math.log(y_max * D / m1_min, inst.l)) if y_max * D >= 1 else lo - 1
    return lo, max(lo - 1, hi)


def _coprime_range(n_max: int, avoid: Sequence[int]) -> np.ndarray:
    m = np.arange(1, n_max + 1)
    keep = np.ones(m.size, dtype=bool)
    for q in avoid:
        keep &= (m % q != 0)
    return m[keep]


def _hankel_table(inst: VoronoiInstance) -> HankelTable:
    tab = HankelTable(inst.W_l, inst.pi_l)
    if inst.perturb == "epsilon_sign" and tab.terms:
        # negate one epsilon: the one carried by the dominant Mellin coefficient
        i = max(range(len(tab.terms)), key=lambda j: abs(tab.terms[j][2]))
        mu, tw, coef = tab.terms[i]
        tab.terms[i] = (mu, tw, -coef)
    elif inst.perturb == "psi_sign":
        # psi_p -> conj(psi_p) conjugates every Gauss sum
        new = []
        for mu, tw, coef in tab.terms:
            eps = inst.pi_l.twist(mu.inverse()).epsilon()
            new.append((mu, tw, coef / eps * np.conj(eps) if eps != 0 else coef))
        tab.terms[:] = new
    return tab


def _lambda_for_dual(inst: VoronoiInstance, n_max: int) -> np.ndarray:
    """lambda_{pi^{N2}} on 0..n_max; equal to lambda_pi for trivial central character."""
    return inst.form.lambdas(n_max)


def _ensure_expansion(inst: VoronoiInstance, n_max: int) -> None:
    if n_max > inst.form.expansion.n_max:
        raise IndexError(f"dual sum needs lambda(n) up to {n_max}; "
                         f"form expansion holds {inst.form.expansion.n_max}")


def _n1_whittaker(inst: VoronoiInstance, rep: LocalRepresentation, t: int, k: int, v: int) -> complex:
    if inst.whittaker == "hankel":
        return whittaker_via_hankel(rep, t, k, v)
    return whittaker_at(rep, t, k, v, variant="corrected" if inst.whittaker == "corrected" else "table")


def _xi(rep_tilde: LocalRepresentation) -> QuasiCharacter:
    """Unramified xi with xi(p)^2 = omega_{pi~}(p) (principal square root)."""
    w = rep_tilde.central_character().unr
    return QuasiCharacter.unramified(rep_tilde.prime, complex(np.sqrt(complex(w))))


# right side, place by place --------------------------------------------------

def _n1_factor(inst: VoronoiInstance, split: LevelSplit, data, p: int, c: int,
               m: np.ndarray) -> np.ndarray:
    """xi_p(l^c m / (b1 N1)) * |gamma|_p^{-1/2} W_{xi^{-1} pi~_p}(g_{t,k,v/u}), gamma = l^c m / D."""
    rep_w, xi, k, vunit = data
    D = split.dual_denominator
    vD = valuation(D, p)
    vB = valuation(split.b1 * split.N1, p)
    pk = p ** k
    D_rest = D // p ** vD
    lc = Fraction(inst.l) ** c
    cache: Dict[Tuple[int, int], complex] = {}
    out = np.empty(m.size, dtype=complex)
    for i, mi in enumerate(m.tolist()):
        vm = valuation(mi, p)
        t = vm - vD
        u = lc * Fraction(mi, p ** vm) / D_rest
        # v / u reduced mod p^k
        arg = (vunit.numerator * u.denominator * pow(vunit.denominator * u.numerator, -1, pk)) % pk
        key = (t, arg)
        w = cache.get(key)
        if w is None:
            w = _n1_whittaker(inst, rep_w, t, k, arg)
            cache[key] = w
        out[i] = xi.unr ** (vm - vB) * p ** (t / 2) * w
    return out


def rhs_sum_rough(inst: VoronoiInstance, split: Optional[LevelSplit] = None,
                  y_cut: Optional[float] = None) -> DualSum:
    """Dual side with the N1 factor E evaluated from W(g_{t,k,v}) directly."""
    split = split or inst.split
    if y_cut is None:
        y_cut, _ = archimedean_cutoff(inst)
    y_max = y_cut * inst.policy.window_factor
    D = split.dual_denominator
    l = inst.l
    table = _hankel_table(inst)
    inv, mod = _phase_base(inst, split)
    psi_s = -1 if inst.perturb == "psi_sign" else 1
    lo, hi = _c_range(inst, table, split, y_max)
    n1_primes = sorted(factorize(split.N1))
    n1_data = {}
    for p in n1_primes:
        rep_t = inst.form.local_rep(p).contragredient()
        xi = _xi(rep_t)
        k = valuation(inst.b, p)
        vunit = unit_part(Fraction(inst.a, inst.b), p)
        n1_data[p] = (rep_t.twist(xi.inverse()), xi, k, vunit)
    signs = [1] if inst.form.arch.kind == "holomorphic" else [1, -1]
    ys, terms = [], []
    n_needed = 1
    qerr = 0.0
    for c in range(lo, hi + 1):
        n_max = math.floor(y_max * D / float(l) ** c)
        if n_max < 1:
            continue
        m = _coprime_range(n_max, [l])
        if m.size > inst.policy.max_terms:
            raise RuntimeError("truncation budget exceeded")
        y = (float(l) ** c) * m / D
        # N1-stripped eigenvalue argument
        m_red = m.copy()
        for p in n1_primes:
            while True:
                sel = m_red % p == 0
                if not sel.any():
                    break
                m_red[sel] //= p
        n_needed = max(n_needed, int(m_red.max()))
        _ensure_expansion(inst, int(m_red.max()))
        lam = _lambda_for_dual(inst, int(m_red.max()))[m_red]
        lr = _l_power_mod(l, c, mod)
        phase = np.exp(2j * math.pi * psi_s * ((lr * (m % mod) % mod) * inv % mod) / mod) if mod > 1 \
            else np.ones(m.size, dtype=complex)
        # l-adic Hankel: y = l^c * (m / D), unit part m/D mod l^kappa
        dinv = pow(D, -1, table.mod)
        wl = table(c, (m % table.mod) * dinv % table.mod)
        for sgn in signs:
            E = np.ones(m.size, dtype=complex)
            for p in n1_primes:
                E *= _n1_factor(inst, split, n1_data[p], p, c, sgn * m)
            winf, err = hankel_batch(inst.window, inst.form.arch, y, sgn)
            qerr = max(qerr, err)
            ph = phase if sgn > 0 else np.conj(phase)
            ys.append(y)
            terms.append(ph * lam * winf * wl * E)
    pref = eta_unit(inst, split) / (split.b0 * split.b2 * math.sqrt(split.N0))
    if not ys:
        return DualSum(0j, 0, 0, 0.0, 0.0, qerr, (lo, hi))
    Y, T = np.concatenate(ys), np.concatenate(terms)
    val, cut, tail, peak = _truncate(Y, T, inst.policy, pref)
    return DualSum(val, int(T.size), cut, tail, peak, qerr, (lo, hi))


# right side, character-expanded ------------------------------------------------

def _tuple_eval(mus: Sequence[MultiplicativeCharacter], x: Fraction) -> complex:
    out = 1 + 0j
    for mu in mus:
        out *= mu(x)
    return out


def full_coefficient(inst: VoronoiInstance, split: LevelSplit, c: int,
                     mus: Sequence[MultiplicativeCharacter], m1_exp: Dict[int, int],
                     reps: Dict[int, LocalRepresentation],
                     xis: Dict[int, QuasiCharacter]) -> Tuple[complex, int]:
    """Outer coefficient of the character-expanded dual sum for (c, mu, m1).

    Returns (mu(a b0 b2 N0 N1'/(b1 l^c)) / sqrt(b1 N1') * C * lambda_mu(m1 N1'/(b1 N1)), N1').
    """
    primes = sorted(reps)
    N1p = 1
    parts = {}
    for p, mu in zip(primes, mus):
        rep = reps[p]
        a_mp = rep.twist(mu).conductor
        d = delta_index(rep, mu, valuation(split.b1, p))
        N1p *= p ** (a_mp + d)
        parts[p] = (a_mp, d)
    C = 1 + 0j
    lam = 1 + 0j
    for p, mu in zip(primes, mus):
        rep = reps[p]
        k = valuation(split.b1, p)
        t = m1_exp.get(p, 0) - valuation(split.b1 * split.N1, p)
        a_mp, d = parts[p]
        # c_p(pi~_p, k, t, mu) * lambda_{mu pi~_p}(p^{t+a+delta}) in one step
        cl = c_times_lambda(rep, k, t, mu, inst.c_variant)
        if cl == 0:
            return 0j, N1p
        C *= cl * xis[p].unr ** (-valuation(N1p, p)) * p ** (d / 2)
        e_p = t + a_mp + d
        # the global twist chi_mu is unramified at p for the other entries
        for q, nu in zip(primes, mus):
            if q != p:
                lam *= nu(p) ** (-e_p)
    x = Fraction(inst.a * split.b0 * split.b2 * split.N0 * N1p, split.b1) / Fraction(inst.l) ** c
    return _tuple_eval(mus, x) / math.sqrt(split.b1 * N1p) * C * lam, N1p


def rhs_sum_full(inst: VoronoiInstance, split: Optional[LevelSplit] = None,
                 y_cut: Optional[float] = None) -> DualSum:
    """Dual side with the N1 places expanded over characters mu of level v_p(b1)."""
    split = split or inst.split
    if y_cut is None:
        y_cut, _ = archimedean_cutoff(inst)
    y_max = y_cut * inst.policy.window_factor
    D = split.dual_denominator
    l = inst.l
    table = _hankel_table(inst)
    inv, mod = _phase_base(inst, split)
    psi_s = -1 if inst.perturb == "psi_sign" else 1
    lo, hi = _c_range(inst, table, split, y_max)
    n1_primes = sorted(factorize(split.N1))
    reps, xis = {}, {}
    for p in n1_primes:
        rep_t = inst.form.local_rep(p).contragredient()
        xis[p] = _xi(rep_t)
        reps[p] = rep_t.twist(xis[p].inverse())
    mu_sets = [characters_upto(p, valuation(split.b1, p)) for p in n1_primes]
    mu_tuples = list(product(*mu_sets)) if n1_primes else [()]
    zeta_n1 = 1.0
    for p in n1_primes:
        zeta_n1 *= zeta_p(p, 1)
    signs = [1] if inst.form.arch.kind == "holomorphic" else [1, -1]
    dinv = pow(D, -1, table.mod)
    ys, terms = [], []
    qerr = 0.0

    def m1_choices(limit: float):
        """Exponent dicts for m1 | N1^infty with m1 <= limit."""
        out = [({}, 1)]
        for p in n1_primes:
            nxt = []
            for exps, val in out:
                j, v = 0, val
                while v <= limit:
                    e2 = dict(exps)
                    e2[p] = j
                    nxt.append((e2, v))
                    j += 1
                    v *= p
            out = nxt
        return out

    for c in range(lo, hi + 1):
        limit = y_max * D / float(l) ** c
        if limit < 1:
            continue
        for exps, m1 in m1_choices(limit):
            n_max = math.floor(limit / m1)
            if n_max < 1:
                continue
            coefs = []
            for mus in mu_tuples:
                K, _ = full_coefficient(inst, split, c, mus, exps, reps, xis)
                if K != 0:
                    coefs.append((mus, K))
            if not coefs:
                continue
            m = _coprime_range(n_max, [l] + n1_primes)
            if m.size == 0:
                continue
            _ensure_expansion(inst, int(m.max()))
            lam = _lambda_for_dual(inst, int(m.max()))[m]
            y = (float(l) ** c) * m1 * m / D
            lr = _l_power_mod(l, c, mod)
            if mod > 1:
                r = (lr * (m1 % mod) % mod) * inv % mod
                phase = np.exp(2j * math.pi * psi_s * ((r * (m % mod)) % mod) / mod)
            else:
                phase = np.ones(m.size, dtype=complex)
            for sgn in signs:
                ms = sgn * m
                wl = table(c, (m1 * ms % table.mod) * dinv % table.mod)
                mix = np.zeros(m.size, dtype=complex)
                for mus, K in coefs:
                    # lambda of the mu-twisted form at m: conj(mu(m)) lambda(m)
                    vals = np.ones(m.size, dtype=complex)
                    for p, mu in zip(n1_primes, mus):
                        if not mu.is_trivial:
                            vals *= np.conj(mu.values_on_units(mu.conductor_exponent)[ms % p ** mu.conductor_exponent])
                    mix += K * vals
                winf, err = hankel_batch(inst.window, inst.form.arch, y, sgn)
                qerr = max(qerr, err)
                ph = phase if sgn > 0 else np.conj(phase)
                ys.append(y)
                terms.append(ph * lam * winf * wl * mix)
    pref = zeta_n1 * eta_unit(inst, split) / (split.b0 * split.b2 * math.sqrt(split.N0))
    if not ys:
        return DualSum(0j, 0, 0, 0.0, 0.0, qerr, (lo, hi))
    Y, T = np.concatenate(ys), np.concatenate(terms)
    val, cut, tail, peak = _truncate(Y, T, inst.policy, pref)
    return DualSum(val, int(T.size), cut, tail, peak, qerr, (lo, hi))


# verification ----------------------------------------------------------------

def guard_scan(inst: VoronoiInstance, width: int = 2) -> float:
    """Largest |W~_l| on the `width` valuations just below the predicted support.

    Exactly 0 when the support bound used for the c-range is right.
    """
    table = _hankel_table(inst)
    lo = table.support_floor()
    return max(float(np.abs(table.row(v)).max()) for v in range(lo - width, lo))


@dataclass
class VoronoiReport:
    lhs: complex
    rhs: complex
    abs_error: float
    rel_error: float
    tolerance: float
    passed: bool
    path: str
    split: LevelSplit
    dual: DualSum
    eta: complex
    guard: float
    timing_ms: Dict[str, float]
    policy: TruncationPolicy

    @property
    def branches(self) -> Dict[str, int]:
        return {k: getattr(self.split, k) for k in ("N0", "N1", "N2", "b0", "b1", "b2")}

    def to_json(self) -> dict:
        return {
            "lhs": [repr(self.lhs.real), repr(self.lhs.imag)],
            "rhs": [repr(self.rhs.real), repr(self.rhs.imag)],
            "abs_error": repr(self.abs_error), "rel_error": repr(self.rel_error),
            "tolerance": repr(self.tolerance), "passed": self.passed, "path": self.path,
            "branches": self.branches, "eta": [repr(self.eta.real), repr(self.eta.imag)],
            "guard_scan_max": repr(self.guard),
            "truncation": self.dual.to_json(), "timing_ms": dict(self.timing_ms),
            "policy": asdict(self.policy),
        }


def verify(inst: VoronoiInstance, path: Optional[str] = None) -> VoronoiReport:
    """Evaluate both sides and compare.

    path: "rough" (only for N1 = 1), "full", or None to pick by the split.
    Passing needs rel_error <= tolerance and a truncation tail below
    tolerance * |lhs|.
    """
    split = inst.split
    if path is None:
        path = "full" if split.N1 > 1 else "rough"
    if path not in ("rough", "full"):
        raise ValueError("path must be 'rough' or 'full'")
    timing: Dict[str, float] = {}
    t0 = time.perf_counter()
    lhs = lhs_sum(inst)
    timing["lhs"] = 1e3 * (time.perf_counter() - t0)
    t0 = time.perf_counter()
    y_cut, _ = archimedean_cutoff(inst)
    timing["cutoff"] = 1e3 * (time.perf_counter() - t0)
    t0 = time.perf_counter()
    dual = (rhs_sum_full if path == "full" else rhs_sum_rough)(inst, split, y_cut)
    timing["rhs"] = 1e3 * (time.perf_counter() - t0)
    eta = eta_unit(inst, split)
    if abs(abs(eta) - 1) > 1e-10:
        raise AssertionError(f"eta has modulus {abs(eta)}")
    guard = guard_scan(inst)
    err = abs(lhs - dual.value)
    scale = abs(lhs)
    rel = err / scale if scale > 0 else err
    passed = bool(rel <= inst.tolerance and dual.tail <= inst.tolerance * max(scale, 1e-300)
                  and guard == 0.0)
    return VoronoiReport(lhs, dual.value, err, rel, inst.tolerance, passed, path, split,
                         dual, eta, guard, timing, inst.policy)


def c_growth(inst: VoronoiInstance, j_max: int = 12) -> List[Tuple[int, float]]:
    """(m1, max over mu of |C(pi_N1, mu, b1, m1)|) for m1 = p^j, one N1 prime at a time.

    C = prod c_p(xi^{-1} pi~_p, v_p(b1), v_p(m1/(b1 N1)), mu_p) xi_p^{-1}(N1') p^{delta/2}.
    Table rows that are not addressable are skipped.
    """
    split = inst.split
    out = []
    for p in sorted(factorize(split.N1)):
        rep_t = inst.form.local_rep(p).contragredient()
        xi = _xi(rep_t)
        rep = rep_t.twist(xi.inverse())
        k = valuation(split.b1, p)
        base = valuation(split.b1 * split.N1, p)
        for j in range(j_max + 1):
            best = 0.0
            for mu in characters_upto(p, k):
                d = delta_index(rep, mu, k)
                n1p = rep.twist(mu).conductor + d
                try:
                    c = c_constant(rep, k, j - base, mu, inst.c_variant).value
                except (NotAddressableError, ZeroDivisionError):
                    continue
                best = max(best, abs(c * xi.unr ** (-n1p)) * p ** (d / 2))
            out.append((p ** j, best))
    return out
