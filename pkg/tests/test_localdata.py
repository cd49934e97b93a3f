import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from voronoi_lab.characters import MultiplicativeCharacter as MC, epsilon_factor
from voronoi_lab.localdata import (HankelTable, LocalRepresentation, NotAddressableError,
                                   QuasiCharacter, b_unramified_display, c_bound, c_constant,
                                   c_times_lambda, delta_index, depth_zero_supercuspidal,
                                   p_adic_hankel, whittaker_at, whittaker_via_hankel, zeta_p)
from voronoi_lab.mellin import UnitBruhatFunction, b_function

Q = QuasiCharacter
U = np.exp(0.4j)


def steinberg(p, chi=None):
    return LocalRepresentation.steinberg(Q(chi, 1) if chi else Q.unramified(p, 1))


def equal_quadratic(p, u=U):
    chi = MC.quadratic(p)
    return LocalRepresentation.principal(Q(chi, u), Q(chi, 1 / u))


def distinct(p, u):
    return LocalRepresentation.principal(Q(MC(p, 1, 1), u), Q(MC(p, 1, -1), 1 / u))


def supercuspidal(p):
    return LocalRepresentation.supercuspidal(depth_zero_supercuspidal(p))


def ps_one(p=5, a=2):
    return LocalRepresentation.principal(Q(MC(p, a, 1), 1), Q.unramified(p, 1))


# lambda and L ----------------------------------------------------------------

def test_unramified_lambda_p_is_trace():
    rep = LocalRepresentation.unramified(5, U, 1 / U)
    assert rep.local_lambda(1) == pytest.approx(U + 1 / U)


def test_steinberg_lambda_p_squared():
    assert steinberg(7).local_lambda(2) == pytest.approx(1 / 7)


def test_ramified_twist_has_no_lambda():
    assert equal_quadratic(5).local_lambda(1) == 0


def test_l_factors():
    s = 0.8
    assert supercuspidal(5).local_L(s) == 1
    assert steinberg(5).local_L(s) == pytest.approx(1 / (1 - 5 ** (-s - 0.5)))
    assert LocalRepresentation.unramified(5, 1, 1).local_L(1) == pytest.approx((1 - 1 / 5) ** -2)


def test_conductors():
    assert steinberg(5).conductor == 1
    assert steinberg(5, MC.quadratic(5)).conductor == 2
    assert equal_quadratic(3).conductor == 2
    assert ps_one().conductor == 2
    assert supercuspidal(7).conductor == 2


# c table ---------------------------------------------------------------------

def test_supercuspidal_row_zero():
    rep = supercuspidal(5)
    c = c_constant(rep, 0, 3, MC.trivial(5)).value
    assert c == pytest.approx(rep.contragredient().epsilon() / zeta_p(5, 1))


def test_steinberg_deep_t_entry():
    chi = MC.quadratic(5)
    mu = chi.inverse()
    c = c_constant(steinberg(5, chi), 1, -3, mu).value
    assert c == pytest.approx(epsilon_factor(mu) * 5 ** -1.5)


def test_dash_rows_not_addressable():
    with pytest.raises(NotAddressableError):
        c_constant(ps_one(), 1, 0, MC.trivial(5))
    with pytest.raises(NotAddressableError):
        c_constant(steinberg(5), 1, 0, MC(5, 2, 1))
    with pytest.raises(NotAddressableError):
        c_constant(steinberg(5), 0, 0, MC(5, 1, 1))


def test_delta_index_per_family():
    chi = MC.quadratic(5)
    assert delta_index(steinberg(5, chi), chi.inverse()) == 1
    assert delta_index(equal_quadratic(5), chi) == 2
    assert delta_index(ps_one(), MC.trivial(5), l=3) == 3
    assert delta_index(supercuspidal(5), chi) == 0


@pytest.mark.parametrize("p", [3, 5, 7])
@pytest.mark.parametrize("t", range(-4, 5))
def test_relaxed_bound_on_grid(p, t):
    from voronoi_lab.acceptance import family_grid
    from voronoi_lab.characters import characters_upto
    for reps in family_grid(p).values():
        for rep in reps:
            relaxed, _ = c_bound(rep, t)
            for l in range(4):
                for mu in characters_upto(p, 3):
                    try:
                        c = c_constant(rep, l, t, mu).value
                    except NotAddressableError:
                        continue
                    assert abs(c) <= relaxed * (1 + 1e-12)


def test_literal_bound_fails_for_nonpositive_t():
    # the literal t * max|alpha|^t bound is <= 0 at t <= 0 while entries are not
    rep = steinberg(5)
    _, literal = c_bound(rep, 0)
    assert literal == 0
    assert abs(c_constant(rep, 1, 0, MC.trivial(5)).value) > literal


def test_product_form_avoids_zero_lambda():
    rep = equal_quadratic(5, u=1j)   # lambda_{mu pi}(p^2) = i^2 + 1 + i^-2 = -1 + 1 - 1, not 0
    mu = MC.quadratic(5)
    for t in range(0, 6):
        c_times_lambda(rep, 1, t, mu, "corrected")


# Whittaker values ------------------------------------------------------------

def test_diagonal_unramified_value():
    rep = LocalRepresentation.from_hecke(5, 0.6)
    assert whittaker_at(rep, 1, 0, 1) == pytest.approx(rep.local_lambda(1) * 5 ** -0.5)
    assert whittaker_at(rep, -1, 0, 1) == 0


def _oracle_gap(rep, variant="table"):
    gap = 0.0
    for l in range(1, rep.conductor):
        for t in range(-6, 3):
            for v in (1, 2, rep.prime + 1):
                gap = max(gap, abs(whittaker_at(rep, t, l, v, variant) - whittaker_via_hankel(rep, t, l, v)))
    return gap


@pytest.mark.parametrize("p", [3, 5, 7])
@pytest.mark.parametrize("make", [lambda p: steinberg(p, MC.quadratic(p)), supercuspidal],
                         ids=["quadratic-steinberg", "supercuspidal"])
def test_tables_match_hankel_oracle(p, make):
    assert _oracle_gap(make(p)) < 1e-12


@pytest.mark.parametrize("p", [5, 7])   # at p = 3 the two characters coincide
@pytest.mark.parametrize("u", [1, -1])
def test_distinct_row_matches_oracle_for_real_satake(p, u):
    assert distinct(p, u).family == "ramified-ps/distinct"
    assert _oracle_gap(distinct(p, u)) < 1e-12


@pytest.mark.parametrize("p", [3, 5, 7])
def test_equal_row_corrected_entry_matches_oracle(p):
    assert _oracle_gap(equal_quadratic(p), "corrected") < 1e-12


@pytest.mark.parametrize("p", [3, 5, 7])
def test_equal_row_literal_entry_disagrees(p):
    # documented: the printed t >= 0 entry of the equal-restriction row is off by O(1)
    assert _oracle_gap(equal_quadratic(p), "table") > 0.5


def test_distinct_row_with_complex_satake_disagrees_in_phase_only():
    # documented divergence: phase u^{2(t+1)} on the chi_i^{-1} entries
    rep = distinct(5, U)
    gap = _oracle_gap(rep)
    assert gap > 0.1
    for t in (-2, 0, 1):
        a, b = whittaker_at(rep, t, 1, 2), whittaker_via_hankel(rep, t, 1, 2)
        assert abs(abs(a) - abs(b)) < 1e-12 or abs(a - b) > 1e-3


# p-adic Hankel transform -------------------------------------------------------

def _w_of_level(rep, kappa, seed):
    rng = np.random.default_rng(seed)
    om = rep.central_character().ram
    lev = max(kappa, om.conductor_exponent)
    Wom = UnitBruhatFunction.random(rep.prime, kappa, rng).at_level(lev)
    return Wom.times(lambda x: np.conj(om.values_on_units(lev))[x])


FAMILY_REPS = {
    "unramified": LocalRepresentation.from_hecke(5, 0.7),
    "steinberg": steinberg(5),
    "quadratic-steinberg": steinberg(5, MC.quadratic(5)),
    "ps-one": ps_one(),
    "ps-distinct": distinct(5, U),
    "ps-equal": equal_quadratic(5),
    "supercuspidal": supercuspidal(5),
}


@pytest.mark.parametrize("name", sorted(FAMILY_REPS))
@pytest.mark.parametrize("kappa", [1, 2, 3])
def test_support_floor_is_sharp(name, kappa):
    rep = FAMILY_REPS[name]
    T = HankelTable(_w_of_level(rep, kappa, kappa), rep)
    floor = T.support_floor()
    for v in range(floor - 4, floor):
        assert np.all(T.row(v) == 0)


@pytest.mark.parametrize("name", sorted(set(FAMILY_REPS) - {"ps-one"}))
@pytest.mark.parametrize("kappa", [1, 2, 3])
def test_literal_support_bound_where_it_holds(name, kappa):
    rep = FAMILY_REPS[name]
    T = HankelTable(_w_of_level(rep, kappa, 10 + kappa), rep)
    bound = min(-2 * kappa, -rep.conductor)
    for v in range(bound - 4, bound):
        assert np.all(T.row(v) == 0)


def test_literal_support_bound_counterexample():
    # one ramified character of conductor 2, kappa = 1: nonzero one step below the stated support
    rep = ps_one()
    T = HankelTable(_w_of_level(rep, 1, 0), rep)
    assert min(-2, -rep.conductor) == -2
    assert np.abs(T.row(-3)).max() > 0.05
    assert T.support_floor() == -3


@given(st.sampled_from(sorted(FAMILY_REPS)), st.integers(1, 2), st.integers(0, 2 ** 31))
def test_restricted_mu_sum(name, kappa, seed):
    rep = FAMILY_REPS[name]
    W = _w_of_level(rep, kappa, seed)
    small = HankelTable(W, rep, kappa=kappa)
    big = HankelTable(W, rep, kappa=W.level + 1)
    lift = np.arange(big.mod) % small.mod
    for v in range(small.support_floor() - 1, 3):
        assert np.abs(small.row(v)[lift] - big.row(v)).max() < 1e-12


def test_unramified_indicator_by_hand():
    rep = LocalRepresentation.from_hecke(7, -0.9)
    W = UnitBruhatFunction.unit_indicator(7, 1)
    # only mu = 1 survives; W~(y) = |y|^{-1/2} B_{pi~}(y^{-1}) eps(pi)
    for v in range(-4, 3):
        expected = 7 ** (v / 2) * b_unramified_display(rep.contragredient(), -v) * rep.epsilon()
        assert abs(p_adic_hankel(W, rep, Fraction(7) ** v) - expected) < 1e-12


@given(st.integers(0, 2 ** 31))
def test_hankel_is_linear(seed):
    rep = FAMILY_REPS["ps-equal"]
    A, B = _w_of_level(rep, 1, seed), _w_of_level(rep, 1, seed + 1)
    TA, TB, TS = HankelTable(A, rep), HankelTable(B, rep), HankelTable(A + B, rep)
    for v in (-3, -2, 0):
        assert np.abs(TA.row(v) + TB.row(v) - TS.row(v)).max() < 1e-12


def test_float_argument_rejected():
    with pytest.raises(TypeError):
        p_adic_hankel(UnitBruhatFunction.unit_indicator(5, 1), supercuspidal(5), 0.04)
