import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from voronoi_lab import depthlab as dl
from voronoi_lab.characters import MultiplicativeCharacter as MC
from voronoi_lab.newforms import catalog

DESK = dl.desk_instance()


def test_desk_instance_shape():
    assert (DESK.l, DESK.n_l, DESK.q, DESK.M) == (5, 8, 1, 100.0)


def test_deep_q_rejected():
    with pytest.raises(ValueError):
        dl.desk_instance(q=2)   # alpha is only known mod 5^3


def test_small_dissection_partitions_units_mod_nine():
    inst = dl.DepthInstance(3, 8, MC(3, 4, 1), 1, 0)
    cells = dl.farey_dissect(inst)
    owner = {}
    for s in cells:
        for x in range(9):
            if x % 3 and inst.in_cell(s, x):
                assert x not in owner
                owner[x] = s
    assert sorted(owner) == [x for x in range(9) if x % 3]


@pytest.mark.parametrize("q,r", [(q, r) for q in (1, 2, 3) for r in (-1, 0, 1)])
def test_grid_dissections(q, r):
    inst = dl.DepthInstance(3, 16, MC(3, 8, 1), q, r)
    cells = dl.farey_dissect(inst)
    assert all(s.k <= q - abs(r) for s in cells)
    assert len({(s.a, s.b) for s in cells}) == len(cells)


def test_check_dissection_catches_overlap_and_gaps():
    inst = dl.DepthInstance(3, 16, MC(3, 8, 1), 2, 0)
    cells = dl.farey_dissect(inst)
    with pytest.raises(dl.DissectionError):
        dl.check_dissection(inst, cells[:-1])
    with pytest.raises(dl.DissectionError):
        dl.check_dissection(inst, cells + cells[:1])


def test_weight_vanishes_off_cell_and_has_unit_modulus_on_it():
    s = dl.farey_dissect(DESK)[0]
    m = np.arange(1, 2000)
    w = dl.w_l_s(s, DESK, m)
    inside = DESK.in_cell(s, m)
    assert np.all(w[~inside] == 0)
    assert np.allclose(np.abs(w[inside]), 1)


def _period_gap(s, inst, per):
    m = np.arange(1, inst.l ** inst.n + 1)
    return np.abs(dl.w_l_s(s, inst, m, twisted=True) - dl.w_l_s(s, inst, m + per, twisted=True)).max()


@pytest.mark.parametrize("l,n_l,q,r", [(5, 8, 1, 0), (3, 12, 2, 1), (7, 8, 1, -1), (3, 16, 3, 0), (3, 14, 3, 0)])
def test_twisted_weight_is_periodic(l, n_l, q, r):
    inst = dl.desk_instance(l=l, n_l=n_l, q=q, r=r)
    for s in dl.farey_dissect(inst):
        assert _period_gap(s, inst, dl.periodicity_modulus(s, inst)) < 1e-12


def test_shallow_cells_have_period_l_to_n_minus_h():
    inst = dl.desk_instance(l=3, n_l=16, q=3, r=0)
    for s in dl.farey_dissect(inst):
        h = inst.q + abs(inst.r) + s.k
        if 2 * h <= inst.n:
            assert _period_gap(s, inst, 3 ** (inst.n - h)) < 1e-12


def test_deep_cells_lose_period_l_to_n_minus_h():
    inst = dl.desk_instance(l=3, n_l=16, q=3, r=0)
    deep = [s for s in dl.farey_dissect(inst) if 2 * (3 + s.k) > inst.n]
    assert deep
    assert all(_period_gap(s, inst, 3 ** (inst.n - 3 - s.k)) > 0.5 for s in deep)


def test_other_alpha_sign_breaks_periodicity():
    inst = dl.DepthInstance(5, 8, MC(5, 4, 1), 1, 0, alpha_sign=1)
    s = dl.farey_dissect(inst)[0]
    assert _period_gap(s, inst, dl.periodicity_modulus(s, inst)) > 1


def test_reciprocity_with_trivial_denominator():
    assert dl.reciprocity_check(3, 1, 25, 4) < 1e-15


def test_reciprocity_example():
    assert dl.reciprocity_check(3, 7, 25, 4) < 1e-12


def test_reciprocity_exhaustive():
    assert max(dl.reciprocity_check(3, 7, 25, m) for m in range(175)) < 1e-12


@given(st.integers(1, 50), st.integers(1, 50), st.integers(0, 10 ** 6))
def test_reciprocity_property(a, b, m):
    if math.gcd(a, b) != 1 or b % 5 == 0:
        return
    assert dl.reciprocity_check(a, b, 125, m) < 1e-11


def test_brute_force_vanishes_off_square_locus():
    ms = np.array([m for m in range(1, 125) if m % 5])
    for s in dl.farey_dissect(DESK):
        for c in (2, 3):
            closed = dl.l_sc_closed_form(s, DESK, c, ms, 1)
            brute = dl.l_sc_bruteforce(s, DESK, c, ms)
            off = closed == 0
            assert off.any() and np.abs(brute[off]).max() < 1e-12


def test_closed_form_desk_c2():
    ms = [m for m in range(1, 125) if m % 5]
    for s in dl.farey_dissect(DESK):
        diff = dl.l_sc_closed_form(s, DESK, 2, ms) - dl.l_sc_bruteforce(s, DESK, 2, ms)
        assert np.abs(diff).max() < 1e-10


@pytest.mark.parametrize("l,n_l", [(3, 8), (3, 10), (5, 10), (7, 8), (7, 10), (3, 12)])
def test_closed_form_grid(l, n_l):
    inst = dl.desk_instance(l=l, n_l=n_l)
    g = dl.quadratic_gauss_sign(l, inst.n)
    ms = [m for m in range(1, l ** 3) if m % l]
    for s in dl.farey_dissect(inst):
        for c in dl.c_range(s, inst):
            if dl.closed_form_valid(s, inst, c):
                diff = dl.l_sc_closed_form(s, inst, c, ms, g) - dl.l_sc_bruteforce(s, inst, c, ms)
                assert np.abs(diff).max() < 1e-10


@pytest.mark.parametrize("l,n_l", [(3, 8), (3, 10), (5, 8), (5, 10), (7, 8), (7, 10)])
def test_gamma_is_quadratic_gauss_sign(l, n_l):
    dl._GAMMA.clear()
    inst = dl.desk_instance(l=l, n_l=n_l)
    assert abs(dl.fit_gamma(inst) - dl.quadratic_gauss_sign(l, inst.n)) < 1e-12


def test_literal_modulus_bound_is_violated():
    # the stated bound 2 l^{-(n_l + 2c)/4} misses the factor l^c
    ms = [m for m in range(1, 125) if m % 5]
    worst = max(np.abs(dl.l_sc_bruteforce(s, DESK, 3, ms)).max() for s in dl.farey_dissect(DESK))
    assert worst > 2 * 5 ** (-(8 + 6) / 4)


@pytest.mark.parametrize("c", [2, 3])
def test_corrected_modulus_bound(c):
    ms = [m for m in range(1, 125) if m % 5]
    for s in dl.farey_dissect(DESK):
        if dl.closed_form_valid(s, DESK, c):
            assert np.abs(dl.l_sc_bruteforce(s, DESK, c, ms)).max() <= 2 * 5 ** ((2 * c - 8) / 4) + 1e-12


LAM = catalog("delta", 256).lambdas(201)


def test_cells_match_direct_sums():
    for s in dl.farey_dissect(DESK):
        assert abs(dl.assemble_L_s(s, DESK, LAM) - dl.cell_sum_direct(s, DESK, LAM)) < 1e-14


def test_partition_identity():
    total, direct = dl.partition_identity(DESK, LAM)
    assert abs(total - direct) < 1e-12


def test_empty_cell_contributes_nothing():
    inst = dl.desk_instance(M=1.2)   # no integer strictly inside (1.2, 2.4) except 2
    for s in dl.farey_dissect(inst):
        if not inst.in_cell(s, 2):
            assert dl.assemble_L_s(s, inst, LAM) == 0


def test_cell_as_voronoi_instance():
    from voronoi_lab.voronoi import lhs_sum, verify
    inst = dl.DepthInstance(3, 8, MC(3, 4, 1), 1, 0, M=400.0, beta=10.0)
    s = dl.farey_dissect(inst)[0]
    form = catalog("delta", 70000)
    vi = dl.voronoi_instance_for_cell(s, inst, form)
    assert abs(lhs_sum(vi) - dl.assemble_L_s(s, inst, form.lambdas(801))) < 1e-12
    rep = verify(vi)
    assert rep.rel_error < 1e-6


@pytest.mark.parametrize("l,n_l,q,r", [(5, 12, 2, 0), (3, 12, 2, 1), (3, 16, 3, 0), (3, 16, 3, 1)])
def test_closed_form_below_h_on_shallow_cells(l, n_l, q, r):
    # c may sit below q + |r| + k as long as the cell is shallow
    inst = dl.desk_instance(l=l, n_l=n_l, q=q, r=r)
    g = dl.quadratic_gauss_sign(l, inst.n)
    ms = [m for m in range(1, l ** 2) if m % l]
    seen = 0
    for s in dl.farey_dissect(inst):
        h = q + abs(r) + s.k
        for c in dl.c_range(s, inst):
            if c < h and dl.closed_form_valid(s, inst, c):
                seen += 1
                diff = dl.l_sc_closed_form(s, inst, c, ms, g) - dl.l_sc_bruteforce(s, inst, c, ms)
                assert np.abs(diff).max() < 1e-10
    assert seen


@pytest.mark.parametrize("l,n_l,q,r", [(5, 12, 2, 0), (3, 12, 2, 0), (3, 16, 3, 0), (3, 16, 3, 1)])
def test_deep_cells_overshoot_by_power_of_l(l, n_l, q, r):
    # past 2h = n the closed form is l^(h - n/2) times too large
    inst = dl.desk_instance(l=l, n_l=n_l, q=q, r=r)
    g = dl.quadratic_gauss_sign(l, inst.n)
    ms = [m for m in range(1, l ** 2) if m % l]
    seen = 0
    for s in dl.farey_dissect(inst):
        h = q + abs(r) + s.k
        if 2 * h <= inst.n:
            continue
        for c in dl.c_range(s, inst):
            assert not dl.closed_form_valid(s, inst, c)
            cf = dl.l_sc_closed_form(s, inst, c, ms, g)
            bf = dl.l_sc_bruteforce(s, inst, c, ms)
            nz = np.abs(cf) > 1e-12
            assert np.abs(bf[~nz]).max(initial=0) < 1e-12
            assert np.allclose(bf[nz] / cf[nz], float(l) ** (inst.n // 2 - h))
            seen += 1
    assert seen


def test_deep_cells_odd_depth_pick_up_a_phase():
    inst = dl.desk_instance(l=3, n_l=14, q=3, r=0)
    g = dl.quadratic_gauss_sign(3, inst.n)
    s = next(s for s in dl.farey_dissect(inst) if s.k == 1)
    ms = [1, 2, 4, 5, 7, 8]
    cf = dl.l_sc_closed_form(s, inst, 2, ms, g)
    bf = dl.l_sc_bruteforce(s, inst, 2, ms)
    nz = np.abs(cf) > 1e-12
    assert np.allclose(bf[nz] / cf[nz], -1j / np.sqrt(3))
