import math

import numpy as np
import pytest

from voronoi_lab.hankel import SmoothWindow
from voronoi_lab.mellin import UnitBruhatFunction
from voronoi_lab.newforms import catalog
from voronoi_lab.voronoi import (LevelSplit, VoronoiInstance, c_growth, eta_unit, guard_scan,
                                 lhs_sum, lhs_sum_oracle, rhs_sum_full, rhs_sum_rough,
                                 split_level, verify)

UNIT5 = UnitBruhatFunction.unit_indicator(5, 1)


def instance(name, b, M, n_max=70000, a=1, **kw):
    return VoronoiInstance(catalog(name, n_max), a, b, 5, SmoothWindow.dyadic(M, 10.0), UNIT5, **kw)


def test_level_split_examples():
    assert split_level(11, 1, 7) == LevelSplit(11, 1, 1, 7, 1, 1)
    s = split_level(11, 1, 77)
    assert (s.N0, s.N1, s.N2, s.b2) == (1, 1, 11, 11)
    s = split_level(9, 1, 3)
    assert (s.N1, s.b1, s.b0) == (9, 3, 1)
    assert split_level(1, 1, 7).branches() == ["unramified"]


def test_lhs_against_termwise_oracle():
    inst = instance("delta", 7, 20, n_max=100)
    assert abs(lhs_sum(inst) - lhs_sum_oracle(inst)) < 1e-14


def test_plain_sum_when_b_is_one():
    inst = VoronoiInstance(catalog("delta", 100), 0, 1, 5, SmoothWindow.dyadic(20, 1.0), UNIT5)
    m = np.arange(21, 40)
    m = m[m % 5 != 0]
    direct = np.sum(catalog("delta", 100).lambdas(40)[m] * inst.window(m.astype(float)))
    assert abs(lhs_sum(inst) - direct) < 1e-14


def test_unit_indicator_drops_multiples_of_l():
    W = UnitBruhatFunction(5, 1, np.array([7.0, 1, 1, 1, 1]))
    inst = VoronoiInstance(catalog("delta", 100), 1, 7, 5, SmoothWindow.dyadic(20, 10.0), W)
    assert lhs_sum(inst) == lhs_sum(instance("delta", 7, 20, n_max=100))


def test_eta_is_trivial_without_bad_primes():
    assert eta_unit(instance("delta", 7, 20, n_max=100)) == 1


def test_eta_level11_is_steinberg_sign():
    inst = instance("level11", 7, 20, n_max=100)
    eta = eta_unit(inst)
    assert abs(abs(eta) - 1) < 1e-12
    assert eta == pytest.approx(-1)   # eps(1/2, St) = -1 and a(11) = 1
    conj = instance("level11", 7, 20, n_max=100, a=-1)
    assert eta_unit(conj) == pytest.approx(eta)   # omega trivial, so omega(-1) = 1


def test_zero_test_function_gives_zero():
    W = UnitBruhatFunction(5, 1, np.zeros(5))
    inst = VoronoiInstance(catalog("delta", 40000), 1, 7, 5, SmoothWindow.dyadic(20, 10.0), W)
    assert lhs_sum(inst) == 0
    assert rhs_sum_rough(inst).value == 0


def test_small_instance_closes():
    rep = verify(instance("delta", 1, 30, n_max=8000))
    assert rep.passed and rep.rel_error < 1e-9


@pytest.mark.parametrize("b", [2, 4, 6])
def test_even_denominators(b):
    rep = verify(instance("delta", b, 30 if b < 6 else 20, n_max=70000))
    assert rep.passed


def test_level11_with_even_b():
    rep = verify(instance("level11", 2, 100, n_max=40000))
    assert rep.passed and rep.branches["N0"] == 11


def test_full_path_reduces_to_rough_when_n1_trivial():
    inst = instance("delta", 1, 30, n_max=8000)
    assert rhs_sum_full(inst).value == rhs_sum_rough(inst).value


def test_headline_instance():
    rep = verify(instance("delta", 7, 50))
    assert rep.rel_error < 1e-6 and rep.dual.tail < 1e-9 and rep.guard == 0


def test_doubling_m_keeps_identity():
    rep = verify(instance("delta", 7, 100, n_max=140000))
    assert rep.rel_error < 1e-6


def test_twisted_instance_with_corrected_entry():
    rep = verify(instance("delta_chi3", 3, 50, c_variant="corrected"))
    assert rep.path == "full" and rep.rel_error < 1e-6 and rep.guard == 0


def test_twisted_instance_with_literal_entry_fails():
    # the printed equal-restriction entry leaves an O(1) discrepancy
    inst = instance("delta_chi3", 3, 50, c_variant="table")
    lhs = lhs_sum(inst)
    assert abs(rhs_sum_full(inst).value - lhs) / abs(lhs) > 0.1


def test_rough_path_with_oracle_whittaker_values():
    inst = instance("delta_chi3", 3, 50, whittaker="corrected")
    rep = verify(inst, path="rough")
    assert rep.rel_error < 1e-6


def test_guard_scan_is_exactly_zero():
    for name, b in (("delta", 7), ("delta_chi3", 3), ("level11", 77)):
        n = 131072 if name == "level11" else 70000
        assert guard_scan(instance(name, b, 50, n_max=n)) == 0


def test_c_growth_within_square_root():
    rows = c_growth(instance("delta_chi3", 3, 50, c_variant="corrected"), j_max=10)
    K = max(c / math.sqrt(m1) for m1, c in rows)
    assert K < 2.0   # recorded constant: about 1.6


@pytest.mark.parametrize("pert", ["psi_sign", "epsilon_sign"])
def test_sensitivity(pert):
    rep = verify(instance("delta", 7, 50, perturb=pert))
    assert rep.rel_error > 1e-2 and not rep.passed


def test_bad_instances_rejected():
    with pytest.raises(ValueError):
        instance("delta", 10, 20, n_max=100)          # l divides b
    with pytest.raises(ValueError):
        VoronoiInstance(catalog("delta", 100), 2, 4, 5, SmoothWindow.dyadic(20), UNIT5)
    with pytest.raises(ValueError):
        instance("delta", 7, 20, n_max=100, perturb="bogus")


def test_report_json_roundtrip():
    import json
    rep = verify(instance("delta", 1, 30, n_max=8000))
    d = json.loads(json.dumps(rep.to_json()))
    assert d["passed"] is True and d["branches"]["N0"] == 1
