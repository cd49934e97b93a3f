import numpy as np
import pytest
from hypothesis import given, strategies as st

from voronoi_lab.characters import MultiplicativeCharacter as MC
from voronoi_lab.newforms import (DELTA, LEVEL11, catalog, expand_eta_quotient, normalized_lambda,
                                  twist)

TAU_1_TO_12 = [1, -24, 252, -1472, 4830, -6048, -16744, 84480, -113643, -115920, 534612, -370944]
LEVEL11_1_TO_12 = [1, -2, -1, 2, 1, 2, -2, 0, -2, -2, 1, -2]


def _naive_eta_product(factors, n_max):
    """q^offset prod (1 - q^{dn})^e by repeated multiplication, as a coefficient list."""
    series = [0] * (n_max + 1)
    offset = sum(d * e for d, e in factors) // 24
    series[offset] = 1
    for d, e in factors:
        for _ in range(e):
            for n in range(1, n_max // d + 1):
                step = d * n
                for i in range(n_max, step - 1, -1):
                    series[i] -= series[i - step]
    return series


def test_delta_first_coefficients():
    f = expand_eta_quotient(DELTA, 64)
    assert [f.integer_coefficient(n) for n in range(1, 13)] == TAU_1_TO_12


def test_level11_first_coefficients():
    f = expand_eta_quotient(LEVEL11, 64)
    assert [f.integer_coefficient(n) for n in range(1, 13)] == LEVEL11_1_TO_12


@pytest.mark.parametrize("spec,factors", [(DELTA, [(1, 24)]), (LEVEL11, [(1, 2), (11, 2)])])
def test_expansion_against_naive_product(spec, factors):
    n = 300
    naive = _naive_eta_product(factors, n)
    f = expand_eta_quotient(spec, n)
    assert [f.integer_coefficient(k) for k in range(1, n + 1)] == naive[1:]


def test_tau_multiplicative_at_six():
    f = expand_eta_quotient(DELTA, 64)
    assert f.a(2) * f.a(3) == f.a(6)


def test_lambda_one_and_deligne_bound():
    f = catalog("delta", 128)
    assert f.lam(1) == pytest.approx(1)
    primes = [p for p in range(2, 101) if all(p % d for d in range(2, p))]
    assert all(abs(f.lam(p)) <= 2 for p in primes)


def test_hecke_relation_at_four():
    f = catalog("delta", 64)
    assert f.lam(4) == pytest.approx(f.lam(2) ** 2 - 1, abs=1e-14)


@given(st.integers(2, 150), st.integers(2, 150))
def test_multiplicativity_property(m, n):
    import math
    if math.gcd(m, n) != 1 or m * n > 4096:
        return
    f = catalog("level11", 4096).expansion
    assert f.integer_coefficient(m * n) == f.integer_coefficient(m) * f.integer_coefficient(n)


def test_trivial_twist_is_identity():
    f = expand_eta_quotient(DELTA, 64)
    assert twist(f, MC.trivial(3)) is f


def test_delta_twisted_by_chi3():
    g = catalog("delta_chi3", 64)
    base = expand_eta_quotient(DELTA, 64)
    chi = MC.quadratic(3)
    assert g.level == 9
    assert g.local_rep(3).conductor == 2
    for n in range(1, 60):
        expected = 0 if n % 3 == 0 else base.integer_coefficient(n) * round(chi(n).real)
        assert g.expansion.a(n) == expected


def test_normalized_lambda_uses_weight():
    f = expand_eta_quotient(DELTA, 16)
    assert normalized_lambda(f, 2) == pytest.approx(-24 / 2 ** 5.5)


def test_level11_steinberg_component():
    f = catalog("level11", 64)
    st11 = f.local_rep(11)
    assert st11.family == "steinberg-twist" and st11.conductor == 1


def test_unknown_form():
    with pytest.raises(KeyError):
        catalog("nope")
