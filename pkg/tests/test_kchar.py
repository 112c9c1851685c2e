from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, strategies as st

from eisgen.exact import RatFun, ScalarQ, laurent
from eisgen.genus import weyl_symmetrize
from eisgen.kchar import (char_affine, char_affine_series, chi_projective, q_gamma, q_gamma_numeric,
                          q_gamma_residual, scissor_check)

z = RatFun.gen("z")
q = ScalarQ.q()


def test_affine_line_outer_series():
    assert char_affine_series(1, "outer", 5).as_dict() == {0: 1, -1: 1, -2: 1, -3: 1, -4: 1}


def test_affine_plane_inner_series():
    tail = char_affine_series(2, "inner", 4)
    assert tail.as_dict() == {2: 1, 3: 2, 4: 3, 5: 4}


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_expansions_resum(n):
    f = char_affine(n)
    # the two expansions have the same rational function: (1 - z^-1)^n f = 1 on both sides
    out = laurent((1 - 1 / z) ** n * f, "inf", 3)
    inn = laurent((1 - 1 / z) ** n * f, "0", 3)
    assert out.as_dict() == inn.as_dict() == {0: 1}


def serre_oracle(n, m):
    if m >= 0:
        return comb(m + n - 1, n - 1)
    if m <= -n:
        return (-1) ** (n - 1) * comb(-m - 1, n - 1)
    return 0


def test_chi_projective_examples():
    assert [chi_projective(2, m) for m in range(5)] == [1, 2, 3, 4, 5]
    assert all(chi_projective(n, 0) == 1 for n in range(1, 6))
    assert chi_projective(2, -2) == -1


def test_scissor_examples():
    r = scissor_check(1, 0)
    assert (r.lhs, r.chi, r.inner) == (1, 1, 0)
    r = scissor_check(2, 3)
    assert (r.lhs, r.chi, r.inner) == (4, 4, 0)
    r = scissor_check(3, -5)
    assert r.holds and r.inner != 0


@given(st.integers(1, 4), st.integers(-6, 6))
def test_scissor_identity(n, m):
    r = scissor_check(n, m)
    assert r.holds
    assert chi_projective(n, m) == serre_oracle(n, m)
    assert r.lhs - r.inner == serre_oracle(n, m)


@pytest.mark.parametrize("n", range(1, 5))
def test_flag_integrand_pole_free_on_circle(n):
    # symmetrized Weyl integrand for polynomial omega has no poles
    a = RatFun.gen("a")
    s = weyl_symmetrize(a ** n / (1 - a ** -2))
    assert s.is_laurent_polynomial()


def test_qgamma_low_order():
    cs = q_gamma(2)
    assert cs[0] == 1 and cs[1] == 1 / (1 - q)


def test_qgamma_residual_zero():
    assert all(c == 0 for c in q_gamma_residual(q_gamma(13)))


def test_qgamma_coefficients():
    cs = q_gamma(8)
    for d, c in enumerate(cs):
        prod = ScalarQ(1)
        for i in range(1, d + 1):
            prod = prod * (1 - q ** i)
        assert c == 1 / prod


@pytest.mark.parametrize("q0", [Fraction(3, 10), Fraction(1, 2), Fraction(4, 5)])
def test_qgamma_against_numeric_product(q0):
    num = q_gamma_numeric(float(q0), 8, terms=2000)
    for d, c in enumerate(q_gamma(8)):
        assert abs(float(c.at(q0)) - num[d]) < 1e-9
