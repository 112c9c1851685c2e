from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from eisgen.bun import BunFun, hecke_delta, inner_product
from eisgen.curve import P1, from_traces
from eisgen.errors import DomainError
from eisgen.exact import RatFun, ScalarQ, constant_term as ct_at, laurent, substitute
from eisgen.genus import BoxClass, integrate_T
from eisgen.spectral import (constant_term, ct_function, ct_of_function, eis, eis_values, gram_matrix,
                             hecke_eigenvalue_a, inner_product_M, kernel_pole_census, kernel_residues, pairing_brute,
                             pairing_norm, pairing_via_T, positive_for_q_gt_1, pseudo_eis, push_pull, sigma,
                             spectral_split, spectrum)

a = RatFun.gen("a")
q = ScalarQ.q()
r = ScalarQ.sqrt_q()


def test_eis_zero():
    e = eis(0)
    assert e == 1 + (q * a ** 2 - 1) / (a ** 2 - q)
    assert ct_at(e, "inf") == 1 + q


@pytest.mark.parametrize("k", range(8))
def test_eis_functional_equation(k):
    assert substitute(eis(k), -1) == (a ** 2 - q) / (q * a ** 2 - 1) * eis(k)


def test_eigenfunction_identity():
    lam = hecke_eigenvalue_a()
    for k in range(1, 21):
        assert q * eis(k - 1) + eis(k + 1) == lam * eis(k)
    assert (q + 1) * eis(1) == lam * eis(0)


def test_hecke_delta_on_eis():
    E = eis_values(21)
    D = hecke_delta(E)
    lam = hecke_eigenvalue_a()
    assert all(D(k) == lam * E(k) for k in range(21))


def test_constant_term_closed_form():
    L = P1.L_kernel("a")
    assert constant_term(0) == (1 + L) / q
    phi = BunFun({k: (r * a) ** k for k in range(8)})
    for m in range(-1, 7):
        assert ct_of_function(BunFun({k: eis(k) for k in range(8)}), m) == constant_term(m)
    with pytest.raises(DomainError):
        constant_term(-2)
    with pytest.raises(DomainError):
        ct_of_function(phi, -2)


def test_adjointness():
    phi_hat = {0: ScalarQ(1), -1: q, 2: ScalarQ(3)}
    kmax = 5
    pp = push_pull(phi_hat, kmax)
    for g in (BunFun.delta(0), BunFun.delta(2), BunFun({1: ScalarQ(2), 3: q})):
        lhs = inner_product(pp, g)
        rhs = inner_product_M(phi_hat, ct_function(g, kmax + 2))
        assert lhs == rhs


@pytest.mark.parametrize("curve", [P1, from_traces(2, (1,))], ids=["P1", "g1"])
@pytest.mark.parametrize("n", range(-8, 9))
def test_projector(curve, n):
    s = sigma(a ** n, curve)
    assert sigma(s, curve) == 2 * s


def test_sigma_symmetric_input_and_kernel():
    L = P1.L_kernel("a")
    w = a ** 2 + a ** -2
    assert sigma(w) == (1 + L) * w
    u = a ** 3
    anti = u - L * substitute(u, -1)
    assert sigma(anti) == 0


def test_pseudo_eis_examples():
    f = pseudo_eis(RatFun(1, "a"))
    assert f.support() == [0] and f(0) == q + 1
    g = pseudo_eis(a ** 3)
    assert max(g.support()) == 3 and g(3) == r ** 5
    h = pseudo_eis(2 * a ** 3 + a)
    assert all(h(k) == 2 * g(k) + pseudo_eis(a)(k) for k in range(5))


def test_pairing_three_ways():
    for q0 in (2, 3, 4):
        for i in range(-5, 6):
            for j in (-5, -2, 0, 3, 5):
                n = pairing_norm(a ** i, a ** j)
                assert pairing_brute(a ** i, a ** j, q0) == n.at(q0)
                box = BoxClass(a ** i, substitute(a ** j, -1))
                assert n == -integrate_T(box) / (q * (q - 1) ** 2)
                assert pairing_via_T(a ** i, a ** j) == n


@given(st.integers(-5, 5), st.integers(-5, 5))
def test_pairing_hermitian(i, j):
    assert pairing_norm(a ** i, a ** j) == pairing_norm(a ** j, a ** i)


def test_spectral_split_examples():
    for w in (RatFun(1, "a"), a + 1 / a, a ** 3 - 2 / a):
        s = spectral_split(w)
        assert s.ok
    s = spectral_split(a ** 2 - q)
    assert s.discrete_plus == 0 and s.discrete_minus == 0
    rp, rm = kernel_residues()
    assert rp == rm == (q + 1) / (2 * q ** 2)
    assert positive_for_q_gt_1(rp)
    assert not positive_for_q_gt_1(1 - q)


def test_spectrum():
    s = spectrum(2)
    assert s.discrete == (-3, 3)
    assert s.eigenvalue(1) == pytest.approx(2 * 2 ** 0.5)
    assert s.eigenvalue(-1) == pytest.approx(-2 * 2 ** 0.5)
    with pytest.raises(DomainError):
        spectrum(1)


def test_pole_census():
    places = kernel_pole_census()
    assert [p.exponent for p in places] == [Fraction(1, 2)] * 2
    assert all(abs(p.minpoly.numeric(4, x)) < 1e-12 for p, x in zip(places, (2, -2)))


@pytest.mark.parametrize("q0", [2, 3])
def test_gram_psd(q0):
    assert np.linalg.eigvalsh(gram_matrix(q0)).min() >= -1e-9
