import itertools

import pytest
from hypothesis import given, strategies as st
from sympy import GF, Poly, symbols

from eisgen.errors import NotPrime, TooLarge
from eisgen.gf import (count_projective_zeros, enumerate_coprime_form_pairs, field_of_order, forms, make_field,
                       projective_form_count)

SMALL_Q = [2, 3, 4, 5, 7, 8, 9, 11, 16, 25, 27, 32]


def test_prime_field():
    assert make_field(2, 1).q == 2


def test_f4_multiplicative_group_has_order_3():
    F = make_field(2, 2)
    orders = [next(e for e in range(1, 4) if F.pow(x, e) == 1) for x in range(1, 4)]
    assert max(orders) == 3


def test_f9_frobenius_fixes_prime_field():
    F = make_field(3, 2)
    assert sum(1 for x in F.elements() if F.pow(x, 3) == x) == 3


def test_make_field_errors():
    with pytest.raises(NotPrime):
        make_field(4, 1)
    with pytest.raises(TooLarge):
        make_field(2, 17)


@pytest.mark.parametrize("q", SMALL_Q)
def test_fermat_every_element(q):
    F = field_of_order(q)
    assert all(F.pow(x, q) == x for x in F.elements())


@given(st.sampled_from(SMALL_Q), st.data())
def test_field_axioms(q, data):
    F = field_of_order(q)
    x, y, z = (data.draw(st.integers(0, q - 1)) for _ in range(3))
    assert F.mul(x, F.add(y, z)) == F.add(F.mul(x, y), F.mul(x, z))
    assert F.mul(F.mul(x, y), z) == F.mul(x, F.mul(y, z))
    if x:
        assert F.mul(x, F.inv(x)) == 1


def test_line_has_three_points():
    assert count_projective_zeros({(1, 0, 0): 1}, make_field(2)) == 3


@pytest.mark.parametrize("q,n", [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2)])
def test_zero_polynomial_counts_plane(q, n):
    assert count_projective_zeros({}, field_of_order(q), n) == q ** (2 * n) + q ** n + 1


def _naive_plane_count(coeffs, p):
    """Affine cone count over F_p divided by p - 1."""
    hits = 0
    for x, y, z in itertools.product(range(p), repeat=3):
        if (x, y, z) == (0, 0, 0):
            continue
        if sum(c * x ** i * y ** j * z ** k for (i, j, k), c in coeffs.items()) % p == 0:
            hits += 1
    return hits // (p - 1)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_cubic_matches_naive_loop(p):
    cubic = {(0, 2, 1): 1, (3, 0, 0): -1, (1, 0, 2): -1, (0, 0, 3): -1}
    assert count_projective_zeros(cubic, make_field(p)) == _naive_plane_count(cubic, p)


def test_coprime_pairs_examples():
    F2 = make_field(2)
    assert enumerate_coprime_form_pairs(F2, 1, 1) == 6
    assert enumerate_coprime_form_pairs(F2, 0, 0) == 2
    for q in (2, 3, 4):
        for k in range(3):
            assert enumerate_coprime_form_pairs(field_of_order(q), k, 0) == q ** (k + 1)


def _sympy_coprime(f, g, p):
    """Binary forms coprime iff the dehomogenized gcd is 1 and they do not both vanish at infinity."""
    x = symbols("x")
    pf = Poly(list(reversed(f)), x, domain=GF(p))
    pg = Poly(list(reversed(g)), x, domain=GF(p))
    if f[-1] % p == 0 and g[-1] % p == 0:
        return False
    return pf.gcd(pg).degree() <= 0


@pytest.mark.parametrize("p,a,b", [(2, 1, 1), (2, 2, 1), (2, 3, 2), (3, 1, 1), (3, 2, 1)])
def test_coprime_pairs_against_sympy(p, a, b):
    F = make_field(p)
    reps = enumerate_coprime_form_pairs(F, a, b, stream=True)
    oracle = 0
    for g in forms(F, b):
        if not any(g) or [c for c in g if c][-1] != 1:
            continue
        for f in forms(F, a):
            oracle += _sympy_coprime(f, g, p)
    assert len(reps) == oracle


@pytest.mark.parametrize("a", range(4))
@pytest.mark.parametrize("b", range(4))
def test_sieve_identity(a, b):
    q = 2
    F = make_field(q)
    # F = 0 has gcd G, which only reduces to a coprime pair when deg G <= deg F
    total = q ** (a + 1) * projective_form_count(q, b) - (projective_form_count(q, b) if a < b else 0)
    sieve = sum(enumerate_coprime_form_pairs(F, a - e, b - e) * projective_form_count(q, e)
                for e in range(min(a, b) + 1))
    assert sieve == total
