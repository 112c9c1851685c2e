import warnings

import pytest
from hypothesis import assume, given, strategies as st

from eisgen.curve import (P1, check_functional_equation, curve_from_plane_model, from_traces, load_curve,
                          zeta_from_counts)
from eisgen.errors import InconsistentCounts, WeilViolation
from eisgen.exact import RatFun, ScalarQ, poles

t = RatFun.gen("t")
q = ScalarQ.q()


def test_genus_zero_zeta():
    assert P1.zeta("t") == 1 / ((1 - t) * (1 - q * t))


def test_counts_force_numerator():
    assert zeta_from_counts(2, 1, [3]).numerator == (1, 0, 2)
    c = zeta_from_counts(2, 1, [4])
    assert c.numerator == (1, 1, 2)
    # N_2 from the alpha power sums: s_2 = s_1^2 - 2q = 1 - 4
    assert c.point_counts(2) == [4, 4 + 1 + 3]


def test_xi_genus_zero():
    assert P1.xi("t") == ScalarQ.sqrt_q() * t / ((1 - t) * (1 - q * t))


def test_xi_genus_one_has_no_prefactor():
    c = zeta_from_counts(2, 1, [3])
    assert c.xi("t") == c.P("t") / ((1 - t) * (1 - q * t))
    assert c.numerator == (1, 0, 2)


def test_plane_line_is_p1():
    c = curve_from_plane_model({(1, 0, 0): 1}, 2, 0)
    assert c.g == 0 and c.numerator == (1,)


def test_plane_cubic_genus_one():
    cubic = {(0, 2, 1): 1, (0, 1, 2): 1, (3, 0, 0): 1, (0, 0, 3): 1}
    c = curve_from_plane_model(cubic, 2, 1, extra=1)
    assert c.g == 1
    assert c.point_counts(2) == list(c.counts) + [c.point_counts(2)[1]]


def test_singular_model_rejected():
    cusp = {(0, 2, 1): 1, (3, 0, 0): -1}
    with pytest.raises((InconsistentCounts, WeilViolation)):
        curve_from_plane_model(cusp, 2, 1, extra=1)


def test_non_weil_counts_warn_or_raise():
    with pytest.warns(UserWarning):
        zeta_from_counts(2, 1, [8])
    with pytest.raises(WeilViolation):
        zeta_from_counts(2, 1, [8], strict=True)


def test_negative_count_rejected():
    with pytest.raises(InconsistentCounts):
        zeta_from_counts(2, 1, [-1])


def test_load_curve_descriptor():
    c = load_curve({"q": 3, "g": 1, "counts": [4]})
    assert c.numerator == (1, 0, 3)
    assert load_curve(c.to_json()) == c


def weil_curves():
    def build(q, n, data):
        bound = int(2 * q ** 0.5)
        traces = [data.draw(st.integers(-bound, bound)) for _ in range(n)]
        return from_traces(q, traces)
    return st.builds(lambda q, n, data: build(q, n, data), st.sampled_from([2, 3, 4, 5]), st.integers(1, 3),
                     st.data())


@given(weil_curves())
def test_functional_equation_on_weil_curves(c):
    assert c.weil_ok()
    assert check_functional_equation(c)


@given(weil_curves())
def test_zeta_poles_and_counts(c):
    # poles of zeta at t = 1 and t = 1/q only (the origin entry comes from the dt/t measure)
    assert sorted(p.exponent for p in poles(c.zeta("t"), c.magnitude_hints("t")) if p.exponent is not None) == [-1, 0]
    num = c.xi("t").numer_list()
    assert len(num) - 1 - min(i for i, x in enumerate(num) if x) == 2 * c.g
    counts = c.point_counts(2 * c.g)
    assume(all(n >= 0 for n in counts))
    again = zeta_from_counts(c.q, c.g, counts[: c.g])
    assert again.numerator == c.numerator
    assert again.point_counts(2 * c.g) == counts
