"""Completed L-genera and the three equivariant integrals over P^1, X^v = T*P^1 and T.

All contour integrals at |a| >> 1 are constant terms of the expansion at
infinity; the unit-circle integral uses the exact residue machinery.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .curve import P1, CurveData
from .errors import EisgenError, NonLaurentInput
from .exact import ONE, RatFun, ScalarQ, circle_integral, constant_term, substitute


class UnpairedData(EisgenError):
    pass


@dataclass(frozen=True)
class RepData:
    """Frobenius data of H^*(Gamma', pi): H^0/H^2 eigenvalues as q-exponents, H^1 as pair traces."""
    h0: tuple = ()
    h2: tuple = ()
    h1: tuple = ()
    curve: CurveData | None = None

    def __post_init__(self):
        if len(self.h0) != len(self.h2):
            raise UnpairedData(f"H^0 has {len(self.h0)} eigenvalues but H^2 has {len(self.h2)}")

    def dual(self):
        """pi*: eigenvalues beta -> q/beta, which swaps and reflects the H^0/H^2 exponents."""
        return RepData(tuple(1 - e for e in self.h2), tuple(1 - e for e in self.h0), self.h1, self.curve)

    def __add__(self, other):
        return RepData(self.h0 + other.h0, self.h2 + other.h2, self.h1 + other.h1, self.curve or other.curve)

    @classmethod
    def trivial(cls, curve=P1):
        """Trivial one-dimensional pi: H^0 = 1, H^2 = q, H^1 from the curve's Frobenius."""
        if curve.g and curve.traces is None:
            # H^1 carried as the whole numerator
            return cls((0,), (1,), ("P",), curve)
        return cls((0,), (1,), tuple(curve.traces or ()), curve)


@dataclass(frozen=True)
class BoxClass:
    omega1: RatFun
    omega2: RatFun


def _pair_factor(e0, e2, a):
    """(a^{1/2}b0^{1/2} - a^{-1/2}b0^{-1/2})(a^{1/2}b2^{1/2} - a^{-1/2}b2^{-1/2}) with b = q^e."""
    r = ScalarQ.sqrt_q()
    return a * r ** (e0 + e2) - r ** (e0 - e2) - r ** (e2 - e0) + r ** (-e0 - e2) / a


def h1_factor(s, a):
    """One dual pair (beta, q/beta) on H^1 with trace s."""
    r = ScalarQ.sqrt_q()
    return a * r + 1 / (a * r) - ScalarQ(s) / r


def lhat(rep, var="a"):
    a = RatFun.gen(var)
    num = RatFun(1, var)
    for s in rep.h1:
        if s == "P":
            c = rep.curve
            num = num * c.P_at(a) * (ScalarQ.sqrt_q() * a) ** (-c.g)
        else:
            num = num * h1_factor(s, a)
    den = RatFun(1, var)
    for e0, e2 in zip(rep.h0, rep.h2):
        den = den * _pair_factor(e0, e2, a)
    return num / den


def xi_pair_weight(curve, var="t"):
    t = RatFun.gen(var)
    W = curve.xi(var) * (1 - 1 / t) * (1 - ScalarQ.q() * t)
    if not W.is_laurent_polynomial():
        raise NonLaurentInput(f"pair weight {W} is not a Laurent polynomial")
    return W


def weyl_symmetrize(f):
    """sum over W = {1, a -> a^{-1}} of f."""
    return f + substitute(f, -1)


def integrate_flag(box):
    a = RatFun.gen(box.omega2.var)
    S = weyl_symmetrize(box.omega2 / (1 - a ** -2))
    return circle_integral(box.omega1 * S, 0)


def cotangent_weight(var="a"):
    a = RatFun.gen(var)
    return 1 / ((1 - a ** -2) * (1 - ScalarQ.q() * a ** 2))


def integrate_cotangent(box):
    """Integral over T*P^1 with support on the attracting Lagrangian (contour |a| >> 1)."""
    K = cotangent_weight(box.omega2.var)
    return constant_term(box.omega1 * weyl_symmetrize(box.omega2 * K), "inf")


def euler_class_T(var="a"):
    """Euler class cutting T out of T*P^1: (1-q)(1-q a^2)(1-a^{-2})."""
    a = RatFun.gen(var)
    q = ScalarQ.q()
    return (1 - q) * (1 - q * a ** 2) * (1 - a ** -2)


def integrate_T(box, curve=P1):
    """(1-q) * integral over |a| >> 1 of w1 w2 + L(a) w1 w2(a^{-1}), L = xi(a^{-2})/xi(a^2)."""
    w1, w2 = box.omega1, box.omega2
    L = curve.L_kernel(w1.var)
    q = ScalarQ.q()
    return (1 - q) * constant_term(w1 * w2 + L * w1 * substitute(w2, -1), "inf")


def integrate_T_via_cotangent(box):
    """P^1 only: integral over T as the X^v integral with the Euler class in the untwisted slot."""
    return integrate_cotangent(BoxClass(euler_class_T(box.omega1.var) * box.omega1, box.omega2))


def toric_cotangent_oracle(omega1, m):
    """Integral over X^v of omega1 (x) a^m from the monomial basis of H^1_L(O(m)).

    The local cohomology of O(m) along the attracting Lagrangian has monomial
    basis a^{-m} X'^{-i} Y'^j (i >= 1, j >= 0, weight q^j a^{-m-2i-2j}) and
    a^m X^i Y^{-j} (i >= 0, j >= 1, weight q^{-j} a^{m-2i-2j}); the integral is
    minus the a-invariant part of omega1 times this character.
    """
    coeffs = omega1.laurent_coeffs()
    q = ScalarQ.q()
    total = ScalarQ(0)
    for e, c in coeffs.items():
        # need a-exponent of the monomial = -e
        A = -e
        # sub: -m - 2(i + j) = A with i >= 1, j >= 0
        n2 = -m - A
        if n2 >= 2 and n2 % 2 == 0:
            s = n2 // 2
            total += c * sum((q ** j for j in range(0, s)), ScalarQ(0))
        # quot: m - 2(i + j) = A with i >= 0, j >= 1
        n2 = m - A
        if n2 >= 2 and n2 % 2 == 0:
            s = n2 // 2
            total += c * sum((q ** (-j) for j in range(1, s + 1)), ScalarQ(0))
    return -total


def flag_weight_oracle(m):
    """Invariant multiplicity in H^*(P^1, O(m)) by enumerating weights a^{m}, a^{m-2}, ..., a^{-m}."""
    if m >= 0:
        return sum(1 for j in range(m + 1) if m - 2 * j == 0)
    if m == -1:
        return 0
    mp = -m - 2
    return -sum(1 for j in range(mp + 1) if mp - 2 * j == 0)
