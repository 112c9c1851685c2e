"""Characters of C^n under scaling, the scissor relation, and the q-Gamma series."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

from .exact import ONE, ZERO, RatFun, ScalarQ, circle_integral, laurent

EPS = Fraction(1, 4)


def char_affine(n, var="z"):
    """Character (1 - z^{-1})^{-n} of functions on C^n with weight z^{-1} coordinates."""
    if n < 1:
        raise ValueError("n >= 1")
    z = RatFun.gen(var)
    return (1 - 1 / z) ** (-n)


def char_affine_series(n, side, order=8):
    """Expansion in |z| > 1 (side='outer', at infinity) or |z| < 1 (side='inner', at 0)."""
    return laurent(char_affine(n), "inf" if side == "outer" else "0", order)


def chi_projective(n, m):
    """chi(P^{n-1}, O(m)) = binom(m + n - 1, n - 1) as a polynomial in m."""
    if n < 1:
        raise ValueError("n >= 1")
    num = 1
    for i in range(1, n):
        num *= m + i
    return num // factorial(n - 1)


@dataclass(frozen=True)
class ScissorResult:
    lhs: ScalarQ
    chi: ScalarQ
    inner: ScalarQ

    @property
    def holds(self):
        return self.lhs == self.chi + self.inner


def scissor_check(n, m):
    f = RatFun.monomial(m, "z") * char_affine(n)
    lhs = circle_integral(f, EPS)
    inner = circle_integral(f, -EPS)
    return ScissorResult(lhs, ScalarQ(chi_projective(n, m)), inner)


def q_gamma(N):
    """Coefficients g_0..g_{N-1} of Gamma_q(z) = prod_{i>=0} 1/(1 - q^i z), as ScalarQ in q."""
    q = ScalarQ.q()
    out = [ONE]
    for d in range(1, N):
        out.append(out[-1] / (1 - q ** d))
    return out


def q_gamma_residual(coeffs):
    """Coefficients of Gamma_q(qz) - (1 - z) Gamma_q(z) through the truncation order."""
    q = ScalarQ.q()
    res = []
    for d, c in enumerate(coeffs):
        prev = coeffs[d - 1] if d else ZERO
        res.append(c * q ** d - (c - prev))
    return res


def q_gamma_numeric(q0, N, terms=400):
    """Floating-point oracle: expand the truncated product prod_{i<terms} 1/(1 - q0^i z), |q0| < 1."""
    series = [1.0] + [0.0] * (N - 1)
    for i in range(terms):
        w = q0 ** i
        # multiply by 1/(1 - w z) = sum (w z)^j
        for d in range(1, N):
            series[d] += w * series[d - 1]
    return series
