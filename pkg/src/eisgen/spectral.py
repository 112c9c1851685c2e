"""Eisenstein series on Bun_PGL(2)(P^1), constant terms, the Sigma operator and the L^2 spectral split."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .bun import BunFun, aut_order, count_sections, inner_product
from .curve import P1
from .errors import DomainError, VerificationFailure
from .exact import RatFun, ScalarQ, circle_integral, constant_term as ct_at, laurent, parse_expr, place_of, poles, residue, substitute
from .genus import BoxClass, integrate_T


def _r():
    return ScalarQ.sqrt_q()


def eis(k, var="a", curve=P1):
    """Eis(P_k, a) = (q^{1/2} a)^k + L(a) (q^{1/2} a^{-1})^k."""
    if k < 0:
        raise DomainError("k >= 0")
    a, r = RatFun.gen(var), _r()
    return (r * a) ** k + curve.L_kernel(var) * (r / a) ** k


def eis_values(kmax, var="a"):
    return BunFun({k: eis(k, var) for k in range(kmax + 1)})


def hecke_eigenvalue_a(var="a"):
    a = RatFun.gen(var)
    return _r() * (a + 1 / a)


def constant_term(k, var="a"):
    """CT(Eis(a))(O(k)) = (1/q)[(q^{-1/2} a)^k + L(a) (q^{-1/2} a^{-1})^k], k >= -1."""
    if k < -1:
        raise DomainError("the closed form needs deg M >= -1")
    a, r, q = RatFun.gen(var), _r(), ScalarQ.q()
    return ((a / r) ** k + P1.L_kernel(var) * (1 / (r * a)) ** k) / q


def ct_of_function(phi, m):
    """CT(phi)(M) = phi(M + O) / q^{deg M + 1} for deg M = m >= -1."""
    if m < -1:
        raise DomainError("the closed form needs deg M >= -1")
    return phi(abs(m)) / ScalarQ.q(m + 1)


def section_count_symbolic(k, n):
    """Sections of P_k of degree n as a polynomial in q: coefficient of a^{-n} in Eis(k, a), times q^{n/2}."""
    c = laurent(eis(k), "inf", order=k + abs(n) + 2).coeff(-n)
    return c * ScalarQ.q(Fraction(n, 2))


def push_pull(phi_hat, kmax):
    """(pi_G* pi_M^* phi_hat)(P_k) = sum_n #(sections of degree n) phi_hat(-n), symbolic q."""
    out = {}
    for k in range(kmax + 1):
        v = sum((section_count_symbolic(k, -m) * c for m, c in phi_hat.items() if -m >= -k), ScalarQ(0))
        if v:
            out[k] = v
    return BunFun(out)


def inner_product_M(f_hat, g_hat):
    """(1/(q-1)) sum_k f(k) conj g(k) on Bun_GL(1) = Z."""
    q = ScalarQ.q()
    return sum((c * g_hat.get(k, 0) for k, c in f_hat.items()), ScalarQ(0)) / (q - 1)


def ct_function(g, mmax):
    """CT g on degrees -1..mmax, as a dict."""
    return {m: ct_of_function(g, m) for m in range(-1, mmax + 1)}


def sigma(omega, curve=P1):
    """Sigma omega = omega(a) + L(a) omega(a^{-1})."""
    return omega + curve.L_kernel(omega.var) * substitute(omega, -1)


def sigma_bar(omega, curve=P1):
    """Conjugate projector: omega(a) + L(a^{-1}) omega(a^{-1})."""
    return omega + substitute(curve.L_kernel(omega.var), -1) * substitute(omega, -1)


def _support_bound(omega):
    cs = omega.laurent_coeffs()
    return max(abs(e) for e in cs) if cs else 0


def pseudo_eis(omega):
    """Eis_omega(k) = constant term at a = infinity of Eis(k, a) omega(a); finitely supported."""
    if not omega.is_laurent_polynomial():
        raise DomainError("omega must be a Laurent polynomial")
    K = _support_bound(omega)
    vals = {}
    for k in range(K + 3):
        v = ct_at(eis(k, omega.var) * omega, "inf")
        if v:
            if k > K:
                raise VerificationFailure(f"pseudo-Eisenstein series has value at k = {k} > {K}")
            vals[k] = v
    return BunFun(vals)


def pairing_norm(omega1, omega2, curve=P1):
    """(1/(q(q-1))) * integral over |a| >> 1 of omega1(a) Sigma(omega2*)(a) da/(2 pi i a)."""
    q = ScalarQ.q()
    return ct_at(omega1 * sigma(omega2.star(), curve), "inf") / (q * (q - 1))


def pairing_via_T(omega1, omega2, curve=P1):
    """-1/(q(q-1)^2) times the integral over T of omega1 (x) omega2*."""
    q = ScalarQ.q()
    return -integrate_T(BoxClass(omega1, omega2.star()), curve) / (q * (q - 1) ** 2)


def pairing_brute(omega1, omega2, q0):
    """Sum over bundle types of Eis_omega1 Eis_omega2 / |Aut|, with section counts enumerated over F_q0."""
    def pe(omega):
        cs = omega.laurent_coeffs()
        K = _support_bound(omega)
        out = {}
        for k in range(K + 1):
            v = Fraction(0)
            for n, c in cs.items():
                cnt = count_sections(q0, k, n)
                if cnt:
                    s = c * ScalarQ.q(Fraction(-n, 2))
                    out[k] = out.get(k, ScalarQ(0)) + s * cnt
        return out
    f1, f2 = pe(omega1), pe(omega2)
    total = ScalarQ(0)
    for k in set(f1) & set(f2):
        total += f1[k] * f2[k] / aut_order(k, q0)
    return total.at(q0)


def kernel_residues(curve=P1, var="a"):
    """r_{+-} = (1/(q(q-1))) Res_{a = +-q^{1/2}} L(a) da/a."""
    q = ScalarQ.q()
    L = curve.L_kernel(var)
    out = []
    for sgn in ("-", "+"):
        pl = place_of(f"{var} {sgn} q^(1/2)", Fraction(1, 2))
        out.append(residue(L, pl) / (q * (q - 1)))
    return tuple(out)


def eis_kernel_residue(k=0, sign=1, var="a"):
    """Res at a = +-q^{1/2} of Eis(k, a) da/a."""
    pl = place_of(f"{var} {'-' if sign > 0 else '+'} q^(1/2)", Fraction(1, 2))
    return residue(eis(k, var), pl)


@dataclass(frozen=True)
class SpectralSplit:
    continuous: ScalarQ
    discrete_plus: ScalarQ
    discrete_minus: ScalarQ
    r_plus: ScalarQ
    r_minus: ScalarQ
    total: ScalarQ

    @property
    def ok(self):
        return self.continuous + self.discrete_plus + self.discrete_minus == self.total


def spectral_split(omega):
    """Continuous part (1/(2q(q-1))) int_{|a|=1} |Sigma-bar omega|^2 and discrete parts r |omega(+-q^{1/2})|^2."""
    if not omega.is_laurent_polynomial():
        raise DomainError("omega must be a Laurent polynomial")
    q, r = ScalarQ.q(), _r()
    sb = sigma_bar(omega)
    continuous = circle_integral(sb * sb.star(), 0) / (2 * q * (q - 1))
    r_plus, r_minus = kernel_residues()
    w_plus, w_minus = omega.evaluate(r), omega.evaluate(-r)
    out = SpectralSplit(continuous, r_plus * w_plus * w_plus.conj(), r_minus * w_minus * w_minus.conj(),
                        r_plus, r_minus, pairing_norm(omega, omega))
    if not out.ok:
        raise VerificationFailure("spectral parts do not sum to the norm")
    return out


def continuous_part_residue_form(omega):
    """(1/(q(q-1))) int_{|a|=1} omega Sigma(omega*), the unsymmetrized continuous part."""
    q = ScalarQ.q()
    return circle_integral(omega * sigma(omega.star()), 0) / (q * (q - 1))


def kernel_pole_census(curve=P1, var="a"):
    """Places of L(a) da/a with |a| > 1."""
    return [p for p in poles(curve.L_kernel(var)) if p.exponent is not None and p.exponent > 0]


@dataclass(frozen=True)
class Spectrum:
    q: int

    @property
    def continuous(self):
        s = 2 * self.q ** 0.5
        return (-s, s)

    @property
    def discrete(self):
        return (-(self.q + 1), self.q + 1)

    def eigenvalue(self, a):
        return self.q ** 0.5 * (a + 1 / a)

    def to_json(self):
        return {
            "q": self.q,
            "continuous": {"interval": ["-2*q^(1/2)", "2*q^(1/2)"], "parameter": "|a| = 1, lambda(a) = q^(1/2)(a + 1/a)"},
            "discrete": [str(x) for x in self.discrete],
            "dual_group": "unramified characters of the torus modulo a -> 1/a; discrete points at a = +-q^(1/2)",
            "advisory": {"continuous_float": [repr(x) for x in self.continuous]},
        }


def spectrum(q):
    if q <= 1:
        raise DomainError("q > 1")
    return Spectrum(q)


def positive_for_q_gt_1(s):
    """Exact check that a rational function of q (no q^{1/2} part) is positive on q > 1."""
    from sympy import Poly, symbols, oo
    N0, N1, D = s.q_parts()
    if N1:
        raise DomainError("scalar has a q^{1/2} part")
    qs = symbols("q")
    def sign_ok(m):
        P = Poly(sum(c * qs ** e for e, c in m.items()), qs)
        if P.is_zero or P.count_roots(1, oo) - (1 if P.eval(1) == 0 else 0):
            return None
        return 1 if P.eval(2) > 0 else -1
    sn, sd = sign_ok(N0), sign_ok(D)
    return sn is not None and sd is not None and sn * sd > 0


def gram_matrix(q0, span=4):
    """pairing_norm(a^i, a^j) at q = q0 for |i|, |j| <= span, as floats."""
    import numpy as np
    idx = range(-span, span + 1)
    mons = {i: RatFun.monomial(i) for i in idx}
    return np.array([[pairing_norm(mons[i], mons[j]).num(q0) for j in idx] for i in idx])
