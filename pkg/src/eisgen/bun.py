"""Bun_PGL(2)(P^1): the classes P_k = P(O(k) + O), the Hecke operator and section counts."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .config import env_budget
from .errors import BudgetExceeded
from .exact import RatFun, ScalarQ
from .gf import enumerate_coprime_form_pairs, field_of_order, forms, projective_form_count


@dataclass(frozen=True)
class BundleClass:
    k: int
    q: int

    @property
    def aut(self):
        return aut_order(self.k, self.q)


def aut_order(k, q=None):
    """|Aut P_k|: q(q^2-1) for k = 0, q^{k+1}(q-1) for k > 0. Symbolic in q when q is None."""
    if k < 0:
        raise ValueError("k >= 0")
    Q = ScalarQ.q() if q is None else q
    if k == 0:
        return Q * (Q * Q - 1)
    return Q ** (k + 1) * (Q - 1)


@dataclass
class BunFun:
    """Finitely supported function k -> value (int, ScalarQ or RatFun) on bundle classes."""
    values: dict = field(default_factory=dict)

    @classmethod
    def delta(cls, k, value=1):
        return cls({k: value})

    def __call__(self, k):
        return self.values.get(k, 0)

    def support(self):
        return sorted(k for k, v in self.values.items() if v != 0)

    def __add__(self, other):
        out = dict(self.values)
        for k, v in other.values.items():
            out[k] = out.get(k, 0) + v
        return BunFun(out)

    def scale(self, c):
        return BunFun({k: c * v for k, v in self.values.items()})

    def __eq__(self, other):
        ks = set(self.support()) | set(other.support())
        return all(self(k) == other(k) for k in ks)


def hecke_delta(f, q=None):
    """(Delta f)(k) = q f(k-1) + f(k+1), with f(-1) := f(1)."""
    Q = ScalarQ.q() if q is None else q
    sup = f.support()
    if not sup:
        return BunFun()
    out = {}
    for k in range(0, max(sup) + 2):
        below = f(1) if k == 0 else f(k - 1)
        v = Q * below + f(k + 1)
        if v != 0:
            out[k] = v
    return BunFun(out)


def _conj(v):
    if isinstance(v, RatFun):
        return v.star()
    return v


def inner_product(f, g, q=None):
    """sum_k f(k) conj(g(k)) / |Aut P_k|."""
    total = 0
    for k in sorted(set(f.support()) & set(g.support())):
        aut = aut_order(k, q)
        total = total + f(k) * _conj(g(k)) / (Fraction(aut) if isinstance(aut, int) else aut)
    if q is None and not isinstance(total, (ScalarQ, RatFun)):
        total = ScalarQ(total)
    return total


def count_sections(q, k, n, budget=None):
    """Sections of P_k of degree n: s_inf at n = -k, coprime form pairs (deg k+d, deg d) at n = k + 2d."""
    budget = env_budget() if budget is None else budget
    if q ** (n + k + 2) > budget:
        raise BudgetExceeded(q ** (n + k + 2), budget)
    total = 1 if n == -k else 0
    if n >= k and (n - k) % 2 == 0:
        d = (n - k) // 2
        total += enumerate_coprime_form_pairs(field_of_order(q), k + d, d)
    return total


def quasisection_closed_form(q, k, d):
    return (q ** (2 * d + k + 2) - q ** (d + k + 1)) // (q - 1)


def common_factor_count(q, e):
    return (q ** (e + 1) - 1) // (q - 1)


def _enumerate_quasisections(q, k, d, budget):
    F = field_of_order(q)
    n = q ** (d + k + 1) * projective_form_count(q, d)
    if n > budget:
        raise BudgetExceeded(n, budget)
    count = 0
    for g in forms(F, d):
        if not any(g):
            continue
        # one representative per scalar class: last nonzero coefficient is 1
        if [c for c in g if c][-1] != 1:
            continue
        count += q ** (d + k + 1)  # every F of degree d+k pairs with g
    return count


def _enumerate_common_factors(q, e, budget):
    F = field_of_order(q)
    if q ** (e + 1) > budget:
        raise BudgetExceeded(q ** (e + 1), budget)
    return sum(1 for h in forms(F, e) if any(h) and [c for c in h if c][-1] == 1)


@dataclass(frozen=True)
class QuasisectionCount:
    q: int
    k: int
    d: int
    enumerated: int
    closed_form: int
    common_factors: int
    common_factors_closed_form: int
    sieve: int

    @property
    def ok(self):
        return (self.enumerated == self.closed_form == self.sieve
                and self.common_factors == self.common_factors_closed_form)


def count_quasisections(q, k, d, budget=None):
    """Pairs (F deg d+k, G deg d, G != 0) up to scalar, by enumeration, closed form, and coprime sieve."""
    budget = env_budget() if budget is None else budget
    enumerated = _enumerate_quasisections(q, k, d, budget)
    F = field_of_order(q)
    sieve = sum(enumerate_coprime_form_pairs(F, k + d - e, d - e, budget) * common_factor_count(q, e)
                for e in range(d + 1))
    return QuasisectionCount(q, k, d, enumerated, quasisection_closed_form(q, k, d),
                             _enumerate_common_factors(q, d, budget), common_factor_count(q, d), sieve)


def hecke_eigenvalue(deg_x=1, chi0=1, var="a"):
    """lambda(chi, x) = q^{deg x/2} (chi_rho(x) + chi_rho(x)^{-1}), chi_rho(x) = chi0(x) a^{-deg x}."""
    a = RatFun.gen(var)
    c = ScalarQ(chi0) if not isinstance(chi0, ScalarQ) else chi0
    return ScalarQ.q(Fraction(deg_x, 2)) * (c * a ** (-deg_x) + a ** deg_x / c)
