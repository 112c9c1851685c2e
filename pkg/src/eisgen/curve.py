"""Zeta and xi functions of curves over F_q.

A curve is stored through the numerator P(t) of its zeta function. For
symbolic work P is lifted to Q(q^{1/2})[t] by writing c_{2g-i} = q^{g-i} c_i,
which makes the functional equation an identity in q; at the actual q it is
the true numerator.
"""
from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import InconsistentCounts, WeilViolation
from .exact import ONE, MagnitudeHint, RatFun, ScalarQ, substitute


@dataclass(frozen=True)
class CurveData:
    """q=None means P^1 over a generic finite field (only allowed for g=0)."""
    q: int | None
    g: int
    numerator: tuple = (1,)
    counts: tuple | None = None
    traces: tuple | None = None

    def __post_init__(self):
        P = tuple(int(c) for c in self.numerator)
        object.__setattr__(self, "numerator", P)
        if len(P) != 2 * self.g + 1 or P[0] != 1:
            raise ValueError("numerator must have degree 2g and constant term 1")
        if self.q is None and self.g != 0:
            raise ValueError("a generic q is only supported for g = 0")
        if self.q is not None:
            for i in range(self.g + 1):
                if P[2 * self.g - i] != self.q ** (self.g - i) * P[i]:
                    raise ValueError("numerator violates t^{2g} q^g P(1/(qt)) = P(t)")

    @property
    def name(self):
        return "P1" if self.g == 0 else f"g{self.g}:{list(self.numerator)}"

    def lifted_coeffs(self, var_scale=1):
        """Coefficients of P over Q(q^{1/2}) with the top half written as q-powers."""
        g, P = self.g, self.numerator
        out = []
        for i in range(2 * g + 1):
            if i <= g:
                out.append(ScalarQ(P[i]))
            else:
                out.append(ScalarQ(P[2 * g - i]) * ScalarQ.q(i - g))
        return out

    def P(self, var="t"):
        """Lifted numerator as a polynomial in `var`."""
        return RatFun.from_coeffs(dict(enumerate(self.lifted_coeffs())), var)

    def P_at(self, f):
        """P(f) for a RatFun f."""
        acc = RatFun(0, f.var)
        for c in reversed(self.lifted_coeffs()):
            acc = acc * f + c
        return acc

    def zeta(self, var="t"):
        t = RatFun.gen(var)
        q = ScalarQ.q()
        return self.P(var) / ((1 - t) * (1 - q * t))

    def xi(self, var="t"):
        t = RatFun.gen(var)
        return (ScalarQ.sqrt_q() * t) ** (1 - self.g) * self.zeta(var)

    def xi_at(self, f):
        """xi_C evaluated at a RatFun f (e.g. a^2)."""
        q = ScalarQ.q()
        return (ScalarQ.sqrt_q() * f) ** (1 - self.g) * self.P_at(f) / ((1 - f) * (1 - q * f))

    def L_kernel(self, var="a"):
        """L(a) = xi(a^{-2}) / xi(a^2)."""
        return _L_kernel(self, var)

    def magnitude_hints(self, var="a"):
        """Weil data: roots of P(t) have |t| = q^{-1/2}; so do the corresponding roots in a, a^2."""
        a = RatFun.gen(var)
        hints = []
        if self.g == 0:
            return hints
        for power, e in ((1, Fraction(-1, 2)), (2, Fraction(-1, 4))):
            f = self.P_at(a ** power)
            hints.append(MagnitudeHint(f, e))
            rev = self.P_at(a ** (-power)) * a ** (2 * self.g * power)
            hints.append(MagnitudeHint(rev, -e))
        return hints

    # -- arithmetic data at the actual q
    def frobenius_roots(self):
        """Numeric distinct reciprocal roots alpha_i of P (P(t) = prod (1 - alpha_i t)).

        Roots are taken from the exact square-free part, so repeated roots keep full precision.
        """
        if self.g == 0:
            return np.array([])
        from sympy import Poly, symbols
        t = symbols("t")
        sqf = Poly(list(reversed(self.numerator)), t).sqf_part()
        return 1 / np.roots([float(c) for c in sqf.all_coeffs()])

    def weil_ok(self, tol=1e-6):
        if self.g == 0:
            return True
        return bool(np.all(np.abs(np.abs(self.frobenius_roots()) - self.q ** 0.5) <= tol * self.q ** 0.5))

    def power_sums(self, n_max):
        """S_n = sum alpha_i^n for n = 1..n_max, exactly via Newton's identities."""
        c = list(self.numerator) + [0] * n_max
        S = []
        for n in range(1, n_max + 1):
            # n c_n + sum_{i=1}^{n} S_i c_{n-i} = 0
            s = -n * c[n] - sum(S[i - 1] * c[n - i] for i in range(1, n))
            S.append(s)
        return S

    def point_counts(self, n_max):
        return [self.q ** n + 1 - s for n, s in enumerate(self.power_sums(n_max), start=1)]

    def to_json(self):
        d = {"q": self.q, "g": self.g, "numerator": list(self.numerator)}
        if self.counts is not None:
            d["counts"] = list(self.counts)
        return d


@lru_cache(maxsize=256)
def _L_kernel(curve, var):
    a = RatFun.gen(var)
    return curve.xi_at(a ** -2) / curve.xi_at(a ** 2)


P1 = CurveData(None, 0, (1,))


def projective_line(q=None):
    return CurveData(q, 0, (1,))


def _extract_traces(q, g, P):
    """Integer traces s_i with P = prod (1 - s_i t + q t^2), or None."""
    if g == 0:
        return ()
    from sympy import Poly, factor_list, symbols
    t = symbols("t")
    expr = sum(c * t ** i for i, c in enumerate(P))
    _, facs = factor_list(expr)
    traces = []
    for f, e in facs:
        fp = Poly(f, t)
        cs = [int(x) for x in reversed(fp.all_coeffs())]
        if fp.degree() == 2 and cs[0] != 0 and cs[2] == q * cs[0]:
            if cs[1] % cs[0]:
                return None
            traces.extend([-cs[1] // cs[0]] * e)
        elif fp.degree() == 0:
            continue
        else:
            return None
    return tuple(sorted(traces))


def zeta_from_counts(q, g, counts, strict=False):
    """Curve data from N_1..N_g; the numerator is forced by the functional equation."""
    counts = list(counts)
    if len(counts) < g:
        raise InconsistentCounts(f"need {g} point counts, got {len(counts)}")
    if any(n < 0 for n in counts):
        raise InconsistentCounts("negative point count")
    S = [Fraction(q ** n + 1 - counts[n - 1]) for n in range(1, g + 1)]
    c = [Fraction(1)]
    for n in range(1, g + 1):
        c.append(-sum(S[i - 1] * c[n - i] for i in range(1, n + 1)) / n)
    if any(x.denominator != 1 for x in c):
        raise InconsistentCounts(f"counts {counts} give non-integral numerator coefficients {c}")
    c = [int(x) for x in c]
    P = c + [q ** (g - i) * c[i] for i in range(g - 1, -1, -1)]
    cd = CurveData(q, g, tuple(P), tuple(counts[:g]), _extract_traces(q, g, P))
    if len(counts) > g and cd.point_counts(len(counts)) != counts:
        raise InconsistentCounts(f"counts beyond n = g disagree with the numerator {P}")
    if not cd.weil_ok():
        msg = f"numerator {P} violates the Weil bound"
        if strict:
            raise WeilViolation(msg)
        warnings.warn(msg)
    return cd


def from_traces(q, traces):
    """Synthetic curve data P = prod (1 - s t + q t^2)."""
    P = np.poly1d([1])
    for s in traces:
        P = P * np.poly1d([q, -s, 1])
    coeffs = [int(round(x)) for x in reversed(P.coeffs)]
    return CurveData(q, len(traces), tuple(coeffs), None, tuple(sorted(traces)))


def curve_from_plane_model(F_hom, q, g, extra=0):
    """Curve data from point counts of a plane model over F_{q^n}, n = 1..g (+extra for cross-checks)."""
    from .gf import count_projective_zeros, field_of_order
    F = field_of_order(q)
    counts = [count_projective_zeros(F_hom, F, n) for n in range(1, g + 1 + extra)]
    return zeta_from_counts(q, g, counts, strict=True)


def load_curve(path_or_obj):
    obj = path_or_obj
    if not isinstance(obj, dict):
        with open(path_or_obj) as fh:
            obj = json.load(fh)
    if "numerator" in obj:
        cd = CurveData(obj["q"], obj["g"], tuple(obj["numerator"]), tuple(obj["counts"]) if obj.get("counts") else None,
                       _extract_traces(obj["q"], obj["g"], obj["numerator"]))
        if obj.get("counts") and cd.point_counts(len(obj["counts"])) != list(obj["counts"]):
            raise InconsistentCounts("counts disagree with numerator")
        return cd
    return zeta_from_counts(obj["q"], obj["g"], obj["counts"])


def xi(curve, var="t"):
    return curve.xi(var)


def check_functional_equation(curve):
    """xi_C(1/(q t)) == xi_C(t) exactly."""
    f = curve.xi("t")
    return substitute(f, -1, ScalarQ.q(-1)) == f
