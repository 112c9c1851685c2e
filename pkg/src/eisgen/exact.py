"""Exact scalars in Q(q^{1/2}) and rational functions in one variable over them.

Internally r = q^{1/2} is a transcendental generator, so every scalar is an
element of Q(r). The "(f(q), half-power tag)" form is the canonical
serialization whenever the scalar is homogeneous in r; mixed scalars such as
1 + q^{1/2} serialize as a two-term sum.

Contour integrals are evaluated as sums of residues of f(a) da/a over the
poles lying inside |a| = q^c. Pole magnitudes are decided exactly from the
shape of each irreducible denominator factor (monomial binomials, the origin)
or from declared hints (Weil places), with q real and > 1.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import cached_property, reduce
from math import gcd, isqrt

from sympy import QQ
from sympy.polys.fields import field

from .errors import NonLaurentInput, ParseError, PoleOnContour, UnclassifiablePlace

QR, _R = field("r", QQ)
QA, _RA, _XA = field("r,x", QQ)
VARIABLES = ("a", "t", "z")


def _int_content(poly):
    """Rescale a QQ polynomial to a primitive integer polynomial; returns (scale, poly)."""
    cs = [QQ.to_sympy(c) for c in poly.values()]
    if not cs:
        return QQ(1), poly
    den = reduce(lambda u, v: u * v // gcd(u, v), (int(c.q) for c in cs), 1)
    num = reduce(gcd, (int(c.p) * den // int(c.q) for c in cs), 0)
    s = QQ(den, num)
    return s, poly * s


def _canon(num, den):
    """Canonical (num, den): integer coefficients, jointly primitive, den leading coefficient positive."""
    if not den:
        raise ZeroDivisionError("zero denominator")
    if not num:
        return num.ring.zero, den.ring.one
    sn, n = _int_content(num)
    sd, d = _int_content(den)
    # n/sn / (d/sd) = (n*sd)/(d*sn); bring to integers
    ratio = QQ.to_sympy(sd / sn)
    n = n * QQ(int(ratio.p))
    d = d * QQ(int(ratio.q))
    g = reduce(gcd, [int(QQ.to_sympy(c)) for c in list(n.values()) + list(d.values())], 0)
    if g > 1:
        n = n * QQ(1, g)
        d = d * QQ(1, g)
    lead = max(d.monoms(), key=lambda m: tuple(reversed(m)))
    if d[lead] < 0:
        n, d = -n, -d
    return n, d


# ---------------------------------------------------------------------------
# ScalarQ


class ScalarQ:
    """Element of Q(q^{1/2}), immutable."""

    __slots__ = ("_f", "_key")

    def __init__(self, value=0):
        if isinstance(value, ScalarQ):
            self._f = value._f
        elif isinstance(value, Fraction):
            self._f = QR(QQ(value.numerator, value.denominator))
        elif isinstance(value, int):
            self._f = QR(value)
        else:
            self._f = value  # FracElement of QR
        self._key = None

    # constructors
    @classmethod
    def q(cls, e=1):
        """q^e for integer or half-integer e."""
        e2 = Fraction(e) * 2
        if e2.denominator != 1:
            raise ValueError("only half-integer powers of q are representable")
        return cls(_R ** int(e2))

    @classmethod
    def sqrt_q(cls):
        return cls(_R)

    @classmethod
    def frac(cls, n, d=1):
        return cls(QR(QQ(n, d)))

    @property
    def fe(self):
        return self._f

    @property
    def key(self):
        if self._key is None:
            n, d = _canon(self._f.numer, self._f.denom)
            self._key = (tuple(sorted(n.terms())), tuple(sorted(d.terms())))
        return self._key

    def __hash__(self):
        return hash(self.key)

    def __eq__(self, other):
        if not isinstance(other, ScalarQ):
            try:
                other = ScalarQ(other)
            except Exception:
                return NotImplemented
        return self._f == other._f

    def _co(self, other):
        if isinstance(other, ScalarQ):
            return other._f
        if isinstance(other, (int, Fraction)):
            return ScalarQ(other)._f
        return NotImplemented

    def __add__(self, other):
        o = self._co(other)
        return NotImplemented if o is NotImplemented else ScalarQ(self._f + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._co(other)
        return NotImplemented if o is NotImplemented else ScalarQ(self._f - o)

    def __rsub__(self, other):
        o = self._co(other)
        return NotImplemented if o is NotImplemented else ScalarQ(o - self._f)

    def __mul__(self, other):
        o = self._co(other)
        return NotImplemented if o is NotImplemented else ScalarQ(self._f * o)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._co(other)
        if o is NotImplemented:
            return o
        if not o:
            raise ZeroDivisionError("division by zero scalar")
        return ScalarQ(self._f / o)

    def __rtruediv__(self, other):
        o = self._co(other)
        if o is NotImplemented:
            return o
        if not self._f:
            raise ZeroDivisionError("division by zero scalar")
        return ScalarQ(o / self._f)

    def __neg__(self):
        return ScalarQ(-self._f)

    def __pow__(self, e):
        if e < 0:
            return ScalarQ(1 / self._f ** (-e))
        return ScalarQ(self._f ** e)

    def __bool__(self):
        return bool(self._f)

    def is_zero(self):
        return not self._f

    def conj(self):
        """Complex conjugate; q^{1/2} is real."""
        return self

    # structure
    def q_parts(self):
        """(N0, N1, D) integer polynomials in q as dicts {exp: int} with self = (N0 + q^{1/2} N1)/D."""
        n, d = self._f.numer, self._f.denom
        dm = d.compose(d.ring.gens[0], -d.ring.gens[0])
        num = n * dm
        den = d * dm
        even = {e[0]: c for e, c in num.terms() if e[0] % 2 == 0}
        odd = {e[0]: c for e, c in num.terms() if e[0] % 2 == 1}
        dd = {e[0]: c for e, c in den.terms()}
        allc = [QQ.to_sympy(c) for c in list(even.values()) + list(odd.values()) + list(dd.values())]
        lcm = reduce(lambda u, v: u * v // gcd(u, v), (int(c.q) for c in allc), 1)
        def ints(m, shift):
            return {(e - shift) // 2: int(QQ.to_sympy(c) * lcm) for e, c in m.items()}
        N0, N1, D = ints(even, 0), ints(odd, 1), ints(dd, 0)
        # remove common polynomial factor in q
        from sympy import Poly, symbols, gcd as sgcd
        qs = symbols("q")
        def to_poly(m):
            return Poly(sum(c * qs ** e for e, c in m.items()) if m else 0, qs)
        P0, P1, PD = to_poly(N0), to_poly(N1), to_poly(D)
        g = sgcd(sgcd(P0, P1), PD) if (not P0.is_zero or not P1.is_zero) else PD
        P0, P1, PD = P0.quo(g), P1.quo(g), PD.quo(g)
        # integer primitive with positive leading coefficient of D
        cs = [int(c) for P in (P0, P1, PD) for c in P.all_coeffs() if c != 0]
        if any(Fraction(str(c)).denominator != 1 for P in (P0, P1, PD) for c in P.all_coeffs()):
            lcm2 = reduce(lambda u, v: u * v // gcd(u, v),
                          (Fraction(str(c)).denominator for P in (P0, P1, PD) for c in P.all_coeffs()), 1)
            P0, P1, PD = P0 * lcm2, P1 * lcm2, PD * lcm2
            cs = [int(c) for P in (P0, P1, PD) for c in P.all_coeffs() if c != 0]
        c = reduce(gcd, cs, 0)
        if PD.LC() < 0:
            c = -c
        def back(P):
            if P.is_zero:
                return {}
            return {m[0]: int(v) // c for m, v in zip(P.monoms(), P.coeffs())}
        return back(P0), back(P1), back(PD)

    def half_tag(self):
        """0 or 1 if homogeneous in q^{1/2}; None for mixed scalars."""
        N0, N1, _ = self.q_parts()
        if not N1:
            return 0
        if not N0:
            return 1
        return None

    def is_rational(self):
        return self._f.numer.degree(0) <= 0 and self._f.denom.degree(0) <= 0

    def to_fraction(self):
        if not self.is_rational():
            raise ValueError(f"{self} depends on q")
        v = QQ.to_sympy(self._f.numer.LC if self._f.numer else QQ(0)) / QQ.to_sympy(self._f.denom.LC)
        return Fraction(int(v.p), int(v.q))

    def at(self, q0):
        """Exact value at q = q0 (a positive integer or Fraction) as a Surd."""
        N0, N1, D = self.q_parts()
        q0 = Fraction(q0)
        def ev(m):
            return sum((Fraction(c) * q0 ** e for e, c in m.items()), Fraction(0))
        den = ev(D)
        if den == 0:
            raise ZeroDivisionError(f"{self} has a pole at q={q0}")
        return Surd(ev(N0) / den, ev(N1) / den, q0)

    def __float__(self):
        raise TypeError("use .at(q0) or .num(q0) to specialize q")

    def num(self, q0):
        return float(self.at(q0))

    def __repr__(self):
        return scalar_to_text(self)

    def to_json(self):
        return scalar_to_json(self)


ZERO = ScalarQ(0)
ONE = ScalarQ(1)


def as_scalar(x):
    return x if isinstance(x, ScalarQ) else ScalarQ(x)


@dataclass(frozen=True)
class Surd:
    """x + y*sqrt(d) with rational x, y and a positive rational d."""
    x: Fraction
    y: Fraction
    d: Fraction

    def __post_init__(self):
        d = Fraction(self.d)
        n, m = d.numerator, d.denominator
        sn, sm = isqrt(n), isqrt(m)
        if sn * sn == n and sm * sm == m and self.y:
            object.__setattr__(self, "x", Fraction(self.x) + Fraction(self.y) * Fraction(sn, sm))
            object.__setattr__(self, "y", Fraction(0))
        object.__setattr__(self, "d", d)

    def __float__(self):
        return float(self.x) + float(self.y) * float(self.d) ** 0.5

    def is_rational(self):
        return self.y == 0

    def __eq__(self, other):
        if isinstance(other, Surd):
            return self.x == other.x and self.y == other.y and (self.y == 0 or self.d == other.d)
        if isinstance(other, (int, Fraction)):
            return self.y == 0 and self.x == other
        return NotImplemented

    def __hash__(self):
        return hash((self.x, self.y))

    def sign(self):
        """Exact sign of x + y*sqrt(d)."""
        if self.y == 0:
            return (self.x > 0) - (self.x < 0)
        sx = (self.x > 0) - (self.x < 0)
        sy = (self.y > 0) - (self.y < 0)
        if sx == sy or sx == 0:
            return sy
        # opposite signs: compare x^2 with y^2 d
        lhs, rhs = self.x * self.x, self.y * self.y * self.d
        if lhs == rhs:
            return 0
        return sx if lhs > rhs else sy


# ---------------------------------------------------------------------------
# polynomials in x over QR, as lists of FracElements low -> high


def _ptrim(a):
    while a and not a[-1]:
        a.pop()
    return a


def _padd(a, b):
    n = max(len(a), len(b))
    return _ptrim([(a[i] if i < len(a) else QR.zero) + (b[i] if i < len(b) else QR.zero) for i in range(n)])


def _pmul(a, b):
    if not a or not b:
        return []
    out = [QR.zero] * (len(a) + len(b) - 1)
    for i, u in enumerate(a):
        if u:
            for j, v in enumerate(b):
                if v:
                    out[i + j] += u * v
    return _ptrim(out)


def _pscale(c, a):
    return _ptrim([c * u for u in a])


def _pdivmod(a, b):
    a = list(a)
    inv = 1 / b[-1]
    q = [QR.zero] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b) and a:
        c = a[-1] * inv
        s = len(a) - len(b)
        q[s] = c
        for i, bi in enumerate(b):
            a[s + i] -= c * bi
        a.pop()
        _ptrim(a)
    return _ptrim(q), a


def _pinvmod(a, m):
    """Inverse of a modulo m in QR[x]; a and m coprime."""
    r0, r1 = list(m), _pdivmod(a, m)[1]
    t0, t1 = [], [QR.one]
    while r1:
        qt, rem = _pdivmod(r0, r1)
        r0, r1 = r1, rem
        t0, t1 = t1, _padd(t0, _pscale(-QR.one, _pmul(qt, t1)))
    if len(r0) != 1:
        raise ValueError("not invertible modulo")
    return _pdivmod(_pscale(1 / r0[0], t0), m)[1]


def _ppow(a, e):
    out = [QR.one]
    for _ in range(e):
        out = _pmul(out, a)
    return out


def _to_x_list(poly):
    """PolyElement in (r, x) -> list over QR indexed by x-degree."""
    deg = poly.degree(1) if poly else -1
    out = [QR.zero] * (deg + 1)
    for (er, ex), c in poly.terms():
        out[ex] += QR(c) * _R ** er
    return _ptrim(out)


def _from_x_list(lst):
    """List over QR -> FracElement of QA."""
    acc = QA.zero
    for i, c in enumerate(lst):
        if c:
            n = c.numer.set_ring(QA.ring)
            d = c.denom.set_ring(QA.ring)
            acc += QA(n) / QA(d) * _XA ** i
    return acc


def _scalar_into_QA(s):
    f = as_scalar(s).fe
    return QA(f.numer.set_ring(QA.ring)) / QA(f.denom.set_ring(QA.ring))


# ---------------------------------------------------------------------------
# RatFun


class RatFun:
    """Rational function in one variable (a, t or z) with ScalarQ coefficients."""

    __slots__ = ("_f", "var")

    def __init__(self, value=0, var="a"):
        if var not in VARIABLES:
            raise ValueError(f"variable must be one of {VARIABLES}")
        self.var = var
        if isinstance(value, RatFun):
            self._f = value._f
        elif isinstance(value, ScalarQ):
            self._f = _scalar_into_QA(value)
        elif isinstance(value, (int, Fraction)):
            self._f = _scalar_into_QA(ScalarQ(value))
        else:
            self._f = value

    @classmethod
    def gen(cls, var="a"):
        return cls(_XA, var)

    @classmethod
    def monomial(cls, n, var="a", coeff=1):
        return cls(_scalar_into_QA(coeff) * _XA ** n if n >= 0 else _scalar_into_QA(coeff) / _XA ** (-n), var)

    @classmethod
    def from_coeffs(cls, coeffs, var="a"):
        """Laurent polynomial from {exponent: scalar}."""
        acc = QA.zero
        for e, c in coeffs.items():
            c = _scalar_into_QA(c)
            acc += c * _XA ** e if e >= 0 else c / _XA ** (-e)
        return cls(acc, var)

    @property
    def fe(self):
        return self._f

    def _co(self, other):
        if isinstance(other, RatFun):
            if other.var != self.var:
                raise ValueError(f"mixing variables {self.var} and {other.var}")
            return other._f
        if isinstance(other, (ScalarQ, int, Fraction)):
            return _scalar_into_QA(other)
        return NotImplemented

    def __add__(self, o):
        o = self._co(o)
        return NotImplemented if o is NotImplemented else RatFun(self._f + o, self.var)

    __radd__ = __add__

    def __sub__(self, o):
        o = self._co(o)
        return NotImplemented if o is NotImplemented else RatFun(self._f - o, self.var)

    def __rsub__(self, o):
        o = self._co(o)
        return NotImplemented if o is NotImplemented else RatFun(o - self._f, self.var)

    def __mul__(self, o):
        o = self._co(o)
        return NotImplemented if o is NotImplemented else RatFun(self._f * o, self.var)

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = self._co(o)
        if o is NotImplemented:
            return o
        if not o:
            raise ZeroDivisionError("division by zero rational function")
        return RatFun(self._f / o, self.var)

    def __rtruediv__(self, o):
        o = self._co(o)
        if o is NotImplemented:
            return o
        return RatFun(o / self._f, self.var)

    def __neg__(self):
        return RatFun(-self._f, self.var)

    def __pow__(self, e):
        if e < 0:
            return RatFun(1 / self._f ** (-e), self.var)
        return RatFun(self._f ** e, self.var)

    def __eq__(self, other):
        if isinstance(other, (ScalarQ, int, Fraction)):
            other = RatFun(other, self.var)
        if not isinstance(other, RatFun):
            return NotImplemented
        return self.var == other.var and self._f == other._f

    def __hash__(self):
        n, d = _canon(self._f.numer, self._f.denom)
        return hash((self.var, tuple(sorted(n.terms())), tuple(sorted(d.terms()))))

    def __bool__(self):
        return bool(self._f)

    def is_zero(self):
        return not self._f

    def numer_list(self):
        return _to_x_list(self._f.numer)

    def denom_list(self):
        return _to_x_list(self._f.denom)

    def is_laurent_polynomial(self):
        return len(self._f.denom.terms()) == 1

    def laurent_coeffs(self):
        """{exponent: ScalarQ} for a Laurent polynomial."""
        if not self.is_laurent_polynomial():
            raise NonLaurentInput(f"{self} is not a Laurent polynomial")
        (er, ex), dc = self._f.denom.terms()[0]
        out = {}
        for (nr, nx), c in self._f.numer.terms():
            e = nx - ex
            out[e] = out.get(e, ZERO) + ScalarQ(QR(c / dc) * _R ** nr / _R ** er)
        return {e: c for e, c in out.items() if c}

    def is_scalar(self):
        return self._f.numer.degree(1) <= 0 and self._f.denom.degree(1) <= 0

    def to_scalar(self):
        if not self.is_scalar():
            raise ValueError(f"{self} depends on {self.var}")
        n, d = self._f.numer, self._f.denom
        n = n.set_ring(QR.ring) if n else QR.ring.zero
        return ScalarQ(QR(n) / QR(d.set_ring(QR.ring)))

    def subs_inverse(self):
        """f(x) -> f(1/x)."""
        return substitute(self, -1)

    def star(self):
        """f*(x) = conj(f)(1/x); coefficients are real so this is f(1/x)."""
        return substitute(self, -1)

    def with_var(self, var):
        return RatFun(self._f, var)

    def evaluate(self, value):
        """Value at a ScalarQ point (exact)."""
        value = as_scalar(value)
        n, d = self.numer_list(), self.denom_list()
        def ev(lst):
            acc = ZERO
            for c in reversed(lst):
                acc = acc * value + ScalarQ(c)
            return acc
        den = ev(d)
        if not den:
            raise ZeroDivisionError("evaluation at a pole")
        return ev(n) / den

    def numeric(self, q0, x0):
        """Complex value at q = q0 (float) and variable = x0 (complex)."""
        r0 = float(q0) ** 0.5
        def ev(p):
            return sum(float(QQ.to_sympy(c)) * r0 ** er * x0 ** ex for (er, ex), c in p.terms())
        return ev(self._f.numer) / ev(self._f.denom)

    def __repr__(self):
        return ratfun_to_text(self)

    def to_json(self):
        return ratfun_to_json(self)


def var(name="a"):
    return RatFun.gen(name)


def substitute(f, power=-1, scale=1):
    """f(x) -> f(scale * x^power), power = +-1, scale a ScalarQ such as q^{s}."""
    if power not in (1, -1):
        raise ValueError("only x -> c*x^{+-1} substitutions are supported")
    c = _scalar_into_QA(scale)
    img = c * _XA if power == 1 else c / _XA
    def sub(poly):
        acc = QA.zero
        for (er, ex), co in poly.terms():
            acc += QA(co) * _RA ** er * img ** ex
        return acc
    return RatFun(sub(f.fe.numer) / sub(f.fe.denom), f.var)


# ---------------------------------------------------------------------------
# Laurent expansion


@dataclass(frozen=True)
class LaurentTail:
    at: str                      # "0" or "inf"
    var: str
    start: int                   # exponent of the first stored coefficient
    coeffs: tuple                # ScalarQ, exponents start, start+1, ... (at 0) or start, start-1, ... (at inf)
    order: int                   # number of stored coefficients
    exact: bool

    def exponents(self):
        step = 1 if self.at == "0" else -1
        return [self.start + step * i for i in range(len(self.coeffs))]

    def as_dict(self):
        return {e: c for e, c in zip(self.exponents(), self.coeffs) if c}

    def coeff(self, e):
        step = 1 if self.at == "0" else -1
        i = (e - self.start) * step
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        if i < 0:
            return ZERO
        if self.exact:
            return ZERO
        raise IndexError(f"exponent {e} beyond truncation order")


def _series_at_zero(num, den, order):
    """Coefficients of num/den at x=0: returns (valuation, list of `order` coefficients)."""
    vn = next(i for i, c in enumerate(num) if c) if num else None
    vd = next(i for i, c in enumerate(den) if c)
    if vn is None:
        return 0, [QR.zero] * order
    num, den = num[vn:], den[vd:]
    inv0 = 1 / den[0]
    out = []
    rem = list(num) + [QR.zero] * order
    for i in range(order):
        c = rem[i] * inv0 if i < len(rem) else QR.zero
        out.append(c)
        if c:
            for j, dj in enumerate(den):
                if i + j < len(rem):
                    rem[i + j] -= c * dj
    return vn - vd, out


def laurent(f, at="inf", order=8):
    """First `order` Laurent coefficients of f at 0 or infinity.

    For Laurent polynomials the tail is exact and always covers every term.
    """
    n, d = f.numer_list(), f.denom_list()
    exact = f.is_laurent_polynomial()
    if exact and f:
        cs = f.laurent_coeffs()
        order = max(order, max(cs) - min(cs) + 1)
    if at in ("inf", "oo", "infinity"):
        # f(1/y) = y^{deg d - deg n} * rev(n)(y)/rev(d)(y)
        v, cs = _series_at_zero(list(reversed(n)), list(reversed(d)), order)
        v += (len(d) - 1) - (len(n) - 1)
        return LaurentTail("inf", f.var, -v, tuple(ScalarQ(c) for c in cs), order, exact)
    v, cs = _series_at_zero(n, d, order)
    return LaurentTail("0", f.var, v, tuple(ScalarQ(c) for c in cs), order, exact)


def constant_term(f, at="inf"):
    """Coefficient of x^0 in the expansion of f at infinity (or 0)."""
    n, d = f.numer_list(), f.denom_list()
    if not n:
        return ZERO
    if at == "inf":
        lead = (len(n) - 1) - (len(d) - 1)
        if lead < 0:
            return ZERO
        return laurent(f, "inf", lead + 1).coeff(0)
    vn = next(i for i, c in enumerate(n) if c)
    vd = next(i for i, c in enumerate(d) if c)
    if vn - vd > 0:
        return ZERO
    return laurent(f, "0", vd - vn + 1).coeff(0)


# ---------------------------------------------------------------------------
# places and contour integrals


@dataclass(frozen=True)
class Place:
    """Galois orbit of poles: irreducible polynomial over Q(q^{1/2}), magnitude |x| = q^exponent."""
    minpoly: RatFun
    exponent: Fraction
    multiplicity: int = 1

    def __repr__(self):
        e = "-inf" if self.exponent is None else str(self.exponent)
        return f"Place({self.minpoly} = 0, |{self.minpoly.var}| = q^{e}, mult {self.multiplicity})"


ORIGIN = None  # exponent marker for the place x = 0


@dataclass(frozen=True)
class MagnitudeHint:
    """Declares that every root of `poly` has |x| = q^exponent (e.g. Weil places)."""
    poly: RatFun
    exponent: Fraction


def _r_monomial(c):
    """If the QQ[r] polynomial c is u*r^e return (u, e) else None."""
    ts = c.terms()
    if len(ts) != 1:
        return None
    (e,), u = ts[0]
    return QQ.to_sympy(u), e


def _classify(p, hints):
    """Magnitude exponent of the roots of an irreducible factor p (PolyElement in r, x)."""
    deg = p.degree(1)
    xs = {}
    for (er, ex), c in p.terms():
        xs.setdefault(ex, p.ring.zero)
        xs[ex] += p.ring({(er, 0): c})
    if set(xs) == {1} or (deg == 1 and 0 not in xs):
        return ORIGIN
    if set(xs) == {0, deg}:
        lo = _r_monomial(xs[0].set_ring(QR.ring))
        hi = _r_monomial(xs[deg].set_ring(QR.ring))
        if lo and hi and abs(lo[0]) == abs(hi[0]):
            return Fraction(lo[1] - hi[1], 2 * deg)
    for h in hints:
        hp = h.poly.fe.numer
        if _divides(p, hp):
            return Fraction(h.exponent)
    raise UnclassifiablePlace(f"cannot decide the magnitude of the roots of {p.as_expr()}")


def _divides(p, h):
    pl = _to_x_list(p)
    hl = _to_x_list(h)
    if len(hl) < len(pl):
        return False
    return not _pdivmod(hl, pl)[1]


def poles(f, hints=()):
    """Places of f(x)/x with multiplicities and magnitudes (origin has exponent None)."""
    g = f / RatFun.gen(f.var)
    den = g.fe.denom
    _, facs = den.factor_list()
    out = []
    for p, e in facs:
        if p.degree(1) <= 0:
            continue
        exp_ = _classify(p, hints)
        out.append(Place(RatFun(QA(p), f.var), exp_, e))
    return out


def _trace_residue(num, den_inner, den_outer):
    """Sum over the roots of den_inner of the residues of num/(den_inner*den_outer)."""
    if len(den_inner) <= 1:
        return QR.zero
    a = _pmul(num, _pinvmod(den_outer, den_inner)) if len(den_outer) > 1 else \
        _pscale(1 / den_outer[0], num)
    a = _pdivmod(a, den_inner)[1]
    if len(a) == len(den_inner) - 1 and a:
        return a[-1] / den_inner[-1]
    return QR.zero


def _split(f, select, hints):
    """Numerator and (inner, outer) denominator split of f/x by a predicate on place exponents."""
    g = f / RatFun.gen(f.var)
    num = _to_x_list(g.fe.numer)
    den = g.fe.denom
    content, facs = den.factor_list()
    inner = [QR.one]
    outer = [QR(content)]
    for p, e in facs:
        pl = _to_x_list(p)
        if p.degree(1) <= 0:
            outer = _pmul(outer, _ppow(pl, e))
            continue
        if select(p):
            inner = _pmul(inner, _ppow(pl, e))
        else:
            outer = _pmul(outer, _ppow(pl, e))
    return num, inner, outer


def circle_integral(f, c, hints=()):
    """(1/2 pi i) * contour integral of f(x) dx/x over |x| = q^c."""
    c = Fraction(c)

    def inside(p):
        e = _classify(p, hints)
        if e is ORIGIN:
            return True
        if e == c:
            raise PoleOnContour(f"pole {p.as_expr()} lies on |{f.var}| = q^{c}")
        return e < c
    num, inner, outer = _split(f, inside, hints)
    return ScalarQ(_trace_residue(num, inner, outer))


def residue(f, place, hints=()):
    """Sum of residues of f(x) dx/x over the roots of place.minpoly."""
    target = place.minpoly.fe.numer
    tl = _to_x_list(target)
    def pick(p):
        pl = _to_x_list(p)
        return len(pl) == len(tl) and not _pdivmod(tl, pl)[1]
    num, inner, outer = _split(f, pick, hints)
    if len(inner) <= 1:
        from .errors import NotAPole
        raise NotAPole(f"{place.minpoly} is not a pole of {f}")
    return ScalarQ(_trace_residue(num, inner, outer))


def place_of(minpoly, exponent=None, hints=()):
    m = minpoly if isinstance(minpoly, RatFun) else parse_expr(minpoly)
    _, facs = m.fe.numer.factor_list()
    facs = [(p, e) for p, e in facs if p.degree(1) > 0]
    if len(facs) != 1 or facs[0][1] != 1:
        raise ValueError("place polynomial must be irreducible")
    e = _classify(facs[0][0], hints) if exponent is None else Fraction(exponent)
    return Place(RatFun(QA(facs[0][0]), m.var), e, 1)


# ---------------------------------------------------------------------------
# parsing and serialization

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_]+)|(.))")


class _Parser:
    def __init__(self, text, var):
        self.text = text
        self.var = var
        self.toks = []
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                break
            start = m.start(m.lastindex)
            if m.group(1):
                self.toks.append(("int", int(m.group(1)), start))
            elif m.group(2):
                self.toks.append(("name", m.group(2), start))
            elif m.group(3).strip():
                self.toks.append(("op", m.group(3), start))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else ("end", None, len(self.text))

    def take(self, kind=None, value=None):
        t = self.peek()
        if (kind and t[0] != kind) or (value is not None and t[1] != value):
            want = value if value is not None else kind
            raise ParseError(f"expected {want!r}, found {'end of input' if t[0] == 'end' else repr(t[1])}", t[2])
        self.i += 1
        return t

    def parse(self):
        e = self.expr()
        t = self.peek()
        if t[0] != "end":
            raise ParseError(f"unexpected {t[1]!r}", t[2])
        return e

    def expr(self):
        acc = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            rhs = self.term()
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    def term(self):
        # a leading unary sign is accepted as part of the first factor
        sign = 1
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            if self.take()[1] == "-":
                sign = -sign
        acc = self.factor()
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            _, op, pos = self.take()
            rhs = self.factor()
            if op == "*":
                acc = acc * rhs
            else:
                if not rhs:
                    raise ParseError("DivisionByZeroExpression", pos)
                acc = acc / rhs
        return acc if sign == 1 else -acc

    def signed_int(self):
        sign = 1
        if self.peek()[0] == "op" and self.peek()[1] in "+-":
            sign = -1 if self.take()[1] == "-" else 1
        return sign * self.take("int")[1]

    def factor(self):
        kind, val, pos = self.peek()
        is_q = False
        if kind == "int":
            self.take()
            base = QA(val)
        elif kind == "name":
            self.take()
            if val == "q":
                base, is_q = _RA ** 2, True
            elif val == self.var:
                base = _XA
            else:
                raise ParseError(f"unknown symbol {val!r}", pos)
        elif kind == "op" and val == "(":
            self.take()
            base = self.expr()._f
            self.take("op", ")")
        elif kind == "end":
            raise ParseError("unexpected end of input", pos)
        else:
            raise ParseError(f"unexpected {val!r}", pos)
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            if is_q and self.peek()[0] == "op" and self.peek()[1] == "(":
                # q^(n/2): half-integer power of q
                self.take()
                n = self.signed_int()
                self.take("op", "/")
                _, d, dpos = self.take("int")
                if d not in (1, 2):
                    raise ParseError("q exponents must be half-integers", dpos)
                self.take("op", ")")
                e2 = n * (2 // d)
                base = _RA ** e2 if e2 >= 0 else 1 / _RA ** (-e2)
            else:
                e = self.signed_int()
                if e < 0:
                    if not base:
                        raise ParseError("DivisionByZeroExpression", pos)
                    base = 1 / base ** (-e)
                else:
                    base = base ** e
        return RatFun(base, self.var)


def parse_expr(text, variable="a"):
    return _Parser(text, variable).parse()


def _coef_text(c):
    c = QQ.to_sympy(c)
    return str(c) if c.q == 1 else f"({c})"


def _poly_text(poly, var):
    """Integer polynomial in (r, x) as text; r^e printed as q^(e/2)."""
    if not poly:
        return "0"
    parts = []
    for (er, ex), c in sorted(poly.terms(), key=lambda t: (-t[0][1], -t[0][0])):
        factors = []
        if er:
            factors.append(f"q^{er // 2}" if er % 2 == 0 and er != 2 else ("q" if er == 2 else f"q^({er}/2)"))
        if ex:
            factors.append(var if ex == 1 else f"{var}^{ex}")
        cc = QQ.to_sympy(c)
        if factors:
            body = "*".join(factors)
            if cc == 1:
                s = body
            elif cc == -1:
                s = "-" + body
            else:
                s = f"{cc}*{body}"
        else:
            s = str(cc)
        parts.append(s)
    out = parts[0]
    for s in parts[1:]:
        out += " - " + s[1:] if s.startswith("-") else " + " + s
    return out


def ratfun_to_text(f):
    n, d = _canon(f.fe.numer, f.fe.denom)
    nt = _poly_text(n, f.var)
    if d == d.ring.one:
        return nt
    return f"({nt})/({_poly_text(d, f.var)})"


def scalar_to_text(s):
    return ratfun_to_text(RatFun(s, "a"))


def _int_map(m):
    return {str(e): str(c) for e, c in sorted(m.items())}


def scalar_to_json(s):
    N0, N1, D = s.q_parts()
    if not N1:
        return {"num": _int_map(N0), "den": _int_map(D), "half_q": 0}
    if not N0:
        return {"num": _int_map(N1), "den": _int_map(D), "half_q": 1}
    return {"sum": [{"num": _int_map(N0), "den": _int_map(D), "half_q": 0},
                    {"num": _int_map(N1), "den": _int_map(D), "half_q": 1}]}


def scalar_from_json(obj):
    if "sum" in obj:
        return sum((scalar_from_json(o) for o in obj["sum"]), ZERO)
    def poly(m):
        return sum((QR(int(c)) * _R ** (2 * int(e)) for e, c in m.items()), QR.zero)
    val = poly(obj["num"]) / poly(obj["den"])
    if obj.get("half_q"):
        val = val * _R
    return ScalarQ(val)


def ratfun_to_json(f):
    n, d = _canon(f.fe.numer, f.fe.denom)
    def coeffs(p):
        out = {}
        for i, c in enumerate(_to_x_list(p)):
            if c:
                out[str(i)] = scalar_to_json(ScalarQ(c))
        return out
    return {"var": f.var, "num": coeffs(n), "den": coeffs(d)}


def ratfun_from_json(obj):
    def poly(m):
        acc = QA.zero
        for e, c in m.items():
            acc += _scalar_into_QA(scalar_from_json(c)) * _XA ** int(e)
        return acc
    return RatFun(poly(obj["num"]) / poly(obj["den"]), obj["var"])


def dumps(obj):
    """Deterministic JSON text."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))
