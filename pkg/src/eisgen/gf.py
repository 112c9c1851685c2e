"""Finite fields F_q (q = p^k <= 2^16), polynomials over them, binary forms.

Elements of F_q are ints in [0, q): the base-p digits are the coefficients
of the residue class modulo the defining polynomial.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property

from sympy import isprime

from .errors import BudgetExceeded, NotPrime, TooLarge

MAX_Q = 2 ** 16


def _digits(x, p, k):
    out = []
    for _ in range(k):
        x, d = divmod(x, p)
        out.append(d)
    return out


def _undigits(ds, p):
    x = 0
    for d in reversed(ds):
        x = x * p + d
    return x


# -- polynomials over F_p as coefficient lists (low -> high), used to build moduli

def _fp_trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _fp_mod(a, m, p):
    a = list(a)
    inv = pow(m[-1], p - 2, p)
    while len(a) >= len(m):
        c = a[-1] * inv % p
        s = len(a) - len(m)
        for i, mi in enumerate(m):
            a[s + i] = (a[s + i] - c * mi) % p
        _fp_trim(a)
    return a


def _fp_mulmod(a, b, m, p):
    out = [0] * max(len(a) + len(b) - 1, 0)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _fp_mod(_fp_trim(out), m, p)


def _fp_gcd(a, b, p):
    a, b = _fp_trim(list(a)), _fp_trim(list(b))
    while b:
        a, b = b, _fp_mod(a, b, p)
    return a


def _fp_irreducible(m, p):
    """Ben-Or test: m monic of degree k has no factor of degree <= k/2."""
    k = len(m) - 1
    x = [0, 1]
    h = x
    for _ in range(k // 2):
        # h <- h^p mod m
        acc = [1]
        base, e = h, p
        while e:
            if e & 1:
                acc = _fp_mulmod(acc, base, m, p)
            base = _fp_mulmod(base, base, m, p)
            e >>= 1
        h = acc
        diff = list(h) + [0] * max(0, 2 - len(h))
        diff[1] = (diff[1] - 1) % p
        g = _fp_gcd(m, _fp_trim(diff), p)
        if len(g) > 1:
            return False
    return True


def least_irreducible(p, k):
    """Monic irreducible of degree k over F_p, least by integer encoding of its lower coefficients."""
    if k == 1:
        return (0, 1)
    for code in range(p ** k):
        m = _digits(code, p, k) + [1]
        if m[0] == 0:
            continue
        if _fp_irreducible(m, p):
            return tuple(m)
    raise AssertionError("no irreducible polynomial found")


@dataclass(frozen=True)
class Field:
    p: int
    k: int
    modulus: tuple

    @property
    def q(self):
        return self.p ** self.k

    def __repr__(self):
        return f"F_{self.q}"

    @cached_property
    def _tables(self):
        p, k, q = self.p, self.k, self.q
        if k == 1:
            return None
        m = list(self.modulus)
        # find a generator of the multiplicative group and build exp/log tables
        factors = [f for f in range(2, q) if (q - 1) % f == 0 and isprime(f)]
        for g in range(2, q):
            gd = _digits(g, p, k)
            ok = True
            for f in factors:
                e = (q - 1) // f
                acc, base = [1], gd
                while e:
                    if e & 1:
                        acc = _fp_mulmod(acc, base, m, p)
                    base = _fp_mulmod(base, base, m, p)
                    e >>= 1
                if acc == [1]:
                    ok = False
                    break
            if ok:
                break
        exp = [0] * (2 * q)
        log = [0] * q
        cur = [1]
        gd = _digits(g, p, k)
        for i in range(q - 1):
            v = _undigits(cur + [0] * (k - len(cur)), p)
            exp[i] = v
            log[v] = i
            cur = _fp_mulmod(cur, gd, m, p)
        for i in range(q - 1, 2 * q):
            exp[i] = exp[i - (q - 1)]
        digits = [_digits(x, p, k) for x in range(q)]
        return exp, log, digits

    def add(self, x, y):
        if self.k == 1:
            return (x + y) % self.p
        if self.p == 2:
            return x ^ y
        _, _, dg = self._tables
        return _undigits([(a + b) % self.p for a, b in zip(dg[x], dg[y])], self.p)

    def neg(self, x):
        if self.k == 1:
            return -x % self.p
        if self.p == 2:
            return x
        _, _, dg = self._tables
        return _undigits([-a % self.p for a in dg[x]], self.p)

    def sub(self, x, y):
        return self.add(x, self.neg(y))

    def mul(self, x, y):
        if self.k == 1:
            return x * y % self.p
        if x == 0 or y == 0:
            return 0
        exp, log, _ = self._tables
        return exp[log[x] + log[y]]

    def inv(self, x):
        if x == 0:
            raise ZeroDivisionError("inverse of 0 in " + repr(self))
        if self.k == 1:
            return pow(x, self.p - 2, self.p)
        exp, log, _ = self._tables
        return exp[(self.q - 1 - log[x]) % (self.q - 1)]

    def pow(self, x, e):
        if e == 0:
            return 1
        if x == 0:
            return 0
        if self.k == 1:
            return pow(x, e % (self.p - 1), self.p)
        exp, log, _ = self._tables
        return exp[log[x] * e % (self.q - 1)]

    def from_int(self, n):
        """Image of an integer under Z -> F_p -> F_q."""
        return n % self.p

    def elements(self):
        return range(self.q)


def make_field(p, k=1):
    if not isprime(p):
        raise NotPrime(f"{p} is not prime")
    if k < 1 or p ** k > MAX_Q:
        raise TooLarge(f"field of order {p ** k} exceeds {MAX_Q}")
    return Field(p, k, least_irreducible(p, k))


def field_of_order(q):
    for p in range(2, q + 1):
        if q % p == 0:
            k = 0
            n = q
            while n % p == 0:
                n //= p
                k += 1
            if n != 1:
                raise NotPrime(f"{q} is not a prime power")
            return make_field(p, k)
    raise NotPrime(f"{q} is not a prime power")


# -- polynomials over F_q: tuples low -> high with no trailing zeros

def ptrim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return tuple(a)


def pdeg(a):
    return len(a) - 1


def padd(F, a, b):
    n = max(len(a), len(b))
    return ptrim(F.add(a[i] if i < len(a) else 0, b[i] if i < len(b) else 0) for i in range(n))


def psub(F, a, b):
    n = max(len(a), len(b))
    return ptrim(F.sub(a[i] if i < len(a) else 0, b[i] if i < len(b) else 0) for i in range(n))


def pscale(F, c, a):
    return ptrim(F.mul(c, x) for x in a)


def pmul(F, a, b):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = F.add(out[i + j], F.mul(x, y))
    return ptrim(out)


def pdivmod(F, a, b):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    inv = F.inv(b[-1])
    qt = [0] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b) and a:
        c = F.mul(a[-1], inv)
        s = len(a) - len(b)
        qt[s] = c
        for i, bi in enumerate(b):
            a[s + i] = F.sub(a[s + i], F.mul(c, bi))
        a = list(ptrim(a))
    return ptrim(qt), tuple(a)


def pmonic(F, a):
    if not a:
        return a
    return pscale(F, F.inv(a[-1]), a)


def pgcd(F, a, b):
    a, b = ptrim(a), ptrim(b)
    while b:
        a, b = b, pdivmod(F, a, b)[1]
    return pmonic(F, a)


def pxgcd(F, a, b):
    """Return (g, s, t) with s*a + t*b = g monic (g = () if both zero)."""
    r0, r1 = ptrim(a), ptrim(b)
    s0, s1 = (1,), ()
    t0, t1 = (), (1,)
    while r1:
        qt, rem = pdivmod(F, r0, r1)
        r0, r1 = r1, rem
        s0, s1 = s1, psub(F, s0, pmul(F, qt, s1))
        t0, t1 = t1, psub(F, t0, pmul(F, qt, t1))
    if not r0:
        return (), (), ()
    c = F.inv(r0[-1])
    return pscale(F, c, r0), pscale(F, c, s0), pscale(F, c, t0)


def peval(F, a, x):
    acc = 0
    for c in reversed(a):
        acc = F.add(F.mul(acc, x), c)
    return acc


# -- binary forms: coefficient tuple of length deg+1, slot i is the X^i Y^(deg-i) coefficient

def forms(F, deg):
    """All binary forms of degree deg (including zero)."""
    return itertools.product(range(F.q), repeat=deg + 1)


def forms_coprime(F, f, g):
    """True iff the forms f, g have no common zero on P^1 over the algebraic closure."""
    if f[-1] == 0 and g[-1] == 0:  # common zero at [1:0]
        return False
    fa, ga = ptrim(f), ptrim(g)
    if not fa and not ga:
        return False
    return len(pgcd(F, fa, ga)) == 1


def _normalized_nonzero_forms(F, deg):
    """Nonzero forms of degree deg with last nonzero slot equal to 1 (one per scalar class)."""
    for top in range(deg, -1, -1):
        for low in itertools.product(range(F.q), repeat=top):
            yield tuple(low) + (1,) + (0,) * (deg - top)


def projective_form_count(q, deg):
    """Number of nonzero degree-deg forms up to scalar."""
    return (q ** (deg + 1) - 1) // (q - 1)


def enumerate_coprime_form_pairs(F, degF, degG, budget=None, stream=False):
    """Count pairs (F, G) of coprime binary forms, G != 0, up to common scalar.

    G is normalized to have last nonzero slot 1. With stream=True returns the
    list of representatives instead of the count.
    """
    candidates = F.q ** (degF + 1) * projective_form_count(F.q, degG)
    if budget is not None and candidates > budget:
        raise BudgetExceeded(candidates, budget)
    out = [] if stream else None
    n = 0
    Fs = list(forms(F, degF))
    for g in _normalized_nonzero_forms(F, degG):
        for f in Fs:
            if forms_coprime(F, f, g):
                n += 1
                if stream:
                    out.append((f, g))
    return out if stream else n


# -- plane curves

def count_projective_zeros(poly, F, n=1):
    """Points of {poly = 0} in P^2(F_{q^n}).

    poly is a dict {(i, j, k): integer coefficient} for x^i y^j z^k, or a
    string parsed with sympy in the variables x, y, z.
    """
    if isinstance(poly, str):
        poly = plane_poly_from_text(poly)
    E = make_field(F.p, F.k * n)
    terms = [(i, j, k, E.from_int(c)) for (i, j, k), c in poly.items() if E.from_int(c)]
    if not terms:
        return E.q ** 2 + E.q + 1

    def val(x, y, z):
        acc = 0
        for i, j, k, c in terms:
            acc = E.add(acc, E.mul(c, E.mul(E.pow(x, i), E.mul(E.pow(y, j), E.pow(z, k)))))
        return acc

    count = 0
    for y in E.elements():
        for z in E.elements():
            if val(1, y, z) == 0:
                count += 1
    for z in E.elements():
        if val(0, 1, z) == 0:
            count += 1
    if val(0, 0, 1) == 0:
        count += 1
    return count


def plane_poly_from_text(text):
    from sympy import Poly, symbols, sympify
    x, y, z = symbols("x y z")
    expr = sympify(text.replace("^", "**"))
    if expr == 0:
        return {}
    P = Poly(expr, x, y, z)
    degs = {sum(m) for m in P.monoms()}
    if len(degs) > 1:
        raise ValueError("polynomial is not homogeneous")
    return {m: int(c) for m, c in P.terms()}
