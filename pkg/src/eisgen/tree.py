"""The Bruhat-Tits tree of PGL(2, F_q((t))) and its classification into bundle types.

A vertex is the lattice spanned by the columns of [[t^n, c], [0, 1]] with c a
Laurent polynomial reduced modulo t^n O. Every lattice reachable from the root
has such a representative with exact entries, so no t-adic truncation is
needed. The bundle type of a vertex is the double coset
GL2(F_q[t^-1]) g GL2(F_q[[t]]), found by an exact Birkhoff factorization.
"""
from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from itertools import product

from .errors import BudgetExceeded, PrecisionExceeded, VerificationFailure
from .gf import Field, field_of_order, pdivmod, pxgcd, ptrim

MAX_DEPTH = 24


class LPoly:
    """Laurent polynomial over F_q: {exponent: nonzero coefficient}."""
    __slots__ = ("F", "c")

    def __init__(self, F, coeffs=None):
        self.F = F
        self.c = {e: v for e, v in (coeffs or {}).items() if v}

    @classmethod
    def mono(cls, F, e, v=1):
        return cls(F, {e: v})

    @classmethod
    def const(cls, F, v):
        return cls(F, {0: v})

    @classmethod
    def from_poly(cls, F, p, shift=0):
        return cls(F, {i + shift: v for i, v in enumerate(p)})

    def __bool__(self):
        return bool(self.c)

    def __eq__(self, other):
        return self.c == other.c

    def __hash__(self):
        return hash(tuple(sorted(self.c.items())))

    def __add__(self, o):
        out = dict(self.c)
        for e, v in o.c.items():
            out[e] = self.F.add(out.get(e, 0), v)
        return LPoly(self.F, out)

    def __neg__(self):
        return LPoly(self.F, {e: self.F.neg(v) for e, v in self.c.items()})

    def __sub__(self, o):
        return self + (-o)

    def __mul__(self, o):
        F, out = self.F, {}
        for e1, v1 in self.c.items():
            for e2, v2 in o.c.items():
                out[e1 + e2] = F.add(out.get(e1 + e2, 0), F.mul(v1, v2))
        return LPoly(F, out)

    def scale(self, v):
        return LPoly(self.F, {e: self.F.mul(v, x) for e, x in self.c.items()})

    def shift(self, s):
        return LPoly(self.F, {e + s: v for e, v in self.c.items()})

    def val(self):
        return min(self.c) if self.c else None

    def deg(self):
        return max(self.c) if self.c else None

    def below(self, n):
        """Terms of exponent < n (reduction modulo t^n O)."""
        return LPoly(self.F, {e: v for e, v in self.c.items() if e < n})

    def is_poly_t(self):
        return not self.c or self.val() >= 0

    def is_poly_tinv(self):
        return not self.c or self.deg() <= 0

    def is_unit_const(self):
        return set(self.c) == {0}

    def to_poly(self):
        if not self.is_poly_t():
            raise ValueError("negative powers of t")
        return ptrim(self.c.get(i, 0) for i in range((self.deg() or 0) + 1))

    def key(self):
        return tuple(sorted(self.c.items()))

    def __repr__(self):
        if not self.c:
            return "0"
        return " + ".join(f"{v}*t^{e}" for e, v in sorted(self.c.items()))


@dataclass(frozen=True)
class LaurentMatrix:
    F: Field
    m: tuple  # ((a, b), (c, d)) of LPoly

    @classmethod
    def of(cls, F, rows):
        return cls(F, tuple(tuple(x if isinstance(x, LPoly) else LPoly.const(F, x) for x in row) for row in rows))

    @classmethod
    def identity(cls, F):
        return cls.of(F, ((1, 0), (0, 1)))

    @classmethod
    def diag_t(cls, F, k1, k2):
        return cls.of(F, ((LPoly.mono(F, k1), 0), (0, LPoly.mono(F, k2))))

    def __matmul__(self, o):
        (a, b), (c, d) = self.m
        (e, f), (g, h) = o.m
        return LaurentMatrix(self.F, ((a * e + b * g, a * f + b * h), (c * e + d * g, c * f + d * h)))

    def __eq__(self, o):
        return all(x == y for r1, r2 in zip(self.m, o.m) for x, y in zip(r1, r2))

    def det(self):
        (a, b), (c, d) = self.m
        return a * d - b * c

    def entries(self):
        return [x for row in self.m for x in row]

    def inverse(self):
        """Inverse when det is a monomial."""
        dt = self.det()
        if len(dt.c) != 1:
            raise ValueError("determinant is not a unit times a power of t")
        (e, v), = dt.c.items()
        inv = LPoly.mono(self.F, -e, self.F.inv(v))
        (a, b), (c, d) = self.m
        return LaurentMatrix(self.F, ((d * inv, -b * inv), (-c * inv, a * inv)))

    def in_minus_group(self):
        """Entries in F_q[t^-1] and determinant in F_q^*."""
        return all(x.is_poly_tinv() for x in self.entries()) and self.det().is_unit_const()

    def in_plus_group(self):
        return all(x.is_poly_t() for x in self.entries()) and self.det().is_unit_const()


@dataclass(frozen=True)
class BirkhoffSplit:
    minus: LaurentMatrix
    k: tuple
    plus: LaurentMatrix

    @property
    def type(self):
        return self.k[0] - self.k[1]

    def recompose(self):
        return self.minus @ LaurentMatrix.diag_t(self.minus.F, *self.k) @ self.plus


def _w(F):
    return LaurentMatrix.of(F, ((0, 1), (1, 0)))


def birkhoff_split(g):
    """g = g_minus diag(t^k1, t^k2) g_plus with k1 >= k2, g_minus in GL2(F_q[t^-1]), g_plus in GL2(F_q[t])."""
    F = g.F
    dt = g.det()
    if len(dt.c) != 1:
        raise ValueError("determinant must be a unit times a power of t")
    s = -min(x.val() for x in g.entries() if x)
    M = LaurentMatrix(F, tuple(tuple(x.shift(s) for x in row) for row in g.m))
    L, R = LaurentMatrix.identity(F), LaurentMatrix.identity(F)

    def left(op):
        nonlocal M, L
        M, L = op @ M, op @ L

    def right(op):
        nonlocal M, R
        M, R = M @ op, R @ op

    one, zero = LPoly.const(F, 1), LPoly(F)
    while True:
        # column Hermite form over F_q[t]: first row -> (t^a, 0)
        x, y = M.m[0]
        d, sx, sy = pxgcd(F, x.to_poly(), y.to_poly())
        dd = LPoly.from_poly(F, d)
        right(LaurentMatrix(F, ((LPoly.from_poly(F, sx), -LPoly.from_poly(F, pdivmod(F, y.to_poly(), d)[0])),
                                (LPoly.from_poly(F, sy), LPoly.from_poly(F, pdivmod(F, x.to_poly(), d)[0])))))
        if len(dd.c) != 1:
            raise VerificationFailure(f"row gcd {dd} is not a power of t")
        a = dd.deg()
        r, d2 = M.m[1]
        if len(d2.c) != 1:
            raise VerificationFailure(f"diagonal entry {d2} is not a unit times a power of t")
        (b, lead), = d2.c.items()
        right(LaurentMatrix(F, ((one, zero), (zero, LPoly.const(F, F.inv(lead))))))
        r = M.m[1][0]
        qt, _ = pdivmod(F, r.to_poly(), (0,) * b + (1,))
        right(LaurentMatrix(F, ((one, zero), (-LPoly.from_poly(F, qt), one))))
        # kill the terms of r of degree <= a with F_q[t^-1] row operations
        r = M.m[1][0]
        p = LPoly(F, {e - a: F.neg(v) for e, v in r.c.items() if e <= a})
        left(LaurentMatrix(F, ((one, zero), (p, one))))
        r = M.m[1][0]
        if not r:
            break
        v = r.val()
        u = r.shift(-v)
        left(LaurentMatrix(F, ((one, -LPoly.mono(F, a - v)), (zero, one))))
        tb = (0,) * (b - v) + (1,)
        gg, alpha, beta = pxgcd(F, u.to_poly(), tb)
        if gg != (1,):
            raise VerificationFailure("unit part not coprime to t")
        right(LaurentMatrix(F, ((LPoly.from_poly(F, alpha), -LPoly.mono(F, b - v)),
                                (LPoly.from_poly(F, beta), u))))
        left(_w(F))
    # M = L (t^s g) R = diag(t^a, t^b)
    k1, k2 = a - s, b - s
    minus, plus = L.inverse(), R.inverse()
    if k1 < k2:
        minus, plus, (k1, k2) = minus @ _w(F), _w(F) @ plus, (k2, k1)
    out = BirkhoffSplit(minus, (k1, k2), plus)
    if not (out.recompose() == g and minus.in_minus_group() and plus.in_plus_group()):
        raise VerificationFailure("Birkhoff recomposition failed")
    return out


# -- vertices

@dataclass(frozen=True)
class TreeVertex:
    """Lattice spanned by the columns of [[t^n, c], [0, 1]], c reduced modulo t^n O."""
    q: int
    n: int
    c: tuple = ()  # sorted ((exponent, coefficient), ...) with exponents < n

    @classmethod
    def root(cls, q):
        return cls(q, 0, ())

    @classmethod
    def canonical(cls, q, n, c):
        return cls(q, n, c.below(n).key())

    @property
    def field(self):
        return field_of_order(self.q)

    def cpoly(self):
        return LPoly(self.field, dict(self.c))

    def matrix(self):
        F = self.field
        return LaurentMatrix.of(F, ((LPoly.mono(F, self.n), self.cpoly()), (0, 1)))

    def distance(self):
        """Distance to the root: n - 2 min(0, n, val c)."""
        c = self.cpoly()
        m = min(0, self.n, c.val() if c else 0)
        return self.n - 2 * m

    def neighbors(self):
        F, c = self.field, self.cpoly()
        out = [TreeVertex.canonical(self.q, self.n - 1, c)]
        for lam in F.elements():
            out.append(TreeVertex.canonical(self.q, self.n + 1, c + LPoly.mono(F, self.n, lam)))
        return out


@dataclass
class TreeBall:
    q: int
    depth: int
    vertices: list
    distance: dict
    adjacency: dict = field(default_factory=dict)

    def sphere(self, n):
        return [v for v in self.vertices if self.distance[v] == n]

    def sphere_sizes(self):
        return [len(self.sphere(n)) for n in range(self.depth + 1)]


def explore(q, depth, budget=None):
    """All vertices within `depth` of the root, with adjacency."""
    if depth > MAX_DEPTH:
        raise PrecisionExceeded(f"depth {depth} exceeds the hard cap {MAX_DEPTH}")
    size = 1 + sum((q + 1) * q ** (n - 1) for n in range(1, depth + 1))
    if budget is not None and size > budget:
        raise BudgetExceeded(size, budget)
    root = TreeVertex.root(q)
    dist, order, adj = {root: 0}, [root], {}
    frontier = [root]
    for n in range(1, depth + 1):
        nxt = []
        for v in frontier:
            nb = v.neighbors()
            adj[v] = nb
            for w in nb:
                if w not in dist:
                    dist[w] = n
                    order.append(w)
                    nxt.append(w)
        frontier = nxt
    for v in frontier:
        adj[v] = v.neighbors()
    return TreeBall(q, depth, order, dist, adj)


def vertex_bundle_type(v):
    return birkhoff_split(v.matrix()).type


def neighbor_profile(v):
    return Counter(vertex_bundle_type(w) for w in v.neighbors())


def expected_profile(q, k):
    return Counter({1: q + 1}) if k == 0 else Counter({k + 1: 1, k - 1: q})


def tree_hecke(f, ball):
    """Sum over neighbors pushed to types: for each type k, sum_{w ~ v} f(type w) at one vertex v of type k."""
    out = {}
    for v in ball.vertices:
        k = vertex_bundle_type(v)
        val = sum(f.get(vertex_bundle_type(w), 0) for w in v.neighbors())
        if out.setdefault(k, val) != val:
            raise VerificationFailure(f"tree Hecke value at type {k} depends on the vertex")
    return out


def apartment_vertex(q, n):
    """Vertex at distance |n| along the standard apartment diag(t^n, 1)."""
    return TreeVertex(q, n, ())


# -- oracles

def _elementary_minus(F, rng, max_deg):
    p = LPoly(F, {-i: rng.randrange(F.q) for i in range(max_deg + 1)})
    one, zero = LPoly.const(F, 1), LPoly(F)
    return LaurentMatrix(F, ((one, p), (zero, one)) if rng.random() < 0.5 else ((one, zero), (p, one)))


def random_minus_element(F, rng, max_deg=1, steps=3):
    """Random element of GL2(F_q[t^-1]) as a product of elementary matrices and a unit diagonal."""
    g = LaurentMatrix.of(F, ((rng.randrange(1, F.q), 0), (0, rng.randrange(1, F.q))))
    for _ in range(steps):
        g = g @ _elementary_minus(F, rng, max_deg)
    return g


def random_plus_element(F, rng, max_deg=2, steps=3):
    g = LaurentMatrix.identity(F)
    one, zero = LPoly.const(F, 1), LPoly(F)
    for _ in range(steps):
        p = LPoly(F, {i: rng.randrange(F.q) for i in range(max_deg + 1)})
        g = g @ LaurentMatrix(F, ((one, p), (zero, one)) if rng.random() < 0.5 else ((one, zero), (p, one)))
    return g


def random_split_matrix(F, rng, kmax=3):
    """g_minus diag(t^k1, t^k2) g_plus with random factors; returns (g, k1 - k2)."""
    k1, k2 = sorted((rng.randint(-kmax, kmax), rng.randint(-kmax, kmax)), reverse=True)
    g = random_minus_element(F, rng, 1, 1) @ LaurentMatrix.diag_t(F, k1, k2) @ random_plus_element(F, rng)
    return g, k1 - k2


def brute_force_type(g, max_deg=1):
    """Search g_minus with entries of t^-1-degree <= max_deg such that g_minus^-1 g lies in diag GL2(F_q[[t]])."""
    F = g.F
    polys = [LPoly(F, {-i: c for i, c in enumerate(cs)}) for cs in product(range(F.q), repeat=max_deg + 1)]
    vg = g.det().val()
    found = set()
    for a, b, c, d in product(polys, repeat=4):
        gm = LaurentMatrix(F, ((a, b), (c, d)))
        if not gm.det().is_unit_const():
            continue
        h = gm.inverse() @ g
        rows = [[x.val() for x in row if x] for row in h.m]
        if not all(rows):
            continue
        k1, k2 = min(rows[0]), min(rows[1])
        if k1 + k2 == vg:
            found.add(abs(k1 - k2))
    return found


def random_ray(q, length, rng):
    """Non-backtracking walk from the root; returns the list of vertices."""
    path = [TreeVertex.root(q)]
    while len(path) <= length:
        nb = [w for w in path[-1].neighbors() if len(path) < 2 or w != path[-2]]
        path.append(rng.choice(nb))
    return path


def ray_type_offsets(path):
    """type(v_n) - n along a ray."""
    return [vertex_bundle_type(v) - n for n, v in enumerate(path)]


def series_of_rational(F, num, den, shift, order):
    """Coefficients {e: c} of t^shift num(t)/den(t) for e < shift + order, den(0) != 0."""
    inv0 = F.inv(den[0])
    out, rem = [], list(num) + [0] * order
    for i in range(order):
        c = F.mul(rem[i], inv0)
        out.append(c)
        for j, d in enumerate(den):
            if i + j < len(rem):
                rem[i + j] = F.sub(rem[i + j], F.mul(c, d))
    return {i + shift: c for i, c in enumerate(out) if c}


def ray_to_end(q, coeffs, length):
    """Geodesic ray from the root toward the end c = sum coeffs[e] t^e (min exponent <= 0 or c in O)."""
    F = field_of_order(q)
    c = LPoly(F, coeffs)
    j = max(0, -(c.val() if c else 0))
    ns = list(range(0, -j - 1, -1)) + list(range(-j + 1, -j + 1 + length))
    path = [TreeVertex.canonical(q, n, c) for n in ns][: length + 1]
    for v, w in zip(path, path[1:]):
        if w not in v.neighbors():
            raise VerificationFailure("ray is not a path")
    return path
