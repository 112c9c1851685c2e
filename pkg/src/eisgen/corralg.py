"""Stable-range modules for the correspondence algebra, fixed-locus Fock models, and weight bookkeeping.

Component R_d is Lambda[alpha_1..alpha_2g] (x) Q[eta] / (C_d) with
C_d = eta^{N_d - g} prod_i (eta - 2 theta_i), theta_i = gamma_i gamma_i^v and
N_d = m - 2d + 2 - 2g. Odd generators 0..g-1 are gamma_i, g..2g-1 are
gamma_i^v; gamma_i . gamma_j^v = delta_ij p. A basis element eta^j alpha_S is
the pair (j, mask). Operators are integer sparse matrices between components.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

import numpy as np
from scipy import sparse

from .errors import CharacterMismatch, LedgerMismatch, OutOfStableRange, RelationViolation

# -- exterior algebra on 2g generators


def dual_index(k, g):
    """alpha_k^v as (sign, index): gamma_i^v for gamma_i and -gamma_i for gamma_i^v."""
    return (1, k + g) if k < g else (-1, k - g)


def pairing(k, l, g):
    """alpha_k . alpha_l in units of the point class p."""
    if k < g and l == k + g:
        return 1
    if k >= g and l == k - g:
        return -1
    return 0


def _below(mask, k):
    return bin(mask & ((1 << k) - 1)).count("1")


def wedge(k, mask):
    """alpha_k ^ alpha_mask as (sign, mask) or None."""
    if mask >> k & 1:
        return None
    return (-1) ** _below(mask, k), mask | (1 << k)


def deriv(k, mask):
    """Left derivative d/d alpha_k of alpha_mask as (sign, mask) or None."""
    if not mask >> k & 1:
        return None
    return (-1) ** _below(mask, k), mask & ~(1 << k)


def theta_mult(S, mask, g):
    """theta_S alpha_mask with theta_i = gamma_i gamma_i^v."""
    sign = 1
    for i in S:
        for k in (i + g, i):
            r = wedge(k, mask)
            if r is None:
                return None
            s, mask = r
            sign *= s
    return sign, mask


# -- ring elements: {(eta power, mask): int}

def _add(out, key, c):
    v = out.get(key, 0) + c
    if v:
        out[key] = v
    else:
        out.pop(key, None)


def el_mul_eta(x, n=1):
    return {(j + n, m): c for (j, m), c in x.items()}


def el_mul_alpha(x, k):
    out = {}
    for (j, m), c in x.items():
        r = wedge(k, m)
        if r:
            _add(out, (j, r[1]), r[0] * c)
    return out


def el_deriv_dual(x, k, g):
    """d/d alpha_k^v."""
    s0, kk = dual_index(k, g)
    out = {}
    for (j, m), c in x.items():
        r = deriv(kk, m)
        if r:
            _add(out, (j, r[1]), s0 * r[0] * c)
    return out


def el_lin(*terms):
    out = {}
    for coef, x in terms:
        for key, c in x.items():
            _add(out, key, coef * c)
    return out


def chern_relation(g, N):
    """C = eta^{N-g} prod (eta - 2 theta_i) as a free-ring element."""
    out = {}
    for r in range(g + 1):
        for S in combinations(range(g), r):
            t = theta_mult(S, 0, g)
            if t:
                _add(out, (N - r, t[1]), (-2) ** r * t[0])
    return out


@dataclass
class Component:
    g: int
    m: int
    d: int

    def __post_init__(self):
        self.N = self.m - 2 * self.d + 2 - 2 * self.g
        if self.N < max(self.g, 1):
            raise OutOfStableRange(f"d={self.d}: N_d={self.N} is below max(g, 1) for g={self.g}, m={self.m}")
        self.masks = list(range(1 << (2 * self.g)))
        self.basis = [(j, mk) for j in range(self.N) for mk in self.masks]
        self.index = {b: i for i, b in enumerate(self.basis)}

    @property
    def dim(self):
        return len(self.basis)

    def degree(self, b):
        """Cohomological degree of eta^j alpha_S after the H_c and centering shifts."""
        j, mk = b
        return 2 * j + bin(mk).count("1") - 2 * (self.m + 1 - self.g) + 2 * self.d - self.g + 1

    def reduce(self, x):
        """Normal form modulo C_d: eta^N alpha = -sum_{S nonempty} (-2)^|S| theta_S eta^{N-|S|} alpha."""
        out = {}
        stack = list(x.items())
        while stack:
            (j, mk), c = stack.pop()
            if j < self.N:
                _add(out, (j, mk), c)
                continue
            shift = j - self.N
            for r in range(1, self.g + 1):
                for S in combinations(range(self.g), r):
                    t = theta_mult(S, mk, self.g)
                    if t:
                        stack.append(((self.N - r + shift, t[1]), -((-2) ** r) * t[0] * c))
        return out

    def vector(self, x):
        v = np.zeros(self.dim, dtype=np.int64)
        for key, c in self.reduce(x).items():
            v[self.index[key]] += c
        return v


class OperatorKind(Enum):
    E_P = "e<p>"
    F_P = "f<p>"
    H_P = "h<p>"
    E_A = "e<alpha>"
    F_A = "f<alpha>"
    H_A = "h<alpha>"


# (d shift, cohomological degree shift) per operator
DEGREE_SHIFTS = {
    OperatorKind.E_P: (-1, 2), OperatorKind.F_P: (1, 2), OperatorKind.H_P: (0, 2),
    OperatorKind.E_A: (-1, 1), OperatorKind.F_A: (1, 1), OperatorKind.H_A: (0, 1),
}


def _apply(kind, x, k, g, e_alpha_sign):
    if kind is OperatorKind.E_P:
        return el_mul_eta(x, 2)
    if kind is OperatorKind.F_P:
        return el_lin((-1, x))
    if kind is OperatorKind.H_P:
        return el_lin((2, el_mul_eta(x)))
    if kind is OperatorKind.H_A:
        return el_lin((2, el_mul_alpha(x, k)))
    if kind is OperatorKind.F_A:
        return el_lin((-1, el_deriv_dual(x, k, g)))
    # e<alpha> = s (-eta^2 d/d alpha^v + 2 eta alpha); s = +1 solves the Casimir relation
    return el_lin((-e_alpha_sign, el_mul_eta(el_deriv_dual(x, k, g), 2)),
                  (2 * e_alpha_sign, el_mul_eta(el_mul_alpha(x, k))))


@dataclass
class StableModule:
    g: int
    m: int
    d_range: tuple  # (d_min, d_max) inclusive
    e_alpha_sign: int = 1
    components: dict = field(default_factory=dict)
    _ops: dict = field(default_factory=dict)

    def __post_init__(self):
        lo, hi = self.d_range
        for d in range(lo, hi + 1):
            self.components[d] = Component(self.g, self.m, d)

    def op(self, kind, d, k=None):
        """Sparse matrix of the operator from R_d, or None if the target is outside the window."""
        key = (kind, d, k)
        if key in self._ops:
            return self._ops[key]
        dd, _ = DEGREE_SHIFTS[kind]
        src, tgt = self.components.get(d), self.components.get(d + dd)
        if src is None or tgt is None:
            self._ops[key] = None
            return None
        rows, cols, vals = [], [], []
        for i, b in enumerate(src.basis):
            v = tgt.reduce(_apply(kind, {b: 1}, k, self.g, self.e_alpha_sign))
            for kb, c in v.items():
                rows.append(tgt.index[kb]); cols.append(i); vals.append(c)
        M = sparse.csr_matrix((np.array(vals, dtype=np.int64), (rows, cols)), shape=(tgt.dim, src.dim), dtype=np.int64)
        self._ops[key] = M
        return M

    def well_defined(self, kind, d, k=None):
        """The operator kills C_d times every basis monomial (checked in the target)."""
        dd, _ = DEGREE_SHIFTS[kind]
        src, tgt = self.components.get(d), self.components.get(d + dd)
        if src is None or tgt is None:
            return True
        C = chern_relation(self.g, src.N)
        for mk in src.masks:
            x = {}
            for (j, cm), c in C.items():
                r = _wedge_mask(cm, mk)
                if r:
                    _add(x, (j, r[1]), r[0] * c)
            if tgt.reduce(_apply(kind, x, k, self.g, self.e_alpha_sign)):
                return False
        return True

    def degrees_ok(self, kind, d, k=None):
        M = self.op(kind, d, k)
        if M is None:
            return True
        dd, sh = DEGREE_SHIFTS[kind]
        src, tgt = self.components[d], self.components[d + dd]
        coo = M.tocoo()
        return all(tgt.degree(tgt.basis[r]) == src.degree(src.basis[c]) + sh for r, c in zip(coo.row, coo.col))


def _wedge_mask(a, b):
    """alpha_a ^ alpha_b for masks, as (sign, mask) or None."""
    if a & b:
        return None
    sign, mask = 1, b
    for k in reversed([k for k in range(a.bit_length()) if a >> k & 1]):
        s, mask = wedge(k, mask)
        sign *= s
    return sign, mask


def build_stable_module(g, m, d_range, e_alpha_sign=1):
    return StableModule(g, m, tuple(d_range), e_alpha_sign)


def stable_top(g, m):
    """Largest d with N_d >= max(g, 1)."""
    return (m + 2 - 2 * g - max(g, 1)) // 2


def stable_window(g, m, length=6):
    top = stable_top(g, m)
    return (top - length + 1, top)


# -- relations


@dataclass
class RelationReport:
    checked: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.failures

    def fail(self, relation, detail):
        self.failures.append((relation, detail))


def _witness(M):
    coo = sparse.coo_matrix(M)
    nz = [(r, c, v) for r, c, v in zip(coo.row, coo.col, coo.data) if v]
    return nz[0] if nz else None


def _check_zero(report, name, d, M):
    report.checked += 1
    if M is None:
        return
    M = sparse.csr_matrix(M)
    M.eliminate_zeros()
    if M.nnz:
        report.fail(name, f"d={d}, first nonzero entry (row, col, value) = {_witness(M)}")


def _eye(comp):
    return sparse.identity(comp.dim, dtype=np.int64, format="csr")


def _eta(mod, d, power=1):
    comp = mod.components[d]
    rows, cols, vals = [], [], []
    for i, b in enumerate(comp.basis):
        for kb, c in comp.reduce(el_mul_eta({b: 1}, power)).items():
            rows.append(comp.index[kb]); cols.append(i); vals.append(c)
    return sparse.csr_matrix((np.array(vals, dtype=np.int64), (rows, cols)), shape=(comp.dim, comp.dim), dtype=np.int64)


def check_relations(mod, raise_on_failure=False):
    """Casimir relations, e/f anticommutators, h-commutators and the fixed-locus p relation."""
    E, F, H = OperatorKind.E_P, OperatorKind.F_P, OperatorKind.H_P
    EA, FA, HA = OperatorKind.E_A, OperatorKind.F_A, OperatorKind.H_A
    g = mod.g
    rep = RelationReport()
    ks = range(2 * g)
    for d, comp in mod.components.items():
        up, down = d + 1 in mod.components, d - 1 in mod.components
        hp = mod.op(H, d)
        for kind in OperatorKind:
            for k in (ks if kind in (EA, FA, HA) else [None]):
                rep.checked += 1
                if not mod.well_defined(kind, d, k):
                    rep.fail(f"{kind.value} well defined", f"d={d}, k={k}")
                if not mod.degrees_ok(kind, d, k):
                    rep.fail(f"{kind.value} degree shift", f"d={d}, k={k}")
        if up:
            _check_zero(rep, "4 e<p> f<p> + h<p>^2 = 0", d, 4 * (mod.op(E, d + 1) @ mod.op(F, d)) + hp @ hp)
            # fixed-locus factors: e0<p> = eta (R_{d+1} -> R_d), f0<p> = -f<p> = projection
            _check_zero(rep, "f0<p> e0<p> = eta", d + 1,
                        (-mod.op(F, d)) @ _eta_between(mod, d + 1, d) - _eta(mod, d + 1))
        if down:
            _check_zero(rep, "4 f<p> e<p> + h<p>^2 = 0", d, 4 * (mod.op(F, d - 1) @ mod.op(E, d)) + hp @ hp)
        for k in ks:
            if up:
                lhs = 2 * (mod.op(E, d + 1) @ mod.op(FA, d, k)) + hp @ mod.op(HA, d, k)
                if down:
                    lhs = lhs + 2 * (mod.op(F, d - 1) @ mod.op(EA, d, k))
                    _check_zero(rep, "2 e<p> f<a> + 2 f<p> e<a> + h<p> h<a> = 0", d, lhs)
                _check_zero(rep, "[e<p>, f<a>] = 0", d,
                            mod.op(E, d + 1) @ mod.op(FA, d, k) - mod.op(FA, d - 1, k) @ mod.op(E, d) if down else None)
            for l in ks:
                pr = pairing(k, l, g)
                if up and down:
                    anti = mod.op(EA, d + 1, k) @ mod.op(FA, d, l) + mod.op(FA, d - 1, l) @ mod.op(EA, d, k)
                    _check_zero(rep, "{e<a>, f<b>} = h<a.b>", d, anti - 2 * pr * _eta(mod, d))
                if down:
                    c = mod.op(HA, d - 1, k) @ mod.op(EA, d, l) + mod.op(EA, d, l) @ mod.op(HA, d, k)
                    _check_zero(rep, "[h<a>, e<b>] = 2 (a.b) e<p>", d, c - 2 * pr * mod.op(E, d))
                    if d - 2 in mod.components:
                        ee = mod.op(EA, d - 1, k) @ mod.op(EA, d, l) + mod.op(EA, d - 1, l) @ mod.op(EA, d, k)
                        _check_zero(rep, "{e<a>, e<b>} = 0", d, ee)
                if up:
                    c = mod.op(HA, d + 1, k) @ mod.op(FA, d, l) + mod.op(FA, d, l) @ mod.op(HA, d, k)
                    _check_zero(rep, "[h<a>, f<b>] = -2 (a.b) f<p>", d, c + 2 * pr * mod.op(F, d))
    if raise_on_failure and rep.failures:
        raise RelationViolation(*rep.failures[0])
    return rep


def _eta_between(mod, src_d, tgt_d):
    """Multiplication by eta from R_{src} to R_{tgt} (tgt = src - 1)."""
    src, tgt = mod.components[src_d], mod.components[tgt_d]
    rows, cols, vals = [], [], []
    for i, b in enumerate(src.basis):
        for kb, c in tgt.reduce(el_mul_eta({b: 1}, 1)).items():
            rows.append(tgt.index[kb]); cols.append(i); vals.append(c)
    return sparse.csr_matrix((np.array(vals, dtype=np.int64), (rows, cols)), shape=(tgt.dim, src.dim), dtype=np.int64)


def localization_product(g, N):
    """prod_k e<alpha_k> applied to eta^{N-1} vol in the free ring Lambda[eta] (e<p> inverted, no reduction)."""
    x = {(N - 1, (1 << (2 * g)) - 1): 1}
    for k in range(2 * g):
        x = _apply(OperatorKind.E_A, x, k, g, 1)
    return x


def localization_regenerates_relation(g, N):
    """Whether the product equals +-eta^s prod_i (eta - 2 theta_i) for some s."""
    x = localization_product(g, N)
    C = chern_relation(g, g)  # prod (eta - 2 theta_i)
    if not x:
        return False, None
    jmax = max(j for j, _ in x)
    cmax = max(j for j, _ in C)
    s = jmax - cmax
    lead = x.get((jmax, 0))
    if lead is None or lead not in (1, -1):
        return False, None
    target = {(j + s, mk): lead * c for (j, mk), c in C.items()}
    return x == target, (lead, s)


# -- fixed-locus Fock model


class ChiClass(Enum):
    TRIVIAL = "trivial"
    TWO_TORSION = "two_torsion"
    GENERIC = "generic"

    @property
    def delta(self):
        return 0 if self is ChiClass.GENERIC else 1

    @property
    def nontrivial(self):
        return self is not ChiClass.TRIVIAL


@dataclass
class FockModel:
    """Sym[e0<1>, e0<p>] (x) Lambda[e0<alpha_k>] acting on the vacuum; f0 acts by contraction."""
    g: int
    chi: ChiClass
    d_max: int

    def __post_init__(self):
        self.n_odd = 2 * self.g - 2 if self.chi.nontrivial else 2 * self.g
        self.n_odd = max(self.n_odd, 0)
        self.even = 0 if self.chi.nontrivial else 2  # e0<1>, e0<p>
        basis = []
        for d in range(self.d_max + 1):
            for mask in range(1 << self.n_odd):
                r = bin(mask).count("1")
                if r > d:
                    continue
                rest = d - r
                if self.even:
                    basis += [(i, rest - i, mask) for i in range(rest + 1)]
                elif rest == 0:
                    basis.append((0, 0, mask))
        self.basis = basis
        self.index = {b: i for i, b in enumerate(basis)}

    def degree(self, b):
        i, j, mask = b
        return 2 * j + bin(mask).count("1")

    def symdeg(self, b):
        return b[0] + b[1] + bin(b[2]).count("1")

    def character(self):
        c = Counter()
        for b in self.basis:
            c[(self.symdeg(b), self.degree(b))] += 1
        return c

    def _odd_pair(self, k, l):
        h = self.n_odd // 2
        return pairing(k, l, h)

    def create(self, kind, k=None):
        """Matrix of e0<1>, e0<p> (even) or e0<alpha_k> (odd), truncated at d_max."""
        rows, cols, vals = [], [], []
        for c, (i, j, mask) in enumerate(self.basis):
            if kind == "1":
                tgt, v = (i + 1, j, mask), 1
            elif kind == "p":
                tgt, v = (i, j + 1, mask), 1
            else:
                r = wedge(k, mask)
                if r is None:
                    continue
                tgt, v = (i, j, r[1]), r[0]
            if tgt in self.index:
                rows.append(self.index[tgt]); cols.append(c); vals.append(v)
        n = len(self.basis)
        return sparse.csr_matrix((np.array(vals, dtype=np.int64), (rows, cols)), shape=(n, n), dtype=np.int64)

    def annihilate(self, kind, l=None):
        """f0<gamma>: contraction with the intersection pairing (int 1.p = 1, int alpha_k alpha_l)."""
        rows, cols, vals = [], [], []
        for c, (i, j, mask) in enumerate(self.basis):
            if kind == "1":   # pairs with p: d/d e0<p>
                if j:
                    rows.append(self.index[(i, j - 1, mask)]); cols.append(c); vals.append(j)
            elif kind == "p":  # pairs with 1
                if i:
                    rows.append(self.index[(i - 1, j, mask)]); cols.append(c); vals.append(i)
            else:
                for k in range(self.n_odd):
                    pr = self._odd_pair(k, l)
                    r = deriv(k, mask) if pr else None
                    if r:
                        rows.append(self.index[(i, j, r[1])]); cols.append(c); vals.append(pr * r[0])
        n = len(self.basis)
        return sparse.csr_matrix((np.array(vals, dtype=np.int64), (rows, cols)), shape=(n, n), dtype=np.int64)

    def heisenberg_ok(self):
        """[f0<g2>, e0<g1>] (super) is the scalar int g1 g2 on every state below the truncation degree."""
        n = len(self.basis)
        keep = np.array([self.symdeg(b) < self.d_max for b in self.basis])
        gens = ([("1", None), ("p", None)] if self.even else []) + [("a", k) for k in range(self.n_odd)]
        pairing_int = {("1", "p"): 1, ("p", "1"): 1}
        for kind1, k in gens:
            for kind2, l in gens:
                e, f = self.create(kind1, k), self.annihilate(kind2, l)
                odd = kind1 == "a" and kind2 == "a"
                comm = (f @ e + e @ f) if odd else (f @ e - e @ f)
                if odd:
                    s = self._odd_pair(k, l)
                elif kind1 == "a" or kind2 == "a":
                    s = 0
                else:
                    s = pairing_int.get((kind1, kind2), 0)
                diff = (comm - s * sparse.identity(n, dtype=np.int64)).toarray()[:, keep]
                if np.any(diff):
                    return False
        return True


def macdonald_coefficients(g, d_max, chi):
    """Coefficients of (1+xt)^{2g}/((1-x)(1-xt^2)) (trivial chi) or (1+xt)^{2g-2} (otherwise), via sympy."""
    from sympy import Poly, series, symbols
    x, t = symbols("x t")
    f = (1 + x * t) ** (2 * g) / ((1 - x) * (1 - x * t ** 2)) if not chi.nontrivial else (1 + x * t) ** max(2 * g - 2, 0)
    s = series(f, x, 0, d_max + 1).removeO()
    out = Counter()
    for d in range(d_max + 1):
        c = s.coeff(x, d)
        if c != 0:
            for (e,), v in Poly(c, t).terms():
                out[(d, e)] += int(v)
    return out


@dataclass(frozen=True)
class GradedChar:
    """Multiset over (a-degree, cohomological degree, weight, torsion symbol)."""
    terms: tuple  # sorted ((key, mult), ...)

    @classmethod
    def of(cls, counter):
        return cls(tuple(sorted((k, v) for k, v in counter.items() if v)))

    def counter(self):
        return Counter(dict(self.terms))

    def __add__(self, other):
        return GradedChar.of(self.counter() + other.counter())

    def first_difference(self, other):
        a, b = self.counter(), other.counter()
        for k in sorted(set(a) | set(b)):
            if a[k] != b[k]:
                return k, a[k], b[k]
        return None

    def to_json(self):
        return [[*k, v] for k, v in self.terms]

    @classmethod
    def from_json(cls, rows):
        return cls.of(Counter({tuple(r[:-1]): r[-1] for r in rows}))


def symmetric_product_character(g, d_max, chi=ChiClass.TRIVIAL):
    """Character of H(S^d C, chi) for d <= d_max from the Fock model: keys (d, degree, weight, '')."""
    model = FockModel(g, chi, d_max)
    c = Counter()
    for (d, deg), v in model.character().items():
        c[(d, deg, deg, "")] += v
    return GradedChar.of(c)


# -- local cohomology along the attracting Lagrangian of T*P^1


def chart_cech(weights_of, exps_range, invert):
    """Cech complex R -> R[1/x_invert] on monomials x^i y^j of a two-variable chart.

    Returns (H0, H1) as lists of exponent pairs: H0 = kernel (always empty), H1 = monomials
    of R[1/x] not in R.
    """
    h0, h1 = [], []
    for i, j in exps_range:
        in_R = i >= 0 and j >= 0
        in_Rx = (j >= 0) if invert == 0 else (i >= 0)
        if in_Rx and not in_R:
            h1.append((i, j))
    return h0, h1


@dataclass(frozen=True)
class LocalCohomology:
    m: int
    sub: GradedChar    # piece supported on the fiber over infinity
    quot: GradedChar   # piece supported on the zero section near 0
    h0: int
    h2: int

    @property
    def total(self):
        return self.sub + self.quot


def local_cohomology_character(m, a_min, fiber_weights=None):
    """Monomials q^beta a^A of H^1_L(O(m)) on T*P^1 with A >= a_min, keyed (A, beta, beta, '').

    Chart at infinity: X' (weight a^2), Y' (weight q a^-2), support X' = 0, fiber weight a^{-m}.
    Chart at 0: X (weight a^-2), Y (weight q a^2), support Y = 0, fiber weight a^{m}.
    """
    w0, winf = fiber_weights if fiber_weights is not None else (m, -m)
    span = max(0, (abs(m) + abs(a_min)) // 2 + 2)
    # infinity chart: X'^i Y'^j with i < 0
    grid = [(i, j) for i in range(-span - 1, span + 1) for j in range(-span - 1, span + 1)]
    _, h1_inf = chart_cech(None, grid, invert=0)
    _, h1_zero = chart_cech(None, grid, invert=1)
    sub, quot = Counter(), Counter()
    for i, j in h1_inf:
        A, beta = winf + 2 * i - 2 * j, j
        if A >= a_min:
            sub[(A, beta, beta, "")] += 1
    for i, j in h1_zero:
        A, beta = w0 - 2 * i + 2 * j, j
        if A >= a_min:
            quot[(A, beta, beta, "")] += 1
    return LocalCohomology(m, GradedChar.of(sub), GradedChar.of(quot), 0, 0)


# -- weights: (a exponent, q^{1/2} exponent, cohomological degree, torsion symbols)


@dataclass(frozen=True)
class Weight:
    a: int = 0
    qh: int = 0
    coh: int = 0
    tors: tuple = ()  # sorted ((symbol, exponent), ...)

    def __mul__(self, o):
        t = Counter(dict(self.tors))
        t.update(dict(o.tors))
        return Weight(self.a + o.a, self.qh + o.qh, self.coh + o.coh, tuple(sorted((k, v) for k, v in t.items() if v)))

    def inv(self):
        return Weight(-self.a, -self.qh, -self.coh, tuple((k, -v) for k, v in self.tors))

    def __pow__(self, n):
        out = Weight()
        base = self if n >= 0 else self.inv()
        for _ in range(abs(n)):
            out = out * base
        return out

    def reduce(self, chi):
        """Torsion symbols: dropped for trivial chi_0; for two-torsion chi_0 taken mod 2, and chi_0(K) = 1
        since K is twice a theta characteristic."""
        if chi is ChiClass.TRIVIAL:
            return Weight(self.a, self.qh, self.coh, ())
        if chi is ChiClass.TWO_TORSION:
            return Weight(self.a, self.qh, self.coh, tuple((k, v % 2) for k, v in self.tors if v % 2 and k != "K"))
        return self

    def __repr__(self):
        t = "".join(f" chi0({k})^{v}" for k, v in self.tors)
        return f"(q^1/2 a)^{self.a} q^({Fraction(self.qh - self.a, 2)})[deg {self.coh}]{t}"


def tate(n):
    """<<n>> = [n](n/2): degree k -> k - n and Frobenius weight q^{-n/2}."""
    return Weight(0, -n, -n)


def chi_line(g, deg_m, m=0, k=0):
    deg = m * deg_m + k * (2 * g - 2)
    tors = tuple(sorted((s, e) for s, e in (("K", k), ("M", m)) if e))
    return Weight(-deg, -deg, 0, tors)


def chi_point(n=1):
    """The character at a degree-one point, to the n-th power: (q^{1/2} a)^{-n}."""
    return Weight(-n, -n, 0, ())


def cohomology_classes(g, chi, square=False):
    """Weights of a basis of H^*(C, chi) (or chi^2): (H0, H1, H2) lists.

    chi = c^deg chi0 with c = (q^{1/2} a)^{-1}; H^1 classes are pure of weight 1.
    """
    c = chi_point(2 if square else 1)
    nontrivial = chi.nontrivial and not (square and chi is ChiClass.TWO_TORSION)
    if nontrivial:
        return [], [c * Weight(0, 1, 1)] * (2 * g - 2), []
    return [c], [c * Weight(0, 1, 1)] * (2 * g), [c * Weight(0, 2, 2)]


def top_class_torsion(g, chi, square=False):
    """Torsion symbol of Lambda^top H^1 for nontrivial chi0: the canonical linear system gives chi0(K)."""
    nontrivial = chi.nontrivial and not (square and chi is ChiClass.TWO_TORSION)
    if not nontrivial:
        return Weight()
    return Weight(0, 0, 0, (("K", 2 if square else 1),))


def determinant_weight(g, chi, square=False):
    """Lambda^top H^*(C, chi) = det H^1 (x) (det H^0 det H^2)^{-1}."""
    h0, h1, h2 = cohomology_classes(g, chi, square)
    w = Weight()
    for x in h1:
        w = w * x
    for x in h0 + h2:
        w = w * x.inv()
    return (w * top_class_torsion(g, chi, square)).reduce(chi)


def _half(w):
    if w.a % 2 or w.qh % 2 or w.coh % 2 or any(v % 2 for _, v in w.tors):
        raise LedgerMismatch("sqrt det", f"{w} has no square root")
    return Weight(w.a // 2, w.qh // 2, w.coh // 2, tuple((k, v // 2) for k, v in w.tors))


@dataclass
class LedgerReport:
    g: int
    deg_m: int
    chi: ChiClass
    rows: list
    totals: dict
    expected: dict
    determinant: Weight
    determinant_expected: Weight

    @property
    def ok(self):
        return self.totals == self.expected and self.determinant == self.determinant_expected

    def to_json(self):
        return {
            "g": self.g, "deg_M": self.deg_m, "chi": self.chi.value,
            "rows": [[side, part, name, repr(w)] for side, part, name, w in self.rows],
            "totals": {k: repr(v) for k, v in self.totals.items()},
            "expected": {k: repr(v) for k, v in self.expected.items()},
            "determinant": repr(self.determinant),
            "verdict": "pass" if self.ok else "fail",
        }


def thm2_weight_ledger(g, deg_m, chi=ChiClass.TRIVIAL, raise_on_mismatch=True):
    """Generator weights of the sub and quotient computed from the moduli side and the spinor side."""
    if g == 0:
        chi = ChiClass.TRIVIAL  # Pic^0 of P^1 is trivial
    delta = chi.delta
    K_inv = chi_line(g, deg_m, k=-1)
    M, M_inv = chi_line(g, deg_m, m=1), chi_line(g, deg_m, m=-1)
    rows = []
    # moduli side: D = 0 classes of the fixed loci with their attracting-cell and centering shifts
    sub_mod = [("local system chi(N_s), N_s = M", M), ("attracting cell <<-2 deg D>>", tate(0)),
               ("centering <<-2 deg L + g - 1>>", tate(g - 1)), ("chi(K)^-1", K_inv)]
    quot_mod = [("local system chi(N_s), N_s = M^-1", M_inv),
                ("attracting cell <<2 deg M + 2 - 2g>>", tate(2 * deg_m + 2 - 2 * g)),
                ("centering <<-2 deg L + g - 1>>", tate(-2 * deg_m + g - 1)), ("chi(K)^-1", K_inv)]
    # spinor side: Spin from Lambda^top H^1(C, chi^2), then O_vir, O(M), local cohomology
    h1_sq = cohomology_classes(g, chi, square=True)[1]
    det2 = Weight()
    for x in h1_sq:
        det2 = det2 * x
    det2 = (det2 * top_class_torsion(g, chi, square=True)).reduce(chi)
    spin_sub = _half(det2).inv()
    rank = len(h1_sq)
    spin_quot = spin_sub * tate(-rank)
    sub_spin = [("Spin", spin_sub), ("O_vir = Spin <<-delta>>", tate(-delta)), ("O(M)", M),
                ("local cohomology chi^{2 delta}", chi_point(2 * delta))]
    quot_spin = [("Spin", spin_quot), ("O_vir = Spin <<-delta>>", tate(-delta)), ("O(M)", M_inv),
                 ("local cohomology chi^{2 delta} <<2 delta>>", chi_point(2 * delta) * tate(2 * delta))]
    totals = {}
    for side, part, items in (("moduli", "sub", sub_mod), ("moduli", "quot", quot_mod),
                              ("spinor", "sub", sub_spin), ("spinor", "quot", quot_spin)):
        w = Weight()
        for name, x in items:
            x = x.reduce(chi)
            rows.append((side, part, name, x))
            w = w * x
        totals[f"{side}:{part}"] = w.reduce(chi)
    expected_sub = (chi_line(g, deg_m, m=1, k=-1) * tate(g - 1)).reduce(chi)
    expected_quot = (chi_line(g, deg_m, m=-1, k=-1) * tate(1 - g)).reduce(chi)
    expected = {"moduli:sub": expected_sub, "moduli:quot": expected_quot,
                "spinor:sub": expected_sub, "spinor:quot": expected_quot}
    det = determinant_weight(g, chi)
    det_expected = (chi_line(g, deg_m, k=1) * tate(2 - 2 * g)).reduce(chi)
    rep = LedgerReport(g, deg_m, chi, rows, totals, expected, det, det_expected)
    if raise_on_mismatch and not rep.ok:
        for key in totals:
            if totals[key] != expected[key]:
                raise LedgerMismatch(key, f"{totals[key]} != {expected[key]}")
        raise LedgerMismatch("determinant", f"{det} != {det_expected}")
    return rep


# -- character identity at genus zero


def g0_window(m, d_max):
    top = min(1, m + 1)
    return list(range(top, top - d_max - 1, -1))


def moduli_side_g0(m, ds, centering_offset=0):
    """Classes of H_c(QMN_d) from the stable module, with the fixed-locus split and all twists."""
    g = 0
    sub, quot = Counter(), Counter()
    for d in ds:
        n_sub = 1 - d          # QM(infinity) component: P^{D}, D = -d
        n_quot = m - d + 1     # QM(0) component: P^{D'}, D' = m - d
        N = m - 2 * d + 2
        if N and Component(g, m, d).N != n_sub + n_quot:
            raise CharacterMismatch(("dimension", d), N, n_sub + n_quot)
        ns = chi_line(g, m - 2 * d, m=1)  # N_s = det V (x) L^-2 of degree m - 2d
        twist = ns * tate(-2 * d + g - 1 + centering_offset) * chi_line(g, m, k=-1)
        for j in range(N):
            k = 2 * j - 2 * (m + 1 - g)
            w = Weight(0, k, k) * twist
            target = sub if j >= N - n_sub else quot
            target[(w.a, w.coh, w.qh, "")] += 1
    return GradedChar.of(sub), GradedChar.of(quot)


def spinor_side_g0(m, ds):
    """Local cohomology monomials q^beta a^A -> (q^{1/2} a)^A <<-2 beta>> <<-delta>>, delta = 1."""
    A_set = {2 * d - m - 2 for d in ds}
    lc = local_cohomology_character(m, min(A_set))
    out = []
    for piece in (lc.sub, lc.quot):
        c = Counter()
        for (A, beta, _, _), v in piece.terms:
            if A in A_set:
                w = Weight(A, A, 0) * tate(-2 * beta) * tate(-1)
                c[(w.a, w.coh, w.qh, "")] += v
        out.append(GradedChar.of(c))
    return tuple(out)


def thm2_character_check_g0(m, d_max, centering_offset=0):
    ds = g0_window(m, d_max)
    lsub, lquot = moduli_side_g0(m, ds, centering_offset)
    rsub, rquot = spinor_side_g0(m, ds)
    for name, l, r in (("sub", lsub, rsub), ("quot", lquot, rquot)):
        diff = l.first_difference(r)
        if diff:
            raise CharacterMismatch((name, *diff[0]), diff[1], diff[2])
    return True


# -- exception scan


def generic_pieces(g, m):
    """Classes of the generic-chi sub (D at deg L = -D) and quotient (D' at deg L = m - D'), with degrees."""
    char = symmetric_product_character(g, max(2 * g - 2, 0), ChiClass.GENERIC)
    sub, quot = [], []
    for (D, deg, _, _), v in char.terms:
        # sub: H(S^D C) <<-2D>> then centering at deg L = -D
        w = Weight(0, deg, deg) * tate(-2 * D) * tate(2 * D + g - 1)
        sub.append((-D, w.coh, D))
        # quotient: H(S^D' C) <<2m + 2 - 2g>> then centering at deg L = m - D'
        w = Weight(0, deg, deg) * tate(2 * m + 2 - 2 * g) * tate(-2 * (m - D) + g - 1)
        quot.append((m - D, w.coh, D))
    return sub, quot


def exception_scan(g_max, m_span=None):
    """(g, deg M) where h<p> (degree 2, same deg L) can map the quotient generator to the sub cogenerator."""
    hits = []
    for g in range(1, g_max + 1):
        span = m_span if m_span is not None else 4 * g_max + 4
        for m in range(-span, span + 1):
            sub, quot = generic_pieces(g, m)
            if not sub or not quot:
                continue
            cogen = max(sub, key=lambda x: x[1])     # top-degree sub class
            gen = min(quot, key=lambda x: x[1])      # bottom-degree quotient class
            if gen[0] == cogen[0] and gen[1] + 2 == cogen[1]:
                hits.append((g, m))
    return hits
