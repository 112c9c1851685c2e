"""Acceptance suites shared by `verify-all` and the test suite.

Each suite returns a JSON-ready dict with an "ok" flag. Outputs carry no
timings so that repeated runs and different worker counts agree byte for byte.
"""
from __future__ import annotations

import json
import random
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from math import comb

from .bun import BunFun, count_quasisections, count_sections, hecke_delta
from .config import Config
from .corralg import (ChiClass, CharacterMismatch, FockModel, GradedChar, build_stable_module, check_relations,
                      exception_scan, localization_regenerates_relation, macdonald_coefficients, stable_window,
                      symmetric_product_character, thm2_character_check_g0, thm2_weight_ledger)
from .curve import P1, check_functional_equation, from_traces
from .errors import BudgetExceeded, LedgerMismatch
from .exact import (RatFun, ScalarQ, dumps, parse_expr, ratfun_from_json, ratfun_to_json, ratfun_to_text,
                    scalar_from_json, scalar_to_json, substitute)
from .kchar import chi_projective, q_gamma, q_gamma_residual, scissor_check
from .spectral import (eis, eis_kernel_residue, eis_values, gram_matrix, hecke_eigenvalue_a, kernel_residues,
                       pairing_brute, pairing_norm, pairing_via_T, positive_for_q_gt_1, section_count_symbolic, sigma,
                       spectral_split)
from .tree import (birkhoff_split, explore, expected_profile, neighbor_profile, random_split_matrix, tree_hecke,
                   vertex_bundle_type)

SYNTHETIC_TRACES = {2: [(1,), (-2,), (0, 1), (2, -1, 0)], 3: [(3,), (-1, 2)], 4: [(0,), (4, -3)]}


def synthetic_curves():
    return [from_traces(q, t) for q, ts in sorted(SYNTHETIC_TRACES.items()) for t in ts]


def _qs(cfg, default):
    return [cfg.q] if cfg.q in default and cfg.restrict_q else list(default)


def suite_sections(cfg):
    checked, skipped, bad = 0, 0, []
    for q in _qs(cfg, (2, 3)):
        for k in (0, 1, 2):
            for n in range(-k, k + 7):
                try:
                    c = count_sections(q, k, n, cfg.budget)
                except BudgetExceeded:
                    skipped += 1
                    continue
                checked += 1
                if section_count_symbolic(k, n).at(q) != c:
                    bad.append([q, k, n, c])
    return {"ok": not bad and checked > 0, "checked": checked, "skipped_budget": skipped, "mismatches": bad}


def suite_quasisections(cfg):
    checked, bad = 0, []
    for q in _qs(cfg, (2, 3)):
        for k in range(4):
            for d in range(4):
                r = count_quasisections(q, k, d, cfg.budget)
                checked += 1
                if not r.ok:
                    bad.append([q, k, d, r.enumerated, r.closed_form, r.sieve])
    return {"ok": not bad, "checked": checked, "mismatches": bad}


def suite_hecke(cfg):
    kmax = 20
    lam = hecke_eigenvalue_a()
    E = eis_values(kmax + 1)
    D = hecke_delta(E)
    bad = [k for k in range(kmax + 1) if D(k) != lam * E(k)]
    return {"ok": not bad, "checked": kmax + 1, "failing_k": bad}


def suite_functional_equations(cfg):
    curves = [P1] + synthetic_curves()
    bad = []
    for c in curves:
        if not check_functional_equation(c):
            bad.append([c.name, "xi"])
        L_inv = substitute(c.L_kernel("a"), -1)
        for k in range(6):
            e = eis(k, curve=c)
            if substitute(e, -1) != L_inv * e:
                bad.append([c.name, f"eis k={k}"])
    return {"ok": not bad and len(curves) >= 6, "curves": [c.name for c in curves], "failures": bad}


def suite_projector(cfg):
    bad = []
    curves = [P1, from_traces(2, (1,))]
    for c in curves:
        for n in range(-8, 9):
            w = RatFun.monomial(n)
            s = sigma(w, c)
            if sigma(s, c) != 2 * s:
                bad.append([c.name, n])
    return {"ok": not bad, "checked": 17 * len(curves), "failures": bad}


def suite_pairing(cfg):
    mons = {i: RatFun.monomial(i) for i in range(-5, 6)}
    bad, checked = [], 0
    norms = {}
    for i in mons:
        for j in mons:
            n = pairing_norm(mons[i], mons[j])
            norms[i, j] = n
            checked += 1
            if pairing_via_T(mons[i], mons[j]) != n:
                bad.append(["residue vs T", i, j])
    for q0 in _qs(cfg, (2, 3, 4)):
        for (i, j), n in norms.items():
            checked += 1
            if pairing_brute(mons[i], mons[j], q0) != n.at(q0):
                bad.append(["brute vs residue", q0, i, j])
    return {"ok": not bad, "checked": checked, "failures": bad}


def _numeric_residue(f, q0, center, radius=1e-3, n=4096):
    import numpy as np
    th = np.linspace(0, 2 * np.pi, n, endpoint=False)
    pts = center + radius * np.exp(1j * th)
    vals = np.array([f.numeric(q0, complex(p)) for p in pts])
    return complex(np.mean(vals * (pts - center)))


def surd_text(s):
    return str(s.x) if not s.y else f"{s.x} + {s.y}*sqrt({s.d})"


def suite_spectral(cfg):
    import numpy as np
    a = RatFun.gen("a")
    omegas = [RatFun.monomial(0), a, a + 1 / a, a ** 3 - 2 / a, a ** -2 + 3 * a ** 2 - a]
    split_bad = [ratfun_to_text(w) for w in omegas if not spectral_split(w).ok]
    r_plus, r_minus = kernel_residues()
    positive = positive_for_q_gt_1(r_plus) and positive_for_q_gt_1(r_minus)
    q = ScalarQ.q()
    res = eis_kernel_residue(0, 1)
    res_closed = res == (q - 1 / q) / 2
    numeric = _numeric_residue(eis(0) / a, 2, 2 ** 0.5)
    res_value = surd_text(res.at(2))
    numeric_ok = abs(numeric - 0.75) < 1e-9 and res.at(2) == Fraction(3, 4)
    mins = {}
    for q0 in _qs(cfg, (2, 3)):
        mins[q0] = float(np.linalg.eigvalsh(gram_matrix(q0)).min())
    psd = all(m >= -1e-9 for m in mins.values())
    return {"ok": not split_bad and positive and res_closed and numeric_ok and psd,
            "split_failures": split_bad, "residues_positive": positive, "kernel_residue": str(res),
            "kernel_residue_at_2": res_value, "numeric_residue_ok": numeric_ok,
            "gram_psd": psd, "advisory": {"gram_min_eigenvalue": {str(k): f"{v:.3e}" for k, v in mins.items()}}}


def euler_characteristic_oracle(n, m):
    """chi(P^{n-1}, O(m)) from h^0 and Serre duality."""
    if m >= 0:
        return comb(m + n - 1, n - 1)
    if m <= -n:
        return (-1) ** (n - 1) * comb(-m - 1, n - 1)
    return 0


def suite_scissor(cfg):
    bad = []
    for n in range(1, 5):
        for m in range(-6, 7):
            r = scissor_check(n, m)
            if not r.holds or chi_projective(n, m) != euler_characteristic_oracle(n, m) or r.chi != ScalarQ(
                    euler_characteristic_oracle(n, m)):
                bad.append([n, m])
    return {"ok": not bad, "checked": 4 * 13, "failures": bad}


def suite_qgamma(cfg):
    res = q_gamma_residual(q_gamma(13))
    bad = [i for i, c in enumerate(res) if c != 0]
    return {"ok": not bad, "order": 12, "nonzero": bad}


def suite_tree(cfg):
    out = {}
    ok = True
    rng = random.Random(cfg.seed)
    for q, depth in ((2, 5), (3, 4)):
        if cfg.restrict_q and q != cfg.q:
            continue
        ball = explore(q, depth, cfg.budget)
        sizes = ball.sphere_sizes()
        expect = [1] + [(q + 1) * q ** (n - 1) for n in range(1, depth + 1)]
        prof_bad = 0
        for v in ball.vertices:
            if neighbor_profile(v) != expected_profile(q, vertex_bundle_type(v)):
                prof_bad += 1
        F = ball.vertices[0].field
        birk_bad = 0
        for v in ball.vertices:
            if birkhoff_split(v.matrix()).recompose() != v.matrix():
                birk_bad += 1
        for _ in range(20):
            g, _ = random_split_matrix(F, rng)
            if birkhoff_split(g).recompose() != g:
                birk_bad += 1
        f = {k: rng.randrange(-9, 10) for k in range(depth + 2)}
        tree = tree_hecke(f, ball)
        alg = hecke_delta(BunFun(f), q)
        hecke_bad = [k for k in tree if tree[k] != alg(k)]
        good = sizes == expect and not prof_bad and not birk_bad and not hecke_bad
        ok &= good
        out[str(q)] = {"depth": depth, "sphere_sizes": sizes, "profile_failures": prof_bad,
                       "birkhoff_failures": birk_bad, "hecke_failures": hecke_bad, "ok": good}
    return {"ok": ok and bool(out), **out}


def suite_corralg(cfg):
    bad, neg_missed, checked = [], [], 0
    for g in range(4):
        for m in range(-2, 5):
            w = stable_window(g, m, 6)
            rep = check_relations(build_stable_module(g, m, w))
            checked += rep.checked
            if not rep.ok:
                bad.append([g, m, rep.failures[0][0], rep.failures[0][1]])
            if g:
                neg = check_relations(build_stable_module(g, m, w, e_alpha_sign=-1))
                if neg.ok:
                    neg_missed.append([g, m])
    loc = {str(g): localization_regenerates_relation(g, 2 * g + 3)[0] for g in (1, 2)}
    heis = {f"{g}:{chi.value}": FockModel(g, chi, 4).heisenberg_ok() for g in (0, 1, 2) for chi in ChiClass}
    mac = {f"{g}:{chi.value}": FockModel(g, chi, 4).character() == macdonald_coefficients(g, 4, chi)
           for g in (0, 1, 2, 3) for chi in ChiClass}
    ok = not bad and not neg_missed and all(loc.values()) and all(heis.values()) and all(mac.values())
    return {"ok": ok, "relation_checks": checked, "failures": bad, "negative_controls_missed": neg_missed,
            "localization": loc, "heisenberg": heis, "macdonald": mac}


def suite_weights_and_characters(cfg):
    ledger_bad = []
    for g in range(4):
        for m in range(-2, 3):
            for chi in ChiClass:
                try:
                    thm2_weight_ledger(g, m, chi)
                except LedgerMismatch as e:
                    ledger_bad.append([g, m, chi.value, str(e)])
    char_bad, perturb_missed = [], []
    for m in range(-3, 4):
        try:
            thm2_character_check_g0(m, 5)
        except CharacterMismatch as e:
            char_bad.append([m, str(e)])
        for off in (1, -1):
            try:
                thm2_character_check_g0(m, 5, off)
                perturb_missed.append([m, off])
            except CharacterMismatch:
                pass
    scan = sorted(exception_scan(4))
    ok = not ledger_bad and not char_bad and not perturb_missed and scan == [(2, 0)] and exception_scan(1) == []
    return {"ok": ok, "ledger_failures": ledger_bad, "character_failures": char_bad,
            "perturbations_not_detected": perturb_missed, "exception_scan": [list(x) for x in scan]}


def expression_corpus(n=50, seed=0):
    """Deterministic corpus of expression texts in a, q and q^(k/2)."""
    rng = random.Random(seed)
    atoms = ["a", "q", "q^(1/2)", "q^(-3/2)", "a^-1", "a^2", "(a - q)", "(q*a^2 - 1)", "(1 + q^(1/2)*a)", "3", "(a + 1/a)"]
    out = []
    while len(out) < n:
        terms = []
        for _ in range(rng.randint(1, 3)):
            f = rng.sample(atoms, rng.randint(1, 3))
            c = rng.randint(-4, 4) or 1
            terms.append(f"{c}*" + "*".join(f))
        text = " + ".join(terms)
        if rng.random() < 0.5:
            text = f"({text})/({rng.choice(atoms)} - {rng.randint(2, 5)})"
        try:
            parse_expr(text)
        except Exception:
            continue
        out.append(text)
    return out


def suite_roundtrip(cfg):
    bad = []
    for text in expression_corpus():
        f = parse_expr(text)
        if ratfun_from_json(json.loads(dumps(ratfun_to_json(f)))) != f:
            bad.append(["json", text])
        if parse_expr(ratfun_to_text(f)) != f:
            bad.append(["text", text])
    scalars = [ScalarQ.q(), ScalarQ.sqrt_q() + 1, (ScalarQ.q() - 1) / (ScalarQ.q() + ScalarQ.sqrt_q()), ScalarQ(0)]
    for s in scalars:
        if scalar_from_json(json.loads(dumps(scalar_to_json(s)))) != s:
            bad.append(["scalar", repr(s)])
    ch = symmetric_product_character(2, 4, ChiClass.TRIVIAL)
    if GradedChar.from_json(json.loads(dumps(ch.to_json()))) != ch:
        bad.append(["graded", "S^d C, g=2"])
    return {"ok": not bad, "corpus": 50, "failures": bad}


SUITES = {
    "1 sections": suite_sections,
    "2 quasisections": suite_quasisections,
    "3 hecke": suite_hecke,
    "4 functional equations": suite_functional_equations,
    "5 projector": suite_projector,
    "6 pairing": suite_pairing,
    "7 spectral": suite_spectral,
    "8 scissor": suite_scissor,
    "9 q-gamma": suite_qgamma,
    "10 tree": suite_tree,
    "11 correspondence relations": suite_corralg,
    "12 weights and characters": suite_weights_and_characters,
    "13 round trip": suite_roundtrip,
}


def _run_one(args):
    name, cfg = args
    return name, SUITES[name](cfg)


def run_suites(cfg=None, names=None):
    """Run suites in a fixed order; with cfg.jobs > 1 they run in worker processes."""
    cfg = cfg or Config()
    names = list(names or SUITES)
    work = [(n, cfg) for n in names]
    if cfg.jobs > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as ex:
            results = dict(ex.map(_run_one, work))
    else:
        results = dict(map(_run_one, work))
    return {n: results[n] for n in names}
