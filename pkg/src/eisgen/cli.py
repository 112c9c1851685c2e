"""Command-line front end: every verification as a subcommand with JSON or CSV output.

Exit codes: 0 success, 1 verification failure (JSON report on stdout), 2 parse or validation error.
"""
from __future__ import annotations

import argparse
import csv
import io
import sys

from . import bun, corralg, genus, kchar, spectral, tree
from .config import Config, env_budget
from .curve import P1, load_curve
from .errors import (CharacterMismatch, EisgenError, LedgerMismatch, ParseError, RelationViolation,
                     VerificationFailure)
from .exact import (RatFun, ScalarQ, dumps, laurent, parse_expr, ratfun_to_json, ratfun_to_text, scalar_to_json,
                    scalar_to_text)
from .verify import SUITES, run_suites, surd_text


class UsageError(EisgenError):
    pass


def scalar_payload(s, q=None):
    out = {"text": scalar_to_text(s), "exact": scalar_to_json(s)}
    if q is not None:
        out["at_q"] = surd_text(s.at(q))
    return out


def ratfun_payload(f):
    return {"text": ratfun_to_text(f), "exact": ratfun_to_json(f)}


def _curve(args):
    return load_curve(args.curve) if args.curve else P1


def _expr(text, name="--expr"):
    if text is None:
        raise UsageError(f"{name} is required")
    return parse_expr(text)


def _need(args, *names):
    for n in names:
        if getattr(args, n) is None:
            raise UsageError(f"--{n} is required")


# -- subcommands: each returns (payload, ok)

def cmd_zeta(args):
    c = _curve(args)
    return {"curve": c.name, "zeta": ratfun_payload(c.zeta("t"))}, True


def cmd_xi(args):
    from .curve import check_functional_equation
    c = _curve(args)
    ok = check_functional_equation(c)
    return {"curve": c.name, "xi": ratfun_payload(c.xi("t")), "functional_equation": ok}, ok


def cmd_lhat(args):
    c = _curve(args)
    rep = genus.RepData.trivial(c)
    return {"curve": c.name, "lhat": ratfun_payload(genus.lhat(rep))}, True


def cmd_count_sections(args):
    _need(args, "q", "k", "n")
    c = bun.count_sections(args.q, args.k, args.n, args.budget)
    expected = spectral.section_count_symbolic(args.k, args.n)
    ok = expected.at(args.q) == c
    row = {"q": args.q, "k": args.k, "n": args.n, "enumerated": c, "laurent_coefficient": scalar_to_text(expected)}
    return {"table": [row], "ok": ok}, ok


def cmd_count_quasisections(args):
    _need(args, "q", "k", "d")
    r = bun.count_quasisections(args.q, args.k, args.d, args.budget)
    row = {"q": r.q, "k": r.k, "d": r.d, "enumerated": r.enumerated, "closed_form": r.closed_form,
           "sieve": r.sieve, "common_factors": r.common_factors}
    return {"table": [row], "ok": r.ok}, r.ok


def cmd_hecke(args):
    k = args.k if args.k is not None else 0
    kmax = max(k, 1) + 1
    E = spectral.eis_values(kmax + 1)
    lam = spectral.hecke_eigenvalue_a()
    D = bun.hecke_delta(E)
    ok = all(D(j) == lam * E(j) for j in range(kmax + 1))
    delta = bun.hecke_delta(bun.BunFun.delta(k))
    return {"eigenvalue": ratfun_payload(lam),
            "delta_of_point": {str(j): scalar_payload(ScalarQ(1) * v) for j, v in sorted(delta.values.items())},
            "eigenrelation_through_k": kmax, "ok": ok}, ok


def cmd_tree(args):
    q = args.q or 2
    depth = args.depth if args.depth is not None else 3
    ball = tree.explore(q, depth, args.budget)
    sizes = ball.sphere_sizes()
    bad = sum(1 for v in ball.vertices
              if tree.neighbor_profile(v) != tree.expected_profile(q, tree.vertex_bundle_type(v)))
    ok = sizes == [1] + [(q + 1) * q ** (n - 1) for n in range(1, depth + 1)] and not bad
    table = [{"distance": n, "vertices": s} for n, s in enumerate(sizes)]
    return {"q": q, "depth": depth, "table": table, "profile_failures": bad, "ok": ok}, ok


def cmd_eis(args):
    k = args.k if args.k is not None else 0
    e = spectral.eis(k, curve=_curve(args))
    tail = laurent(e, "inf", args.expand)
    coeffs = [{"exponent": ex, **scalar_payload(c, args.q)} for ex, c in zip(tail.exponents(), tail.coeffs)]
    return {"k": k, "eis": ratfun_payload(e), "laurent_at_infinity": coeffs, "exact_tail": tail.exact}, True


def cmd_ct(args):
    k = args.k if args.k is not None else 0
    return {"k": k, "constant_term": ratfun_payload(spectral.constant_term(k))}, True


def cmd_sigma(args):
    w = _expr(args.expr)
    c = _curve(args)
    s = spectral.sigma(w, c)
    ok = spectral.sigma(s, c) == 2 * s
    return {"sigma": ratfun_payload(s), "projector_identity": ok}, ok


def cmd_pairing(args):
    w1 = _expr(args.expr)
    w2 = parse_expr(args.expr2) if args.expr2 else w1
    n = spectral.pairing_norm(w1, w2)
    t = spectral.pairing_via_T(w1, w2)
    out = {"residue_formula": scalar_payload(n, args.q), "torus_integral": scalar_payload(t, args.q)}
    ok = n == t
    if args.q is not None:
        b = spectral.pairing_brute(w1, w2, args.q)
        out["brute_force_at_q"] = surd_text(b)
        ok &= b == n.at(args.q)
    out["ok"] = ok
    return out, ok


def cmd_spectrum(args):
    q = args.q or 2
    s = spectral.spectrum(q).to_json()
    rp, rm = spectral.kernel_residues()
    s["discrete_coefficients"] = [scalar_payload(rp, q), scalar_payload(rm, q)]
    s["table"] = [{"kind": "discrete", "value": v} for v in s["discrete"]]
    return s, True


def cmd_scissor(args):
    _need(args, "n", "m")
    r = kchar.scissor_check(args.n, args.m)
    row = {"n": args.n, "m": args.m, "lhs": scalar_to_text(r.lhs), "chi": scalar_to_text(r.chi),
           "inner": scalar_to_text(r.inner), "holds": r.holds}
    return {"table": [row], "ok": r.holds}, r.holds


def cmd_qgamma(args):
    cs = kchar.q_gamma(args.expand)
    res = kchar.q_gamma_residual(cs)
    ok = all(c == 0 for c in res)
    return {"coefficients": [scalar_payload(c) for c in cs], "residual_zero": ok}, ok


def cmd_integrate(args):
    w1 = _expr(args.expr)
    w2 = parse_expr(args.expr2) if args.expr2 else RatFun(1, "a")
    box = genus.BoxClass(w1, w2)
    T = genus.integrate_T(box, _curve(args))
    out = {"flag": scalar_payload(genus.integrate_flag(box)), "cotangent": scalar_payload(genus.integrate_cotangent(box)),
           "torus": scalar_payload(T)}
    ok = True
    if not args.curve:
        ok = genus.integrate_T_via_cotangent(box) == T
        out["torus_via_cotangent_agrees"] = ok
    return out, ok


def cmd_cliff(args):
    g = args.genus if args.genus is not None else 1
    m = args.m if args.m is not None else 0
    check = args.check
    if check == "relations":
        mod = corralg.build_stable_module(g, m, corralg.stable_window(g, m, 6))
        rep = corralg.check_relations(mod)
        out = {"g": g, "m": m, "window": list(mod.d_range), "checked": rep.checked,
               "failures": [{"relation": r, "witness": w} for r, w in rep.failures]}
        return out, rep.ok
    if check == "ledger":
        reps = [corralg.thm2_weight_ledger(g, m, chi, raise_on_mismatch=False).to_json() for chi in corralg.ChiClass]
        ok = all(r["verdict"] == "pass" for r in reps)
        return {"ledgers": reps}, ok
    if check == "thm2":
        try:
            corralg.thm2_character_check_g0(m, args.depth if args.depth is not None else 5)
            return {"m": m, "verdict": "pass"}, True
        except corralg.CharacterMismatch as e:
            return {"m": m, "verdict": "fail", "first_difference": list(e.key), "lhs": e.lhs, "rhs": e.rhs}, False
    hits = corralg.exception_scan(g)
    return {"g_max": g, "collisions": [list(h) for h in hits]}, True


def cmd_verify_all(args):
    q = args.q if args.q is not None else 2
    cfg = Config(budget=args.budget, jobs=args.jobs, q=q, restrict_q=args.q is not None)
    results = run_suites(cfg)
    ok = all(r["ok"] for r in results.values())
    table = [{"suite": n, "result": "pass" if r["ok"] else "fail"} for n, r in results.items()]
    return {"table": table, "suites": results, "ok": ok}, ok


COMMANDS = {
    "zeta": cmd_zeta, "xi": cmd_xi, "lhat": cmd_lhat, "count-sections": cmd_count_sections,
    "count-quasisections": cmd_count_quasisections, "hecke": cmd_hecke, "tree": cmd_tree, "eis": cmd_eis,
    "ct": cmd_ct, "sigma": cmd_sigma, "pairing": cmd_pairing, "spectrum": cmd_spectrum, "scissor": cmd_scissor,
    "qgamma": cmd_qgamma, "integrate": cmd_integrate, "cliff": cmd_cliff, "verify-all": cmd_verify_all,
}


def _budget(text):
    return int(float(text))


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--q", type=int)
    common.add_argument("--k", type=int)
    common.add_argument("--n", type=int)
    common.add_argument("--d", type=int)
    common.add_argument("--genus", type=int)
    common.add_argument("--m", type=int)
    common.add_argument("--curve")
    common.add_argument("--depth", type=int)
    common.add_argument("--expand", type=int, default=8)
    common.add_argument("--budget", type=_budget, default=None)
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--expr")
    common.add_argument("--expr2")
    common.add_argument("--check", choices=["relations", "ledger", "thm2", "exceptions"], default="relations")
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="fmt", action="store_const", const="json")
    fmt.add_argument("--csv", dest="fmt", action="store_const", const="csv")
    p = argparse.ArgumentParser(prog="eisgen", description="Exact rank-one Eisenstein and correspondence-module checks.")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return p


def _csv(table):
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(table[0]), lineterminator="\n")
    w.writeheader()
    w.writerows(table)
    return buf.getvalue()


def _summary(payload):
    width = max(len(r["suite"]) for r in payload["table"])
    lines = [f"{r['suite']:<{width}}  {r['result']}" for r in payload["table"]]
    lines.append(f"{'all':<{width}}  {'pass' if payload['ok'] else 'fail'}")
    return "\n".join(lines) + "\n"


def run(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code == 0 else 2
    if args.budget is None:
        args.budget = env_budget()
    try:
        payload, ok = COMMANDS[args.command](args)
    except ParseError as e:
        out.write(dumps({"error": "parse", "message": str(e), "position": e.position}) + "\n")
        return 2
    except (VerificationFailure, RelationViolation, LedgerMismatch, CharacterMismatch) as e:
        out.write(dumps({"error": "verification", "message": str(e)}) + "\n")
        return 1
    except (EisgenError, ValueError, OSError) as e:
        out.write(dumps({"error": "validation", "message": str(e)}) + "\n")
        return 2
    if args.fmt == "csv":
        if "table" not in payload:
            out.write(dumps({"error": "validation", "message": f"{args.command} output is JSON only"}) + "\n")
            return 2
        out.write(_csv(payload["table"]))
    elif args.fmt is None and args.command == "verify-all":
        out.write(_summary(payload))
    else:
        out.write(dumps(payload) + "\n")
    return 0 if ok else 1


def main():
    sys.exit(run())
