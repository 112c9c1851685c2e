"""Run the verification suites and print a timing table.

usage: python scripts/run_verify.py [--jobs N] [--q Q] [suite-number ...]
"""
import argparse
import time

from eisgen.config import Config
from eisgen.verify import SUITES, run_suites


def main():
    p = argparse.ArgumentParser()
    p.add_argument("suites", nargs="*", help="suite numbers, default all")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--q", type=int)
    args = p.parse_args()
    names = [n for n in SUITES if not args.suites or n.split()[0] in args.suites]
    cfg = Config(jobs=args.jobs, q=args.q or 2, restrict_q=args.q is not None)
    rows = []
    for name in names:
        t = time.perf_counter()
        r = run_suites(cfg.with_(jobs=1), [name])[name]
        rows.append((name, r["ok"], time.perf_counter() - t))
    width = max(len(n) for n, _, _ in rows)
    for name, ok, dt in rows:
        print(f"{name:<{width}}  {'pass' if ok else 'FAIL'}  {dt:7.2f} s")
    print(f"{'total':<{width}}  {'pass' if all(ok for _, ok, _ in rows) else 'FAIL'}  {sum(dt for *_, dt in rows):7.2f} s")


if __name__ == "__main__":
    main()
