"""Spectral data of the Hecke operator on P^1 over F_q.

Prints the tempered interval, the two residual eigenvalues, the kernel residues
and the smallest Gram eigenvalue of the pseudo-Eisenstein pairing on a^-4..a^4.
"""
import argparse

import numpy as np

from eisgen.exact import RatFun, ratfun_to_text, scalar_to_text
from eisgen.spectral import gram_matrix, kernel_residues, pairing_norm, spectral_split, spectrum


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--q", type=int, default=2)
    args = p.parse_args()
    s = spectrum(args.q)
    lo, hi = s.continuous
    print(f"continuous spectrum  [{lo:.4f}, {hi:.4f}]")
    print(f"discrete eigenvalues {list(s.discrete)}")
    rp, rm = kernel_residues()
    print(f"kernel residues      {scalar_to_text(rp)}, {scalar_to_text(rm)}")
    a = RatFun.gen("a")
    for w in (a, a + 1 / a, a ** 3 - 2 / a):
        sp = spectral_split(w)
        print(f"|{ratfun_to_text(w)}|^2 = {scalar_to_text(pairing_norm(w, w))}  split ok: {sp.ok}")
    print(f"min Gram eigenvalue  {np.linalg.eigvalsh(gram_matrix(args.q)).min():.3e}")


if __name__ == "__main__":
    main()
