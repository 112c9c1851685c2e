"""Bundle types along geodesic rays in the Bruhat-Tits tree.

Toward an end given by a rational function of t the offset type(v_n) - n settles
to a constant. Toward a random end it keeps drifting, since every cancellation
in the continued-fraction expansion can drop the type again.
"""
import argparse
import random

from eisgen.gf import field_of_order
from eisgen.tree import ray_to_end, ray_type_offsets, series_of_rational


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--q", type=int, default=2)
    p.add_argument("--length", type=int, default=14)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()
    F = field_of_order(args.q)
    rng = random.Random(args.seed)
    ends = {
        "1/(1 - t)": series_of_rational(F, [1], [1, F.neg(1)], 0, args.length + 2),
        "t^-1 (1 + t)/(1 + t + t^2)": series_of_rational(F, [1, 1], [1, 1, 1], -1, args.length + 2),
        "random": {e: c for e in range(args.length + 2) if (c := rng.randrange(args.q))},
    }
    for name, end in ends.items():
        off = ray_type_offsets(ray_to_end(args.q, end, args.length))
        print(f"{name:<28} {' '.join(f'{x:3d}' for x in off)}")


if __name__ == "__main__":
    main()
