"""Random edge (and delta) values, completed and checked for membership.

    python3 scripts/fullness_sweep.py --diagram D4~ --field F5 --trials 50
"""

import argparse
import random

from extremal import FieldSpec, build_bracket, classify, complete_parameters, compute_sandwich, membership_in_X, named_diagram


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--diagram", default="triangle")
    ap.add_argument("--field", default="F5")
    ap.add_argument("--trials", type=int, default=50)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    field = FieldSpec.parse(args.field)
    g = named_diagram(args.diagram)
    d = classify(g)
    sand = compute_sandwich(g, field)
    rng = random.Random(args.seed)
    fails = 0
    for _ in range(args.trials):
        edges = {e: field.random_element(rng) for e in g.edges}
        delta = field.random_element(rng) if d.is_affine else None
        h = complete_parameters(sand, d, edges, delta)
        v = membership_in_X(build_bracket(sand, h))
        if not v.member:
            fails += 1
            print("not a member:", v.witnesses[:2])
    print(f"{args.diagram} over {field}: {args.trials - fails}/{args.trials} members (dim L(0) = {sand.dimension})")


if __name__ == "__main__":
    main()
