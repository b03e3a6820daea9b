"""Batch run: L(0) dimensions, delta multiplicities, rank cases and generic certificates.

    python3 scripts/reproduce_tables.py [--field Q] [--out results.json]
"""

import argparse
import json
import time

from extremal.cli import RunConfig, run
from extremal.diagram import character_rank_analysis, named_diagram

FINITE = ["A2", "A3", "A4", "A5", "D4", "D5", "D6", "E6", "E7", "E8"]
AFFINE = ["A2~", "A3~", "A4~", "A5~", "D4~", "D5~", "D6~", "E6~", "E7~", "E8~"]
GENERIC = ["A2", "A3", "D4", "A2~", "A3~", "D4~"]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--field", default="Q")
    ap.add_argument("--out")
    args = ap.parse_args()

    results = {"sandwich": [], "rank": [], "generic": []}
    print(f"{'diagram':8s} {'dim':>5s} {'delta':>5s} {'ok':>3s} {'secs':>6s}")
    for name in FINITE + AFFINE:
        t = time.perf_counter()
        text, code = run(RunConfig("sandwich", diagram=name, field=args.field))
        rep = json.loads(text)
        dt = time.perf_counter() - t
        row = {
            "diagram": name,
            "dimension": rep["dimension"],
            "delta_multiplicity": rep.get("delta_multiplicity"),
            "verified": rep["verification"]["passed"],
            "seconds": round(dt, 3),
        }
        results["sandwich"].append(row)
        dm = "-" if row["delta_multiplicity"] is None else str(row["delta_multiplicity"])
        print(f"{name:8s} {row['dimension']:5d} {dm:>5s} {'y' if row['verified'] else 'n':>3s} {dt:6.2f}")

    print()
    for name in AFFINE:
        rep = character_rank_analysis(named_diagram(name))
        results["rank"].append({"diagram": name, **rep.as_dict()})
        print(f"{name:8s} case {rep.case}")

    print()
    for name in GENERIC:
        rep = json.loads(run(RunConfig("generic", diagram=name, field=args.field))[0])
        results["generic"].append({k: rep[k] for k in ("d1", "d2", "verdict")} | {"diagram": name})
        print(f"{name:8s} d1={rep['d1']} d2={rep['d2']} {rep['verdict']}")

    if args.out:
        with open(args.out, "w") as fh:
            json.dump(results, fh, indent=2)


if __name__ == "__main__":
    main()
