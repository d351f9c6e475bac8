"""Compare the competing fifth-coefficient bound variants against the oracle.

For each parameter value the search maximizes |a5| over the relaxed
feasible set and reports the margin to every variant.

Usage: python3 scripts/adjudicate_a5.py [--samples N] [--seed S]
"""

import argparse

from bikoeff.classes import parse_spec
from bikoeff.oracle import SearchConfig, check_a5_system


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--samples", type=int, default=20_000)
    ap.add_argument("--seed", type=int, default=99)
    args = ap.parse_args()
    cfg = SearchConfig(seed=args.seed, samples=args.samples, refine_top=2, refine_steps=60)

    specs = [f"st:lambda=0:order:rho={r}" for r in ("0", "1/4", "1/2")]
    specs += [f"ss:beta={b}" for b in ("1/2", "3/4", "1")]
    for text in specs:
        rep = check_a5_system(parse_spec(text), cfg)
        print(f"{rep.spec_text}: best |a5| = {rep.best_value:.8f} "
              f"({rep.feasible_count}/{rep.samples} feasible)")
        for name, v in sorted(rep.variants.items()):
            status = "VIOLATED" if v["violated"] else "ok"
            print(f"    {name:10s} bound {v['bound']:.8f}  slack {v['slack']:+.4e}  {status}")


if __name__ == "__main__":
    main()
