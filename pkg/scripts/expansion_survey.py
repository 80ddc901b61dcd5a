#!/usr/bin/env python3
"""Survey the fixture catalog: D_n growth, expansion brackets, entropy.

Prints one row per rule. The lambda0 column shows the bracket
[D_N^(1/N), deg]; for a non-expanding rule the lower end stays at 1 no
matter how far N goes, which is the point of including z2m1.
"""

import argparse
import math

from twotile import (
    RULE_FIXTURES,
    entropy_report,
    expansion_report,
    fixture,
    measure_model,
    orbit_report,
)


def survey(names, nmax):
    header = f"{'rule':<12} {'k':>2} {'deg':>3}  {'D_1..D_N':<24} {'lambda0':<14} {'h_top':>7}  periodic-critical"
    print(header)
    print("-" * len(header))
    for name in names:
        rule = fixture(name)
        exp = expansion_report(rule, nmax)
        ent = entropy_report(measure_model(rule))
        orb = orbit_report(rule)
        ds = " ".join(str(d) for d in exp.d_values)
        bracket = f"[{exp.lambda0_lower:.4f}, {exp.lambda0_upper}]"
        print(
            f"{rule.name:<12} {rule.k:>2} {rule.deg:>3}  {ds:<24} {bracket:<14} "
            f"{ent.h_top:>7.4f}  {'yes' if orb.has_periodic_critical else 'no'}"
        )
        if exp.first_expanding_level is None:
            print(f"{'':<12} combinatorially non-expanding up to N={nmax}")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max", type=int, default=4, help="compute D_1..D_max")
    ap.add_argument(
        "--rules",
        nargs="*",
        default=list(RULE_FIXTURES),
        help="fixture names (default: the whole catalog)",
    )
    args = ap.parse_args()
    # grid:5:5 at N=4 means 1.2M tiles; trim it unless asked explicitly
    names = args.rules
    if names == list(RULE_FIXTURES) and args.max > 3:
        print(f"note: capping grid:5:5 at N=3 (deg 25 grows fast)\n")
        survey([n for n in names if n != "grid:5:5"], args.max)
        survey(["grid:5:5"], 3)
    else:
        survey(names, args.max)


if __name__ == "__main__":
    main()
