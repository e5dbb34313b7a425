"""Sweep the nature probability p in the two-player example.

    python scripts/threshold_sweep.py [--steps 20] [--json out.json]

For each p strictly between 0 and 1 prints A's expected utility from going across in its own
game, the verifier verdict and maximal regret for the three named
profiles, and the number of pure generalized equilibria.
"""
import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))

from awaregames.bundle import load_bundle, load_profile  # noqa: E402
from awaregames.equilibrium import (enumerate_pure_equilibria, expected_utility,  # noqa: E402
                                    verify_generalized_nash)

NAMES = ("e1", "e2", "e3")


def sweep(steps: int) -> list[dict]:
    profiles = {n: load_profile(ROOT / "corpus" / f"{n}.prof") for n in NAMES}
    rows = []
    for k in range(1, steps):
        p = Fraction(k, steps)
        gs = load_bundle(ROOT / "corpus" / "fig1.awg", {"p": p})
        row = {"p": str(p), "eu_across": str(expected_utility(gs, profiles["e1"], "A", "GA")),
               "pure_equilibria": len(enumerate_pure_equilibria(gs))}
        for n, gp in profiles.items():
            rep = verify_generalized_nash(gs, gp)
            row[n] = {"ok": rep.ok, "max_regret": str(rep.max_regret),
                      "tie": any(e.tie for e in rep.entries)}
        rows.append(row)
    return rows


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--steps", type=int, default=20)
    ap.add_argument("--json")
    args = ap.parse_args()
    rows = sweep(args.steps)
    print(f"{'p':>6} {'EU across':>9} " + " ".join(f"{n:>12}" for n in NAMES) + "  #pure")
    for r in rows:
        cells = []
        for n in NAMES:
            v = r[n]
            mark = ("eq" if v["ok"] else "no") + ("*" if v["tie"] else "")
            cells.append(f"{mark:>4} {v['max_regret']:>7}")
        print(f"{r['p']:>6} {r['eu_across']:>9} " + " ".join(cells) + f"  {r['pure_equilibria']:>5}")
    print("* a different pure choice at a reached class does equally well")
    if args.json:
        Path(args.json).write_text(json.dumps(rows, indent=2) + "\n", encoding="utf-8")


if __name__ == "__main__":
    main()
