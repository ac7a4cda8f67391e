"""Example 2 zeta functional on a 16 x 16 grid, 10^5 Monte Carlo samples per point (CSV)."""
import os

from _common import SCENES, parser, run

if __name__ == "__main__":
    p = parser(__doc__, "example2_grid.csv")
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()
    os.makedirs(os.path.dirname(args.out), exist_ok=True)
    run(["grid", os.path.join(SCENES, "example2.json"), "--re", "0.65", "2", "16",
         "--im", "0", "12", "16", "--samples", str(args.samples), "--seed", str(args.seed),
         "--jobs", str(args.jobs), "--out", args.out])
    print(f"wrote {args.out}")
