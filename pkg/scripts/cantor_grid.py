"""|zeta| of the Cantor scene on a 50 x 50 grid right of the abscissa (CSV)."""
import os

from _common import SCENES, parser, run

from fraczeta.complexdims import line_scan, peak_spacing
from fraczeta.strings import CANTOR_DIM, cantor_zeta_closed


if __name__ == "__main__":
    args = parser(__doc__, "cantor_grid.csv").parse_args()
    os.makedirs(os.path.dirname(args.out), exist_ok=True)
    run(["grid", os.path.join(SCENES, "cantor.json"), "--re", "0.64", "2", "50",
         "--im", "0", "12", "50", "--method", "closed-form", "--jobs", str(args.jobs),
         "--out", args.out])
    peaks, _, _ = line_scan(cantor_zeta_closed, CANTOR_DIM + 0.05, (0.0, 30.0), 0.01)
    print(f"wrote {args.out}")
    print(f"peak spacing along Re s = D + 0.05: {peak_spacing(peaks):.4f}")
