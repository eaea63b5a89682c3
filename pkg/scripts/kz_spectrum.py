"""Print Tr wedge^m of a KZ p-curvature at one random x-point, as hbar runs over F_p.

The values depend on hbar only through hbar - hbar^p, so they vanish
for every hbar in F_p and are shown here at points of GF(p^k) as well.

    python3 scripts/kz_spectrum.py --p 5 --reps 1,1 --points 4
"""
import argparse
import random

from pcurv import zoo
from pcurv.field import sampling_field
from pcurv.matrix import char_poly


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--p", type=int, default=5)
    ap.add_argument("--reps", default="1,1")
    ap.add_argument("--points", type=int, default=4)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    reps = tuple(int(t) for t in args.reps.split(","))
    conn = zoo.kz_pencil(args.p, reps)
    fld = sampling_field(args.p)
    rng = random.Random(args.seed)
    xs = {c: fld.random(rng) for c in conn.coords}
    hbars = [fld.from_int(k) for k in range(args.p)] + [fld.random(rng) for _ in range(args.points)]
    for hb in hbars:
        point = dict(xs, hbar=hb)
        cp = char_poly(conn.p_curvature_at(0, point, fld))
        wedges = [cp.trace_wedge(m) for m in range(1, conn.rank + 1)]
        w = fld.sub(hb, fld.pow(hb, args.p))
        print(f"hbar={fld.to_text(hb)}  hbar-hbar^p={fld.to_text(w)}  "
              + "  ".join(f"tw{m + 1}={fld.to_text(v)}" for m, v in enumerate(wedges)))


if __name__ == "__main__":
    main()
