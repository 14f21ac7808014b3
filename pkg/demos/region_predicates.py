"""Region geometry of initial values: disks, forward balls, pre-images.

Every initial value inside the disk |z - 1/(1 - e^(2 pi i alpha))| < 1/2
produces an all-minus orbit (and its mirror image an all-plus one).  More
generally, once a sign pattern is periodic, each orbit point z_{k+r} is
pinned inside a computable ball, and pulling those balls backwards through
the greedy rule carves the plane into finite unions of intersections of
disks and half-planes, one cell per reachable sign prefix.

    python demos/region_predicates.py [--out DIR]
"""

import argparse
import json
import pathlib

from signorbit import (
    Params,
    constant_sign_disks,
    detect_sign_period,
    eval_region,
    parse_complex,
    parse_real,
    periodic_forward_balls,
    preimage_chain,
    rasterize_region,
    region_to_json,
    run_orbit,
)
from signorbit.regions import Union_, mask_to_pgm


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="demo_output")
    parser.add_argument("--res", type=int, default=512)
    args = parser.parse_args()
    out_dir = pathlib.Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    rect = (-2.0, 2.0, -2.0, 2.0)

    print("Constant-sign disks for alpha = sqrt(2):")
    alpha = parse_real("sqrt(2)") % 1.0
    minus_disk, plus_disk = constant_sign_disks(alpha)
    print(f"  all-minus disk: center {minus_disk.center:.6f}, radius 1/2")
    print(f"  all-plus  disk: center {plus_disk.center:.6f}, radius 1/2")
    print("  JSON form:", json.dumps(region_to_json(minus_disk)))
    mask = rasterize_region(Union_((minus_disk, plus_disk)), rect,
                            (args.res, args.res))
    path = out_dir / "constant_sign_disks.pgm"
    path.write_bytes(mask_to_pgm(mask))
    print(f"  wrote {path}\n")

    print("Forward balls for the 14-periodic orbit (alpha = sqrt(2)/3):")
    alpha3 = parse_real("sqrt(2)/3")
    orbit = run_orbit(Params(alpha=alpha3, z_init=parse_complex("1-i"),
                             horizon=10_000))
    hyp = detect_sign_period(orbit.signs)
    balls = periodic_forward_balls(alpha3, orbit, hyp)
    for r, ball in enumerate(balls[:5]):
        inside = eval_region(ball, orbit.z(hyp.k + r))
        print(f"  residue {r}: center {ball.center:+.4f}, "
              f"radius {ball.radius:.4f}, contains z_(k+{r}): {inside}")
    print(f"  ... ({len(balls)} balls total, one per residue)\n")

    print("Backward induction: initial values whose first steps stay inside "
          "the all-minus disk")
    for depth in (1, 3, 6):
        region = preimage_chain(minus_disk, depth, alpha)
        mask = rasterize_region(region, rect, (args.res, args.res))
        path = out_dir / f"preimage_depth{depth}.pgm"
        path.write_bytes(mask_to_pgm(mask))
        print(f"  depth {depth}: {int(mask.sum())} member pixels -> {path}")
    print("\nEach deeper pre-image splits along one more tie line, tiling "
          "the plane by sign prefixes.")


if __name__ == "__main__":
    main()
