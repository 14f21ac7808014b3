"""Gallery of greedy sign-choice orbits.

Three parameter pairs with strikingly different geometry: a 222-periodic
pattern whose points fill a thick annulus, a 51-periodic slow spiral at a
tiny rotation number, and a 14-periodic orbit that settles onto just four
concentric circles.  For each one we run the orbit, detect the sign period,
and plot successive windows of the trajectory.

    python demos/orbit_gallery.py [--out DIR]
"""

import argparse
import pathlib

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from signorbit import (
    Params,
    circle_structure,
    detect_sign_period,
    min_ambiguity,
    parse_complex,
    parse_real,
    run_orbit,
)

GALLERY = [
    ("annulus_222", "1.0415/sqrt(2*pi^2)", "0.0001+5*i",
     [(0, 1000), (0, 5000), (0, 10000)]),
    ("spiral_51", "0.00702367", "2.0176+4.8585*i",
     [(2000, 3000), (2000, 4000), (2000, 5000)]),
    ("four_circles_14", "sqrt(2)/3", "1-i",
     [(100, 2000), (100, 5000), (100, 8000)]),
]


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="demo_output")
    parser.add_argument("--horizon", type=int, default=10_000)
    args = parser.parse_args()
    out_dir = pathlib.Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)

    for name, alpha_text, z_text, windows in GALLERY:
        alpha = parse_real(alpha_text)
        z_init = parse_complex(z_text)
        orbit = run_orbit(Params(alpha=alpha, z_init=z_init,
                                 horizon=args.horizon))
        hyp = detect_sign_period(orbit.signs)
        print(f"{name}: alpha = {alpha_text} = {alpha!r}")
        print(f"  sign period p = {hyp.p} from index k = {hyp.k} "
              f"({hyp.repeats_observed} full repeats observed)")
        print(f"  min ambiguity = {min_ambiguity(orbit, 0):.3g}")
        structure = circle_structure(orbit, hyp)
        print(f"  orbit sits on {structure.distinct_count} concentric "
              f"circle(s) around {structure.center:.6f}")

        fig, axes = plt.subplots(1, len(windows), figsize=(4 * len(windows), 4))
        for ax, (lo, hi) in zip(axes, windows):
            pts = orbit.points[lo:hi]
            ax.scatter(pts.real, pts.imag, s=1, linewidths=0)
            ax.set_title(f"terms {lo}..{hi}")
            ax.set_aspect("equal")
        fig.suptitle(f"{name}: p = {hyp.p}")
        fig.tight_layout()
        path = out_dir / f"{name}.png"
        fig.savefig(path, dpi=130)
        plt.close(fig)
        print(f"  wrote {path}\n")


if __name__ == "__main__":
    main()
