"""Min-ambiguity fields over the plane of initial values.

The map z_init -> inf_n a_n measures how decisively the greedy rule acts
along the whole orbit started at z_init.  Plotted over a grid (square-root
transformed for contrast) it reveals startling structure: the two radius-1/2
constant-sign disks at Re = +-1/2, further disk families, and near alpha =
1/2 a filigree of self-similar layers.

    python demos/ambiguity_field.py [--res N] [--out DIR]
"""

import argparse
import pathlib

import numpy as np

from signorbit import encode_field, field_sidecar, parse_real, render_field
from signorbit.mapper import FieldSpec, field_sidecar_dumps

SCENES = [
    # (name, alpha expression, steps) -- steps defaults follow the two
    # classic regimes: 1000 for generic alpha, 10000 near one half
    ("field_sqrt2", "sqrt(2)", 1000),
    ("field_near_half", "0.5+sqrt(3)/300", 10_000),
]


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--res", type=int, default=384)
    parser.add_argument("--rect", default="-2,2,-2,2")
    parser.add_argument("--workers", type=int, default=4)
    parser.add_argument("--out", default="demo_output")
    args = parser.parse_args()
    out_dir = pathlib.Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    rect = tuple(float(v) for v in args.rect.split(","))

    for name, alpha_text, steps in SCENES:
        alpha = parse_real(alpha_text) % 1.0
        spec = FieldSpec(rect=rect, resolution=(args.res, args.res),
                         alpha=alpha, steps=steps, transform="sqrt")
        print(f"{name}: alpha = {alpha_text} = {alpha!r}, "
              f"{args.res}x{args.res}, {steps} steps per pixel")
        field = render_field(spec, workers=args.workers)
        print(f"  field min = {field.stats.min:.3g}, "
              f"max = {field.stats.max:.3g}, ties = {field.stats.tie_count}")
        png = out_dir / f"{name}.png"
        png.write_bytes(encode_field(field, "png"))
        raw = out_dir / f"{name}.f32"
        raw.write_bytes(encode_field(field, "raw_f32"))
        (out_dir / f"{name}.f32.json").write_text(
            field_sidecar_dumps(field, "raw_f32") + "\n")
        print(f"  wrote {png} and {raw} (+ sidecar)")

        # the two constant-sign plateaus show up as bright disks
        mid_row = field.values[args.res // 2]
        pixel = (rect[1] - rect[0]) / args.res
        hot = np.flatnonzero(mid_row > 0.3 * field.stats.max)
        if hot.size:
            spans = np.split(hot, np.flatnonzero(np.diff(hot) > 1) + 1)
            mids = [rect[0] + (s[0] + s[-1] + 1) / 2 * pixel for s in spans]
            print(f"  bright runs on the center row at Re = "
                  f"{[f'{m:+.3f}' for m in mids]}\n")


if __name__ == "__main__":
    main()
