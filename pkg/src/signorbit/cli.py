"""Command-line interface.

Subcommands: orbit, map, certify, convergents, regions, search, doubling,
serve.  Exit codes: 0 success, 1 domain error (bad expression, failed
precondition), 2 usage error.  Alpha values are echoed as hex doubles so
results are reproducible bit for bit.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import (
    AlphaSampler,
    ExpressionError,
    FieldSpec,
    Params,
    SearchConfig,
    certify_constant,
    certify_periodic,
    circle_structure,
    constant_sign_disks,
    convergents,
    detect_sign_period,
    encode_field,
    parse_complex,
    parse_real,
    period_stats,
    random_search,
    render_field,
    run_orbit,
    verify_period_doubling,
)
from .diophantine import convergents_tsv
from .dynamics import min_ambiguity, orbit_json_dumps, orbit_to_csv
from .mapper import field_sidecar_dumps
from .periodicity import CertificationError
from .regions import RegionError, mask_to_pgm, rasterize_region, region_to_json
from .search import records_to_jsonl


def _write_output(data, out_path: str | None, binary: bool = False) -> None:
    if out_path and out_path != "-":
        mode = "wb" if binary else "w"
        with open(out_path, mode) as handle:
            handle.write(data)
    elif binary:
        sys.stdout.buffer.write(data)
    else:
        sys.stdout.write(data)


def _parse_rect(text: str) -> tuple[float, float, float, float]:
    parts = [parse_real(p) for p in text.split(",")]
    if len(parts) != 4:
        raise ValueError("rect must be re_min,re_max,im_min,im_max")
    return tuple(parts)


def _parse_res(text: str) -> tuple[int, int]:
    parts = text.lower().replace("x", ",").split(",")
    if len(parts) != 2:
        raise ValueError("resolution must be WIDTHxHEIGHT")
    return int(parts[0]), int(parts[1])


def _parse_sampler(text: str) -> AlphaSampler:
    if text == "uniform":
        return AlphaSampler("uniform")
    if text.startswith("near-half:"):
        return AlphaSampler("near_half", delta=parse_real(text.split(":", 1)[1]))
    if text.startswith("near:"):
        x_text, delta_text = text.split(":", 1)[1].split(",")
        return AlphaSampler("near", x=parse_real(x_text), delta=parse_real(delta_text))
    raise ValueError(
        "alpha sampler must be 'uniform', 'near-half:DELTA', or 'near:X,DELTA'")


def cmd_orbit(args) -> int:
    params = Params(alpha=parse_real(args.alpha), z_init=parse_complex(args.z),
                    horizon=args.n, warn_threshold=args.warn_threshold)
    orbit = run_orbit(params)
    hyp = detect_sign_period(orbit.signs, args.min_repeats, args.p_max) \
        if len(orbit) else None
    period_meta = {}
    if hyp is not None:
        period_meta = {"period_k": hyp.k, "period_p": hyp.p,
                       "period_repeats": hyp.repeats_observed}
    if args.format == "csv":
        _write_output(orbit_to_csv(orbit, footer=period_meta), args.out)
    else:
        extra = {"period": [hyp.k, hyp.p, hyp.repeats_observed] if hyp else None,
                 "min_ambiguity": min_ambiguity(orbit, 0) if len(orbit) else 0.0}
        _write_output(orbit_json_dumps(orbit, extra) + "\n", args.out)
    return 0


def cmd_map(args) -> int:
    spec = FieldSpec(rect=_parse_rect(args.rect), resolution=_parse_res(args.res),
                     alpha=parse_real(args.alpha), steps=args.steps,
                     transform=args.transform)
    field = render_field(spec, workers=args.workers)
    payload = encode_field(field, args.format)
    _write_output(payload, args.out, binary=True)
    sidecar = field_sidecar_dumps(field, args.format) + "\n"
    if args.out and args.out != "-":
        with open(args.out + ".json", "w") as handle:
            handle.write(sidecar)
    else:
        sys.stderr.write(sidecar)
    return 0


def cmd_certify(args) -> int:
    params = Params(alpha=parse_real(args.alpha), z_init=parse_complex(args.z),
                    horizon=args.n)
    orbit = run_orbit(params)
    if args.kind == "constant":
        if args.conv_q is None:
            raise ValueError("constant certification needs --conv-q")
        if args.k is None:
            raise ValueError("constant certification needs --k")
        cert = certify_constant(orbit, args.k, q_denominator=args.conv_q)
    else:
        hyp = detect_sign_period(orbit.signs, args.min_repeats, args.p_max)
        if hyp is None:
            raise ValueError("no sign period detected; nothing to certify")
        cert = certify_periodic(orbit, hyp, args.eta)
    _write_output(cert.dumps() + "\n", args.out)
    return 0


def cmd_convergents(args) -> int:
    value = parse_real(args.x)
    conv = convergents(value, q_cap=args.qmax)
    _write_output(convergents_tsv(conv), args.out)
    return 0


def cmd_regions(args) -> int:
    alpha = parse_real(args.alpha)
    Params(alpha=alpha, z_init=0j, horizon=1)  # validates alpha mod 1 != 0
    minus_disk, plus_disk = constant_sign_disks(alpha % 1.0)
    doc = {
        "alpha": alpha % 1.0,
        "alpha_hex": float(alpha % 1.0).hex(),
        "minus_disk": region_to_json(minus_disk),
        "plus_disk": region_to_json(plus_disk),
    }
    _write_output(json.dumps(doc, indent=2) + "\n", args.out)
    if args.mask_out:
        from .regions import Union_
        mask = rasterize_region(Union_((minus_disk, plus_disk)),
                                _parse_rect(args.rect), _parse_res(args.res))
        with open(args.mask_out, "wb") as handle:
            handle.write(mask_to_pgm(mask))
    return 0


def cmd_search(args) -> int:
    config = SearchConfig(
        alpha_sampler=_parse_sampler(args.alpha_sampler),
        z_radius=args.z_radius,
        horizon=args.horizon,
        count=args.count,
        rng_seed=args.seed,
        min_repeats=args.min_repeats,
        p_max=args.p_max,
        certify=args.certify,
    )
    records = list(random_search(config))
    _write_output(records_to_jsonl(records), args.out)
    if args.stats:
        with open(args.stats, "w") as handle:
            json.dump(period_stats(records), handle, indent=2)
            handle.write("\n")
    return 0


def cmd_doubling(args) -> int:
    outcome = verify_period_doubling(parse_real(args.alpha), parse_complex(args.z),
                                     args.n, args.min_repeats)
    _write_output(json.dumps({"outcome": outcome.value}) + "\n", args.out)
    return 0


def cmd_serve(args) -> int:
    from .service import ServiceConfig, load_config, run_server
    if args.config:
        config = load_config(args.config)
    else:
        config = ServiceConfig()
    if args.bind:
        config = config.with_bind(args.bind)
    if args.static:
        config = config.with_static(args.static)
    run_server(config)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="signorbit",
        description="greedy sign-choice rotation orbits: simulate, certify, render")
    sub = parser.add_subparsers(dest="command", required=True)

    orbit = sub.add_parser("orbit", help="run one orbit and detect its sign period")
    orbit.add_argument("--alpha", required=True, help="rotation number expression")
    orbit.add_argument("--z", required=True, help="initial value expression")
    orbit.add_argument("--n", type=int, required=True, help="horizon (steps)")
    orbit.add_argument("--warn-threshold", type=float, default=1e-9)
    orbit.add_argument("--min-repeats", type=int, default=5)
    orbit.add_argument("--p-max", type=int, default=None)
    orbit.add_argument("--format", choices=("csv", "json"), default="csv")
    orbit.add_argument("--out", default=None)
    orbit.set_defaults(func=cmd_orbit)

    fmap = sub.add_parser("map", help="render a min-ambiguity field")
    fmap.add_argument("--alpha", required=True)
    fmap.add_argument("--rect", default="-2,2,-2,2",
                      help="re_min,re_max,im_min,im_max")
    fmap.add_argument("--res", default="512x512", help="WIDTHxHEIGHT")
    fmap.add_argument("--steps", type=int, default=1000)
    fmap.add_argument("--transform", choices=("sqrt", "linear"), default="sqrt")
    fmap.add_argument("--format", choices=("pgm8", "raw_f32", "png"), default="pgm8")
    fmap.add_argument("--workers", type=int, default=1)
    fmap.add_argument("--out", default=None)
    fmap.set_defaults(func=cmd_map)

    certify = sub.add_parser("certify", help="issue a periodicity certificate")
    certify.add_argument("--alpha", required=True)
    certify.add_argument("--z", required=True)
    certify.add_argument("--n", type=int, required=True)
    certify.add_argument("--kind", choices=("constant", "periodic"),
                         default="constant")
    certify.add_argument("--k", type=int, default=None,
                         help="window start (constant kind)")
    certify.add_argument("--conv-q", type=int, default=None,
                         help="convergent denominator of alpha (constant kind)")
    certify.add_argument("--eta", type=float, default=0.1,
                         help="ambiguity floor for the periodic kind")
    certify.add_argument("--min-repeats", type=int, default=5)
    certify.add_argument("--p-max", type=int, default=None)
    certify.add_argument("--out", default=None)
    certify.set_defaults(func=cmd_certify)

    conv = sub.add_parser("convergents", help="continued-fraction convergents table")
    conv.add_argument("--x", required=True, help="value expression in (0,1)")
    conv.add_argument("--qmax", type=int, required=True)
    conv.add_argument("--out", default=None)
    conv.set_defaults(func=cmd_convergents)

    regions = sub.add_parser("regions", help="constant-sign disks for an alpha")
    regions.add_argument("--alpha", required=True)
    regions.add_argument("--rect", default="-2,2,-2,2")
    regions.add_argument("--res", default="256x256")
    regions.add_argument("--mask-out", default=None,
                         help="also rasterize the disks to this PGM file")
    regions.add_argument("--out", default=None)
    regions.set_defaults(func=cmd_regions)

    search = sub.add_parser("search", help="seeded random parameter search")
    search.add_argument("--count", type=int, required=True)
    search.add_argument("--seed", type=int, default=0)
    search.add_argument("--horizon", type=int, default=4000)
    search.add_argument("--alpha-sampler", default="uniform",
                        help="uniform | near-half:DELTA | near:X,DELTA")
    search.add_argument("--z-radius", type=float, default=5.0)
    search.add_argument("--min-repeats", type=int, default=5)
    search.add_argument("--p-max", type=int, default=None)
    search.add_argument("--certify", action="store_true")
    search.add_argument("--stats", default=None, help="write summary JSON here")
    search.add_argument("--out", default=None)
    search.set_defaults(func=cmd_search)

    doubling = sub.add_parser("doubling", help="verify half-shift period doubling")
    doubling.add_argument("--alpha", required=True)
    doubling.add_argument("--z", required=True)
    doubling.add_argument("--n", type=int, required=True)
    doubling.add_argument("--min-repeats", type=int, default=5)
    doubling.add_argument("--out", default=None)
    doubling.set_defaults(func=cmd_doubling)

    serve = sub.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--bind", default=None, help="host:port")
    serve.add_argument("--static", default=None, help="static asset directory")
    serve.add_argument("--config", default=None, help="TOML config file")
    serve.set_defaults(func=cmd_serve)

    return parser


# flags whose values are expressions and may legitimately start with '-'
_EXPR_FLAGS = {"--z", "--alpha", "--x", "--rect"}


def _normalize_argv(argv: list[str]) -> list[str]:
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in _EXPR_FLAGS and i + 1 < len(argv):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    if argv is None:
        argv = sys.argv[1:]
    args = parser.parse_args(_normalize_argv(list(argv)))
    try:
        return args.func(args)
    except (ExpressionError, CertificationError, RegionError, ValueError,
            KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
