import json
import math

import numpy as np
import pytest

from signorbit import (
    Field,
    FieldSpec,
    Params,
    decode_raw_f32,
    encode_field,
    field_sidecar,
    min_ambiguity,
    parse_real,
    render_field,
    run_orbit,
)
from signorbit.mapper import FieldStats, pixel_axes


def test_single_pixel_matches_orbit_exactly():
    alpha = parse_real("sqrt(2)") % 1.0
    spec = FieldSpec(rect=(0.4, 0.6, -0.1, 0.1), resolution=(1, 1),
                     alpha=alpha, steps=1000)
    field = render_field(spec)
    xs, ys = pixel_axes(spec)
    z0 = complex(xs[0], ys[0])
    orbit = run_orbit(Params(alpha=alpha, z_init=z0, horizon=1000))
    assert field.values[0, 0] == min_ambiguity(orbit, 0)
    assert field.values[0, 0] > 0


def test_pixel_at_origin_ties_to_zero():
    spec = FieldSpec(rect=(-1, 1, -1, 1), resolution=(1, 1), alpha=0.37, steps=50)
    field = render_field(spec)
    xs, ys = pixel_axes(spec)
    assert complex(xs[0], ys[0]) == 0j
    assert field.values[0, 0] == 0.0
    assert field.stats.tie_count == 1


def test_grid_values_match_orbit_reruns(rng):
    alpha = 0.123456
    spec = FieldSpec(rect=(-1.5, 1.5, -1.5, 1.5), resolution=(24, 24),
                     alpha=alpha, steps=300)
    field = render_field(spec)
    xs, ys = pixel_axes(spec)
    for _ in range(100):
        i = int(rng.integers(0, 24))
        j = int(rng.integers(0, 24))
        z0 = complex(xs[j], ys[i])
        if z0 == 0j:
            continue
        orbit = run_orbit(Params(alpha=alpha, z_init=z0, horizon=300))
        expected = 0.0 if len(orbit) < 300 else min_ambiguity(orbit, 0)
        assert field.values[i, j] == expected


def test_worker_count_does_not_change_bits():
    spec = FieldSpec(rect=(-2, 2, -2, 2), resolution=(48, 40),
                     alpha=parse_real("sqrt(2)") % 1.0, steps=120)
    sequential = render_field(spec, workers=1)
    parallel = render_field(spec, workers=3)
    assert np.array_equal(sequential.values, parallel.values)
    assert sequential.stats == parallel.stats


def test_negation_symmetry_bitwise():
    # origin-symmetric dyadic grid: value at -z equals value at z exactly
    spec = FieldSpec(rect=(-2.0, 2.0, -2.0, 2.0), resolution=(32, 32),
                     alpha=0.3141, steps=200)
    values = render_field(spec).values
    assert np.array_equal(values, values[::-1, ::-1])


def test_conjugation_mirror_between_alpha_and_complement():
    alpha = 0.7182818
    spec = FieldSpec(rect=(-1.5, 1.5, -1.5, 1.5), resolution=(24, 24),
                     alpha=alpha, steps=250)
    mirrored_spec = FieldSpec(rect=spec.rect, resolution=spec.resolution,
                              alpha=1.0 - alpha, steps=250)
    field = render_field(spec).values
    mirrored = render_field(mirrored_spec).values
    assert np.max(np.abs(field - mirrored[::-1, :])) < 1e-9


def test_tie_row_freezes_at_zero():
    # the row through the origin contains the tie pixel; later steps must not
    # resurrect it
    spec = FieldSpec(rect=(-1, 1, -1, 1), resolution=(5, 5), alpha=0.41,
                     steps=400)
    field = render_field(spec)
    assert field.values[2, 2] == 0.0


def test_encode_pgm8_sqrt_quantization():
    values = np.array([[0.0, 1.0], [4.0, 9.0]])
    spec = FieldSpec(rect=(0, 1, 0, 1), resolution=(2, 2), alpha=0.3, steps=1,
                     transform="sqrt")
    field = Field(spec=spec, values=values,
                  stats=FieldStats(0.0, 9.0, 1))
    payload = encode_field(field, "pgm8")
    assert payload.startswith(b"P5\n2 2\n255\n")
    pixels = list(payload[-4:])
    assert pixels == [0, 85, 170, 255]  # sqrt -> [0,1,2,3], scaled by 255/3


def test_encode_linear_transform():
    values = np.array([[0.0, 1.0], [2.0, 4.0]])
    spec = FieldSpec(rect=(0, 1, 0, 1), resolution=(2, 2), alpha=0.3, steps=1,
                     transform="linear")
    field = Field(spec=spec, values=values, stats=FieldStats(0.0, 4.0, 1))
    assert list(encode_field(field, "pgm8")[-4:]) == [0, 64, 128, 255]


def test_raw_f32_roundtrip_bitwise():
    spec = FieldSpec(rect=(-1, 1, -1, 1), resolution=(16, 12), alpha=0.3377,
                     steps=64)
    field = render_field(spec)
    payload = encode_field(field, "raw_f32")
    assert len(payload) == 16 * 12 * 4
    decoded = decode_raw_f32(payload, spec.resolution)
    assert np.array_equal(decoded, field.values.astype("<f4"))
    assert encode_field(Field(spec, decoded.astype(np.float64),
                              field.stats), "raw_f32") == payload


def test_png_encoding_available():
    spec = FieldSpec(rect=(-1, 1, -1, 1), resolution=(8, 8), alpha=0.3377,
                     steps=32)
    payload = encode_field(render_field(spec), "png")
    assert payload[:8] == b"\x89PNG\r\n\x1a\n"


def test_sidecar_schema():
    spec = FieldSpec(rect=(-2, 2, -1, 1), resolution=(8, 4), alpha=0.25 + 1e-3,
                     steps=16)
    field = render_field(spec)
    doc = field_sidecar(field, "pgm8")
    assert doc["rect"] == [-2, 2, -1, 1]
    assert doc["resolution"] == [8, 4]
    assert doc["alpha_hex"] == float(spec.alpha).hex()
    assert doc["steps"] == 16
    assert doc["format"] == "pgm8"
    assert "scale" in doc and "max" in doc and "tie_count" in doc
    json.dumps(doc)


def test_zero_field_warns_all_black():
    spec = FieldSpec(rect=(-0.05, 0.05, -0.05, 0.05), resolution=(1, 1),
                     alpha=0.3, steps=3)
    field = render_field(spec)
    assert field.stats.max == 0.0  # single pixel at the origin ties
    with pytest.warns(UserWarning, match="all-black"):
        payload = encode_field(field, "pgm8")
    assert payload[-1] == 0


def test_spec_validation():
    with pytest.raises(ValueError):
        FieldSpec(rect=(1, 1, 0, 1), resolution=(4, 4), alpha=0.3, steps=10)
    with pytest.raises(ValueError):
        FieldSpec(rect=(0, 1, 0, 1), resolution=(0, 4), alpha=0.3, steps=10)
    with pytest.raises(ValueError):
        FieldSpec(rect=(0, 1, 0, 1), resolution=(4, 4), alpha=0.3, steps=0)
    with pytest.raises(ValueError):
        FieldSpec(rect=(0, 1, 0, 1), resolution=(4, 4), alpha=0.3, steps=10,
                  transform="log")


def test_values_are_immutable():
    spec = FieldSpec(rect=(-1, 1, -1, 1), resolution=(4, 4), alpha=0.3, steps=8)
    field = render_field(spec)
    with pytest.raises(ValueError):
        field.values[0, 0] = 1.0
