import json
import math

import numpy as np
import pytest

from signorbit import (
    Ball,
    HalfPlane,
    Intersection,
    Params,
    Side,
    StatusKind,
    Translate,
    Union_,
    constant_sign_disks,
    detect_sign_period,
    eval_region,
    eval_region_grid,
    lemma2_ball,
    parse_real,
    periodic_forward_balls,
    preimage_chain,
    preimage_predicate,
    rasterize_region,
    region_from_json,
    region_to_json,
    run_orbit,
    step,
    unit_rotation,
)
from signorbit.dynamics import run_signs
from signorbit.regions import RegionError, mask_to_pgm

EVERYTHING = Ball(0j, 1e18)


def universal_inequality_holds(z, A, B, C, grid=10_000, slack=0.0):
    """Dense-grid oracle for: |z + A - wB - Cw| < |z + A - wB| for all |w|=1."""
    ts = 2 * math.pi * np.arange(grid) / grid
    w = np.cos(ts) + 1j * np.sin(ts)
    lhs = np.abs(z + A - w * B - C * w)
    rhs = np.abs(z + A - w * B)
    return bool(np.all(lhs < rhs - slack))


# --- lemma2_ball -----------------------------------------------------------------

def test_lemma2_ball_empty_case():
    ball = lemma2_ball(0j, 0j, 2 + 0j)
    assert ball.center == 0j
    assert ball.radius == -1.0
    assert not eval_region(ball, 0j)


def test_lemma2_ball_constant_sign_instantiation():
    # A = 1/(e^(2 pi i a)-1), B = A - 1, C = 2 gives the all-minus disk
    alpha = parse_real("sqrt(2)/3")
    rotor = unit_rotation(alpha, 1)
    A = 1 / (rotor - 1)
    ball = lemma2_ball(A, A - 1, 2 + 0j)
    assert ball.radius == pytest.approx(0.5, abs=1e-12)
    assert ball.center == pytest.approx(1 / (1 - rotor), abs=1e-12)


def test_lemma2_ball_against_dense_grid_oracle(rng):
    checked = 0
    for _ in range(100):
        A = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        B = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        C = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        if abs(C) < 1e-3:
            continue
        ball = lemma2_ball(A, B, C)
        z = complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
        margin = abs(z - ball.center) - ball.radius
        if abs(margin) < 1e-9:
            continue  # boundary band excluded
        inside = eval_region(ball, z)
        assert inside == universal_inequality_holds(z, A, B, C)
        checked += 1
    assert checked >= 60


def test_lemma2_ball_requires_nonzero_C():
    with pytest.raises(RegionError):
        lemma2_ball(0j, 0j, 0j)


# --- constant-sign disks -----------------------------------------------------------

def test_disks_at_alpha_half():
    with pytest.warns(UserWarning):
        Params(alpha=0.5, z_init=0j, horizon=1)
    minus_disk, plus_disk = constant_sign_disks(0.5)
    assert minus_disk.center.real == pytest.approx(0.5, abs=1e-12)
    assert abs(minus_disk.center.imag) < 1e-15
    assert plus_disk.center == -minus_disk.center
    assert minus_disk.radius == plus_disk.radius == 0.5


def test_minus_disk_real_part_is_half(rng):
    for _ in range(100):
        alpha = float(rng.uniform(0.02, 0.98))
        minus_disk, plus_disk = constant_sign_disks(alpha)
        assert minus_disk.center.real == pytest.approx(0.5, abs=1e-12)
        assert plus_disk.center.real == pytest.approx(-0.5, abs=1e-12)
        # disjoint open disks: centers are mirror images, radius 1/2 each
        assert abs(minus_disk.center - plus_disk.center) >= 1.0 - 1e-12


def test_interior_points_freeze_the_sign(rng):
    alpha = parse_real("sqrt(2)") % 1.0
    minus_disk, plus_disk = constant_sign_disks(alpha)
    for disk, expected in ((minus_disk, -1), (plus_disk, 1)):
        for _ in range(50):
            angle = rng.uniform(0, 2 * math.pi)
            mag = disk.radius * math.sqrt(rng.uniform(0, 1)) * 0.98
            z0 = disk.center + complex(mag * math.cos(angle), mag * math.sin(angle))
            signs = run_signs(Params(alpha=alpha, z_init=z0, horizon=2000))
            assert signs.size == 2000
            assert np.all(signs == expected)


# --- periodic forward balls ---------------------------------------------------------

def test_forward_balls_contain_fig3_points(fig3_orbit):
    hyp = detect_sign_period(fig3_orbit.signs)
    balls = periodic_forward_balls(fig3_orbit.params.alpha, fig3_orbit, hyp)
    assert len(balls) == hyp.p
    for r, ball in enumerate(balls):
        assert ball.radius > 0
        assert eval_region(ball, fig3_orbit.z(hyp.k + r))


def test_forward_ball_p1_matches_translated_disk(rng):
    # constant-minus orbit: the residue ball equals the all-minus disk
    # translated along the accumulated rotation sum
    alpha = parse_real("sqrt(2)") % 1.0
    minus_disk, _ = constant_sign_disks(alpha)
    orbit = run_orbit(Params(alpha=alpha, z_init=minus_disk.center, horizon=3000))
    assert np.all(orbit.signs == -1)
    denom = unit_rotation(alpha, 1) - 1.0
    from signorbit.periodicity import PeriodHypothesis
    for _ in range(100):
        k = int(rng.integers(0, 2500))
        hyp = PeriodHypothesis(k=k, p=1, repeats_observed=100)
        ball = periodic_forward_balls(alpha, orbit, hyp)[0]
        expected_center = -unit_rotation(alpha, k + 1) / denom
        assert abs(ball.center - expected_center) < 1e-12
        assert ball.radius == pytest.approx(0.5, abs=1e-9)


def test_forward_ball_radius_formula(rng):
    # lemma2_ball with C = -2*eps must reduce to -Re((q/D) * conj(eps))
    for _ in range(100):
        q = complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
        D = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        if abs(D) < 1e-3:
            continue
        theta = rng.uniform(0, 2 * math.pi)
        eps = complex(math.cos(theta), math.sin(theta))
        ball = lemma2_ball(-q / D, eps - q / D, -2 * eps)
        direct = -((q / D) * eps.conjugate()).real
        assert ball.radius == pytest.approx(direct, rel=1e-9, abs=1e-12)
        assert ball.center == q / D


def test_forward_balls_reject_non_periodic(fig3_orbit):
    from signorbit.periodicity import PeriodHypothesis
    wrong = PeriodHypothesis(k=0, p=3, repeats_observed=5)
    with pytest.raises(RegionError):
        periodic_forward_balls(fig3_orbit.params.alpha, fig3_orbit, wrong)


# --- half-planes and pre-images -------------------------------------------------------

def test_halfplane_characterization(rng):
    # |z+w| < |z-w|  <=>  Re(z * conj(w)) < 0
    zs = rng.uniform(-5, 5, size=(100_000, 2)).view(np.complex128).ravel()
    ws = rng.uniform(-2, 2, size=(100_000, 2)).view(np.complex128).ravel()
    ws = ws[np.abs(ws) > 1e-9]
    zs = zs[:ws.size]
    left = np.abs(zs + ws) < np.abs(zs - ws)
    right = (zs * np.conj(ws)).real < 0
    near = np.abs((zs * np.conj(ws)).real) < 1e-12
    assert np.all(left[~near] == right[~near])


def test_preimage_of_everything_excludes_tie_line():
    alpha = 0.3
    n = 7
    w = unit_rotation(alpha, n)
    pre = preimage_predicate(EVERYTHING, n, alpha)
    # perpendicular direction: on the dividing line
    perp = complex(-w.imag, w.real)
    assert not eval_region(pre, perp)
    assert not eval_region(pre, 0j)
    assert eval_region(pre, w)
    assert eval_region(pre, -w)


def test_preimage_against_forward_oracle(rng):
    alpha = float(rng.uniform(0.05, 0.95))
    regions = [
        Ball(0.4 - 0.2j, 1.1),
        Intersection((Ball(0j, 2.0), HalfPlane(1 + 1j, Side.PLUS))),
        Union_((Ball(-1 + 0j, 0.7), Ball(1 + 0j, 0.7))),
    ]
    for region in regions:
        n = int(rng.integers(0, 50))
        pre = preimage_predicate(region, n, alpha)
        hits = 0
        for _ in range(3000):
            z = complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
            result = step(z, alpha, n)
            if result.is_tie or result.ambiguity < 1e-12:
                continue
            forward = eval_region(region, result.z_next)
            assert eval_region(pre, z) == forward
            hits += forward
        assert hits > 0


def test_preimage_chain_against_multi_step_oracle(rng):
    alpha = float(rng.uniform(0.05, 0.95))
    target = Ball(0.2 + 0.1j, 0.9)
    depth = 5
    chained = preimage_chain(target, depth, alpha)
    agreements = 0
    for _ in range(2000):
        z = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        current = z
        ok = True
        for n in range(depth):
            result = step(current, alpha, n)
            if result.is_tie or result.ambiguity < 1e-9:
                ok = False
                break
            current = result.z_next
        if not ok:
            continue
        assert eval_region(chained, z) == eval_region(target, current)
        agreements += 1
    assert agreements > 1500


# --- eval / rasterize -------------------------------------------------------------------

def test_eval_ball_openness():
    ball = Ball(0j, 1.0)
    assert eval_region(ball, 0j)
    assert not eval_region(ball, 1 + 0j)
    assert not eval_region(ball, 1j)


def test_eval_grid_matches_scalar(rng):
    region = Union_((
        Intersection((Ball(0.3 + 0.1j, 1.2), HalfPlane(0.6 - 1j, Side.MINUS))),
        Translate(Ball(0j, 0.4), -0.8 + 0.2j),
    ))
    zs = (rng.uniform(-2, 2, size=(400, 2)).view(np.complex128)).ravel()
    grid = eval_region_grid(region, zs)
    for z, expected in zip(zs, grid):
        assert eval_region(region, complex(z)) == bool(expected)


def test_rasterize_small_ball():
    mask = rasterize_region(Ball(0j, 1.0), (-2, 2, -2, 2), (4, 4))
    # pixel centers at +-0.5, +-1.5: the four innermost are inside
    expected = np.zeros((4, 4), bool)
    expected[1:3, 1:3] = True
    assert np.array_equal(mask, expected)


def test_rasterize_disk_areas_balanced():
    alpha = parse_real("sqrt(2)") % 1.0
    minus_disk, plus_disk = constant_sign_disks(alpha)
    shape = ((-2, 2, -2, 2), (256, 256))
    count_minus = rasterize_region(minus_disk, *shape).sum()
    count_plus = rasterize_region(plus_disk, *shape).sum()
    assert abs(count_minus - count_plus) <= 0.01 * max(count_minus, count_plus)


def test_rasterize_validation():
    with pytest.raises(RegionError):
        rasterize_region(Ball(0j, 1), (1, 1, 0, 2), (4, 4))
    with pytest.raises(RegionError):
        rasterize_region(Ball(0j, 1), (0, 1, 0, 1), (0, 4))


def test_mask_overlays_high_ambiguity_basin():
    # the rasterized all-minus disk overlays the stable plateau of the
    # min-ambiguity field: >= 95% of in-disk pixels sit clearly above zero,
    # and away from the boundary (where the infimum legitimately dips) all do
    from signorbit.mapper import FieldSpec, render_field
    alpha = parse_real("sqrt(2)") % 1.0
    minus_disk, _ = constant_sign_disks(alpha)
    rect, res = (-2.0, 2.0, -2.0, 2.0), (96, 96)
    field = render_field(FieldSpec(rect=rect, resolution=res, alpha=alpha,
                                   steps=400))
    mask = rasterize_region(minus_disk, rect, res)
    assert np.mean(field.values[mask] > 0.02) >= 0.95
    inner = rasterize_region(Ball(minus_disk.center, 0.95 * minus_disk.radius),
                             rect, res)
    assert np.all(field.values[inner] > 0.01)


def test_pgm_export():
    mask = rasterize_region(Ball(0j, 1.0), (-2, 2, -2, 2), (8, 6))
    payload = mask_to_pgm(mask)
    assert payload.startswith(b"P5\n8 6\n255\n")
    assert len(payload) == len(b"P5\n8 6\n255\n") + 48


# --- JSON round-trip ----------------------------------------------------------------------

def test_region_json_roundtrip():
    region = Union_((
        Intersection((Ball(0.3 + 0.1j, 1.2), HalfPlane(0.6 - 1j, Side.MINUS))),
        Translate(Ball(0j, 0.4), -0.8 + 0.2j),
    ))
    doc = region_to_json(region)
    assert json.loads(json.dumps(doc)) == doc
    rebuilt = region_from_json(doc)
    assert rebuilt == region


def test_halfplane_requires_nonzero_direction():
    with pytest.raises(RegionError):
        HalfPlane(0j, Side.PLUS)
