"""Initial-value geometry: balls, half-planes, and backward predicates.

Three constructions on the z-plane of initial values:

* the universal-inequality ball: the set of z with
  |z + A - wB - Cw| < |z + A - wB| for every |w| = 1 is the open ball of
  radius -|C|/2 - Re(B * conj(C))/|C| centered at -A;
* the two radius-1/2 constant-sign disks (all-minus and all-plus starts);
* one-step pre-images of a region under the greedy rule, which stay within
  the class of finite unions of intersections of disks and half-planes.

Regions are predicate trees, never boundary curves: membership is evaluated
pointwise (strict inequalities throughout, so all sets are open) and pictures
come from rasterization.  Translations are kept lazy as tree nodes because
backward induction doubles the tree at every step; pushing them eagerly to
the leaves would materialize the blowup.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Union

import numpy as np

from .dynamics import Orbit, unit_rotation
from .periodicity import PeriodHypothesis, period_sum


class RegionError(ValueError):
    pass


@dataclass(frozen=True)
class Ball:
    center: complex
    radius: float  # radius <= 0 denotes the empty set; always open


class Side(Enum):
    PLUS = "plus"
    MINUS = "minus"


@dataclass(frozen=True)
class HalfPlane:
    """Open half-plane {z : |z + w| < |z - w|} (PLUS) or its mirror (MINUS).

    Membership is the sign of Re(z * conj(w)); the boundary line through the
    origin perpendicular to w belongs to neither side.
    """

    w: complex
    side: Side

    def __post_init__(self):
        if self.w == 0:
            raise RegionError("half-plane direction w must be nonzero")


@dataclass(frozen=True)
class Translate:
    inner: "Region"
    by: complex


@dataclass(frozen=True)
class Intersection:
    parts: tuple["Region", ...]


@dataclass(frozen=True)
class Union_:
    parts: tuple["Region", ...]


Region = Union[Ball, HalfPlane, Translate, Intersection, Union_]


def eval_region(region: Region, z: complex) -> bool:
    """Pointwise membership; short-circuits across unions/intersections."""
    if isinstance(region, Ball):
        return abs(z - region.center) < region.radius
    if isinstance(region, HalfPlane):
        dot = z.real * region.w.real + z.imag * region.w.imag
        return dot < 0.0 if region.side is Side.PLUS else dot > 0.0
    if isinstance(region, Translate):
        return eval_region(region.inner, z - region.by)
    if isinstance(region, Intersection):
        return all(eval_region(part, z) for part in region.parts)
    if isinstance(region, Union_):
        return any(eval_region(part, z) for part in region.parts)
    raise RegionError(f"unknown region node {region!r}")


def eval_region_grid(region: Region, zs: np.ndarray) -> np.ndarray:
    """Vectorized membership over an array of complex points."""
    if isinstance(region, Ball):
        return np.abs(zs - region.center) < region.radius
    if isinstance(region, HalfPlane):
        dot = zs.real * region.w.real + zs.imag * region.w.imag
        return dot < 0.0 if region.side is Side.PLUS else dot > 0.0
    if isinstance(region, Translate):
        return eval_region_grid(region.inner, zs - region.by)
    if isinstance(region, Intersection):
        out = np.ones(zs.shape, dtype=bool)
        for part in region.parts:
            out &= eval_region_grid(part, zs)
        return out
    if isinstance(region, Union_):
        out = np.zeros(zs.shape, dtype=bool)
        for part in region.parts:
            out |= eval_region_grid(part, zs)
        return out
    raise RegionError(f"unknown region node {region!r}")


def lemma2_ball(A: complex, B: complex, C: complex) -> Ball:
    """Ball of z where |z + A - wB - Cw| < |z + A - wB| for all |w| = 1."""
    if C == 0:
        raise RegionError("C must be nonzero")
    c_abs = abs(C)
    radius = -c_abs / 2.0 - (B.real * C.real + B.imag * C.imag) / c_abs
    return Ball(center=-A, radius=radius)


def constant_sign_disks(alpha: float) -> tuple[Ball, Ball]:
    """The two open radius-1/2 disks of initial values with frozen signs.

    Starting inside the first disk the greedy rule picks -1 forever; inside
    the second it picks +1 forever.  Centers are 1/(1 - e^(2 pi i alpha))
    (real part exactly +1/2) and its negative.
    """
    rotor = unit_rotation(alpha, 1)
    if rotor == 1.0:
        raise RegionError("alpha reduces to an integer; disks are undefined")
    minus_center = 1.0 / (1.0 - rotor)
    return (Ball(center=minus_center, radius=0.5),
            Ball(center=-minus_center, radius=0.5))


def periodic_forward_balls(alpha: float, orbit: Orbit,
                           hyp: PeriodHypothesis) -> list[Ball]:
    """One ball per residue class that must contain z_{k+r}.

    If the sign pattern persists, z_{k+r} satisfies the universal inequality
    |u + A - wB - Cw| < |u + A - wB| over the circle with A = -q_r/D,
    B = eps_r - q_r/D, C = -2*eps_r, D = e^(2 pi i alpha p) - 1 and
    eps_r the sign-weighted rotation at index k+r+1.  Raises if a recorded
    z_{k+r} falls outside its ball (the hypothesis is then not certifiable).
    """
    k, p = hyp.k, hyp.p
    rotor = unit_rotation(alpha, p)
    denom = rotor - 1.0
    if denom == 0:
        raise RegionError("e^(2 pi i alpha p) equals 1; degenerate geometry")
    balls = []
    for r in range(p):
        q_r = period_sum(orbit, k + r, p)
        eps = int(orbit.signs[k + r + 1]) * unit_rotation(alpha, k + r + 1)
        A = -q_r / denom
        B = eps - q_r / denom
        C = -2.0 * eps
        ball = lemma2_ball(A, B, C)
        point = orbit.z(k + r)
        if not eval_region(ball, point):
            raise RegionError(
                f"z_(k+{r}) lies outside its forward ball "
                f"(|z - center| = {abs(point - ball.center):.6g}, "
                f"radius = {ball.radius:.6g}); the observed pattern does not "
                "satisfy the universal inequality")
        balls.append(ball)
    return balls


def preimage_predicate(region: Region, n: int, alpha: float) -> Region:
    """Initial values whose greedy step at index n lands inside `region`.

    With w = e^(2 pi i alpha n): points choosing +1 (the w-side half-plane)
    must land in region - w, points choosing -1 in region + w.  The dividing
    line (exact ties) belongs to neither branch.
    """
    w = unit_rotation(alpha, n)
    return Union_((
        Intersection((HalfPlane(w, Side.PLUS), Translate(region, -w))),
        Intersection((HalfPlane(w, Side.MINUS), Translate(region, w))),
    ))


def preimage_chain(region: Region, n_steps: int, alpha: float) -> Region:
    """Pull a region back through steps n_steps-1, ..., 1, 0.

    The result describes initial values z_init whose orbit satisfies
    z_{n_steps - 1} inside `region`.  Depth is a caller choice: deeper
    chains describe longer sign prefixes at exponentially growing tree size.
    """
    for n in range(n_steps - 1, -1, -1):
        region = preimage_predicate(region, n, alpha)
    return region


def rasterize_region(region: Region, rect: tuple[float, float, float, float],
                     resolution: tuple[int, int]) -> np.ndarray:
    """Boolean membership mask at pixel centers, row 0 at the top (im_max)."""
    re_min, re_max, im_min, im_max = rect
    width, height = resolution
    if width < 1 or height < 1:
        raise RegionError("resolution must be at least 1x1")
    if not (re_min < re_max and im_min < im_max):
        raise RegionError("rectangle is empty")
    xs = re_min + (np.arange(width) + 0.5) * (re_max - re_min) / width
    ys = im_max - (np.arange(height) + 0.5) * (im_max - im_min) / height
    zs = xs[None, :] + 1j * ys[:, None]
    return eval_region_grid(region, zs)


def mask_to_pgm(mask: np.ndarray) -> bytes:
    """Binary PGM (P5): member pixels white (255), the rest black."""
    height, width = mask.shape
    header = f"P5\n{width} {height}\n255\n".encode()
    return header + (mask.astype(np.uint8) * 255).tobytes()


# ---------------------------------------------------------------------------
# JSON serialization: node-typed trees.

def region_to_json(region: Region) -> dict:
    if isinstance(region, Ball):
        return {"type": "ball", "center": [region.center.real, region.center.imag],
                "radius": region.radius}
    if isinstance(region, HalfPlane):
        return {"type": "halfplane", "w": [region.w.real, region.w.imag],
                "side": region.side.value}
    if isinstance(region, Translate):
        return {"type": "translate", "by": [region.by.real, region.by.imag],
                "inner": region_to_json(region.inner)}
    if isinstance(region, Intersection):
        return {"type": "intersection",
                "parts": [region_to_json(p) for p in region.parts]}
    if isinstance(region, Union_):
        return {"type": "union", "parts": [region_to_json(p) for p in region.parts]}
    raise RegionError(f"unknown region node {region!r}")


def region_from_json(doc: dict) -> Region:
    kind = doc.get("type")
    if kind == "ball":
        return Ball(complex(*doc["center"]), float(doc["radius"]))
    if kind == "halfplane":
        return HalfPlane(complex(*doc["w"]), Side(doc["side"]))
    if kind == "translate":
        return Translate(region_from_json(doc["inner"]), complex(*doc["by"]))
    if kind == "intersection":
        return Intersection(tuple(region_from_json(p) for p in doc["parts"]))
    if kind == "union":
        return Union_(tuple(region_from_json(p) for p in doc["parts"]))
    raise RegionError(f"unknown region type {kind!r}")
