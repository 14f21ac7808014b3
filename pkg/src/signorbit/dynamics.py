"""Orbit engine for the greedy sign-choice rotation recurrence.

The system: starting from an initial value z_init (indexed -1), each step n
adds or subtracts the unit vector e^(2*pi*i*alpha*n), choosing the sign that
minimizes the modulus of the result.  The ambiguity a_n is the gap between
the two candidate moduli; an exact tie terminates the orbit.

Floating-point discipline
-------------------------
All claims downstream (period certificates in particular) are statements
about the orbit of the *canonical double* alpha, so every path through the
engine must produce bit-identical numbers:

* the rotation phase frac(alpha*n) is computed from an error-free two-term
  product of alpha and n followed by exact range reduction of each term
  (plain iterated complex multiplication drifts by ~n ulp, which would be
  fatal for ambiguities near 1e-6 at n ~ 1e6);
* moduli are sqrt(x*x + y*y) with that exact expression shape -- never
  hypot, whose rounding differs between implementations;
* the batch (numpy) and compiled (numba) code paths mirror the scalar
  expressions operation for operation, and the test suite asserts bitwise
  agreement between all of them.
"""

from __future__ import annotations

import io
import json
import math
import os
import warnings
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

import numpy as np

_SPLIT = 134217729.0  # 2**27 + 1, Dekker splitting constant
_TWO_PI = 6.283185307179586  # float64 nearest to 2*pi
MAX_ROTATION_INDEX = 1 << 40  # two_prod stays exact well beyond this


def two_prod(a: float, b: float) -> tuple[float, float]:
    """Error-free product: returns (p, e) with p + e == a*b exactly."""
    p = a * b
    ah = _SPLIT * a
    ah = ah - (ah - a)
    al = a - ah
    bh = _SPLIT * b
    bh = bh - (bh - b)
    bl = b - bh
    e = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    return p, e


def frac_mult(alpha: float, n: int) -> float:
    """frac(alpha * n) in [0, 1), exact up to one rounding in the final sum."""
    hi, lo = two_prod(alpha, float(n))
    f = math.fmod(hi, 1.0) + math.fmod(lo, 1.0)
    f = math.fmod(f, 1.0)
    if f < 0.0:
        f += 1.0
    return f


def unit_rotation(alpha: float, n: int) -> complex:
    """e^(2*pi*i*alpha*n) evaluated at the exactly reduced phase."""
    if not 0 <= n <= MAX_ROTATION_INDEX:
        raise ValueError(f"rotation index {n} outside supported range")
    t = _TWO_PI * frac_mult(alpha, n)
    return complex(math.cos(t), math.sin(t))


def rotation_batch(alpha: float, n0: int, count: int) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized unit_rotation for n0..n0+count-1; bitwise equal to the scalar."""
    if n0 + count > MAX_ROTATION_INDEX:
        raise ValueError("rotation index outside supported range")
    n = np.arange(n0, n0 + count, dtype=np.float64)
    hi = alpha * n
    ah = _SPLIT * alpha
    ah = ah - (ah - alpha)
    al = alpha - ah
    bh = _SPLIT * n
    bh = bh - (bh - n)
    bl = n - bh
    lo = ((ah * bh - hi) + ah * bl + al * bh) + al * bl
    f = np.fmod(hi, 1.0) + np.fmod(lo, 1.0)
    f = np.fmod(f, 1.0)
    f = np.where(f < 0.0, f + 1.0, f)
    t = _TWO_PI * f
    return np.cos(t), np.sin(t)


class TiePolicy(Enum):
    """An exact tie always stops the orbit; near-ties below tau_warn are flagged."""

    EXACT_ZERO_STOP = "exact_zero_stop"


@dataclass(frozen=True)
class Params:
    """Canonical run parameters: (alpha, z_init) plus numeric policy."""

    alpha: float
    z_init: complex
    horizon: int
    warn_threshold: float = 1e-9

    def __post_init__(self):
        alpha = math.fmod(float(self.alpha), 1.0)
        if alpha < 0.0:
            alpha += 1.0
        if alpha == 0.0:
            raise ValueError("alpha reduces to 0 mod 1")
        if alpha != self.alpha:
            object.__setattr__(self, "alpha", alpha)
        if self.horizon < 1:
            raise ValueError("horizon must be >= 1")
        if not self.warn_threshold > 0.0:
            raise ValueError("warn_threshold must be positive")
        if Fraction(alpha).denominator <= 64:
            warnings.warn(
                f"alpha = {alpha!r} is exactly rational with a small denominator; "
                "the rotation is genuinely periodic and density-based certification "
                "does not apply",
                stacklevel=2,
            )

    @property
    def alpha_hex(self) -> str:
        return float(self.alpha).hex()


@dataclass(frozen=True)
class StepResult:
    z_next: complex
    sign: int
    ambiguity: float
    is_tie: bool


class StatusKind(Enum):
    COMPLETED = "completed"
    TIE = "tie"
    WARNED = "warned"


@dataclass(frozen=True)
class OrbitStatus:
    kind: StatusKind
    tie_index: int | None = None
    warn_indices: tuple[int, ...] = ()

    def describe(self) -> str:
        if self.kind is StatusKind.TIE:
            return f"tie at n = {self.tie_index}"
        if self.kind is StatusKind.WARNED:
            return f"completed, {len(self.warn_indices)} near-tie warnings"
        return "completed"


@dataclass(frozen=True)
class Orbit:
    """Recorded trajectory: points z_0..z_M, signs, ambiguities, status.

    z_init itself (index -1) lives in params.  On a tie at step n the arrays
    stop at index n-1 and status carries the tie index.
    """

    params: Params
    points: np.ndarray  # complex128, shape (M+1,)
    signs: np.ndarray  # int8, shape (M+1,), values +-1
    ambiguities: np.ndarray  # float64, shape (M+1,)
    status: OrbitStatus

    def __post_init__(self):
        for arr in (self.points, self.signs, self.ambiguities):
            arr.setflags(write=False)

    def __len__(self) -> int:
        return self.points.shape[0]

    def z(self, n: int) -> complex:
        """z_n with the convention z(-1) == z_init."""
        if n == -1:
            return self.params.z_init
        return complex(self.points[n])


def step(z_prev: complex, alpha: float, n: int) -> StepResult:
    """One greedy step: pick the sign minimizing |z_prev +- e^(2 pi i alpha n)|."""
    w = unit_rotation(alpha, n)
    px = z_prev.real + w.real
    py = z_prev.imag + w.imag
    mx = z_prev.real - w.real
    my = z_prev.imag - w.imag
    ap = math.sqrt(px * px + py * py)
    am = math.sqrt(mx * mx + my * my)
    if ap == am:
        return StepResult(z_prev, 0, 0.0, True)
    if ap < am:
        return StepResult(complex(px, py), 1, abs(ap - am), False)
    return StepResult(complex(mx, my), -1, abs(ap - am), False)


# ---------------------------------------------------------------------------
# Stepping kernels.  The numba kernel and the pure-python loop are the same
# code shape; tests assert they agree bitwise.  SIGNORBIT_PURE_PYTHON=1
# forces the fallback.

def _step_loop_python(zx, zy, wx, wy, signs, amb, pre, pim, base):
    count = wx.shape[0]
    for i in range(count):
        px = zx + wx[i]
        py = zy + wy[i]
        mx = zx - wx[i]
        my = zy - wy[i]
        ap = math.sqrt(px * px + py * py)
        am = math.sqrt(mx * mx + my * my)
        if ap == am:
            return zx, zy, base + i, True
        if ap < am:
            signs[base + i] = 1
            zx = px
            zy = py
        else:
            signs[base + i] = -1
            zx = mx
            zy = my
        amb[base + i] = abs(ap - am)
        pre[base + i] = zx
        pim[base + i] = zy
    return zx, zy, base + count, False


def _make_numba_loop():
    if os.environ.get("SIGNORBIT_PURE_PYTHON"):
        return None
    try:
        import numba
    except ImportError:
        return None
    return numba.njit(cache=True)(_step_loop_python)


_step_loop = _make_numba_loop() or _step_loop_python
ENGINE_BACKEND = "numba" if _step_loop is not _step_loop_python else "python"

_CHUNK = 1 << 20


def run_orbit(params: Params) -> Orbit:
    """Iterate the greedy recurrence for n = 0..horizon-1 or until a tie."""
    horizon = params.horizon
    signs = np.empty(horizon, np.int8)
    amb = np.empty(horizon, np.float64)
    pre = np.empty(horizon, np.float64)
    pim = np.empty(horizon, np.float64)
    zx = params.z_init.real
    zy = params.z_init.imag
    n = 0
    tied = False
    while n < horizon:
        count = min(_CHUNK, horizon - n)
        wx, wy = rotation_batch(params.alpha, n, count)
        zx, zy, n, tied = _step_loop(zx, zy, wx, wy, signs, amb, pre, pim, n)
        if tied:
            break
    points = np.empty(n, np.complex128)
    points.real = pre[:n]
    points.imag = pim[:n]
    warn_idx = np.flatnonzero(amb[:n] < params.warn_threshold)
    if tied:
        status = OrbitStatus(StatusKind.TIE, tie_index=n,
                             warn_indices=tuple(int(i) for i in warn_idx))
    elif warn_idx.size:
        status = OrbitStatus(StatusKind.WARNED,
                             warn_indices=tuple(int(i) for i in warn_idx))
    else:
        status = OrbitStatus(StatusKind.COMPLETED)
    return Orbit(params, points, signs[:n].copy(), amb[:n].copy(), status)


def run_signs(params: Params) -> np.ndarray:
    """Signs-only run (no point/ambiguity storage); for long soundness checks."""
    horizon = params.horizon
    signs = np.empty(horizon, np.int8)
    amb = np.empty(_CHUNK, np.float64)
    pre = np.empty(_CHUNK, np.float64)
    pim = np.empty(_CHUNK, np.float64)
    zx = params.z_init.real
    zy = params.z_init.imag
    n = 0
    while n < horizon:
        count = min(_CHUNK, horizon - n)
        wx, wy = rotation_batch(params.alpha, n, count)
        sview = signs[n:n + count]
        zx, zy, m, tied = _step_loop(zx, zy, wx, wy, sview, amb, pre, pim, 0)
        n += m
        if tied:
            return signs[:n]
    return signs[:horizon]


def min_ambiguity(orbit: Orbit, from_index: int = 0) -> float:
    """Minimum recorded ambiguity at indices >= from_index; 0 past a tie."""
    if orbit.status.kind is StatusKind.TIE and orbit.status.tie_index >= from_index:
        return 0.0
    if from_index >= len(orbit):
        raise ValueError("empty index range")
    return float(orbit.ambiguities[from_index:].min())


def stability_radius(orbit: Orbit) -> float:
    """Perturbations of z_init below this radius shift the orbit rigidly.

    Any |w| < radius yields the orbit z_n + w with the identical sign
    sequence; a tied orbit has radius 0.
    """
    if orbit.status.kind is StatusKind.TIE:
        return 0.0
    return 0.5 * min_ambiguity(orbit, 0)


class Symmetry(Enum):
    CONJUGATE_ALPHA = "conjugate_alpha"
    HALF_SHIFT = "half_shift"
    NEGATE = "negate"


def apply_symmetry(params: Params, which: Symmetry) -> Params:
    """Parameter transform with an exactly predictable orbit relation.

    CONJUGATE_ALPHA: (1-alpha, conj(z_init)) -> orbit conj(z_n), same signs.
    HALF_SHIFT:      (alpha +- 0.5 mod 1, z_init) -> same z_n, signs flipped
                     at every odd n.
    NEGATE:          (alpha, -z_init) -> orbit -z_n, all signs flipped.
    """
    if which is Symmetry.CONJUGATE_ALPHA:
        return Params(1.0 - params.alpha, params.z_init.conjugate(),
                      params.horizon, params.warn_threshold)
    if which is Symmetry.HALF_SHIFT:
        shifted = params.alpha + 0.5 if params.alpha < 0.5 else params.alpha - 0.5
        return Params(shifted, params.z_init, params.horizon, params.warn_threshold)
    if which is Symmetry.NEGATE:
        return Params(params.alpha, -params.z_init, params.horizon,
                      params.warn_threshold)
    raise ValueError(f"unknown symmetry {which!r}")


# ---------------------------------------------------------------------------
# Export formats.  CSV column order (n, re, im, sign, ambiguity) is a
# compatibility contract; metadata rides in '#'-prefixed footer lines.

CSV_COLUMNS = ("n", "re", "im", "sign", "ambiguity")


def orbit_to_csv(orbit: Orbit, footer: dict | None = None) -> str:
    buf = io.StringIO()
    buf.write(",".join(CSV_COLUMNS) + "\n")
    pts = orbit.points
    for n in range(len(orbit)):
        buf.write(f"{n},{float(pts[n].real)!r},{float(pts[n].imag)!r},"
                  f"{int(orbit.signs[n])},{float(orbit.ambiguities[n])!r}\n")
    meta = {
        "alpha_hex": orbit.params.alpha_hex,
        "status": orbit.status.describe(),
    }
    if footer:
        meta.update(footer)
    for key, value in meta.items():
        buf.write(f"# {key}={value}\n")
    return buf.getvalue()


def orbit_to_json(orbit: Orbit, extra: dict | None = None) -> dict:
    doc = {
        "alpha": orbit.params.alpha,
        "alpha_hex": orbit.params.alpha_hex,
        "z_init": [orbit.params.z_init.real, orbit.params.z_init.imag],
        "horizon": orbit.params.horizon,
        "status": orbit.status.kind.value,
        "tie_index": orbit.status.tie_index,
        "warn_indices": list(orbit.status.warn_indices),
        "points": [[float(z.real), float(z.imag)] for z in orbit.points],
        "signs": [int(s) for s in orbit.signs],
        "ambiguities": [float(a) for a in orbit.ambiguities],
    }
    if extra:
        doc.update(extra)
    return doc


def orbit_json_dumps(orbit: Orbit, extra: dict | None = None) -> str:
    return json.dumps(orbit_to_json(orbit, extra))
