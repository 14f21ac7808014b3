"""Sign-period detection, circle structure, and periodicity certificates.

A detected period is only a hypothesis about a finite window.  The
certificates turn it into a statement about all time: if the observed signs
are constant (or p-periodic) across a window whose length is calibrated by a
continued-fraction denominator of the relevant rotation number, and the
ambiguities on that window clear the sampling threshold 20*L/q, then the
pattern persists forever.  The sampling threshold comes from the fact that
q consecutive rotation samples land within 3/q of every point of the circle,
combined with a Lipschitz bound L on the ambiguity as a function of the
rotation phase.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .diophantine import Convergent, ConvergentList, convergents
from .dynamics import Orbit, frac_mult, unit_rotation

_4PI = 4.0 * math.pi

# Sampling windows are inclusive: a denominator q contributes q+1 samples
# (indices k..k+q).  Recorded in certificates so external checkers agree.
SAMPLE_CONVENTION = "inclusive window: denominator q yields q+1 samples"


class CertificationError(ValueError):
    """Raised when certification cannot even be attempted (degenerate rotation)."""


@dataclass(frozen=True)
class PeriodHypothesis:
    """Claim that signs repeat with period p from index k to the end of record."""

    k: int
    p: int
    repeats_observed: int


def _z_array(data: bytes) -> list[int]:
    # classic Z-algorithm: z[i] = length of longest common prefix of data and data[i:]
    n = len(data)
    z = [0] * n
    z[0] = n
    left = right = 0
    for i in range(1, n):
        if i < right:
            z[i] = min(right - i, z[i - left])
        while i + z[i] < n and data[z[i]] == data[i + z[i]]:
            z[i] += 1
        if i + z[i] > right:
            left, right = i, i + z[i]
    return z


def detect_sign_period(signs, min_repeats: int = 5,
                       p_max: int | None = None) -> PeriodHypothesis | None:
    """Find the earliest stabilization: smallest k, then smallest p.

    Returns the hypothesis (k, p) minimizing the start index k over all
    periods p <= p_max whose suffix holds to the end of the record with at
    least min_repeats full periods, breaking ties by smaller p.  Minimizing
    k first keeps accidental short-period runs at the very end of the record
    (which any long-period pattern eventually produces) from shadowing the
    true period.
    """
    signs = np.asarray(signs, dtype=np.int8)
    length = signs.shape[0]
    if length == 0:
        raise ValueError("sign list is empty")
    if min_repeats < 2:
        raise ValueError("min_repeats must be >= 2")
    if p_max is None:
        p_max = length // min_repeats
    p_max = min(p_max, length - 1)
    if p_max < 1:
        return None
    z = _z_array(signs[::-1].tobytes())
    best: tuple[int, int] | None = None
    for p in range(1, p_max + 1):
        k = length - p - z[p]
        if (length - k) // p >= min_repeats and (best is None or k < best[0]):
            best = (k, p)
    if best is None:
        return None
    k, p = best
    return PeriodHypothesis(k=k, p=p, repeats_observed=(length - k) // p)


def period_sum(orbit: Orbit, k: int, p: int) -> complex:
    """Sum of sign-weighted rotations over one period block: j = k+1 .. k+p."""
    if k < 0 or k + p > len(orbit) - 1:
        raise ValueError("period window [k+1, k+p] outside recorded orbit")
    alpha = orbit.params.alpha
    total = 0.0 + 0.0j
    for j in range(k + 1, k + p + 1):
        w = unit_rotation(alpha, j)
        if orbit.signs[j] > 0:
            total += w
        else:
            total -= w
    return total


@dataclass(frozen=True)
class ResidueCircle:
    residue: int
    block_sum: complex  # q_{k+r}
    center: complex  # c_{k+r}
    radius: float


@dataclass(frozen=True)
class CircleStructure:
    center: complex
    radii: tuple[float, ...]  # deduplicated, ascending
    distinct_count: int
    per_residue: tuple[ResidueCircle, ...]
    max_center_spread: float
    max_circle_deviation: float


def circle_structure(orbit: Orbit, hyp: PeriodHypothesis,
                     tol_center: float = 1e-6,
                     tol_radius: float = 1e-6,
                     tol_circle: float = 1e-6) -> CircleStructure:
    """Concentric circles carrying the orbit once signs are p-periodic.

    For each residue class r the block sum q_{k+r} is invariant under
    shifting by whole periods, which traps z_{k+r+l*p} on the circle of
    radius |q_{k+r}| / |e^(2 pi i alpha p) - 1| around
    c_{k+r} = z_{k+r} - q_{k+r} / (e^(2 pi i alpha p) - 1); all the centers
    coincide.  Raises if the recorded orbit violates that geometry beyond
    the tolerances.
    """
    k, p = hyp.k, hyp.p
    alpha = orbit.params.alpha
    rotor = unit_rotation(alpha, p)
    denom = rotor - 1.0
    if denom == 0:
        raise CertificationError(
            "e^(2 pi i alpha p) equals 1 in double precision; circle geometry degenerate")
    residues = []
    for r in range(p):
        q_r = period_sum(orbit, k + r, p)
        c_r = orbit.z(k + r) - q_r / denom
        residues.append(ResidueCircle(r, q_r, c_r, abs(q_r) / abs(denom)))
    centers = np.array([rc.center for rc in residues])
    spread = 0.0
    for i in range(len(centers)):
        spread = max(spread, float(np.abs(centers[i + 1:] - centers[i]).max(initial=0.0)))
    if spread >= tol_center:
        raise CertificationError(
            f"residue centers disagree by {spread:.3g} (tolerance {tol_center:g}); "
            "the period hypothesis does not match the recorded orbit")
    radii_sorted = sorted(rc.radius for rc in residues)
    distinct = [radii_sorted[0]]
    for radius in radii_sorted[1:]:
        if radius - distinct[-1] > tol_radius * max(radius, 1e-12):
            distinct.append(radius)
    center = residues[0].center
    # every recorded point from k onward must sit on one of the circles
    zs = orbit.points[k:]
    dist = np.abs(zs - center)
    grid = np.asarray(distinct)
    pos = np.searchsorted(grid, dist)
    lower = grid[np.clip(pos - 1, 0, grid.size - 1)]
    upper = grid[np.clip(pos, 0, grid.size - 1)]
    deviation = float(np.minimum(np.abs(dist - lower), np.abs(dist - upper)).max())
    if deviation >= tol_circle:
        raise CertificationError(
            f"a recorded point is {deviation:.3g} away from every circle "
            f"(tolerance {tol_circle:g})")
    return CircleStructure(
        center=center,
        radii=tuple(distinct),
        distinct_count=len(distinct),
        per_residue=tuple(residues),
        max_center_spread=spread,
        max_circle_deviation=deviation,
    )


def lipschitz_bound_constant(alpha: float) -> float:
    """Phase-Lipschitz bound for the constant-sign ambiguity function."""
    denom = unit_rotation(alpha, 1) - 1.0
    if denom == 0:
        raise ValueError("alpha is an integer; rotation is degenerate")
    return _4PI + _4PI / abs(denom)


def sampling_check(samples, lipschitz_bound: float, q: int) -> bool:
    """Lemma-style check: q+1 consecutive rotation samples all above 20*L/q.

    True means the sampled function is positive on the whole circle (the
    samples are 3/q-dense and the function cannot dip to zero between them).
    """
    samples = np.asarray(samples, dtype=np.float64)
    if samples.shape[0] != q + 1:
        raise ValueError(f"expected {q + 1} samples for denominator {q}, "
                         f"got {samples.shape[0]}")
    if not lipschitz_bound > 0:
        raise ValueError("Lipschitz bound must be positive")
    return bool(samples.min() > 20.0 * lipschitz_bound / q)


@dataclass(frozen=True)
class ResidueCheck:
    residue: int
    sign: int
    block_sum_abs: float
    lipschitz_bound: float
    threshold: float
    observed_min: float
    signs_constant: bool

    @property
    def passed(self) -> bool:
        return self.signs_constant and self.observed_min > self.threshold


@dataclass(frozen=True)
class Certificate:
    """Machine-checkable record of a constant-sign or periodic-sign proof."""

    kind: str  # "ConstantSign" | "Periodic"
    k: int
    p: int
    beta: float  # rotation number sampled: alpha itself, or frac(p*alpha)
    convergent: tuple[int, int] | None  # (p_ell, q_ell) of beta
    lipschitz_bound: float | None
    threshold: float | None
    observed_min: float | None
    window: tuple[int, int] | None  # inclusive index range of sampled ambiguities
    verdict: str  # "Certified" | "Insufficient"
    reason: str | None = None
    eta: float | None = None
    alpha_hex: str = ""
    residues: tuple[ResidueCheck, ...] = ()
    required_horizon: int | None = None

    @property
    def certified(self) -> bool:
        return self.verdict == "Certified"

    def to_json(self) -> dict:
        doc = {
            "kind": self.kind,
            "k": self.k,
            "p": self.p,
            "beta": self.beta,
            "beta_hex": float(self.beta).hex(),
            "convergent": list(self.convergent) if self.convergent else None,
            "L": self.lipschitz_bound,
            "threshold": self.threshold,
            "observed_min": self.observed_min,
            "window": list(self.window) if self.window else None,
            "verdict": self.verdict,
            "alpha_hex": self.alpha_hex,
            "sample_convention": SAMPLE_CONVENTION,
        }
        if self.reason is not None:
            doc["reason"] = self.reason
        if self.eta is not None:
            doc["eta"] = self.eta
        if self.required_horizon is not None:
            doc["required_horizon"] = self.required_horizon
        if self.residues:
            doc["residues"] = [
                {
                    "r": rc.residue,
                    "sign": rc.sign,
                    "block_sum_abs": rc.block_sum_abs,
                    "L": rc.lipschitz_bound,
                    "threshold": rc.threshold,
                    "observed_min": rc.observed_min,
                    "signs_constant": rc.signs_constant,
                }
                for rc in self.residues
            ]
        return doc

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)


def certify_constant(orbit: Orbit, k: int, ell: int | None = None,
                     q_denominator: int | None = None) -> Certificate:
    """Constant-sign certificate on the window [k, k + q_ell].

    Certified when every sign on the inclusive window agrees and the minimum
    ambiguity there strictly exceeds 20*L/q_ell; the conclusion is that the
    sign never changes again for n >= k.
    """
    alpha = orbit.params.alpha
    conv = convergents(alpha)
    if (ell is None) == (q_denominator is None):
        raise ValueError("specify exactly one of ell / q_denominator")
    if ell is not None:
        if not 0 <= ell < len(conv.entries):
            raise ValueError(f"convergent index {ell} out of range")
        entry = conv.entries[ell]
    else:
        entry = conv.by_denominator(q_denominator)
    q = entry.q
    bound = lipschitz_bound_constant(alpha)
    threshold = 20.0 * bound / q
    base = dict(kind="ConstantSign", k=k, p=1, beta=alpha,
                convergent=(entry.p, entry.q), lipschitz_bound=bound,
                threshold=threshold, alpha_hex=orbit.params.alpha_hex)
    last = len(orbit) - 1
    if k < 0 or k > last:
        raise ValueError(f"start index {k} outside recorded orbit")
    if k + q > last:
        return Certificate(**base, observed_min=None, window=None,
                           verdict="Insufficient",
                           reason=f"window [k, k+{q}] exceeds recorded horizon",
                           required_horizon=k + q + 1)
    window_signs = orbit.signs[k:k + q + 1]
    observed = float(orbit.ambiguities[k:k + q + 1].min())
    if not np.all(window_signs == window_signs[0]):
        return Certificate(**base, observed_min=observed, window=(k, k + q),
                           verdict="Insufficient",
                           reason="signs are not constant on the window")
    if not observed > threshold:
        return Certificate(**base, observed_min=observed, window=(k, k + q),
                           verdict="Insufficient",
                           reason="window minimum ambiguity does not exceed the "
                                  "sampling threshold")
    return Certificate(**base, observed_min=observed, window=(k, k + q),
                       verdict="Certified")


def _periodic_residue_checks(orbit: Orbit, k: int, p: int, denom_abs: float,
                             block_sums: list[complex],
                             Q: int) -> tuple[list[ResidueCheck], bool]:
    checks = []
    all_passed = True
    for r in range(p):
        idx = k + r + 1 + p * np.arange(Q + 1)
        sub_signs = orbit.signs[idx]
        sub_amb = orbit.ambiguities[idx]
        bound = _4PI * (1.0 + abs(block_sums[r]) / denom_abs)
        check = ResidueCheck(
            residue=r,
            sign=int(sub_signs[0]),
            block_sum_abs=abs(block_sums[r]),
            lipschitz_bound=bound,
            threshold=20.0 * bound / Q,
            observed_min=float(sub_amb.min()),
            signs_constant=bool(np.all(sub_signs == sub_signs[0])),
        )
        checks.append(check)
        all_passed = all_passed and check.passed
    return checks, all_passed


def certify_periodic(orbit: Orbit, hyp: PeriodHypothesis, eta: float) -> Certificate:
    """Periodic-sign certificate via per-residue subsampling.

    Along the arithmetic subsequence of a residue class, the step phase
    advances by beta = frac(p*alpha) per period, so each residue is a
    constant-sign problem for the rotation by beta with Lipschitz bound
    L_r = 4*pi*(1 + |q_r| / |e^(2 pi i beta) - 1|).  Q is the smallest
    convergent denominator of beta with 20*max_r(L_r)/Q < eta; Certified
    when every residue keeps a constant sign over l = 0..Q and its sampled
    ambiguities stay strictly above 20*L_r/Q.
    """
    if not 0.0 < eta < 1.0:
        raise ValueError("eta must lie in (0, 1)")
    return _certify_periodic_inner(orbit, hyp, eta=eta, max_window=None)


def certify_periodic_best(orbit: Orbit, hyp: PeriodHypothesis) -> Certificate:
    """Best-effort periodic certificate using the largest window the record allows."""
    return _certify_periodic_inner(orbit, hyp, eta=None, max_window=len(orbit) - 1)


def _certify_periodic_inner(orbit: Orbit, hyp: PeriodHypothesis, eta: float | None,
                            max_window: int | None) -> Certificate:
    alpha = orbit.params.alpha
    k, p = hyp.k, hyp.p
    beta = frac_mult(alpha, p)
    rotor = unit_rotation(alpha, p)
    denom = rotor - 1.0
    if beta == 0.0 or denom == 0:
        raise CertificationError(
            "frac(p*alpha) is indistinguishable from 0 in double precision; "
            "the subsampled rotation is degenerate and no certificate can be issued")
    base = dict(kind="Periodic", k=k, p=p, beta=beta, eta=eta,
                alpha_hex=orbit.params.alpha_hex)
    last = len(orbit) - 1
    if k + 2 * p - 1 > last:
        return Certificate(**base, convergent=None, lipschitz_bound=None,
                           threshold=None, observed_min=None, window=None,
                           verdict="Insufficient",
                           reason="horizon too short to evaluate the period sums",
                           required_horizon=k + 2 * p)
    block_sums = [period_sum(orbit, k + r, p) for r in range(p)]
    denom_abs = abs(denom)
    bound_max = max(_4PI * (1.0 + abs(q) / denom_abs) for q in block_sums)
    conv_beta = convergents(beta)
    if eta is not None:
        entry = conv_beta.smallest_q_above(20.0 * bound_max / eta)
        if entry is None:
            return Certificate(**base, convergent=None, lipschitz_bound=bound_max,
                               threshold=None, observed_min=None, window=None,
                               verdict="Insufficient",
                               reason="continued-fraction expansion of frac(p*alpha) "
                                      "ends below the required denominator")
    else:
        q_limit = (max_window - k) // p - 1
        entry = conv_beta.largest_q_at_most(q_limit) if q_limit >= 1 else None
        if entry is None:
            return Certificate(**base, convergent=None, lipschitz_bound=bound_max,
                               threshold=None, observed_min=None, window=None,
                               verdict="Insufficient",
                               reason="recorded horizon admits no usable convergent "
                                      "denominator of frac(p*alpha)")
    Q = entry.q
    needed_last = k + p * (Q + 1)
    if needed_last > last:
        return Certificate(**base, convergent=(entry.p, entry.q),
                           lipschitz_bound=bound_max,
                           threshold=20.0 * bound_max / Q,
                           observed_min=None, window=None,
                           verdict="Insufficient",
                           reason=f"certification window needs index {needed_last} "
                                  f"but the record ends at {last}",
                           required_horizon=needed_last + 1)
    checks, all_passed = _periodic_residue_checks(orbit, k, p, denom_abs,
                                                  block_sums, Q)
    observed = min(c.observed_min for c in checks)
    threshold = max(c.threshold for c in checks)
    if not all_passed:
        bad_signs = [c.residue for c in checks if not c.signs_constant]
        reason = ("subsampled signs change within the window for residues "
                  f"{bad_signs}" if bad_signs else
                  "a residue's sampled ambiguities do not exceed its threshold")
        return Certificate(**base, convergent=(entry.p, entry.q),
                           lipschitz_bound=bound_max, threshold=threshold,
                           observed_min=observed, window=(k, needed_last),
                           verdict="Insufficient", reason=reason,
                           residues=tuple(checks))
    return Certificate(**base, convergent=(entry.p, entry.q),
                       lipschitz_bound=bound_max, threshold=threshold,
                       observed_min=observed, window=(k, needed_last),
                       verdict="Certified", residues=tuple(checks))
