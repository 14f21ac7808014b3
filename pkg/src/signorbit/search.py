"""Seeded random exploration of (alpha, z_init) parameter space.

Each run draws its randomness from a Philox stream keyed by (seed, run
index), so records are reproducible across platforms and indifferent to
execution order, and every record can be re-run from its own parameters
alone.  Periods are reported only when at least min_repeats full periods fit
in the recorded suffix.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterator

import numpy as np

from .diophantine import nearest_int_distance
from .dynamics import Params, StatusKind, min_ambiguity, run_orbit
from .periodicity import certify_periodic_best, detect_sign_period


@dataclass(frozen=True)
class AlphaSampler:
    """uniform on (0,1), near_half(delta), or near(x, delta)."""

    kind: str  # 'uniform' | 'near_half' | 'near'
    x: float = 0.0
    delta: float = 0.0

    def __post_init__(self):
        if self.kind not in ("uniform", "near_half", "near"):
            raise ValueError(f"unknown alpha sampler {self.kind!r}")
        if self.kind != "uniform" and not self.delta > 0:
            raise ValueError("delta must be positive")

    def draw(self, gen: np.random.Generator) -> float:
        while True:
            if self.kind == "uniform":
                alpha = gen.uniform(0.0, 1.0)
            elif self.kind == "near_half":
                alpha = 0.5 + gen.uniform(-self.delta, self.delta)
            else:
                alpha = self.x + gen.uniform(-self.delta, self.delta)
            alpha = math.fmod(alpha, 1.0)
            if alpha < 0.0:
                alpha += 1.0
            if alpha != 0.0:
                return alpha


@dataclass(frozen=True)
class SearchConfig:
    alpha_sampler: AlphaSampler
    z_radius: float
    horizon: int
    count: int
    rng_seed: int
    min_repeats: int = 5
    p_max: int | None = None
    certify: bool = False

    def __post_init__(self):
        if not self.z_radius > 0:
            raise ValueError("z_radius must be positive")
        if self.count < 0:
            raise ValueError("count must be >= 0")
        if self.horizon < 1:
            raise ValueError("horizon must be >= 1")


@dataclass(frozen=True)
class RunRecord:
    index: int
    alpha: float
    alpha_hex: str
    z_init: complex
    horizon: int
    status: str
    period: tuple[int, int, int] | None  # (k, p, repeats)
    min_ambiguity: float
    certificate_verdict: str | None = None

    def to_json(self) -> dict:
        return {
            "index": self.index,
            "alpha": self.alpha,
            "alpha_hex": self.alpha_hex,
            "z_init": [self.z_init.real, self.z_init.imag],
            "horizon": self.horizon,
            "status": self.status,
            "period": list(self.period) if self.period else None,
            "min_ambiguity": self.min_ambiguity,
            "certificate_verdict": self.certificate_verdict,
        }


def record_from_json(doc: dict) -> RunRecord:
    return RunRecord(
        index=doc["index"],
        alpha=float.fromhex(doc["alpha_hex"]),
        alpha_hex=doc["alpha_hex"],
        z_init=complex(doc["z_init"][0], doc["z_init"][1]),
        horizon=doc["horizon"],
        status=doc["status"],
        period=tuple(doc["period"]) if doc.get("period") else None,
        min_ambiguity=doc["min_ambiguity"],
        certificate_verdict=doc.get("certificate_verdict"),
    )


def _run_generator(seed: int, index: int) -> np.random.Generator:
    # counter-based: each run owns a disjoint 2^128-entry slice of the stream
    return np.random.Generator(np.random.Philox(key=seed, counter=index << 128))


def run_case(alpha: float, z_init: complex, horizon: int, index: int = 0,
             min_repeats: int = 5, p_max: int | None = None,
             certify: bool = False) -> RunRecord:
    """Execute one parameter pair and summarize it as a reproducible record."""
    params = Params(alpha=alpha, z_init=z_init, horizon=horizon)
    orbit = run_orbit(params)
    hyp = detect_sign_period(orbit.signs, min_repeats, p_max) if len(orbit) else None
    verdict = None
    if certify and hyp is not None and orbit.status.kind is not StatusKind.TIE:
        try:
            verdict = certify_periodic_best(orbit, hyp).verdict
        except ValueError:
            verdict = "Insufficient"
    minamb = min_ambiguity(orbit, 0) if len(orbit) else 0.0
    if orbit.status.kind is StatusKind.TIE:
        minamb = 0.0
    return RunRecord(
        index=index,
        alpha=params.alpha,
        alpha_hex=params.alpha_hex,
        z_init=z_init,
        horizon=horizon,
        status=orbit.status.kind.value,
        period=(hyp.k, hyp.p, hyp.repeats_observed) if hyp else None,
        min_ambiguity=minamb,
        certificate_verdict=verdict,
    )


def random_search(config: SearchConfig) -> Iterator[RunRecord]:
    """Deterministic stream of records, ordered by run index."""
    for index in range(config.count):
        gen = _run_generator(config.rng_seed, index)
        alpha = config.alpha_sampler.draw(gen)
        # uniform in the disk of radius R: sqrt-radius trick
        radius = config.z_radius * math.sqrt(gen.uniform(0.0, 1.0))
        angle = gen.uniform(0.0, 2.0 * math.pi)
        z_init = complex(radius * math.cos(angle), radius * math.sin(angle))
        yield run_case(alpha, z_init, config.horizon, index,
                       config.min_repeats, config.p_max, config.certify)


def records_to_jsonl(records) -> str:
    return "".join(json.dumps(r.to_json()) + "\n" for r in records)


def period_stats(records) -> dict:
    """Histogram and observables over a batch of records.

    Reports, never asserts: the count of periods divisible by 4 and the
    product p * dist(2*alpha, Z) for each periodic record are conjecture
    material, logged for inspection.
    """
    records = list(records)
    histogram: dict[int, int] = {}
    div4 = 0
    max_period = None
    heuristic = []
    tie_count = 0
    for rec in records:
        if rec.status == "tie":
            tie_count += 1
        if rec.period is None:
            continue
        _, p, _ = rec.period
        histogram[p] = histogram.get(p, 0) + 1
        if p % 4 == 0:
            div4 += 1
        if max_period is None or p > max_period["p"]:
            max_period = {"p": p, "alpha_hex": rec.alpha_hex,
                          "z_init": [rec.z_init.real, rec.z_init.imag]}
        heuristic.append({"p": p,
                          "p_times_norm_2alpha": p * nearest_int_distance(2.0 * rec.alpha)})
    periodic = sum(histogram.values())
    return {
        "count": len(records),
        "periodic_count": periodic,
        "fraction_periodic": periodic / len(records) if records else 0.0,
        "tie_count": tie_count,
        "histogram": {str(p): c for p, c in sorted(histogram.items())},
        "div4_count": div4,
        "max_period": max_period,
        "heuristic_p_norm2alpha": heuristic,
    }


class DoublingOutcome(Enum):
    VERIFIED = "verified"
    FAILED = "failed"
    NOT_APPLICABLE = "not_applicable"


def verify_period_doubling(alpha: float, z_init: complex, horizon: int,
                           min_repeats: int = 5) -> DoublingOutcome:
    """Check the half-shift period-doubling prediction for an odd base period.

    Shifting alpha by 0.5 (mod 1) flips the rotation term at every odd index,
    so the shifted system revisits the same points with signs eps_n*(-1)^n;
    an odd base period p must become exactly 2p.  Even or undetected base
    periods are NOT_APPLICABLE.
    """
    base_params = Params(alpha=alpha, z_init=z_init, horizon=horizon)
    base = run_orbit(base_params)
    if len(base) == 0:
        return DoublingOutcome.NOT_APPLICABLE
    base_hyp = detect_sign_period(base.signs, min_repeats)
    if base_hyp is None or base_hyp.p % 2 == 0:
        return DoublingOutcome.NOT_APPLICABLE
    shifted_alpha = alpha + 0.5 if base_params.alpha < 0.5 else base_params.alpha - 0.5
    shifted = run_orbit(Params(alpha=shifted_alpha, z_init=z_init, horizon=horizon))
    overlap = min(len(base), len(shifted))
    flip = np.where(np.arange(overlap) % 2 == 0, 1, -1).astype(np.int8)
    if not np.array_equal(shifted.signs[:overlap], base.signs[:overlap] * flip):
        return DoublingOutcome.FAILED
    shifted_hyp = detect_sign_period(shifted.signs, min_repeats)
    if shifted_hyp is None or shifted_hyp.p != 2 * base_hyp.p:
        return DoublingOutcome.FAILED
    return DoublingOutcome.VERIFIED
