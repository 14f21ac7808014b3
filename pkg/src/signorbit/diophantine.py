"""Continued-fraction convergents and distance to the nearest integer.

The expansion is taken of the exact dyadic rational equal to the input
double, so it is finite and every emitted convergent is a true convergent of
the number the engine actually iterates.  Integer work uses Python's
arbitrary-precision ints throughout.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from fractions import Fraction


@dataclass(frozen=True)
class Convergent:
    a: int  # partial quotient
    p: int
    q: int


@dataclass(frozen=True)
class ConvergentList:
    source: float
    entries: tuple[Convergent, ...]

    def denominators(self) -> list[int]:
        return [c.q for c in self.entries]

    def by_denominator(self, q: int) -> Convergent:
        for c in self.entries:
            if c.q == q:
                return c
        raise KeyError(f"no convergent with denominator {q}")

    def smallest_q_above(self, bound: float) -> Convergent | None:
        """First convergent with q > bound, or None if the expansion ends below."""
        for c in self.entries:
            if c.q > bound:
                return c
        return None

    def largest_q_at_most(self, bound: float) -> Convergent | None:
        best = None
        for c in self.entries:
            if c.q <= bound:
                best = c
        return best


def _raw_convergents(x: float, q_cap: int | None):
    fr = Fraction(x)
    num, den = fr.numerator, fr.denominator
    a, rem = divmod(num, den)
    p_prev, q_prev = 1, 0
    p_cur, q_cur = a, 1
    out = [Convergent(int(a), int(p_cur), 1)]
    num, den = den, rem
    while den != 0:
        a, rem = divmod(num, den)
        p_next = a * p_cur + p_prev
        q_next = a * q_cur + q_prev
        if q_cap is not None and q_next > q_cap:
            break
        out.append(Convergent(int(a), int(p_next), int(q_next)))
        p_prev, q_prev, p_cur, q_cur = p_cur, q_cur, p_next, q_next
        num, den = den, rem
    return out


def convergents(x: float, q_cap: int | None = None) -> ConvergentList:
    """All convergents p/q of x in (0,1) with q <= q_cap.

    The expansion of a double is finite, so q_cap=None returns the whole
    list.  When the first partial quotient after 0 is 1 the initial 0/1
    entry is dropped in favour of the equal-denominator 1/1 convergent,
    keeping denominators strictly increasing.
    """
    if not 0.0 < x < 1.0:
        raise ValueError(f"x must be in (0,1), got {x!r}")
    out = _raw_convergents(x, q_cap)
    if len(out) >= 2 and out[1].q == out[0].q:
        out = out[1:]
    return ConvergentList(source=x, entries=tuple(out))


def nearest_int_distance(x: float) -> float:
    """min over integers n of |x - n|; always in [0, 1/2]."""
    return abs(float(x) - round(float(x)))


def convergents_tsv(conv: ConvergentList) -> str:
    """TSV table (ell, a, p, q); the CLI convergents output format."""
    buf = io.StringIO()
    buf.write("ell\ta\tp\tq\n")
    for ell, c in enumerate(conv.entries):
        buf.write(f"{ell}\t{c.a}\t{c.p}\t{c.q}\n")
    return buf.getvalue()
