"""Logarithmic heights: rationals, algebraic integers given by their complex
conjugates, and the two height computations for the singular modulus of a
discriminant (exact conjugate average vs. the pi sqrt(|D|)/a leading term).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .precision import DOUBLE, PrecisionContext
from .quadforms import ClassData, Discriminant, heegner_points
from .modfunc import log_abs_j_stable

# |alpha| this close to 1 counts as exactly 1 and contributes nothing
_UNIT_TOL = 1e-14


def _log_plus(v: float) -> float:
    if abs(v - 1.0) <= _UNIT_TOL:
        return 0.0
    return math.log(v) if v > 1.0 else 0.0


@dataclass(frozen=True)
class ConjugateSet:
    """Complex embeddings of an algebraic integer; must be closed under
    conjugation up to a numeric tolerance (the stand-in for Galois stability)."""

    values: tuple[complex, ...]

    def __post_init__(self):
        if not self.values:
            raise ValueError("conjugate set must be nonempty")
        vals = [complex(v) for v in self.values]
        scale = max(1.0, max(abs(v) for v in vals))
        for v in vals:
            if min(abs(v.conjugate() - w) for w in vals) > 1e-9 * scale:
                raise ValueError("set is not closed under complex conjugation")


def height_rational(m: int, n: int) -> float:
    """log max(|m|, |n|) after reduction to lowest terms."""
    if n == 0:
        raise ValueError("denominator must be nonzero")
    g = math.gcd(m, n)
    return math.log(max(abs(m // g), abs(n // g)))


def height_algebraic_integer(A: ConjugateSet) -> float:
    """Average of log^+ |alpha| over the conjugates."""
    return sum(_log_plus(abs(v)) for v in A.values) / len(A.values)


def height_j(D: Discriminant, cd: ClassData, ctx: PrecisionContext = DOUBLE) -> float:
    """Height of j at the principal CM point of D: the mean of log^+ |j| over
    all Heegner points, evaluated through the overflow-safe log|j|."""
    if cd.disc.value != D.value:
        raise ValueError("class data does not belong to D")
    tot = 0.0
    for pt in heegner_points(cd):
        tau = pt.source_form.cm_point_mp(ctx.dps) if ctx.extended else pt.tau
        lj = float(log_abs_j_stable(tau, ctx))
        tot += max(lj, 0.0) if abs(lj) > _UNIT_TOL else 0.0
    return tot / cd.h


def height_j_approx(D: Discriminant, cd: ClassData) -> float:
    """Leading-term surrogate (1/h) sum over forms of pi sqrt(|D|)/a."""
    if cd.disc.value != D.value:
        raise ValueError("class data does not belong to D")
    s = math.pi * math.sqrt(-D.value) * sum(1.0 / f.a for f in cd.forms)
    return s / cd.h
