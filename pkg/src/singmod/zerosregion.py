"""The pairing-up function on the critical strip, the region partition used
to control its perturbations, the two inequality checkers, and smoothness
statistics of moduli with the associated zero-free width.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

PHI = (1 + math.sqrt(5)) / 2


class PoleProximityError(ArithmeticError):
    """A denominator of the pairing-up function is vanishingly small."""


class FactorizationBudgetError(RuntimeError):
    """Trial division exceeded its operation budget."""


@dataclass(frozen=True)
class StripPoint:
    s: complex

    def __post_init__(self):
        if not 0 < self.s.real < 1:
            raise ValueError("point must lie strictly inside the critical strip")


class Region(str, Enum):
    R1 = "R1"
    R2 = "R2"
    R3 = "R3"
    BTILDE = "Btilde"


@dataclass(frozen=True)
class RegionLabel:
    label: Region
    M: float

    def __post_init__(self):
        if self.M < 2:
            raise ValueError("M must be >= 2")


def pairing_up(s: complex, eps: float) -> float:
    """1/(s+eps) + 1/(conj(s)+eps) + 1/(1-s+eps) + 1/(1-conj(s)+eps)
    = 2 Re(1/(s+eps)) + 2 Re(1/(1-s+eps)); real, and positive on the strip."""
    s = complex(s)
    d1, d2 = s + eps, 1 - s + eps
    if abs(d1) < 1e-300 or abs(d2) < 1e-300:
        raise PoleProximityError("pairing-up denominator underflow")
    return 2 * (1 / d1).real + 2 * (1 / d2).real


def classify(s: StripPoint, M: float) -> RegionLabel:
    """Assign the unique region of the strip partition for parameter M >= 2:

      R1: |t| >= 1
      R2: 1/M <= sigma <= 1 - 1/M, |t| < 1
      R3: sigma(1-sigma) <= (1/M)(1 - 1/M), 1/sqrt(M) <= |t| < 1
      Btilde: the rest (the two small boxes around s = 0 and s = 1)

    R2 takes precedence on the shared boundary sigma in {1/M, 1 - 1/M}.
    """
    if M < 2:
        raise ValueError("M must be >= 2")
    sigma, t = s.s.real, s.s.imag
    if abs(t) >= 1:
        return RegionLabel(Region.R1, M)
    if 1 / M <= sigma <= 1 - 1 / M:
        return RegionLabel(Region.R2, M)
    if sigma * (1 - sigma) <= (1 / M) * (1 - 1 / M) and abs(t) >= M**-0.5:
        return RegionLabel(Region.R3, M)
    return RegionLabel(Region.BTILDE, M)


def golden_inequality_check(s: StripPoint) -> tuple[float, float, bool]:
    """Pi_0(s) > Pi_{phi-1}(s) / (2 phi - 1) on the whole strip; returns
    (lhs, rhs, holds) so callers can report the margin."""
    lhs = pairing_up(s.s, 0.0)
    rhs = pairing_up(s.s, PHI - 1) / (2 * PHI - 1)
    return lhs, rhs, lhs > rhs


def perturbation_inequality_check(
    s: StripPoint, eps: float, M: float
) -> tuple[float, float, bool]:
    """|Pi_0(s) - Pi_eps(s)| < 5 M eps Pi_eps(s) for s outside the corner
    boxes; returns (deviation, bound, holds)."""
    if not 0 < eps < 1:
        raise ValueError("eps must be in (0, 1)")
    if classify(s, M).label is Region.BTILDE:
        raise ValueError("point lies in the excluded corner region")
    p0 = pairing_up(s.s, 0.0)
    pe = pairing_up(s.s, eps)
    dev = abs(p0 - pe)
    bound = 5 * M * eps * pe
    return dev, bound, dev < bound


# -- vectorized property sweeps ----------------------------------------------

def _pairing_vec(sigma: np.ndarray, t: np.ndarray, eps) -> np.ndarray:
    a = sigma + eps
    b = 1 - sigma + eps
    return 2 * a / (a * a + t * t) + 2 * b / (b * b + t * t)


def golden_sweep(samples: int, seed: int) -> dict:
    """Seeded sweep of the golden-ratio inequality; returns violation count
    and the minimum relative margin."""
    rng = np.random.default_rng(seed)
    sigma = rng.uniform(1e-12, 1 - 1e-12, samples)
    t = rng.standard_normal(samples) * 2.0
    lhs = _pairing_vec(sigma, t, 0.0)
    rhs = _pairing_vec(sigma, t, PHI - 1) / (2 * PHI - 1)
    margin = (lhs - rhs) / np.maximum(rhs, 1e-300)
    return {"samples": samples, "violations": int(np.sum(lhs <= rhs)), "min_margin": float(margin.min())}


def perturbation_sweep(samples: int, seed: int) -> dict:
    """Seeded sweep of the 5 M eps perturbation bound over points outside the
    corner boxes."""
    rng = np.random.default_rng(seed)
    kept = 0
    violations = 0
    min_margin = math.inf
    while kept < samples:
        n = samples - kept
        sigma = rng.uniform(1e-9, 1 - 1e-9, n)
        t = rng.standard_normal(n) * 2.0
        eps = rng.uniform(1e-9, 1 - 1e-9, n)
        M = rng.uniform(2.0, 64.0, n)
        in_r1 = np.abs(t) >= 1
        in_r2 = (sigma >= 1 / M) & (sigma <= 1 - 1 / M) & (np.abs(t) < 1)
        in_r3 = (sigma * (1 - sigma) <= (1 / M) * (1 - 1 / M)) & (np.abs(t) >= M**-0.5) & (np.abs(t) < 1)
        ok = in_r1 | in_r2 | in_r3
        sigma, t, eps, M = sigma[ok], t[ok], eps[ok], M[ok]
        p0 = _pairing_vec(sigma, t, 0.0)
        pe = _pairing_vec(sigma, t, eps)
        dev = np.abs(p0 - pe)
        bound = 5 * M * eps * pe
        if len(dev):
            violations += int(np.sum(dev >= bound))
            min_margin = min(min_margin, float(((bound - dev) / bound).min()))
        kept += len(dev)
    return {"samples": samples, "violations": violations, "min_margin": min_margin}


# -- smoothness statistics -----------------------------------------------------

@dataclass(frozen=True)
class SmoothnessStats:
    q: int
    radical: int
    P: int
    K: float
    Lstat: float

    def __post_init__(self):
        if self.q % self.radical or self.radical % self.P:
            raise ValueError("radical must divide q and P must divide the radical")
        if self.K < 1 - 1e-12:
            raise ValueError("K = log q / log q' must be >= 1")


def factorize(q: int, budget: int = 1 << 22) -> dict[int, int]:
    """Prime factorization by trial division; raises once the division count
    exceeds the budget (adequate below 2^64 for moduli with no huge prime
    factors)."""
    if q < 2:
        raise ValueError("q must be >= 2")
    fac: dict[int, int] = {}
    ops = 0
    for p in (2, 3):
        while q % p == 0:
            fac[p] = fac.get(p, 0) + 1
            q //= p
    d = 5
    step = 2
    while d * d <= q:
        ops += 1
        if ops > budget:
            raise FactorizationBudgetError("trial-division budget exhausted")
        while q % d == 0:
            fac[d] = fac.get(d, 0) + 1
            q //= d
        d += step
        step = 6 - step
    if q > 1:
        fac[q] = fac.get(q, 0) + 1
    return fac


def smoothness_stats(q: int) -> SmoothnessStats:
    """Radical q' = prod of the distinct primes of q, its largest prime
    factor, and the size ratios K = log q/log q', L = loglog q/loglog q'."""
    fac = factorize(q)
    radical = math.prod(fac)
    P = max(fac)
    K = math.log(q) / math.log(radical)
    llq = math.log(math.log(q))
    llr = math.log(math.log(radical))
    Lstat = llq / llr if llr != 0 else math.inf
    return SmoothnessStats(q=q, radical=radical, P=P, K=K, Lstat=Lstat)


def chang_width(stats: SmoothnessStats, c: float) -> float:
    """Width parameter of the smooth-modulus zero-free region:
    (1/c) max(log P, (log q')(log 2K)/loglog q', (log q)^{9/10}).

    The constant c is effectively computable but not pinned down anywhere
    usable, so callers must supply it.  Requires q' >= 16 so that
    loglog q' > 0.
    """
    if c <= 0:
        raise ValueError("c must be positive")
    if stats.radical < 16:
        raise ValueError("radical must be >= 16 (loglog q' must be positive)")
    t1 = math.log(stats.P)
    t2 = math.log(stats.radical) * math.log(2 * stats.K) / math.log(math.log(stats.radical))
    t3 = math.log(stats.q) ** 0.9
    return max(t1, t2, t3) / c


def is_y_smooth(q: int, y: float) -> bool:
    """True iff every prime factor of q is at most y."""
    return smoothness_stats(q).P <= y
