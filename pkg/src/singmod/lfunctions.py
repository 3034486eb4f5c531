"""Dirichlet L-values at s = 1 for the quadratic character of a negative
fundamental discriminant, by two independent routes:

  hurwitz_series  -- expand L(s,chi) = q^{-s} sum_a chi(a) zeta(s, a/q) at
                     s = 1.  The character kills the poles, leaving L(1,chi)
                     as a digamma sum and L'(1,chi) as a sum of first
                     generalized Stieltjes constants (Euler-Maclaurin).
  klf_classgroup  -- the Kronecker limit formula: the constant term of each
                     ideal-class zeta function is explicit in Im(tau) and the
                     divisor cosine sum U(tau); averaging over the class group
                     gives the Euler-Kronecker constant gamma_K, and
                     L'/L(1,chi) = gamma_K - gamma.

The second route is an exact identity, limited only by eta-series rounding,
so agreement of the two is a strong end-to-end check of everything upstream.

Also here: the real-analytic Eisenstein lattice sum, its analytic
continuation by incomplete-gamma (theta) decomposition, and the numeric
verification of its Laurent expansion at s = 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath as mp
import numpy as np
from scipy.special import digamma

from .precision import DOUBLE, PrecisionContext
from .quadforms import ClassData, Discriminant, chi_table, heegner_points
from .modfunc import u_function

EULER = float(np.euler_gamma)

METHOD_SERIES = "hurwitz_series"
METHOD_KLF = "klf_classgroup"

# Bernoulli numbers B_2, B_4, ... and harmonic numbers H_1, H_2, ...
_B2J = (1 / 6, -1 / 30, 1 / 42, -1 / 30, 5 / 66, -691 / 2730, 7 / 6)
_HARMONIC = tuple(np.cumsum(1.0 / np.arange(1, 18)))


class PoleError(ArithmeticError):
    """Evaluation requested at the pole s = 1."""


class CostCeilingError(RuntimeError):
    """The modulus exceeds the configured work budget."""


class ExtrapolationError(ArithmeticError):
    """Richardson levels disagree; the extrapolated limit is unreliable."""


@dataclass(frozen=True)
class LValueResult:
    L1: float
    Lprime_over_L: float
    method: str
    err_estimate: float

    def __post_init__(self):
        if not self.L1 > 0:
            raise ValueError("L(1,chi) must be positive for odd real characters")
        if self.err_estimate < 0:
            raise ValueError("error estimate must be nonnegative")


@dataclass(frozen=True)
class KroneckerLimitSet:
    limits: tuple[float, ...]
    gamma_K: float


# -- Hurwitz zeta and Stieltjes sums ----------------------------------------

def hurwitz_zeta(s: float, x: float, N: int = 28, J: int = 6) -> float:
    """zeta(s, x) = sum (k+x)^{-s} by Euler-Maclaurin.

    Valid for s > 0, s != 1 and 0 < x <= 1.  The truncation error is of the
    order of the first omitted Bernoulli term, about u^{-s-2J-1} with
    u = N + x, far below 1e-15 for the defaults.
    """
    if not 0 < x <= 1:
        raise ValueError("x must be in (0, 1]")
    if abs(s - 1.0) < 1e-12:
        raise PoleError("zeta(s, x) has a pole at s = 1")
    k = np.arange(N)
    tot = float(np.sum((k + x) ** (-s)))
    u = N + x
    tot += u ** (1 - s) / (s - 1) + 0.5 * u**-s
    rising = s  # s(s+1)...(s+2j-2), grown as j advances
    for j in range(1, J + 1):
        tot += _B2J[j - 1] / math.factorial(2 * j) * rising * u ** (-s - 2 * j + 1)
        rising *= (s + 2 * j - 1) * (s + 2 * j)
    return tot


def hurwitz_zeta_mp(s, x, dps: int = 30):
    """Same Euler-Maclaurin sum in software arithmetic (used by constants)."""
    with mp.workdps(dps + 5):
        s = mp.mpf(s)
        x = mp.mpf(x)
        if s == 1:
            raise PoleError("zeta(s, x) has a pole at s = 1")
        N, J = int(1.7 * dps) + 8, 12
        tot = mp.fsum((k + x) ** (-s) for k in range(N))
        u = N + x
        tot += u ** (1 - s) / (s - 1) + u ** (-s) / 2
        rising = s
        for j in range(1, J + 1):
            tot += mp.bernoulli(2 * j) / mp.factorial(2 * j) * rising * u ** (-s - 2 * j + 1)
            rising *= (s + 2 * j - 1) * (s + 2 * j)
        return tot


def stieltjes_gamma1(x: np.ndarray, N: int = 28, J: int = 6) -> np.ndarray:
    """First generalized Stieltjes constant gamma_1(x), vectorized.

    gamma_1(x) = lim ( sum_{k<=m} log(k+x)/(k+x) - log^2(m+x)/2 ), computed
    by Euler-Maclaurin on f(u) = log(u)/u whose derivatives are
    f^(n)(u) = (-1)^n n! (log u - H_n) / u^(n+1).
    """
    x = np.atleast_1d(np.asarray(x, dtype=np.float64))
    k = np.arange(N).reshape(-1, 1)
    u0 = k + x
    s = np.sum(np.log(u0) / u0, axis=0)
    u = N + x
    lu = np.log(u)
    s += -0.5 * lu * lu + 0.5 * lu / u
    u2 = u * u
    upow = u2.copy()
    for j in range(1, J + 1):
        s += _B2J[j - 1] / (2 * j) * (lu - _HARMONIC[2 * j - 2]) / upow
        upow *= u2
    return s


# -- the two L'/L routes ------------------------------------------------------

def L_one(D: Discriminant, chi: np.ndarray | None = None) -> float:
    """L(1, chi_D) = -(1/q) sum_a chi(a) psi(a/q), q = |D|."""
    q = -D.value
    if chi is None:
        chi = chi_table(D)
    a = np.arange(1, q)
    nz = chi[1:] != 0
    return float(-(chi[1:][nz] * digamma(a[nz] / q)).sum() / q)


def L_prime_over_L_series(
    D: Discriminant,
    ctx: PrecisionContext = DOUBLE,
    max_modulus: int = 2_000_000,
) -> LValueResult:
    """L'/L(1,chi_D) from the Hurwitz expansion: the pole terms cancel since
    sum chi(a) = 0, leaving -log q minus a chi-weighted Stieltjes sum over
    the digamma sum."""
    q = -D.value
    if q > max_modulus:
        raise CostCeilingError(f"|D| = {q} exceeds the ceiling {max_modulus}")
    chi = chi_table(D)
    a = np.arange(1, q)
    nz = chi[1:] != 0
    ch = chi[1:][nz].astype(np.float64)
    xs = a[nz] / q
    S0 = float(-(ch * digamma(xs)).sum())  # = q * L(1,chi)
    S1 = float((ch * stieltjes_gamma1(xs)).sum())
    L1 = S0 / q
    lpl = -math.log(q) - S1 / S0
    # per-term Euler-Maclaurin tails are ~1e-17; rounding grows like sqrt(q)
    err = math.sqrt(q) * 1e-15 * (1 + abs(math.log(q))) / max(S0, 1.0)
    return LValueResult(L1=L1, Lprime_over_L=lpl, method=METHOD_SERIES, err_estimate=err)


def kronecker_limits(cd: ClassData, ctx: PrecisionContext = DOUBLE) -> KroneckerLimitSet:
    """Constant terms of the ideal-class zeta functions at s = 1:

        K(A) = pi/3 Im(tau_A) - log Im(tau_A) + U(tau_A)
               - (1/2) log|D| + 2 gamma - log 2,

    one per class; their mean is the Euler-Kronecker constant gamma_K."""
    d = cd.disc.value
    base = -0.5 * math.log(-d) + 2 * EULER - math.log(2)
    limits = []
    for pt in heegner_points(cd):
        y = pt.tau.imag
        limits.append(math.pi / 3 * y - math.log(y) + float(u_function(pt.tau, ctx)) + base)
    gamma_K = math.fsum(limits) / cd.h
    return KroneckerLimitSet(limits=tuple(limits), gamma_K=gamma_K)


def L_prime_over_L_klf(
    D: Discriminant, cd: ClassData, ctx: PrecisionContext = DOUBLE
) -> LValueResult:
    """L'/L(1,chi_D) = gamma_K - gamma, with gamma_K from the limit formula.

    Exact as an identity; the only error is eta-series rounding."""
    if cd.disc.value != D.value:
        raise ValueError("class data does not belong to D")
    kls = kronecker_limits(cd, ctx)
    L1 = 2 * math.pi * cd.h / (cd.w * math.sqrt(-D.value))
    err = 2.0 ** (-ctx.bits + 8) * (2 + abs(kls.gamma_K))
    return LValueResult(
        L1=L1,
        Lprime_over_L=kls.gamma_K - EULER,
        method=METHOD_KLF,
        err_estimate=err,
    )


# -- real-analytic Eisenstein series -----------------------------------------

def eisenstein_E(tau: complex, s: float, R: int = 60) -> float:
    """Lattice sum sum_{0 < max(|m|,|n|) <= R} Im(tau)^s / |m tau + n|^{2s};
    requires s > 1 (the tail is O(R^{2-2s}))."""
    if s <= 1:
        raise ValueError("lattice sum requires s > 1")
    if R < 10:
        raise ValueError("R must be at least 10")
    x, y = tau.real, tau.imag
    m, n = np.mgrid[-R : R + 1, -R : R + 1]
    mask = (m != 0) | (n != 0)
    m, n = m[mask], n[mask]
    return float(np.sum(y**s / ((m * x + n) ** 2 + (m * y) ** 2) ** s))


def eisenstein_tail_bound(tau: complex, s: float, R: int) -> float:
    """Crude bound on the truncated tail via the lattice-count integral."""
    y = tau.imag
    lam = min(y, 1.0 / y) / 2  # lower bound for Q on the box boundary, scaled
    T = max(lam * R * R, 1.0)
    return math.pi * T ** (1 - s) / (s - 1) * 1.5


def eisenstein_continued(tau, s, dps: int = 30):
    """E(tau, s) for any s != 0, 1-neighborhood-safe, via the theta-kernel
    (incomplete gamma) decomposition of the associated Epstein zeta function;
    the underlying quadratic form |m tau + n|^2 / y has determinant 1."""
    with mp.workdps(dps):
        tau = mp.mpc(tau)
        s = mp.mpf(s)
        x, y = mp.re(tau), mp.im(tau)
        Qcut = mp.mpf(dps) * mp.log(10) / mp.pi + 8
        mmax = int(mp.sqrt(Qcut * y) / y) + 2
        tot = mp.mpf(0)
        for mi in range(-mmax, mmax + 1):
            half_w = mp.sqrt(max(Qcut * y - (mi * y) ** 2, 0))
            n_lo = int(mp.floor(-mi * x - half_w)) - 1
            n_hi = int(mp.ceil(-mi * x + half_w)) + 1
            for ni in range(n_lo, n_hi + 1):
                if mi == 0 and ni == 0:
                    continue
                Q = ((mi * x + ni) ** 2 + (mi * y) ** 2) / y
                if Q > Qcut:
                    continue
                piQ = mp.pi * Q
                tot += mp.gammainc(s, piQ) / piQ**s + mp.gammainc(1 - s, piQ) / piQ ** (1 - s)
        return mp.pi**s / mp.gamma(s) * (-1 / s + 1 / (s - 1) + tot)


def eisenstein_laurent_check(
    tau: complex, tol: float = 1e-3, dps: int = 30
) -> tuple[float, float]:
    """Extrapolate residue and constant term of E(tau, s) at s = 1 from a
    ladder h = 1/8, 1/16, 1/32 and compare with

        residue pi;  constant pi (pi/3 y - log y + U(tau)) + 2 pi (gamma - log 2).

    Returns (residue_err, const_err).  Raises ExtrapolationError if the last
    two Richardson levels disagree by more than 10x tol."""
    zz = complex(tau)
    hs = [mp.mpf(1) / 8, mp.mpf(1) / 16, mp.mpf(1) / 32]
    with mp.workdps(dps):
        Es = [eisenstein_continued(zz, 1 + h, dps=dps) for h in hs]
        A = [E - mp.pi / h for E, h in zip(Es, hs)]
        rr = [E * h for E, h in zip(Es, hs)]
        const_lin = 2 * A[2] - A[1]
        const_quad = (8 * A[2] - 6 * A[1] + A[0]) / 3
        res_lin = 2 * rr[2] - rr[1]
        res_quad = (8 * rr[2] - 6 * rr[1] + rr[0]) / 3
        if abs(const_quad - const_lin) > 10 * tol or abs(res_quad - res_lin) > 10 * tol:
            raise ExtrapolationError("Richardson levels diverge")
        y = zz.imag
        target = mp.pi * (mp.pi / 3 * y - mp.log(y) + u_function(zz)) + 2 * mp.pi * (
            mp.euler - mp.log(2)
        )
        return float(abs(res_quad - mp.pi)), float(abs(const_quad - target))


def form_value_zeta(form_abc: tuple[int, int, int], s: float, R: int = 60) -> float:
    """sum over (m,n) != 0 of Q(m,n)^{-s} for Q = (a,b,c); pairs with the
    Eisenstein sum via Q(m,n)^{-s} scaled by (sqrt(|D|)/2)^s."""
    if s <= 1:
        raise ValueError("requires s > 1")
    a, b, c = form_abc
    m, n = np.mgrid[-R : R + 1, -R : R + 1]
    mask = (m != 0) | (n != 0)
    m, n = m[mask], n[mask]
    vals = (a * m * m + b * m * n + c * n * n).astype(np.float64)
    return float(np.sum(vals**-s))
