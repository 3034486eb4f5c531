"""Special functions on the upper half-plane: fundamental-domain reduction,
Dedekind eta, the j-invariant and its integer q-expansion, the lattice
cosine-sum U, and the Weber functions gamma2, gamma3.

Everything is driven by q-series with rigorously truncated tails: the n-th
coefficient of j is below e^{4 pi sqrt(n)}, so summation stops once
e^{4 pi sqrt(n)} |q|^n drops under the precision budget.  Most callers work
in hardware doubles; a PrecisionContext with dps >= 30 switches the same
formulas to mpmath arithmetic.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import mpmath as mp

from .precision import DOUBLE, PrecisionContext


class NonConvergenceError(ArithmeticError):
    """Iteration or quadrature failed to converge within its budget."""


# -- arithmetic tables -------------------------------------------------------

@lru_cache(maxsize=None)
def _sigma(n: int, k: int) -> int:
    return sum(d**k for d in range(1, n + 1) if n % d == 0)


def pentagonal_terms(max_exp: int) -> list[tuple[int, int]]:
    """(exponent, sign) pairs of Euler's expansion of prod (1 - q^n),
    exponents k(3k +- 1)/2 up to max_exp."""
    out = []
    k = 1
    while k * (3 * k - 1) // 2 <= max_exp:
        g1, g2 = k * (3 * k - 1) // 2, k * (3 * k + 1) // 2
        out.append((g1, (-1) ** k))
        if g2 <= max_exp:
            out.append((g2, (-1) ** k))
        k += 1
    return out


def series_order(abs_q: float, bits: int) -> int:
    """Smallest N with e^{4 pi sqrt(N)} |q|^N < 2^-bits; the coefficient
    growth bound makes this a safe truncation point for all series used here."""
    if abs_q <= 0.0:
        return 1
    L = -math.log(abs_q)
    if L <= 0:
        raise ValueError("|q| must be < 1")
    target = bits * math.log(2)
    n = 1
    while 4 * math.pi * math.sqrt(n) - n * L > -target:
        n += 1
        if n > 5_000_000:
            raise NonConvergenceError("q too close to the unit circle")
    return n


# -- fundamental domain ------------------------------------------------------

def in_fundamental_domain(z: complex, tol: float = 1e-12) -> bool:
    return abs(z.real) <= 0.5 + tol and abs(z) >= 1.0 - tol


def reduce_to_F(z: complex, max_iter: int = 10_000) -> tuple[complex, tuple[tuple[int, int], tuple[int, int]]]:
    """Map z to the fundamental domain |Re| <= 1/2, |z| >= 1.

    Returns (z', M) with M = ((alpha, beta), (gamma, delta)) an integer
    matrix of determinant 1 such that z' = (alpha z + beta)/(gamma z + delta).
    Boundary convention: Re(z') = -1/2 preferred over +1/2, and on |z'| = 1
    the half with Re <= 0.  Raises NonConvergenceError beyond max_iter, which
    is only reachable for inputs degenerately close to the real axis.
    """
    if not z.imag > 0:
        raise ValueError("z must have positive imaginary part")
    w = complex(z)
    al, be, ga, de = 1, 0, 0, 1
    for _ in range(max_iter):
        n = math.floor(w.real + 0.5)
        if n:
            w -= n
            al, be = al - n * ga, be - n * de
        if abs(w) < 1.0 - 1e-15:
            w = -1 / w
            al, be, ga, de = -ga, -de, al, be
        else:
            break
    else:
        raise NonConvergenceError("fundamental-domain reduction did not terminate")
    # half-open boundary: push Re = +1/2 to -1/2, and |w| = 1 with Re > 0 to Re < 0
    if w.real >= 0.5 - 1e-15:
        w -= 1
        al, be = al - ga, be - de
    if abs(abs(w) - 1.0) <= 1e-15 and w.real > 1e-15:
        w = -1 / w
        al, be, ga, de = -ga, -de, al, be
    assert al * de - be * ga == 1
    return w, ((al, be), (ga, de))


def apply_moebius(M: tuple[tuple[int, int], tuple[int, int]], z: complex) -> complex:
    (al, be), (ga, de) = M
    return (al * z + be) / (ga * z + de)


# -- q-series evaluation -----------------------------------------------------

def _qseries_fp(z: complex, bits: int):
    """(q, E4, E6, P) at z in hardware arithmetic; series truncated by the
    coefficient growth bound."""
    y = z.imag
    q = cmath.exp(2j * math.pi * z)
    aq = abs(q)
    if aq == 0.0:
        return q, 1.0 + 0j, 1.0 + 0j, 1.0 + 0j
    N = series_order(aq, bits)
    e4 = e6 = 0j
    for n in range(N, 0, -1):
        e4 = (e4 + 240 * _sigma(n, 3)) * q
        e6 = (e6 + 504 * _sigma(n, 5)) * q
    E4, E6 = 1 + e4, 1 - e6
    P = 1 + 0j
    for g, s in pentagonal_terms(N):
        P += s * q**g
    return q, E4, E6, P


def _qseries_mp(z, bits: int):
    z = mp.mpc(z)
    q = mp.e ** (2j * mp.pi * z)
    aq = abs(q)
    if aq < mp.mpf(2) ** (-bits - 64):
        one = mp.mpc(1)
        return q, one, one, one
    N = series_order(float(aq), bits)
    e4 = e6 = mp.mpc(0)
    for n in range(N, 0, -1):
        e4 = (e4 + 240 * _sigma(n, 3)) * q
        e6 = (e6 + 504 * _sigma(n, 5)) * q
    E4, E6 = 1 + e4, 1 - e6
    P = mp.mpc(1)
    for g, s in pentagonal_terms(N):
        P += s * q**g
    return q, E4, E6, P


def eta(z: complex, ctx: PrecisionContext = DOUBLE):
    """Dedekind eta: q^{1/24} prod_k (1 - q^k), truncated once |q|^k is below
    the precision budget."""
    if not complex(z).imag > 0:
        raise ValueError("z must have positive imaginary part")
    bits = ctx.bits + ctx.guard_bits
    if ctx.extended:
        with mp.workdps(ctx.dps + 5):
            zz = mp.mpc(z)
            q = mp.e ** (2j * mp.pi * zz)
            pref = mp.e ** (1j * mp.pi * zz / 12)
            K = max(1, int(bits * math.log(2) / (2 * math.pi * float(zz.imag))) + 2)
            prod = mp.mpc(1)
            qk = mp.mpc(1)
            for _ in range(K):
                qk *= q
                prod *= 1 - qk
            return pref * prod
    zz = complex(z)
    q = cmath.exp(2j * math.pi * zz)
    pref = cmath.exp(1j * math.pi * zz / 12)
    if abs(q) == 0.0:
        return pref
    K = max(1, int(bits * math.log(2) / (2 * math.pi * zz.imag)) + 2)
    prod = 1 + 0j
    qk = 1 + 0j
    for _ in range(K):
        qk *= q
        prod *= 1 - qk
    return pref * prod


def j_invariant(z: complex, ctx: PrecisionContext = DOUBLE):
    """The modular j-function, computed at the reduced point as
    E4^3 / (q prod (1-q^n)^24)."""
    _, M = reduce_to_F(complex(z))
    bits = ctx.bits + ctx.guard_bits
    if ctx.extended:
        with mp.workdps(ctx.dps + 5):
            # re-apply the integer matrix at full precision so mpc/mpf inputs
            # are not flattened to doubles by the reduction step
            (al, be), (ga, de) = M
            zm = mp.mpc(z)
            w = (al * zm + be) / (ga * zm + de)
            q, E4, _, P = _qseries_mp(w, bits)
            return E4**3 / (q * P**24)
    w, _ = reduce_to_F(complex(z))
    q, E4, _, P = _qseries_fp(w, bits)
    denom = q * P**24
    if denom == 0:
        raise OverflowError("j overflows at this height; use log_abs_j_stable")
    return E4**3 / denom


def log_abs_j_stable(z: complex, ctx: PrecisionContext = DOUBLE) -> float:
    """log|j(z)| for z already in the fundamental domain, organised as
    2 pi Im(z) + 3 log|E4| - 24 log|prod(1-q^n)| so it never overflows."""
    zz = complex(z)
    if not in_fundamental_domain(zz):
        raise ValueError("z must lie in the fundamental domain")
    bits = ctx.bits + ctx.guard_bits
    if ctx.extended:
        with mp.workdps(ctx.dps + 5):
            _, E4, _, P = _qseries_mp(mp.mpc(z), bits)
            return 2 * mp.pi * mp.im(mp.mpc(z)) + 3 * mp.log(abs(E4)) - 24 * mp.log(abs(P))
    _, E4, _, P = _qseries_fp(zz, bits)
    return 2 * math.pi * zz.imag + 3 * math.log(abs(E4)) - 24 * math.log(abs(P))


def u_function(z: complex, ctx: PrecisionContext = DOUBLE) -> float:
    """The cosine-weighted divisor sum 4 sum sigma_{-1}(n) cos(2 pi n x) e^{-2 pi n y},
    evaluated through its eta identity as -4 sum_k log|1 - q^k|."""
    zz = complex(z)
    if not zz.imag > 0:
        raise ValueError("z must have positive imaginary part")
    bits = ctx.bits + ctx.guard_bits
    if ctx.extended:
        with mp.workdps(ctx.dps + 5):
            zm = mp.mpc(z)
            q = mp.e ** (2j * mp.pi * zm)
            K = max(1, int(bits * math.log(2) / (2 * math.pi * float(zm.imag))) + 2)
            tot = mp.mpf(0)
            qk = mp.mpc(1)
            for _ in range(K):
                qk *= q
                tot += mp.log(abs(1 - qk))
            return -4 * tot
    q = cmath.exp(2j * math.pi * zz)
    if abs(q) == 0.0:
        return 0.0
    K = max(1, int(bits * math.log(2) / (2 * math.pi * zz.imag)) + 2)
    tot = 0.0
    qk = 1 + 0j
    for _ in range(K):
        qk *= q
        # log|1-q^k| via log1p to keep absolute accuracy when q^k is tiny
        tot += 0.5 * math.log1p(qk.real * (qk.real - 2) + qk.imag * qk.imag)
    return -4 * tot


def u_function_cosine_series(z: complex, terms: int = 64) -> float:
    """Direct cosine-series evaluation of the same sum; slow reference form."""
    zz = complex(z)
    x, y = zz.real, zz.imag
    tot = 0.0
    for n in range(terms, 0, -1):
        s = sum(1.0 / d for d in range(1, n + 1) if n % d == 0)
        tot += s * math.cos(2 * math.pi * n * x) * math.exp(-2 * math.pi * n * y)
    return 4 * tot


def weber_gamma2_gamma3(z: complex, ctx: PrecisionContext = DOUBLE):
    """Principal roots (j^{1/3}, sqrt(j - 1728)), with j - 1728 evaluated
    independently as E6^2 / (q prod(1-q^n)^24)."""
    w, M = reduce_to_F(complex(z))
    bits = ctx.bits + ctx.guard_bits
    if ctx.extended:
        with mp.workdps(ctx.dps + 5):
            (al, be), (ga, de) = M
            zm = mp.mpc(z)
            wm = (al * zm + be) / (ga * zm + de)
            q, E4, E6, P = _qseries_mp(wm, bits)
            delta = q * P**24
            jv = E4**3 / delta
            g2 = jv ** (mp.mpf(1) / 3)
            g3 = mp.sqrt(E6**2 / delta)
            return g2, g3
    q, E4, E6, P = _qseries_fp(w, bits)
    delta = q * P**24
    jv = E4**3 / delta
    g2 = jv ** (1.0 / 3.0)
    g3 = cmath.sqrt(E6**2 / delta)
    return g2, g3


# -- exact q-expansion of j --------------------------------------------------

@dataclass(frozen=True)
class JCoefficientTable:
    """Exact integers c(0..N) with j = 1/q + sum c(n) q^n."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        if self.coeffs and self.coeffs[0] != 744:
            raise ValueError("c(0) must be 744")
        if len(self.coeffs) > 1 and self.coeffs[1] != 196884:
            raise ValueError("c(1) must be 196884")

    def growth_bound_holds(self) -> bool:
        """0 <= c(n) < e^{4 pi sqrt(n)} for all tabulated n >= 1."""
        for n, c in enumerate(self.coeffs):
            if n == 0:
                continue
            if c < 0 or math.log(c) >= 4 * math.pi * math.sqrt(n):
                return False
        return True


def _poly_mul(A: list[int], B: list[int], n: int) -> list[int]:
    out = [0] * n
    for i, ai in enumerate(A[:n]):
        if ai == 0:
            continue
        top = min(n - i, len(B))
        for jx in range(top):
            out[i + jx] += ai * B[jx]
    return out


def j_coefficients(N: int) -> JCoefficientTable:
    """c(0..N) by exact power-series arithmetic: cube of the weight-4
    Eisenstein numerator divided by q prod(1-q^n)^24."""
    if N < 0:
        raise ValueError("N must be >= 0")
    n = N + 2
    e4 = [1] + [240 * _sigma(k, 3) for k in range(1, n)]
    A = _poly_mul(_poly_mul(e4, e4, n), e4, n)
    P = [0] * n
    P[0] = 1
    for g, s in pentagonal_terms(n - 1):
        P[g] = s
    B = [1] + [0] * (n - 1)
    base, e = P, 24
    while e:
        if e & 1:
            B = _poly_mul(B, base, n)
        e >>= 1
        if e:
            base = _poly_mul(base, base, n)
    # j*q = A/B; long division with B[0] = 1
    s = [0] * n
    for k in range(n):
        acc = A[k]
        for i in range(1, k + 1):
            if B[i]:
                acc -= B[i] * s[k - i]
        s[k] = acc
    if s[0] != 1:
        raise ArithmeticError("leading coefficient of j*q must be 1")
    return JCoefficientTable(coeffs=tuple(s[1 : N + 2]))
