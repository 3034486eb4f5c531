"""Fundamental discriminants, Kronecker characters, reduced binary quadratic
forms and their CM points.

Conventions: a form (a, b, c) has discriminant b^2 - 4ac < 0 and a > 0.  It is
reduced when -a < b <= a < c, or 0 <= b <= a = c, in which case
a <= sqrt(|disc|/3).  The CM point of a form is tau = (-b + i sqrt(|disc|))/(2a);
for reduced forms it lies in the standard fundamental domain of SL(2,Z).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


class InconsistencyError(ArithmeticError):
    """A cross-check between two independently computed quantities failed."""


def kronecker_symbol(a: int, n: int) -> int:
    """Kronecker symbol (a|n) for n >= 0."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        return 1 if a in (1, -1) else 0
    s = 1
    if n % 2 == 0:
        if a % 2 == 0:
            return 0
        e = 0
        while n % 2 == 0:
            n //= 2
            e += 1
        if e % 2 == 1 and a % 8 in (3, 5):
            s = -1
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                s = -s
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            s = -s
        a %= n
    return s if n == 1 else 0


def _squarefree(n: int) -> bool:
    if n % 4 == 0:
        return False
    p = 3
    while p * p <= n:
        if n % (p * p) == 0:
            return False
        p += 2
    return True


def is_fundamental(d: int) -> bool:
    """True iff d < 0 is the discriminant of an imaginary quadratic field."""
    if d >= 0:
        return False
    if d % 4 == 1:
        return _squarefree(-d)
    if d % 4 == 0:
        m = d // 4
        return m % 4 in (2, 3) and _squarefree(-m)
    return False


@dataclass(frozen=True)
class Discriminant:
    """A validated negative fundamental discriminant."""

    value: int
    abs_log: float = field(init=False)

    def __post_init__(self):
        if not is_fundamental(self.value):
            raise ValueError(f"{self.value} is not a negative fundamental discriminant")
        object.__setattr__(self, "abs_log", math.log(-self.value))

    @property
    def roots_of_unity(self) -> int:
        """Number of units in the ring of integers: 6, 4, or 2."""
        return {-3: 6, -4: 4}.get(self.value, 2)


def kronecker_chi(D: Discriminant, n: int) -> int:
    """The quadratic character attached to D, evaluated at n >= 0."""
    return kronecker_symbol(D.value, n)


def chi_table(D: Discriminant) -> np.ndarray:
    """Values chi_D(0), ..., chi_D(|D|-1) as an int8 array.

    Built by sieving prime powers: chi is completely multiplicative, so one
    pass per prime power suffices.
    """
    q = -D.value
    chi = np.ones(q, dtype=np.int8)
    chi[0] = 0
    limit = q - 1
    sieve = np.ones(limit + 1, dtype=bool)
    sieve[:2] = False
    for i in range(2, int(limit**0.5) + 1):
        if sieve[i]:
            sieve[i * i :: i] = False
    for p in np.nonzero(sieve)[0]:
        cp = kronecker_symbol(D.value, int(p))
        if cp == 1:
            continue
        if cp == 0:
            chi[p::p] = 0
        else:
            pe = int(p)
            while pe < q:
                chi[pe::pe] *= -1
                pe *= int(p)
    return chi


@dataclass(frozen=True)
class QuadForm:
    a: int
    b: int
    c: int
    disc: int = field(init=False)

    def __post_init__(self):
        d = self.b * self.b - 4 * self.a * self.c
        if d >= 0 or self.a <= 0:
            raise ValueError(f"({self.a},{self.b},{self.c}) is not positive definite")
        object.__setattr__(self, "disc", d)

    @property
    def is_reduced(self) -> bool:
        a, b, c = self.a, self.b, self.c
        return (-a < b <= a < c) or (0 <= b <= a == c)

    @property
    def is_principal(self) -> bool:
        return self.a == 1 and self.b in (0, 1)

    def cm_point(self) -> complex:
        return complex(-self.b, math.sqrt(-self.disc)) / (2 * self.a)

    def cm_point_mp(self, dps: int = 30):
        """The CM point as an mpmath complex at full working precision."""
        import mpmath as mp

        with mp.workdps(dps + 5):
            return mp.mpc(-self.b, mp.sqrt(-self.disc)) / (2 * self.a)


@dataclass(frozen=True)
class HeegnerPoint:
    tau: complex
    source_form: QuadForm

    def __post_init__(self):
        if self.tau.imag <= 0:
            raise ValueError("CM point must lie in the upper half-plane")


@dataclass(frozen=True)
class ClassData:
    """The full set of reduced forms of one fundamental discriminant."""

    disc: Discriminant
    forms: tuple[QuadForm, ...]
    h: int
    w: int

    def __post_init__(self):
        if self.h != len(self.forms) or self.h < 1:
            raise ValueError("h must equal the number of forms")
        if sum(f.is_principal for f in self.forms) != 1:
            raise ValueError("exactly one form must be principal")
        if len(set(self.forms)) != self.h or not all(f.is_reduced for f in self.forms):
            raise ValueError("forms must be distinct and reduced")


def principal_form(D: Discriminant) -> QuadForm:
    """The identity form: (1, 0, |D|/4) for D = 0 mod 4, else (1, 1, (1-D)/4)."""
    d = D.value
    if d % 4 == 0:
        return QuadForm(1, 0, -d // 4)
    return QuadForm(1, 1, (1 - d) // 4)


def reduced_forms(D: Discriminant) -> ClassData:
    """Enumerate all reduced forms of discriminant D, sorted by (a, b).

    Sweeps a = 1..floor(sqrt(|D|/3)), b in (-a, a] with b = D mod 2, keeping
    the (a, b) for which c = (b^2 - D)/(4a) is integral and satisfies the
    reduction inequalities.  For fundamental D every form is primitive, so no
    gcd filter is applied.
    """
    d = D.value
    forms = []
    amax = math.isqrt(-d // 3)
    for a in range(1, amax + 1):
        for b in range(-a + 1, a + 1):
            num = b * b - d
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c > a or (c == a and b >= 0):
                forms.append(QuadForm(a, b, c))
    forms.sort(key=lambda f: (f.a, f.b))
    return ClassData(disc=D, forms=tuple(forms), h=len(forms), w=D.roots_of_unity)


def heegner_points(cd: ClassData) -> list[HeegnerPoint]:
    """One CM point per reduced form, in the same order as cd.forms."""
    return [HeegnerPoint(tau=f.cm_point(), source_form=f) for f in cd.forms]


def class_number_analytic_check(cd: ClassData, L1: float, tol: float | None = None) -> float:
    """|h - w sqrt(|D|) L(1,chi)/(2 pi)|, which must vanish up to tol.

    Raises InconsistencyError when the residual is at least tol (default:
    1e-8 relative to h).
    """
    d = cd.disc.value
    residual = abs(cd.h - cd.w * math.sqrt(-d) * L1 / (2 * math.pi))
    budget = tol if tol is not None else 1e-8 * cd.h
    if residual >= budget:
        raise InconsistencyError(
            f"class number formula off by {residual:.3e} for D={d} (h={cd.h})"
        )
    return residual


# -- bulk helpers -----------------------------------------------------------

def squarefree_mask(N: int) -> np.ndarray:
    """Boolean mask over 0..N, True where the index is squarefree."""
    sf = np.ones(N + 1, dtype=bool)
    sf[0] = False
    for i in range(2, math.isqrt(N) + 1):
        sf[i * i :: i * i] = False
    return sf


def fundamental_mask(N: int) -> np.ndarray:
    """Mask over 0..N with mask[k] true iff D = -k is fundamental."""
    sf = squarefree_mask(N)
    k = np.arange(N + 1)
    # D = -k = 1 mod 4  <=>  k = 3 mod 4
    odd = (k % 4 == 3) & sf
    # D = 4m with m = D/4 = -k/4; need m = 2,3 mod 4 <=> k/4 = 1,2 mod 4
    even = np.zeros(N + 1, dtype=bool)
    div4 = k % 4 == 0
    m = k[div4] // 4
    even[div4] = np.isin(m % 4, (1, 2)) & sf[m]
    return odd | even


def fundamental_range(d_min: int, d_max: int) -> list[int]:
    """All fundamental discriminants D with d_min <= D <= d_max < 0,
    ordered by descending magnitude."""
    if d_max >= 0 or d_min > d_max:
        raise ValueError("need d_min <= d_max < 0")
    mask = fundamental_mask(-d_min)
    ks = np.nonzero(mask)[0]
    ks = ks[(ks >= -d_max) & (ks <= -d_min)]
    return [-int(k) for k in ks[::-1]]
