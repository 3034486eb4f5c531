"""Working-precision settings shared by the numeric modules.

Two modes are supported: the default hardware double mode (about 15
significant digits) and an extended software mode backed by mpmath.
Operations that need the extended mode (eta cross-checks, the explicit
constants) take a context argument and switch on ``ctx.extended``.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class PrecisionContext:
    """Precision, truncation and tolerance budget for numeric operations.

    dps          -- target significant decimal digits (15 = hardware doubles)
    guard_bits   -- extra bits demanded of series truncation beyond 2^-bits
    quad_tol     -- absolute tolerance handed to adaptive quadrature
    consistency_tol -- budget for internal identity checks (class number
                    formula, route agreement) at this precision
    """

    dps: int = 15
    guard_bits: int = 10
    quad_tol: float = 1e-10
    consistency_tol: float = 1e-8

    @property
    def extended(self) -> bool:
        return self.dps > 16

    @property
    def bits(self) -> int:
        # 3.33 bits per decimal digit, rounded up
        return int(self.dps * 3.3322) + 1


DOUBLE = PrecisionContext()
EXTENDED = PrecisionContext(dps=30, quad_tol=1e-12, consistency_tol=1e-12)
