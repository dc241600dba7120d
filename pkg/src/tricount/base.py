"""The base |F(S)|^(1/n) of a triangulation count, with its error bracket."""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal, localcontext

from .errors import InvalidInput, InvariantViolation, UndefinedBase

PRECISION = 50  # decimal digits used for ln/exp
KNOWN_LOWER = 1.0
KNOWN_UPPER = 30.0
NOTE = "for epsilon < 1/2, 2^epsilon < 1 + epsilon, so the bracket is within a factor 1 + epsilon"


@dataclass(frozen=True)
class BaseEstimate:
    base: float
    lower: float
    upper: float
    epsilon_used: float
    n: int
    lam: int = 1
    note: str = NOTE

    def to_json(self) -> dict:
        return {"n": self.n, "lambda": str(self.lam), "base": self.base,
                "lower": self.lower, "upper": self.upper, "epsilon": self.epsilon_used,
                "note": self.note}


def integer_root(value: int, n: int) -> int:
    """Largest r with r**n <= value."""
    if value < 0 or n < 1:
        raise InvalidInput("integer_root needs value >= 0 and n >= 1")
    if value < 2:
        return value
    # start above the root and walk down with Newton steps
    r = 1 << -(-value.bit_length() // n)
    while True:
        nxt = ((n - 1) * r + value // r ** (n - 1)) // n
        if nxt >= r:
            break
        r = nxt
    while r ** n > value:
        r -= 1
    while (r + 1) ** n <= value:
        r += 1
    return r


def nth_root(value: int, n: int) -> Decimal:
    r = integer_root(value, n)
    if r ** n == value:
        return Decimal(r)
    with localcontext() as ctx:
        # enough digits for the integer part plus PRECISION fractional ones
        ctx.prec = PRECISION + len(str(r))
        root = (Decimal(value).ln() / n).exp()
        # the log route must land in the bracket given by the exact integer root
        tol = Decimal(10) ** -(PRECISION - 10) * max(root, 1)
        if not (r - tol <= root < r + 1 + tol):
            raise InvariantViolation(f"root cross-check failed: {root} vs integer root {r}")
    return root


def estimate_base(lam: int, n: int, epsilon: float) -> BaseEstimate:
    if isinstance(lam, bool) or not isinstance(lam, int):
        raise InvalidInput("the count must be an integer")
    if n < 3:
        raise InvalidInput("n must be at least 3")
    if not 0 < epsilon < 0.5:
        raise InvalidInput("epsilon must lie in (0, 1/2)")
    if lam == 0:
        raise UndefinedBase("the count is 0, so the base is undefined")
    if lam < 0:
        raise InvalidInput("the count must be positive")
    base = float(nth_root(lam, n))
    f = 2.0 ** epsilon
    return BaseEstimate(base, base / f, base * f, epsilon, n, lam)


def sanity_bounds(base: float) -> str:
    if base < KNOWN_LOWER:
        return "below_known_lower"
    if base > KNOWN_UPPER:
        return "above_known_upper"
    return "ok"


def relative_error(estimate: BaseEstimate) -> float:
    """|base^n / lambda - 1|, computed in logs so huge counts do not overflow."""
    return abs(math.expm1(estimate.n * math.log(estimate.base) - _log(estimate.lam)))


def _log(v: int) -> float:
    with localcontext() as ctx:
        ctx.prec = PRECISION
        return float(Decimal(v).ln())
