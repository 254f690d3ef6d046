"""Ball-arithmetic helpers (python-flint / Arb) for the certified series."""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
from flint import arb, ctx
from scipy.special import gammaln

LOG2 = math.log(2.0)


def rational_order(beta: float) -> Fraction | None:
    """Shortest decimal reading of ``beta`` when it has a small denominator."""
    frac = Fraction(repr(float(beta)))
    if frac.denominator <= 10_000:
        return frac
    return None


def arb_order(beta: float) -> arb:
    frac = rational_order(beta)
    if frac is None:
        return arb(float(beta))
    return arb(frac.numerator) / frac.denominator


class working_precision:
    """Context manager setting the Arb working precision in bits."""

    def __init__(self, bits: int):
        self.bits = int(bits)

    def __enter__(self):
        self._old = ctx.prec
        ctx.prec = self.bits
        return self

    def __exit__(self, *exc):
        ctx.prec = self._old
        return False


def ml_coefficients(beta: float, x: arb, count: int) -> list[arb]:
    """``x**k / Gamma(1 + beta*k)`` for ``k = 0..count-1`` at the current precision.

    With a rational order p/q the gamma values follow from
    Gamma(1 + b(k+q)) = Gamma(1 + bk) * prod_{j=1..p} (bk + j), which avoids
    one high-precision lgamma per term.
    """
    frac = rational_order(beta)
    b = arb_order(beta)
    out: list[arb] = []
    if frac is None or frac.numerator > 64:
        logx = x.log()
        for k in range(count):
            out.append((k * logx - (1 + b * k).lgamma()).exp())
        return out
    p, q = frac.numerator, frac.denominator
    xq = x**q
    for k in range(min(q, count)):
        out.append(x**k / (1 + b * k).gamma())
    for k in range(q, count):
        base = b * (k - q)
        denom = base + 1
        for j in range(2, p + 1):
            denom = denom * (base + j)
        out.append(out[k - q] * xq / denom)
    return out


def log_ml_terms(beta: float, logx: float, k: np.ndarray) -> np.ndarray:
    """Double-precision ``log(x**k / Gamma(1 + beta*k))``."""
    return k * logx - gammaln(1.0 + beta * k)


def bits_for(log_magnitude: float, digits: float) -> int:
    """Working precision covering cancellation from terms of size e**log_magnitude."""
    return int(max(log_magnitude, 0.0) / LOG2 + digits * 3.33) + 64


def to_float(x: arb) -> float:
    return float(x.mid())


def radius(x: arb) -> float:
    return float(x.rad())
