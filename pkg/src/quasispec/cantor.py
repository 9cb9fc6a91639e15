"""Cantor-set and Cantor-function reference objects, plus gap-label sets.

The middle-thirds Cantor function is evaluated by its triadic digit
algorithm; floats are dyadic rationals, so the digits are produced by exact
Fraction arithmetic. Triadic rationals take their infinite representation,
which the stop-at-digit-1 algorithm reproduces automatically
(0.1(000...) and 0.0(222...) in base 3 map to the same binary value).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError

_DIGIT_CAP = 52  # 2^-53 < 1e-15, enough for full float accuracy


@dataclass(frozen=True)
class LabelSet:
    """Sorted, deduplicated admissible gap-label values in [0, 1)."""

    values: tuple[float, ...]

    def __post_init__(self):
        v = sorted(self.values)
        dedup: list[float] = []
        for x in v:
            if not 0.0 <= x < 1.0 + 1e-12:
                raise DomainError("labels must lie in [0, 1)")
            if not dedup or x - dedup[-1] > 1e-12:
                dedup.append(float(x))
        object.__setattr__(self, "values", tuple(dedup))

    def nearest(self, x: float) -> float:
        return min(self.values, key=lambda v: abs(v - x))

    def __len__(self) -> int:
        return len(self.values)


def cantor_alpha(x: float | Fraction) -> float:
    """The Cantor function on [0, 1], 0 below and 1 above.

    Accepts floats (dyadic rationals, expanded exactly) or Fractions for
    inputs like 1/3 that floats cannot represent. Triadic digits are produced
    by exact integer arithmetic; a digit 1 ends the expansion (the function is
    flat across the corresponding gap, and triadic rationals taken with their
    infinite representation give the same value).
    """
    if x < 0:
        return 0.0
    if x >= 1:
        return 1.0
    fr = Fraction(x)
    num, den = fr.numerator, fr.denominator
    acc = 0
    n = 0
    for n in range(1, _DIGIT_CAP + 1):
        num *= 3
        digit, num = divmod(num, den)
        if digit == 1:
            acc = 2 * acc + 1
            break
        acc = 2 * acc + (digit >> 1)
        if num == 0:
            break
    return acc / 2.0 ** n


def cantor_fourier(t: float, N: int) -> complex:
    """Truncated Fourier transform of the Cantor measure:
    e^{it/2} prod_{n=1..N} cos(t / 3^n)."""
    if N < 1:
        raise DomainError("need at least one product factor")
    prod = 1.0
    scale = 1.0
    for _ in range(N):
        scale /= 3.0
        prod *= math.cos(t * scale)
    return cmath.exp(0.5j * t) * prod


def sturmian_label_set(alpha: float, k_max: int) -> LabelSet:
    """Admissible gap labels {k alpha mod 1 : |k| <= k_max} of the Sturmian chain."""
    if not 0.0 < alpha < 1.0:
        raise DomainError("alpha must lie strictly between 0 and 1")
    if k_max < 0:
        raise DomainError("k_max must be nonnegative")
    vals = [(k * alpha) % 1.0 for k in range(-k_max, k_max + 1)]
    return LabelSet(tuple(vals))


def hierarchical_labels(n_max: int) -> LabelSet:
    """Dyadic gap labels (2k-1)/2^{n+1} for 0 <= n <= n_max, 1 <= k <= 2^n."""
    if n_max < 0:
        raise DomainError("n_max must be nonnegative")
    vals = [(2 * k - 1) / 2.0 ** (n + 1)
            for n in range(n_max + 1) for k in range(1, 2 ** n + 1)]
    return LabelSet(tuple(vals))
