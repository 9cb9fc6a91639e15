"""Potential sequences for the 1D tight-binding chain.

Families covered: almost-Mathieu cosine potentials, Sturmian and circle-map
two-valued sequences, primitive-substitution sequences, explicit periodic
lists, and constants. Samplers use the convention that a finite sample
occupies sites n = 1..L, so transfer products read values left to right.

Phase convention for the Sturmian kind: the circle map is evaluated at
(n+1)*alpha + omega, so that omega = 0 with the golden mean reproduces the
sequence 1,0,1,1,0,... (the image of the fixed point of a->ab, b->a under
f(a)=1, f(b)=0). The circle kind evaluates at n*alpha + omega.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction

import numpy as np

from .errors import DomainError

GOLDEN_MEAN = (math.sqrt(5.0) - 1.0) / 2.0

# Continued-fraction expansion stops once the residual drops below this;
# smaller residuals are float noise and would produce garbage convergents.
_CF_RESIDUAL = 1e-12
_CF_MAX_TERMS = 64

# Largest substitution power tried when searching for a two-sided fixed point.
TWO_SIDED_POWER_CAP = 6


@dataclass(frozen=True)
class SubstitutionRule:
    """A substitution on a finite alphabet, letter_i -> word over the alphabet."""

    alphabet: tuple[str, ...]
    images: dict[str, str]

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        object.__setattr__(self, "images", dict(self.images))
        letters = set(self.alphabet)
        if len(letters) != len(self.alphabet):
            raise DomainError("alphabet letters must be distinct")
        if set(self.images) != letters:
            raise DomainError("images must be given for exactly the alphabet")
        for a, w in self.images.items():
            if not w:
                raise DomainError(f"image of {a!r} is empty")
            if not set(w) <= letters:
                raise DomainError(f"image of {a!r} uses letters outside the alphabet")

    def apply(self, word: str) -> str:
        return "".join(self.images[ch] for ch in word)

    def iterate(self, seed: str, n: int) -> str:
        w = seed
        for _ in range(n):
            w = self.apply(w)
        return w

    def power(self, n: int) -> "SubstitutionRule":
        """The rule whose images are the n-fold iterates of this rule."""
        return SubstitutionRule(
            self.alphabet, {a: self.iterate(a, n) for a in self.alphabet}
        )

    def matrix(self) -> np.ndarray:
        """Occurrence matrix M[i, j] = count of letter i in the image of letter j."""
        r = len(self.alphabet)
        m = np.zeros((r, r), dtype=np.int64)
        for j, a in enumerate(self.alphabet):
            for ch in self.images[a]:
                m[self.alphabet.index(ch), j] += 1
        return m

    def is_primitive(self) -> bool:
        """True if some power of the occurrence matrix is entrywise positive."""
        r = len(self.alphabet)
        b = self.matrix() > 0
        # Wielandt bound: a primitive r x r matrix has a positive power
        # no later than (r-1)^2 + 1.
        p = np.eye(r, dtype=bool)
        for _ in range((r - 1) ** 2 + 1):
            p = (p.astype(np.int64) @ b.astype(np.int64)) > 0
            if p.all():
                return True
        return False


FIBONACCI_RULE = SubstitutionRule(("a", "b"), {"a": "ab", "b": "a"})
THUE_MORSE_RULE = SubstitutionRule(("a", "b"), {"a": "ab", "b": "ba"})
PERIOD_DOUBLING_RULE = SubstitutionRule(("a", "b"), {"a": "ab", "b": "aa"})

NAMED_RULES = {
    "fibonacci": FIBONACCI_RULE,
    "thue-morse": THUE_MORSE_RULE,
    "period-doubling": PERIOD_DOUBLING_RULE,
}

_ALPHA_KINDS = ("almost-mathieu", "sturmian", "circle")
KINDS = _ALPHA_KINDS + ("substitution", "explicit-periodic", "constant")


@dataclass(frozen=True)
class PeriodicPotential:
    """Values of one period, V_1..V_L."""

    values: tuple[float, ...]

    def __post_init__(self):
        if len(self.values) < 1:
            raise DomainError("period must be at least 1")

    @property
    def period(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class PotentialSpec:
    """Declarative description of a potential family.

    Only the fields relevant to ``kind`` are used; constructors below fill in
    the rest. ``rounding`` selects between the floor and ceiling variants of
    the Sturmian formula. For the circle kind, ``intervals`` is a tuple of
    half-open subintervals of [0, 1) (default: the single interval [0, alpha)).
    """

    kind: str
    alpha: float | None = None
    omega: float = 0.0
    lam: float = 1.0
    rule: SubstitutionRule | None = None
    letter_values: dict[str, float] | None = None
    values: tuple[float, ...] | None = None
    rounding: str = "floor"
    intervals: tuple[tuple[float, float], ...] | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"unknown potential kind {self.kind!r}")
        if self.kind in _ALPHA_KINDS:
            if self.alpha is None or not 0.0 < self.alpha < 1.0:
                raise DomainError("alpha must lie strictly between 0 and 1")
            if self.lam == 0.0:
                raise DomainError("coupling lambda must be nonzero")
        if self.kind == "sturmian" and self.rounding not in ("floor", "ceil"):
            raise DomainError("rounding must be 'floor' or 'ceil'")
        if self.kind == "circle":
            ivals = self.intervals or ((0.0, self.alpha),)
            for lo, hi in ivals:
                if not (0.0 <= lo < hi <= 1.0):
                    raise DomainError("circle intervals must satisfy 0 <= lo < hi <= 1")
            object.__setattr__(self, "intervals", tuple(ivals))
        if self.kind == "substitution":
            if self.rule is None or self.letter_values is None:
                raise DomainError("substitution kind needs a rule and letter values")
            if set(self.letter_values) != set(self.rule.alphabet):
                raise DomainError("letter values must cover the alphabet")
            object.__setattr__(self, "letter_values", dict(self.letter_values))
        if self.kind == "explicit-periodic":
            if not self.values:
                raise DomainError("explicit periodic potential needs a nonempty value list")
        if self.kind == "constant" and self.values is None:
            object.__setattr__(self, "values", (0.0,))

    # -- constructors ------------------------------------------------------

    @classmethod
    def almost_mathieu(cls, alpha, lam, omega=0.0):
        return cls(kind="almost-mathieu", alpha=alpha, lam=lam, omega=omega)

    @classmethod
    def sturmian(cls, alpha, lam, omega=0.0, rounding="floor"):
        return cls(kind="sturmian", alpha=alpha, lam=lam, omega=omega, rounding=rounding)

    @classmethod
    def circle(cls, alpha, lam, omega=0.0, intervals=None):
        return cls(kind="circle", alpha=alpha, lam=lam, omega=omega, intervals=intervals)

    @classmethod
    def substitution(cls, rule, letter_values):
        return cls(kind="substitution", rule=rule, letter_values=dict(letter_values))

    @classmethod
    def explicit(cls, values):
        return cls(kind="explicit-periodic", values=tuple(float(v) for v in values))

    @classmethod
    def constant(cls, value=0.0):
        return cls(kind="constant", values=(float(value),))

    def with_omega(self, omega: float) -> "PotentialSpec":
        return replace(self, omega=float(omega))


# -- substitution words ------------------------------------------------------


def generate_substitution_word(rule: SubstitutionRule, seed: str, min_length: int) -> str:
    """Prefix of the one-sided fixed point of ``rule`` starting from ``seed``.

    The image of ``seed`` must begin with ``seed`` (right prolongability), so
    the iterates converge to a fixed point; the first iterate of length at
    least ``min_length`` is returned.
    """
    if seed not in rule.alphabet:
        raise DomainError(f"seed {seed!r} not in alphabet")
    if not rule.images[seed].startswith(seed):
        raise DomainError(f"image of {seed!r} does not start with it; no fixed point")
    if not rule.is_primitive():
        raise DomainError("substitution rule is not primitive")
    w = seed
    while len(w) < min_length:
        nxt = rule.apply(w)
        if len(nxt) <= len(w):
            raise DomainError("substitution does not grow from this seed")
        w = nxt
    return w


def _two_sided_letters(rule: SubstitutionRule, power_cap: int) -> tuple[str, str, int]:
    """Smallest power n <= cap and lexicographically first (left, right) letters
    with rule^n(left) ending in left and rule^n(right) starting with right."""
    for n in range(1, power_cap + 1):
        left = [x for x in sorted(rule.alphabet) if rule.iterate(x, n).endswith(x)]
        right = [y for y in sorted(rule.alphabet) if rule.iterate(y, n).startswith(y)]
        if left and right:
            return left[0], right[0], n
    raise DomainError(f"no two-sided fixed point found for powers up to {power_cap}")


def generate_two_sided(rule: SubstitutionRule, lo: int, hi: int,
                       power_cap: int = TWO_SIDED_POWER_CAP) -> str:
    """Letters of a two-sided fixed-point sequence on the window lo..hi.

    Built as uv where u is a left fixed point occupying n <= 0 (ending at
    index 0) and v a right fixed point occupying n >= 1, both of the same
    power of the rule. The (left letter, right letter, power) choice is the
    lexicographically first valid one at the smallest power.
    """
    if hi < lo:
        return ""
    if not rule.is_primitive():
        raise DomainError("substitution rule is not primitive")
    la, lb, n = _two_sided_letters(rule, power_cap)
    out = []
    if lo <= 0:
        u = la
        while len(u) < 1 - lo:
            u = rule.iterate(u, n)  # suffix-stable: each iterate ends with the previous
    if hi >= 1:
        v = lb
        while len(v) < hi:
            v = rule.iterate(v, n)  # prefix-stable
    for i in range(lo, hi + 1):
        out.append(u[len(u) - 1 + i] if i <= 0 else v[i - 1])
    return "".join(out)


# -- sampling ----------------------------------------------------------------


def _circle_indicator(x: np.ndarray, intervals) -> np.ndarray:
    frac = np.mod(x, 1.0)
    hit = np.zeros_like(frac, dtype=bool)
    for lo, hi in intervals:
        hit |= (frac >= lo) & (frac < hi)
    return hit.astype(float)


def sample_potential(spec: PotentialSpec, first: int, last: int) -> np.ndarray:
    """Values V_n for n = first..last inclusive."""
    if first > last:
        raise DomainError("empty sampling range: first > last")
    n = np.arange(first, last + 1, dtype=float)
    if spec.kind == "almost-mathieu":
        return spec.lam * np.cos(2.0 * math.pi * (n * spec.alpha + spec.omega))
    if spec.kind == "sturmian":
        rnd = np.floor if spec.rounding == "floor" else np.ceil
        hi = rnd((n + 1.0) * spec.alpha + spec.omega)
        lo = rnd(n * spec.alpha + spec.omega)
        return spec.lam * (hi - lo)
    if spec.kind == "circle":
        return spec.lam * _circle_indicator(n * spec.alpha + spec.omega, spec.intervals)
    if spec.kind == "substitution":
        word = generate_two_sided(spec.rule, first, last)
        return np.array([spec.letter_values[ch] for ch in word], dtype=float)
    if spec.kind == "explicit-periodic":
        vals = np.asarray(spec.values, dtype=float)
        idx = np.mod(np.arange(first, last + 1) - 1, len(vals))
        return vals[idx]
    # constant
    return np.full(last - first + 1, float(spec.values[0]))


# -- rational approximation --------------------------------------------------


def _cf_convergents(alpha: float) -> list[tuple[int, int]]:
    """All continued-fraction convergents of alpha in (0,1) resolvable in floats."""
    out = [(0, 1)]
    p_prev, q_prev = 1, 0
    p_cur, q_cur = 0, 1
    frac = alpha
    for _ in range(_CF_MAX_TERMS):
        if frac < _CF_RESIDUAL:
            break
        y = 1.0 / frac
        a = int(math.floor(y))
        frac = y - a
        p_cur, p_prev = a * p_cur + p_prev, p_cur
        q_cur, q_prev = a * q_cur + q_prev, q_cur
        out.append((p_cur, q_cur))
    return out


def convergents(alpha: float, q_max: int) -> list[tuple[int, int]]:
    """Continued-fraction convergents p/q of alpha with q <= q_max, increasing q."""
    if not 0.0 < alpha < 1.0:
        raise DomainError("alpha must lie strictly between 0 and 1")
    if q_max < 1:
        raise DomainError("q_max must be at least 1")
    return [(p, q) for p, q in _cf_convergents(alpha) if q <= q_max]


def _rational_values(spec: PotentialSpec, p: int, q: int) -> tuple[float, ...]:
    """One period of the potential re-evaluated at alpha = p/q (exact
    arithmetic for the floor and ceiling formulas)."""
    omega = Fraction(spec.omega)  # floats convert exactly
    if spec.kind == "almost-mathieu":
        return tuple(
            spec.lam * math.cos(2.0 * math.pi * (n * p / q + spec.omega))
            for n in range(1, q + 1)
        )
    if spec.kind == "sturmian":
        def rnd(x: Fraction) -> int:
            return math.floor(x) if spec.rounding == "floor" else math.ceil(x)

        return tuple(
            float(spec.lam * (rnd(Fraction((n + 1) * p, q) + omega) - rnd(Fraction(n * p, q) + omega)))
            for n in range(1, q + 1)
        )
    # circle
    vals = []
    for n in range(1, q + 1):
        x = Fraction(n * p, q) + omega
        frac = x - math.floor(x)
        hit = any(lo <= frac < hi for lo, hi in spec.intervals)
        vals.append(spec.lam if hit else 0.0)
    return tuple(vals)


def periodic_approximant(spec: PotentialSpec, order: int) -> PeriodicPotential:
    """Periodic approximant of the potential.

    For the alpha-based kinds, order k selects the k-th continued-fraction
    convergent of alpha (counting from 1 and skipping the trivial 0/1) and
    re-evaluates the formula over one period q. For the substitution kind the
    rule is applied ``order`` times to its right-prolongable seed letter.
    """
    if order < 1:
        raise DomainError("order must be at least 1")
    if spec.kind == "constant":
        return PeriodicPotential((float(spec.values[0]),))
    if spec.kind == "explicit-periodic":
        return PeriodicPotential(tuple(float(v) for v in spec.values))
    if spec.kind == "substitution":
        seeds = [x for x in sorted(spec.rule.alphabet)
                 if spec.rule.images[x].startswith(x)]
        if not seeds:
            raise DomainError("rule has no right-prolongable letter")
        word = spec.rule.iterate(seeds[0], order)
        return PeriodicPotential(tuple(float(spec.letter_values[ch]) for ch in word))
    convs = _cf_convergents(spec.alpha)[1:]  # skip 0/1
    if order > len(convs):
        raise DomainError(
            f"order {order} exceeds the {len(convs)} available convergents")
    p, q = convs[order - 1]
    return PeriodicPotential(_rational_values(spec, p, q))


def approximant_by_denominator(spec: PotentialSpec, q_max: int) -> PeriodicPotential:
    """Approximant at the convergent with the largest denominator <= q_max."""
    convs = [c for c in _cf_convergents(spec.alpha)[1:] if c[1] <= q_max]
    if not convs:
        raise DomainError(f"no convergent with denominator <= {q_max}")
    p, q = convs[-1]
    return PeriodicPotential(_rational_values(spec, p, q))


# -- letter statistics ---------------------------------------------------------


def letter_frequencies(rule: SubstitutionRule) -> dict[str, float]:
    """Asymptotic letter frequencies of the fixed point: the normalized
    Perron-Frobenius eigenvector of the occurrence matrix."""
    if not rule.is_primitive():
        raise DomainError("substitution rule is not primitive")
    m = rule.matrix().astype(float)
    eigvals, eigvecs = np.linalg.eig(m)
    k = int(np.argmax(np.abs(eigvals)))
    v = np.abs(np.real(eigvecs[:, k]))
    v = v / v.sum()
    return {a: float(v[i]) for i, a in enumerate(rule.alphabet)}
