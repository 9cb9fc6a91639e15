"""Floquet band spectra of periodic chains, gap labels and butterfly sweeps.

The spectrum of an L-periodic chain is {E : |tr T_{1..L}(E)| <= 2}. Its 2L
band edges are the roots of tr = +-2, i.e. the eigenvalues of the L-site
restriction with wrap-around boundary phase 0 and pi. Both restrictions are
real symmetric, and their eigenvalues are extracted by bisection with the
bordered pivot counter, which stays robust for periods in the thousands
where root-finding on the trace polynomial would not.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import gcd

import numpy as np

from .errors import DomainError
from .ids import IdsCurve, bisect_eigenvalues, count_below_periodic
from .potentials import PeriodicPotential
from .transfer import propagate

# Gaps narrower than this are reported as closed and merged.
CLOSED_GAP_TOL = 1e-9


@dataclass(frozen=True)
class BandSet:
    """Sorted disjoint closed energy intervals, with optional gap labels
    (one IDS value per gap, in gap order)."""

    bands: tuple[tuple[float, float], ...]
    gap_labels: tuple[float, ...] | None = None

    def __post_init__(self):
        prev_hi = -math.inf
        for lo, hi in self.bands:
            if lo > hi:
                raise DomainError("band with lo > hi")
            if lo < prev_hi:
                raise DomainError("bands must be sorted and disjoint")
            prev_hi = hi
        if self.gap_labels is not None and len(self.gap_labels) != max(0, len(self.bands) - 1):
            raise DomainError("need one label per gap")

    def gaps(self) -> list[tuple[float, float]]:
        return [(self.bands[i][1], self.bands[i + 1][0])
                for i in range(len(self.bands) - 1)]

    def __len__(self) -> int:
        return len(self.bands)


def band_spectrum(p: PeriodicPotential, tol: float = CLOSED_GAP_TOL) -> BandSet:
    """Band set of the L-periodic potential.

    Edges come from the phase-0 and phase-pi eigenproblems; consecutive edge
    pairs bound the bands. A gap is treated as closed, and its neighbours
    merged, when it is narrower than CLOSED_GAP_TOL or when the trace at its
    midpoint exceeds 2 in absolute value by less than ``tol``.
    """
    vals = np.asarray(p.values, dtype=float)
    L = len(vals)
    lo0 = float(vals.min()) - 4.0
    hi0 = float(vals.max()) + 4.0
    e_per = bisect_eigenvalues(lambda E: count_below_periodic(vals, E, +1.0), L, lo0, hi0)
    e_anti = bisect_eigenvalues(lambda E: count_below_periodic(vals, E, -1.0), L, lo0, hi0)
    edges = np.sort(np.concatenate([e_per, e_anti]))
    raw = [(float(edges[2 * i]), float(edges[2 * i + 1])) for i in range(L)]

    merged: list[list[float]] = [list(raw[0])]
    for lo, hi in raw[1:]:
        gap = lo - merged[-1][1]
        if gap <= CLOSED_GAP_TOL:
            merged[-1][1] = hi
            continue
        mid = 0.5 * (lo + merged[-1][1])
        if abs(propagate(mid, vals).trace) <= 2.0 + tol:
            merged[-1][1] = hi
        else:
            merged.append([lo, hi])
    return BandSet(tuple((lo, hi) for lo, hi in merged))


def gap_labels(bands: BandSet, L: int) -> BandSet:
    """Label the gap after band k with k/L (periodic gap labeling)."""
    labels = tuple(k / L for k in range(1, len(bands)))
    return BandSet(bands.bands, labels)


def total_bandwidth(bands: BandSet) -> float:
    """Lebesgue measure of the band set."""
    return float(sum(hi - lo for lo, hi in bands.bands))


def butterfly(lam: float, q_max: int, omega: float = 0.0,
              threads: int = 1) -> list[tuple[int, int, BandSet]]:
    """Band sets of the cosine chain at every reduced fraction alpha = p/q with
    q <= q_max, ordered by (q, p). q = 1 contributes the single row (0, 1)."""
    if q_max < 1:
        raise DomainError("q_max must be at least 1")
    fractions = [(0, 1)]
    for q in range(2, q_max + 1):
        fractions.extend((p, q) for p in range(1, q) if gcd(p, q) == 1)

    def row(pq):
        p, q = pq
        values = tuple(lam * math.cos(2.0 * math.pi * (n * p / q + omega))
                       for n in range(1, q + 1))
        return p, q, band_spectrum(PeriodicPotential(values))

    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(row, fractions))
    return [row(pq) for pq in fractions]


def phase_union_spectrum(lam: float, p: int, q: int) -> BandSet:
    """Spectrum of the rational-alpha cosine chain as an operator family: the
    union over phases of the q-periodic spectra.

    The q-periodic trace splits as tr(E, omega) = D(E) + s c cos(2 pi q omega)
    with c = 2 (|lam|/2)^q and s = +-1, so the union is {E : |D(E)| <= 2 + c}.
    Its 2q edges are the antiperiodic eigenvalues at the phase where the
    modulation is +c and the periodic eigenvalues at the phase where it is -c.
    (Fixed-phase approximant bands shrink to measure zero whenever the
    Lyapunov exponent is positive on the spectrum; the family spectrum is the
    object whose measure converges.)
    """
    if q < 1 or not 0 <= p <= q or (q > 1 and gcd(p, q) != 1):
        raise DomainError("need a reduced fraction p/q with q >= 1")
    c = 2.0 * (abs(lam) / 2.0) ** q

    def values(omega: float) -> np.ndarray:
        n = np.arange(1, q + 1)
        return lam * np.cos(2.0 * math.pi * (n * p / q + omega))

    # Sign of the modulation at omega = 0, read off at a zero of D where the
    # trace equals s c exactly (no cancellation).
    quarter = 1.0 / (4.0 * q)
    grid = np.linspace(-abs(lam) - 2.5, abs(lam) + 2.5, 8 * q + 5)
    v_quarter = values(quarter)
    signs = [math.copysign(1.0, propagate(float(e), v_quarter).trace) for e in grid]
    z = None
    for i in range(len(grid) - 1):
        if signs[i] != signs[i + 1]:
            a, b = float(grid[i]), float(grid[i + 1])
            for _ in range(80):
                mid = 0.5 * (a + b)
                if math.copysign(1.0, propagate(mid, v_quarter).trace) == signs[i]:
                    a = mid
                else:
                    b = mid
            z = 0.5 * (a + b)
            break
    if z is None:
        raise DomainError("could not locate a zero of the phase-free trace part")
    s = math.copysign(1.0, propagate(z, values(0.0)).trace)

    omega_plus = 0.0 if s > 0 else 1.0 / (2.0 * q)   # modulation +c here
    omega_minus = 1.0 / (2.0 * q) if s > 0 else 0.0  # modulation -c here
    v_plus = values(omega_plus)
    v_minus = values(omega_minus)
    lo0 = float(min(v_plus.min(), v_minus.min())) - 4.0
    hi0 = float(max(v_plus.max(), v_minus.max())) + 4.0
    # D = -(2+c)  <=>  tr at omega_plus = -2 (antiperiodic eigenvalues);
    # D = +(2+c)  <=>  tr at omega_minus = +2 (periodic eigenvalues).
    e_lo = bisect_eigenvalues(lambda E: count_below_periodic(v_plus, E, -1.0), q, lo0, hi0)
    e_hi = bisect_eigenvalues(lambda E: count_below_periodic(v_minus, E, +1.0), q, lo0, hi0)
    edges = np.sort(np.concatenate([e_lo, e_hi]))
    raw = [(float(edges[2 * i]), float(edges[2 * i + 1])) for i in range(q)]
    merged: list[list[float]] = [list(raw[0])]
    for lo, hi in raw[1:]:
        if lo - merged[-1][1] <= CLOSED_GAP_TOL:
            merged[-1][1] = hi
        else:
            merged.append([lo, hi])
    return BandSet(tuple((lo, hi) for lo, hi in merged))


@dataclass(frozen=True)
class GapLabelMatch:
    gap_index: int      # gap sits after this band (1-based)
    energy: float       # gap midpoint
    ids_value: float    # IDS sampled at the midpoint
    label: float        # nearest admissible label
    deviation: float
    within_tol: bool


def match_gap_labels(bands: BandSet, ids: IdsCurve, labels, tol: float) -> list[GapLabelMatch]:
    """Match the IDS value at every gap midpoint to the nearest admissible label."""
    lab = np.asarray(sorted(labels), dtype=float)
    report = []
    for k, (g_lo, g_hi) in enumerate(bands.gaps(), start=1):
        mid = 0.5 * (g_lo + g_hi)
        val = ids.at(mid)
        j = int(np.argmin(np.abs(lab - val)))
        dev = abs(float(lab[j]) - val)
        report.append(GapLabelMatch(k, mid, val, float(lab[j]), dev, dev <= tol))
    return report


def _directed_hausdorff(a: BandSet, b: BandSet) -> float:
    """sup over points of a of the distance to b, for unions of closed intervals."""
    if not a.bands or not b.bands:
        return math.inf if a.bands != b.bands else 0.0

    def dist_to_b(x: float) -> float:
        return min(0.0 if lo <= x <= hi else min(abs(x - lo), abs(x - hi))
                   for lo, hi in b.bands)

    candidates = [x for lo, hi in a.bands for x in (lo, hi)]
    # Deep interior points of a facing a gap of b are the gap midpoints.
    for g_lo, g_hi in b.gaps():
        mid = 0.5 * (g_lo + g_hi)
        if any(lo <= mid <= hi for lo, hi in a.bands):
            candidates.append(mid)
    return max(dist_to_b(x) for x in candidates)


def hausdorff_distance(a: BandSet, b: BandSet) -> float:
    """Hausdorff distance between two unions of closed intervals."""
    return max(_directed_hausdorff(a, b), _directed_hausdorff(b, a))
