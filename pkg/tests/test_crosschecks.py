"""Independent-route consistency checks across modules.

Each test recomputes a quantity through a second, structurally different
algorithm (direct boundary matching, brute-force unions, dense solvers) and
compares against the library path.
"""

import cmath
import math

import numpy as np
import pytest

from quasispec import (
    GOLDEN_MEAN,
    PeriodicPotential,
    PotentialSpec,
    SubstitutionRule,
    approximant_by_denominator,
    band_spectrum,
    bounded_spectrum,
    count_below_periodic,
    fibonacci_trace_orbit,
    generate_two_sided,
    letter_frequencies,
    lyapunov_estimate,
    sample_potential,
    scatter,
    thouless_gamma,
    total_bandwidth,
)
from quasispec.bands import phase_union_spectrum
from quasispec.numutil import as_float, signed_log, wrap
from quasispec.potentials import _two_sided_letters


class TestScatterBoundaryMatching:
    """Solve the scattering problem by propagating the wave directly and
    matching plane waves at the right lead, no transfer-matrix formulas."""

    @staticmethod
    def _oracle(values, E, w1, w2):
        L = len(values)
        k1 = math.acos((E - w1) / 2.0)
        k2 = math.acos((E - w2) / 2.0)
        e1 = cmath.exp(1j * k1)
        e2 = cmath.exp(1j * k2)

        def run(psi0, psi1):
            prev, cur = psi0, psi1
            out = [psi0, psi1]
            for n in range(1, L + 1):
                prev, cur = cur, (E - values[n - 1]) * cur - prev
                out.append(cur)
            return out  # psi_0 .. psi_{L+1}

        u = run(1.0 + 0j, e1)        # incoming unit wave
        v = run(1.0 + 0j, 1.0 / e1)  # reflected component
        r = (e2 * u[L] - u[L + 1]) / (v[L + 1] - e2 * v[L])
        t = (u[L] + r * v[L]) * e2 ** (-L)
        return t, r

    def test_matches_closed_form(self, rng):
        for _ in range(60):
            L = int(rng.integers(1, 15))
            values = rng.uniform(-2, 2, size=L)
            w1 = float(rng.uniform(-1.5, 1.5))
            w2 = float(rng.uniform(-1.5, 1.5))
            E = float(rng.uniform(max(w1, w2) - 1.9, min(w1, w2) + 1.9))
            t_ref, r_ref = self._oracle(values, E, w1, w2)
            res = scatter(values, E, w1, w2)
            assert res.t == pytest.approx(t_ref, rel=1e-9, abs=1e-9)
            assert res.r == pytest.approx(r_ref, rel=1e-9, abs=1e-9)


class TestPhaseUnionBruteForce:
    def test_union_over_sampled_phases(self, rng):
        # A dense sweep of fixed-phase spectra must fill the family spectrum
        # from inside, and never leave it.
        for lam, p, q in [(2.0, 1, 3), (3.0, 2, 5), (1.2, 1, 4)]:
            union = phase_union_spectrum(lam, p, q)
            covered = []
            for omega in np.linspace(0.0, 1.0, 240, endpoint=False):
                vals = tuple(lam * math.cos(2 * math.pi * (n * p / q + omega))
                             for n in range(1, q + 1))
                covered.extend(band_spectrum(PeriodicPotential(vals)).bands)
            lo = min(a for a, _ in covered)
            hi = max(b for _, b in covered)
            assert lo == pytest.approx(union.bands[0][0], abs=1e-3)
            assert hi == pytest.approx(union.bands[-1][1], abs=1e-3)
            for a, b in covered:
                for x in (a, 0.5 * (a + b), b):
                    assert any(lo2 - 1e-9 <= x <= hi2 + 1e-9
                               for lo2, hi2 in union.bands)
            brute = sum(b - a for a, b in _merge(covered))
            assert brute <= total_bandwidth(union) + 1e-6
            assert brute >= 0.98 * total_bandwidth(union)


def _merge(intervals):
    out = []
    for lo, hi in sorted(intervals):
        if out and lo <= out[-1][1] + 1e-12:
            out[-1][1] = max(out[-1][1], hi)
        else:
            out.append([lo, hi])
    return [(a, b) for a, b in out]


class TestPeriodicCounterStress:
    def test_large_matrix(self, rng):
        L = 200
        vals = rng.uniform(-2, 2, size=L)
        for corner in (1.0, -1.0):
            H = np.diag(vals) + np.diag(np.ones(L - 1), 1) + np.diag(np.ones(L - 1), -1)
            H[0, L - 1] += corner
            H[L - 1, 0] += corner
            ev = np.linalg.eigvalsh(H)
            E = rng.uniform(-4.5, 4.5, size=40)
            ref = np.array([int(np.sum(ev < e)) for e in E])
            np.testing.assert_array_equal(count_below_periodic(vals, E, corner), ref)

    def test_near_eigenvalue_energies(self, rng):
        # Probing right next to eigenvalues exercises the pivot guards.
        L = 30
        vals = rng.uniform(-2, 2, size=L)
        H = np.diag(vals) + np.diag(np.ones(L - 1), 1) + np.diag(np.ones(L - 1), -1)
        H[0, L - 1] += 1.0
        H[L - 1, 0] += 1.0
        ev = np.linalg.eigvalsh(H)
        probes = np.concatenate([ev - 1e-7, ev + 1e-7])
        ref = np.array([int(np.sum(ev < e)) for e in probes])
        np.testing.assert_array_equal(count_below_periodic(vals, probes, 1.0), ref)


class TestThreeLetterSubstitution:
    RULE = SubstitutionRule(("a", "b", "c"),
                            {"a": "ab", "b": "ac", "c": "a"})

    def test_primitive_and_frequencies(self):
        assert self.RULE.is_primitive()
        freq = letter_frequencies(self.RULE)
        assert sum(freq.values()) == pytest.approx(1.0, abs=1e-12)
        # Occurrence counts of long prefixes converge to the eigenvector.
        word = self.RULE.iterate("a", 18)
        for letter in "abc":
            assert word.count(letter) / len(word) == pytest.approx(
                freq[letter], abs=1e-3)

    def test_two_sided_invariance(self):
        _, _, n = _two_sided_letters(self.RULE, 6)
        eta = self.RULE.power(n)
        v = generate_two_sided(self.RULE, 1, 40)
        assert eta.apply(v)[:40] == v
        u = generate_two_sided(self.RULE, -40, 0)
        assert eta.apply(u).endswith(u)

    def test_sampling(self):
        spec = PotentialSpec.substitution(self.RULE, {"a": 1.0, "b": 0.0, "c": -1.0})
        vals = sample_potential(spec, -5, 20)
        assert set(vals) <= {1.0, 0.0, -1.0}


class TestThoulessCrossModule:
    def test_periodic_gap_energy_matches_lyapunov(self):
        # Lyapunov exponent of a periodic chain from its own IDS increments.
        from quasispec import ids_curve
        pot = PeriodicPotential((0.0, 2.0))
        spec = PotentialSpec.explicit(pot.values)
        grid = np.linspace(-3.5, 5.5, 8001)
        curve = ids_curve(spec, None, 1000, grid)
        bands = band_spectrum(pot)
        g_lo, g_hi = bands.gaps()[0]
        E = 0.5 * (g_lo + g_hi)
        got = thouless_gamma(curve, E)
        want = lyapunov_estimate(spec, E, 20_000)
        assert got == pytest.approx(want, abs=0.02)


class TestBoundedSpectrumSoundness:
    def test_certified_escape_is_real(self, rng):
        # Every discarded region's midpoint orbit must actually escape.
        lam = 2.0
        est = bounded_spectrum(lam, (-3.0, 5.0), 10, 25)
        gaps = est.gaps()
        for lo, hi in gaps:
            mid = 0.5 * (lo + hi)
            orbit = fibonacci_trace_orbit(mid, lam, 25)
            assert orbit.escape_index is not None, mid

    def test_survivors_cover_nonescaping_points(self, rng):
        lam = 2.0
        est = bounded_spectrum(lam, (-3.0, 5.0), 12, 25)
        for E in rng.uniform(-3, 5, size=400):
            orbit = fibonacci_trace_orbit(float(E), lam, 25)
            if orbit.escape_index is None:
                assert any(lo - 1e-12 <= E <= hi + 1e-12
                           for lo, hi in est.bands), E


class TestBigValueHelpers:
    def test_roundtrips(self):
        for x in (0.0, 1.0, -3.5, 1e99, -1e99):
            assert as_float(wrap(*signed_log(x))) == pytest.approx(x, rel=1e-12)

    def test_huge_goes_to_pair(self):
        v = wrap(1, 500.0)
        assert isinstance(v, tuple)
        assert as_float(v) == pytest.approx(math.exp(500.0), rel=1e-12)
        assert as_float((-1, 1000.0)) == -math.inf

    def test_zero(self):
        assert signed_log(0.0) == (0, -math.inf)
        assert wrap(0, -math.inf) == 0.0
