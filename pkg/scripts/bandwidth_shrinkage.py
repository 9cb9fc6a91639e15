"""Track how the approximant bandwidth of the golden-mean chain shrinks.

Prints one line per continued-fraction denominator: the fixed-phase band
measure (tends to zero) next to the phase-family measure of the cosine chain
at the same coupling (tends to 2|lambda - 2|).
"""

import argparse

from quasispec import (
    GOLDEN_MEAN,
    PotentialSpec,
    approximant_by_denominator,
    band_spectrum,
    total_bandwidth,
)
from quasispec.bands import phase_union_spectrum
from quasispec.potentials import _cf_convergents


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--lambda", type=float, dest="lam", default=2.0)
    ap.add_argument("--qmax", type=int, default=233)
    args = ap.parse_args()

    spec = PotentialSpec.sturmian(GOLDEN_MEAN, args.lam)
    print(f"{'q':>5}  {'sturmian bw':>12}  {'cosine family bw':>16}")
    for p, q in _cf_convergents(GOLDEN_MEAN)[2:]:
        if q > args.qmax:
            break
        bw = total_bandwidth(band_spectrum(approximant_by_denominator(spec, q)))
        fam = total_bandwidth(phase_union_spectrum(args.lam, p, q))
        print(f"{q:>5}  {bw:>12.6f}  {fam:>16.6f}")


if __name__ == "__main__":
    main()
