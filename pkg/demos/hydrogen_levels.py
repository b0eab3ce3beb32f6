"""Hydrogen-like levels near E = 1 on a small ring, set against Sommerfeld's fine-structure formula.

Run:  python3 demos/hydrogen_levels.py [ring radius]   (about half a minute)
"""
import sys

from zgkn_dirac import ALPHA_S, ModelParams, point_spectrum, sommerfeld_comparison

a = float(sys.argv[1]) if len(sys.argv) > 1 else 1e-3
params = ModelParams(a, ALPHA_S)

# Only the top of the gap is searched; the negative-energy partners mirror these levels.
report = point_spectrum(params, [0.5, -0.5], E_window=(0.99999, 1.0))
print(f"ring radius a = {a:g}, coupling gamma = {params.gamma:.6f}")
print(f"{len(report.eigenpairs)} eigenvalues, {report.scan.evaluations} mismatch evaluations\n")

print(f"{'E':>20} {'kappa':>6} {'n_theta':>7} {'level':>6} {'E_sommerfeld':>20} {'E - E_S':>10}")
for row in sommerfeld_comparison(params, report):
    level = f"{row.n},{row.kappa_s}"
    print(f"{row.E:20.15f} {row.kappa:6.1f} {row.n_theta:7d} {level:>6} {row.E_sommerfeld:20.15f} "
          f"{row.deviation:10.1e}")

# Each Sommerfeld level shows up as a cluster of four (two kappa channels times two angular branches)
# whose spread shrinks with the ring radius.
