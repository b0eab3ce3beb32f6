"""The Appell field seen along a line through the disc: the potential changes sign but stays smooth.

Run:  python3 demos/field_across_disc.py
"""
import math

from zgkn_dirac import ModelParams, OblatePoint
from zgkn_dirac.fields import appell_field

params = ModelParams(1.0, 1.0)
theta = math.pi / 4  # a line that pierces the disc at cylindrical radius a sin(theta)
print(f"{'r':>6} {'sheet':>5} {'phi_el':>10} {'|E|':>10} {'|B|':>10}")
for r in (-3.0, -1.0, -0.3, -0.1, 0.0, 0.1, 0.3, 1.0, 3.0):
    s = appell_field(OblatePoint(r, theta), params)
    sheet = "+" if r >= 0 else "-"
    print(f"{r:6.2f} {sheet:>5} {s.phi_el:10.5f} {math.hypot(*s.E_vec):10.5f} {math.hypot(*s.B_vec):10.5f}")

# Near the ring the field grows without bound; field grids skip cells inside a small guard.
for eps in (1e-1, 1e-2, 1e-3):
    s = appell_field(OblatePoint(eps, math.pi / 2), params)
    # in the ring plane the cylindrical distance to the ring is about eps^2 / (2a)
    print(f"r = {eps:g}, ring plane: |E| = {math.hypot(*s.E_vec):.3e}")
