"""Where the lowest positive-energy state lives, and how its mirror partner lives on the other sheet.

Run:  python3 demos/ground_state_sheets.py   (under a minute)
"""
from dataclasses import replace

import numpy as np

from zgkn_dirac import ALPHA_S, ModelParams, point_spectrum
from zgkn_dirac.wavefunction import marginal_density, normalize, profile_peak, reconstruct

params = ModelParams(1e-3, ALPHA_S)
report = point_spectrum(params, [0.5, -0.5], E_window=(0.99997, 0.99998))
pair = min(report.eigenpairs, key=lambda p: p.E)
state = normalize(reconstruct(pair, params))
print(f"E = {pair.E:.15f}  lambda = {pair.lam:.6f}  kappa = {pair.kappa:+.1f}")
print(f"sheet weights: r < 0 {state.sheet_weights[0]:.2e}, r > 0 {state.sheet_weights[1]:.6f}")
print(f"density peaks at r = {profile_peak(state):.1f} (Bohr radius 1/alpha = {1 / ALPHA_S:.1f})")

# The E -> -E partner flips kappa and lambda; its density is the mirror image in r.
partner = normalize(reconstruct(replace(pair, E=-pair.E, lam=-pair.lam, kappa=-pair.kappa,
                                        n_theta=-1 - pair.n_theta), params))
rho, rho_p = marginal_density(state), marginal_density(partner)
print(f"partner sheet weights: {partner.sheet_weights[0]:.6f}, {partner.sheet_weights[1]:.2e}")
print(f"max |rho_partner(-r) - rho(r)| / max rho = {np.max(np.abs(rho_p[::-1] - rho)) / rho.max():.1e}")

# A coarse text picture of the density on the attracting sheet.
for r in (25, 50, 100, 137, 200, 400, 800):
    d = np.interp(r, state.r_nodes, rho)
    print(f"r = {r:4d}  " + "#" * int(60 * d / rho.max()))
