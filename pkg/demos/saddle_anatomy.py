"""Walk through the scalar saddle point that drives every prediction.

The asymptotic analysis compresses the whole random matrix problem into
two scalars (tau, beta): tau tracks the per-user distortion scale and
beta the dual variable of the data-fit term.  This script solves the
system at one operating point, checks the fixed-point residuals, and
probes the max-min geometry by hand so you can see that the reported
point really is a saddle.
"""

import math

import numpy as np

from boxprec import SystemParams, clip_moments, phi_value, solve_saddle

# ----------------------------------------------------------------------
# 1. A representative operating point: 5 users per 25 antennas, ridge
#    weight 1, unit box, unit constellation power.
# ----------------------------------------------------------------------
params = SystemParams(user_ratio=0.2, reg=1.0, amp=1.0, noise_var=0.09)
sp = solve_saddle(params)

print("operating point:", params)
print(f"tau*   = {sp.tau:.12f}")
print(f"beta*  = {sp.beta:.12f}")
print(f"alpha* = {sp.alpha:.12f}  (1/tau + 2 reg/beta = "
      f"{1.0 / sp.tau + 2.0 * params.reg / sp.beta:.12f})")
print(f"phi*   = {sp.phi:.12f}")
print(f"fixed-point residuals: power {sp.residual_power:+.2e}, "
      f"beta {sp.residual_beta:+.2e}")

# ----------------------------------------------------------------------
# 2. The saddle geometry: phi rises if you move tau off its optimum and
#    falls if you move beta, because the scalar problem is min over tau
#    of a max over beta.
# ----------------------------------------------------------------------
print("\nsaddle geometry (finite differences):")
for eps in (1e-3, 1e-2):
    up_tau = phi_value(sp.tau * (1 + eps), sp.beta, params) - sp.phi
    dn_tau = phi_value(sp.tau * (1 - eps), sp.beta, params) - sp.phi
    up_beta = phi_value(sp.tau, sp.beta * (1 + eps), params) - sp.phi
    dn_beta = phi_value(sp.tau, sp.beta * (1 - eps), params) - sp.phi
    print(f"  eps={eps:g}: tau+/-: {up_tau:+.3e} {dn_tau:+.3e}   "
          f"beta+/-: {up_beta:+.3e} {dn_beta:+.3e}")
print("  (tau perturbations raise phi, beta perturbations lower it)")

# ----------------------------------------------------------------------
# 3. The moments of the clipped Gaussian X = clamp(H/alpha, +-A) are the
#    only statistics the system needs.  E[X^2] is exactly the transmit
#    power excess tau^2 delta - rho.
# ----------------------------------------------------------------------
mom = clip_moments(sp.alpha, params.amp)
print("\nclipped-Gaussian moments at alpha*:")
print(f"  E|X|   = {mom.e_abs:.12f}")
print(f"  E X^2  = {mom.e_sq:.12f}")
print(f"  E H X  = {mom.e_xh:.12f}")
excess = params.user_ratio * sp.tau ** 2 - params.target_power
print(f"  tau^2 delta - rho = {excess:.12f} (matches E X^2 to "
      f"{abs(excess - mom.e_sq):.1e})")

# ----------------------------------------------------------------------
# 4. A point with a closed form: without the box and with reg = 0 at
#    user_ratio 2, the system collapses to tau = sqrt(rho), beta =
#    2 tau (delta - 1).
# ----------------------------------------------------------------------
for rho in (1.0, 2.0):
    wide = SystemParams(user_ratio=2.0, reg=0.0, amp=math.inf,
                        target_power=rho)
    s = solve_saddle(wide)
    print(f"\nno box, reg=0, delta=2, rho={rho}: tau={s.tau:.9f} "
          f"(exact {math.sqrt(rho):.9f}), beta={s.beta:.9f} "
          f"(exact {2 * math.sqrt(rho):.9f})")

# ----------------------------------------------------------------------
# 5. How the saddle moves with the box size: shrinking A forces more
#    clipping, which shows up as a larger tau (more distortion).
# ----------------------------------------------------------------------
print("\n  A        tau*      beta*     E X^2")
for amp in np.logspace(-1, 1, 7):
    s = solve_saddle(SystemParams(user_ratio=0.2, reg=1.0, amp=float(amp),
                                  noise_var=0.09))
    print(f"  {amp:7.3f}  {s.tau:8.5f}  {s.beta:8.5f}  {s.moments.e_sq:8.5f}")
