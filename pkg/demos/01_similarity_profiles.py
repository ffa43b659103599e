"""Similarity profiles of spreading power-law films, and what gamma does.

The rescaled profile z(x) starts from unit height and unit curvature; the
single parameter gamma (the rescaled initial curvature of the physical
problem) decides the fate of the profile:

  gamma < 0   : steeper-than-parabola dewetting profile, early interface
  gamma = 0   : the explicit parabola 1 - x^2/2 (interface at sqrt 2)
  0 < gamma < gamma0 : interface beyond sqrt 2, still a spreading drop
  gamma > gamma0     : no interface at all; z turns at a positive minimum

Run:  python demos/01_similarity_profiles.py
"""
import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from filmspread import (Geometry, OutcomeKind, expand_zero_angle,
                        integrate_to_event, make_rheology)

r = make_rheology(2.0)
print(f"lambda = {r.lam}: a = {r.a}, beta_planar = {r.beta_planar:.6f}, "
      f"beta_radial = {r.beta_radial:.6f}")
print(f"amplitude A = {r.amp_A:.6f}, front exponent p = {r.p_front}")
print()

fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(11, 4.2))

print(f"{'gamma':>8} {'outcome':>14} {'where':>10} {'slope/z_min':>12}")
for gamma in (-1.0, -0.3, 0.0, 0.2, 0.35, 0.5, 1.0):
    out = integrate_to_event(Geometry.PLANAR, gamma, r, delta=1e-9,
                             keep_trace=True)
    tr = out.trace
    ax1.plot(tr.x, tr.z, label=f"$\\gamma$ = {gamma}")
    if out.kind is OutcomeKind.INTERFACE_HIT:
        print(f"{gamma:8.2f} {'interface':>14} {out.y:10.5f} {out.slope:12.5f}")
    else:
        print(f"{gamma:8.2f} {'minimum turn':>14} {out.x_min:10.5f} {out.z_min:12.5f}")

ax1.set_xlabel("x")
ax1.set_ylabel("z")
ax1.set_ylim(0, 1.6)
ax1.legend(fontsize=8)
ax1.set_title("planar profiles across gamma")

# near the zero-contact-angle interface the profile follows C (y-x)^(3/(2+a))
gamma0 = 0.355663075   # converged shooting value for lambda = 2 (see demo 02)
out = integrate_to_event(Geometry.PLANAR, gamma0, r, delta=1e-9, keep_trace=True)
s = np.geomspace(1e-6, 0.5, 400)
z = out.trace.eval_z(out.y - s)
exp = expand_zero_angle(out.y, gamma0, r)
ax2.loglog(s, z, label="integrated profile")
ax2.loglog(s, exp.coefficient * s ** exp.exponent, "--",
           label=f"$C\\,s^{{{exp.exponent:.2f}}}$ local law")
ax2.set_xlabel("distance to interface  s = y - x")
ax2.set_ylabel("z")
ax2.legend()
ax2.set_title("zero-contact-angle touchdown")

fig.tight_layout()
fig.savefig("demos/01_similarity_profiles.png", dpi=130)
print("\nwrote demos/01_similarity_profiles.png")
