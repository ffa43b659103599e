"""Shooting for the contact angle: the delta-level continuation at work.

Interfaces z = 0 sit on a singularity of the profile equation, so the
solver first finds gamma for the auxiliary level z = delta and then sends
delta -> 0 along a geometric schedule.  theta parametrizes the contact
slope as a fraction of the explicit parabola's (sqrt 2 planar, 1 radial):
theta = 0 is the zero-contact-angle drop (unique), theta = 1 the parabola.

Run:  python demos/02_zero_angle_shooting.py
"""
import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from filmspread import (Geometry, continue_to_zero_delta, make_rheology,
                        to_physical)

r = make_rheology(2.0)

print("planar, theta = 0 (zero contact angle):")
res = continue_to_zero_delta(Geometry.PLANAR, r, 0.0)
print(f"{'delta':>10} {'gamma0(delta)':>14} {'y(delta)':>12} {'iters':>6}")
for lv in res.levels[::4]:
    print(f"{lv.delta:10.1e} {lv.gamma:14.9f} {lv.y:12.8f} {lv.iterations:6d}")
print(f"extrapolated: gamma0 = {res.gamma_theta:.9f}, y0 = {res.y_theta:.8f} "
      f"(est. err {res.extrapolation_error_estimate:.1e}, fitted decay "
      f"exponent q = {res.fitted_q:.3f})")
print()

thetas = [0.0, 0.25, 0.5, 0.75, 1.0]
fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(11, 4.2))
print(f"{'theta':>6} {'gamma':>12} {'y':>10} {'slope':>10} {'eta_f':>8} {'mass':>8}")
for th in thetas:
    res_th = continue_to_zero_delta(Geometry.PLANAR, r, th)
    phys = to_physical(res_th, r)
    print(f"{th:6.2f} {res_th.gamma_theta:12.8f} {res_th.y_theta:10.6f} "
          f"{res_th.slope:10.6f} {phys.eta_f:8.4f} {phys.mass:8.5f}")
    ax1.plot(phys.eta, phys.U, label=f"$\\theta$ = {th}")
ax1.set_xlabel("$\\eta$")
ax1.set_ylabel("$U$")
ax1.set_title("contact-angle family of similarity profiles")
ax1.legend(fontsize=8)

# the continuation trace: gamma(delta) marching to its limit
for geom, name in ((Geometry.PLANAR, "planar"), (Geometry.RADIAL, "radial")):
    res_g = continue_to_zero_delta(geom, r, 0.0)
    ds = [lv.delta for lv in res_g.levels]
    gs = [lv.gamma for lv in res_g.levels]
    ax2.semilogx(ds, gs, "o-", ms=3, label=f"{name}: $\\to$ {res_g.gamma_theta:.6f}")
ax2.set_xlabel("$\\delta$")
ax2.set_ylabel("$\\gamma_0(\\delta)$")
ax2.set_title("level continuation toward $\\delta = 0$")
ax2.legend()

fig.tight_layout()
fig.savefig("demos/02_zero_angle_shooting.png", dpi=130)
print("\nwrote demos/02_zero_angle_shooting.png")
