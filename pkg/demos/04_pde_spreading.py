"""Direct evolution of the film equation versus the similarity theory.

Two desk-scale experiments with the explicit conservative solver:

1. A snapshot of the zero-contact-angle similarity solution is evolved and
   its front tracked: the position should follow t^(1/(5 lam + 2)).
2. A rectangle of the same mass relaxes toward the similarity shape; the
   comparison is made at the drop's own "similarity age" (the family is
   invariant under time translation, so the age is calibrated from the
   front position).

Run:  python demos/04_pde_spreading.py    (about a minute)
"""
import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from filmspread import (DropShape, Geometry, continue_to_zero_delta, evolve,
                        front_position, init_drop, make_rheology,
                        rescale_compare, to_physical, uniform_grid)

r = make_rheology(2.0)
res = continue_to_zero_delta(Geometry.PLANAR, r, 0.0)
prof = to_physical(res, r)
print(f"similarity target: eta_f = {prof.eta_f:.5f}, shape mass = {prof.mass:.5f}, "
      f"physical mass = {prof.physical_mass:.5f}")

fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(11, 4.2))

# --- experiment 1: front law from a similarity snapshot -------------------
grid = uniform_grid(-40.0, 40.0, 801)
f0 = init_drop(DropShape.SELF_SIMILAR_SNAPSHOT, None, (-2.5, 2.5), grid,
               profile=prof, t0=1.0)
hist = []
g = evolve(f0, r, 120.0, observer=lambda f: hist.append(
    (f.t, front_position(f, r))), observe_every=1000)
h = np.array([(t, x) for t, x in hist if x is not None])
sel = h[:, 0] > 3.0
slope = np.polyfit(np.log(h[sel, 0]), np.log(h[sel, 1]), 1)[0]
print(f"\nsnapshot run to t = {g.t:.0f}: front exponent fit {slope:.5f} "
      f"(theory 1/12 = {1 / 12:.5f}); mass closure "
      f"{abs(g.mass - g.clip_ledger - f0.mass) / f0.mass:.1e}")
ax1.loglog(h[:, 0], h[:, 1], label="measured front")
ax1.loglog(h[:, 0], prof.eta_f * h[:, 0] ** (1 / 12), "--", label="$\\eta_f t^{1/12}$")
ax1.set_xlabel("t")
ax1.set_ylabel("$x_{front}$")
ax1.set_title("front law from similarity data")
ax1.legend(fontsize=8)

# --- experiment 2: rectangle relaxing to the similarity shape --------------
grid = uniform_grid(-30.0, 30.0, 801)
f0 = init_drop(DropShape.RECTANGLE, prof.physical_mass,
               (-prof.eta_f, prof.eta_f), grid)
g = evolve(f0, r, 60.0)
xf = front_position(g, r)
age = (xf / prof.eta_f) ** (1.0 / prof.beta)
g.t = age
rep = rescale_compare(g, r, prof)
print(f"rectangle run: similarity age {age:.0f}, "
      f"L_inf distance to U = {rep.l_inf:.4f}, L1 = {rep.l1:.4f}")

eta = np.linspace(0, 1.1 * prof.eta_f, 400)
v = age ** prof.height_exponent * np.interp(eta * age ** prof.beta, g.x, g.u) / prof.amp
ax2.plot(eta, prof(eta), label="similarity profile $U$")
ax2.plot(eta, v, "--", label="rescaled rectangle drop")
ax2.set_xlabel("$\\eta$")
ax2.set_ylabel("$U$, $v$")
ax2.set_title(f"rectangle at similarity age {age:.0f}")
ax2.legend(fontsize=8)

fig.tight_layout()
fig.savefig("demos/04_pde_spreading.png", dpi=130)
print("\nwrote demos/04_pde_spreading.png")
