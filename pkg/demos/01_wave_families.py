# %% [markdown]
# # Periodic waves of the phi^4 equation
#
# Four families of elliptic-function waves solve
# phi_tt - phi_xx = phi - |phi|^2 phi on a circle of length L.  For each
# family we pick a period and a speed, solve for the amplitude, and check
# the profile against the traveling-wave ODE.

# %%
import math

import numpy as np

from phi4waves import Family, admissible_speeds, solve_family
from phi4waves.wave_families import ode_residual, period_of, profile

PI = math.pi

# %% [markdown]
# ## Which speeds are allowed?

# %%
for family in Family:
    for L in (PI, 2 * PI, 4 * PI):
        print(f"{family.value:14s} L = {L:7.4f}  speeds {admissible_speeds(family, L)}")

# %% [markdown]
# ## Solving one wave per family

# %%
cases = [
    (Family.SN_SUBLUMINAL, 4 * PI, 0.5),
    (Family.DN_SUPERLUMINAL, 2 * PI, 1.2),
    (Family.CN_SUPERLUMINAL, 2 * PI, 2.0),
    (Family.SN_COMPLEX_STANDING, 2 * PI, 1.0),
]
waves = [solve_family(*case) for case in cases]
for p in waves:
    print(
        f"{p.family.value:14s} beta1={p.beta1:.12f} kappa={p.kappa:.12f} "
        f"ODE residual={ode_residual(p):.1e}"
    )

# %% [markdown]
# ## The period map is monotone in the amplitude
#
# That is what makes bisection safe.  For the sub-luminal wave at c = 0.5
# the period falls as beta1 grows toward sqrt(2).

# %%
c = 0.5
betas = np.linspace(1.01, 1.41, 9)
for b in betas:
    print(f"beta1 = {b:.3f}  T = {period_of(Family.SN_SUBLUMINAL, b, c):.6f}")

# %% [markdown]
# ## Long periods approach the kink

# %%
p = solve_family(Family.SN_SUBLUMINAL, 40.0, 0.0)
x = np.linspace(-4, 4, 9)
print(np.column_stack([x, profile(p, x).real, np.tanh(x / math.sqrt(2))]))
