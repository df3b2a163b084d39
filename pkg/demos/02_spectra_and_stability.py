# %% [markdown]
# # Linearized spectra and the stability index
#
# Around the sub-luminal sn wave the linearized Hill operator has exactly
# one negative eigenvalue and a simple zero eigenvalue whose eigenfunction
# is phi'.  The lowest eigenvalues are known in closed form (Lamé), so the
# numerics can be checked directly.

# %%
import math

import numpy as np

from phi4waves import Family, solve_family
from phi4waves.spectral import lame_eigenvalues, verify_complex_spectra, verify_sn_real_spectrum
from phi4waves.stability import classify, coercivity_constant, coercivity_ratio

PI = math.pi

# %%
p = solve_family(Family.SN_SUBLUMINAL, 4 * PI, 0.3)
rep = verify_sn_real_spectrum(p, N=256, m=5)
exact = lame_eigenvalues(p, "L_sn_real")
for (name, value), numeric in zip(exact.items(), rep.eigenvalues):
    print(f"{name:7s} closed form {value: .12f}   numeric {numeric: .12f}")
print("checks:", rep.checks)

# %% [markdown]
# The complex standing wave has two operators.  The imaginary-part one has
# two negative eigenvalues, -beta1^2/2 and -beta2^2/2, then psi in its kernel.

# %%
q = solve_family(Family.SN_COMPLEX_STANDING, 2 * PI, 1.0)
rr, ri = verify_complex_spectra(q, N=256, m=4)
print("R:", np.round(rr.eigenvalues, 10))
print("I:", np.round(ri.eigenvalues, 10))
print("expected:", -q.beta1 ** 2 / 2, -q.beta2 ** 2 / 2, 0.0)

# %% [markdown]
# ## Sweeping the speed
#
# d''(c) stays negative along both curves.  Traveling sub-luminal waves come
# out unstable; the stationary wave and the complex standing waves are
# stable against odd perturbations.

# %%
for c in np.linspace(0.0, 0.9, 7):
    r = classify(Family.SN_SUBLUMINAL, c, 4 * PI)
    print(f"sn      c={c:.2f}  d''={r.d_second: .4f}  n={r.n_restricted}  {r.verdict}")
for c in np.linspace(0.5, 2.5, 5):
    r = classify(Family.SN_COMPLEX_STANDING, c, 2 * PI)
    print(f"complex c={c:.2f}  d''={r.d_second: .4f}  n={r.n_restricted}  {r.verdict}")

# %% [markdown]
# ## How coercive is the odd sector?

# %%
for L in (2 * PI + 0.5, 4 * PI, 8 * PI):
    print(f"L={L:7.3f}  constant {coercivity_constant(L):.6f}  exact ratio {coercivity_ratio(L, N=128):.6f}")
