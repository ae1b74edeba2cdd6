# ---
# jupyter:
#   jupytext:
#     formats: py:percent
#     text_representation:
#       extension: .py
#       format_name: percent
# ---

# %% [markdown]
# # Noise figures under homodyne detection

# %%
import cmath
import math

import numpy as np

from psafiber import (
    FiberParams,
    MuNu,
    PumpConfigA,
    coeffs_A,
    joint_mode_nf_B,
    noise_figure_A,
    optimal_idler_B,
    signal_only_nf_B,
    vacuum_idler_nf_B,
)

c = coeffs_A(FiberParams(11.3e-3, 4.53e-11, 300.0), PumpConfigA(0.2, 0.2))
t_opt = (c.theta_nu - c.theta_mu) / 2
phi_opt = (c.theta_mu + c.theta_nu) / 2
print("NF at the optimum:", noise_figure_A(c, t_opt, phi_opt).noise_figure)

# %% [markdown]
# The NF never drops below 1 on a phase grid.  It reaches 1 for any input
# phase once the detection phase is chosen to match.

# %%
t = np.linspace(0, math.pi, 200, endpoint=False)
grid = noise_figure_A(c, t[:, None], t[None, :]).noise_figure
print("grid minimum:", grid.min())

# %% [markdown]
# Two-mode amplifier at high gain: joint detection stays noiseless,
# the empty-idler amplifier tends to 3 dB.

# %%
for mu2 in (10, 100, 1e4):
    cb = MuNu.from_polar(math.sqrt(mu2 - 1), 0.2, -0.4)
    a_s = cmath.rect(0.5, 0.1)
    a_i = optimal_idler_B(cb, a_s).idler_amplitude
    print(
        f"|mu|^2={mu2:>7g}",
        f"joint={joint_mode_nf_B(cb, a_s).noise_figure:.6f}",
        f"signal-only={signal_only_nf_B(cb, a_s, a_i, cb.theta_mu + 0.1).noise_figure:.6f}",
        f"empty idler={vacuum_idler_nf_B(cb, a_s).noise_figure:.6f}",
    )
