# ---
# jupyter:
#   jupytext:
#     formats: py:percent
#     text_representation:
#       extension: .py
#       format_name: percent
# ---

# %% [markdown]
# # Gain of a two-pump fiber amplifier
#
# Closed-form propagator, phase-dependent gain and the rotation/squeeze
# factors of the single-mode map.

# %%
import math

import numpy as np

from psafiber import FiberParams, PumpConfigA, coeffs_A, decompose, gain_extrema, power_gain_A

fiber = FiberParams(gamma=11.3e-3, delta_beta=4.53e-11, length=300.0)
pumps = PumpConfigA(0.2, 0.2)
c = coeffs_A(fiber, pumps)
print("mu =", c.mu)
print("nu =", c.nu)
print("G_max, G_min =", gain_extrema(c))

# %% [markdown]
# Gain against the input signal phase. The extrema sit a quarter period apart.

# %%
thetas = np.linspace(0, math.pi, 9)
for t in thetas:
    print(f"{t:6.3f}  {power_gain_A(c, t):9.4f}")

# %% [markdown]
# Rotation, squeeze, rotation.

# %%
f = decompose(c)
print("theta =", math.degrees(f.theta), "deg")
print("phi   =", math.degrees(f.phi), "deg")
print("squeeze =", f.s_plus, f.s_minus)
