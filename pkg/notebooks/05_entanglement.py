# ---
# jupyter:
#   jupytext:
#     formats: py:percent
#     text_representation:
#       extension: .py
#       format_name: percent
# ---

# %% [markdown]
# # Two-mode squeezing and inseparability
#
# Covariance of the single-pump amplifier output and the Duan sum
# against pump power.

# %%
import numpy as np

from psafiber import FiberParams, MuNu, PumpConfigB, coeffs_B
from psafiber.noise import duan_lhs, output_covariance, rotated_pm_change, symplectic_eigenvalues

fiber = FiberParams(11.3e-3, -4.54e-11, 300.0)
c = coeffs_B(fiber, PumpConfigB(0.23))
cov = output_covariance(c)
print(np.round(cov, 6))
print("symplectic eigenvalues:", symplectic_eigenvalues(cov))
t = rotated_pm_change(c)
print(np.round(t @ cov @ t.T, 6))

# %%
for p in np.linspace(0, 0.5, 6):
    cp = MuNu(1, 0) if p == 0 else coeffs_B(fiber, PumpConfigB(p))
    print(f"P2={p:.2f} W  Duan sum={duan_lhs(cp):.6f}")
