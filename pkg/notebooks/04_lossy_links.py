# ---
# jupyter:
#   jupytext:
#     formats: py:percent
#     text_representation:
#       extension: .py
#       format_name: percent
# ---

# %% [markdown]
# # Loss before or after the amplifier

# %%
import math

from psafiber import FiberParams, PumpConfigA, coeffs_A
from psafiber.loss import LinkLayout, LossChannel, layout_ratio, nf_grid, nf_optimum

c = coeffs_A(FiberParams(11.3e-3, 4.53e-11, 300.0), PumpConfigA(0.2, 0.2))
loss = LossChannel(math.sqrt(0.5))
for order in ("AL", "LA"):
    layout = LinkLayout(order, "A")
    _, _, nf = nf_grid(c, layout, loss, 200, 200)
    print(order, "formula", nf_optimum(c, layout, loss), "grid", nf.min())
print("AL / LA =", layout_ratio(c, loss))

# %% [markdown]
# Putting the amplifier first wins whenever there is gain.

# %%
for t2 in (0.9, 0.5, 0.1):
    print(t2, layout_ratio(c, LossChannel(math.sqrt(t2))))
