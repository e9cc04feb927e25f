# # Mean-field phase diagram from the G measure
#
# The classical map is iterated from a Fibonacci grid of initial points on
# the sphere. G is the power of the averaged response at 2 pi / q, kept
# only when that bin dominates the spectrum. This coarse 12 x 16 version
# runs in under a minute; the full 32 x 32 grid is an acceptance test.

import numpy as np

from pspin_ftc.config import AnalysisSection, DynamicsSection, ModelSection, RunConfig, SweepSection
from pspin_ftc.sweep import run_sweep

cfg = RunConfig(
    model=ModelSection(p=4, Lambda=0.7),
    N=2,
    dynamics=DynamicsSection(T_max=1024),
    analysis=AnalysisSection(q=2, grid_points=1000),
    sweep=SweepSection(diagnostic="gmeasure", lambda_min=0.25, lambda_max=3.0, lambda_count=12,
                       alpha_min=0.3 * np.pi, alpha_max=1.05 * np.pi, alpha_count=16),
).validate()

# +
maps = {}
for q in (2, 4):
    cfg.analysis.q = q
    maps[q] = run_sweep(cfg).values("G")
# -

# Text rendering: rows are Lambda (top = largest), columns alpha.
# '2' marks the period-2 lobe, '4' the period-4 lobe.

lambdas = np.linspace(0.25, 3.0, 12)
for i in reversed(range(len(lambdas))):
    row = "".join("2" if maps[2][i, j] > 0.05 else "4" if maps[4][i, j] > 0.05 else "."
                  for j in range(16))
    print(f"Lambda={lambdas[i]:4.2f} {row}")
print("alpha/pi from 0.30 to 1.05")
