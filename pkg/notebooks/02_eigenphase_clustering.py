# # Eigenphase clustering and level statistics
#
# In a period-q phase the Floquet eigenphases arrange themselves in
# q-tuples spaced by 2 pi / q. Within each tuple the q-th power of U
# becomes nearly degenerate, so the spacing-ratio statistic of U^q
# drops well below its Poisson value.

import numpy as np

from pspin_ftc import (R_POISSON, ModelParams, build_floquet, build_spin_algebra,
                       clustering_degeneracy, eigenphases, spacing_ratio)

N, p, Lam = 128, 3, 0.5
algebra = build_spin_algebra(N)
tol = 0.1 * 2 * np.pi / (N + 1)

# +
for alpha in (2 * np.pi / 3, 2 * np.pi / 3 + 0.3):
    U = build_floquet(ModelParams.from_alpha(p, Lam, alpha), algebra)
    frac = clustering_degeneracy(eigenphases(U), 3, tol)
    stats = spacing_ratio(eigenphases(U, power=3))
    print(f"alpha = {alpha:.3f}: triplet fraction {frac:.3f}, "
          f"rbar/r_POS = {stats.rtilde:.3f} (r_POS = {R_POISSON:.4f})")
# -

# Close to the resonance every eigenphase belongs to a triplet. Detuned by
# 0.3, only accidental triplets remain and the ratio is Poissonian.
