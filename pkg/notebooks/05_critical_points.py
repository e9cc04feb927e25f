# # Critical couplings of the p-spin ground state
#
# On the x-z meridian the mean-field energy is
# E(Z) = -h sqrt(1 - Z^2) - (Lambda / p) Z^p. For p >= 3 its minimum jumps
# discontinuously, and the spinodal, the ground-state crossing and the
# dynamical transition each occur at their own coupling W = Lambda / h.

import numpy as np

from pspin_ftc import critical_oracle, critical_points, dqpt_point

print("   p   W_spino     W_GS    W_DQPT")
for p in range(2, 11):
    cp = critical_points(p)
    print(f"{p:4d} {cp.W_spino:9.4f} {cp.W_GS:8.4f} {cp.W_DQPT:9.4f}")

# The closed forms agree with a brute-force root search on the
# semiclassical energy.

worst = max(abs(critical_points(p).W_GS - critical_oracle(p, "gs")[1]) for p in range(3, 11))
print(f"largest W_GS discrepancy vs numerical oracle: {worst:.1e}")

# Beyond p = 6 the dynamical transition has no radical form. Bisection
# gives it to 1e-12; the midpoint of its bracket is a cheap estimate.

d = dqpt_point(7)
print(f"p=7: Z_DQPT = {d.Z:.10f}, midpoint estimate off by {d.approx_error:.2e}")
