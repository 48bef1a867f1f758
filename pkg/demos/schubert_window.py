# The "meet a subspace approximately" event, exactly and by sampling.
#
# For G(2,4) the measure of planes whose smallest principal angle to a
# fixed plane is below delta has the closed form ratio pi/4 at the
# hard-incidence limit.  The Monte Carlo estimator conditions on a
# finite window eps and rescales; as eps shrinks the estimand converges
# to the limit.  At usable sample sizes the residual bias is far below
# the noise (|bias| < 1e-3 already at eps = 0.04), so what this run
# mostly shows is the estimator's consistency and its growing variance
# as the window tightens.

import math

from grassdeg.geomlin import RngStream
from grassdeg.mc import schubert_ratio_exact, schubert_ratio_mc

exact = schubert_ratio_exact(2, 4)
print(f"exact limiting ratio for (2,4): {exact:.12f}  (= pi/4 = {math.pi/4:.12f})")

print("\n eps      estimate          +-        sigma from exact")
for eps in (0.04, 0.02, 0.01):
    est = schubert_ratio_mc(2, 4, eps=eps, delta=eps, samples=400_000,
                            rng=RngStream(202, int(eps * 1000)), workers=4)
    dev = (est.value - exact) / est.stderr
    print(f" {eps:.2f}   {est.value:.8f}   {est.stderr:.2e}   {dev:+6.2f}")

print("\nBigger (2,5) and (3,6) windows have closed forms 1 and 4/pi;")
print("see the acceptance suite for those comparisons at 2e6 samples.")
