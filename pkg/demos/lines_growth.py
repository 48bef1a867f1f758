"""How fast does the expected number of real lines grow?

edeg G(2, n+1) counts, on average, the real lines meeting 2(n-1) random
codimension-2 subspaces of RP^n.  The quadrature handles any n; past
n = 16 the numbers overflow a double, so the result switches to a
log-magnitude carrier.  The known large-n asymptotic has ratio -> 1 and
the log grows by 2*log(pi/2) per step; both are visible numerically.
"""

import argparse
import math

from grassdeg.edeg import edeg_lines_quadrature, log_edeg_lines_asymptotic

parser = argparse.ArgumentParser(description=__doc__)
parser.add_argument("--max-n", type=int, default=40, help="largest ambient n")
args = parser.parse_args()

print(" n    log edeg     log asym     ratio quad/asym")
logs = []
for n in (3, 4, 6, 8, 10, 13, 16, 20, 26, 32, args.max_n):
    if n > args.max_n:
        break
    res = edeg_lines_quadrature(n)
    v = res.value
    log_q = v.log_magnitude if hasattr(v, "log_magnitude") else math.log(float(v))
    log_a = log_edeg_lines_asymptotic(n)
    print(f"{n:3d}   {log_q:9.4f}    {log_a:9.4f}       {math.exp(log_q - log_a):8.5f}")
    logs.append((n, log_q))

(n1, l1), (n2, l2) = logs[-2], logs[-1]
step = 2.0 * math.log(math.pi / 2.0)
print(f"\nlog-slope between n={n1} and n={n2}: {(l2 - l1) / (n2 - n1):.5f}")
print(f"asymptotic per-step growth 2*log(pi/2) = {step:.5f}")
