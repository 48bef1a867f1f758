# Transversals to unions of lines, and why the counts just multiply.
#
# Replace each of the four random lines by a union of r_i independent
# random lines and count lines meeting all four unions.  A transversal
# must pick one line from each union, every choice is an independent
# four-lines problem, and expectations add:
#
#     E[count(r1, r2, r3, r4)] = r1 r2 r3 r4 * E[count(1,1,1,1)]
#
# The estimator never uses that identity -- it enumerates candidate
# transversals of each of the prod(r_i) quadruples directly -- so the
# match is a real consistency check of the counting machinery.

from grassdeg.geomlin import RngStream
from grassdeg.incidence import edeg24_transversal_mc, rig_union_of_lines_mc

SAMPLES = 120_000

base = edeg24_transversal_mc(RngStream(77, 0), SAMPLES, workers=4)
print(f"base count, four single lines: {base.value:.4f} +- {base.stderr:.4f}")
print()
print(" union sizes      estimate        +-       / base")
for r in [(2, 1, 1, 1), (2, 2, 1, 1), (3, 2, 1, 1)]:
    est = rig_union_of_lines_mc(r, RngStream(77, sum(r)), SAMPLES, workers=4)
    mult = est.value / base.value
    want = r[0] * r[1] * r[2] * r[3]
    print(f" {str(r):14}   {est.value:8.4f}   {est.stderr:.4f}   "
          f"{mult:5.2f} (exact {want})")
