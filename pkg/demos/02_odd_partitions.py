"""
Partitioning the negative tail into odd blocks
==============================================

A list with several positive entries can still be realized if its negative
entries split into blocks of odd size whose sums satisfy a short system of
inequalities.  The search walks all set partitions of the tail.
"""

import numpy as np

from bniep import check_borobia_bisym, construct_auto, construct_borobia, evaluate_all
from bniep.certificate import replay

np.set_printoptions(precision=4, suppress=True)

spec = [9, 2, -1, -2, -3, -4]
verdict = check_borobia_bisym(spec, [[-2, -3, -4], [-1]])
print("holds:", verdict.holds, "regime", verdict.regime, verdict.details)

Q, cert = construct_borobia(spec, [[-2, -3, -4], [-1]])
print(np.asarray(Q))
# the 4x4 middle block carries 3, sqrt(7.5) and 4; the corners carry 0.5 and 1.5

# Certificates replay to the same bits.
assert replay(cert) == Q

# With more positive entries than blocks the construction pads with 2x2 shells.
Q, cert = construct_auto([20, 5, 4, 3, 2, -1, -2, -3])
print(cert.kind, "order", Q.order)

# A list that a symmetric matrix can realize but a bisymmetric one cannot.
for v in evaluate_all([6, 6, -2, -3, -3, -4]):
    print(f"{v.name:<15} {v.holds}")
