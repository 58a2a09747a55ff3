"""
Strictly positive matrices and prescribed block roots
=====================================================

Any nonnegative bisymmetric matrix can be made entrywise positive while its
Perron root grows by a chosen amount and the rest of the spectrum stays put.
Separately, blocks with prescribed Perron roots can be coupled by a rank-S
update whose coupling matrix is solved for.
"""

import numpy as np

from bniep import BisymMatrix, construct_positive_borobia, construct_soto, positify

np.set_printoptions(precision=4, suppress=True)

# A reducible matrix: two disconnected pieces.
Q = BisymMatrix([[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]])
P, _ = positify(Q, 0.5)
print(np.asarray(P))
print("eigenvalues:", np.linalg.eigvalsh(np.asarray(P))[::-1])

# Positive realization straight from a list.
P, cert = construct_positive_borobia([10, 2, -1, -2, -3, -4])
print("min entry", np.asarray(P).min(), "shift", cert.params["epsilon"])

# Two blocks, roots 8 and 6, coupled into roots 9 and 5.
G, H = (3 + 5 ** 0.5) / 2, (3 - 5 ** 0.5) / 2
A2 = [[0, G, H, H, G], [G, 0, G, H, H], [H, G, 0, G, H], [H, H, G, 0, G], [G, H, H, G, 0]]
Q, cert = construct_soto([9, 5, 1, 1, -4, -4, -8],
                         [([9, -8], 8, [[0, 8], [8, 0]]), ([5, 1, 1, -4, -4], 6, A2)])
print("coupling matrix:\n", np.array(cert.params["B"]))
print(np.asarray(Q))
