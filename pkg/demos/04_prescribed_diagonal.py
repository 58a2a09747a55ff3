"""
Prescribing the diagonal
========================

The diagonal is given centre outwards as a_0, a_1, ..., a_m and laid out
symmetrically.  Each layer is glued around the previous one.
"""

import numpy as np

from bniep import DiagonalSpec, check_diag_odd, construct_diagonal

np.set_printoptions(precision=4, suppress=True)

Q, _ = construct_diagonal([5, 1, 0], [4, 1])
print(np.asarray(Q))

Q, _ = construct_diagonal([5, 1, -2, -2], [0, 1])
print(np.asarray(Q))

spec = DiagonalSpec([6, 2, 1, 0, -1], [2, 2, 1])
print("witnesses:", check_diag_odd(spec).witness)
Q, cert = construct_diagonal(spec.spectrum, spec.diag_half)
print(np.asarray(Q))
print("diagonal:", np.diag(np.asarray(Q)), "expected", spec.diagonal())
