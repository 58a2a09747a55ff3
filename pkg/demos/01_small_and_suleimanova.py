"""
Small orders and lists with one positive entry
==============================================

Orders up to four are settled by a closed-form recipe.  Longer lists whose
only nonnegative entry is the first one are peeled two eigenvalues at a time.
"""

import numpy as np

from bniep import construct_small, construct_suleimanova, verify_realization

np.set_printoptions(precision=4, suppress=True)

# Four eigenvalues where the middle pair has a nonnegative sum: two 2x2
# shells, one nested inside the other.
Q, cert = construct_small([5, 2, -1, -3])
print(np.asarray(Q))
print("route:", " > ".join(cert.kinds()))

# When the middle pair sums below zero the recipe glues a 2x2 around a zero.
Q, cert = construct_small([4, 1, -2, -3])
print(np.asarray(Q))
print("route:", " > ".join(cert.kinds()))

# A list of order nine with a single positive entry.
spec = [10, -0.5, -1, -1, -1.5, -1.5, -1, -2, -1]
Q, cert = construct_suleimanova(spec)
rep = verify_realization(Q, spec)
print(f"order {Q.order}, min entry {rep.min_entry:.3g}, "
      f"spectrum deviation {rep.spectrum_deviation:.2e}")
