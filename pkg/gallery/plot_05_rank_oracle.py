"""
Checking a structural verdict numerically
==========================================

A structural "observable" must hold for every realization. Sampling
random realizations and running a Kalman rank test is a cheap sanity
check; it can catch a wrong positive verdict, never confirm a negative.
"""

import numpy as np

from structobs import RealizationSampler, cross_validate, kalman_rank_observable, sample_realization
from structobs.verify import pbh_observable
from structobs.colorability import output_pattern
from structobs.fixtures import triangle_network
from structobs.wdn import derive_wdn_pattern

A = derive_wdn_pattern(triangle_network())
for sensors in ([3, 5], [3, 6], [7]):
    report = cross_validate(A, output_pattern(8, sensors), trials=200, s=RealizationSampler(seed=1))
    print([s + 1 for s in sensors], report)

###############################################################################
# The rank test and the eigenvector test agree on a single realization.

s = RealizationSampler(seed=5)
Ar = sample_realization(A, s)
C = np.eye(8)[[3, 5]]
print(kalman_rank_observable(Ar, C), pbh_observable(Ar, C))
