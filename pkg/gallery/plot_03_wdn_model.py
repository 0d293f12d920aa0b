"""
From a pipe network to a pattern matrix
========================================

The triangle network has three junctions, one tank and four pipes. Its
linearized hydraulic model always has the same zero/nonzero layout,
whatever the pipe parameters.
"""

import numpy as np

from structobs import derive_wdn_pattern, linearize, pattern_membership
from structobs.fixtures import triangle_network
from structobs.wdn import OperatingPoint, equilibrium_params, random_params, rk4

net = triangle_network()
A = derive_wdn_pattern(net)
print(net.state_labels())
print(A.to_text())

###############################################################################
# Any positive operating point and parameter draw gives a Jacobian in
# the pattern class.

rng = np.random.default_rng(0)
for _ in range(5):
    p = random_params(net, rng)
    op = OperatingPoint(rng.uniform(0.1, 5, net.m), rng.uniform(0.5, 50, net.n))
    J = linearize(net.with_params(p), op)
    print(pattern_membership(J, A), np.round(np.diag(J)[:4], 3))

###############################################################################
# Resistances and demands can be chosen so that a given operating point is
# an equilibrium. With the head term entering the flow equation with a plus
# sign, such a point needs heads rising along every pipe, and it is not
# stable: a small kick grows. Only the zero/nonzero layout of the
# Jacobian matters for observability, so this does not affect the analysis.

op = OperatingPoint(q=[0.5, 1.0, 0.8, 0.3], h=[3.0, 2.0, 1.0, 4.0])
eq = net.with_params(equilibrium_params(net, op, D=[0.2, 0.1, 0.3, 0.0], L=[1, 2, 1.5, 1], Cl=[1] * 4, Cn=[0.5, 0.5, 0.5, 5]))
print(np.abs(rk4(eq, op.x, 1.0)[1] - op.x).max())
print(np.sort(np.linalg.eigvals(linearize(eq, op)).real).round(3))
t, X = rk4(eq, op.x * 1.01, 2.0, dt=1e-3)
print(np.abs(X[::500] - op.x).max(axis=1).round(4))
