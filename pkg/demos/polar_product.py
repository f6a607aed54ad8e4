"""Polar transform of f(x) = x1 x2 on the quadrant: Hf(w) = 4 w1 w2."""

import numpy as np

from poscurves.cones import ConeDescription
from poscurves.polar import ConcaveConeFunction, formal_zariski, polar_solve

quadrant = ConeDescription.from_generators([[1, 0], [0, 1]], 2)
f = ConcaveConeFunction(quadrant, 2.0, lambda x: float(x[0] * x[1]), lambda x: np.array([x[1], x[0]]))

for w in ([1, 1], [2, 3], [0.5, 7]):
    res = polar_solve(f, w, tol=1e-9)
    print(f"w={w}: Hf={res.value:.9f} bracket=[{res.lower_bound:.9f}, {res.value:.9f}] "
          f"closed form {4 * w[0] * w[1]}, minimizer direction {res.argmin / np.linalg.norm(res.argmin)}")

p, n = formal_zariski(f, [2, 3])
print("formal Zariski of (2, 3): p =", p, "n =", n)
