"""The two curve volumes on the blow-up of P^2 at a point.

Rays e1, e2, -e1-e2 and the exceptional ray e1+e2.  H is the pullback of
a line, E the exceptional divisor, l the class of a line and eta the
exceptional curve.
"""

from poscurves import builtin, mcal, volhat, zariski_decompose
from poscurves.positivity import classify_boundary

X = builtin("BlP2")
print(X.summary())

ell = X.curve([1, 1, 1, 0])
res = mcal(ell)
print("mcal(l) =", res.value, "witness", res.witness_divisor, "exact", res.exact)
print("volhat(l) =", volhat(ell))
print("boundary kind of l:", classify_boundary(ell).kind)

# 2f + 3 eta is big but not movable: mcal vanishes, volhat does not
alpha = X.curve([3, 3, 2, -1])
dec = zariski_decompose(alpha)
print("alpha =", alpha)
print("  B =", dec.positive_divisor, " B^{n-1} =", dec.positive_curve, " gamma =", dec.negative)
print("  volhat =", dec.volhat, " (sup form", dec.sup_value, ")")
print("  mcal =", mcal(alpha).value)
