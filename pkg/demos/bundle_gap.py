"""vol-hat against mcal along L = xi + t f on P(O + O + O(-1)) over P^1.

For t < 1 the witness L is movable but not nef, and vol-hat exceeds mcal.
Closed forms along this line: mcal = 3t^2 - t^3 and vol-hat = 2 t^{3/2}.
"""

from fractions import Fraction

from poscurves import builtin, ci_membership, positive_product_top
from poscurves.fans import BUNDLE_F, BUNDLE_XI

X = builtin("PBundle")
xi, f = X.basis_divisor(BUNDLE_XI), X.basis_divisor(BUNDLE_F)

print(f"{'t':>8} {'margin':>8} {'mcal':>12} {'volhat':>12} {'rel gap':>10}")
for t in [Fraction(k, 20) for k in range(2, 23, 2)]:
    ci = ci_membership(positive_product_top(xi + f * t))
    m, vh = float(ci.mcal), float(ci.volhat)
    print(f"{str(t):>8} {float(ci.margin):8.3f} {m:12.6f} {vh:12.6f} {(vh - m) / m:10.2e}"
          f"   closed form gap {2 * float(t) ** 1.5 / (3 * float(t) ** 2 - float(t) ** 3) - 1 if t < 1 else 0:.2e}")
