"""The hole at exp(iH) on a degree-2 K3 surface.

exp(iH) is orthogonal to the root (1, 0, 1), so it is not a central charge
of any stability condition.  We look at it from three sides: the pairing,
the region flags, and the walls on the slice beta = xH, omega = yH.

    python3 demos/hole_at_exp_iH.py [out.svg]
"""

import sys
from fractions import Fraction

from k3stab.charge import tube_point
from k3stab.cli.svg import render_slice
from k3stab.lattice import MukaiVector, degree_2n_k3, exp_class
from k3stab.regions import region_report
from k3stab.tilt import check_stability_function
from k3stab.walls import chamber_sample, default_slice, hole_walls, numerical_walls

X = degree_2n_k3(1)
delta = MukaiVector(1, (0,), 1)          # v(O_X), (delta, delta) = -2

om = exp_class(X, (0,), (1,))
print("Z(delta) at exp(iH):", om.pair(X, delta))

rep = region_report(X, om)
print("flags:", {k: v for k, v in rep.flags().items()})
print("witnesses:", *rep.witnesses)

# doubling omega moves us well inside L(X)
print("in L at exp(2iH):", region_report(X, exp_class(X, (0,), (2,))).in_L)

# along omega = tH the check flips exactly at t = 1
for t in (Fraction(1, 2), Fraction(1), Fraction(11, 10), Fraction(2)):
    chk = check_stability_function(X, tube_point(X, (0,), (t,)))
    print(f"omega = {t} H: stability function {chk.ok}" + (f", witness {chk.witness}" if chk.witness else ""))

window = (Fraction(-1, 2), Fraction(1, 2), Fraction(1, 10), Fraction(3))
slc = default_slice(X, window)
holes = hole_walls(X, slc)
print(f"\n{len(holes)} hole walls on {slc}")
for w in holes:
    pieces = w.restrict_x(Fraction(w.witness.delta[0], w.witness.r), window[2], window[3])
    print(f"  {w.witness}: x = {Fraction(w.witness.delta[0], w.witness.r)}, y in {pieces}")

# walls for the skyscraper class on a tamer window
window = (Fraction(-1, 2), Fraction(1, 2), Fraction(1, 2), Fraction(2))
slc = default_slice(X, window)
walls = hole_walls(X, slc) + numerical_walls(X, slc, MukaiVector(0, (0,), 1))
ch = chamber_sample(walls, window)
print(f"\n{len(walls)} walls for O_x on {slc}; {ch.n_chambers} chambers")
for w in walls:
    print(" ", w)

if len(sys.argv) > 1:
    with open(sys.argv[1], "w", encoding="utf-8") as fh:
        fh.write(render_slice(window, walls, ch, title="walls for O_x, degree-2 K3"))
    print("wrote", sys.argv[1])
