"""Phases at large volume: exp(beta + i n omega) as n grows.

Z_n(E)/r(E) - Z_n(A)/r(A) = (nu(A) - nu(E)) + i n (mu(E) - mu(A)), so for
large n the order of phases follows the twisted slopes.  Sheaves of full
support tend to phase 0, curves to 1/2 and points to 1.

    python3 demos/large_volume_limit.py
"""

import cmath
from fractions import Fraction

from k3stab.charge import charge_star, tube_point
from k3stab.largevolume import asymptotic_phase_class, large_volume_gap, phase_order_threshold, twisted_slopes
from k3stab.lattice import MukaiVector, degree_2n_k3

X = degree_2n_k3(1)
p = tube_point(X, (Fraction(-1, 2),), (1,))

classes = {
    "O_X(H)": MukaiVector(1, (1,), 2),
    "ideal of 2 points": MukaiVector(1, (0,), -1),
    "O_C, C in |H|": MukaiVector(0, (1,), 0),
    "O_x": MukaiVector(0, (0,), 1),
}
print(f"{'':20s}", *(f"n={n:<6}" for n in (1, 4, 16, 64)), " limit")
for name, v in classes.items():
    row = []
    for n in (1, 4, 16, 64):
        z = charge_star(X, p.scaled(n), v)
        row.append(f"{cmath.phase(complex(float(z.re), float(z.im))) / cmath.pi:8.4f}")
    print(f"{name:20s}", *row, " ", asymptotic_phase_class(X, v, p))

E, A = MukaiVector(1, (1,), 2), MukaiVector(1, (0,), 0)
sE, sA = twisted_slopes(X, E, p), twisted_slopes(X, A, p)
print(f"\nE = {E}: mu = {sE.mu}, nu = {sE.nu}")
print(f"A = {A}: mu = {sA.mu}, nu = {sA.nu}")
for n in (1, 2, 10):
    print(f"  gap at n = {n}: {large_volume_gap(X, E, A, p, n)}")
print("  phase of A stays below E from n =", phase_order_threshold(X, E, A, p, 100))
