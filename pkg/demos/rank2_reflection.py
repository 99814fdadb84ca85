"""Crossing omega.S = 0 on an elliptic K3 with a section.

When omega leaves the ample cone through S-perp, the spherical twist by
O_S(k) brings it back.  On the lattice this is the reflection in (0, S, k),
with k the nearest integer to beta.S.

    python3 demos/rank2_reflection.py
"""

from fractions import Fraction

from k3stab.charge import tube_point
from k3stab.isometries import apply_word_complex, classify_boundary, reduce_to_ample_chamber, word_matrix
from k3stab.lattice import MukaiVector, elliptic_k3_with_section
from k3stab.regions import is_ample

X = elliptic_k3_with_section()
S = (1, 0)

p = tube_point(X, (Fraction(1, 3), 0), (2, 3))
print("start:", p, " omega.S =", X.dot(p.omega, S), " ample:", is_ample(X, p.omega))

q, word = reduce_to_ample_chamber(X, p)
print("after:", q, " omega.S =", X.dot(q.omega, S), " ample:", is_ample(X, q.omega))
print("word:", word)
print("exact:", apply_word_complex(word, p.exp(X)) == q.exp(X))
print("matrix:")
for row in word_matrix(word):
    print("   ", *(f"{c:>3}" for c in row))

# on the wall itself: omega.S = 0 and Z(0, S, 0) = beta.S is real and negative
b = tube_point(X, (Fraction(1, 3), 0), (1, 2))
d = classify_boundary(X, b, MukaiVector(0, S, 0))
print("\nboundary at", b)
print("  type:", [t.value for t in d.wall_type], " curve:", d.curve, " n:", d.n, " k:", d.k)
print("  deck move:", d.deck_move, " trivial on the lattice:", d.acts_trivially_on_lattice)

# an A-type hole for contrast: omega = S/4 + F is ample with omega^2 = 3/8 < 2,
# and at beta = 0 the charge of O_X is (omega^2 - 2)/2, real and negative
h = tube_point(X, (0, 0), (Fraction(1, 4), 1))
a = classify_boundary(X, h, MukaiVector(1, (0, 0), 1))
print("\nboundary at", h, " ample:", is_ample(X, h.omega))
print("  type:", [t.value for t in a.wall_type], " deck move:", a.deck_move)
print("  trivial on the lattice:", a.acts_trivially_on_lattice)
