"""Reproduce the classification of aff(n|1)-invariant bilinear differential
operators on weighted densities: dimensions and explicit bases.

Run:  python demos/03_classification.py
"""
from fractions import Fraction

from superdensity.cohomology import solve_invariance_bi, solve_invariance_lin

print("== bilinear invariants: dimension of the space at shift k")
print("   n=0: k+1   |   n=1: 2[k]+2 (semi-integer), 2k+1 (integer)   |")
print("   n=2: 0 (semi-integer), 6k (integer k >= 2)")
print()
print("  n  | 2k:", " ".join(f"{tk:>3}" for tk in range(10)))
for n in (0, 1, 2):
    dims = []
    for twok in range(10):
        fam = solve_invariance_bi(n, twok)
        dims.append(fam.dimension)
    print(f"  {n}  |    ", " ".join(f"{d:>3}" for d in dims))

print("\n== the n=1 family at k = 3/2 (the four free constants of the theorem)")
fam = solve_invariance_bi(1, 3)
for op in fam.members():
    print(f"  {op.text()}")

print("\n== invariant linear operators (used for coboundaries)")
for n, twos in [(0, 4), (1, 3), (2, 2)]:
    fam = solve_invariance_lin(n, twos)
    ops = ", ".join(op.text() for op in fam.operators()) or "none"
    print(f"  n={n}, shift={Fraction(twos,2)}: dim {fam.dimension}:  {ops}")
print("\n  note the n=2 integer shifts: both d^k and eta1*eta2*d^(k-1) are")
print("  invariant, so the space there is 2-dimensional.")
