"""Weighted densities, the action L^lambda_{X_F} = X_F + lambda F', and
differential operators in eta-normal form -- with a symbolic weight.

Run:  python demos/02_densities_and_operators.py
"""
from superdensity.scalars import ParamPoly
from superdensity.superpoly import SuperPoly, parse_superpoly
from superdensity.densities import Density, act, split
from superdensity.diffop import (LinDiffOp, act_on_lin, apply_lin,
                                 lift_generator, normal_order, phi_decompose)

L = ParamPoly.var(("l",), "l")
C = lambda q: ParamPoly.const(("l",), q)

print("== the density action, weight symbolic")
d = Density(parse_superpoly("t1", 1), L)
out = act(L, SuperPoly.x(1), d)
print(f"  L^l_(X_x)(t1 a^l) = {out.text()}")

print("\n== generator lifts in normal form")
for txt in ("1", "x", "t1"):
    h = parse_superpoly(txt, 1)
    print(f"  L_(X_{txt}) = {lift_generator(h, L)}")

print("\n== normal ordering rewrites")
for word in (["e1", "e1"], ["dx", "x"], ["e1", "t1"], ["e1", "x"]):
    print(f"  {'*'.join(word)} -> {normal_order(word, 1)}")

print("\n== the operator module action (Eq. 8)")
a = LinDiffOp.word(0, k=2)      # d^2 between weights l and l+2
res = act_on_lin(SuperPoly.x(0), a, L, L + C(2))
print(f"  X_x . d^2 (shift 2) = {res.text() or 0}   (invariant)")
res = act_on_lin(SuperPoly.x(0), a, L, L)
print(f"  X_x . d^2 (shift 0) = {res}")

print("\n== splitting a density along theta_n")
d = Density(parse_superpoly("x^2 + x*t1 + t2 + t1*t2", 2), L)
d1, d2 = split(d)
print(f"  F     = {d.text()}")
print(f"  F1    = {d1.text()}")
print(f"  F2    = {d2.text()}")

print("\n== block decomposition of an operator along theta_n")
a = LinDiffOp.word(2, eps=2)    # eta_2
blocks = phi_decompose(a)
names = ["(l, m)", "(l+1/2, m+1/2)", "Pi(l, m+1/2)", "Pi(l+1/2, m)"]
for nm, b in zip(names, blocks):
    print(f"  eta_2 block {nm}: {b.text() or 0}")
