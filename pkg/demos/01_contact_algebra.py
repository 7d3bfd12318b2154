"""Walk through the contact-algebra layer: Grassmann polynomials, the
derivations eta_i, contact fields X_F and the contact bracket.

Run:  python demos/01_contact_algebra.py
"""
from superdensity.superpoly import SuperPoly, parse_superpoly
from superdensity.contact import ContactField, contact_bracket, field_apply

n = 2
x = SuperPoly.x(n)
t1 = SuperPoly.theta(n, 1)
t2 = SuperPoly.theta(n, 2)

print("== supercommutative arithmetic")
p = parse_superpoly("x^2 + 3/2*t1 - t1*t2", n)
q = parse_superpoly("x*t2", n)
print(f"  p       = {p}")
print(f"  q       = {q}")
print(f"  p*q     = {p * q}")
print(f"  q*p     = {q * p}        (Koszul signs at work)")

print("\n== the odd derivations eta_i = d/dtheta_i - theta_i d/dx")
print(f"  eta_1(x)        = {x.eta(1)}")
print(f"  eta_1(t1)       = {t1.eta(1)}")
print(f"  eta_1(eta_1(p)) = {p.eta(1).eta(1)}   vs  -p' = {-p.d_x()}")

print("\n== contact fields and the bracket")
for f_txt, g_txt in [("1", "x"), ("t1", "t1"), ("x", "t1"), ("x^2*t1", "x*t2")]:
    f = parse_superpoly(f_txt, n)
    g = parse_superpoly(g_txt, n)
    print(f"  {{{f_txt}, {g_txt}}} = {contact_bracket(f, g)}")

print("\n== X_F as an operator")
f = parse_superpoly("x^2", n)
g = parse_superpoly("x*t1*t2", n)
print(f"  X_(x^2)({g}) = {field_apply(ContactField(f), g)}")

print("\n== the homomorphism [X_F, X_G] = X_{F,G} on a sample")
f, g, h = t1, x * t2, parse_superpoly("x^3*t2", n)
lhs = field_apply(ContactField(contact_bracket(f, g)), h)
t_a = field_apply(ContactField(f), field_apply(ContactField(g), h))
t_b = field_apply(ContactField(g), field_apply(ContactField(f), h))
sign = -1 if (f.parity() and g.parity()) else 1
rhs = t_a - (t_b if sign > 0 else -t_b)
print(f"  X_{{f,g}}(h) = {lhs}")
print(f"  [X_f,X_g]h  = {rhs}")
assert lhs == rhs
