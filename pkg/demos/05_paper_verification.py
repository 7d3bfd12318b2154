"""Check printed cocycles directly: vanishing on aff, the cocycle identity,
and nontriviality -- including the quadratic-weight formulas over Q(sqrt(19)).

Run:  python demos/05_paper_verification.py
"""
from superdensity.reports import (load_claims, verify_claim,
                                  verify_restriction_identity)

claims = load_claims()

print("== a sample of printed 1-cocycles")
for cid in ("C_{0,1}", "C_{l,l+4}", "C_{a1,a1+6}", "U1_{l,l+2}", "U2_{l,l+2}"):
    claim = next(c for c in claims["cocycles"] if c["id"] == cid)
    for res in verify_claim(claim, claims):
        print(f"  {res.claim_id:14s} lambda={res.lam_text:22s} -> {res.status}"
              + (f" {res.details}" if res.details else ""))

print("\n== the restriction identity J_5/2(X_g)(f) = -theta C_(l,l+2)(g,f)")
res = verify_restriction_identity(claims)
print(f"  {res.status}" + (f" {res.details}" if res.details else ""))
