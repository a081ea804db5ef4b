"""Walkthrough: the weighted norm chain and growth certificates.

Coefficient functionals live in a chain of weighted spaces.  Membership on
the dual side is certified by a growth bound |F(sigma)| <= C * weight^p,
which is fit exactly on a truncated domain and converts into a bound on the
dual norms via the untruncated weighted series.
"""

from martfock import (
    FockCoefficients,
    GrowthCertificate,
    TruncatedDomain,
    dual_norm_bound,
    fit_growth,
    pairing,
    sobolev_norm,
    verify_certificate,
    weight,
)
from martfock.convolution import indicator_functional

domain = TruncatedDomain(8)

print("The norm chain is monotone in the smoothing order p:")
psi = indicator_functional(4)
for p in (0.0, 0.5, 1.0):
    print(f"  ||psi_4||_{p} = {sobolev_norm(psi, p, TruncatedDomain(4)):.6f}")

print("\nPairing a functional against a basis element reads off a coefficient:")
phi = FockCoefficients.from_rule(lambda s: 1.0 / weight(s))
sigma = next(iter(domain))
print(f"  <<phi, Z_empty>> = {pairing(phi, FockCoefficients.basis(sigma), domain)}")

print("\nFitting the growth curve C(p) for a weight-valued functional:")
growing = FockCoefficients.from_rule(lambda s: weight(s))
curve, cert = fit_growth(growing, domain, [0.0, 0.5, 1.0, 2.0])
for p, c in curve.items():
    print(f"  C({p}) = {c:.4f}")
print(f"  selected certificate: scale={cert.scale:.4f}, order={cert.order}")

ok, witness = verify_certificate(growing, cert, domain)
print(f"  certificate verifies on the domain: {ok}")
ok, witness = verify_certificate(growing, GrowthCertificate(1.0, 0.0), domain)
print(f"  the too-small certificate (1, 0) fails, witness {witness.to_json()}")

print("\nA certificate yields an upper bound on the dual norms:")
unit = GrowthCertificate(1.0, 0.0)
for q in (1.0, 1.5, 2.0):
    print(f"  ||.||_-{q} <= {dual_norm_bound(unit, q):.6f}")
