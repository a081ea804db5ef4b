"""Walkthrough: generalized martingales, convergence verdicts, and the
convolution approximation scheme.

A sequence of coefficient functionals is a martingale when each term is the
truncation of the next.  Such a sequence converges (in the distribution
sense) exactly when its coefficients admit a uniform growth certificate, and
convolving any functional with the indicator family produces a convergent
martingale approximating it.
"""

from martfock import (
    FiniteSubset,
    FockCoefficients,
    FunctionalSequence,
    SampleSpace,
    TruncatedDomain,
    all_ones,
    approximation_residual,
    approximation_sequence,
    classical_to_sequence,
    is_generalized_martingale,
    martingale_limit,
    random_functional,
    strong_convergence_test,
    uniform_boundedness,
)

domain = TruncatedDomain(6)

print("Conditional expectations of a random functional form a martingale:")
f = random_functional(SampleSpace(6), seed=7)
seq = classical_to_sequence(f)
ok, _ = is_generalized_martingale(seq, domain, tol=1e-12)
print(f"  predicate passes: {ok}")

print("\nThe indicator family is a martingale whose L2 norms blow up, yet it")
print("converges in the distribution sense (its coefficients stay bounded):")
from martfock import indicator_functional, sobolev_norm
psi_seq = FunctionalSequence([indicator_functional(n) for n in range(7)])
for n in (0, 3, 6):
    print(f"  ||psi_{n}|| = {sobolev_norm(psi_seq[n], 0, TruncatedDomain(n)):.3f}")
verdict = strong_convergence_test(psi_seq, domain, tol=0.0)
print(f"  verdict: {verdict.status.value}, certificate "
      f"(C={verdict.uniform_certificate.scale}, p={verdict.uniform_certificate.order})")
limit = martingale_limit(psi_seq, domain, tol=0.0)
print(f"  limit coefficient at every subset: "
      f"{limit.evaluate(FiniteSubset.from_elements([1, 4]))}")

print("\nAn unbounded family diverges, with a witness subset:")
bad = FunctionalSequence(
    [FockCoefficients({FiniteSubset(0): float(n)}) for n in range(12)]
)
verdict = strong_convergence_test(bad, TruncatedDomain(3))
print(f"  verdict: {verdict.status.value}, witness {verdict.witness[0].to_json()}")

print("\nUniform boundedness certificate for a whole family, with dual bound:")
bound = uniform_boundedness(psi_seq.terms, domain)
print(f"  C={bound.certificate.scale}, p={bound.certificate.order}, "
      f"sup dual norm at q={bound.dual_order}: {bound.dual_bound:.6f}")

print("\nTruncation approximants of the all-ones functional, residual decay:")
ones = all_ones()
approx_seq = approximation_sequence(ones, 6)
ok, _ = is_generalized_martingale(approx_seq, domain, tol=0.0)
print(f"  approximant family is a martingale: {ok}")
for n in range(7):
    r = approximation_residual(ones, n, 1.0, domain)
    print(f"  n={n}: residual {r:.6f}")
