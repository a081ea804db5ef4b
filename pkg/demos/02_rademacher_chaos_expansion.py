"""Walkthrough: the Rademacher sample space and exact chaos expansions.

The sign cube carries an exactly-computable normal martingale.  Walsh
products of coordinates form an orthonormal basis, so every square-integrable
functional has a chaos expansion computed by a fast Walsh-Hadamard transform,
and conditional expectations become coefficient truncations.
"""

import numpy as np

from martfock import (
    FiniteSubset,
    SampleSpace,
    biased_probabilities,
    chaos_expand,
    conditional_expectation,
    conditional_expectation_by_averaging,
    inner_product,
    random_functional,
    synthesize,
    verify_normal_martingale,
    walsh,
)

sp = SampleSpace(6)
print(f"Sample space: {sp.size} sign vectors, uniform mass 2^-{sp.horizon + 1}")

print("\nWalsh functions are exactly orthonormal:")
s = FiniteSubset.from_elements([0, 2])
t = FiniteSubset.from_elements([1])
print(f"  <Z_{s.to_json()}, Z_{s.to_json()}> = {inner_product(walsh(sp, s), walsh(sp, s))}")
print(f"  <Z_{s.to_json()}, Z_{t.to_json()}> = {inner_product(walsh(sp, s), walsh(sp, t))}")

print("\nChaos expansion round-trips exactly (up to float rounding):")
f = random_functional(sp, seed=2024)
c = chaos_expand(f)
back = synthesize(c, sp)
print(f"  max pointwise error: {np.max(np.abs(back.values - f.values)):.2e}")
parseval = sum(abs(v) ** 2 for _, v in c.table_items())
print(f"  Parseval: sum |c|^2 = {parseval:.12f} vs "
      f"<f,f> = {inner_product(f, f).real:.12f}")

print("\nConditional expectation: spectral truncation vs direct averaging:")
for n in (0, 2, 4):
    a = conditional_expectation(f, n)
    b = conditional_expectation_by_averaging(f, n)
    print(f"  n={n}: routes agree to {np.max(np.abs(a.values - b.values)):.2e}")

print("\nThe partial-sum walk satisfies the normal-martingale identities exactly:")
report = verify_normal_martingale(sp)
for cond in report.conditions:
    print(f"  {cond.name}: deviation {cond.max_deviation}")

print("\nA biased coin breaks the mean identity (negative control):")
bad = verify_normal_martingale(sp, biased_probabilities(sp, 0.7))
print(f"  conditional mean deviation: {bad.conditions[0].max_deviation:.3f}")
