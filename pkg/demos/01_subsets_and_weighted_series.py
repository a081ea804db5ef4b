"""Walkthrough: finite subsets, their weights, and the truncated weighted series.

Every coefficient of a generalized functional is indexed by a finite subset
of the nonnegative integers.  The weight of a subset drives the whole norm
chain, and the weighted series has a closed factorized form we can check
against brute-force enumeration.
"""

import math

from martfock import (
    FiniteSubset,
    TruncatedDomain,
    full_series,
    indicator,
    series_upper_bound,
    weight,
    weighted_series,
    weighted_series_product,
)

print("Subsets are bitmasks; enumeration of all subsets of {0,1,2}:")
for sigma in TruncatedDomain(2):
    print(f"  {str(sigma.to_json()):>10}  weight={weight(sigma):>2}  "
          f"inside {{0}}? {indicator(sigma, 0)}")

print("\nWeight is multiplicative over disjoint unions:")
a = FiniteSubset.from_elements([0, 2])
b = FiniteSubset.from_elements([1, 4])
print(f"  weight({a.to_json()}) * weight({b.to_json()}) = "
      f"{weight(a)} * {weight(b)} = {weight(a.union(b))} = weight(union)")

print("\nTruncated series sum of weight^-2, against its factorized oracle:")
for n in (1, 4, 8, 12):
    s = weighted_series(2, TruncatedDomain(n))
    prod = weighted_series_product(2, n)
    print(f"  N={n:>2}: enumerated={s:.12f}  product={prod:.12f}")

print(f"\nClosed upper bound exp(zeta(2)) = {series_upper_bound(2):.6f}")
print(f"Untruncated series value (infinite product) = {full_series(2):.12f}")
print(f"which matches sinh(pi)/pi = {math.sinh(math.pi) / math.pi:.12f}")
