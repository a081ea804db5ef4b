"""Exact probabilistic model: the symmetric Rademacher walk on the sign cube.

The sample space at horizon N is {-1,+1}^(N+1) with uniform (dyadic) point
masses.  Point m (a bitmask) has coordinate k equal to -1 when bit k of m is
set.  The Walsh functions (products of coordinates over a finite subset) form
an orthonormal basis, so the chaos expansion of any square-integrable
functional is computed exactly by a fast Walsh-Hadamard transform.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .functionals import FockCoefficients
from .subsets import FiniteSubset, TruncatedDomain

RANDOM_FUNCTIONAL_FORMAT = "random-functional/v1"


class OutOfHorizonError(ValueError):
    """A subset or index refers to coordinates beyond the sample space horizon."""


@dataclass(frozen=True)
class SampleSpace:
    """The cube {-1,+1}^(horizon+1) with uniform probability."""

    horizon: int

    def __post_init__(self):
        if not 0 <= self.horizon <= 30:
            raise ValueError(f"horizon must lie in 0..30, got {self.horizon}")

    @property
    def size(self) -> int:
        return 1 << (self.horizon + 1)

    def signs(self, k: int) -> np.ndarray:
        """Coordinate k over all points: +1 / -1 per the bitmask convention."""
        if not 0 <= k <= self.horizon:
            raise OutOfHorizonError(f"coordinate {k} outside 0..{self.horizon}")
        m = np.arange(self.size)
        return (1 - 2 * ((m >> k) & 1)).astype(np.float64)

    def domain(self) -> TruncatedDomain:
        return TruncatedDomain(self.horizon)


@dataclass
class RandomFunctional:
    """A complex function on the sample space, one value per point (ascending
    bitmask order)."""

    space: SampleSpace
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.complex128)
        if self.values.shape != (self.space.size,):
            raise ValueError(
                f"expected {self.space.size} values, got shape {self.values.shape}"
            )

    def to_json_dict(self) -> dict:
        return {
            "format": RANDOM_FUNCTIONAL_FORMAT,
            "horizon": self.space.horizon,
            "values": [{"re": v.real, "im": v.imag} for v in self.values],
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "RandomFunctional":
        if data.get("format") != RANDOM_FUNCTIONAL_FORMAT:
            raise ValueError(f"unexpected format field: {data.get('format')!r}")
        space = SampleSpace(data["horizon"])
        values = np.array(
            [complex(v["re"], v["im"]) for v in data["values"]], dtype=np.complex128
        )
        return cls(space, values)


def constant(space: SampleSpace, value: complex = 1.0) -> RandomFunctional:
    return RandomFunctional(space, np.full(space.size, value, dtype=np.complex128))


def noise(space: SampleSpace, n: int) -> RandomFunctional:
    """The n-th Rademacher coordinate (the normal noise increment)."""
    return RandomFunctional(space, space.signs(n).astype(np.complex128))


def walsh(space: SampleSpace, sigma: FiniteSubset) -> RandomFunctional:
    """Product of coordinates over sigma; the empty set gives the constant 1."""
    if sigma.mask >= space.size:
        raise OutOfHorizonError(
            f"{sigma!r} has elements beyond horizon {space.horizon}"
        )
    values = np.ones(space.size)
    for k in sigma.elements:
        values = values * space.signs(k)
    return RandomFunctional(space, values.astype(np.complex128))


def inner_product(f: RandomFunctional, g: RandomFunctional) -> complex:
    """L2 inner product (conjugate-linear in the first argument) under the
    uniform measure."""
    if f.space != g.space:
        raise ValueError("functionals live on different sample spaces")
    return complex(np.vdot(f.values, g.values)) / f.space.size


def l2_norm(f: RandomFunctional) -> float:
    return float(np.sqrt(inner_product(f, f).real))


def fwht(values: np.ndarray) -> np.ndarray:
    """Unnormalized fast Walsh-Hadamard transform (self-inverse up to 1/size).

    Output index s holds sum over m of (-1)^popcount(s & m) * values[m].
    """
    v = np.array(values, dtype=np.complex128)
    n = v.size
    if n & (n - 1):
        raise ValueError(f"length must be a power of two, got {n}")
    h = 1
    while h < n:
        v = v.reshape(-1, 2 * h)
        top = v[:, :h].copy()
        v[:, :h] = top + v[:, h:]
        v[:, h:] = top - v[:, h:]
        v = v.reshape(n)
        h *= 2
    return v


def chaos_expand(f: RandomFunctional) -> FockCoefficients:
    """Walsh chaos coefficients c(sigma) = <Z_sigma, f> for all sigma within
    the horizon, via the fast transform."""
    coeffs = fwht(f.values) / f.space.size
    table = {
        FiniteSubset(int(m)): complex(coeffs[m]) for m in np.nonzero(coeffs)[0]
    }
    return FockCoefficients(table=table, support_bound=f.space.horizon)


def synthesize(c: FockCoefficients, space: SampleSpace) -> RandomFunctional:
    """Rebuild the pointwise functional from chaos coefficients (inverse of
    chaos_expand)."""
    if c.support_bound is None or c.support_bound > space.horizon:
        raise OutOfHorizonError(
            f"coefficient support bound {c.support_bound} exceeds horizon "
            f"{space.horizon}"
        )
    vector = c.values_on(space.domain())
    return RandomFunctional(space, fwht(vector))


def conditional_expectation(f: RandomFunctional, n: int) -> RandomFunctional:
    """Conditional expectation given the first n+1 coordinates, computed
    spectrally: chaos coefficients outside subsets of {0,..,n} are dropped."""
    if not 0 <= n <= f.space.horizon:
        raise OutOfHorizonError(f"index {n} outside 0..{f.space.horizon}")
    coeffs = fwht(f.values) / f.space.size
    coeffs[1 << (n + 1):] = 0
    return RandomFunctional(f.space, fwht(coeffs))


def conditional_expectation_by_averaging(f: RandomFunctional, n: int) -> RandomFunctional:
    """Independent oracle for conditional_expectation: directly average over
    coordinates n+1..N (rows of the reshaped value vector)."""
    if not 0 <= n <= f.space.horizon:
        raise OutOfHorizonError(f"index {n} outside 0..{f.space.horizon}")
    block = 1 << (n + 1)
    grid = f.values.reshape(-1, block)
    mean = grid.mean(axis=0)
    return RandomFunctional(f.space, np.tile(mean, grid.shape[0]))


def random_functional(space: SampleSpace, seed: int) -> RandomFunctional:
    """Seeded complex Gaussian functional (documented 64-bit seed)."""
    rng = np.random.default_rng(seed)
    values = rng.standard_normal(space.size) + 1j * rng.standard_normal(space.size)
    return RandomFunctional(space, values)


def uniform_probabilities(space: SampleSpace) -> np.ndarray:
    return np.full(space.size, 1.0 / space.size)


def biased_probabilities(space: SampleSpace, minus_prob: float) -> np.ndarray:
    """Product measure with P(coordinate = -1) = minus_prob; a negative
    control for the normal-martingale verifier."""
    if not 0.0 <= minus_prob <= 1.0:
        raise ValueError(f"minus_prob must lie in [0, 1], got {minus_prob}")
    probs = np.ones(space.size)
    m = np.arange(space.size)
    for k in range(space.horizon + 1):
        bit = (m >> k) & 1
        probs *= np.where(bit == 1, minus_prob, 1.0 - minus_prob)
    return probs


@dataclass(frozen=True)
class MartingaleCondition:
    name: str
    max_deviation: float
    passed: bool


@dataclass(frozen=True)
class NormalMartingaleReport:
    conditions: tuple[MartingaleCondition, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.conditions)

    def to_json_dict(self) -> dict:
        return {
            "passed": self.passed,
            "conditions": [
                {"name": c.name, "max_deviation": c.max_deviation, "passed": c.passed}
                for c in self.conditions
            ],
        }


def _conditional_given_prefix(values: np.ndarray, probs: np.ndarray, n_coords: int
                              ) -> np.ndarray:
    """E[values | coordinates 0..n_coords-1], one entry per point (constant on
    each atom).  n_coords = 0 conditions on the trivial sigma-field."""
    block = 1 << n_coords
    v = values.reshape(-1, block)
    p = probs.reshape(-1, block)
    atom_mass = p.sum(axis=0)
    cond = (v * p).sum(axis=0) / atom_mass
    return np.tile(cond, v.shape[0])


def verify_normal_martingale(
    space: SampleSpace,
    probabilities: Optional[np.ndarray] = None,
    tol: float = 0.0,
) -> NormalMartingaleReport:
    """Check the defining normal-martingale identities of the partial-sum walk
    M_n = Z_0 + .. + Z_n by exact enumeration, atom by atom.

    Conditions: E[M_0] = 0, E[M_n | first n coords] = M_{n-1},
    E[M_0^2] = 1, E[M_n^2 | first n coords] = M_{n-1}^2 + 1.
    With the uniform measure every deviation is exactly 0; a biased measure
    (negative control) breaks the mean condition.
    """
    probs = uniform_probabilities(space) if probabilities is None else np.asarray(probabilities, dtype=float)
    if probs.shape != (space.size,):
        raise ValueError("probability vector length mismatch")
    walk = np.cumsum(
        np.stack([space.signs(k) for k in range(space.horizon + 1)]), axis=0
    )

    mean_dev = abs(float(np.dot(walk[0], probs)))  # E[M_0] = 0
    sq_dev = abs(float(np.dot(walk[0] ** 2, probs)) - 1.0)  # E[M_0^2] = 1
    for n in range(1, space.horizon + 1):
        cond_mean = _conditional_given_prefix(walk[n], probs, n)
        cond_sq = _conditional_given_prefix(walk[n] ** 2, probs, n)
        mean_dev = max(mean_dev, float(np.max(np.abs(cond_mean - walk[n - 1]))))
        sq_dev = max(sq_dev, float(np.max(np.abs(cond_sq - walk[n - 1] ** 2 - 1.0))))

    conditions = (
        MartingaleCondition("conditional mean", mean_dev, mean_dev <= tol),
        MartingaleCondition("conditional second moment", sq_dev, sq_dev <= tol),
    )
    return NormalMartingaleReport(conditions)
