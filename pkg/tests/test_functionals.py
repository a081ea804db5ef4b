import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from martfock.functionals import (
    FockCoefficients,
    GrowthCertificate,
    InsufficientOrderError,
    dual_norm_bound,
    fit_growth,
    pairing,
    sobolev_norm,
    verify_certificate,
)
from martfock.convolution import indicator_functional
from martfock.subsets import FiniteSubset, TruncatedDomain, weight, weight_vector


def table_functional(entries):
    return FockCoefficients({FiniteSubset.from_elements(e): v for e, v in entries})


coeff_tables = st.dictionaries(
    st.integers(min_value=0, max_value=31),  # masks over {0..4}
    st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False),
    max_size=8,
)


class TestFockCoefficients:
    def test_evaluate_table(self):
        phi = table_functional([([], 1.0)])
        assert phi.evaluate(FiniteSubset(0)) == 1.0
        assert phi.evaluate(FiniteSubset.from_elements([3])) == 0

    def test_evaluate_indicator_family(self):
        psi2 = indicator_functional(2)
        assert psi2.evaluate(FiniteSubset.from_elements([0, 1])) == 1.0
        assert psi2.evaluate(FiniteSubset.from_elements([3])) == 0

    def test_rule_memoization_agrees(self):
        calls = []

        def rule(sigma):
            calls.append(sigma)
            return weight(sigma)

        phi = FockCoefficients.from_rule(rule)
        s = FiniteSubset.from_elements([1, 2])
        assert phi.evaluate(s) == 6
        assert phi.evaluate(s) == 6
        assert calls == [s]  # second hit served from the cache

    def test_support_bound_inferred_and_enforced(self):
        phi = table_functional([([0, 4], 1.0)])
        assert phi.support_bound == 4
        with pytest.raises(ValueError):
            FockCoefficients({FiniteSubset.from_elements([5]): 1.0}, support_bound=3)

    def test_values_on_domain(self):
        phi = table_functional([([1], 2.0), ([0, 1], -1j)])
        v = phi.values_on(TruncatedDomain(1))
        assert list(v) == [0, 0, 2.0, -1j]

    def test_restricted_drops_outside(self):
        phi = table_functional([([0], 1.0), ([3], 5.0)])
        r = phi.restricted(TruncatedDomain(1))
        assert r.evaluate(FiniteSubset.from_elements([0])) == 1.0
        assert r.evaluate(FiniteSubset.from_elements([3])) == 0
        assert r.support_bound == 1

    def test_arithmetic(self):
        a = table_functional([([0], 1.0)])
        b = table_functional([([0], 2.0), ([1], 1.0)])
        d = TruncatedDomain(1)
        assert (a + b).equal_on(table_functional([([0], 3.0), ([1], 1.0)]), d)
        assert (b - a).equal_on(table_functional([([0], 1.0), ([1], 1.0)]), d)
        assert (2 * a).evaluate(FiniteSubset(1)) == 2.0

    def test_json_roundtrip(self):
        phi = table_functional([([], 1.5), ([0, 2], 1 - 2j)])
        data = phi.to_json_dict()
        assert data["format"] == "fock-coefficients/v1"
        back = FockCoefficients.from_json_dict(data)
        assert back.equal_on(phi, TruncatedDomain(3))

    def test_json_rejects_duplicates(self):
        data = {
            "format": "fock-coefficients/v1",
            "support_bound": 1,
            "coefficients": [
                {"sigma": [0], "re": 1.0, "im": 0.0},
                {"sigma": [0], "re": 2.0, "im": 0.0},
            ],
        }
        with pytest.raises(ValueError):
            FockCoefficients.from_json_dict(data)


class TestSobolevNorm:
    def test_indicator_family_l2(self):
        # 4 unit coefficients on subsets of {0,1}
        assert sobolev_norm(indicator_functional(1), 0, TruncatedDomain(1)) == pytest.approx(2.0)

    def test_indicator_family_weighted(self):
        # weights over subsets of {0,1} are 1,1,2,2; squares sum to 10
        got = sobolev_norm(indicator_functional(1), 1, TruncatedDomain(1))
        assert got == pytest.approx(math.sqrt(10), rel=1e-12)

    def test_zero(self):
        assert sobolev_norm(FockCoefficients.zero(), 2.5, TruncatedDomain(4)) == 0.0

    def test_basis_normalization(self):
        d = TruncatedDomain(4)
        for s in d:
            for p in (0.0, 0.7, 2.0):
                assert sobolev_norm(FockCoefficients.basis(s), p, d) == pytest.approx(
                    weight(s) ** p, rel=1e-12
                )

    @given(coeff_tables, st.floats(min_value=0, max_value=2),
           st.floats(min_value=0, max_value=2))
    @settings(max_examples=50)
    def test_norm_chain_monotone(self, table, p, q):
        phi = FockCoefficients({FiniteSubset(m): v for m, v in table.items()})
        d = TruncatedDomain(4)
        lo, hi = sorted((p, q))
        assert sobolev_norm(phi, lo, d) <= sobolev_norm(phi, hi, d) * (1 + 1e-12)

    def test_lower_bound_warning(self):
        phi = table_functional([([4], 1.0)])
        with pytest.warns(UserWarning, match="lower bound"):
            sobolev_norm(phi, 0, TruncatedDomain(2))


class TestPairing:
    def test_against_basis_is_evaluation(self):
        phi = table_functional([([0], 2.0), ([1, 2], 3j)])
        d = TruncatedDomain(3)
        for s in d:
            assert pairing(phi, FockCoefficients.basis(s), d) == phi.evaluate(s)

    def test_zero(self):
        assert pairing(FockCoefficients.zero(), indicator_functional(2),
                       TruncatedDomain(2)) == 0

    def test_indicator_self_pairing(self):
        # 4 unit terms on subsets of {0,1}
        psi = indicator_functional(1)
        assert pairing(psi, psi, TruncatedDomain(1)) == pytest.approx(4.0)

    def test_bilinear(self):
        d = TruncatedDomain(2)
        a = table_functional([([0], 1.0), ([1], 2.0)])
        b = table_functional([([1], 1j)])
        xi = indicator_functional(2)
        left = pairing(a + b, xi, d)
        assert left == pytest.approx(pairing(a, xi, d) + pairing(b, xi, d))


class TestDualNormBound:
    def test_known_constant(self):
        got = dual_norm_bound(GrowthCertificate(1.0, 0.0), 1.0)
        assert got == pytest.approx(math.sqrt(math.sinh(math.pi) / math.pi), rel=1e-12)

    def test_zero_scale(self):
        assert dual_norm_bound(GrowthCertificate(0.0, 3.0), 4.0) == 0.0

    def test_linear_in_scale(self):
        one = dual_norm_bound(GrowthCertificate(1.0, 0.0), 1.0)
        assert dual_norm_bound(GrowthCertificate(2.0, 0.0), 1.0) == pytest.approx(2 * one)

    def test_order_guard(self):
        with pytest.raises(InsufficientOrderError):
            dual_norm_bound(GrowthCertificate(1.0, 0.5), 1.0)

    def test_dominates_truncated_dual_norm(self):
        # any functional certified at (C, p) has truncated -q norm below the bound
        rng = np.random.default_rng(7)
        d = TruncatedDomain(8)
        w = weight_vector(d)
        for p in (0.0, 1.0):
            values = rng.uniform(0, 1, d.size) * w ** p
            phi = FockCoefficients(
                {FiniteSubset(int(m)): complex(values[m]) for m in range(d.size)}
            )
            for q in (p + 0.75, p + 2.0):
                bound = dual_norm_bound(GrowthCertificate(1.0, p), q)
                assert sobolev_norm(phi, -q, d) <= bound


class TestGrowthCertificates:
    def test_indicator_family_fit(self):
        curve, cert = fit_growth(indicator_functional(3), TruncatedDomain(4), [0, 1, 2])
        assert curve[0] == pytest.approx(1.0)
        assert cert is not None
        assert (cert.order, cert.scale) == (0, 1.0)

    def test_zero_functional(self):
        curve, _ = fit_growth(FockCoefficients.zero(), TruncatedDomain(3), [0, 1])
        assert curve == {0: 0.0, 1: 0.0}

    def test_weight_valued_functional(self):
        d = TruncatedDomain(4)
        phi = FockCoefficients.from_rule(lambda s: weight(s), support_bound=None)
        curve, _ = fit_growth(phi, d, [0, 1])
        assert curve[1] == pytest.approx(1.0)
        assert curve[0] == pytest.approx(float(np.max(weight_vector(d))))

    def test_empty_grid(self):
        with pytest.raises(ValueError):
            fit_growth(FockCoefficients.zero(), TruncatedDomain(2), [])

    def test_verify_accepts_fitted(self):
        d = TruncatedDomain(4)
        rng = np.random.default_rng(3)
        phi = FockCoefficients(
            {FiniteSubset(int(m)): complex(v)
             for m, v in enumerate(rng.standard_normal(d.size))}
        )
        curve, _ = fit_growth(phi, d, [0.0, 0.5, 1.0])
        for p, c in curve.items():
            ok, witness = verify_certificate(phi, GrowthCertificate(c, p), d)
            assert ok and witness is None
            if c > 0:
                bad, witness = verify_certificate(
                    phi, GrowthCertificate(c * (1 - 1e-6), p), d
                )
                assert not bad and witness is not None

    def test_verify_rejects_with_witness(self):
        d = TruncatedDomain(2)
        phi = FockCoefficients.from_rule(lambda s: weight(s), support_bound=None)
        ok, witness = verify_certificate(phi, GrowthCertificate(1.0, 0.0), d)
        assert not ok
        assert weight(witness) > 1

    def test_huge_certificate_trivially_holds(self):
        d = TruncatedDomain(3)
        phi = FockCoefficients.from_rule(lambda s: weight(s) ** 2, support_bound=None)
        ok, _ = verify_certificate(phi, GrowthCertificate(1e12, 10.0), d)
        assert ok

    def test_invalid_certificate_fields(self):
        with pytest.raises(ValueError):
            GrowthCertificate(-1.0, 0.0)
        with pytest.raises(ValueError):
            GrowthCertificate(1.0, -0.5)
