"""Tests for entropy functionals and the closed-form bounds.

Expected values are frozen from independent hand/direct computation:
S(diag(3/4, 1/4)) = -(3/4) log2(3/4) - (1/4) log2(1/4) = 0.8112781244591328.
"""

import math

import numpy as np
import pytest

from qmi import (
    BoundInapplicableError,
    DimensionMismatchError,
    EntropyValue,
    NegativeCMIError,
    cond_entropy_continuity_bound,
    conditional_entropy,
    conditional_mutual_information,
    entropy_continuity_bound,
    eta,
    haar_pure,
    induced_mixed,
    mixture_cond_entropy_bound,
    stream,
    support_span_dim,
    trace_distance,
    validate_density,
    von_neumann_entropy,
    with_dims,
)
from qmi.entropy import _clamp_nonneg
from qmi.stateio import bell, classical_corr, maxmix

S_THREE_QUARTERS = 0.8112781244591328


def random_bipartite(d1, d2, key, ancilla=None):
    d = d1 * d2
    return with_dims(induced_mixed(d, ancilla or d, key), (d1, d2))


class TestEta:
    @pytest.mark.parametrize("x", [0.0, 1.0])
    def test_endpoints_exact_zero(self, x):
        assert eta(x) == 0.0
        assert eta(x, "nats") == 0.0

    def test_half_in_bits(self):
        assert eta(0.5) == pytest.approx(0.5, abs=1e-15)

    def test_half_in_nats(self):
        assert eta(0.5, "nats") == pytest.approx(0.34657359027997264, abs=1e-15)

    @pytest.mark.parametrize("x", [-0.1, 1.1, 2.0])
    def test_domain_error(self, x):
        with pytest.raises(ValueError):
            eta(x)

    def test_bad_base(self):
        with pytest.raises(ValueError):
            eta(0.5, "trits")


class TestEntropyValue:
    def test_conversion_roundtrip(self):
        ev = EntropyValue(1.25, "bits")
        assert ev.to("nats").value == pytest.approx(1.25 * math.log(2), abs=1e-12)
        assert ev.to("nats").to("bits").value == pytest.approx(1.25, abs=1e-12)

    def test_nats_is_bits_times_ln2(self):
        for i in range(10):
            rho = induced_mixed(4, 4, stream(12, i))
            b = von_neumann_entropy(rho, "bits")
            n = von_neumann_entropy(rho, "nats")
            assert n.value == pytest.approx(b.value * math.log(2), abs=1e-12)

    def test_float_protocol(self):
        assert float(EntropyValue(0.5, "bits")) == 0.5


class TestVonNeumannEntropy:
    def test_pure_state_zero(self):
        for i in range(5):
            assert float(von_neumann_entropy(haar_pure(4, stream(3, i)))) <= 1e-8

    @pytest.mark.parametrize("d", [2, 3, 4, 8])
    def test_maximally_mixed(self, d):
        assert float(von_neumann_entropy(maxmix(d))) == pytest.approx(
            math.log2(d), abs=1e-12
        )

    def test_three_quarters_spectrum(self):
        rho = validate_density(np.diag([0.75, 0.25]), [2])
        assert float(von_neumann_entropy(rho)) == pytest.approx(
            S_THREE_QUARTERS, abs=1e-12
        )


class TestConditionalEntropy:
    def test_bell_is_minus_one_bit(self):
        assert float(conditional_entropy(bell())) == pytest.approx(-1.0, abs=1e-9)

    def test_product_state_drops_second_factor(self):
        rho = induced_mixed(2, 2, 21)
        tau = induced_mixed(3, 3, 22)
        prod = validate_density(np.kron(rho.mat, tau.mat), (2, 3))
        assert float(conditional_entropy(prod)) == pytest.approx(
            float(von_neumann_entropy(rho)), abs=1e-9
        )

    def test_maximally_mixed_two_qubits(self):
        assert float(conditional_entropy(with_dims(maxmix(4), (2, 2)))) == pytest.approx(
            1.0, abs=1e-12
        )

    def test_wrong_arity(self):
        with pytest.raises(DimensionMismatchError):
            conditional_entropy(maxmix(4))

    def test_range_property(self):
        # -log d1 <= S(1|2) <= log d1
        for i in range(50):
            rho = random_bipartite(2, 3, stream(31, i))
            c = float(conditional_entropy(rho))
            assert -1.0 - 1e-9 <= c <= 1.0 + 1e-9


class TestConditionalMutualInformation:
    def test_conditioning_on_independent_system(self):
        from qmi import partial_trace

        rho12 = random_bipartite(2, 2, 41)
        tau = induced_mixed(2, 2, 42)
        rho123 = validate_density(np.kron(rho12.mat, tau.mat), (2, 2, 2))
        # I(1;2|3) collapses to the plain mutual information S(1)+S(2)-S(12)
        expected = (
            float(von_neumann_entropy(partial_trace(rho12, (0,))))
            + float(von_neumann_entropy(partial_trace(rho12, (1,))))
            - float(von_neumann_entropy(rho12))
        )
        assert conditional_mutual_information(rho123) == pytest.approx(
            expected, abs=1e-9
        )

    def test_bell_with_spectator(self):
        tau = induced_mixed(2, 2, 43)
        rho = validate_density(np.kron(bell().mat, tau.mat), (2, 2, 2))
        assert conditional_mutual_information(rho) == pytest.approx(2.0, abs=1e-9)

    def test_ghz_is_one_bit(self):
        from qmi.stateio import ghz

        assert conditional_mutual_information(ghz()) == pytest.approx(1.0, abs=1e-9)

    def test_wrong_arity(self):
        with pytest.raises(DimensionMismatchError):
            conditional_mutual_information(bell())

    def test_nonnegative_on_random_states(self):
        # strong subadditivity, tested not proved
        for i in range(100):
            rho = with_dims(induced_mixed(8, 8, stream(51, i)), (2, 2, 2))
            assert conditional_mutual_information(rho) >= 0.0

    def test_clamp_guard(self):
        assert _clamp_nonneg(-5e-10, 1e-9) == 0.0
        assert _clamp_nonneg(0.3, 1e-9) == 0.3
        with pytest.raises(NegativeCMIError):
            _clamp_nonneg(-2e-9, 1e-9)


class TestTraceDistance:
    def test_self_distance_zero(self):
        rho = induced_mixed(3, 3, 61)
        assert trace_distance(rho, rho) == 0.0

    def test_orthogonal_pure_states(self):
        a = validate_density(np.diag([1.0, 0.0]), [2])
        b = validate_density(np.diag([0.0, 1.0]), [2])
        assert trace_distance(a, b) == pytest.approx(2.0, abs=1e-12)

    def test_diagonal_pair(self):
        a = validate_density(np.diag([1.0, 0.0]), [2])
        b = validate_density(np.diag([0.75, 0.25]), [2])
        assert trace_distance(a, b) == pytest.approx(0.5, abs=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            trace_distance(maxmix(2), maxmix(3))


class TestBounds:
    def test_zero_epsilon_is_zero(self):
        for d in (2, 3, 17):
            assert cond_entropy_continuity_bound(0.0, d) == 0.0
            assert mixture_cond_entropy_bound(0.0, d) == 0.0
            assert entropy_continuity_bound(0.0, d) == 0.0

    def test_values_at_half_and_one(self):
        # 4*0.5*1 + 2*eta(0.5) + 2*eta(0.5) = 2 + 1 + 1
        assert cond_entropy_continuity_bound(0.5, 2) == pytest.approx(4.0, abs=1e-12)
        assert cond_entropy_continuity_bound(1.0, 2) == pytest.approx(4.0, abs=1e-12)
        assert mixture_cond_entropy_bound(0.5, 2) == pytest.approx(2.0, abs=1e-12)
        assert entropy_continuity_bound(0.5, 2) == pytest.approx(2.0, abs=1e-12)
        assert entropy_continuity_bound(1.0, 4) == pytest.approx(4.0, abs=1e-12)

    def test_frozen_nontrivial_values(self):
        assert cond_entropy_continuity_bound(0.3, 3) == pytest.approx(
            3.664536799326773, abs=1e-12
        )
        assert mixture_cond_entropy_bound(0.3, 3) == pytest.approx(
            1.8322683996633864, abs=1e-12
        )
        assert entropy_continuity_bound(0.3, 4) == pytest.approx(
            2.0812908992306927, abs=1e-12
        )

    def test_doubling_identity(self):
        # the full bound is exactly twice the mixture bound
        for eps in np.linspace(0.0, 1.0, 21):
            for d1 in (2, 3, 5):
                assert 2.0 * mixture_cond_entropy_bound(eps, d1) == pytest.approx(
                    cond_entropy_continuity_bound(eps, d1), abs=1e-12
                )

    @pytest.mark.parametrize("eps", [-0.1, 1.0000001, 1.5, 2.0])
    def test_out_of_regime_carries_fallback(self, eps):
        with pytest.raises(BoundInapplicableError) as err:
            cond_entropy_continuity_bound(eps, 4)
        assert err.value.fallback == pytest.approx(2.0 * math.log2(4))
        with pytest.raises(BoundInapplicableError):
            mixture_cond_entropy_bound(eps, 4)
        with pytest.raises(BoundInapplicableError) as err2:
            entropy_continuity_bound(eps, 4)
        assert err2.value.fallback == pytest.approx(math.log2(4))

    def test_nats_consistency(self):
        v_bits = cond_entropy_continuity_bound(0.37, 5, "bits")
        v_nats = cond_entropy_continuity_bound(0.37, 5, "nats")
        assert v_nats == pytest.approx(v_bits * math.log(2), abs=1e-12)


class TestConcavityAndMixing:
    """Interleaved entropy inequalities used by the lemma chain, checked
    directly (independently of the chain reporter)."""

    def test_conditional_entropy_concave(self):
        for i in range(40):
            rng = stream(71, i)
            rho = random_bipartite(2, 2, rng)
            tau = random_bipartite(2, 2, rng)
            lam = float(rng.uniform())
            mix = validate_density(
                lam * rho.mat + (1 - lam) * tau.mat, (2, 2)
            )
            lhs = float(conditional_entropy(mix))
            rhs = lam * float(conditional_entropy(rho)) + (1 - lam) * float(
                conditional_entropy(tau)
            )
            assert lhs >= rhs - 1e-9

    def test_entropy_concave_and_mixing_cap(self):
        for i in range(40):
            rng = stream(72, i)
            rho = induced_mixed(4, 4, rng)
            tau = induced_mixed(4, 4, rng)
            eps = float(rng.uniform())
            mix = validate_density((1 - eps) * rho.mat + eps * tau.mat, (4,))
            s_mix = float(von_neumann_entropy(mix))
            avg = (1 - eps) * float(von_neumann_entropy(rho)) + eps * float(
                von_neumann_entropy(tau)
            )
            assert s_mix >= avg - 1e-9
            assert s_mix <= avg + eta(1 - eps) + eta(eps) + 1e-9

    def test_entropy_bound_dominates_on_random_pairs(self):
        from qmi import perturbation_pair

        for i in range(40):
            rng = stream(73, i)
            rho = induced_mixed(4, 4, rng)
            pair = perturbation_pair(rho, float(rng.uniform()), rng)
            lhs = abs(
                float(von_neumann_entropy(pair.rho))
                - float(von_neumann_entropy(pair.sigma))
            )
            d_span = support_span_dim(pair.rho, pair.sigma)
            assert lhs <= entropy_continuity_bound(pair.epsilon, d_span) + 1e-9


class TestSupportSpanDim:
    def test_full_rank_pair(self):
        assert support_span_dim(maxmix(4), maxmix(4)) == 4

    def test_low_rank_pair(self):
        a = validate_density(np.diag([1.0, 0.0, 0.0]), [3])
        b = validate_density(np.diag([0.5, 0.5, 0.0]), [3])
        assert support_span_dim(a, b) == 2

    def test_classical_corr_span(self):
        assert support_span_dim(classical_corr(), classical_corr()) == 2
