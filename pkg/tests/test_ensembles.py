"""Tests for the seeded state generators: determinism, distribution checks,
and the perturbation-pair contract."""

import numpy as np
import pytest

from qmi import (
    EnsembleSpec,
    haar_pure,
    haar_unitary,
    induced_mixed,
    perturbation_pair,
    rank_limited,
    stream,
    trace_distance,
    validate_density,
    von_neumann_entropy,
    with_dims,
)
from qmi.ensembles import draw_pair, draw_state
from qmi.stateio import maxmix


class TestHaarPure:
    def test_trace_and_purity(self):
        rho = haar_pure(4, 11)
        assert float(np.trace(rho.mat).real) == pytest.approx(1.0, abs=1e-10)
        assert rho.purity() == pytest.approx(1.0, abs=1e-10)

    def test_entropy_zero(self):
        assert float(von_neumann_entropy(haar_pure(3, 12))) <= 1e-8

    def test_bit_identical_for_fixed_seed(self):
        a = haar_pure(2, 42)
        b = haar_pure(2, 42)
        assert np.array_equal(a.mat, b.mat)

    def test_different_indices_decorrelated(self):
        a = haar_pure(2, stream(42, 0))
        b = haar_pure(2, stream(42, 1))
        assert np.max(np.abs(a.mat - b.mat)) > 1e-3


class TestInducedMixed:
    def test_trivial_ancilla_gives_pure(self):
        rho = induced_mixed(3, 1, 13)
        assert rho.purity() == pytest.approx(1.0, abs=1e-10)

    def test_rank_bounded_by_ancilla(self):
        rho = induced_mixed(4, 2, 14)
        assert int(np.sum(rho.eigenvalues > 1e-12)) == 2

    def test_mean_purity_matches_induced_measure(self):
        # mean Tr rho^2 under the induced measure is (d + k) / (d k + 1) = 4/5
        total = 0.0
        n = 100_000
        for i in range(n):
            total += induced_mixed(2, 2, stream(777, i)).purity()
        assert total / n == pytest.approx(0.8, abs=0.01)

    def test_concentration_at_large_ancilla(self):
        mm = maxmix(2)
        dists = [
            trace_distance(induced_mixed(2, 64, stream(778, i)), mm)
            for i in range(500)
        ]
        assert float(np.mean(dists)) < 0.2

    def test_all_outputs_validate(self):
        for i in range(20):
            rho = induced_mixed(5, 3, stream(15, i))
            validate_density(rho.mat, rho.dims)


class TestRankLimited:
    @pytest.mark.parametrize("rank", [1, 2, 3])
    def test_rank_respected(self, rank):
        rho = rank_limited(4, rank, 16)
        assert int(np.sum(rho.eigenvalues > 1e-12)) == rank

    def test_rejects_bad_rank(self):
        with pytest.raises(ValueError):
            rank_limited(4, 0, 1)


class TestHaarUnitary:
    def test_unitarity(self):
        for d in (2, 3, 6):
            u = haar_unitary(d, 17)
            assert np.max(np.abs(u.conj().T @ u - np.eye(d))) <= 1e-12

    def test_determinism(self):
        assert np.array_equal(haar_unitary(4, 18), haar_unitary(4, 18))


class TestPerturbationPair:
    def test_zero_target_returns_same_state(self):
        rho = induced_mixed(4, 4, 19)
        pair = perturbation_pair(rho, 0.0, 20)
        assert pair.sigma is rho
        assert pair.epsilon == 0.0
        assert pair.target_reached

    @pytest.mark.parametrize("target", [0.05, 0.3, 0.7, 0.99])
    def test_achieves_target_within_tolerance(self, target):
        rho = with_dims(induced_mixed(4, 4, 21), (2, 2))
        pair = perturbation_pair(rho, target, 22)
        if pair.target_reached:
            assert pair.epsilon == pytest.approx(target, abs=1e-6)

    def test_self_consistency(self):
        rho = induced_mixed(4, 4, 23)
        pair = perturbation_pair(rho, 0.4, 24)
        assert trace_distance(pair.rho, pair.sigma) == pytest.approx(
            pair.epsilon, abs=1e-9
        )

    def test_unreachable_target_flagged(self):
        # from I/2 no qubit mixing direction reaches distance 1
        pair = perturbation_pair(maxmix(2), 1.0, 25)
        assert not pair.target_reached
        assert pair.epsilon < 1.0
        assert trace_distance(pair.rho, pair.sigma) == pytest.approx(
            pair.epsilon, abs=1e-9
        )

    def test_rejects_bad_target(self):
        with pytest.raises(ValueError):
            perturbation_pair(maxmix(2), 1.5, 1)

    def test_determinism(self):
        rho = induced_mixed(4, 4, 26)
        a = perturbation_pair(rho, 0.5, 27)
        b = perturbation_pair(rho, 0.5, 27)
        assert np.array_equal(a.sigma.mat, b.sigma.mat)


class TestEnsembleSpec:
    def test_rejects_unknown_kind(self):
        with pytest.raises(ValueError):
            EnsembleSpec(kind="bures", dims=(2, 2))

    def test_rejects_bad_target(self):
        with pytest.raises(ValueError):
            EnsembleSpec(kind="perturbation_pair", dims=(2, 2), target_epsilon=1.5)

    @pytest.mark.parametrize(
        "kind", ["haar_pure", "induced_mixed", "rank_limited", "perturbation_pair"]
    )
    def test_draw_pair_deterministic_and_valid(self, kind):
        spec = EnsembleSpec(kind=kind, dims=(2, 2), ancilla_dim=2, seed=31)
        a1, b1 = draw_pair(spec, 3)
        a2, b2 = draw_pair(spec, 3)
        assert np.array_equal(a1.mat, a2.mat)
        assert np.array_equal(b1.mat, b2.mat)
        for state in (a1, b1):
            assert state.dims == (2, 2)
            validate_density(state.mat, state.dims)

    def test_draw_state_kinds(self):
        spec = EnsembleSpec(kind="haar_pure", dims=(2, 2), seed=32)
        assert draw_state(spec, 0).purity() == pytest.approx(1.0, abs=1e-10)
        spec = EnsembleSpec(kind="rank_limited", dims=(4,), ancilla_dim=2, seed=33)
        assert int(np.sum(draw_state(spec, 0).eigenvalues > 1e-12)) == 2

    def test_spec_to_dict_roundtrips_config(self):
        spec = EnsembleSpec(
            kind="perturbation_pair", dims=(2, 4), target_epsilon=0.5, seed=7
        )
        d = spec.to_dict()
        assert d["kind"] == "perturbation_pair"
        assert d["dims"] == [2, 4]
        assert d["target_epsilon"] == 0.5
        assert d["seed"] == 7
