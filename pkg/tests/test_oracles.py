import numpy as np
import pytest

from paritylab.bounds import effective_error_rate
from paritylab.gf2 import BitString, dot
from paritylab.harness import empirical_outcome_distribution, tv_distance
from paritylab.oracles import (
    Classification,
    ClassicalOracle,
    Depolarizing,
    Noiseless,
    OutcomeDistribution,
    ParityConcept,
    QuantumOracle,
    classical_example,
    conditional_retained_distribution,
    exact_outcome_distribution,
    make_stream,
    marginal_result_bit,
    quantum_outcome,
    random_concept,
    random_concept_of_weight,
    sample_classical_batch,
    sample_quantum_batch,
)


def concept(text):
    return ParityConcept(BitString.from_text(text))


def flip_law(n, eta, center):
    """Independent bit-flip law D_center^eta, built independently of the package."""
    m = np.arange(1 << n)
    w = np.array([(int(v) ^ center).bit_count() for v in m], dtype=float)
    return eta**w * (1 - eta) ** (n - w)


class TestClassicalExamples:
    def test_zero_concept_labels(self):
        rng = make_stream(0)
        c = concept("0000")
        for _ in range(50):
            ex = classical_example(c, Noiseless(), rng)
            assert ex.y == 0

    def test_noiseless_labels_match_parity(self):
        rng = make_stream(1)
        c = concept("1011")
        for _ in range(100):
            ex = classical_example(c, Noiseless(), rng)
            assert ex.y == dot(c.a, ex.x)

    def test_classification_flip_rate(self):
        rng = make_stream(2)
        c = concept("1")
        x, y = sample_classical_batch(c, Classification(0.25), 100000, rng)
        true_labels = x[:, 0]
        err = float((y != true_labels).mean())
        sigma = np.sqrt(0.25 * 0.75 / 100000)
        assert abs(err - 0.25) < 3 * sigma

    def test_depolarizing_label_error_matches_effective_rate(self):
        rng = make_stream(3)
        c = random_concept_of_weight(10, 3, rng)
        x, y = sample_classical_batch(c, Depolarizing(0.1), 100000, rng)
        a_bits = c.a.to_array().astype(np.uint64)
        true_labels = (x.astype(np.uint64) @ a_bits) & 1
        err = float((y != true_labels).mean())
        expected = effective_error_rate(10, 3, 0.1)
        assert expected == pytest.approx(0.2952)
        sigma = np.sqrt(expected * (1 - expected) / 100000)
        assert abs(err - expected) < 3 * sigma

    def test_depolarizing_inputs_uniform(self):
        rng = make_stream(4)
        x, _ = sample_classical_batch(concept("110"), Depolarizing(0.3), 60000, rng)
        freqs = np.bincount(x @ np.array([4, 2, 1]), minlength=8) / 60000
        assert np.all(np.abs(freqs - 1 / 8) < 3 * np.sqrt((1 / 8) * (7 / 8) / 60000))


class TestQuantumOutcomes:
    def test_noiseless_support_and_rate(self):
        rng = make_stream(5)
        c = concept("1011")
        m, b = sample_quantum_batch(c, Noiseless(), 100000, rng)
        values = m @ (1 << np.arange(4)[::-1])
        hits = (values == c.a.value) & (b == 1)
        zeros = (values == 0) & (b == 0)
        assert hits.sum() + zeros.sum() == 100000
        sigma = np.sqrt(0.25 / 100000)
        assert abs(hits.mean() - 0.5) < 3 * sigma

    def test_classification_query_register_rate_independent_of_eta(self):
        rng = make_stream(6)
        c = concept("101")
        for eta in (0.1, 0.49):
            m, _ = sample_quantum_batch(c, Classification(eta), 50000, rng)
            values = m @ np.array([4, 2, 1])
            rate = float((values == c.a.value).mean())
            assert abs(rate - 0.5) < 3 * np.sqrt(0.25 / 50000)

    def test_depolarizing_histogram_matches_exact(self):
        rng = make_stream(7)
        c = concept("101")
        noise = Depolarizing(0.15)
        m, b = sample_quantum_batch(c, noise, 100000, rng)
        emp = empirical_outcome_distribution(m, b, 3)
        assert tv_distance(emp, exact_outcome_distribution(c, noise)) <= 0.02

    def test_single_sample_api(self):
        rng = make_stream(8)
        out = quantum_outcome(concept("11"), Noiseless(), rng)
        assert str(out.m) in ("00", "11")
        assert out.b in (0, 1)


class TestExactDistribution:
    def test_noiseless_two_point(self):
        d = exact_outcome_distribution(concept("11"), Noiseless())
        assert d.prob(BitString.from_text("00"), 0) == pytest.approx(0.5)
        assert d.prob(BitString.from_text("11"), 1) == pytest.approx(0.5)
        assert d.p.sum() == pytest.approx(1.0, abs=1e-12)
        assert np.count_nonzero(d.p) == 2

    def test_classification_four_point(self):
        d = exact_outcome_distribution(concept("10"), Classification(0.2))
        assert d.prob(BitString.from_text("00"), 0) == pytest.approx(0.4)
        assert d.prob(BitString.from_text("10"), 1) == pytest.approx(0.4)
        assert d.prob(BitString.from_text("00"), 1) == pytest.approx(0.1)
        assert d.prob(BitString.from_text("10"), 0) == pytest.approx(0.1)

    def test_zero_concept_product_law(self):
        eta = 0.3
        d = exact_outcome_distribution(concept("000"), Depolarizing(eta))
        expected_m = flip_law(3, eta, 0)
        m_marginal = d.p[0::2] + d.p[1::2]
        assert np.allclose(m_marginal, expected_m, atol=1e-12)
        assert d.p[1::2].sum() == pytest.approx(0.5, abs=1e-12)

    def test_sums_to_one_on_grid(self):
        rng = make_stream(9)
        for n in range(1, 11):
            c = random_concept(n, rng)
            for eta in (0.05, 0.15, 0.3, 0.45):
                d = exact_outcome_distribution(c, Depolarizing(eta))
                assert d.p.sum() == pytest.approx(1.0, abs=1e-12)
                assert np.all(d.p >= 0)

    def test_capacity_error(self):
        big = ParityConcept(BitString.zeros(21))
        with pytest.raises(ValueError):
            exact_outcome_distribution(big, Noiseless())


class TestConditionalRetained:
    def test_no_noise_point_mass(self):
        d = conditional_retained_distribution(concept("101"), 0.0)
        assert d.prob(BitString.from_text("101")) == pytest.approx(1.0)

    def test_zero_concept_mixture_collapses(self):
        eta = 0.25
        d = conditional_retained_distribution(concept("0000"), eta)
        assert np.allclose(d.p, flip_law(4, eta, 0), atol=1e-12)

    def test_equals_mixture_and_joint_slice(self):
        rng = make_stream(10)
        for n in (2, 3, 6, 10):
            c = random_concept(n, rng)
            for eta in (0.1, 0.3):
                cond = conditional_retained_distribution(c, eta)
                mixture = (1 - eta) * flip_law(n, eta, c.a.value) + eta * flip_law(
                    n, eta, 0
                )
                assert np.allclose(cond.p, mixture, atol=1e-12)
                joint = exact_outcome_distribution(c, Depolarizing(eta))
                slice_b1 = joint.p[1::2]
                assert np.allclose(cond.p, slice_b1 / slice_b1.sum(), atol=1e-12)

    def test_mixture_weight_on_concept_branch(self):
        # weight of D_a^eta in the retained mixture is exactly 1 - eta
        rng = make_stream(11)
        for n in (3, 5):
            c = random_concept(n, rng)
            if c.a.value == 0:
                continue
            for eta in (0.1, 0.4):
                cond = conditional_retained_distribution(c, eta)
                da = flip_law(n, eta, c.a.value)
                d0 = flip_law(n, eta, 0)
                # Solve cond = w*da + (1-w)*d0 at a non-degenerate entry.
                diffs = da - d0
                idx = int(np.argmax(np.abs(diffs)))
                w = (cond.p[idx] - d0[idx]) / diffs[idx]
                assert w == pytest.approx(1 - eta, abs=1e-12)


class TestMarginalResultBit:
    def test_all_models(self):
        c = concept("110")
        assert marginal_result_bit(c, Noiseless()) == 0.5
        assert marginal_result_bit(c, Classification(0.3)) == 0.5
        assert marginal_result_bit(c, Depolarizing(0.4)) == 0.5

    def test_against_exact_distribution(self):
        rng = make_stream(12)
        for noise in (Noiseless(), Classification(0.2), Depolarizing(0.35)):
            c = random_concept(4, rng)
            d = exact_outcome_distribution(c, noise)
            assert d.p[1::2].sum() == pytest.approx(
                marginal_result_bit(c, noise), abs=1e-12
            )


class TestDeterminism:
    def test_same_seed_same_samples(self):
        c = concept("1101")
        noise = Depolarizing(0.2)
        m1, b1 = sample_quantum_batch(c, noise, 1000, make_stream(99))
        m2, b2 = sample_quantum_batch(c, noise, 1000, make_stream(99))
        assert np.array_equal(m1, m2)
        assert np.array_equal(b1, b2)

    def test_oracle_objects_hide_concept(self):
        c = concept("101")
        q = QuantumOracle(c, Noiseless())
        cl = ClassicalOracle(c, Noiseless())
        assert q.n == cl.n == 3
        out = q.sample(make_stream(0))
        ex = cl.sample(make_stream(0))
        assert out.b in (0, 1) and ex.y in (0, 1)


class TestOutcomeDistributionValidation:
    def test_rejects_bad_sum(self):
        with pytest.raises(ValueError):
            OutcomeDistribution(1, np.array([0.5, 0.2, 0.1, 0.1]))

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            OutcomeDistribution(1, np.array([1.2, -0.2, 0.0, 0.0]))
