#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "qpac/core_sim.hpp"
#include "test_util.hpp"

using namespace qpac;

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

}  // namespace

TEST_SUITE("core_sim") {

TEST_CASE("layout enumeration is index-major") {
    const RegisterLayout L{3, 1, 2};
    L.validate();
    CHECK(L.total_dim() == 3 * 2 * 4);
    CHECK(L.basis_index(0, 0, 0) == 0);
    CHECK(L.basis_index(0, 0, 3) == 3);
    CHECK(L.basis_index(0, 1, 0) == 4);
    CHECK(L.basis_index(1, 0, 0) == 8);

    const StateVector s = StateVector::basis(L, 2, 1, 3);
    const BasisOutcome o = s.decode(L.basis_index(2, 1, 3));
    CHECK(o.x == 2);
    CHECK(o.label == 1);
    CHECK(o.ancilla == 3);
}

TEST_CASE("layout validation") {
    CHECK_THROWS_AS((RegisterLayout{0, 1, 0}).validate(), std::invalid_argument);
    CHECK_THROWS_AS((RegisterLayout{4, 0, 0}).validate(), std::invalid_argument);
    CHECK_THROWS_AS((RegisterLayout{8192, 1, 0}).validate(), std::invalid_argument);
}

TEST_CASE("sample oracle on the two-point domain") {
    const RegisterLayout L{2, 1, 0};
    const Classifier c = Classifier::from_bits("01");  // identity bit
    const Distribution D = Distribution::uniform(2);
    SampleOracle o = build_sample_oracle(c, D, L);

    StateVector psi = o.apply(o.in_state());
    CHECK(std::abs(psi.amplitudes(0) - kInvSqrt2) < 1e-12);  // |0 0>
    CHECK(std::abs(psi.amplitudes(1)) < 1e-12);              // |0 1>
    CHECK(std::abs(psi.amplitudes(2)) < 1e-12);              // |1 0>
    CHECK(std::abs(psi.amplitudes(3) - kInvSqrt2) < 1e-12);  // |1 1>
}

TEST_CASE("sample oracle with a delta distribution") {
    const RegisterLayout L{4, 1, 0};
    const Classifier c = Classifier::from_bits("0110");
    const Distribution D(std::vector<double>{0.0, 0.0, 1.0, 0.0});
    SampleOracle o = build_sample_oracle(c, D, L);
    StateVector out = o.apply(o.in_state());
    CHECK(std::abs(out.amplitudes(L.basis_index(2, 1)) - 1.0) < 1e-12);
}

TEST_CASE("oracle is an involution and unitary") {
    SeededRng rng(5);
    for (int trial = 0; trial < 25; ++trial) {
        const int n = 2 + rng.uniform_int(7);
        const RegisterLayout L{n, 1, 0};
        const Classifier c = testutil::random_classifier(n, rng);
        const Distribution D = testutil::random_distribution(n, rng);
        SampleOracle o = build_sample_oracle(c, D, L);

        CHECK(unitarity_error(o.matrix()) <= 1e-9);
        const Eigen::MatrixXcd sq = o.matrix() * o.matrix();
        const Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(sq.rows(), sq.cols());
        CHECK((sq - eye).cwiseAbs().maxCoeff() <= 1e-9);

        // O|IN> = psi_c within 1e-9
        const StateVector psi = quantum_sample_state(c, D, L);
        const Eigen::VectorXcd got = o.matrix() * o.in_state().amplitudes;
        CHECK((got - psi.amplitudes).cwiseAbs().maxCoeff() <= 1e-9);
    }
}

TEST_CASE("apply tracks direction and counters") {
    const RegisterLayout L{2, 1, 0};
    const Classifier c = Classifier::from_bits("01");
    const Distribution D = Distribution::uniform(2);
    SampleOracle o = build_sample_oracle(c, D, L);
    CHECK(o.call_report().forward == 0);
    CHECK(o.call_report().inverse == 0);
    CHECK(o.call_report().total() == 0);

    StateVector psi = apply(o, o.in_state());
    CHECK(o.call_report().forward == 1);

    StateVector back = apply(o, psi, /*inverse=*/true);
    CHECK(o.call_report().inverse == 1);
    CHECK(o.call_report().total() == 2);
    CHECK(std::abs(back.amplitudes(o.in_index()) - 1.0) < 1e-9);

    // plain unitary application does not count and preserves the state
    const Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(L.total_dim(), L.total_dim());
    StateVector same = apply_unitary(eye, psi);
    CHECK((same.amplitudes - psi.amplitudes).norm() == 0.0);
    CHECK(o.call_report().total() == 2);

    CHECK_THROWS_AS(apply_unitary(Eigen::MatrixXcd::Identity(3, 3), psi), std::invalid_argument);
}

TEST_CASE("apply preserves the norm") {
    SeededRng rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 2 + rng.uniform_int(15);
        const RegisterLayout L{n, 1, 0};
        SampleOracle o = build_sample_oracle(testutil::random_classifier(n, rng),
                                             testutil::random_distribution(n, rng), L);
        StateVector s = o.in_state();
        for (int i = 0; i < 8; ++i) s = o.apply(s, rng.uniform_int(2) == 1);
        CHECK(std::abs(s.norm() - 1.0) <= 1e-9);
    }
}

TEST_CASE("measurement of a basis state is deterministic") {
    const RegisterLayout L{5, 1, 0};
    const StateVector s = StateVector::basis(L, 3, 0);
    SeededRng rng(1);
    for (int i = 0; i < 10; ++i) {
        const BasisOutcome o = measure(s, rng);
        CHECK(o.x == 3);
        CHECK(o.label == 0);
    }
}

TEST_CASE("measurement follows the Born rule") {
    const int n = 4;
    const RegisterLayout L{n, 1, 0};
    const Classifier c = Classifier::from_bits("0110");
    const Distribution D = Distribution::uniform(n);
    SampleOracle o = build_sample_oracle(c, D, L);
    const StateVector psi = o.apply(o.in_state());

    const int draws = 10000;
    std::vector<int> counts(static_cast<std::size_t>(n), 0);
    SeededRng rng(2024);
    for (int i = 0; i < draws; ++i) {
        const BasisOutcome m = measure(psi, rng);
        CHECK(m.label == c(m.x));  // labels always agree with the concept
        ++counts[static_cast<std::size_t>(m.x)];
    }
    const double p = 1.0 / n;
    const double sigma = std::sqrt(p * (1 - p) / draws);
    for (int x = 0; x < n; ++x)
        CHECK(std::abs(counts[static_cast<std::size_t>(x)] / static_cast<double>(draws) - p) <=
              3.0 * sigma);
}

TEST_CASE("measurement streams are reproducible") {
    const RegisterLayout L{3, 1, 0};
    SampleOracle o = build_sample_oracle(Classifier::from_bits("010"),
                                         Distribution::uniform(3), L);
    const StateVector psi = o.apply(o.in_state());
    SeededRng r1(77), r2(77);
    for (int i = 0; i < 200; ++i) {
        const BasisOutcome a = measure(psi, r1);
        const BasisOutcome b = measure(psi, r2);
        CHECK(a.x == b.x);
        CHECK(a.label == b.label);
    }
}

TEST_CASE("error paths") {
    const RegisterLayout L{2, 1, 0};
    CHECK_THROWS_AS(build_sample_oracle(Classifier::from_bits("01"),
                                        Distribution(std::vector<double>{0.6, 0.6}), L),
                    std::invalid_argument);
    CHECK_THROWS_AS(build_sample_oracle(Classifier::from_bits("011"), Distribution::uniform(2), L),
                    std::invalid_argument);

    StateVector bad = StateVector::zero(L);
    bad.amplitudes(0) = 0.5;  // norm far from 1
    SeededRng rng(3);
    CHECK_THROWS_AS(measure(bad, rng), std::invalid_argument);
}

}  // TEST_SUITE
