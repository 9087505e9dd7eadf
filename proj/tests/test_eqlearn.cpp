#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <map>

#include "qpac/eqlearn.hpp"
#include "qpac/harness.hpp"
#include "test_util.hpp"

using namespace qpac;

namespace {

ConceptClass full_class(int n) {
    ConceptClass C;
    for (std::uint64_t v = 0; v < (1ull << n); ++v) {
        std::vector<std::uint8_t> t(static_cast<std::size_t>(n));
        for (int x = 0; x < n; ++x) t[static_cast<std::size_t>(x)] = (v >> x) & 1ull;
        C.members.emplace_back(std::move(t));
    }
    return C;
}

}  // namespace

TEST_SUITE("eqlearn") {

TEST_CASE("ideal equivalence query") {
    SeededRng rng(3);
    const Distribution D(std::vector<double>{0.5, 0.3, 0.1, 0.1});
    const Classifier c = Classifier::from_bits("0110");

    CHECK(ideal_eq(c, c, D, rng).kind == EqKind::Yes);

    // unique counterexample point
    Classifier h = c;
    h.table[2] ^= 1;
    for (int i = 0; i < 20; ++i) {
        const EqResult r = ideal_eq(h, c, D, rng);
        REQUIRE(r.kind == EqKind::Counterexample);
        CHECK(r.x == 2);
        CHECK(r.label == c(2));
    }

    // masses .3 and .1 on the disagreement set: draws split 3:1
    Classifier h2 = c;
    h2.table[1] ^= 1;
    h2.table[3] ^= 1;
    int first = 0;
    const int trials = 10000;
    for (int i = 0; i < trials; ++i) {
        const EqResult r = ideal_eq(h2, c, D, rng);
        REQUIRE(r.kind == EqKind::Counterexample);
        CHECK((r.x == 1 || r.x == 3));
        first += r.x == 1 ? 1 : 0;
    }
    const double p = 0.3 / 0.4;
    const double sigma = std::sqrt(p * (1 - p) / trials);
    CHECK(std::abs(first / static_cast<double>(trials) - p) <= 4.0 * sigma);

    // disagreement carried by a D-null point
    const Distribution Dnull(std::vector<double>{0.5, 0.5, 0.0, 0.0});
    Classifier h3 = c;
    h3.table[2] ^= 1;
    const EqResult r3 = ideal_eq(h3, c, Dnull, rng);
    CHECK(r3.kind == EqKind::Yes);
    CHECK(r3.zero_mass_disagreement);
}

TEST_CASE("imperfect equivalence query") {
    SeededRng rng(5);
    const int n = 6;
    const RegisterLayout L{n, 1, 0};
    const Classifier c = testutil::random_classifier(n, rng);
    const Distribution D = testutil::random_distribution(n, rng);

    // h = c: the good subspace is empty on the graph, so never a counterexample
    {
        SampleOracle o = build_sample_oracle(c, D, L);
        for (int i = 0; i < 25; ++i) {
            const EqResult r = imperfect_eq(c, o, 0.2, rng);
            CHECK(r.kind == EqKind::Failure);
            CHECK(r.label == c(r.x));
        }
    }

    // counterexample probability floor and the conditional law
    int checked = 0;
    while (checked < 25) {
        const Classifier h = testutil::random_classifier(n, rng);
        const Distribution Dr = testutil::random_distribution(n, rng);
        const double gap = distance(h, c, Dr);
        if (gap < 1e-3) continue;
        ++checked;
        SampleOracle o = build_sample_oracle(c, Dr, L);
        const GoodSubset G = GoodSubset::counterexample_set(h);
        CHECK(good_mass(Dr, c, G) == doctest::Approx(gap).epsilon(1e-12));
        CHECK(exact_success_probability(o, G, gap) >= 0.09);

        // conditional counterexample distribution equals the ideal-EQ law
        const auto law = conditional_output_distribution(o, G, gap);
        double tv = 0.0;
        for (const auto& e : law) {
            const double target = c(e.x) == e.b ? Dr(e.x) / gap : 0.0;
            tv += 0.5 * std::abs(e.probability - target);
        }
        CHECK(tv <= 1e-9);
    }
}

TEST_CASE("budget formula") {
    CHECK(imperfect_eq_budget(10, 0.1) == 1094);
    CHECK(halving_query_bound(1) == 1);
    CHECK(halving_query_bound(8) == 4);
    CHECK(halving_query_bound(9) == 4);
    CHECK(halving_query_bound(256) == 9);
    const BudgetParams bp = BudgetParams::for_class(1024, 0.1);
    CHECK(bp.t_e == 11);
    CHECK(bp.p == 0.09);
    CHECK(bp.budget == imperfect_eq_budget(11, 0.1));
}

TEST_CASE("weighted majority vote") {
    const Classifier a = Classifier::from_bits("0011");
    const Classifier b = Classifier::from_bits("0101");
    const Classifier c = Classifier::from_bits("0110");

    CHECK(weighted_majority_vote({a}, std::vector<std::uint64_t>{5}) == a);
    CHECK(weighted_majority_vote({a, b, c}, std::vector<std::uint64_t>{1, 1, 1}) ==
          Classifier::from_bits("0111"));

    // exact half/half tie goes to 0
    CHECK(weighted_majority_vote({a, b}, std::vector<std::uint64_t>{2, 2}) ==
          Classifier::from_bits("0001"));
    CHECK(weighted_majority_vote({a, b}, std::vector<double>{0.5, 0.5}) ==
          Classifier::from_bits("0001"));
}

TEST_CASE("halving learner with ideal queries") {
    SeededRng rng(9);

    // singleton class: no queries at all
    {
        ConceptClass C;
        C.members = {Classifier::from_bits("0101")};
        int calls = 0;
        const HalvingResult r = halving_learner(C, [&](const Classifier&) {
            ++calls;
            return std::optional<EqResult>{EqResult{EqKind::Yes, -1, -1, false}};
        });
        CHECK(r.completed);
        CHECK(calls == 0);
        CHECK(r.output == C.members[0]);
    }

    // full class on 3 points: at most floor(log2 8) + 1 = 4 ideal queries,
    // and every counterexample halves the version space
    const ConceptClass C = full_class(3);
    for (const auto& c : C.members) {
        for (int dtrial = 0; dtrial < 4; ++dtrial) {
            const Distribution D = testutil::random_distribution(3, rng);
            std::vector<Classifier> shadow = C.members;
            auto eq = [&](const Classifier& h) -> std::optional<EqResult> {
                const EqResult r = ideal_eq(h, c, D, rng);
                if (r.kind == EqKind::Counterexample) {
                    const std::size_t before = shadow.size();
                    std::erase_if(shadow, [&](const Classifier& v) { return v(r.x) != r.label; });
                    CHECK(shadow.size() <= before / 2);
                }
                return r;
            };
            const HalvingResult r = halving_learner(C, eq);
            CHECK(r.completed);
            CHECK(r.eq_count <= 4);
            CHECK(distance(r.output, c, D) == 0.0);
        }
    }

    // concept outside the class empties the version space
    ConceptClass pair;
    pair.members = {Classifier::from_bits("000"), Classifier::from_bits("111")};
    const Classifier outside = Classifier::from_bits("010");
    const Distribution U = Distribution::uniform(3);
    CHECK_THROWS_AS(halving_learner(pair,
                                    [&](const Classifier& h) {
                                        return std::optional<EqResult>{ideal_eq(h, outside, U, rng)};
                                    }),
                    std::logic_error);
}

TEST_CASE("learn_with_budget on a singleton class") {
    SeededRng rng(13);
    ConceptClass C;
    C.members = {Classifier::from_bits("0110")};
    const RegisterLayout L{4, 1, 0};
    SampleOracle o = build_sample_oracle(C.members[0], Distribution::uniform(4), L);
    const LearnResult r = learn_with_budget(C, o, 0.1, 0.1, rng);
    CHECK(r.output == C.members[0]);
    CHECK(r.oracle_calls.total() == 0);
    CHECK_FALSE(r.budget_exhausted);
}

TEST_CASE("budget exhaustion falls back to the transcript vote") {
    // two concepts differing at one point, tie rule makes the majority vote
    // equal to the truth: every imperfect query fails and the budget burns out
    SeededRng rng(15);
    const Classifier c = Classifier::from_bits("0000");
    Classifier h = c;
    h.table[2] = 1;
    ConceptClass C;
    C.members = {c, h};

    const RegisterLayout L{4, 1, 0};
    SampleOracle o = build_sample_oracle(c, Distribution::uniform(4), L);
    const LearnResult r = learn_with_budget(C, o, 0.1, 0.2, rng);

    CHECK(r.budget_exhausted);
    CHECK(r.transcript.total() == r.budget.budget);
    REQUIRE(r.transcript.entries.size() == 1);
    CHECK(r.transcript.entries[0].hypothesis == c);
    CHECK(r.output == c);
    // every imperfect query costs at least the preparation call
    CHECK(r.oracle_calls.total() >= r.budget.budget);
}

TEST_CASE("transcript bookkeeping across seeded runs") {
    SeededRng seeds(17);
    const ConceptClass C = full_class(4);
    const RegisterLayout L{4, 1, 0};
    for (int trial = 0; trial < 15; ++trial) {
        SeededRng rng(derive_seed(42, static_cast<std::uint64_t>(trial)));
        const Classifier& c = C.members[static_cast<std::size_t>(seeds.uniform_int(16))];
        const Distribution D = testutil::random_distribution(4, seeds);
        SampleOracle o = build_sample_oracle(c, D, L);
        const LearnResult r = learn_with_budget(C, o, 0.15, 0.15, rng);
        CHECK(r.transcript.total() <= r.budget.budget);
        CHECK(r.transcript.entries.size() <= static_cast<std::size_t>(r.budget.t_e));
        if (r.budget_exhausted) CHECK(r.transcript.total() == r.budget.budget);
        for (const auto& e : r.transcript.entries) CHECK(e.count > 0);
    }
}

TEST_CASE("lemma-level behaviour at small scale") {
    // feasible-spend bound and majority-vote replay over seeded runs
    const ConceptClass C = full_class(4);
    const RegisterLayout L{4, 1, 0};
    const double eps = 0.15, delta = 0.15;
    const int runs = 120;

    const BudgetParams bp = BudgetParams::for_class(C.size(), delta);
    const double feasible_cap = 2.0 * bp.t_e / bp.p +
                                std::log(1.0 / delta) / (2.0 * bp.p * bp.p);

    int feasible_excess = 0;
    int exhausted_seen = 0;
    for (int trial = 0; trial < runs; ++trial) {
        SeededRng rng(derive_seed(777, static_cast<std::uint64_t>(trial)));
        const Classifier& c = C.members[static_cast<std::size_t>(rng.uniform_int(16))];
        const Distribution D = perturbed_delta(4, {0, 1, 2, 3}, 0, eps);
        SampleOracle o = build_sample_oracle(c, D, L);
        const LearnResult r = learn_with_budget(C, o, eps, delta, rng);

        std::uint64_t feasible_spend = 0, infeasible_spend = 0;
        for (const auto& e : r.transcript.entries) {
            if (distance(e.hypothesis, c, D) >= eps)
                feasible_spend += e.count;
            else
                infeasible_spend += e.count;
        }
        if (static_cast<double>(feasible_spend) > feasible_cap) ++feasible_excess;

        if (r.budget_exhausted &&
            3 * infeasible_spend >= 2 * r.budget.budget) {
            ++exhausted_seen;
            CHECK(distance(r.output, c, D) < 4.0 * eps);
        }
    }
    const double sigma = std::sqrt(delta * (1 - delta) / runs);
    CHECK(static_cast<double>(feasible_excess) / runs <= delta + 3.0 * sigma);
    CHECK(exhausted_seen > 0);  // the replay check must not be vacuous
}

TEST_CASE("pac_learn parameter wiring and worst case calls") {
    SeededRng rng(19);
    const ConceptClass C = full_class(4);
    const RegisterLayout L{4, 1, 0};
    const double eps = 0.2, delta = 0.2;
    for (int trial = 0; trial < 10; ++trial) {
        const Classifier& c = C.members[static_cast<std::size_t>(rng.uniform_int(16))];
        const Distribution D = testutil::random_distribution(4, rng);
        SampleOracle o = build_sample_oracle(c, D, L);
        const LearnResult r = pac_learn(C, o, eps, delta, rng);
        CHECK(r.epsilon == doctest::Approx(eps / 4));
        CHECK(r.delta == doctest::Approx(delta / 2));
        const int M = grover_schedule_bound(eps / 4);
        CHECK(r.oracle_calls.total() <=
              r.budget.budget * static_cast<std::uint64_t>(1 + 2 * (M - 1)));
    }
}

TEST_CASE("learn report schema") {
    SeededRng rng(21);
    ConceptClass C = full_class(3);
    const RegisterLayout L{3, 1, 0};
    const Classifier& c = C.members[5];
    const Distribution D = Distribution::uniform(3);
    SampleOracle o = build_sample_oracle(c, D, L);
    const LearnResult r = pac_learn(C, o, 0.2, 0.2, rng);
    const auto j = learn_report(r, 0.2, 0.2, 21, c, D);
    for (const char* key : {"epsilon", "delta", "seed", "T_E", "R", "transcript", "output_bits",
                            "distance_to_truth", "oracle_calls_forward", "oracle_calls_inverse"})
        CHECK(j.contains(key));
    CHECK(j["epsilon"] == 0.2);
}

}  // TEST_SUITE
