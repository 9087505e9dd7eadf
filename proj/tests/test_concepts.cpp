#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <set>

#include "qpac/concepts.hpp"
#include "test_util.hpp"

using namespace qpac;

TEST_SUITE("concepts") {

TEST_CASE("distance basics") {
    const Classifier a = Classifier::from_bits("0101");
    const Classifier b = Classifier::from_bits("0101");
    const Classifier nb = Classifier::from_bits("1010");
    const Distribution D = Distribution::uniform(4);

    CHECK(distance(a, b, D) == 0.0);
    CHECK(distance(a, nb, D) == 1.0);

    // D = (.4,.3,.2,.1), disagreement on the 2nd and 4th points
    const Distribution D2(std::vector<double>{0.4, 0.3, 0.2, 0.1});
    const Classifier h1 = Classifier::from_bits("0000");
    const Classifier h2 = Classifier::from_bits("0101");
    CHECK(distance(h1, h2, D2) == doctest::Approx(0.4).epsilon(1e-12));
}

TEST_CASE("distance is a pseudometric") {
    SeededRng rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 2 + rng.uniform_int(7);
        const Distribution D = testutil::random_distribution(n, rng);
        const Classifier a = testutil::random_classifier(n, rng);
        const Classifier b = testutil::random_classifier(n, rng);
        const Classifier c = testutil::random_classifier(n, rng);
        CHECK(distance(a, b, D) == distance(b, a, D));
        CHECK(distance(a, c, D) <= distance(a, b, D) + distance(b, c, D) + 1e-12);
    }
}

TEST_CASE("distance rejects mismatched domains") {
    const Distribution D = Distribution::uniform(4);
    CHECK_THROWS_AS(distance(Classifier::from_bits("01"), Classifier::from_bits("0111"), D),
                    std::invalid_argument);
}

TEST_CASE("is_shattered") {
    ConceptClass full;
    for (std::uint64_t v = 0; v < 8; ++v) {
        std::vector<std::uint8_t> t(3);
        for (int x = 0; x < 3; ++x) t[static_cast<std::size_t>(x)] = (v >> x) & 1ull;
        full.members.emplace_back(std::move(t));
    }
    CHECK(is_shattered(full, {}));          // empty set: the one empty labelling
    CHECK(is_shattered(full, {0, 1, 2}));   // full class shatters everything

    // point functions cannot shatter a pair: labelling (1,1) never appears
    ConceptClass points;
    for (int x = 0; x < 4; ++x) {
        std::vector<std::uint8_t> t(4, 0);
        t[static_cast<std::size_t>(x)] = 1;
        points.members.emplace_back(std::move(t));
    }
    CHECK(is_shattered(points, {0}));
    CHECK_FALSE(is_shattered(points, {0, 1}));
}

TEST_CASE("vc_dimension on known classes") {
    ConceptClass full;
    for (std::uint64_t v = 0; v < 8; ++v) {
        std::vector<std::uint8_t> t(3);
        for (int x = 0; x < 3; ++x) t[static_cast<std::size_t>(x)] = (v >> x) & 1ull;
        full.members.emplace_back(std::move(t));
    }
    CHECK(vc_dimension(full) == 3);

    ConceptClass points;
    for (int x = 0; x < 4; ++x) {
        std::vector<std::uint8_t> t(4, 0);
        t[static_cast<std::size_t>(x)] = 1;
        points.members.emplace_back(std::move(t));
    }
    CHECK(vc_dimension(points) == 1);
    CHECK(vc_dimension_naive(points) == 1);

    CHECK(vc_dimension(junta_class(2, 1)) == 2);
}

TEST_CASE("vc_dimension agrees with the naive oracle") {
    SeededRng rng(23);
    for (int trial = 0; trial < 120; ++trial) {
        const int n = 2 + rng.uniform_int(5);  // up to 6
        const int max_count = std::min(12, 1 << n);
        const int count = 1 + rng.uniform_int(max_count);
        const ConceptClass C = testutil::random_concept_class(n, count, rng);
        CHECK(vc_dimension(C) == vc_dimension_naive(C));
    }
}

TEST_CASE("shattering is monotone under subsets") {
    SeededRng rng(31);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 3 + rng.uniform_int(3);
        const int count = std::min(6 + rng.uniform_int(6), (1 << n) - 1);
        const ConceptClass C = testutil::random_concept_class(n, count, rng);
        for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
            std::vector<int> Y;
            for (int i = 0; i < n; ++i)
                if (mask & (1u << i)) Y.push_back(i);
            if (!is_shattered(C, Y)) continue;
            for (std::size_t drop = 0; drop < Y.size(); ++drop) {
                std::vector<int> sub = Y;
                sub.erase(sub.begin() + static_cast<std::ptrdiff_t>(drop));
                CHECK(is_shattered(C, sub));
            }
        }
    }
}

TEST_CASE("perturbed_delta") {
    // eps = 1/4 kills the marked point; rest is uniform on Z \ {x0}
    const Distribution D1 = perturbed_delta(6, {0, 1, 2, 3}, 0, 0.25);
    CHECK(D1(0) == doctest::Approx(0.0));
    for (int y : {1, 2, 3}) CHECK(D1(y) == doctest::Approx(1.0 / 3));
    CHECK(D1(4) == 0.0);

    const Distribution D2 = perturbed_delta(5, {0, 1, 2, 3, 4}, 0, 0.05);
    CHECK(D2(0) == doctest::Approx(0.8));
    for (int y = 1; y <= 4; ++y) CHECK(D2(y) == doctest::Approx(0.05));

    SeededRng rng(7);
    for (int trial = 0; trial < 30; ++trial) {
        const int m = 2 + rng.uniform_int(8);
        std::vector<int> Z(static_cast<std::size_t>(m));
        for (int i = 0; i < m; ++i) Z[static_cast<std::size_t>(i)] = i;
        const double eps = 0.25 * (0.05 + 0.95 * rng.next_double());
        const Distribution D = perturbed_delta(m, Z, rng.uniform_int(m), eps);
        CHECK(std::abs(D.total() - 1.0) <= 1e-12);
    }

    CHECK_THROWS_AS(perturbed_delta(4, {0, 1, 2, 3}, 0, 0.3), std::invalid_argument);
    CHECK_THROWS_AS(perturbed_delta(4, {0}, 0, 0.1), std::invalid_argument);
}

TEST_CASE("junta_class counts") {
    const ConceptClass j21 = junta_class(2, 1);
    CHECK(j21.size() == 6);  // two constants, x1, !x1, x2, !x2

    CHECK(junta_class(2, 2).size() == 16);   // all functions on {0,1}^2
    CHECK(junta_class(3, 3).size() == 256);  // all functions on {0,1}^3

    const ConceptClass j42 = junta_class(4, 2);
    const int d = vc_dimension(j42);
    CHECK(static_cast<double>(d) <= junta_vc_bound(4, 2));

    CHECK_THROWS_AS(junta_class(3, 4), std::invalid_argument);
}

TEST_CASE("sample follows the distribution") {
    SeededRng rng(99);

    Distribution delta(std::vector<double>{0.0, 0.0, 1.0, 0.0});
    for (int i = 0; i < 10; ++i) CHECK(sample(delta, rng) == 2);

    const Distribution U = Distribution::uniform(4);
    std::vector<int> counts(4, 0);
    const int n = 10000;
    for (int i = 0; i < n; ++i) ++counts[static_cast<std::size_t>(sample(U, rng))];
    const double sigma = std::sqrt(0.25 * 0.75 / n);
    for (int x = 0; x < 4; ++x)
        CHECK(std::abs(counts[static_cast<std::size_t>(x)] / static_cast<double>(n) - 0.25) <=
              4.0 * sigma);

    // identical seeds give identical draw sequences
    SeededRng r1(1234), r2(1234);
    for (int i = 0; i < 100; ++i) CHECK(sample(U, r1) == sample(U, r2));
}

TEST_CASE("json round trip") {
    ConceptClass C;
    C.members = {Classifier::from_bits("0101"), Classifier::from_bits("0011")};
    Distribution D(std::vector<double>{0.4, 0.3, 0.2, 0.1});

    const std::string text = concept_class_to_json(C, &D);
    ConceptClass C2;
    Distribution D2;
    concept_class_from_json(text, C2, &D2);
    CHECK(C2.members == C.members);
    CHECK(D2.probs == D.probs);

    CHECK_THROWS(concept_class_from_json("{\"domain_size\": 2, \"concepts\": [\"012\"]}", C2));
}

TEST_CASE("learning params validation") {
    CHECK_THROWS_AS(LearningParams(0.0, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(LearningParams(0.1, 1.0), std::invalid_argument);
    const LearningParams p(0.1, 0.2);
    CHECK(p.epsilon == 0.1);
}

}  // TEST_SUITE
