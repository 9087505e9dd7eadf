// eqlearn.hpp
// Ideal and imperfect equivalence queries, the halving backbone learner, the
// budgeted learner with weighted-majority-vote fallback, and the composition
// into a PAC learner driven purely by sample-oracle calls.

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qpac/core_sim.hpp"
#include "qpac/grover.hpp"

namespace qpac {

enum class EqKind { Yes, Counterexample, Failure };

struct EqResult {
    EqKind kind = EqKind::Failure;
    int x = -1;      // labelled example, when present
    int label = -1;  // always c(x)
    bool zero_mass_disagreement = false;  // Yes forced by a D-null disagreement set
};

// Queried hypotheses with per-hypothesis imperfect-EQ counts. Repeat queries
// to the same hypothesis merge into one entry.
struct Transcript {
    struct Entry {
        Classifier hypothesis;
        std::uint64_t count = 0;
    };
    std::vector<Entry> entries;

    std::uint64_t total() const;
    void record(const Classifier& h);

    // The time-spent distribution rho(h_i) = n_i / sum_j n_j.
    std::vector<double> time_spent_weights() const;
};

// R = ceil(6 T_E / p + (3 / (2 p^2)) ln(1/delta)) with p the imperfect-EQ
// success floor.
struct BudgetParams {
    int t_e = 0;
    double p = 0.09;
    std::uint64_t budget = 0;

    static BudgetParams for_class(std::size_t class_size, double delta);
};

std::uint64_t imperfect_eq_budget(int t_e, double delta, double p = 0.09);

// Worst-case EQ count of the halving backbone: floor(log2 |C|) + 1.
int halving_query_bound(std::size_t class_size);

// YES iff h equals c as a table; otherwise a counterexample drawn from D
// restricted and renormalized to the disagreement set. A disagreement set of
// zero D-mass is reported as Yes with zero_mass_disagreement set.
EqResult ideal_eq(const Classifier& h, const Classifier& c, const Distribution& D, SeededRng& rng);

// One Grover search against G = {(x, 1-h(x))}: success maps to a
// counterexample, failure to Failure (the measured example agrees with h).
EqResult imperfect_eq(const Classifier& h, SampleOracle& o, double epsilon, SeededRng& rng);

// Weighted majority vote: per point, the label with the larger total weight;
// exact ties go to 0.
Classifier weighted_majority_vote(const std::vector<Classifier>& hypotheses,
                                  const std::vector<std::uint64_t>& counts);
Classifier weighted_majority_vote(const std::vector<Classifier>& hypotheses,
                                  const std::vector<double>& weights);
Classifier weighted_majority_vote(const Transcript& transcript);

struct HalvingResult {
    Classifier output;   // valid iff completed
    bool completed = false;
    int eq_count = 0;
    std::vector<Classifier> queried;
};

// Version-space halving. The callable answers an equivalence query with Yes
// or a counterexample; std::nullopt aborts the run (budget exhausted).
// Requires the realizable setting; an emptied version space throws.
HalvingResult halving_learner(
    const ConceptClass& C,
    const std::function<std::optional<EqResult>(const Classifier&)>& eq);

struct LearnResult {
    Classifier output;
    Transcript transcript;
    BudgetParams budget;
    bool budget_exhausted = false;
    double epsilon = 0.0;  // tolerance handed to the budgeted run
    double delta = 0.0;
    CallReport oracle_calls;  // calls spent by this run only
};

// Halving backbone with every ideal EQ replaced by repeated imperfect EQs
// under a global budget; on exhaustion returns the weighted majority vote of
// the transcript. Output is 4*epsilon-close with probability >= 1 - 2*delta.
LearnResult learn_with_budget(const ConceptClass& C, SampleOracle& o, double epsilon, double delta,
                              SeededRng& rng);

// (epsilon, delta)-PAC learner: learn_with_budget at (epsilon/4, delta/2).
LearnResult pac_learn(const ConceptClass& C, SampleOracle& o, double epsilon, double delta,
                      SeededRng& rng);

// JSON report for one learning run:
// {epsilon, delta, seed, T_E, R, transcript: [{hypothesis_bits, n_i}],
//  output_bits, distance_to_truth, oracle_calls_forward, oracle_calls_inverse}
nlohmann::ordered_json learn_report(const LearnResult& result, double epsilon, double delta,
                                    std::uint64_t seed, const Classifier& truth,
                                    const Distribution& D);
std::string learn_report_json(const LearnResult& result, double epsilon, double delta,
                              std::uint64_t seed, const Classifier& truth, const Distribution& D);

}  // namespace qpac
