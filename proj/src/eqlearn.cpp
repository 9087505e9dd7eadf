#include "qpac/eqlearn.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace qpac {

std::uint64_t Transcript::total() const {
    std::uint64_t t = 0;
    for (const auto& e : entries) t += e.count;
    return t;
}

void Transcript::record(const Classifier& h) {
    for (auto& e : entries) {
        if (e.hypothesis == h) {
            ++e.count;
            return;
        }
    }
    entries.push_back({h, 1});
}

std::vector<double> Transcript::time_spent_weights() const {
    const double t = static_cast<double>(total());
    std::vector<double> w;
    w.reserve(entries.size());
    for (const auto& e : entries) w.push_back(static_cast<double>(e.count) / t);
    return w;
}

int halving_query_bound(std::size_t class_size) {
    if (class_size == 0) throw std::invalid_argument("empty concept class");
    int log2_floor = 0;
    while (class_size >> (log2_floor + 1)) ++log2_floor;
    return log2_floor + 1;
}

std::uint64_t imperfect_eq_budget(int t_e, double delta, double p) {
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0,1)");
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("p must lie in (0,1)");
    const double r = 6.0 * t_e / p + 3.0 / (2.0 * p * p) * std::log(1.0 / delta);
    return static_cast<std::uint64_t>(std::ceil(r));
}

BudgetParams BudgetParams::for_class(std::size_t class_size, double delta) {
    BudgetParams bp;
    bp.t_e = halving_query_bound(class_size);
    bp.p = 0.09;
    bp.budget = imperfect_eq_budget(bp.t_e, delta, bp.p);
    return bp;
}

EqResult ideal_eq(const Classifier& h, const Classifier& c, const Distribution& D, SeededRng& rng) {
    if (h.domain_size() != c.domain_size() || h.domain_size() != D.domain_size())
        throw std::invalid_argument("ideal_eq: domain mismatch");
    D.validate();
    if (h == c) return {EqKind::Yes, -1, -1, false};

    double mass = 0.0;
    for (int x = 0; x < h.domain_size(); ++x)
        if (h(x) != c(x)) mass += D(x);
    if (mass <= 0.0) return {EqKind::Yes, -1, -1, true};

    const double u = rng.next_double() * mass;
    double acc = 0.0;
    int pick = -1;
    for (int x = 0; x < h.domain_size(); ++x) {
        if (h(x) != c(x)) {
            acc += D(x);
            pick = x;
            if (u < acc) break;
        }
    }
    return {EqKind::Counterexample, pick, c(pick), false};
}

EqResult imperfect_eq(const Classifier& h, SampleOracle& o, double epsilon, SeededRng& rng) {
    if (h.domain_size() != o.layout().index_dim)
        throw std::invalid_argument("imperfect_eq: hypothesis/layout mismatch");
    const GoodSubset G = GoodSubset::counterexample_set(h);
    const GroverOutcome r = grover_search(o, G, epsilon, rng);
    if (r.succeeded) return {EqKind::Counterexample, r.x, r.b, false};
    return {EqKind::Failure, r.x, r.b, false};
}

Classifier weighted_majority_vote(const std::vector<Classifier>& hypotheses,
                                  const std::vector<std::uint64_t>& counts) {
    if (hypotheses.empty() || hypotheses.size() != counts.size())
        throw std::invalid_argument("weighted_majority_vote: bad inputs");
    const int n = hypotheses.front().domain_size();
    std::uint64_t total = 0;
    for (std::uint64_t c : counts) total += c;
    if (total == 0) throw std::invalid_argument("weighted_majority_vote: zero total weight");

    Classifier out;
    out.table.assign(static_cast<std::size_t>(n), 0);
    for (int x = 0; x < n; ++x) {
        std::uint64_t ones = 0;
        for (std::size_t i = 0; i < hypotheses.size(); ++i)
            if (hypotheses[i](x)) ones += counts[i];
        // integer comparison keeps the tie rule (ties -> 0) exact
        out.table[static_cast<std::size_t>(x)] = 2 * ones > total ? 1 : 0;
    }
    return out;
}

Classifier weighted_majority_vote(const std::vector<Classifier>& hypotheses,
                                  const std::vector<double>& weights) {
    if (hypotheses.empty() || hypotheses.size() != weights.size())
        throw std::invalid_argument("weighted_majority_vote: bad inputs");
    const int n = hypotheses.front().domain_size();
    Classifier out;
    out.table.assign(static_cast<std::size_t>(n), 0);
    for (int x = 0; x < n; ++x) {
        double ones = 0.0, zeros = 0.0;
        for (std::size_t i = 0; i < hypotheses.size(); ++i)
            (hypotheses[i](x) ? ones : zeros) += weights[i];
        out.table[static_cast<std::size_t>(x)] = ones > zeros + 1e-12 ? 1 : 0;
    }
    return out;
}

Classifier weighted_majority_vote(const Transcript& transcript) {
    std::vector<Classifier> hs;
    std::vector<std::uint64_t> ns;
    for (const auto& e : transcript.entries) {
        hs.push_back(e.hypothesis);
        ns.push_back(e.count);
    }
    return weighted_majority_vote(hs, ns);
}

HalvingResult halving_learner(
    const ConceptClass& C,
    const std::function<std::optional<EqResult>(const Classifier&)>& eq) {
    C.validate();
    std::vector<Classifier> version_space = C.members;
    HalvingResult res;

    while (true) {
        if (version_space.size() == 1) {
            res.output = version_space.front();
            res.completed = true;
            return res;
        }
        const Classifier h = weighted_majority_vote(
            version_space, std::vector<std::uint64_t>(version_space.size(), 1));
        const auto answer = eq(h);
        if (!answer.has_value()) return res;  // aborted by the caller
        ++res.eq_count;
        res.queried.push_back(h);

        switch (answer->kind) {
            case EqKind::Yes:
                res.output = h;
                res.completed = true;
                return res;
            case EqKind::Counterexample: {
                const int x = answer->x;
                const int y = answer->label;
                if (h(x) == y) throw std::logic_error("halving: counterexample agrees with query");
                std::erase_if(version_space, [&](const Classifier& v) { return v(x) != y; });
                if (version_space.empty())
                    throw std::logic_error("halving: version space emptied; concept not in class");
                break;
            }
            case EqKind::Failure:
                throw std::logic_error("halving: callable must not surface Failure");
        }
    }
}

LearnResult learn_with_budget(const ConceptClass& C, SampleOracle& o, double epsilon, double delta,
                              SeededRng& rng) {
    const LearningParams params(epsilon, delta);
    C.validate();
    if (C.domain_size() != o.layout().index_dim)
        throw std::invalid_argument("learn_with_budget: class/oracle domain mismatch");

    LearnResult res;
    res.epsilon = params.epsilon;
    res.delta = params.delta;
    res.budget = BudgetParams::for_class(C.size(), delta);

    const CallReport before = o.call_report();
    std::uint64_t used = 0;
    auto budgeted_eq = [&](const Classifier& h) -> std::optional<EqResult> {
        while (used < res.budget.budget) {
            const EqResult r = imperfect_eq(h, o, epsilon, rng);
            ++used;
            res.transcript.record(h);
            if (r.kind == EqKind::Counterexample) return r;
        }
        return std::nullopt;
    };

    const HalvingResult hr = halving_learner(C, budgeted_eq);
    res.budget_exhausted = !hr.completed;
    res.output = hr.completed ? hr.output : weighted_majority_vote(res.transcript);

    const CallReport after = o.call_report();
    res.oracle_calls = {after.forward - before.forward, after.inverse - before.inverse};
    return res;
}

LearnResult pac_learn(const ConceptClass& C, SampleOracle& o, double epsilon, double delta,
                      SeededRng& rng) {
    const LearningParams params(epsilon, delta);
    return learn_with_budget(C, o, params.epsilon / 4.0, params.delta / 2.0, rng);
}

nlohmann::ordered_json learn_report(const LearnResult& result, double epsilon, double delta,
                                    std::uint64_t seed, const Classifier& truth,
                                    const Distribution& D) {
    nlohmann::ordered_json j;
    j["epsilon"] = epsilon;
    j["delta"] = delta;
    j["seed"] = seed;
    j["T_E"] = result.budget.t_e;
    j["R"] = result.budget.budget;
    auto& tr = j["transcript"] = nlohmann::ordered_json::array();
    for (const auto& e : result.transcript.entries) {
        nlohmann::ordered_json entry;
        entry["hypothesis_bits"] = e.hypothesis.bits();
        entry["n_i"] = e.count;
        tr.push_back(std::move(entry));
    }
    j["output_bits"] = result.output.bits();
    j["distance_to_truth"] = distance(result.output, truth, D);
    j["oracle_calls_forward"] = result.oracle_calls.forward;
    j["oracle_calls_inverse"] = result.oracle_calls.inverse;
    return j;
}

std::string learn_report_json(const LearnResult& result, double epsilon, double delta,
                              std::uint64_t seed, const Classifier& truth, const Distribution& D) {
    return learn_report(result, epsilon, delta, seed, truth, D).dump();
}

}  // namespace qpac
