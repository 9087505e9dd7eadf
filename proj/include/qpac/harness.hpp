// harness.hpp
// Experiment drivers behind the CLI: seeded scenario generation, trial
// execution (optionally across worker threads), and CSV/JSON report emission.

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qpac/eqlearn.hpp"
#include "qpac/grover.hpp"
#include "qpac/reduction.hpp"

namespace qpac {

struct ExperimentConfig {
    std::string experiment;  // grover-stats | learn | scaling | reduction-check | vc | junta
    nlohmann::json class_spec;
    nlohmann::json distribution_spec;
    std::vector<double> epsilons;  // strictly decreasing
    double delta = 0.1;
    int trials = 1;
    std::uint64_t seed = 0;
    std::string out = "qpac_out";
    bool check = false;
    bool record_wall_time = false;
    int workers = 0;  // 0 = hardware concurrency, 1 = serial
    nlohmann::json raw;  // full document, for command-specific fields

    void validate() const;
};

// Parses and validates a config document; the experiment name may be forced
// by the CLI subcommand. Throws std::invalid_argument on any problem.
ExperimentConfig parse_config(const std::string& json_text, const std::string& forced_experiment = "");
ExperimentConfig load_config(const std::string& path, const std::string& forced_experiment = "");

// Named concept-class builders:
//   {"kind":"full","domain_size":n}   all 2^n classifiers on an n-point domain
//   {"kind":"points","domain_size":n} indicator functions of single points
//   {"kind":"junta","n":n,"k":k}      k-juntas on {0,1}^n
//   {"kind":"inline","domain_size":n,"concepts":[bitstrings]}
//   {"kind":"file","path":p}          JSON document (see concepts module)
ConceptClass build_concept_class(const nlohmann::json& spec);

// Named distribution families; epsilon feeds the perturbed-delta family and
// rng the random family:
//   {"kind":"uniform"}
//   {"kind":"perturbed_delta","x0":0}            support defaults to all of X
//   {"kind":"random"}                            Dirichlet(1) via the trial rng
//   {"kind":"inline","probs":[...]}
Distribution build_distribution(const nlohmann::json& spec, int domain_size, double epsilon,
                                SeededRng& rng);

// One row per trial; schema fixed across experiments. distance is empty for
// experiments where it has no meaning.
struct RunRecord {
    std::string experiment;
    double epsilon = 0.0;
    double delta = 0.0;
    std::uint64_t seed = 0;
    std::uint64_t oracle_calls = 0;
    bool success = false;
    std::optional<double> distance;
    std::uint64_t wall_ms = 0;
};

// Shortest decimal string that round-trips to the same double.
std::string format_double(double v);

std::string run_records_csv(const std::vector<RunRecord>& records);

// Randomized Grover scenario: seeded domain, distribution, concept, good
// subset and tolerance. With force_good_mass the good subset is topped up
// with graph pairs until its mass reaches epsilon.
struct GroverScenario {
    Distribution D;
    Classifier c;
    GoodSubset G;
    double epsilon = 0.0;
    double mass = 0.0;  // graph mass of G
};

GroverScenario random_grover_scenario(SeededRng& rng, int max_domain, bool force_good_mass,
                                      double min_epsilon = 0.001, double max_epsilon = 1.0);

// Statistics helpers used by the drivers and the acceptance suite.
double median(std::vector<double> values);
double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

// Runs fn(trial) for trial = 0..n-1, possibly on several workers. Each trial
// must derive its own rng from (seed, trial); results are then invariant to
// the worker count.
void parallel_for(int n, int workers, const std::function<void(int)>& fn);

// Classical baseline for the scaling comparison: draws
// ceil((1/eps)(ln|C| + ln(1/delta))) labelled examples and returns the first
// hypothesis in C consistent with all of them, plus the sample count.
struct ClassicalBaselineResult {
    Classifier output;
    std::uint64_t samples = 0;
};
ClassicalBaselineResult classical_consistent_learner(const ConceptClass& C, const Classifier& c,
                                                     const Distribution& D, double epsilon,
                                                     double delta, SeededRng& rng);

// Experiment drivers. Each writes <out>.csv (when it has per-trial rows) and
// <out>.json, and returns a process exit code: 0 ok, 3 when --check is set
// and an acceptance threshold fails.
int cmd_grover_stats(const ExperimentConfig& config);
int cmd_learn(const ExperimentConfig& config);
int cmd_scaling(const ExperimentConfig& config);
int cmd_reduction_check(const ExperimentConfig& config);
int cmd_vc(const ExperimentConfig& config);
int cmd_junta(const ExperimentConfig& config);

int run_experiment(const ExperimentConfig& config);

}  // namespace qpac
