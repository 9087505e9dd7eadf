// grover.hpp
// Grover operator assembled from sample-oracle calls and the randomized
// iteration-count search subroutine for an unknown good mass, with exact
// probability accounting by amplitude propagation.

#pragma once

#include <utility>
#include <vector>

#include "qpac/core_sim.hpp"

namespace qpac {

// Target pairs (x, b). The search succeeds when the measured labelled example
// lands in this set. May be empty.
struct GoodSubset {
    std::vector<std::pair<int, int>> pairs;

    bool contains(int x, int b) const;

    // G = {(x, 1-h(x)) : x in X}: the counterexample set for hypothesis h.
    static GoodSubset counterexample_set(const Classifier& h);
};

// P_{X~D}[(X, c(X)) in G]: only pairs on the graph of c carry mass.
double good_mass(const Distribution& D, const Classifier& c, const GoodSubset& G);

// Number of iteration choices M = ceil(2/sqrt(epsilon)); N is drawn uniformly
// from {0, ..., M-1}.
int grover_schedule_bound(double epsilon);

struct GroverAngles {
    double theta = 0.0;  // sin(theta) = sqrt(good mass)
    int schedule = 0;    // M
};

GroverAngles grover_angles(double mass, double epsilon);

// Reflection 1 - 2 Pi_G: diagonal, -1 exactly on basis states whose (x, label)
// lies in G, for every ancilla value. Requires a single label qubit.
Eigen::MatrixXcd reflection(const GoodSubset& G, const RegisterLayout& layout);

// Reflection 1 - 2 |psi><psi|.
Eigen::MatrixXcd reflection(const StateVector& psi);

// D = -R_psi R_G realized as -(O R_IN O^dag) R_G. Each counted application
// charges one forward and one inverse oracle call; R_G and R_IN are free.
class GroverOperator {
  public:
    GroverOperator(SampleOracle& oracle, const GoodSubset& G);

    // Counted application (one O and one O^dag call).
    StateVector apply(const StateVector& s);

    // Uncounted application, for exact probability analysis.
    StateVector propagate(const StateVector& s) const;

    // Dense -(O R_IN O^dag) R_G, assembled from the oracle matrix (uncounted).
    Eigen::MatrixXcd matrix() const;

    // Dense -(1 - 2|psi><psi|) R_G built without the oracle.
    static Eigen::MatrixXcd direct_matrix(const StateVector& psi, const GoodSubset& G);

    const std::vector<Eigen::Index>& good_indices() const { return good_indices_; }

  private:
    StateVector half_step(const StateVector& s) const;  // everything but the oracle calls

    SampleOracle* oracle_;
    GoodSubset good_;
    std::vector<Eigen::Index> good_indices_;
};

struct GroverOutcome {
    int x = 0;
    int b = 0;
    bool succeeded = false;
    int iterations_used = 0;          // N
    std::uint64_t oracle_calls = 0;   // 1 + 2N for this run
};

// Algorithm: prepare psi_c = O|IN> (1 call), draw N uniformly from
// {0,...,M-1}, apply D N times (2N calls), measure, report success by
// membership (x,b) in G.
GroverOutcome grover_search(SampleOracle& o, const GoodSubset& G, double epsilon, SeededRng& rng);

// (1/M) sum_{N=0}^{M-1} ||Pi_G D^N psi_c||^2 by exact amplitude propagation.
double exact_success_probability(const SampleOracle& o, const GoodSubset& G, double epsilon);

// p_s = 1/2 - sin(4 M theta) / (4 M sin(2 theta)). Throws std::domain_error
// at the singular angles where sin(2 theta) = 0.
double closed_form_ps(double theta, int M);

struct GoodPairProbability {
    int x = 0;
    int b = 0;
    double probability = 0.0;
};

// Exact law of the measured (x,b) conditioned on success. Requires a positive
// success probability.
std::vector<GoodPairProbability> conditional_output_distribution(const SampleOracle& o,
                                                                 const GoodSubset& G,
                                                                 double epsilon);

}  // namespace qpac
