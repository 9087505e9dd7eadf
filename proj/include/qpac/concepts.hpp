// concepts.hpp
// Finite boolean concept classes, distributions over the domain, distances,
// shattering / VC-dimension tooling, and the special constructions used by
// the learning experiments (perturbed delta distributions, k-juntas).

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qpac/rng.hpp"

namespace qpac {

// Total boolean function on the finite domain X = {0, ..., n-1}.
struct Classifier {
    std::vector<std::uint8_t> table;  // table[x] in {0,1}

    Classifier() = default;
    explicit Classifier(std::vector<std::uint8_t> t) : table(std::move(t)) {}

    int domain_size() const { return static_cast<int>(table.size()); }
    int operator()(int x) const { return table[static_cast<std::size_t>(x)]; }

    bool operator==(const Classifier& other) const = default;

    std::string bits() const;                       // e.g. "0110", position x = value at x
    static Classifier from_bits(const std::string& s);
};

// Finite set of classifiers over a common domain. Members are deduplicated.
struct ConceptClass {
    std::vector<Classifier> members;

    int domain_size() const { return members.empty() ? 0 : members.front().domain_size(); }
    std::size_t size() const { return members.size(); }

    void validate() const;  // non-empty, uniform domain, no duplicates
};

// Probability vector over X.
struct Distribution {
    std::vector<double> probs;

    Distribution() = default;
    explicit Distribution(std::vector<double> p) : probs(std::move(p)) {}

    int domain_size() const { return static_cast<int>(probs.size()); }
    double operator()(int x) const { return probs[static_cast<std::size_t>(x)]; }
    double total() const;

    // Throws std::invalid_argument if any mass is negative or the total
    // deviates from 1 by more than tol.
    void validate(double tol = 1e-9) const;

    static Distribution uniform(int n);
};

struct LearningParams {
    double epsilon;
    double delta;

    LearningParams(double eps, double del);  // both must lie strictly in (0,1)
};

// Probability mass of the disagreement set {x : h1(x) != h2(x)} under D.
double distance(const Classifier& h1, const Classifier& h2, const Distribution& D);

// True iff all 2^|Y| labellings of Y appear among restrictions of members of C.
bool is_shattered(const ConceptClass& C, const std::vector<int>& Y);

// Exact VC dimension by levelwise subset search with monotonicity pruning
// (a set can only be shattered if all of its subsets are). Guarded to
// domains with |X| <= 20.
int vc_dimension(const ConceptClass& C);

// Unpruned exhaustive reference: enumerates every subset of X directly.
// Intended as an independent cross-check at small sizes (|X| <= 6 or so).
int vc_dimension_naive(const ConceptClass& C);

// D(x0) = 1-4eps, D(y) = 4eps/(|Z|-1) for y in Z\{x0}, zero off Z.
// Requires 0 < eps <= 1/4 and |Z| >= 2.
Distribution perturbed_delta(int domain_size, const std::vector<int>& Z, int x0, double epsilon);

// All boolean functions on {0,1}^n that depend on at most k coordinates,
// deduplicated. Domain index x encodes the input bits (bit i of x = i-th
// coordinate). Guarded against combinatorial blowup.
ConceptClass junta_class(int n, int k);

// VC upper bound for the k-junta class: k*log2(e*n/k) + 2^k.
double junta_vc_bound(int n, int k);

// Draw x with probability D(x).
int sample(const Distribution& D, SeededRng& rng);

// JSON document: {"domain_size": n, "concepts": [bitstrings], "distribution": [floats]}.
// Bitstring character at position x is the value at domain point x, matching
// the basis enumeration order used by the simulator.
std::string concept_class_to_json(const ConceptClass& C, const Distribution* D = nullptr);
void concept_class_from_json(const std::string& text, ConceptClass& C, Distribution* D = nullptr);

}  // namespace qpac
