#include "qpac/grover.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qpac {

bool GoodSubset::contains(int x, int b) const {
    return std::find(pairs.begin(), pairs.end(), std::make_pair(x, b)) != pairs.end();
}

GoodSubset GoodSubset::counterexample_set(const Classifier& h) {
    GoodSubset g;
    g.pairs.reserve(static_cast<std::size_t>(h.domain_size()));
    for (int x = 0; x < h.domain_size(); ++x) g.pairs.emplace_back(x, 1 - h(x));
    return g;
}

double good_mass(const Distribution& D, const Classifier& c, const GoodSubset& G) {
    if (D.domain_size() != c.domain_size()) throw std::invalid_argument("good_mass: domain mismatch");
    std::vector<std::pair<int, int>> pairs = G.pairs;
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    double mass = 0.0;
    for (const auto& [x, b] : pairs) {
        if (x < 0 || x >= c.domain_size() || (b != 0 && b != 1))
            throw std::invalid_argument("good_mass: pair outside X x {0,1}");
        if (c(x) == b) mass += D(x);
    }
    return mass;
}

int grover_schedule_bound(double epsilon) {
    if (!(epsilon > 0.0 && epsilon <= 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1]");
    return static_cast<int>(std::ceil(2.0 / std::sqrt(epsilon)));
}

GroverAngles grover_angles(double mass, double epsilon) {
    if (mass < 0.0 || mass > 1.0 + 1e-12) throw std::invalid_argument("mass must lie in [0,1]");
    GroverAngles a;
    a.theta = std::asin(std::sqrt(std::clamp(mass, 0.0, 1.0)));
    a.schedule = grover_schedule_bound(epsilon);
    return a;
}

namespace {

std::vector<Eigen::Index> good_basis_indices(const GoodSubset& G, const RegisterLayout& layout) {
    if (layout.label_qubits != 1)
        throw std::invalid_argument("good subspace requires a single label qubit");
    std::vector<Eigen::Index> ids;
    for (const auto& [x, b] : G.pairs) {
        if (x < 0 || x >= layout.index_dim || (b != 0 && b != 1))
            throw std::invalid_argument("good pair outside layout");
        for (int a = 0; a < layout.ancilla_dim(); ++a) ids.push_back(layout.basis_index(x, b, a));
    }
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    return ids;
}

double good_probability(const StateVector& s, const std::vector<Eigen::Index>& ids) {
    double p = 0.0;
    for (Eigen::Index id : ids) p += std::norm(s.amplitudes(id));
    return p;
}

// One Grover step -(O R_IN O^dag) R_G via the oracle matrix, no counting.
StateVector propagate_step(const SampleOracle& o, const std::vector<Eigen::Index>& ids,
                           const StateVector& s) {
    StateVector t = s;
    for (Eigen::Index id : ids) t.amplitudes(id) = -t.amplitudes(id);
    t.amplitudes = o.matrix().adjoint() * t.amplitudes;
    t.amplitudes(o.in_index()) = -t.amplitudes(o.in_index());
    t.amplitudes = o.matrix() * t.amplitudes;
    t.amplitudes = -t.amplitudes;
    return t;
}

StateVector initial_sample_state(const SampleOracle& o) {
    StateVector s;
    s.layout = o.layout();
    s.amplitudes = o.matrix() * o.in_state().amplitudes;
    return s;
}

}  // namespace

Eigen::MatrixXcd reflection(const GoodSubset& G, const RegisterLayout& layout) {
    layout.validate();
    Eigen::MatrixXcd R = Eigen::MatrixXcd::Identity(layout.total_dim(), layout.total_dim());
    for (Eigen::Index id : good_basis_indices(G, layout)) R(id, id) = -1.0;
    return R;
}

Eigen::MatrixXcd reflection(const StateVector& psi) {
    const Eigen::Index dim = psi.amplitudes.size();
    return Eigen::MatrixXcd::Identity(dim, dim) - 2.0 * (psi.amplitudes * psi.amplitudes.adjoint());
}

GroverOperator::GroverOperator(SampleOracle& oracle, const GoodSubset& G)
    : oracle_(&oracle), good_(G), good_indices_(good_basis_indices(G, oracle.layout())) {}

StateVector GroverOperator::apply(const StateVector& s) {
    // -(O R_IN O^dag) R_G; only the two oracle applications are charged.
    StateVector t = s;
    for (Eigen::Index id : good_indices_) t.amplitudes(id) = -t.amplitudes(id);
    t = oracle_->apply(t, /*inverse=*/true);
    t.amplitudes(oracle_->in_index()) = -t.amplitudes(oracle_->in_index());
    t = oracle_->apply(t, /*inverse=*/false);
    t.amplitudes = -t.amplitudes;
    return t;
}

StateVector GroverOperator::propagate(const StateVector& s) const {
    return propagate_step(*oracle_, good_indices_, s);
}

Eigen::MatrixXcd GroverOperator::matrix() const {
    const Eigen::Index dim = oracle_->layout().total_dim();
    Eigen::MatrixXcd r_in = Eigen::MatrixXcd::Identity(dim, dim);
    r_in(oracle_->in_index(), oracle_->in_index()) = -1.0;
    const Eigen::MatrixXcd& O = oracle_->matrix();
    return -(O * r_in * O.adjoint()) * reflection(good_, oracle_->layout());
}

Eigen::MatrixXcd GroverOperator::direct_matrix(const StateVector& psi, const GoodSubset& G) {
    return -(reflection(psi) * reflection(G, psi.layout));
}

GroverOutcome grover_search(SampleOracle& o, const GoodSubset& G, double epsilon, SeededRng& rng) {
    const int M = grover_schedule_bound(epsilon);
    GroverOperator D(o, G);

    StateVector s = o.apply(o.in_state(), /*inverse=*/false);
    const int N = rng.uniform_int(M);
    for (int i = 0; i < N; ++i) s = D.apply(s);

    const BasisOutcome m = measure(s, rng);
    GroverOutcome out;
    out.x = m.x;
    out.b = m.label;
    out.succeeded = G.contains(m.x, m.label);
    out.iterations_used = N;
    out.oracle_calls = 1 + 2 * static_cast<std::uint64_t>(N);
    return out;
}

double exact_success_probability(const SampleOracle& o, const GoodSubset& G, double epsilon) {
    const int M = grover_schedule_bound(epsilon);
    const auto ids = good_basis_indices(G, o.layout());

    StateVector s = initial_sample_state(o);
    double acc = 0.0;
    for (int n = 0; n < M; ++n) {
        acc += good_probability(s, ids);
        if (n + 1 < M) s = propagate_step(o, ids, s);
    }
    return acc / M;
}

double closed_form_ps(double theta, int M) {
    if (M < 1) throw std::invalid_argument("closed_form_ps: M must be >= 1");
    const double s2 = std::sin(2.0 * theta);
    // theta = 0 or pi/2 in floating point lands within rounding of zero
    if (std::abs(s2) < 1e-12) throw std::domain_error("closed_form_ps: singular at sin(2 theta) = 0");
    return 0.5 - std::sin(4.0 * M * theta) / (4.0 * M * s2);
}

std::vector<GoodPairProbability> conditional_output_distribution(const SampleOracle& o,
                                                                 const GoodSubset& G,
                                                                 double epsilon) {
    const int M = grover_schedule_bound(epsilon);
    const RegisterLayout& layout = o.layout();
    if (layout.label_qubits != 1) throw std::invalid_argument("single label qubit required");

    std::vector<std::pair<int, int>> pairs = G.pairs;
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());

    const auto ids = good_basis_indices(G, layout);
    StateVector s = initial_sample_state(o);

    // Per-pair success mass accumulated over the uniform schedule draw.
    std::vector<double> mass(pairs.size(), 0.0);
    double total = 0.0;
    for (int n = 0; n < M; ++n) {
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            const auto& [x, b] = pairs[i];
            double p = 0.0;
            for (int a = 0; a < layout.ancilla_dim(); ++a)
                p += std::norm(s.amplitudes(layout.basis_index(x, b, a)));
            mass[i] += p;
            total += p;
        }
        if (n + 1 < M) s = propagate_step(o, ids, s);
    }
    if (total <= 0.0)
        throw std::invalid_argument("conditional_output_distribution: success probability is zero");

    std::vector<GoodPairProbability> out;
    out.reserve(pairs.size());
    for (std::size_t i = 0; i < pairs.size(); ++i)
        out.push_back({pairs[i].first, pairs[i].second, mass[i] / total});
    return out;
}

}  // namespace qpac
