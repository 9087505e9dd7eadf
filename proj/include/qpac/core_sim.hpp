// core_sim.hpp
// Dense complex statevector simulation over structured registers: unitary
// application, Born-rule measurement with seeded randomness, and the
// call-counted quantum sample oracle O_c |IN> = sum_x sqrt(D(x)) |x c(x)>.

#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "qpac/concepts.hpp"
#include "qpac/rng.hpp"

namespace qpac {

// Register plan: an index register over X (arbitrary dimension), a label
// register of label_qubits, and ancilla_qubits ancillas. Basis enumeration
// is index-major: id = (x * 2^label_qubits + label) * 2^ancilla_qubits + anc.
struct RegisterLayout {
    int index_dim = 0;
    int label_qubits = 1;
    int ancilla_qubits = 0;

    int label_dim() const { return 1 << label_qubits; }
    int ancilla_dim() const { return 1 << ancilla_qubits; }
    Eigen::Index total_dim() const {
        return static_cast<Eigen::Index>(index_dim) * label_dim() * ancilla_dim();
    }

    Eigen::Index basis_index(int x, int label, int ancilla = 0) const {
        return (static_cast<Eigen::Index>(x) * label_dim() + label) * ancilla_dim() + ancilla;
    }

    void validate() const;

    bool operator==(const RegisterLayout&) const = default;
};

struct BasisOutcome {
    int x = 0;
    int label = 0;
    int ancilla = 0;
};

struct StateVector {
    Eigen::VectorXcd amplitudes;
    RegisterLayout layout;

    double norm() const { return amplitudes.norm(); }
    void require_normalized(double tol = 1e-9) const;

    BasisOutcome decode(Eigen::Index id) const;

    static StateVector zero(const RegisterLayout& layout);
    static StateVector basis(const RegisterLayout& layout, int x, int label = 0, int ancilla = 0);
};

// max |(U^dag U - I)_{ij}|
double unitarity_error(const Eigen::MatrixXcd& U);

struct CallReport {
    std::uint64_t forward = 0;
    std::uint64_t inverse = 0;
    std::uint64_t total() const { return forward + inverse; }
};

// State-preparation oracle with per-direction call counters. The matrix is a
// Householder reflection, so O = O^dag, but forward and inverse applications
// are still charged to separate counters: the total is the learning
// complexity metric everything downstream reports.
class SampleOracle {
  public:
    SampleOracle(Eigen::MatrixXcd matrix, RegisterLayout layout, Classifier hidden,
                 Distribution dist, Eigen::Index in_index);

    const Eigen::MatrixXcd& matrix() const { return matrix_; }
    const RegisterLayout& layout() const { return layout_; }
    const Classifier& hidden_concept() const { return concept_; }
    const Distribution& distribution() const { return dist_; }
    Eigen::Index in_index() const { return in_index_; }
    StateVector in_state() const;

    StateVector apply(const StateVector& s, bool inverse = false);

    CallReport call_report() const { return {forward_calls_, inverse_calls_}; }

  private:
    Eigen::MatrixXcd matrix_;
    RegisterLayout layout_;
    Classifier concept_;
    Distribution dist_;
    Eigen::Index in_index_;
    std::uint64_t forward_calls_ = 0;
    std::uint64_t inverse_calls_ = 0;
};

// O acting as O|IN> = psi_c with |IN> = |x_hat 0>, x_hat the first index.
// Completed off |IN> as the Householder reflection about |IN> + psi_c.
SampleOracle build_sample_oracle(const Classifier& c, const Distribution& D, const RegisterLayout& layout);

// The quantum sample sum_x sqrt(D(x)) |x c(x)>, ancillas in |0>.
StateVector quantum_sample_state(const Classifier& c, const Distribution& D, const RegisterLayout& layout);

// Apply U (or U^dag) without touching any counter. Named distinctly from the
// counted overload so that unqualified calls with Eigen arguments can never
// drift to std::apply through ADL.
StateVector apply_unitary(const Eigen::MatrixXcd& U, const StateVector& s, bool inverse = false);

// Counted application.
inline StateVector apply(SampleOracle& o, const StateVector& s, bool inverse = false) {
    return o.apply(s, inverse);
}

// Born-rule measurement in the computational basis. Deterministic given the
// rng state. Throws if the norm deviates from 1 by more than 1e-6.
BasisOutcome measure(const StateVector& s, SeededRng& rng);

inline CallReport call_report(const SampleOracle& o) { return o.call_report(); }

}  // namespace qpac
