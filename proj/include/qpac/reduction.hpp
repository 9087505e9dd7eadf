// reduction.hpp
// Lower-bound machinery: bit-string concepts over a shattered set, the weak
// phase-kickback oracle O_u |x> = e^{2 i eta u_x} |x>, and the two-ancilla
// circuit that synthesizes the PAC state-preparation oracle from one
// controlled phase-oracle call and one controlled inverse call.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qpac/core_sim.hpp"

namespace qpac {

// u in {0,1}^d indexed by Y; u_hat(i) = (-1)^{u_i}.
struct BitString {
    std::vector<std::uint8_t> bits;

    BitString() = default;
    explicit BitString(std::vector<std::uint8_t> b) : bits(std::move(b)) {}

    int size() const { return static_cast<int>(bits.size()); }
    int bit(int i) const { return bits[static_cast<std::size_t>(i)]; }
    double sign(int i) const { return bit(i) ? -1.0 : 1.0; }

    std::string str() const;
    static BitString from_value(std::uint64_t v, int d);
};

struct PhaseParams {
    double eta = 0.0;
    double epsilon = 0.0;

    // sin(eta) = sqrt(4 epsilon); requires epsilon in (0, 1/4].
    static PhaseParams from_epsilon(double epsilon);
};

// Index register over {x0} u Y with x0 at index 0 and Y at 1..d; one label
// qubit (ends up holding u_x) and one flag ancilla.
RegisterLayout reduction_layout(int d);

// Diagonal phase oracle on the index register, with controlled variants.
// Every application of any variant charges one forward (or inverse) call.
// x0 carries no bit of u and is treated as u = 0.
class PhaseOracle {
  public:
    PhaseOracle(BitString u, double eta);

    const BitString& u() const { return u_; }
    double eta() const { return eta_; }
    int index_dim() const { return u_.size() + 1; }
    CallReport call_report() const { return {forward_calls_, inverse_calls_}; }

    // O_u (or O_u^dag) on the index register across all label/flag branches.
    void apply(StateVector& s, bool inverse = false);

    // Variant gated on exact (label, flag) values.
    void apply_controlled(StateVector& s, int label, int flag, bool inverse = false);

    // Shifted oracle O~_u = P_eta O_u^dag with O~_u|x> = e^{i eta u_hat_x}|x>.
    // dagger=false charges one inverse call (it wraps O_u^dag); dagger=true
    // charges one forward call.
    void apply_shifted_controlled(StateVector& s, int label, int flag, bool dagger);

  private:
    BitString u_;
    double eta_;
    std::uint64_t forward_calls_ = 0;
    std::uint64_t inverse_calls_ = 0;
};

// Dense forms on the (d+1)-dimensional index register, uncounted.
Eigen::MatrixXcd phase_oracle_matrix(const BitString& u, double eta, bool inverse = false);
Eigen::MatrixXcd shifted_oracle_matrix(const BitString& u, double eta, bool dagger = false);

// sqrt(1-4eps)|x0 0> + sqrt(4eps/d) sum_{x in Y} |x u_x>, flag in |+>.
StateVector reduction_target_state(const BitString& u, double epsilon);

// The circuit of the reduction, step by step. Checkpoints hold the state
// after every stage:
//   [0] uniform superposition over Y with both ancilla qubits in |+>
//   [1] after the four controlled phases
//   [2] after H on the flag qubit
//   [3] after S^dag on the flag qubit
//   [4] after H on the label qubit
//   [5] after the flag-conditioned map of uniform-over-Y to |x0>
//   [6] after the X on the flag for index != x0
//   [7] after the final (unconditional) H on the flag; equals the target
struct PacStateBuild {
    StateVector state;
    std::vector<StateVector> checkpoints;
    CallReport controlled_calls;  // exactly one forward and one inverse
};

PacStateBuild build_pac_state(PhaseOracle& oracle, double epsilon);
PacStateBuild build_pac_state(const BitString& u, double epsilon);

// Concept encoded by u on the reduction domain: c(x0) = 0, c(i) = u_{i-1}.
Classifier encoded_classifier(const BitString& u);

// Perturbed delta on the reduction domain with marked point x0 = 0.
Distribution reduction_distribution(int d, double epsilon);

// Sample oracle whose matrix is the full reduction circuit (including the
// fixed, query-free preparation of the initial superposition from |IN>).
// Each forward or inverse application of this oracle stands for one
// controlled phase-oracle call plus one controlled inverse call.
SampleOracle synthesized_sample_oracle(const BitString& u, double epsilon);

// Fraction of y in Y with h(y) = u_y. Y defaults to {1..d} when empty.
double bit_agreement(const Classifier& h, const BitString& u, const std::vector<int>& Y = {});

// JSON: {d, epsilon, u_bits, fidelity, controlled_forward_calls,
//        controlled_inverse_calls}
std::string reduction_check_json(const BitString& u, double epsilon);

}  // namespace qpac
