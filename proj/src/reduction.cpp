#include "qpac/reduction.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace qpac {

namespace {

using namespace std::complex_literals;

constexpr double kInvSqrt2 = 0.70710678118654752440;

// Single-qubit gate on the label register.
void gate_on_label(StateVector& s, const Eigen::Matrix2cd& g) {
    const RegisterLayout& L = s.layout;
    for (int x = 0; x < L.index_dim; ++x) {
        for (int a = 0; a < L.ancilla_dim(); ++a) {
            const Eigen::Index i0 = L.basis_index(x, 0, a);
            const Eigen::Index i1 = L.basis_index(x, 1, a);
            const std::complex<double> v0 = s.amplitudes(i0), v1 = s.amplitudes(i1);
            s.amplitudes(i0) = g(0, 0) * v0 + g(0, 1) * v1;
            s.amplitudes(i1) = g(1, 0) * v0 + g(1, 1) * v1;
        }
    }
}

// Single-qubit gate on the flag (ancilla) register.
void gate_on_flag(StateVector& s, const Eigen::Matrix2cd& g) {
    const RegisterLayout& L = s.layout;
    for (int x = 0; x < L.index_dim; ++x) {
        for (int l = 0; l < L.label_dim(); ++l) {
            const Eigen::Index i0 = L.basis_index(x, l, 0);
            const Eigen::Index i1 = L.basis_index(x, l, 1);
            const std::complex<double> v0 = s.amplitudes(i0), v1 = s.amplitudes(i1);
            s.amplitudes(i0) = g(0, 0) * v0 + g(0, 1) * v1;
            s.amplitudes(i1) = g(1, 0) * v0 + g(1, 1) * v1;
        }
    }
}

Eigen::Matrix2cd hadamard2() {
    Eigen::Matrix2cd h;
    h << kInvSqrt2, kInvSqrt2, kInvSqrt2, -kInvSqrt2;
    return h;
}

Eigen::Matrix2cd s_dagger2() {
    Eigen::Matrix2cd g = Eigen::Matrix2cd::Identity();
    g(1, 1) = -1.0i;
    return g;
}

// Constant phase e^{i alpha} on the (label, flag) branch.
void controlled_const_phase(StateVector& s, int label, int flag, double alpha) {
    const RegisterLayout& L = s.layout;
    const std::complex<double> ph = std::exp(1.0i * alpha);
    for (int x = 0; x < L.index_dim; ++x)
        s.amplitudes(L.basis_index(x, label, flag)) *= ph;
}

// Householder mapping the uniform superposition over Y to |x0>, applied to
// the index register on the flag = 0 slice.
void map_uniform_to_x0_if_flag0(StateVector& s) {
    const RegisterLayout& L = s.layout;
    const int d = L.index_dim - 1;
    Eigen::VectorXcd w = Eigen::VectorXcd::Zero(L.index_dim);
    w(0) = -1.0;  // |x0>
    for (int x = 1; x <= d; ++x) w(x) = 1.0 / std::sqrt(static_cast<double>(d));
    // The two states are orthonormal, so I - w w^dag swaps them.
    for (int l = 0; l < L.label_dim(); ++l) {
        std::complex<double> overlap = 0.0;
        for (int x = 0; x < L.index_dim; ++x)
            overlap += std::conj(w(x)) * s.amplitudes(L.basis_index(x, l, 0));
        for (int x = 0; x < L.index_dim; ++x)
            s.amplitudes(L.basis_index(x, l, 0)) -= w(x) * overlap;
    }
}

void x_on_flag_if_index_not_x0(StateVector& s) {
    const RegisterLayout& L = s.layout;
    for (int x = 1; x < L.index_dim; ++x)
        for (int l = 0; l < L.label_dim(); ++l)
            std::swap(s.amplitudes(L.basis_index(x, l, 0)), s.amplitudes(L.basis_index(x, l, 1)));
}

StateVector initial_superposition(int d) {
    StateVector s = StateVector::zero(reduction_layout(d));
    const double amp = 1.0 / (2.0 * std::sqrt(static_cast<double>(d)));
    for (int x = 1; x <= d; ++x)
        for (int l = 0; l < 2; ++l)
            for (int a = 0; a < 2; ++a) s.amplitudes(s.layout.basis_index(x, l, a)) = amp;
    return s;
}

// The circuit body (everything after the initial superposition). Records the
// state after each stage when checkpoints is non-null.
void apply_circuit_body(StateVector& s, PhaseOracle& oracle, double eta,
                        std::vector<StateVector>* checkpoints) {
    auto mark = [&] {
        if (checkpoints != nullptr) checkpoints->push_back(s);
    };

    // Four controlled phases: branches (label, flag) = (0,0) -> e^{+i eta},
    // (0,1) -> e^{-i eta}, (1,0) -> O~_u, (1,1) -> O~_u^dag.
    controlled_const_phase(s, 0, 0, eta);
    controlled_const_phase(s, 0, 1, -eta);
    oracle.apply_shifted_controlled(s, 1, 0, /*dagger=*/false);
    oracle.apply_shifted_controlled(s, 1, 1, /*dagger=*/true);
    mark();

    gate_on_flag(s, hadamard2());
    mark();

    gate_on_flag(s, s_dagger2());
    mark();

    gate_on_label(s, hadamard2());
    mark();

    map_uniform_to_x0_if_flag0(s);
    mark();

    x_on_flag_if_index_not_x0(s);
    mark();

    // The final H acts on the flag unconditionally; the conditional reading
    // leaves the x0 branch short of the target state.
    gate_on_flag(s, hadamard2());
    mark();
}

}  // namespace

std::string BitString::str() const {
    std::string s(bits.size(), '0');
    for (std::size_t i = 0; i < bits.size(); ++i) s[i] = bits[i] ? '1' : '0';
    return s;
}

BitString BitString::from_value(std::uint64_t v, int d) {
    std::vector<std::uint8_t> b(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) b[static_cast<std::size_t>(i)] = (v >> i) & 1ull;
    return BitString(std::move(b));
}

PhaseParams PhaseParams::from_epsilon(double epsilon) {
    if (!(epsilon > 0.0 && epsilon <= 0.25))
        throw std::invalid_argument("PhaseParams: epsilon must lie in (0, 1/4]");
    PhaseParams p;
    p.epsilon = epsilon;
    p.eta = std::asin(std::sqrt(4.0 * epsilon));
    return p;
}

RegisterLayout reduction_layout(int d) {
    if (d < 1) throw std::invalid_argument("reduction_layout: d >= 1 required");
    RegisterLayout layout;
    layout.index_dim = d + 1;
    layout.label_qubits = 1;
    layout.ancilla_qubits = 1;
    layout.validate();
    return layout;
}

PhaseOracle::PhaseOracle(BitString u, double eta) : u_(std::move(u)), eta_(eta) {
    if (u_.size() < 1) throw std::invalid_argument("PhaseOracle: empty bit string");
}

void PhaseOracle::apply(StateVector& s, bool inverse) {
    const RegisterLayout& L = s.layout;
    if (L.index_dim != index_dim()) throw std::invalid_argument("PhaseOracle: layout mismatch");
    const double sgn = inverse ? -1.0 : 1.0;
    for (int x = 1; x < L.index_dim; ++x) {
        const std::complex<double> ph = std::exp(1.0i * (sgn * 2.0 * eta_ * u_.bit(x - 1)));
        for (int l = 0; l < L.label_dim(); ++l)
            for (int a = 0; a < L.ancilla_dim(); ++a) s.amplitudes(L.basis_index(x, l, a)) *= ph;
    }
    (inverse ? inverse_calls_ : forward_calls_) += 1;
}

void PhaseOracle::apply_controlled(StateVector& s, int label, int flag, bool inverse) {
    const RegisterLayout& L = s.layout;
    if (L.index_dim != index_dim()) throw std::invalid_argument("PhaseOracle: layout mismatch");
    const double sgn = inverse ? -1.0 : 1.0;
    for (int x = 1; x < L.index_dim; ++x) {
        const std::complex<double> ph = std::exp(1.0i * (sgn * 2.0 * eta_ * u_.bit(x - 1)));
        s.amplitudes(L.basis_index(x, label, flag)) *= ph;
    }
    (inverse ? inverse_calls_ : forward_calls_) += 1;
}

void PhaseOracle::apply_shifted_controlled(StateVector& s, int label, int flag, bool dagger) {
    const RegisterLayout& L = s.layout;
    if (L.index_dim != index_dim()) throw std::invalid_argument("PhaseOracle: layout mismatch");
    const double sgn = dagger ? -1.0 : 1.0;
    for (int x = 0; x < L.index_dim; ++x) {
        const double uhat = x == 0 ? 1.0 : u_.sign(x - 1);
        const std::complex<double> ph = std::exp(1.0i * (sgn * eta_ * uhat));
        s.amplitudes(L.basis_index(x, label, flag)) *= ph;
    }
    // O~_u = P_eta O_u^dag, so the plain form costs one inverse call and the
    // dagger costs one forward call.
    (dagger ? forward_calls_ : inverse_calls_) += 1;
}

Eigen::MatrixXcd phase_oracle_matrix(const BitString& u, double eta, bool inverse) {
    const int dim = u.size() + 1;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(dim, dim);
    const double sgn = inverse ? -1.0 : 1.0;
    for (int x = 1; x < dim; ++x) m(x, x) = std::exp(1.0i * (sgn * 2.0 * eta * u.bit(x - 1)));
    return m;
}

Eigen::MatrixXcd shifted_oracle_matrix(const BitString& u, double eta, bool dagger) {
    const int dim = u.size() + 1;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(dim, dim);
    const double sgn = dagger ? -1.0 : 1.0;
    for (int x = 0; x < dim; ++x) {
        const double uhat = x == 0 ? 1.0 : u.sign(x - 1);
        m(x, x) = std::exp(1.0i * (sgn * eta * uhat));
    }
    return m;
}

StateVector reduction_target_state(const BitString& u, double epsilon) {
    const PhaseParams p = PhaseParams::from_epsilon(epsilon);
    const int d = u.size();
    StateVector t = StateVector::zero(reduction_layout(d));
    const double c = std::cos(p.eta);
    const double s = std::sin(p.eta) / std::sqrt(static_cast<double>(d));
    for (int a = 0; a < 2; ++a) {
        t.amplitudes(t.layout.basis_index(0, 0, a)) = c * kInvSqrt2;
        for (int x = 1; x <= d; ++x)
            t.amplitudes(t.layout.basis_index(x, u.bit(x - 1), a)) = s * kInvSqrt2;
    }
    return t;
}

PacStateBuild build_pac_state(PhaseOracle& oracle, double epsilon) {
    const PhaseParams p = PhaseParams::from_epsilon(epsilon);
    if (std::abs(oracle.eta() - p.eta) > 1e-12)
        throw std::invalid_argument("build_pac_state: oracle eta does not match sin(eta) = sqrt(4 eps)");
    const int d = oracle.u().size();
    const CallReport before = oracle.call_report();

    PacStateBuild out;
    StateVector s = initial_superposition(d);
    out.checkpoints.push_back(s);
    apply_circuit_body(s, oracle, p.eta, &out.checkpoints);

    out.state = std::move(s);
    const CallReport after = oracle.call_report();
    out.controlled_calls = {after.forward - before.forward, after.inverse - before.inverse};
    return out;
}

PacStateBuild build_pac_state(const BitString& u, double epsilon) {
    PhaseOracle oracle(u, PhaseParams::from_epsilon(epsilon).eta);
    return build_pac_state(oracle, epsilon);
}

Classifier encoded_classifier(const BitString& u) {
    std::vector<std::uint8_t> table(static_cast<std::size_t>(u.size() + 1), 0);
    for (int i = 0; i < u.size(); ++i) table[static_cast<std::size_t>(i + 1)] = static_cast<std::uint8_t>(u.bit(i));
    return Classifier(std::move(table));
}

Distribution reduction_distribution(int d, double epsilon) {
    std::vector<int> Z(static_cast<std::size_t>(d + 1));
    for (int i = 0; i <= d; ++i) Z[static_cast<std::size_t>(i)] = i;
    return perturbed_delta(d + 1, Z, 0, epsilon);
}

SampleOracle synthesized_sample_oracle(const BitString& u, double epsilon) {
    const int d = u.size();
    const RegisterLayout layout = reduction_layout(d);
    const Eigen::Index dim = layout.total_dim();
    const Eigen::Index in_index = layout.basis_index(0, 0, 0);

    // Query-free preparation |IN> -> uniform-over-Y x |++>: Householder about
    // the difference of the two orthonormal states.
    const StateVector init = initial_superposition(d);
    Eigen::VectorXcd w = init.amplitudes;
    w(in_index) -= 1.0;
    const Eigen::MatrixXcd prep =
        Eigen::MatrixXcd::Identity(dim, dim) - w * w.adjoint();

    const double eta = PhaseParams::from_epsilon(epsilon).eta;
    Eigen::MatrixXcd circuit(dim, dim);
    PhaseOracle scratch(u, eta);
    for (Eigen::Index k = 0; k < dim; ++k) {
        StateVector col = StateVector::zero(layout);
        col.amplitudes = prep.col(k);
        apply_circuit_body(col, scratch, eta, nullptr);
        circuit.col(k) = col.amplitudes;
    }

    return SampleOracle(std::move(circuit), layout, encoded_classifier(u),
                        reduction_distribution(d, epsilon), in_index);
}

double bit_agreement(const Classifier& h, const BitString& u, const std::vector<int>& Y) {
    std::vector<int> points = Y;
    if (points.empty()) {
        points.resize(static_cast<std::size_t>(u.size()));
        for (int i = 0; i < u.size(); ++i) points[static_cast<std::size_t>(i)] = i + 1;
    }
    if (static_cast<int>(points.size()) != u.size())
        throw std::invalid_argument("bit_agreement: |Y| must equal |u|");
    int agree = 0;
    for (int i = 0; i < u.size(); ++i) {
        const int y = points[static_cast<std::size_t>(i)];
        if (y < 0 || y >= h.domain_size()) throw std::invalid_argument("bit_agreement: Y outside domain");
        if (h(y) == u.bit(i)) ++agree;
    }
    return static_cast<double>(agree) / u.size();
}

std::string reduction_check_json(const BitString& u, double epsilon) {
    const PacStateBuild b = build_pac_state(u, epsilon);
    const StateVector target = reduction_target_state(u, epsilon);
    const std::complex<double> overlap = target.amplitudes.dot(b.state.amplitudes);
    nlohmann::ordered_json j;
    j["d"] = u.size();
    j["epsilon"] = epsilon;
    j["u_bits"] = u.str();
    j["fidelity"] = std::norm(overlap);
    j["controlled_forward_calls"] = b.controlled_calls.forward;
    j["controlled_inverse_calls"] = b.controlled_calls.inverse;
    return j.dump();
}

}  // namespace qpac
