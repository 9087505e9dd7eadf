#include "qpac/core_sim.hpp"

#include <cmath>
#include <stdexcept>

namespace qpac {

void RegisterLayout::validate() const {
    if (index_dim < 1) throw std::invalid_argument("layout: index_dim must be positive");
    if (label_qubits < 1) throw std::invalid_argument("layout: at least one label qubit required");
    if (ancilla_qubits < 0) throw std::invalid_argument("layout: negative ancilla count");
    if (index_dim > 4096) throw std::invalid_argument("layout: index_dim capped at 4096");
    if (total_dim() < 2) throw std::invalid_argument("layout: total dimension must be >= 2");
}

void StateVector::require_normalized(double tol) const {
    if (std::abs(norm() - 1.0) > tol) throw std::invalid_argument("state is not normalized");
}

BasisOutcome StateVector::decode(Eigen::Index id) const {
    BasisOutcome out;
    out.ancilla = static_cast<int>(id % layout.ancilla_dim());
    id /= layout.ancilla_dim();
    out.label = static_cast<int>(id % layout.label_dim());
    out.x = static_cast<int>(id / layout.label_dim());
    return out;
}

StateVector StateVector::zero(const RegisterLayout& layout) {
    layout.validate();
    StateVector s;
    s.layout = layout;
    s.amplitudes = Eigen::VectorXcd::Zero(layout.total_dim());
    return s;
}

StateVector StateVector::basis(const RegisterLayout& layout, int x, int label, int ancilla) {
    StateVector s = zero(layout);
    s.amplitudes(layout.basis_index(x, label, ancilla)) = 1.0;
    return s;
}

double unitarity_error(const Eigen::MatrixXcd& U) {
    const Eigen::MatrixXcd delta =
        U.adjoint() * U - Eigen::MatrixXcd::Identity(U.rows(), U.cols());
    return delta.cwiseAbs().maxCoeff();
}

SampleOracle::SampleOracle(Eigen::MatrixXcd matrix, RegisterLayout layout, Classifier hidden,
                           Distribution dist, Eigen::Index in_index)
    : matrix_(std::move(matrix)),
      layout_(layout),
      concept_(std::move(hidden)),
      dist_(std::move(dist)),
      in_index_(in_index) {
    layout_.validate();
    if (matrix_.rows() != layout_.total_dim() || matrix_.cols() != layout_.total_dim())
        throw std::invalid_argument("oracle matrix dimension mismatch");
    if (unitarity_error(matrix_) > 1e-9) throw std::invalid_argument("oracle matrix is not unitary");
}

StateVector SampleOracle::in_state() const {
    StateVector s = StateVector::zero(layout_);
    s.amplitudes(in_index_) = 1.0;
    return s;
}

StateVector SampleOracle::apply(const StateVector& s, bool inverse) {
    if (s.layout != layout_) throw std::invalid_argument("oracle/state layout mismatch");
    StateVector out;
    out.layout = s.layout;
    if (inverse) {
        out.amplitudes = matrix_.adjoint() * s.amplitudes;
        ++inverse_calls_;
    } else {
        out.amplitudes = matrix_ * s.amplitudes;
        ++forward_calls_;
    }
    return out;
}

StateVector quantum_sample_state(const Classifier& c, const Distribution& D, const RegisterLayout& layout) {
    layout.validate();
    D.validate();
    if (c.domain_size() != layout.index_dim || D.domain_size() != layout.index_dim)
        throw std::invalid_argument("quantum_sample_state: domain/layout mismatch");
    StateVector psi = StateVector::zero(layout);
    for (int x = 0; x < layout.index_dim; ++x)
        psi.amplitudes(layout.basis_index(x, c(x), 0)) = std::sqrt(D(x));
    return psi;
}

SampleOracle build_sample_oracle(const Classifier& c, const Distribution& D, const RegisterLayout& layout) {
    const StateVector psi = quantum_sample_state(c, D, layout);
    const Eigen::Index dim = layout.total_dim();
    const Eigen::Index in_index = layout.basis_index(0, 0, 0);

    // Reflection fixing |IN> + psi_c and negating its orthogonal complement.
    // The amplitudes of both states are real and non-negative, so the sum
    // never vanishes and O|IN> = psi_c, O psi_c = |IN>, O = O^dag.
    Eigen::VectorXcd v = psi.amplitudes;
    v(in_index) += 1.0;
    const double vv = v.squaredNorm();
    Eigen::MatrixXcd O = 2.0 / vv * (v * v.adjoint());
    O -= Eigen::MatrixXcd::Identity(dim, dim);

    return SampleOracle(std::move(O), layout, c, D, in_index);
}

StateVector apply_unitary(const Eigen::MatrixXcd& U, const StateVector& s, bool inverse) {
    if (U.rows() != s.amplitudes.size() || U.cols() != s.amplitudes.size())
        throw std::invalid_argument("apply: dimension mismatch");
    StateVector out;
    out.layout = s.layout;
    out.amplitudes = inverse ? Eigen::VectorXcd(U.adjoint() * s.amplitudes)
                             : Eigen::VectorXcd(U * s.amplitudes);
    return out;
}

BasisOutcome measure(const StateVector& s, SeededRng& rng) {
    if (std::abs(s.norm() - 1.0) > 1e-6) throw std::invalid_argument("measure: state norm drifted");
    const double u = rng.next_double() * s.amplitudes.squaredNorm();
    double acc = 0.0;
    const Eigen::Index dim = s.amplitudes.size();
    Eigen::Index hit = dim - 1;
    for (Eigen::Index i = 0; i < dim; ++i) {
        acc += std::norm(s.amplitudes(i));
        if (u < acc) {
            hit = i;
            break;
        }
    }
    return s.decode(hit);
}

}  // namespace qpac
