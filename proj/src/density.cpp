#include "nlm/density.hpp"

#include <cmath>

#include "nlm/errors.hpp"

namespace nlm {

DensityMatrix::DensityMatrix(Eigen::MatrixXcd entries) : m_(std::move(entries)) {
    if (m_.rows() != m_.cols() || m_.rows() == 0) {
        throw StructuralError("density matrix must be square and non-empty");
    }
}

double DensityMatrix::trace_defect() const {
    return std::abs(m_.trace() - std::complex<double>(1.0, 0.0));
}

double DensityMatrix::hermiticity_defect() const {
    return (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es((m_ + m_.adjoint()) / 2.0);
    return es.eigenvalues().minCoeff();
}

double DensityMatrix::purity() const {
    return (m_ * m_).trace().real();
}

void DensityMatrix::validate() const {
    if (hermiticity_defect() > 1e-12) throw ValidationError("density matrix not Hermitian");
    if (trace_defect() > 1e-12) throw ValidationError("density matrix trace != 1");
    if (min_eigenvalue() < -1e-10) throw ValidationError("density matrix not positive semidefinite");
}

double DensityMatrix::max_deviation_from_maximally_mixed() const {
    Eigen::MatrixXcd target =
        Eigen::MatrixXcd::Identity(m_.rows(), m_.cols()) / static_cast<double>(m_.rows());
    return (m_ - target).cwiseAbs().maxCoeff();
}

double DensityMatrix::max_deviation_from(const Eigen::MatrixXcd& other) const {
    return (m_ - other).cwiseAbs().maxCoeff();
}

double DensityMatrix::entropy_bits() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es((m_ + m_.adjoint()) / 2.0);
    double h = 0.0;
    for (long i = 0; i < es.eigenvalues().size(); ++i) {
        double p = es.eigenvalues()(i);
        if (p > 1e-15) h -= p * std::log2(p);
    }
    return h;
}

} // namespace nlm
