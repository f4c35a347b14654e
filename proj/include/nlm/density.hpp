// density.hpp
// Reduced density matrices produced by partial trace.

#pragma once

#include <Eigen/Dense>

namespace nlm {

class DensityMatrix {
  public:
    explicit DensityMatrix(Eigen::MatrixXcd entries);

    const Eigen::MatrixXcd& entries() const { return m_; }
    long dim() const { return m_.rows(); }

    double trace_defect() const;      // |tr(rho) - 1|
    double hermiticity_defect() const; // ||rho - rho^dag||_max
    double min_eigenvalue() const;
    double purity() const;            // tr(rho^2), real part

    // Hermitian within 1e-12, unit trace within 1e-12, eigenvalues >= -1e-10.
    void validate() const;

    // ||rho - I/dim||_max, the maximally-mixed deviation used by the audits.
    double max_deviation_from_maximally_mixed() const;

    double max_deviation_from(const Eigen::MatrixXcd& other) const;

    // Von Neumann entropy in bits.
    double entropy_bits() const;

  private:
    Eigen::MatrixXcd m_;
};

} // namespace nlm
