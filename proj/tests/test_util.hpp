// Shared helpers and independent oracles for the test suites. The oracles
// here deliberately avoid the library's fast paths: matrix exponentials are
// summed as power series and gates are applied through explicit Kronecker
// products, so the engine is checked against a second route.

#pragma once

#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "nlm/state.hpp"

namespace testutil {

using nlm::Complex;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kInvSqrt2 = 0.70710678118654752440;

// power-series matrix exponential, independent of any closed form
inline Eigen::MatrixXcd expm_series(const Eigen::MatrixXcd& m) {
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Identity(m.rows(), m.cols());
    Eigen::MatrixXcd term = acc;
    for (int k = 1; k <= 64; ++k) {
        term = term * m / double(k);
        acc += term;
    }
    return acc;
}

inline Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (long i = 0; i < a.rows(); ++i) {
        for (long j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

// apply a gate by building the full 2^k x 2^k operator (kron with identities)
inline std::vector<Complex> apply_full_matrix(const nlm::StateVector& s,
                                              const Eigen::MatrixXcd& gate_matrix,
                                              const std::vector<int>& target_positions) {
    const int k = s.num_qubits();
    const std::size_t dim = s.dim();
    Eigen::VectorXcd v(dim);
    for (std::size_t i = 0; i < dim; ++i) v(i) = s.amplitude(i);

    // permutation-free approach: build the operator entry by entry
    Eigen::MatrixXcd full = Eigen::MatrixXcd::Zero(dim, dim);
    const int t = static_cast<int>(target_positions.size());
    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t c = 0; c < dim; ++c) {
            // rows/cols must agree outside the targets
            bool same = true;
            for (int p = 0; p < k && same; ++p) {
                bool is_target = false;
                for (int tp : target_positions) {
                    if (tp == p) is_target = true;
                }
                if (is_target) continue;
                std::size_t bit = std::size_t{1} << (k - 1 - p);
                same = ((r & bit) != 0) == ((c & bit) != 0);
            }
            if (!same) continue;
            std::size_t lr = 0, lc = 0;
            for (int j = 0; j < t; ++j) {
                std::size_t bit = std::size_t{1} << (k - 1 - target_positions[j]);
                if (r & bit) lr |= std::size_t{1} << (t - 1 - j);
                if (c & bit) lc |= std::size_t{1} << (t - 1 - j);
            }
            full(r, c) = gate_matrix(lr, lc);
        }
    }
    Eigen::VectorXcd w = full * v;
    std::vector<Complex> out(dim);
    for (std::size_t i = 0; i < dim; ++i) out[i] = w(i);
    return out;
}

inline double max_amp_diff(const nlm::StateVector& s, const std::vector<Complex>& expect) {
    double d = 0.0;
    for (std::size_t i = 0; i < s.dim(); ++i) {
        d = std::max(d, std::abs(s.amplitude(i) - expect[i]));
    }
    return d;
}

inline double max_amp_diff(const nlm::StateVector& a, const nlm::StateVector& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) {
        d = std::max(d, std::abs(a.amplitude(i) - b.amplitude(i)));
    }
    return d;
}

// random unitary via QR of a complex Gaussian matrix
inline Eigen::MatrixXcd random_unitary(int dim, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    Eigen::MatrixXcd m(dim, dim);
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) m(i, j) = Complex(g(rng), g(rng));
    }
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(m);
    Eigen::MatrixXcd q = qr.householderQ();
    return q;
}

inline nlm::StateVector two_party(Complex a00, Complex a01, Complex a10, Complex a11) {
    return nlm::StateVector(nlm::two_party_register(), {a00, a01, a10, a11});
}

inline nlm::StateVector bell_state(int which) {
    switch (which) {
        case 0: return two_party(kInvSqrt2, 0, 0, kInvSqrt2);   // Phi+
        case 1: return two_party(kInvSqrt2, 0, 0, -kInvSqrt2);  // Phi-
        case 2: return two_party(0, kInvSqrt2, kInvSqrt2, 0);   // Psi+
        default: return two_party(0, kInvSqrt2, -kInvSqrt2, 0); // Psi-
    }
}

} // namespace testutil
