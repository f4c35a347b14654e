#include "nlm/gates.hpp"

#include <cmath>

#include "nlm/errors.hpp"

namespace nlm {

double unitarity_defect(const Eigen::MatrixXcd& m) {
    Eigen::MatrixXcd d = m * m.adjoint() - Eigen::MatrixXcd::Identity(m.rows(), m.cols());
    return d.cwiseAbs().maxCoeff();
}

bool is_unitary(const Eigen::MatrixXcd& m, double tol) {
    return m.rows() == m.cols() && unitarity_defect(m) <= tol;
}

Eigen::Matrix2cd pauli_matrix(PauliAxis axis) {
    Eigen::Matrix2cd p;
    const Complex i(0.0, 1.0);
    switch (axis) {
        case PauliAxis::X: p << 0, 1, 1, 0; break;
        case PauliAxis::Y: p << 0, -i, i, 0; break;
        case PauliAxis::Z: p << 1, 0, 0, -1; break;
    }
    return p;
}

Eigen::Matrix2cd rotation_matrix(PauliAxis axis, double angle) {
    const Complex i(0.0, 1.0);
    return std::cos(angle) * Eigen::Matrix2cd::Identity() +
           i * std::sin(angle) * pauli_matrix(axis);
}

namespace gates {

Gate pauli(PauliAxis axis, int target) {
    return {std::string("sigma_") + to_string(axis), pauli_matrix(axis), {target}};
}

Gate rotation(PauliAxis axis, double angle, int target) {
    std::string name = "rot_" + std::string(to_string(axis)) + "(" + std::to_string(angle) + ")";
    return {std::move(name), rotation_matrix(axis, angle), {target}};
}

Gate phase(double phi, int target) {
    Eigen::Matrix2cd m = Eigen::Matrix2cd::Identity();
    m(1, 1) = std::exp(Complex(0.0, phi));
    return {"phase(" + std::to_string(phi) + ")", m, {target}};
}

Gate controlled_pauli(PauliAxis axis, int control, int target) {
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Identity();
    m.block<2, 2>(2, 2) = pauli_matrix(axis);
    return {std::string("c-sigma_") + to_string(axis), m, {control, target}};
}

Gate cnot(int control, int target) {
    Gate g = controlled_pauli(PauliAxis::X, control, target);
    g.name = "cnot";
    return g;
}

Gate xx_rotation(double angle, int q0, int q1) {
    const Complex i(0.0, 1.0);
    Eigen::Matrix4cd xx;
    xx << 0, 0, 0, 1,
          0, 0, 1, 0,
          0, 1, 0, 0,
          1, 0, 0, 0;
    Eigen::Matrix4cd m = std::cos(angle) * Eigen::Matrix4cd::Identity() + i * std::sin(angle) * xx;
    return {"rot_xx(" + std::to_string(angle) + ")", m, {q0, q1}};
}

Gate from_matrix(std::string name, Eigen::MatrixXcd m, std::vector<int> targets) {
    const long dim = 1L << targets.size();
    if (m.rows() != dim || m.cols() != dim) {
        throw StructuralError("gate matrix dimension does not match target count");
    }
    return {std::move(name), std::move(m), std::move(targets)};
}

} // namespace gates

} // namespace nlm
