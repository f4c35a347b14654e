// gates.hpp
// Small dense unitaries addressed at named register qubits.
//
// Matrix index convention matches the register convention: the first target
// in `targets` is the most significant bit of the gate-local index.

#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nlm/qubit.hpp"

namespace nlm {

using Complex = std::complex<double>;

struct Gate {
    std::string name;
    Eigen::MatrixXcd matrix; // 2^t x 2^t
    std::vector<int> targets; // qubit ids, first = most significant

    int arity() const { return static_cast<int>(targets.size()); }
};

// ||U U^dag - I||_max
double unitarity_defect(const Eigen::MatrixXcd& m);
bool is_unitary(const Eigen::MatrixXcd& m, double tol = 1e-12);

Eigen::Matrix2cd pauli_matrix(PauliAxis axis);

// exp(i * angle * sigma_axis) = cos(angle) I + i sin(angle) sigma_axis
Eigen::Matrix2cd rotation_matrix(PauliAxis axis, double angle);

namespace gates {

Gate pauli(PauliAxis axis, int target);

// Spinor rotation exp(i * angle * sigma_axis).
Gate rotation(PauliAxis axis, double angle, int target);

// diag(1, e^{i phi})
Gate phase(double phi, int target);

// |0><0| (x) I + |1><1| (x) sigma_axis, control first.
Gate controlled_pauli(PauliAxis axis, int control, int target);

Gate cnot(int control, int target);

// exp(i * angle * sigma_x (x) sigma_x) on two qubits.
Gate xx_rotation(double angle, int q0, int q1);

Gate from_matrix(std::string name, Eigen::MatrixXcd m, std::vector<int> targets);

} // namespace gates

} // namespace nlm
