// eigenbasis.hpp
// Parameterized eigenbases of the measurable observables, and the axis-angle
// form of the supported 4x4-twist rotation.

#pragma once

#include <optional>
#include <vector>

#include "nlm/state.hpp"

namespace nlm {

enum class Family {
    TwistedProduct, // one-side twisted product basis, fixed pi/2 twist
    GeneralProduct, // one-side twisted product basis, twist angle alpha
    NonmaxEqual,    // Schmidt-unbalanced entangled basis, equal angle
    NonmaxGeneral,  // two angles alpha/beta plus relative phases
    Twist4x4        // 16 entangled eigenstates over two 4-level systems
};

const char* to_string(Family f);

// Pauli-axis rotation e^{i delta} e^{i theta sigma_axis}; the supported form
// of the 4x4 twist unitary. Corrections picked up along the untwisting loop
// are powers of sigma_axis, which permute Bell states only when the axis is
// a Pauli axis; that is what keeps the combined records decisive.
struct AxisAngle {
    PauliAxis axis = PauliAxis::Y;
    double theta = 0.0;
};

// Decompose a 2x2 unitary as a Pauli-axis rotation, or nullopt when the
// rotation axis is not aligned with x, y or z.
std::optional<AxisAngle> pauli_axis_angle(const Eigen::Matrix2cd& u, double tol = 1e-9);

struct EigenbasisSpec {
    Family family = Family::TwistedProduct;
    double alpha = 1.5707963267948966; // pi/2
    double beta = 0.0;
    double phi1 = 0.0;
    double phi2 = 0.0;
    Eigen::Matrix2cd u_b = Eigen::Matrix2cd::Identity(); // Twist4x4 only
    int n_ebits = 4; // total ebit budget for the protocol run

    int num_eigenstates() const { return family == Family::Twist4x4 ? 16 : 4; }
    void validate() const;
};

// The orthonormal eigenstate list, indices 1..4 (1..16 for Twist4x4) in the
// order used everywhere else. States live on two_party_register() (or
// four_level_pair_register() for Twist4x4).
std::vector<StateVector> eigenbasis(const EigenbasisSpec& spec);

// Largest |Gram - I| entry over the basis; identity check for tests.
double gram_defect(const std::vector<StateVector>& basis);

} // namespace nlm
