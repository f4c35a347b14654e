#include "nlm/eigenbasis.hpp"

#include <cmath>

namespace nlm {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kInvSqrt2 = 0.70710678118654752440;

StateVector two_party_amplitudes(Complex a00, Complex a01, Complex a10, Complex a11) {
    return StateVector(two_party_register(), {a00, a01, a10, a11});
}

} // namespace

const char* to_string(Family f) {
    switch (f) {
        case Family::TwistedProduct: return "twisted-product";
        case Family::GeneralProduct: return "general-product";
        case Family::NonmaxEqual: return "nonmax-equal";
        case Family::NonmaxGeneral: return "nonmax-general";
        case Family::Twist4x4: return "twist4x4";
    }
    return "?";
}

std::optional<AxisAngle> pauli_axis_angle(const Eigen::Matrix2cd& u, double tol) {
    if (!is_unitary(u, 1e-10)) return std::nullopt;
    // strip the global phase: su = u / sqrt(det u)
    Complex det = u(0, 0) * u(1, 1) - u(0, 1) * u(1, 0);
    Complex root = std::sqrt(det);
    Eigen::Matrix2cd su = u / root;
    // su = cos(theta) I + i sin(theta) (n . sigma)
    double c = ((su(0, 0) + su(1, 1)) / 2.0).real();
    c = std::clamp(c, -1.0, 1.0);
    Complex i(0.0, 1.0);
    double nx = ((su(0, 1) + su(1, 0)) / (2.0 * i)).real();
    double ny = ((su(0, 1) - su(1, 0)) / 2.0).real();
    double nz = ((su(0, 0) - su(1, 1)) / (2.0 * i)).real();
    double s = std::sqrt(nx * nx + ny * ny + nz * nz);
    if (s < tol) return AxisAngle{PauliAxis::Y, 0.0}; // identity up to phase
    double theta = std::atan2(s, c);
    double ax = std::abs(nx) / s, ay = std::abs(ny) / s, az = std::abs(nz) / s;
    auto aligned = [&](double major) { return major > 1.0 - tol; };
    if (aligned(ax)) return AxisAngle{PauliAxis::X, nx > 0 ? theta : -theta};
    if (aligned(ay)) return AxisAngle{PauliAxis::Y, ny > 0 ? theta : -theta};
    if (aligned(az)) return AxisAngle{PauliAxis::Z, nz > 0 ? theta : -theta};
    return std::nullopt;
}

void EigenbasisSpec::validate() const {
    if (n_ebits < 1) throw ValidationError("ebit budget must be at least 1");
    switch (family) {
        case Family::TwistedProduct:
            break;
        case Family::GeneralProduct:
            if (!(alpha > 0.0 && alpha < kPi)) {
                throw ValidationError("twist angle must satisfy 0 < alpha < pi");
            }
            break;
        case Family::NonmaxEqual:
            if (!(alpha >= 0.0 && alpha <= kPi)) {
                throw ValidationError("alpha must lie in [0, pi]");
            }
            break;
        case Family::NonmaxGeneral:
            if (!(alpha >= 0.0 && alpha <= kPi) || !(beta >= 0.0 && beta <= kPi)) {
                throw ValidationError("alpha and beta must lie in [0, pi]");
            }
            break;
        case Family::Twist4x4:
            if (!pauli_axis_angle(u_b)) {
                throw ValidationError(
                    "unsupported twist unitary: expected a Pauli-axis rotation");
            }
            break;
    }
}

std::vector<StateVector> eigenbasis(const EigenbasisSpec& spec) {
    spec.validate();
    switch (spec.family) {
        case Family::TwistedProduct: {
            return {
                two_party_amplitudes(1, 0, 0, 0),                      // |0_A>|0_B>
                two_party_amplitudes(0, 1, 0, 0),                      // |0_A>|1_B>
                two_party_amplitudes(0, 0, kInvSqrt2, kInvSqrt2),      // |1_A>(|0>+|1>)
                two_party_amplitudes(0, 0, kInvSqrt2, -kInvSqrt2),     // |1_A>(|0>-|1>)
            };
        }
        case Family::GeneralProduct: {
            double c = std::cos(spec.alpha / 2.0), s = std::sin(spec.alpha / 2.0);
            return {
                two_party_amplitudes(1, 0, 0, 0),
                two_party_amplitudes(0, 1, 0, 0),
                two_party_amplitudes(0, 0, c, s),
                two_party_amplitudes(0, 0, s, -c),
            };
        }
        case Family::NonmaxEqual: {
            double c = std::cos(spec.alpha / 2.0), s = std::sin(spec.alpha / 2.0);
            return {
                two_party_amplitudes(c, 0, 0, s),
                two_party_amplitudes(s, 0, 0, -c),
                two_party_amplitudes(0, c, s, 0),
                two_party_amplitudes(0, s, -c, 0),
            };
        }
        case Family::NonmaxGeneral: {
            double ca = std::cos(spec.alpha / 2.0), sa = std::sin(spec.alpha / 2.0);
            double cb = std::cos(spec.beta / 2.0), sb = std::sin(spec.beta / 2.0);
            Complex e1 = std::exp(Complex(0.0, spec.phi1));
            Complex e2 = std::exp(Complex(0.0, spec.phi2));
            return {
                two_party_amplitudes(ca, 0, 0, e1 * sa),
                two_party_amplitudes(sa, 0, 0, -e1 * ca),
                two_party_amplitudes(0, cb, e2 * sb, 0),
                two_party_amplitudes(0, sb, -e2 * cb, 0),
            };
        }
        case Family::Twist4x4: {
            // register [A1, A2, B1, B2]; levels l = (subspace_bit, intra_bit)
            Register reg = four_level_pair_register();
            auto idx = [](int la, int lb) { return std::size_t(la * 4 + lb); };
            auto bell_pair = [&](int la0, int lb0, int la1, int lb1, double sign) {
                std::vector<Complex> amps(16, Complex{0.0, 0.0});
                amps[idx(la0, lb0)] = kInvSqrt2;
                amps[idx(la1, lb1)] = sign * kInvSqrt2;
                return StateVector(reg, std::move(amps));
            };

            std::vector<StateVector> basis;
            basis.reserve(16);
            // quadrant order TL, TR, BL, BR; Bell order Phi+, Phi-, Psi+, Psi-
            const int quad[4][2] = {{0, 0}, {0, 2}, {2, 0}, {2, 2}};
            for (int q = 0; q < 4; ++q) {
                int a0 = quad[q][0], b0 = quad[q][1];
                basis.push_back(bell_pair(a0, b0, a0 + 1, b0 + 1, +1.0));
                basis.push_back(bell_pair(a0, b0, a0 + 1, b0 + 1, -1.0));
                basis.push_back(bell_pair(a0, b0 + 1, a0 + 1, b0, +1.0));
                basis.push_back(bell_pair(a0, b0 + 1, a0 + 1, b0, -1.0));
            }
            // twist the bottom-right quadrant: U_B acts on B2
            Gate ub = gates::from_matrix("u_b", spec.u_b, {3});
            for (int k = 12; k < 16; ++k) basis[k] = basis[k].apply(ub);
            return basis;
        }
    }
    throw StructuralError("unknown family");
}

double gram_defect(const std::vector<StateVector>& basis) {
    double defect = 0.0;
    for (std::size_t i = 0; i < basis.size(); ++i) {
        for (std::size_t j = 0; j < basis.size(); ++j) {
            Complex g = basis[i].inner(basis[j]);
            Complex expect = (i == j) ? Complex{1.0, 0.0} : Complex{0.0, 0.0};
            defect = std::max(defect, std::abs(g - expect));
        }
    }
    return defect;
}

} // namespace nlm
