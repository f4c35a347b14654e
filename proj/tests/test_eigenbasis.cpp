#include <doctest.h>

#include "nlm/eigenbasis.hpp"
#include "test_util.hpp"

using namespace nlm;
using testutil::kInvSqrt2;
using testutil::kPi;

TEST_CASE("fixed-twist basis matches the defining amplitudes") {
    EigenbasisSpec spec;
    spec.family = Family::TwistedProduct;
    auto basis = eigenbasis(spec);
    REQUIRE(basis.size() == 4);
    CHECK(std::abs(basis[0].amplitude(0b00) - Complex{1, 0}) < 1e-14);
    CHECK(std::abs(basis[1].amplitude(0b01) - Complex{1, 0}) < 1e-14);
    CHECK(std::abs(basis[2].amplitude(0b10) - Complex{kInvSqrt2, 0}) < 1e-14);
    CHECK(std::abs(basis[2].amplitude(0b11) - Complex{kInvSqrt2, 0}) < 1e-14);
    CHECK(std::abs(basis[3].amplitude(0b11) - Complex{-kInvSqrt2, 0}) < 1e-14);
    CHECK(gram_defect(basis) < 1e-12);
}

TEST_CASE("equal-angle entangled basis at pi/2 is the Bell basis") {
    EigenbasisSpec spec;
    spec.family = Family::NonmaxEqual;
    spec.alpha = kPi / 2.0;
    auto basis = eigenbasis(spec);
    CHECK(basis[0].overlap(testutil::bell_state(0)) > 1.0 - 1e-12);
    CHECK(basis[1].overlap(testutil::bell_state(1)) > 1.0 - 1e-12);
    CHECK(basis[2].overlap(testutil::bell_state(2)) > 1.0 - 1e-12);
    CHECK(basis[3].overlap(testutil::bell_state(3)) > 1.0 - 1e-12);
}

TEST_CASE("entangled bases are orthonormal across parameter choices") {
    EigenbasisSpec eq;
    eq.family = Family::NonmaxEqual;
    eq.alpha = kPi / 5.0;
    auto basis = eigenbasis(eq);
    CHECK(std::abs(basis[0].inner(basis[1])) < 1e-13);
    CHECK(gram_defect(basis) < 1e-12);

    EigenbasisSpec gen;
    gen.family = Family::NonmaxGeneral;
    gen.alpha = kPi / 3.0;
    gen.beta = kPi / 5.0;
    CHECK(gram_defect(eigenbasis(gen)) < 1e-12);

    gen.phi1 = 0.9;
    gen.phi2 = -1.7;
    CHECK(gram_defect(eigenbasis(gen)) < 1e-12);

    EigenbasisSpec gp;
    gp.family = Family::GeneralProduct;
    gp.alpha = 1.234;
    CHECK(gram_defect(eigenbasis(gp)) < 1e-12);
}

TEST_CASE("twist angle range is validated") {
    EigenbasisSpec gp;
    gp.family = Family::GeneralProduct;
    gp.alpha = 0.0;
    CHECK_THROWS_AS(eigenbasis(gp), ValidationError);
    gp.alpha = kPi;
    CHECK_THROWS_AS(eigenbasis(gp), ValidationError);
    gp.alpha = -0.3;
    CHECK_THROWS_AS(eigenbasis(gp), ValidationError);
}

TEST_CASE("the 16-state twist family is orthonormal for supported rotations") {
    EigenbasisSpec spec;
    spec.family = Family::Twist4x4;
    spec.u_b = rotation_matrix(PauliAxis::Y, 0.4);
    auto basis = eigenbasis(spec);
    REQUIRE(basis.size() == 16);
    CHECK(gram_defect(basis) < 1e-12);

    // normalized even though the construction is written with bare sums
    for (const auto& s : basis) CHECK(std::abs(s.squared_norm() - 1.0) < 1e-12);

    // identity keeps the bottom-right quadrant in the plain Bell form
    spec.u_b = Eigen::Matrix2cd::Identity();
    auto plain = eigenbasis(spec);
    CHECK(std::abs(plain[12].amplitude(0b1010) - Complex{kInvSqrt2, 0}) < 1e-14);
    CHECK(std::abs(plain[12].amplitude(0b1111) - Complex{kInvSqrt2, 0}) < 1e-14);
}

TEST_CASE("axis-angle extraction inverts the rotation constructor") {
    for (PauliAxis axis : {PauliAxis::X, PauliAxis::Y, PauliAxis::Z}) {
        for (double theta : {0.0, 0.4, -1.2, kPi / 2.0}) {
            auto aa = pauli_axis_angle(rotation_matrix(axis, theta));
            REQUIRE(aa.has_value());
            if (theta == 0.0) {
                CHECK(aa->theta == 0.0);
            } else {
                CHECK(aa->axis == axis);
                CHECK(aa->theta == doctest::Approx(theta).epsilon(1e-12));
            }
            // reconstruction up to global phase
            Eigen::Matrix2cd rebuilt = rotation_matrix(aa->axis, aa->theta);
            Eigen::Matrix2cd orig = rotation_matrix(axis, theta);
            CHECK(std::abs(std::abs((rebuilt.adjoint() * orig).trace()) - 2.0) < 1e-12);
        }
    }

    // a global phase on top is fine
    auto aa = pauli_axis_angle(std::exp(Complex(0.0, 0.7)) * rotation_matrix(PauliAxis::X, 0.3));
    REQUIRE(aa.has_value());
    CHECK(aa->axis == PauliAxis::X);
    CHECK(aa->theta == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("off-axis twist unitaries are rejected") {
    std::mt19937_64 rng(5);
    Eigen::Matrix2cd skew =
        rotation_matrix(PauliAxis::Y, 0.5) * rotation_matrix(PauliAxis::X, 0.5);
    CHECK_FALSE(pauli_axis_angle(skew).has_value());

    EigenbasisSpec spec;
    spec.family = Family::Twist4x4;
    spec.u_b = skew;
    CHECK_THROWS_AS(spec.validate(), ValidationError);

    Eigen::Matrix2cd nonunitary;
    nonunitary << 1, 1, 0, 1;
    CHECK_FALSE(pauli_axis_angle(nonunitary).has_value());
}
