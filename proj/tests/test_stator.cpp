#include <doctest.h>

#include "nlm/stator.hpp"
#include "nlm/verify.hpp"
#include "test_util.hpp"

using namespace nlm;
using testutil::kInvSqrt2;
using testutil::kPi;

namespace {

Branch fresh_branch(const StateVector& s) { return Branch{1.0, s, LocalityContext{}}; }

} // namespace

TEST_CASE("prepare_ebit counts resources and hands out the right halves") {
    Branch b = fresh_branch(make_state(two_party_register(), "00"));
    int a1 = -1, b1 = -1, a2 = -1, b2 = -1;
    b = prepare_ebit(std::move(b), a1, b1, "1");
    b = prepare_ebit(std::move(b), a2, b2, "2");
    CHECK(b.ctx.ebits_prepared() == 2);
    CHECK(b.state.num_qubits() == 6);
    CHECK(std::abs(b.state.squared_norm() - 1.0) < 1e-12);
    CHECK(b.state.reduced({a1}).max_deviation_from_maximally_mixed() < 1e-12);
}

TEST_CASE("build_stator records the sign and satisfies the eigenoperator relation") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 40; ++trial) {
        PauliAxis axis = (trial % 2 == 0) ? PauliAxis::X : PauliAxis::Y;
        StateVector psi = verify::random_state(two_party_register(), rng);
        int b_sys = psi.reg().at_position(1).id;
        int a_id = -1, b_id = -1;
        Branch root = prepare_ebit(fresh_branch(psi), a_id, b_id, "1");
        auto branches = build_stator(std::move(root), b_id, b_sys, axis, "sigma_x_b");
        REQUIRE(branches.size() == 2);
        double total = 0.0;
        for (auto& [br, st] : branches) {
            CHECK(st.sign == br.ctx.record(Party::Bob).value_of("sigma_x_b"));
            CHECK(st.control_id == a_id);
            CHECK(st.target_id == b_sys);
            CHECK(stator_eigen_defect(br.state, st) < 1e-12);
            total += br.probability;
        }
        CHECK(std::abs(total - 1.0) < 1e-12);
    }
}

TEST_CASE("stator on |00> with axis x: the minus branch flips the sign") {
    StateVector psi = make_state(two_party_register(), "00");
    int b_sys = psi.reg().at_position(1).id;
    int a_id = -1, b_id = -1;
    Branch root = prepare_ebit(fresh_branch(psi), a_id, b_id, "1");
    auto branches = build_stator(std::move(root), b_id, b_sys, PauliAxis::X, "sigma_x_b");
    REQUIRE(branches.size() == 2);
    // register order after the build: [A, B, a]; minus branch:
    // (|0_a>|0_B> - |1_a>|1_B>) |0_A> / sqrt2
    const Branch& minus = branches[1].first;
    CHECK(branches[1].second.sign == -1);
    // indices: A B a -> a least significant
    CHECK(std::abs(minus.state.amplitude(0b000) - Complex{kInvSqrt2, 0}) < 1e-12);
    CHECK(std::abs(minus.state.amplitude(0b011) - Complex{-kInvSqrt2, 0}) < 1e-12);
}

TEST_CASE("build_stator enforces ownership") {
    StateVector psi = make_state(two_party_register(), "00");
    int a_sys = psi.reg().at_position(0).id; // Alice's system qubit
    int a_id = -1, b_id = -1;
    Branch root = prepare_ebit(fresh_branch(psi), a_id, b_id, "1");
    // Bob's half against Alice's system qubit crosses the boundary
    CHECK_THROWS_AS(build_stator(std::move(root), b_id, a_sys, PauliAxis::Y, "x"),
                    LocalityError);
}

TEST_CASE("remote rotation: every branch equals the described induced operator") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 30; ++trial) {
        StateVector psi = verify::random_state(two_party_register(), rng);
        int b_sys = psi.reg().at_position(1).id;
        std::uniform_real_distribution<double> uangle(-kPi, kPi);
        double angle = uangle(rng);

        int a_id = -1, b_id = -1;
        Branch root = prepare_ebit(fresh_branch(psi), a_id, b_id, "1");
        for (auto& [sb, st] : build_stator(std::move(root), b_id, b_sys, PauliAxis::Y,
                                           "sigma_x_b")) {
            for (auto& rob : remote_rotation(std::move(sb), st, angle, "sigma_z_a")) {
                // the whole build/rotate/read-out pipeline acts on the input
                // exactly as the described operator
                StateVector expect = psi.apply(
                    gates::from_matrix("induced", rob.induced.matrix(), {b_sys}));
                CHECK(expect.overlap(rob.branch.state) > 1.0 - 1e-10);
            }
        }
    }
}

TEST_CASE("remote rotation at angle zero induces the identity on the +1 branch") {
    StateVector psi = make_state(two_party_register(), "00");
    int b_sys = psi.reg().at_position(1).id;
    int a_id = -1, b_id = -1;
    Branch root = prepare_ebit(fresh_branch(psi), a_id, b_id, "1");
    auto stators = build_stator(std::move(root), b_id, b_sys, PauliAxis::Y, "sigma_x_b");
    for (auto& [sb, st] : stators) {
        for (auto& rob : remote_rotation(std::move(sb), st, 0.0, "sigma_z_a")) {
            if (rob.branch.ctx.record(Party::Alice).value_of("sigma_z_a") == +1) {
                CHECK(rob.induced.pauli_power == 0);
                CHECK(rob.induced.angle == 0.0);
                CHECK((rob.induced.matrix() - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff()
                      < 1e-15);
            }
        }
    }
}

TEST_CASE("a stale stator is rejected") {
    StateVector psi = make_state(two_party_register(), "00");
    int b_sys = psi.reg().at_position(1).id;
    int a_id = -1, b_id = -1;
    Branch root = prepare_ebit(fresh_branch(psi), a_id, b_id, "1");
    auto stators = build_stator(std::move(root), b_id, b_sys, PauliAxis::Y, "sigma_x_b");
    auto& [sb, st] = stators[0];
    auto rotated = remote_rotation(std::move(sb), st, 0.3, "sigma_z_a");
    // the control half is consumed now
    CHECK_THROWS_AS(remote_rotation(std::move(rotated[0].branch), st, 0.3, "again"),
                    ProtocolError);
}

TEST_CASE("conditional remote rotation runs through the record firewall") {
    StateVector psi = make_state(two_party_register(), "10"); // |1_A 0_B>
    int a_sys = psi.reg().at_position(0).id;
    int b_sys = psi.reg().at_position(1).id;

    Branch root = fresh_branch(psi);
    auto first = measure_record(std::move(root), Party::Alice, PauliAxis::Z, a_sys, "sigma_z_A",
                                false);
    REQUIRE(first.size() == 1); // deterministic -1
    int a_id = -1, b_id = -1;
    Branch with_ebit = prepare_ebit(std::move(first[0]), a_id, b_id, "1");
    auto stators = build_stator(std::move(with_ebit), b_id, b_sys, PauliAxis::Y, "sigma_x_b");

    SUBCASE("a predicate on Alice's own record engages the rotation") {
        RecordPredicate pred{Party::Alice, {"sigma_z_A"},
                             [](const std::vector<int>& v) { return v[0] == -1; }};
        for (auto& [sb, st] : stators) {
            auto out = conditional_remote_rotation(std::move(sb), st, pred, kPi / 4.0,
                                                   "sigma_z_a");
            for (auto& rob : out) {
                CHECK(std::abs(rob.induced.angle) == doctest::Approx(kPi / 4.0));
            }
        }
    }

    SUBCASE("a predicate reading the opposite party's record is blocked") {
        RecordPredicate pred{Party::Alice, {"sigma_x_b"},
                             [](const std::vector<int>& v) { return v[0] == +1; }};
        auto& [sb, st] = stators[0];
        CHECK_THROWS_AS(conditional_remote_rotation(std::move(sb), st, pred, kPi / 4.0, "z"),
                        LocalityError);
    }
}

TEST_CASE("the remote CNOT generator equals the advertised exponential") {
    // exp(-i pi/4 (1 - sigma_z)(1 - sigma_x)) on (control, target), via the
    // series oracle, must be exactly CNOT
    Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
    Eigen::MatrixXcd zpart = testutil::kron(id - pauli_matrix(PauliAxis::Z), id);
    Eigen::MatrixXcd xpart = testutil::kron(id, id - pauli_matrix(PauliAxis::X));
    Eigen::MatrixXcd gen = Complex(0.0, -kPi / 4.0) * (zpart * xpart);
    Eigen::MatrixXcd expm = testutil::expm_series(gen);

    Eigen::MatrixXcd cnot = Eigen::MatrixXcd::Zero(4, 4);
    cnot(0, 0) = cnot(1, 1) = cnot(2, 3) = cnot(3, 2) = 1.0;
    CHECK((expm - cnot).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("remote CNOT branches reproduce the transformed product sets") {
    double alpha = 1.1;
    double c = std::cos(alpha / 2.0), s = std::sin(alpha / 2.0);
    StateVector psi = testutil::two_party(c, 0, 0, s);
    int a_sys = psi.reg().at_position(0).id;
    int b_sys = psi.reg().at_position(1).id;

    int a_id = -1, b_id = -1;
    Branch root = prepare_ebit(fresh_branch(psi), a_id, b_id, "1");
    for (auto& [sb, st] : build_stator(std::move(root), b_id, b_sys, PauliAxis::X, "sigma_x_b")) {
        int v = st.sign;
        for (auto& cb : remote_cnot(std::move(sb), st, a_sys, "sigma_z_a")) {
            // (cos |0_A> + v sin |1_A>) |0_B>, Bob flipped when w = -1
            std::vector<Complex> expect(4, Complex{0, 0});
            if (cb.w == +1) {
                expect[0b00] = c;
                expect[0b10] = double(v) * s;
            } else {
                expect[0b01] = double(v) * c;
                expect[0b11] = s;
            }
            double overlap = 0.0;
            Complex acc{0, 0};
            for (std::size_t i = 0; i < 4; ++i) {
                acc += std::conj(expect[i]) * cb.branch.state.amplitude(i);
            }
            overlap = std::abs(acc);
            CHECK(overlap > 1.0 - 1e-12);
        }
    }
}

TEST_CASE("remote CNOT demands an x-axis stator") {
    StateVector psi = make_state(two_party_register(), "00");
    int a_sys = psi.reg().at_position(0).id;
    int b_sys = psi.reg().at_position(1).id;
    int a_id = -1, b_id = -1;
    Branch root = prepare_ebit(fresh_branch(psi), a_id, b_id, "1");
    auto stators = build_stator(std::move(root), b_id, b_sys, PauliAxis::Y, "sigma_x_b");
    auto& [sb, st] = stators[0];
    CHECK_THROWS_AS(remote_cnot(std::move(sb), st, a_sys, "sigma_z_a"), ProtocolError);
}

TEST_CASE("remote Bell measurement identifies Bell inputs with certainty") {
    for (int which = 0; which < 4; ++which) {
        StateVector bell = testutil::bell_state(which);
        int qa = bell.reg().at_position(0).id;
        int qb = bell.reg().at_position(1).id;
        auto branches = remote_bell_measurement(fresh_branch(bell), qa, qb, "bell_");
        double total = 0.0;
        for (Branch& br : branches) {
            int zp = br.ctx.record(Party::Alice).value_of("bell_z_a") *
                     br.ctx.record(Party::Bob).value_of("bell_z_b");
            int xp = br.ctx.record(Party::Alice).value_of("bell_x_a") *
                     br.ctx.record(Party::Bob).value_of("bell_x_b");
            CHECK(bell_index_from_parities(zp, xp) == which);
            // nondemolition: the post state is the same Bell state
            CHECK(br.state.overlap(bell) > 1.0 - 1e-12);
            total += br.probability;
        }
        CHECK(std::abs(total - 1.0) < 1e-12);
    }
}

TEST_CASE("remote Bell measurement splits |00> into the two even-parity cells") {
    StateVector zz = make_state(two_party_register(), "00");
    int qa = zz.reg().at_position(0).id;
    int qb = zz.reg().at_position(1).id;
    double mass[4] = {0, 0, 0, 0};
    for (Branch& br : remote_bell_measurement(fresh_branch(zz), qa, qb, "bell_")) {
        int zp = br.ctx.record(Party::Alice).value_of("bell_z_a") *
                 br.ctx.record(Party::Bob).value_of("bell_z_b");
        int xp = br.ctx.record(Party::Alice).value_of("bell_x_a") *
                 br.ctx.record(Party::Bob).value_of("bell_x_b");
        int idx = bell_index_from_parities(zp, xp);
        mass[idx] += br.probability;
        CHECK(br.state.overlap(testutil::bell_state(idx)) > 1.0 - 1e-12);
    }
    CHECK(mass[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(mass[1] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(mass[2] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(mass[3] == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("gates across the party boundary are rejected and audited") {
    StateVector psi = make_state(two_party_register(), "00");
    int a_sys = psi.reg().at_position(0).id;
    int b_sys = psi.reg().at_position(1).id;

    Branch enforce = fresh_branch(psi);
    CHECK_THROWS_AS(apply_party_gate(std::move(enforce), Party::Alice, gates::cnot(a_sys, b_sys)),
                    LocalityError);

    Branch audit{1.0, psi, LocalityContext(FirewallMode::Audit)};
    audit = apply_party_gate(std::move(audit), Party::Alice, gates::cnot(a_sys, b_sys));
    CHECK(audit.ctx.violation_count() == 1);
}
