#include "nlm/protocol.hpp"

#include <algorithm>
#include <cmath>

namespace nlm {

namespace {

constexpr double kPi = 3.14159265358979323846;

void require_two_party(const StateVector& input) {
    const Register& r = input.reg();
    if (r.size() != 2 || r.at_position(0).party != Party::Alice ||
        r.at_position(1).party != Party::Bob || r.at_position(0).role != Role::System ||
        r.at_position(1).role != Role::System) {
        throw StructuralError("input must be a two-qubit state on [A (Alice), B (Bob)]");
    }
}

void require_four_level_pair(const StateVector& input) {
    const Register& r = input.reg();
    bool ok = r.size() == 4;
    if (ok) {
        ok = r.at_position(0).party == Party::Alice && r.at_position(1).party == Party::Alice &&
             r.at_position(2).party == Party::Bob && r.at_position(3).party == Party::Bob;
        for (int p = 0; p < 4 && ok; ++p) ok = r.at_position(p).role == Role::System;
    }
    if (!ok) {
        throw StructuralError("input must be a four-qubit state on [A1, A2 (Alice), B1, B2 (Bob)]");
    }
}

std::string step_label(const char* stem, int k) {
    return std::string(stem) + "[" + std::to_string(k) + "]";
}

bool all_minus(const std::vector<int>& vs) {
    return std::all_of(vs.begin(), vs.end(), [](int v) { return v == -1; });
}

ProtocolRun finalize(EigenbasisSpec spec, ProtocolKind kind, std::vector<Branch> frontier,
                     int ebits_consumed) {
    ProtocolRun run;
    run.spec = std::move(spec);
    run.kind = kind;
    run.ebits_consumed = ebits_consumed;

    double total = 0.0;
    for (Branch& b : frontier) {
        RunBranch rb;
        rb.probability = b.probability;
        rb.inferred = infer_outcome(run.spec, kind, b.ctx.record(Party::Alice),
                                    b.ctx.record(Party::Bob));
        rb.post = std::move(b.state);
        rb.ctx = std::move(b.ctx);
        total += rb.probability;
        run.branches.push_back(std::move(rb));
    }
    if (std::abs(total - 1.0) > 1e-12) {
        throw ProtocolError("branch probabilities sum to " + std::to_string(total));
    }

    double success = 0.0, ent = 0.0;
    for (const RunBranch& rb : run.branches) {
        if (rb.failed()) continue;
        success += rb.probability;
        std::vector<int> alice_ids;
        for (const RegisterSlot& s : rb.post.reg().slots()) {
            if (s.party == Party::Alice) alice_ids.push_back(s.id);
        }
        ent += rb.probability * rb.post.reduced(alice_ids).entropy_bits();
    }
    run.success_probability = success;
    run.residual_entanglement_bits = success > 0.0 ? ent / success : 0.0;
    return run;
}

// One step of the product-basis correction loop (the builder is Bob, the
// rotation target is Bob's system qubit, Alice holds the rotation control).
// Used by both the fixed-twist and general-twist protocols.
std::vector<Branch> product_loop_step(std::vector<Branch> frontier, int step, double theta,
                                      int b_system_id) {
    std::vector<Branch> next;
    for (Branch& br : frontier) {
        int a_id = -1, b_id = -1;
        Branch with_ebit = prepare_ebit(std::move(br), a_id, b_id, step_label("", step));

        bool bob_active =
            all_minus(with_ebit.ctx.read_prefix(Party::Bob, Party::Bob, "sigma_x_b["));

        std::vector<std::pair<Branch, bool>> mid; // (branch, bob_built)
        if (bob_active) {
            for (auto& [sb, st] : build_stator(std::move(with_ebit), b_id, b_system_id,
                                               PauliAxis::Y, step_label("sigma_x_b", step))) {
                (void)st;
                mid.push_back({std::move(sb), true});
            }
        } else {
            mid.push_back({std::move(with_ebit), false});
        }

        for (auto& [sb2, bob_built] : mid) {
            Branch sb = std::move(sb2);
            // Alice's own switch: rotate only when her system collapsed to |1_A>.
            int z_a_side = sb.ctx.read(Party::Alice, Party::Alice, "sigma_z_A");
            if (z_a_side == -1) {
                sb = apply_party_gate(std::move(sb), Party::Alice,
                                      gates::rotation(PauliAxis::X, theta, a_id));
            }
            for (Branch& done : measure_record(std::move(sb), Party::Alice, PauliAxis::Z, a_id,
                                               step_label("sigma_z_a", step), true)) {
                if (!bob_built) done = discard_pure(std::move(done), b_id);
                next.push_back(std::move(done));
            }
        }
    }
    return next;
}

ProtocolRun run_product_basis(const StateVector& input, double alpha, int n_ebits,
                              Family family, ProtocolKind kind, FirewallMode mode) {
    require_two_party(input);
    const int a_sys = input.reg().at_position(0).id;
    const int b_sys = input.reg().at_position(1).id;

    std::vector<Branch> frontier =
        measure_record(Branch{1.0, input, LocalityContext(mode)}, Party::Alice, PauliAxis::Z,
                       a_sys, "sigma_z_A", false);

    for (int k = 1; k <= n_ebits; ++k) {
        double theta = (alpha / 2.0) * std::ldexp(1.0, k - 1); // alpha/2, alpha, 2 alpha, ...
        frontier = product_loop_step(std::move(frontier), k, theta, b_sys);
    }

    std::vector<Branch> done;
    for (Branch& br : frontier) {
        for (Branch& child :
             measure_record(std::move(br), Party::Bob, PauliAxis::Z, b_sys, "sigma_z_B", false)) {
            done.push_back(std::move(child));
        }
    }

    EigenbasisSpec spec;
    spec.family = family;
    spec.alpha = alpha;
    spec.n_ebits = n_ebits;
    return finalize(std::move(spec), kind, std::move(done), n_ebits);
}

// Shared opening of the entangled-basis protocols: remote CNOT onto Bob's
// qubit, then Bob's sigma_z_B reading. Leaves (A) in a twisted state.
std::vector<Branch> nonmax_open(Branch root, int a_sys, int b_sys) {
    int a_id = -1, b_id = -1;
    root = prepare_ebit(std::move(root), a_id, b_id, "_c");
    std::vector<Branch> frontier;
    for (auto& [sb, st] : build_stator(std::move(root), b_id, b_sys, PauliAxis::X, "sigma_x_b")) {
        for (auto& cb : remote_cnot(std::move(sb), st, a_sys, "sigma_z_a")) {
            frontier.push_back(std::move(cb.branch));
        }
    }
    std::vector<Branch> after;
    for (Branch& br : frontier) {
        for (Branch& child :
             measure_record(std::move(br), Party::Bob, PauliAxis::Z, b_sys, "sigma_z_B", false)) {
            after.push_back(std::move(child));
        }
    }
    return after;
}

// One step of the role-swapped untwisting loop: Alice builds the stator on
// her own qubit while she is still untwisting; Bob applies his fixed
// schedule rotation on his half either way.
std::vector<Branch> untwist_loop_step(std::vector<Branch> frontier, int step, int a_sys,
                                      const char* alice_stem, const char* bob_stem,
                                      const std::string& ebit_tag,
                                      const std::function<double(Branch&)>& bob_angle,
                                      const std::function<bool(Branch&)>& alice_engages) {
    std::vector<Branch> next;
    for (Branch& br : frontier) {
        int a_id = -1, b_id = -1;
        Branch with_ebit = prepare_ebit(std::move(br), a_id, b_id, ebit_tag);

        bool engage = alice_engages(with_ebit);

        std::vector<std::pair<Branch, std::optional<Stator>>> mid;
        if (engage) {
            for (auto& [sb, st] : build_stator(std::move(with_ebit), a_id, a_sys, PauliAxis::Y,
                                               step_label(alice_stem, step))) {
                mid.push_back({std::move(sb), st});
            }
        } else {
            mid.push_back({std::move(with_ebit), std::nullopt});
        }

        for (auto& [sb2, st] : mid) {
            Branch sb = std::move(sb2);
            double theta = bob_angle(sb);
            if (st.has_value()) {
                for (auto& rb : remote_rotation(std::move(sb), *st, theta,
                                                step_label(bob_stem, step))) {
                    next.push_back(std::move(rb.branch));
                }
            } else {
                if (theta != 0.0) {
                    sb = apply_party_gate(std::move(sb), Party::Bob,
                                          gates::rotation(PauliAxis::X, theta, b_id));
                }
                for (Branch& done : measure_record(std::move(sb), Party::Bob, PauliAxis::Z, b_id,
                                                   step_label(bob_stem, step), true)) {
                    done = discard_pure(std::move(done), a_id);
                    next.push_back(std::move(done));
                }
            }
        }
    }
    return next;
}

} // namespace

const char* to_string(ProtocolKind k) {
    switch (k) {
        case ProtocolKind::TwistedProduct: return "twisted-product";
        case ProtocolKind::GeneralProduct: return "general-product";
        case ProtocolKind::NonmaxEqual: return "nonmax-equal";
        case ProtocolKind::NonmaxBell: return "nonmax-bell";
        case ProtocolKind::NonmaxGeneral: return "nonmax-general";
        case ProtocolKind::Twist4x4: return "twist4x4";
    }
    return "?";
}

ProtocolKind default_kind(Family f) {
    switch (f) {
        case Family::TwistedProduct: return ProtocolKind::TwistedProduct;
        case Family::GeneralProduct: return ProtocolKind::GeneralProduct;
        case Family::NonmaxEqual: return ProtocolKind::NonmaxEqual;
        case Family::NonmaxGeneral: return ProtocolKind::NonmaxGeneral;
        case Family::Twist4x4: return ProtocolKind::Twist4x4;
    }
    throw StructuralError("unknown family");
}

Family family_of(ProtocolKind k) {
    switch (k) {
        case ProtocolKind::TwistedProduct: return Family::TwistedProduct;
        case ProtocolKind::GeneralProduct: return Family::GeneralProduct;
        case ProtocolKind::NonmaxEqual: return Family::NonmaxEqual;
        case ProtocolKind::NonmaxBell: return Family::NonmaxEqual;
        case ProtocolKind::NonmaxGeneral: return Family::NonmaxGeneral;
        case ProtocolKind::Twist4x4: return Family::Twist4x4;
    }
    throw StructuralError("unknown protocol kind");
}

double ProtocolRun::index_probability(int k) const {
    double p = 0.0;
    for (const RunBranch& rb : branches) {
        if (rb.inferred && *rb.inferred == k) p += rb.probability;
    }
    return p;
}

double ProtocolRun::failure_probability() const {
    double p = 0.0;
    for (const RunBranch& rb : branches) {
        if (rb.failed()) p += rb.probability;
    }
    return p;
}

std::optional<long> quarter_turns(double deviation_angle, double tol) {
    double q = deviation_angle / (kPi / 2.0);
    double r = std::round(q);
    if (std::abs(q - r) > tol) return std::nullopt;
    return static_cast<long>(r);
}

ProtocolRun measure_twisted_product(const StateVector& input, FirewallMode mode) {
    // The fixed-twist case: a single ebit, one conditional pi/4 spinor
    // rotation on Alice's side, written out step by step.
    require_two_party(input);
    const int a_sys = input.reg().at_position(0).id;
    const int b_sys = input.reg().at_position(1).id;

    std::vector<Branch> frontier =
        measure_record(Branch{1.0, input, LocalityContext(mode)}, Party::Alice, PauliAxis::Z,
                       a_sys, "sigma_z_A", false);

    std::vector<Branch> after_loop;
    for (Branch& br : frontier) {
        int a_id = -1, b_id = -1;
        Branch with_ebit = prepare_ebit(std::move(br), a_id, b_id, "[1]");
        for (auto& [sb0, st] : build_stator(std::move(with_ebit), b_id, b_sys, PauliAxis::Y,
                                            "sigma_x_b[1]")) {
            Branch sb = std::move(sb0);
            (void)st;
            int z_a_side = sb.ctx.read(Party::Alice, Party::Alice, "sigma_z_A");
            if (z_a_side == -1) {
                sb = apply_party_gate(std::move(sb), Party::Alice,
                                      gates::rotation(PauliAxis::X, kPi / 4.0, a_id));
            }
            for (Branch& done : measure_record(std::move(sb), Party::Alice, PauliAxis::Z, a_id,
                                               "sigma_z_a[1]", true)) {
                after_loop.push_back(std::move(done));
            }
        }
    }

    std::vector<Branch> done;
    for (Branch& br : after_loop) {
        for (Branch& child :
             measure_record(std::move(br), Party::Bob, PauliAxis::Z, b_sys, "sigma_z_B", false)) {
            done.push_back(std::move(child));
        }
    }

    EigenbasisSpec spec;
    spec.family = Family::TwistedProduct;
    spec.alpha = kPi / 2.0;
    spec.n_ebits = 1;
    return finalize(std::move(spec), ProtocolKind::TwistedProduct, std::move(done), 1);
}

ProtocolRun measure_general_product(const StateVector& input, double alpha, int n_ebits,
                                    FirewallMode mode) {
    if (!(alpha > 0.0 && alpha < kPi)) {
        throw ValidationError("twist angle must satisfy 0 < alpha < pi");
    }
    if (n_ebits < 1) throw ValidationError("correction budget must be at least 1");
    return run_product_basis(input, alpha, n_ebits, Family::GeneralProduct,
                             ProtocolKind::GeneralProduct, mode);
}

ProtocolRun measure_nonmax_equal(const StateVector& input, double alpha, int n_ebits,
                                 FirewallMode mode) {
    if (!(alpha >= 0.0 && alpha <= kPi)) throw ValidationError("alpha must lie in [0, pi]");
    if (n_ebits < 2) {
        throw ValidationError("need at least 2 ebits: one for the remote CNOT, one to untwist");
    }
    require_two_party(input);
    const int a_sys = input.reg().at_position(0).id;
    const int b_sys = input.reg().at_position(1).id;

    std::vector<Branch> frontier =
        nonmax_open(Branch{1.0, input, LocalityContext(mode)}, a_sys, b_sys);

    const int budget = n_ebits - 1;
    for (int k = 1; k <= budget; ++k) {
        frontier = untwist_loop_step(
            std::move(frontier), k, a_sys, "sigma_x_a", "sigma_z_b", step_label("_u", k),
            [alpha, k](Branch& b) {
                int v = b.ctx.read(Party::Bob, Party::Bob, "sigma_x_b");
                return double(v) * (alpha / 2.0) * std::ldexp(1.0, k - 1);
            },
            [](Branch& b) {
                return all_minus(b.ctx.read_prefix(Party::Alice, Party::Alice, "sigma_x_a["));
            });
    }

    std::vector<Branch> done;
    for (Branch& br : frontier) {
        for (Branch& child :
             measure_record(std::move(br), Party::Alice, PauliAxis::Z, a_sys, "sigma_z_A", false)) {
            done.push_back(std::move(child));
        }
    }

    EigenbasisSpec spec;
    spec.family = Family::NonmaxEqual;
    spec.alpha = alpha;
    spec.n_ebits = n_ebits;
    return finalize(std::move(spec), ProtocolKind::NonmaxEqual, std::move(done), n_ebits);
}

ProtocolRun measure_nonmax_general(const StateVector& input, double alpha, double beta,
                                   double phi1, double phi2, int n_ebits, FirewallMode mode) {
    if (!(alpha >= 0.0 && alpha <= kPi) || !(beta >= 0.0 && beta <= kPi)) {
        throw ValidationError("alpha and beta must lie in [0, pi]");
    }
    if (n_ebits < 2) {
        throw ValidationError("need at least 2 ebits: one for the remote CNOT, one to untwist");
    }
    require_two_party(input);
    const int a_sys = input.reg().at_position(0).id;
    const int b_sys = input.reg().at_position(1).id;
    const double gamma = (alpha - beta) / 2.0;
    const bool two_stage = gamma != 0.0;

    Branch root{1.0, input, LocalityContext(mode)};
    if (phi1 != 0.0 || phi2 != 0.0) {
        // Parameter-known local phase alignment; reduces the basis to the
        // phase-free form without touching any record.
        root = apply_party_gate(std::move(root), Party::Alice,
                                gates::phase(-(phi1 + phi2) / 2.0, a_sys));
        root = apply_party_gate(std::move(root), Party::Bob,
                                gates::phase((phi2 - phi1) / 2.0, b_sys));
    }

    std::vector<Branch> frontier = nonmax_open(std::move(root), a_sys, b_sys);

    const int budget = n_ebits - 1;
    for (int k = 1; k <= budget; ++k) {
        frontier = untwist_loop_step(
            std::move(frontier), k, a_sys, "sigma_x_a", "sigma_z_b", step_label("_u", k),
            [alpha, beta, k](Branch& b) {
                int v = b.ctx.read(Party::Bob, Party::Bob, "sigma_x_b");
                int zb = b.ctx.read(Party::Bob, Party::Bob, "sigma_z_B");
                double angle = (zb == +1) ? alpha : beta;
                return double(v) * (angle / 2.0) * std::ldexp(1.0, k - 1);
            },
            [](Branch& b) {
                return all_minus(b.ctx.read_prefix(Party::Alice, Party::Alice, "sigma_x_a["));
            });
    }

    if (two_stage) {
        for (int k = 1; k <= budget; ++k) {
            frontier = untwist_loop_step(
                std::move(frontier), k, a_sys, "sigma_x_a2", "sigma_z_b2", step_label("_u2", k),
                [gamma, k](Branch& b) {
                    int v = b.ctx.read(Party::Bob, Party::Bob, "sigma_x_b");
                    int zb = b.ctx.read(Party::Bob, Party::Bob, "sigma_z_B");
                    return -gamma * double(v) * double(zb) * std::ldexp(1.0, k - 1);
                },
                [](Branch& b) {
                    int u = b.ctx.read(Party::Alice, Party::Alice, "sigma_z_a");
                    if (u != -1) return false;
                    auto first = b.ctx.read_prefix(Party::Alice, Party::Alice, "sigma_x_a[");
                    if (all_minus(first)) return false; // first stage never closed
                    return all_minus(b.ctx.read_prefix(Party::Alice, Party::Alice, "sigma_x_a2["));
                });
        }
    }

    std::vector<Branch> done;
    for (Branch& br : frontier) {
        for (Branch& child :
             measure_record(std::move(br), Party::Alice, PauliAxis::Z, a_sys, "sigma_z_A", false)) {
            done.push_back(std::move(child));
        }
    }

    EigenbasisSpec spec;
    spec.family = Family::NonmaxGeneral;
    spec.alpha = alpha;
    spec.beta = beta;
    spec.phi1 = phi1;
    spec.phi2 = phi2;
    spec.n_ebits = n_ebits;
    int consumed = 1 + budget + (two_stage ? budget : 0);
    return finalize(std::move(spec), ProtocolKind::NonmaxGeneral, std::move(done), consumed);
}

ProtocolRun measure_nonmax_bell_variant(const StateVector& input, double alpha, int n_ebits,
                                        FirewallMode mode) {
    if (!(alpha >= 0.0 && alpha <= kPi)) throw ValidationError("alpha must lie in [0, pi]");
    if (n_ebits < 3) {
        throw ValidationError("need at least 3 ebits: one rotation step plus the Bell pair");
    }
    require_two_party(input);
    const int a_sys = input.reg().at_position(0).id;
    const int b_sys = input.reg().at_position(1).id;
    const double theta = alpha / 2.0 - kPi / 4.0;
    const int budget = n_ebits - 2;

    std::vector<Branch> frontier{Branch{1.0, input, LocalityContext(mode)}};
    for (int k = 1; k <= budget; ++k) {
        double theta_k = theta * std::ldexp(1.0, k - 1);
        std::vector<Branch> next;
        for (Branch& br : frontier) {
            int a_id = -1, b_id = -1;
            Branch with_ebit = prepare_ebit(std::move(br), a_id, b_id, step_label("_r", k));
            bool engage = all_minus(
                with_ebit.ctx.read_prefix(Party::Alice, Party::Alice, "sigma_x_a["));

            std::vector<std::pair<Branch, bool>> mid;
            if (engage) {
                for (auto& [sb, st] : build_stator(std::move(with_ebit), a_id, a_sys,
                                                   PauliAxis::Y, step_label("sigma_x_a", k))) {
                    (void)st;
                    mid.push_back({std::move(sb), true});
                }
            } else {
                mid.push_back({std::move(with_ebit), false});
            }

            for (auto& [sb2, engaged] : mid) {
                Branch sb = std::move(sb2);
                // Bob's schedule is parameter-only: couple his half to his
                // own qubit, then read the half out in z.
                if (theta_k != 0.0) {
                    sb = apply_party_gate(std::move(sb), Party::Bob,
                                          gates::xx_rotation(theta_k, b_id, b_sys));
                }
                for (Branch& done : measure_record(std::move(sb), Party::Bob, PauliAxis::Z, b_id,
                                                   step_label("sigma_z_b", k), true)) {
                    if (!engaged) {
                        // Alice's disposal of a half she never used: a z
                        // readout, which turns the residual coupling into a
                        // recorded Pauli on Bob's side.
                        for (Branch& dd : measure_record(std::move(done), Party::Alice,
                                                         PauliAxis::Z, a_id,
                                                         step_label("sigma_z_a", k), true)) {
                            next.push_back(std::move(dd));
                        }
                    } else {
                        next.push_back(std::move(done));
                    }
                }
            }
        }
        frontier = std::move(next);
    }

    std::vector<Branch> done;
    for (Branch& br : frontier) {
        for (Branch& child : remote_bell_measurement(std::move(br), a_sys, b_sys, "bell_")) {
            done.push_back(std::move(child));
        }
    }

    EigenbasisSpec spec;
    spec.family = Family::NonmaxEqual;
    spec.alpha = alpha;
    spec.n_ebits = n_ebits;
    return finalize(std::move(spec), ProtocolKind::NonmaxBell, std::move(done), budget + 2);
}

ProtocolRun measure_4x4_twist(const StateVector& input, const Eigen::Matrix2cd& u_b, int n_ebits,
                              FirewallMode mode) {
    require_four_level_pair(input);
    auto aa = pauli_axis_angle(u_b);
    if (!aa) {
        throw ValidationError("unsupported twist unitary: expected a Pauli-axis rotation");
    }
    const int a1 = input.reg().at_position(0).id;
    const int a2 = input.reg().at_position(1).id;
    const int b1 = input.reg().at_position(2).id;
    const int b2 = input.reg().at_position(3).id;

    const bool trivial = quarter_turns(aa->theta, 1e-12).has_value();
    if (n_ebits < 2) throw ValidationError("need at least 2 ebits for the Bell readout");
    if (!trivial && n_ebits < 3) {
        throw ValidationError("need at least 3 ebits: one untwist step plus the Bell pair");
    }
    const int budget = trivial ? 0 : n_ebits - 2;

    // Local subspace projections; the quadrant is distributed knowledge.
    std::vector<Branch> frontier =
        measure_record(Branch{1.0, input, LocalityContext(mode)}, Party::Alice, PauliAxis::Z, a1,
                       "sigma_z_A1", false);
    {
        std::vector<Branch> next;
        for (Branch& br : frontier) {
            for (Branch& child :
                 measure_record(std::move(br), Party::Bob, PauliAxis::Z, b1, "sigma_z_B1", false)) {
                next.push_back(std::move(child));
            }
        }
        frontier = std::move(next);
    }

    for (int k = 1; k <= budget; ++k) {
        double phi_k = -aa->theta * std::ldexp(1.0, k - 1);
        std::vector<Branch> next;
        for (Branch& br : frontier) {
            int a_id = -1, b_id = -1;
            Branch with_ebit = prepare_ebit(std::move(br), a_id, b_id, step_label("_t", k));

            bool bob_engages =
                with_ebit.ctx.read(Party::Bob, Party::Bob, "sigma_z_B1") == -1 &&
                all_minus(with_ebit.ctx.read_prefix(Party::Bob, Party::Bob, "sigma_x_b["));

            std::vector<std::pair<Branch, bool>> mid;
            if (bob_engages) {
                for (auto& [sb, st] : build_stator(std::move(with_ebit), b_id, b2, aa->axis,
                                                   step_label("sigma_x_b", k))) {
                    (void)st;
                    mid.push_back({std::move(sb), true});
                }
            } else {
                mid.push_back({std::move(with_ebit), false});
            }

            for (auto& [sb2, bob_built] : mid) {
                Branch sb = std::move(sb2);
                if (sb.ctx.read(Party::Alice, Party::Alice, "sigma_z_A1") == -1 && phi_k != 0.0) {
                    sb = apply_party_gate(std::move(sb), Party::Alice,
                                          gates::rotation(PauliAxis::X, phi_k, a_id));
                }
                for (Branch& done : measure_record(std::move(sb), Party::Alice, PauliAxis::Z, a_id,
                                                   step_label("sigma_z_a", k), true)) {
                    if (!bob_built) done = discard_pure(std::move(done), b_id);
                    next.push_back(std::move(done));
                }
            }
        }
        frontier = std::move(next);
    }

    std::vector<Branch> done;
    for (Branch& br : frontier) {
        for (Branch& child : remote_bell_measurement(std::move(br), a2, b2, "bell_")) {
            done.push_back(std::move(child));
        }
    }

    EigenbasisSpec spec;
    spec.family = Family::Twist4x4;
    spec.u_b = u_b;
    spec.n_ebits = n_ebits;
    return finalize(std::move(spec), ProtocolKind::Twist4x4, std::move(done), budget + 2);
}

ProtocolRun run_protocol(ProtocolKind kind, const EigenbasisSpec& spec, const StateVector& input,
                         FirewallMode mode) {
    switch (kind) {
        case ProtocolKind::TwistedProduct:
            return measure_twisted_product(input, mode);
        case ProtocolKind::GeneralProduct:
            return measure_general_product(input, spec.alpha, spec.n_ebits, mode);
        case ProtocolKind::NonmaxEqual:
            return measure_nonmax_equal(input, spec.alpha, spec.n_ebits, mode);
        case ProtocolKind::NonmaxBell:
            return measure_nonmax_bell_variant(input, spec.alpha, spec.n_ebits, mode);
        case ProtocolKind::NonmaxGeneral:
            return measure_nonmax_general(input, spec.alpha, spec.beta, spec.phi1, spec.phi2,
                                          spec.n_ebits, mode);
        case ProtocolKind::Twist4x4:
            return measure_4x4_twist(input, spec.u_b, spec.n_ebits, mode);
    }
    throw StructuralError("unknown protocol kind");
}

} // namespace nlm
