// Acceptance suite: one line per criterion, exit 0 only if everything holds.
// Every expected number is produced by the verify oracles or by exhaustive
// enumeration, never by the protocol code under test.

#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "nlm/verify.hpp"

using namespace nlm;

namespace {

constexpr double kPi = 3.14159265358979323846;

int g_failures = 0;

void criterion(int number, const std::string& name, bool pass, const std::string& detail = "") {
    std::printf("[%d] %-58s %s%s%s\n", number, name.c_str(), pass ? "PASS" : "FAIL",
                detail.empty() ? "" : "  ", detail.c_str());
    if (!pass) ++g_failures;
}

struct FamilyCase {
    std::string name;
    ProtocolKind kind;
    EigenbasisSpec spec;
};

std::vector<FamilyCase> acceptance_families() {
    std::vector<FamilyCase> cases;

    EigenbasisSpec tw;
    tw.family = Family::TwistedProduct;
    tw.n_ebits = 1;
    cases.push_back({"twisted-product", ProtocolKind::TwistedProduct, tw});

    for (double alpha : {0.3, 1.0, kPi / 2.0, kPi / 8.0}) {
        EigenbasisSpec gp;
        gp.family = Family::GeneralProduct;
        gp.alpha = alpha;
        gp.n_ebits = 3;
        cases.push_back({"general-product(alpha=" + std::to_string(alpha) + ")",
                         ProtocolKind::GeneralProduct, gp});
    }

    EigenbasisSpec nm;
    nm.family = Family::NonmaxEqual;
    nm.alpha = kPi / 3.0;
    nm.n_ebits = 3;
    cases.push_back({"nonmax-equal(pi/3)", ProtocolKind::NonmaxEqual, nm});

    EigenbasisSpec nb = nm;
    nb.n_ebits = 4;
    cases.push_back({"nonmax-bell(pi/3)", ProtocolKind::NonmaxBell, nb});

    EigenbasisSpec ng;
    ng.family = Family::NonmaxGeneral;
    ng.alpha = kPi / 3.0;
    ng.beta = kPi / 7.0;
    ng.n_ebits = 3;
    cases.push_back({"nonmax-general(pi/3,pi/7)", ProtocolKind::NonmaxGeneral, ng});

    EigenbasisSpec t4_id;
    t4_id.family = Family::Twist4x4;
    t4_id.u_b = Eigen::Matrix2cd::Identity();
    t4_id.n_ebits = 2;
    cases.push_back({"twist4x4(identity)", ProtocolKind::Twist4x4, t4_id});

    EigenbasisSpec t4_rot = t4_id;
    t4_rot.u_b = rotation_matrix(PauliAxis::Y, 0.4);
    t4_rot.n_ebits = 4;
    cases.push_back({"twist4x4(exp(i 0.4 sigma_y))", ProtocolKind::Twist4x4, t4_rot});

    return cases;
}

bool check_eigenstate_certainty() {
    for (const FamilyCase& fc : acceptance_families()) {
        auto basis = eigenbasis(fc.spec);
        for (std::size_t k = 0; k < basis.size(); ++k) {
            ProtocolRun run = run_protocol(fc.kind, fc.spec, basis[k]);
            double correct = run.index_probability(static_cast<int>(k) + 1);
            double failure = run.failure_probability();
            if (run.success_probability <= 0.0) return false;
            // conditioned on success, the right index with probability 1
            if (std::abs(correct / run.success_probability - 1.0) > 1e-10) return false;
            if (std::abs(correct + failure - 1.0) > 1e-12) return false;
        }
    }
    return true;
}

bool check_born_rule(std::string& detail) {
    double worst = 0.0;
    for (const FamilyCase& fc : acceptance_families()) {
        int inputs = fc.spec.family == Family::Twist4x4 ? 100 : 100;
        auto reports = verify::born_cross_check(fc.kind, fc.spec, inputs, 91210);
        for (const auto& r : reports) {
            worst = std::max(worst, r.observed);
            if (!r.pass) return false;
        }
    }
    detail = "max deviation " + std::to_string(worst);
    return true;
}

bool check_no_signaling() {
    for (const FamilyCase& fc : acceptance_families()) {
        if (!verify::all_pass(verify::no_signaling_audit(fc.kind, fc.spec))) return false;
    }
    return true;
}

bool check_success_probabilities(std::string& detail) {
    // pinned: the generic two-step value is exactly 3/4
    auto rows = verify::success_sweep({1.0, 0.3}, {2});
    for (const auto& r : rows) {
        if (std::abs(r.enumerated - 0.75) > 1e-12) return false;
    }

    // pinned: listed closing angles reach certainty at their stage
    struct Closing {
        double alpha;
        int stage;
    };
    for (const Closing& c : {Closing{kPi / 8.0, 3}, Closing{3.0 * kPi / 8.0, 3},
                             Closing{kPi / 16.0, 4}, Closing{3.0 * kPi / 16.0, 4},
                             Closing{5.0 * kPi / 16.0, 4}}) {
        if (verify::closing_stage(c.alpha) != c.stage) return false;
        auto row = verify::success_sweep({c.alpha}, {c.stage});
        if (std::abs(row[0].enumerated - 1.0) > 1e-12) return false;
    }

    // the full n-dependence, emitted next to both closed forms; the offset
    // against the quoted form is reported, not asserted
    double max_quoted_gap = 0.0, max_per_step_gap = 0.0;
    auto full = verify::success_sweep({1.0}, {1, 2, 3, 4, 5, 6});
    for (const auto& r : full) {
        max_quoted_gap = std::max(max_quoted_gap, std::abs(r.enumerated - r.quoted_form));
        max_per_step_gap = std::max(max_per_step_gap, std::abs(r.enumerated - r.per_step_form));
    }
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "enumerated=1-2^-n (gap to quoted form %.3g, to per-step form %.3g)",
                  max_quoted_gap, max_per_step_gap);
    detail = buf;
    return true;
}

bool check_stator_algebra() {
    std::mt19937_64 rng(42424242);
    Register reg = two_party_register();
    for (int t = 0; t < 100; ++t) {
        PauliAxis axis = (t % 2 == 0) ? PauliAxis::X : PauliAxis::Y;
        StateVector psi = verify::random_state(reg, rng);
        int b_sys = psi.reg().at_position(1).id;
        int a_id = -1, b_id = -1;
        Branch root = prepare_ebit(Branch{1.0, psi, LocalityContext{}}, a_id, b_id, "_s");
        for (auto& [br, st] : build_stator(std::move(root), b_id, b_sys, axis, "sigma_x_b")) {
            if (stator_eigen_defect(br.state, st) > 1e-12) return false;
        }
    }
    return true;
}

bool check_table_reproduction() {
    // the equal-angle reference blocks hold exactly
    EigenbasisSpec nm;
    nm.family = Family::NonmaxEqual;
    nm.alpha = 1.1;
    nm.n_ebits = 3;
    verify::InferenceTable nt = verify::derive_map_table(nm);
    using Row = std::array<std::pair<int, int>, 4>;
    for (const auto& b : nt.blocks) {
        Row expect = b.key_w == +1 ? Row{{{0, 0}, {1, 0}, {0, 1}, {1, 1}}}
                                   : Row{{{0, 1}, {1, 1}, {0, 0}, {1, 0}}};
        if (b.outcomes != expect) return false;
    }

    // fixed twist: all four blocks match the expected bijections, and the
    // derived assignments are stable across derivations
    EigenbasisSpec tw;
    tw.family = Family::TwistedProduct;
    tw.n_ebits = 1;
    verify::InferenceTable t1 = verify::derive_map_table(tw);
    verify::InferenceTable t2 = verify::derive_map_table(tw);
    std::map<std::pair<int, int>, Row> expected = {
        {{+1, +1}, Row{{{0, 0}, {0, 1}, {1, 0}, {1, 1}}}},
        {{+1, -1}, Row{{{0, 0}, {0, 1}, {1, 1}, {1, 0}}}},
        {{-1, +1}, Row{{{0, 1}, {0, 0}, {1, 1}, {1, 0}}}},
        {{-1, -1}, Row{{{0, 1}, {0, 0}, {1, 0}, {1, 1}}}},
    };
    for (std::size_t i = 0; i < t1.blocks.size(); ++i) {
        const auto& b = t1.blocks[i];
        if (b.outcomes != expected.at({b.key_w, b.key_v})) return false;
        if (b.outcomes != t2.blocks[i].outcomes) return false;
    }
    return true;
}

bool check_reduction_identities() {
    auto record_key = [](const RunBranch& rb) {
        std::string s;
        for (Party p : {Party::Alice, Party::Bob}) {
            for (const RecordEntry& e : rb.ctx.record(p).entries) {
                s += e.label + (e.value > 0 ? "+" : "-");
            }
        }
        return s;
    };
    auto trees_equal = [&](const ProtocolRun& x, const ProtocolRun& y) {
        if (x.branches.size() != y.branches.size()) return false;
        std::map<std::string, const RunBranch*> index;
        for (const RunBranch& rb : x.branches) index[record_key(rb)] = &rb;
        for (const RunBranch& rb : y.branches) {
            auto it = index.find(record_key(rb));
            if (it == index.end()) return false;
            const RunBranch& o = *it->second;
            if (std::abs(rb.probability - o.probability) > 1e-12) return false;
            if (rb.inferred != o.inferred) return false;
            for (std::size_t i = 0; i < rb.post.dim(); ++i) {
                if (std::abs(rb.post.amplitude(i) - o.post.amplitude(i)) > 1e-12) return false;
            }
        }
        return true;
    };

    EigenbasisSpec tw;
    tw.family = Family::TwistedProduct;
    auto basis = eigenbasis(tw);
    std::mt19937_64 rng(5150);
    for (int k = 0; k < 4; ++k) {
        if (!trees_equal(measure_twisted_product(basis[k]),
                         measure_general_product(basis[k], kPi / 2.0, 1))) {
            return false;
        }
    }
    for (int t = 0; t < 4; ++t) {
        StateVector psi = verify::random_state(two_party_register(), rng);
        if (!trees_equal(measure_twisted_product(psi),
                         measure_general_product(psi, kPi / 2.0, 1))) {
            return false;
        }
    }

    const double alpha = 0.9;
    EigenbasisSpec nm;
    nm.family = Family::NonmaxEqual;
    nm.alpha = alpha;
    nm.n_ebits = 3;
    auto nbasis = eigenbasis(nm);
    for (int k = 0; k < 4; ++k) {
        if (!trees_equal(measure_nonmax_equal(nbasis[k], alpha, 3),
                         measure_nonmax_general(nbasis[k], alpha, alpha, 0.0, 0.0, 3))) {
            return false;
        }
    }
    return true;
}

bool check_negative_control() {
    return verify::all_pass(verify::negative_control_reports());
}

} // namespace

int main() {
    std::string detail;

    criterion(1, "eigenstate certainty across all families", check_eigenstate_certainty());

    detail.clear();
    bool born = check_born_rule(detail);
    criterion(2, "Born rule on 100 random inputs per family", born, detail);

    criterion(3, "no-signaling: mixed remote reductions, stable marginals", check_no_signaling());

    detail.clear();
    bool success = check_success_probabilities(detail);
    criterion(4, "success probabilities: 3/4 pinned, closing angles exact", success, detail);

    criterion(5, "stator eigenoperator identity, 100 random builds", check_stator_algebra());

    criterion(6, "outcome-map tables reproduced by enumeration", check_table_reproduction());

    criterion(7, "reduction identities between protocol variants", check_reduction_identities());

    criterion(8, "negative control: cross-conditioned variant caught", check_negative_control());

    if (g_failures == 0) {
        std::printf("all acceptance criteria hold\n");
        return 0;
    }
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
}
