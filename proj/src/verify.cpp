#include "nlm/verify.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace nlm::verify {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kInvSqrt2 = 0.70710678118654752440;

std::string record_string(const OutcomeRecord& rec) {
    std::string s;
    for (const RecordEntry& e : rec.entries) {
        s += e.label + (e.value > 0 ? "=+1;" : "=-1;");
    }
    return s;
}

Eigen::MatrixXcd ensemble_reduced(const ProtocolRun& run, int position) {
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(2, 2);
    for (const RunBranch& rb : run.branches) {
        int id = rb.post.reg().at_position(position).id;
        acc += rb.probability * rb.post.reduced({id}).entries();
    }
    return acc;
}

Eigen::MatrixXcd input_reduced_for_party(const StateVector& input, Party p) {
    std::vector<int> ids;
    for (const RegisterSlot& s : input.reg().slots()) {
        if (s.party == p) ids.push_back(s.id);
    }
    return input.reduced(ids).entries();
}

} // namespace

OracleReport report(std::string quantity, double expected, double observed, double tolerance) {
    bool pass = std::abs(expected - observed) <= tolerance;
    return {std::move(quantity), expected, observed, tolerance, pass};
}

bool all_pass(const std::vector<OracleReport>& reports) {
    return std::all_of(reports.begin(), reports.end(),
                       [](const OracleReport& r) { return r.pass; });
}

std::vector<double> born_oracle(const EigenbasisSpec& spec, const StateVector& input) {
    std::vector<double> probs;
    double total = 0.0;
    for (const StateVector& eig : eigenbasis(spec)) {
        double p = std::norm(eig.inner(input));
        probs.push_back(p);
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-12) {
        throw ValidationError("projector probabilities sum to " + std::to_string(total));
    }
    return probs;
}

StateVector random_state(const Register& reg, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<Complex> amps(std::size_t{1} << reg.size());
    double norm2 = 0.0;
    for (Complex& a : amps) {
        a = Complex(gauss(rng), gauss(rng));
        norm2 += std::norm(a);
    }
    double inv = 1.0 / std::sqrt(norm2);
    for (Complex& a : amps) a *= inv;
    return StateVector(reg, std::move(amps));
}

std::vector<NamedInput> standard_audit_inputs(const EigenbasisSpec& spec) {
    std::vector<NamedInput> inputs;
    std::vector<StateVector> basis = eigenbasis(spec);
    for (std::size_t k = 0; k < basis.size(); ++k) {
        inputs.push_back({"eigen" + std::to_string(k + 1), basis[k]});
    }
    if (spec.family != Family::Twist4x4) {
        Register reg = two_party_register();
        inputs.push_back({"0A_plusB", StateVector(reg, {kInvSqrt2, kInvSqrt2, 0, 0})});
        inputs.push_back({"1A_plusB", StateVector(reg, {0, 0, kInvSqrt2, kInvSqrt2})});
        inputs.push_back({"0A_0B", StateVector(reg, {1, 0, 0, 0})});
    } else {
        Register reg = four_level_pair_register();
        inputs.push_back({"l0_l0", make_state(reg, "0000")});
        inputs.push_back({"l0_l2", make_state(reg, "0010")});
    }
    return inputs;
}

std::vector<int> remote_operated_positions(ProtocolKind kind) {
    switch (kind) {
        case ProtocolKind::TwistedProduct:
        case ProtocolKind::GeneralProduct:
            return {1}; // B carries the twisted directions
        case ProtocolKind::NonmaxEqual:
        case ProtocolKind::NonmaxBell:
        case ProtocolKind::NonmaxGeneral:
            return {0, 1};
        case ProtocolKind::Twist4x4:
            return {1, 3}; // the intra-subspace qubits
    }
    return {};
}

std::vector<OracleReport> reduced_state_audit(const RunFn& run,
                                              const std::vector<NamedInput>& inputs,
                                              const std::vector<int>& remote_positions,
                                              double tol) {
    std::vector<OracleReport> out;
    for (const NamedInput& in : inputs) {
        ProtocolRun r = run(in.second);
        for (int pos : remote_positions) {
            Eigen::MatrixXcd rho = ensemble_reduced(r, pos);
            double dev = (rho - Eigen::MatrixXcd::Identity(2, 2) / 2.0).cwiseAbs().maxCoeff();
            std::string qname = r.branches.front().post.reg().at_position(pos).name;
            out.push_back(report("reduced(" + in.first + "," + qname + ") vs I/2", 0.0, dev, tol));
        }
    }
    return out;
}

std::map<std::string, double> record_marginal(const ProtocolRun& run, Party p) {
    std::map<std::string, double> dist;
    for (const RunBranch& rb : run.branches) {
        dist[record_string(rb.ctx.record(p))] += rb.probability;
    }
    return dist;
}

double total_variation(const std::map<std::string, double>& p,
                       const std::map<std::string, double>& q) {
    std::set<std::string> keys;
    for (const auto& [k, v] : p) keys.insert(k);
    for (const auto& [k, v] : q) keys.insert(k);
    double tv = 0.0;
    for (const std::string& k : keys) {
        double pv = p.count(k) ? p.at(k) : 0.0;
        double qv = q.count(k) ? q.at(k) : 0.0;
        tv += std::abs(pv - qv);
    }
    return tv / 2.0;
}

std::vector<OracleReport> record_marginal_audit(const RunFn& run,
                                                const std::vector<NamedInput>& inputs,
                                                double tol) {
    struct Entry {
        std::string name;
        Eigen::MatrixXcd rho_a, rho_b;
        std::map<std::string, double> marg_a, marg_b;
    };
    std::vector<Entry> entries;
    for (const NamedInput& in : inputs) {
        ProtocolRun r = run(in.second);
        entries.push_back({in.first, input_reduced_for_party(in.second, Party::Alice),
                           input_reduced_for_party(in.second, Party::Bob),
                           record_marginal(r, Party::Alice), record_marginal(r, Party::Bob)});
    }

    std::vector<OracleReport> out;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        for (std::size_t j = i + 1; j < entries.size(); ++j) {
            // a party's statistics may depend only on its own reduced input
            if ((entries[i].rho_a - entries[j].rho_a).cwiseAbs().maxCoeff() < 1e-9) {
                double tv = total_variation(entries[i].marg_a, entries[j].marg_a);
                out.push_back(report("alice marginal " + entries[i].name + " vs " + entries[j].name,
                                     0.0, tv, tol));
            }
            if ((entries[i].rho_b - entries[j].rho_b).cwiseAbs().maxCoeff() < 1e-9) {
                double tv = total_variation(entries[i].marg_b, entries[j].marg_b);
                out.push_back(report("bob marginal " + entries[i].name + " vs " + entries[j].name,
                                     0.0, tv, tol));
            }
        }
    }
    return out;
}

std::vector<OracleReport> no_signaling_audit(ProtocolKind kind, const EigenbasisSpec& spec) {
    RunFn run = [kind, &spec](const StateVector& in) { return run_protocol(kind, spec, in); };
    std::vector<NamedInput> inputs = standard_audit_inputs(spec);
    std::vector<OracleReport> out =
        reduced_state_audit(run, inputs, remote_operated_positions(kind));
    for (OracleReport& r : record_marginal_audit(run, inputs)) out.push_back(std::move(r));
    return out;
}

OracleReport locality_audit(const ProtocolRun& run) {
    int violations = 0;
    for (const RunBranch& rb : run.branches) violations += rb.ctx.violation_count();
    return report("cross-party gate/read count", 0.0, double(violations), 0.0);
}

std::vector<OracleReport> born_cross_check(ProtocolKind kind, const EigenbasisSpec& spec,
                                           int num_inputs, unsigned seed, double tol) {
    std::vector<StateVector> basis = eigenbasis(spec);
    const int n = static_cast<int>(basis.size());

    // per-eigenstate success weights, enumerated once
    std::vector<double> weight(n, 1.0);
    for (int k = 0; k < n; ++k) {
        weight[k] = run_protocol(kind, spec, basis[k]).success_probability;
    }

    std::mt19937_64 rng(seed);
    const Register reg =
        spec.family == Family::Twist4x4 ? four_level_pair_register() : two_party_register();

    double max_dev = 0.0;
    for (int t = 0; t < num_inputs; ++t) {
        StateVector psi = random_state(reg, rng);
        std::vector<double> oracle = born_oracle(spec, psi);
        ProtocolRun run = run_protocol(kind, spec, psi);

        double z = 0.0;
        for (int k = 0; k < n; ++k) z += oracle[k] * weight[k];
        for (int k = 0; k < n; ++k) {
            double conditioned = run.success_probability > 0.0
                                     ? run.index_probability(k + 1) / run.success_probability
                                     : 0.0;
            double expected = z > 0.0 ? oracle[k] * weight[k] / z : 0.0;
            max_dev = std::max(max_dev, std::abs(conditioned - expected));
        }
    }
    return {report(std::string("born deviation, ") + to_string(kind) + ", " +
                       std::to_string(num_inputs) + " random inputs",
                   0.0, max_dev, tol)};
}

int closing_stage(double alpha, int max_stage) {
    for (int m = 1; m <= max_stage; ++m) {
        double spun = std::ldexp(1.0, m - 1) * alpha;
        auto q = quarter_turns(spun, 1e-9);
        if (q && *q != 0) return m;
    }
    return 0;
}

std::vector<SweepRow> success_sweep(const std::vector<double>& alphas, const std::vector<int>& ns) {
    std::vector<SweepRow> rows;
    for (double alpha : alphas) {
        EigenbasisSpec spec;
        spec.family = Family::GeneralProduct;
        spec.alpha = alpha;
        StateVector twisted = eigenbasis(spec)[2]; // |1_A> (cos|0>+sin|1>)
        for (int n : ns) {
            ProtocolRun run = measure_general_product(twisted, alpha, n);
            SweepRow row;
            row.alpha = alpha;
            row.n = n;
            row.enumerated = run.success_probability;
            row.quoted_form = 1.0 - std::ldexp(1.0, -(n - 1));
            row.per_step_form = 1.0 - std::ldexp(1.0, -n);
            row.closing_stage = closing_stage(alpha);
            rows.push_back(row);
        }
    }
    return rows;
}

InferenceTable derive_map_table(const EigenbasisSpec& spec) {
    ProtocolKind kind;
    std::string row_label, col_label;
    switch (spec.family) {
        case Family::TwistedProduct:
            kind = ProtocolKind::TwistedProduct;
            row_label = "sigma_z_a[1]";
            col_label = "sigma_x_b[1]";
            break;
        case Family::NonmaxEqual:
            kind = ProtocolKind::NonmaxEqual;
            row_label = "sigma_z_a";
            col_label = "sigma_x_b";
            break;
        case Family::NonmaxGeneral:
            kind = ProtocolKind::NonmaxGeneral;
            row_label = "sigma_z_a";
            col_label = "sigma_x_b";
            break;
        default:
            throw StructuralError("map table derivation supports the 2x2 product-outcome families");
    }

    std::vector<StateVector> basis = eigenbasis(spec);

    // signature -> eigenstate -> (a_bit, b_bit); plus the block key per signature
    struct SigData {
        int w = 0, v = 0;
        bool clean = true;
        std::array<std::pair<int, int>, 4> outcomes;
        std::array<bool, 4> seen{};
    };
    std::map<std::string, SigData> sigs;

    for (int k = 0; k < 4; ++k) {
        ProtocolRun run = run_protocol(kind, spec, basis[k]);
        for (const RunBranch& rb : run.branches) {
            if (rb.failed()) continue;
            std::string sig;
            bool clean = true;
            for (Party p : {Party::Alice, Party::Bob}) {
                for (const RecordEntry& e : rb.ctx.record(p).entries) {
                    if (e.label == "sigma_z_A" || e.label == "sigma_z_B") continue;
                    sig += e.label + (e.value > 0 ? "+" : "-") + ";";
                    if (e.label != row_label && e.label != col_label && e.value != +1) {
                        clean = false;
                    }
                }
            }
            SigData& sd = sigs[sig];
            sd.w = rb.alice().has(row_label) ? rb.alice().value_of(row_label)
                                             : rb.bob().value_of(row_label);
            sd.v = rb.bob().value_of(col_label);
            sd.clean = clean;
            int a_bit = rb.alice().value_of("sigma_z_A") == +1 ? 0 : 1;
            int b_bit = rb.bob().value_of("sigma_z_B") == +1 ? 0 : 1;
            if (sd.seen[k] && sd.outcomes[k] != std::make_pair(a_bit, b_bit)) {
                throw ProtocolError("record signature does not determine the outcome");
            }
            sd.outcomes[k] = {a_bit, b_bit};
            sd.seen[k] = true;
        }
    }

    // every signature must induce a bijection over the four product outcomes
    for (const auto& [sig, sd] : sigs) {
        std::set<std::pair<int, int>> image;
        for (int k = 0; k < 4; ++k) {
            if (!sd.seen[k]) throw ProtocolError("signature missing an eigenstate: " + sig);
            image.insert(sd.outcomes[k]);
        }
        if (image.size() != 4) {
            throw ProtocolError("signature maps two eigenstates to one outcome: " + sig);
        }
    }

    InferenceTable table;
    table.family = spec.family;
    const int keys[4][2] = {{+1, +1}, {+1, -1}, {-1, +1}, {-1, -1}};
    for (const auto& key : keys) {
        bool found = false;
        for (const auto& [sig, sd] : sigs) {
            if (sd.w == key[0] && sd.v == key[1] && sd.clean) {
                MapBlock block;
                block.key_w = sd.w;
                block.key_v = sd.v;
                block.outcomes = sd.outcomes;
                table.blocks.push_back(block);
                found = true;
                break;
            }
        }
        if (!found) throw ProtocolError("no clean signature found for a block");
    }
    return table;
}

ProtocolRun cross_conditioned_control_run(const StateVector& input) {
    const int a_sys = input.reg().at_position(0).id;
    const int b_sys = input.reg().at_position(1).id;

    std::vector<Branch> frontier =
        measure_record(Branch{1.0, input, LocalityContext(FirewallMode::Audit)}, Party::Alice,
                       PauliAxis::Z, a_sys, "sigma_z_A", false);

    std::vector<Branch> done;
    for (Branch& br : frontier) {
        // Bob reads Alice's record: the audit flags this as a violation.
        int z_a = br.ctx.read(Party::Bob, Party::Alice, "sigma_z_A");
        Branch b = std::move(br);
        if (z_a == -1) {
            b = apply_party_gate(std::move(b), Party::Bob,
                                 gates::rotation(PauliAxis::Y, kPi / 4.0, b_sys));
        }
        for (Branch& child :
             measure_record(std::move(b), Party::Bob, PauliAxis::Z, b_sys, "sigma_z_B", false)) {
            done.push_back(std::move(child));
        }
    }

    ProtocolRun run;
    run.spec.family = Family::TwistedProduct;
    run.kind = ProtocolKind::TwistedProduct;
    run.ebits_consumed = 0;
    double total = 0.0, success = 0.0;
    for (Branch& b : done) {
        RunBranch rb;
        rb.probability = b.probability;
        int z_a = b.ctx.record(Party::Alice).value_of("sigma_z_A");
        int z_b = b.ctx.record(Party::Bob).value_of("sigma_z_B");
        rb.inferred = (z_a == +1) ? (z_b == +1 ? 1 : 2) : (z_b == +1 ? 3 : 4);
        rb.post = std::move(b.state);
        rb.ctx = std::move(b.ctx);
        total += rb.probability;
        success += rb.probability;
        run.branches.push_back(std::move(rb));
    }
    run.success_probability = success;
    if (std::abs(total - 1.0) > 1e-12) throw ProtocolError("control run probabilities broken");
    return run;
}

std::vector<OracleReport> negative_control_reports() {
    RunFn broken = [](const StateVector& in) { return cross_conditioned_control_run(in); };
    EigenbasisSpec spec;
    spec.family = Family::TwistedProduct;
    std::vector<NamedInput> inputs = standard_audit_inputs(spec);

    std::vector<OracleReport> out;
    // locality: must show violations
    int violations = 0;
    for (const NamedInput& in : inputs) {
        ProtocolRun r = broken(in.second);
        violations += static_cast<int>(locality_audit(r).observed);
    }
    out.push_back(report("control: violations detected (>0 expected)", 1.0,
                         violations > 0 ? 1.0 : 0.0, 0.0));

    // no-signaling: reduced-state and marginal audits must fail somewhere
    bool reduced_failed = !all_pass(reduced_state_audit(broken, inputs, {1}));
    bool marginal_failed = !all_pass(record_marginal_audit(broken, inputs));
    out.push_back(report("control: reduced-state audit fails", 1.0, reduced_failed ? 1.0 : 0.0, 0.0));
    out.push_back(report("control: record-marginal audit fails", 1.0, marginal_failed ? 1.0 : 0.0, 0.0));
    return out;
}

} // namespace nlm::verify
