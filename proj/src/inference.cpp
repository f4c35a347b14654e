// Record-combining inference. Every function here is a pure function of the
// two parties' records plus the protocol parameters; none of them can see
// the quantum state. Correction factors that were never physically undone
// (Pauli collapses, quarter-turn residues of the rotation cascades) are
// folded into the reported index classically.

#include <cmath>

#include "nlm/protocol.hpp"

namespace nlm {

namespace {

constexpr double kPi = 3.14159265358979323846;

int mod2(long x) { return static_cast<int>(((x % 2) + 2) % 2); }

std::string step_label(const char* stem, int k) {
    return std::string(stem) + "[" + std::to_string(k) + "]";
}

// Fold one rotation cascade: sum the applied spinor angles over the steps
// the stator builder actually engaged, and count the Pauli factors left by
// the rotator's z readouts on those steps.
struct CascadeFold {
    double applied = 0.0;
    long pauli_count = 0;
    int steps = 0;
};

CascadeFold fold_cascade(const OutcomeRecord& builder, const char* builder_stem,
                         const OutcomeRecord& rotator, const char* rotator_stem,
                         double theta_base) {
    std::vector<int> vs = builder.values_with_prefix(std::string(builder_stem) + "[");
    CascadeFold f;
    f.steps = static_cast<int>(vs.size());
    for (int k = 1; k <= f.steps; ++k) {
        f.applied += theta_base * std::ldexp(1.0, k - 1) * vs[k - 1];
        if (rotator.value_of(step_label(rotator_stem, k)) == -1) ++f.pauli_count;
    }
    return f;
}

// Product-basis families: Alice's sigma_z_A splits {1,2} from {3,4}; the
// B-side label is read through the folded flip parity.
std::optional<int> infer_product(double alpha, const OutcomeRecord& alice,
                                 const OutcomeRecord& bob) {
    int a0 = alice.value_of("sigma_z_A");
    int z_b = bob.value_of("sigma_z_B");
    CascadeFold f = fold_cascade(bob, "sigma_x_b", alice, "sigma_z_a", alpha / 2.0);
    int b_bit = (z_b == +1) ? 0 : 1;
    if (a0 == +1) {
        return 1 + (b_bit ^ mod2(f.pauli_count));
    }
    auto j = quarter_turns(f.applied - alpha / 2.0);
    if (!j) return std::nullopt;
    return 3 + (b_bit ^ mod2(f.pauli_count + *j));
}

// Entangled-basis product variants. The (u, v) pair selects the outcome
// block; the untwisting cascades act on Alice's qubit, so their folds adjust
// her final z reading.
std::optional<int> infer_nonmax_product(const EigenbasisSpec& spec, bool two_angle,
                                        const OutcomeRecord& alice, const OutcomeRecord& bob) {
    int u = alice.value_of("sigma_z_a");
    int v = bob.value_of("sigma_x_b");
    int z_b = bob.value_of("sigma_z_B");
    int z_a = alice.value_of("sigma_z_A");

    double alpha = spec.alpha;
    double beta = two_angle ? spec.beta : spec.alpha;
    double gamma = (alpha - beta) / 2.0;

    double stage1_angle = (z_b == +1) ? alpha : beta;
    CascadeFold f1 = fold_cascade(alice, "sigma_x_a", bob, "sigma_z_b",
                                  double(v) * stage1_angle / 2.0);
    double applied = f1.applied;
    long pauli = f1.pauli_count;
    if (two_angle && gamma != 0.0) {
        CascadeFold f2 = fold_cascade(alice, "sigma_x_a2", bob, "sigma_z_b2",
                                      -gamma * double(v) * double(z_b));
        applied += f2.applied;
        pauli += f2.pauli_count;
    }

    // which twist the input pair actually carried, from the records alone
    double pair_angle = ((u == +1) == (z_b == +1)) ? alpha : beta;
    auto j = quarter_turns(applied - double(v) * pair_angle / 2.0);
    if (!j) return std::nullopt;

    int a_bit = ((z_a == +1) ? 0 : 1) ^ mod2(pauli + *j);
    int b_bit = (z_b == +1) ? 0 : 1;
    if (u == -1) b_bit ^= 1; // the recorded flip on Bob's side selects the block
    // block map: (a,b) -> index
    static const int table[2][2] = {{1, 3}, {2, 4}}; // table[a][b]
    return table[a_bit][b_bit];
}

std::optional<int> infer_nonmax_bell(const EigenbasisSpec& spec, const OutcomeRecord& alice,
                                     const OutcomeRecord& bob) {
    double theta = spec.alpha / 2.0 - kPi / 4.0;
    CascadeFold f = fold_cascade(alice, "sigma_x_a", bob, "sigma_z_b", theta);
    auto j = quarter_turns(f.applied - theta);
    if (!j) return std::nullopt;

    // disposal readouts on the steps after Alice stopped leave recorded
    // sigma_x factors on Bob's qubit
    long unused_x = 0;
    const int budget = spec.n_ebits - 2;
    for (int k = f.steps + 1; k <= budget; ++k) {
        int ab = alice.value_of(step_label("sigma_z_a", k));
        int wb = bob.value_of(step_label("sigma_z_b", k));
        if (ab * wb == -1) ++unused_x;
    }

    int z_parity = alice.value_of("bell_z_a") * bob.value_of("bell_z_b");
    int x_parity = alice.value_of("bell_x_a") * bob.value_of("bell_x_b");
    int obs = bell_index_from_parities(z_parity, x_parity);
    int obs_x = (obs >> 1) & 1, obs_z = obs & 1;

    // sigma_y on A toggles both Bell bits; the quarter-turn residue
    // (sigma_y sigma_x) toggles the sign bit; disposal sigma_x toggles the
    // flip bit.
    int true_x = obs_x ^ mod2(f.pauli_count + unused_x);
    int true_z = obs_z ^ mod2(f.pauli_count + *j);
    return 1 + ((true_x << 1) | true_z);
}

std::optional<int> infer_4x4(const EigenbasisSpec& spec, const OutcomeRecord& alice,
                             const OutcomeRecord& bob) {
    auto aa = pauli_axis_angle(spec.u_b);
    if (!aa) throw StructuralError("unsupported twist unitary in inference");

    int qa = alice.value_of("sigma_z_A1");
    int qb = bob.value_of("sigma_z_B1");
    bool a_low = (qa == -1), b_low = (qb == -1); // projected into {2,3}

    std::vector<int> vs = bob.values_with_prefix("sigma_x_b[");
    long pauli = 0;
    double applied = 0.0;
    for (int k = 1; k <= static_cast<int>(vs.size()); ++k) {
        if (alice.value_of(step_label("sigma_z_a", k)) == -1) ++pauli;
        if (a_low) applied += -aa->theta * std::ldexp(1.0, k - 1) * vs[k - 1];
    }
    double needed = (a_low && b_low) ? -aa->theta : 0.0;
    auto j = quarter_turns(applied - needed);
    if (!j) return std::nullopt;
    long count = pauli + *j;

    int z_parity = alice.value_of("bell_z_a") * bob.value_of("bell_z_b");
    int x_parity = alice.value_of("bell_x_a") * bob.value_of("bell_x_b");
    int obs = bell_index_from_parities(z_parity, x_parity);
    int obs_x = (obs >> 1) & 1, obs_z = obs & 1;

    int tog_x = 0, tog_z = 0;
    switch (aa->axis) {
        case PauliAxis::X: tog_x = mod2(count); break;
        case PauliAxis::Y: tog_x = mod2(count); tog_z = mod2(count); break;
        case PauliAxis::Z: tog_z = mod2(count); break;
    }
    int true_x = obs_x ^ tog_x;
    int true_z = obs_z ^ tog_z;

    int quad = ((a_low ? 1 : 0) << 1) | (b_low ? 1 : 0);
    return 4 * quad + ((true_x << 1) | true_z) + 1;
}

} // namespace

std::optional<int> infer_outcome(const EigenbasisSpec& spec, ProtocolKind kind,
                                 const OutcomeRecord& alice, const OutcomeRecord& bob) {
    switch (kind) {
        case ProtocolKind::TwistedProduct:
            return infer_product(kPi / 2.0, alice, bob);
        case ProtocolKind::GeneralProduct:
            return infer_product(spec.alpha, alice, bob);
        case ProtocolKind::NonmaxEqual:
            return infer_nonmax_product(spec, false, alice, bob);
        case ProtocolKind::NonmaxGeneral:
            return infer_nonmax_product(spec, true, alice, bob);
        case ProtocolKind::NonmaxBell:
            return infer_nonmax_bell(spec, alice, bob);
        case ProtocolKind::Twist4x4:
            return infer_4x4(spec, alice, bob);
    }
    throw StructuralError("unknown protocol kind");
}

} // namespace nlm
