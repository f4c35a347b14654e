// verify.hpp
// Independent oracles and property checkers. Nothing here reuses protocol
// internals beyond eigenbasis construction; expected values come from direct
// projector arithmetic or exhaustive enumeration.

#pragma once

#include <array>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "nlm/protocol.hpp"

namespace nlm::verify {

struct OracleReport {
    std::string quantity;
    double expected = 0.0;
    double observed = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

OracleReport report(std::string quantity, double expected, double observed, double tolerance);
bool all_pass(const std::vector<OracleReport>& reports);

// p_k = |<Psi^k|psi>|^2 by direct inner products.
std::vector<double> born_oracle(const EigenbasisSpec& spec, const StateVector& input);

// Haar-ish random state: normalized complex Gaussian amplitudes.
StateVector random_state(const Register& reg, std::mt19937_64& rng);

using RunFn = std::function<ProtocolRun(const StateVector&)>;
using NamedInput = std::pair<std::string, StateVector>;

// Eigenstates plus a few crafted locally-indistinguishable pairs.
std::vector<NamedInput> standard_audit_inputs(const EigenbasisSpec& spec);

// Register positions of the system qubits the protocol steers remotely;
// their branch-averaged reduced post-states must be maximally mixed.
std::vector<int> remote_operated_positions(ProtocolKind kind);

// (i) branch-averaged reduced post-state of every remotely operated qubit
// equals I/2; (ii) per-party record marginals agree across inputs whose
// reduced state on that party's side is identical.
std::vector<OracleReport> reduced_state_audit(const RunFn& run,
                                              const std::vector<NamedInput>& inputs,
                                              const std::vector<int>& remote_positions,
                                              double tol = 1e-10);
std::vector<OracleReport> record_marginal_audit(const RunFn& run,
                                                const std::vector<NamedInput>& inputs,
                                                double tol = 1e-10);
std::vector<OracleReport> no_signaling_audit(ProtocolKind kind, const EigenbasisSpec& spec);

// Scans a run's audit trails for cross-party gates or record reads.
OracleReport locality_audit(const ProtocolRun& run);

// Per-party record distribution over full record strings.
std::map<std::string, double> record_marginal(const ProtocolRun& run, Party p);
double total_variation(const std::map<std::string, double>& p,
                       const std::map<std::string, double>& q);

// Protocol-conditioned outcome distribution vs the projector oracle,
// reweighted by the per-eigenstate success probabilities (enumerated
// separately); one summary report per run set.
std::vector<OracleReport> born_cross_check(ProtocolKind kind, const EigenbasisSpec& spec,
                                           int num_inputs, unsigned seed, double tol = 1e-10);

// Exact success probabilities of the general-product correction loop on a
// twisted eigenstate input, against both closed forms in circulation.
struct SweepRow {
    double alpha = 0.0;
    int n = 0;
    double enumerated = 0.0;     // exact branch-tree value
    double quoted_form = 0.0;    // 1 - 1/2^(n-1)
    double per_step_form = 0.0;  // 1 - 1/2^n
    int closing_stage = 0;       // smallest m with 2^(m-1) alpha on a quarter turn; 0 if none
};
std::vector<SweepRow> success_sweep(const std::vector<double>& alphas, const std::vector<int>& ns);
int closing_stage(double alpha, int max_stage = 24);

// Outcome-map table derived by pure enumeration: branches are grouped by
// record signature (every entry except the final sigma_z readings of the
// system qubits); each signature must induce a bijection from eigenstates to
// product outcomes. Blocks display the canonical all-clean signature.
struct MapBlock {
    int key_w = +1; // sigma_z_a reading (row key)
    int key_v = +1; // sigma_x_b reading (column key)
    std::array<std::pair<int, int>, 4> outcomes{}; // eigenstate k -> (a_bit, b_bit)
};
struct InferenceTable {
    Family family = Family::TwistedProduct;
    std::vector<MapBlock> blocks; // order: (+,+), (+,-), (-,+), (-,-)
};
InferenceTable derive_map_table(const EigenbasisSpec& spec);

// Negative control: a deliberately cross-conditioned variant of the
// fixed-twist protocol (Bob unwinds his qubit using Alice's record). It
// still sorts eigenstates correctly, but it must fail both the locality
// audit and the no-signaling audits.
ProtocolRun cross_conditioned_control_run(const StateVector& input);
std::vector<OracleReport> negative_control_reports();

} // namespace nlm::verify
