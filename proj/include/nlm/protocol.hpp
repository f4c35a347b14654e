// protocol.hpp
// End-to-end measurement protocols. Each run explores the full branch tree
// exactly: every measurement splits the frontier, probabilities multiply
// along paths, and the inferred outcome of each leaf is a pure function of
// the two parties' records.

#pragma once

#include <optional>
#include <vector>

#include "nlm/eigenbasis.hpp"
#include "nlm/locality.hpp"
#include "nlm/stator.hpp"

namespace nlm {

enum class ProtocolKind {
    TwistedProduct,
    GeneralProduct,
    NonmaxEqual,
    NonmaxBell,
    NonmaxGeneral,
    Twist4x4
};

const char* to_string(ProtocolKind k);
ProtocolKind default_kind(Family f);
Family family_of(ProtocolKind k);

struct RunBranch {
    double probability = 0.0;
    LocalityContext ctx;          // records, audit trail, gate logs
    StateVector post;             // system qubits only
    std::optional<int> inferred;  // 1-based eigenstate index; nullopt = Failure

    const OutcomeRecord& alice() const { return ctx.record(Party::Alice); }
    const OutcomeRecord& bob() const { return ctx.record(Party::Bob); }
    bool failed() const { return !inferred.has_value(); }
};

struct ProtocolRun {
    EigenbasisSpec spec;
    ProtocolKind kind = ProtocolKind::TwistedProduct;
    std::vector<RunBranch> branches;
    int ebits_consumed = 0;
    double success_probability = 0.0;        // total mass of non-Failure branches
    double residual_entanglement_bits = 0.0; // entanglement left in (A,B), success-averaged

    // Total branch probability inferring index k (1-based), unconditioned.
    double index_probability(int k) const;
    double failure_probability() const;
};

// One-side twisted product basis, fixed pi/2 twist; one ebit.
ProtocolRun measure_twisted_product(const StateVector& input,
                                    FirewallMode mode = FirewallMode::Enforce);

// General twist angle; n-step correction loop, one ebit per step.
ProtocolRun measure_general_product(const StateVector& input, double alpha, int n_ebits,
                                    FirewallMode mode = FirewallMode::Enforce);

// Equal-angle entangled basis: remote CNOT, then an untwisting loop aimed at
// Alice's qubit. n_ebits total (1 + untwist budget).
ProtocolRun measure_nonmax_equal(const StateVector& input, double alpha, int n_ebits,
                                 FirewallMode mode = FirewallMode::Enforce);

// Same observable, Bell-collapsing variant: a remotely controlled rotation
// aligns the basis with the Bell states, then a remote Bell measurement.
// n_ebits total (rotation budget + 2).
ProtocolRun measure_nonmax_bell_variant(const StateVector& input, double alpha, int n_ebits,
                                        FirewallMode mode = FirewallMode::Enforce);

// Two-angle entangled basis with optional relative phases.
ProtocolRun measure_nonmax_general(const StateVector& input, double alpha, double beta,
                                   double phi1, double phi2, int n_ebits,
                                   FirewallMode mode = FirewallMode::Enforce);

// 16-state twisted basis over two 4-level systems (qubit pairs): local
// subspace projections, a conditionally engaged untwisting loop, and a
// remote Bell measurement of the intra-subspace qubits.
ProtocolRun measure_4x4_twist(const StateVector& input, const Eigen::Matrix2cd& u_b, int n_ebits,
                              FirewallMode mode = FirewallMode::Enforce);

// Convenience dispatcher over ProtocolKind.
ProtocolRun run_protocol(ProtocolKind kind, const EigenbasisSpec& spec, const StateVector& input,
                         FirewallMode mode = FirewallMode::Enforce);

// Deterministic record-combining inference; throws StructuralError on
// malformed records.
std::optional<int> infer_outcome(const EigenbasisSpec& spec, ProtocolKind kind,
                                 const OutcomeRecord& alice, const OutcomeRecord& bob);

// Deviation bookkeeping shared by inference and the table derivation: the
// residual rotation angle must sit on a quarter-turn to be foldable.
// Returns the integer number of quarter turns, or nullopt.
std::optional<long> quarter_turns(double deviation_angle, double tol = 1e-9);

} // namespace nlm
