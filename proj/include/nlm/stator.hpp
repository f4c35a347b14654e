// stator.hpp
// Entanglement-mediated remote operations.
//
// A stator is built by one party (the "builder") from one half of a shared
// ebit and the builder's own system qubit: the builder applies a controlled
// Pauli between half and system, measures sigma_x on the half, and keeps the
// sign. The surviving half, owned by the opposite party, then satisfies
//
//     sigma_x(control) S = sign * sigma_axis(target) S
//
// on the post-measurement state, so a rotation exp(i t sigma_x) on the
// control induces exp(i t sign sigma_axis) on the remote target, up to a
// recorded Pauli factor fixed by the later sigma_z measurement of the
// control. Corrections are never physically undone here; they are carried in
// the returned descriptions and folded into inference.

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "nlm/locality.hpp"

namespace nlm {

struct Stator {
    int sign = +1;           // recorded sigma_x outcome of the measured half
    int control_id = -1;     // surviving half (opposite party)
    int target_id = -1;      // builder's system qubit the axis acts on
    PauliAxis axis = PauliAxis::Y;
    Party builder = Party::Bob;
};

// Net effect on the stator's target qubit for one branch of a remote
// operation: (sigma_axis)^pauli_power * exp(i * angle * sigma_axis).
struct InducedOp {
    PauliAxis axis = PauliAxis::Y;
    int pauli_power = 0; // 0 or 1
    double angle = 0.0;
    Eigen::Matrix2cd matrix() const;
};

// max |sigma_x(control) psi - sign * sigma_axis(target) psi| over amplitudes;
// zero (to 1e-12) for every valid stator.
double stator_eigen_defect(const StateVector& state, const Stator& st);

// Build a stator from the ebit half `half_id`: the builder applies the
// controlled Pauli between that half and their system qubit `system_id`,
// then measures sigma_x on the half. Returns both measurement branches.
std::vector<std::pair<Branch, Stator>>
build_stator(Branch b, int half_id, int system_id, PauliAxis axis,
             const std::string& half_label);

struct RemoteOpBranch {
    Branch branch;
    InducedOp induced;
};

// The control-side party rotates the stator control by exp(i*angle*sigma_x)
// and measures sigma_z on it (consuming it). Induced per branch:
// w = +1: exp(i*angle*sign*sigma_axis); w = -1: an extra sigma_axis factor.
std::vector<RemoteOpBranch> remote_rotation(Branch b, const Stator& st, double angle,
                                            const std::string& control_label);

// Conditional form: the predicate reads only the acting party's own record
// through the audited firewall; when false the rotation is skipped and the
// control is measured directly.
struct RecordPredicate {
    Party reader;
    std::vector<std::string> labels;
    std::function<bool(const std::vector<int>&)> test;
};

std::vector<RemoteOpBranch> conditional_remote_rotation(Branch b, const Stator& st,
                                                        const RecordPredicate& pred, double angle,
                                                        const std::string& control_label);

// Remote CNOT (stator axis must be X): the control-side party applies a CNOT
// from their system qubit onto the stator control and measures sigma_z on
// it. For (w, sign) = (+1, +1) the net effect is exactly CNOT(system ->
// target); other branches carry the recorded corrections.
struct RemoteCnotBranch {
    Branch branch;
    int w;    // sigma_z outcome on the consumed control
    int sign; // stator sign, repeated for convenience
};

std::vector<RemoteCnotBranch> remote_cnot(Branch b, const Stator& st, int control_system_id,
                                          const std::string& control_label);

// Instantaneous remote measurement of the Bell operator on (qa, qb), one
// system qubit per party, via two crossed ebits: a z-parity write
// (CNOT system->half, measure halves in z) and an x-parity write
// (CNOT half->system, measure halves in x). The Bell index is the XOR of
// the parties' parity records; the post-state is the identified Bell state.
Branch remote_bell_parity_ops(Branch b, int qa_id, int qb_id,
                              int& za_id, int& zb_id, int& xa_id, int& xb_id);

std::vector<Branch> remote_bell_measurement(Branch b, int qa_id, int qb_id,
                                            const std::string& label_prefix);

// Bell index from the four parity records: 0 Phi+, 1 Phi-, 2 Psi+, 3 Psi-.
// Encoded as (z_bit, x_bit): x_bit set for Psi states, z_bit for minus signs.
int bell_index_from_parities(int z_parity, int x_parity);
const char* bell_name(int index);

} // namespace nlm
