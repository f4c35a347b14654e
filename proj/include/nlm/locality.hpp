// locality.hpp
// Party-disciplined execution context: outcome records, the causality
// firewall on record reads, gate-ownership validation, and the audit trail
// used by the no-signaling checks.
//
// The firewall has two modes. Enforce throws LocalityError on the spot;
// Audit lets a deliberately broken protocol run to completion while logging
// the violation, so the negative-control checks can observe the damage.

#pragma once

#include <string>
#include <vector>

#include "nlm/errors.hpp"
#include "nlm/qubit.hpp"
#include "nlm/state.hpp"

namespace nlm {

struct RecordEntry {
    std::string label;
    int value; // +1 or -1

    bool operator==(const RecordEntry&) const = default;
};

// Per-party ordered log; the only classical data a party may condition on.
struct OutcomeRecord {
    Party party = Party::Alice;
    std::vector<RecordEntry> entries;

    void append(std::string label, int value);
    bool has(const std::string& label) const;
    int value_of(const std::string& label) const; // StructuralError if absent
    // Values of all entries whose label starts with `prefix`, in order.
    std::vector<int> values_with_prefix(const std::string& prefix) const;

    bool operator==(const OutcomeRecord&) const = default;
};

enum class AuditKind { Gate, Measurement, RecordRead, CrossPartyGate, CrossPartyRead };

struct AuditEntry {
    AuditKind kind;
    Party actor;
    std::string detail;
};

enum class FirewallMode { Enforce, Audit };

class LocalityContext {
  public:
    explicit LocalityContext(FirewallMode mode = FirewallMode::Enforce);

    const OutcomeRecord& record(Party p) const;
    OutcomeRecord& record(Party p);

    // Record a measurement outcome into the acting party's record.
    void log_outcome(Party actor, std::string label, int value);

    // Conditional read: `reader` asks for `label` in `owner`'s record.
    // Cross-party reads violate the firewall.
    int read(Party reader, Party owner, const std::string& label);
    std::vector<int> read_prefix(Party reader, Party owner, const std::string& prefix);

    // Validate and log a gate applied by `actor` on the given slots.
    void log_gate(Party actor, const std::string& name, const std::vector<const RegisterSlot*>& slots);

    void count_ebit() { ++ebits_prepared_; }
    int ebits_prepared() const { return ebits_prepared_; }

    const std::vector<AuditEntry>& audit() const { return audit_; }
    int violation_count() const;

    // Gate names in application order, per party; the fixed-schedule checks
    // compare these across branches.
    const std::vector<std::string>& gate_log(Party p) const;

    FirewallMode mode() const { return mode_; }

  private:
    FirewallMode mode_;
    OutcomeRecord alice_{Party::Alice, {}};
    OutcomeRecord bob_{Party::Bob, {}};
    std::vector<AuditEntry> audit_;
    std::vector<std::string> alice_gates_;
    std::vector<std::string> bob_gates_;
    int ebits_prepared_ = 0;
};

// One branch of an exhaustive protocol exploration. Value type: branching
// copies everything, so branches share no mutable state.
struct Branch {
    double probability = 1.0;
    StateVector state;
    LocalityContext ctx;
};

// Apply a gate owned by `actor`; all targets must belong to that party.
Branch apply_party_gate(Branch b, Party actor, const Gate& g);

// Measure with a record entry; expands into the surviving outcome branches.
// Ancilla measurements remove the qubit (index compaction); system
// measurements keep it.
std::vector<Branch> measure_record(Branch b, Party actor, PauliAxis axis, int qubit_id,
                                   const std::string& label, bool remove_qubit);

// Drop an untouched-by-owner, product-pure qubit without a record entry.
Branch discard_pure(Branch b, int qubit_id);

// Append a fresh shared ebit in (|00>+|11>)/sqrt(2); bumps the ebit counter.
Branch prepare_ebit(Branch b, int& a_id_out, int& b_id_out, const std::string& tag);

} // namespace nlm
