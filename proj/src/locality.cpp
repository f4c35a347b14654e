#include "nlm/locality.hpp"

#include <algorithm>

namespace nlm {

void OutcomeRecord::append(std::string label, int value) {
    if (value != +1 && value != -1) throw StructuralError("record values must be +1 or -1");
    entries.push_back({std::move(label), value});
}

bool OutcomeRecord::has(const std::string& label) const {
    return std::any_of(entries.begin(), entries.end(),
                       [&](const RecordEntry& e) { return e.label == label; });
}

int OutcomeRecord::value_of(const std::string& label) const {
    for (const RecordEntry& e : entries) {
        if (e.label == label) return e.value;
    }
    throw StructuralError("record has no entry '" + label + "'");
}

std::vector<int> OutcomeRecord::values_with_prefix(const std::string& prefix) const {
    std::vector<int> out;
    for (const RecordEntry& e : entries) {
        if (e.label.rfind(prefix, 0) == 0) out.push_back(e.value);
    }
    return out;
}

LocalityContext::LocalityContext(FirewallMode mode) : mode_(mode) {}

const OutcomeRecord& LocalityContext::record(Party p) const {
    return p == Party::Alice ? alice_ : bob_;
}

OutcomeRecord& LocalityContext::record(Party p) {
    return p == Party::Alice ? alice_ : bob_;
}

void LocalityContext::log_outcome(Party actor, std::string label, int value) {
    audit_.push_back({AuditKind::Measurement, actor, label});
    record(actor).append(std::move(label), value);
}

int LocalityContext::read(Party reader, Party owner, const std::string& label) {
    if (reader != owner) {
        audit_.push_back({AuditKind::CrossPartyRead, reader,
                          std::string(to_string(reader)) + " read " + to_string(owner) + ":" + label});
        if (mode_ == FirewallMode::Enforce) {
            throw LocalityError("party " + std::string(to_string(reader)) +
                                " attempted to read " + to_string(owner) + "'s record entry '" +
                                label + "'");
        }
    } else {
        audit_.push_back({AuditKind::RecordRead, reader, label});
    }
    return record(owner).value_of(label);
}

std::vector<int> LocalityContext::read_prefix(Party reader, Party owner, const std::string& prefix) {
    if (reader != owner) {
        audit_.push_back({AuditKind::CrossPartyRead, reader,
                          std::string(to_string(reader)) + " read " + to_string(owner) + ":" + prefix + "*"});
        if (mode_ == FirewallMode::Enforce) {
            throw LocalityError("party " + std::string(to_string(reader)) +
                                " attempted to read " + to_string(owner) + "'s record prefix '" +
                                prefix + "'");
        }
    } else {
        audit_.push_back({AuditKind::RecordRead, reader, prefix + "*"});
    }
    return record(owner).values_with_prefix(prefix);
}

void LocalityContext::log_gate(Party actor, const std::string& name,
                               const std::vector<const RegisterSlot*>& slots) {
    bool cross = std::any_of(slots.begin(), slots.end(),
                             [&](const RegisterSlot* s) { return s->party != actor; });
    std::string detail = name;
    for (const RegisterSlot* s : slots) detail += " " + s->name;
    if (cross) {
        audit_.push_back({AuditKind::CrossPartyGate, actor, detail});
        if (mode_ == FirewallMode::Enforce) {
            throw LocalityError("party " + std::string(to_string(actor)) +
                                " applied '" + name + "' across party boundaries");
        }
    } else {
        audit_.push_back({AuditKind::Gate, actor, detail});
    }
    (actor == Party::Alice ? alice_gates_ : bob_gates_).push_back(detail);
}

int LocalityContext::violation_count() const {
    return static_cast<int>(std::count_if(audit_.begin(), audit_.end(), [](const AuditEntry& e) {
        return e.kind == AuditKind::CrossPartyGate || e.kind == AuditKind::CrossPartyRead;
    }));
}

const std::vector<std::string>& LocalityContext::gate_log(Party p) const {
    return p == Party::Alice ? alice_gates_ : bob_gates_;
}

Branch apply_party_gate(Branch b, Party actor, const Gate& g) {
    std::vector<const RegisterSlot*> slots;
    slots.reserve(g.targets.size());
    for (int id : g.targets) slots.push_back(&b.state.reg().slot(id));
    b.ctx.log_gate(actor, g.name, slots);
    b.state = b.state.apply(g);
    return b;
}

std::vector<Branch> measure_record(Branch b, Party actor, PauliAxis axis, int qubit_id,
                                   const std::string& label, bool remove_qubit) {
    const RegisterSlot& slot = b.state.reg().slot(qubit_id);
    if (slot.party != actor) {
        throw LocalityError("party " + std::string(to_string(actor)) +
                            " attempted to measure qubit '" + slot.name + "'");
    }
    std::vector<Branch> out;
    if (remove_qubit) {
        for (int outcome : {+1, -1}) {
            auto collapsed = b.state.collapse_remove(axis, qubit_id, outcome);
            if (!collapsed) continue;
            Branch child = b;
            child.probability *= collapsed->first;
            child.state = std::move(collapsed->second);
            child.ctx.log_outcome(actor, label, outcome);
            out.push_back(std::move(child));
        }
    } else {
        for (MeasurementBranch& mb : b.state.measure(axis, qubit_id)) {
            Branch child = b;
            child.probability *= mb.probability;
            child.state = std::move(mb.post);
            child.ctx.log_outcome(actor, label, mb.outcome);
            out.push_back(std::move(child));
        }
    }
    return out;
}

Branch discard_pure(Branch b, int qubit_id) {
    b.state = b.state.remove_product_qubit(qubit_id);
    return b;
}

Branch prepare_ebit(Branch b, int& a_id_out, int& b_id_out, const std::string& tag) {
    b.state = b.state.append_ebit(a_id_out, b_id_out, tag);
    b.ctx.count_ebit();
    return b;
}

} // namespace nlm
