#include "nlm/stator.hpp"

#include <cmath>

namespace nlm {

Eigen::Matrix2cd InducedOp::matrix() const {
    Eigen::Matrix2cd m = rotation_matrix(axis, angle);
    if (pauli_power % 2 != 0) m = pauli_matrix(axis) * m;
    return m;
}

double stator_eigen_defect(const StateVector& state, const Stator& st) {
    StateVector lhs = state.apply(gates::pauli(PauliAxis::X, st.control_id));
    StateVector rhs = state.apply(gates::pauli(st.axis, st.target_id));
    double defect = 0.0;
    for (std::size_t i = 0; i < lhs.dim(); ++i) {
        defect = std::max(defect,
                          std::abs(lhs.amplitude(i) - double(st.sign) * rhs.amplitude(i)));
    }
    return defect;
}

std::vector<std::pair<Branch, Stator>>
build_stator(Branch b, int half_id, int system_id, PauliAxis axis,
             const std::string& half_label) {
    const RegisterSlot& half = b.state.reg().slot(half_id);
    const RegisterSlot& sys = b.state.reg().slot(system_id);
    if (half.role != Role::EbitHalf) {
        throw ProtocolError("stator must be built from an ebit half");
    }
    Party builder = half.party;
    if (sys.party != builder) {
        throw LocalityError("stator builder does not own the target system qubit");
    }
    int partner = half.partner_id;
    if (partner < 0) {
        for (const RegisterSlot& t : b.state.reg().slots()) {
            if (t.partner_id == half.id) partner = t.id;
        }
    }
    if (partner < 0 || !b.state.reg().contains(partner)) {
        throw ProtocolError("ebit half has no surviving partner");
    }

    b = apply_party_gate(std::move(b), builder,
                         gates::controlled_pauli(axis, half_id, system_id));

    std::vector<std::pair<Branch, Stator>> out;
    for (Branch& child : measure_record(std::move(b), builder, PauliAxis::X, half_id,
                                        half_label, /*remove_qubit=*/true)) {
        int sign = child.ctx.record(builder).value_of(half_label);
        out.push_back({std::move(child), Stator{sign, partner, system_id, axis, builder}});
    }
    return out;
}

namespace {

std::vector<RemoteOpBranch> rotate_and_consume(Branch b, const Stator& st, bool do_rotate,
                                               double angle, const std::string& control_label) {
    if (!b.state.reg().contains(st.control_id)) {
        throw ProtocolError("stale stator: control half already consumed");
    }
    if (!std::isfinite(angle)) throw ValidationError("rotation angle must be finite");
    Party control_party = b.state.reg().slot(st.control_id).party;

    if (do_rotate && angle != 0.0) {
        b = apply_party_gate(std::move(b), control_party,
                             gates::rotation(PauliAxis::X, angle, st.control_id));
    }
    std::vector<RemoteOpBranch> out;
    for (Branch& child : measure_record(std::move(b), control_party, PauliAxis::Z, st.control_id,
                                        control_label, /*remove_qubit=*/true)) {
        int w = child.ctx.record(control_party).value_of(control_label);
        InducedOp op;
        op.axis = st.axis;
        op.pauli_power = (w == +1) ? 0 : 1;
        op.angle = do_rotate ? angle * double(st.sign) : 0.0;
        out.push_back({std::move(child), op});
    }
    return out;
}

} // namespace

std::vector<RemoteOpBranch> remote_rotation(Branch b, const Stator& st, double angle,
                                            const std::string& control_label) {
    return rotate_and_consume(std::move(b), st, /*do_rotate=*/true, angle, control_label);
}

std::vector<RemoteOpBranch> conditional_remote_rotation(Branch b, const Stator& st,
                                                        const RecordPredicate& pred, double angle,
                                                        const std::string& control_label) {
    std::vector<int> values;
    values.reserve(pred.labels.size());
    for (const std::string& label : pred.labels) {
        Party owner = b.ctx.record(Party::Alice).has(label) ? Party::Alice : Party::Bob;
        values.push_back(b.ctx.read(pred.reader, owner, label));
    }
    bool engage = pred.test(values);
    return rotate_and_consume(std::move(b), st, engage, angle, control_label);
}

std::vector<RemoteCnotBranch> remote_cnot(Branch b, const Stator& st, int control_system_id,
                                          const std::string& control_label) {
    if (st.axis != PauliAxis::X) {
        throw ProtocolError("remote CNOT requires a stator built along x");
    }
    if (!b.state.reg().contains(st.control_id)) {
        throw ProtocolError("stale stator: control half already consumed");
    }
    Party control_party = b.state.reg().slot(st.control_id).party;
    if (b.state.reg().slot(control_system_id).party != control_party) {
        throw LocalityError("remote CNOT control qubit not owned by the control-side party");
    }

    // exp(-i pi/4 (1 - sigma_z)(1 - sigma_x)) on (system, half) is exactly a
    // CNOT from the system qubit onto the half.
    b = apply_party_gate(std::move(b), control_party,
                         gates::cnot(control_system_id, st.control_id));

    std::vector<RemoteCnotBranch> out;
    for (Branch& child : measure_record(std::move(b), control_party, PauliAxis::Z, st.control_id,
                                        control_label, /*remove_qubit=*/true)) {
        int w = child.ctx.record(control_party).value_of(control_label);
        out.push_back({std::move(child), w, st.sign});
    }
    return out;
}

Branch remote_bell_parity_ops(Branch b, int qa_id, int qb_id,
                              int& za_id, int& zb_id, int& xa_id, int& xb_id) {
    if (b.state.reg().slot(qa_id).party != Party::Alice ||
        b.state.reg().slot(qb_id).party != Party::Bob) {
        throw LocalityError("Bell measurement expects one qubit per party");
    }
    b = prepare_ebit(std::move(b), za_id, zb_id, "_bz");
    b = prepare_ebit(std::move(b), xa_id, xb_id, "_bx");

    // z-parity write: system -> half
    b = apply_party_gate(std::move(b), Party::Alice, gates::cnot(qa_id, za_id));
    b = apply_party_gate(std::move(b), Party::Bob, gates::cnot(qb_id, zb_id));
    // x-parity write: half -> system
    b = apply_party_gate(std::move(b), Party::Alice, gates::cnot(xa_id, qa_id));
    b = apply_party_gate(std::move(b), Party::Bob, gates::cnot(xb_id, qb_id));
    return b;
}

std::vector<Branch> remote_bell_measurement(Branch b, int qa_id, int qb_id,
                                            const std::string& label_prefix) {
    int za, zb, xa, xb;
    b = remote_bell_parity_ops(std::move(b), qa_id, qb_id, za, zb, xa, xb);

    std::vector<Branch> cur{std::move(b)};
    auto step = [&cur](Party p, PauliAxis axis, int id, const std::string& label) {
        std::vector<Branch> next;
        for (Branch& br : cur) {
            for (Branch& child : measure_record(std::move(br), p, axis, id, label, true)) {
                next.push_back(std::move(child));
            }
        }
        cur = std::move(next);
    };
    step(Party::Alice, PauliAxis::Z, za, label_prefix + "z_a");
    step(Party::Bob, PauliAxis::Z, zb, label_prefix + "z_b");
    step(Party::Alice, PauliAxis::X, xa, label_prefix + "x_a");
    step(Party::Bob, PauliAxis::X, xb, label_prefix + "x_b");
    return cur;
}

int bell_index_from_parities(int z_parity, int x_parity) {
    int x_bit = (z_parity == -1) ? 1 : 0; // Psi states have odd z-parity
    int z_bit = (x_parity == -1) ? 1 : 0; // minus signs have odd x-parity
    return (x_bit << 1) | z_bit;
}

const char* bell_name(int index) {
    switch (index) {
        case 0: return "Phi+";
        case 1: return "Phi-";
        case 2: return "Psi+";
        case 3: return "Psi-";
    }
    return "?";
}

} // namespace nlm
