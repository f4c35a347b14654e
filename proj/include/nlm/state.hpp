// state.hpp
// Exact dense statevector over an ordered register of party-tagged qubits.
//
// Conventions (all tables and protocols depend on these):
//   * Register position defines bit significance: the FIRST qubit is the
//     most significant bit of the amplitude index.
//   * States are values. Every public operation returns a new state; nothing
//     here is shared mutable, so states can be handed across threads freely.
//   * Gates advertise exp(+i*theta*sigma) rotations; |0> is spin-up along z.

#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "nlm/density.hpp"
#include "nlm/errors.hpp"
#include "nlm/gates.hpp"
#include "nlm/qubit.hpp"

namespace nlm {

// Hard cap on register width; the largest protocol here stays well below it.
inline constexpr int kMaxQubits = 14;

// Branch probabilities under this threshold are dropped as numeric noise.
inline constexpr double kBranchPruneThreshold = 1e-14;

struct RegisterSlot {
    int id; // stable serial, never reused
    Party party;
    Role role;
    std::string name;
    int partner_id = -1; // opposite-party half for EbitHalf slots
};

class Register {
  public:
    Register() = default;

    int append(Party party, Role role, std::string name, int partner_id = -1);
    void set_partner(int id, int partner_id);
    void remove(int id);

    int size() const { return static_cast<int>(slots_.size()); }
    bool contains(int id) const;
    int position_of(int id) const; // throws StructuralError if absent
    const RegisterSlot& slot(int id) const;
    const RegisterSlot& at_position(int pos) const { return slots_[pos]; }
    const std::vector<RegisterSlot>& slots() const { return slots_; }

    QubitRef ref(int id) const;

    bool operator==(const Register& o) const;

  private:
    std::vector<RegisterSlot> slots_;
    int next_id_ = 0;
};

struct MeasurementBranch;

class StateVector {
  public:
    StateVector() = default;
    StateVector(Register reg, std::vector<Complex> amps);

    // Computational-basis state; label[p] is the bit of the qubit at
    // position p ('0' or '1').
    static StateVector computational(Register reg, const std::string& label);

    const Register& reg() const { return reg_; }
    int num_qubits() const { return reg_.size(); }
    std::size_t dim() const { return amps_.size(); }
    const std::vector<Complex>& amplitudes() const { return amps_; }
    const Complex& amplitude(std::size_t idx) const { return amps_[idx]; }

    double squared_norm() const;

    // (gate (x) identity on the rest) |psi>. Validates unitarity and targets.
    StateVector apply(const Gate& g) const;

    // Both projective branches of a Pauli measurement on one qubit, pruned
    // below kBranchPruneThreshold, each renormalized. Keeps the qubit.
    std::vector<MeasurementBranch> measure(PauliAxis axis, int qubit_id) const;

    // Collapse onto the +/- eigenstate of sigma_axis on `qubit_id` and drop
    // the qubit from the register. Returns nullopt when the branch has
    // negligible probability.
    std::optional<std::pair<double, StateVector>>
    collapse_remove(PauliAxis axis, int qubit_id, int outcome) const;

    // Drop a qubit that is in a pure product state with the rest of
    // the register (e.g. the surviving half of a measured-out ebit).
    StateVector remove_product_qubit(int qubit_id) const;

    // Two fresh ebit halves appended in (|00>+|11>)/sqrt(2).
    StateVector append_ebit(int& a_id_out, int& b_id_out, const std::string& tag) const;

    DensityMatrix reduced(const std::vector<int>& keep_ids) const;

    Complex inner(const StateVector& other) const; // <this|other>

    // |<this|other>| — the phase-insensitive comparison used by default.
    double overlap(const StateVector& other) const;

  private:
    void check_norm() const;

    Register reg_;
    std::vector<Complex> amps_;
};

struct MeasurementBranch {
    int outcome; // +1 or -1
    double probability;
    StateVector post;
};

// Free-function forms matching the library surface.
StateVector make_state(const Register& reg, const std::string& label);
StateVector apply_gate(const StateVector& s, const Gate& g);
std::vector<MeasurementBranch> measure_branches(const StateVector& s, PauliAxis axis, int qubit_id);
DensityMatrix partial_trace(const StateVector& s, const std::vector<int>& keep_ids);
Complex inner_product(const StateVector& x, const StateVector& y);

// Standard two-party registers.
Register two_party_register();           // [A, B], one system qubit each
Register four_level_pair_register();     // [A1, A2, B1, B2], subspace+intra qubit per party

} // namespace nlm
