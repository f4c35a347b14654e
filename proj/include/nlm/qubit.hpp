// qubit.hpp
// Qubit identity: owner party, role, and a stable id.

#pragma once

#include <string>

namespace nlm {

enum class Party { Alice, Bob };

enum class Role { System, EbitHalf };

enum class PauliAxis { X, Y, Z };

inline Party other(Party p) {
    return p == Party::Alice ? Party::Bob : Party::Alice;
}

inline const char* to_string(Party p) {
    return p == Party::Alice ? "alice" : "bob";
}

inline const char* to_string(PauliAxis a) {
    switch (a) {
        case PauliAxis::X: return "x";
        case PauliAxis::Y: return "y";
        case PauliAxis::Z: return "z";
    }
    return "?";
}

// Stable handle for a qubit. `id` is a serial that is never reused within a
// register, so references held across ancilla churn stay unambiguous; the
// register's positional order (dense 0..k-1) defines bit significance.
struct QubitRef {
    int id = -1;
    Party party = Party::Alice;
    Role role = Role::System;

    bool operator==(const QubitRef&) const = default;
};

} // namespace nlm
