// errors.hpp
// Error taxonomy shared by the whole library.

#pragma once

#include <stdexcept>
#include <string>

namespace nlm {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Misuse of the API shape: wrong register, bad label length, unknown qubit.
struct StructuralError : Error {
    using Error::Error;
};

// Numeric or domain validation failed: non-unitary matrix, angle out of range.
struct ValidationError : Error {
    using Error::Error;
};

// A party touched data or qubits it does not own.
struct LocalityError : Error {
    using Error::Error;
};

// Operations issued out of sequence: stale stator, wrong stator axis.
struct ProtocolError : Error {
    using Error::Error;
};

// Register capacity or ebit budget exceeded.
struct ResourceError : Error {
    using Error::Error;
};

} // namespace nlm
