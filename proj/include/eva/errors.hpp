#pragma once

#include <stdexcept>
#include <string>

namespace eva {

/// Operand dimensions do not line up.
class ShapeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A pivot fell below the singularity threshold during elimination.
class SingularMatrixError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operation undefined for this input (all-zero matrix, dimension too small).
class DegenerateInputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Wire-level failure: bad frame, closed socket, malformed envelope.
class TransportError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A peer aborted the session; raised from blocking receives.
class ProtocolAborted : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Metric has no defined value for the given inputs.
class UndefinedMetricError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace eva
