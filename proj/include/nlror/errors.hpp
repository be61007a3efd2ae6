#pragma once

#include <stdexcept>
#include <string>

namespace nlror {

// Bad shapes, out-of-domain parameters, unknown labels.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A numerical failure inside the library (e.g. activation overflow).
class InternalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Extrapolation geometry without a usable direction.
class DegenerateGeometry : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Every NLR_OR candidate was dropped and the raw value is excluded.
class NoPrediction : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// MAD of the reference target is zero.
class DegenerateReference : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Correlation of a constant vector.
class UndefinedCorrelation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IngestionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace nlror
