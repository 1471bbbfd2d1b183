#pragma once

#include <stdexcept>
#include <string>

namespace nlphase {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Precondition violation on a caller-supplied value.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// The operating point has (numerically) zero slope, so error propagation
/// gives no finite sensitivity there.
class InsensitivePoint : public Error {
public:
    using Error::Error;
};

/// A bound or estimator that carries no information (e.g. the QCR bound at N = 0).
class Uninformative : public Error {
public:
    using Error::Error;
};

/// The truncated Fock space is too small for the requested state or observable.
class TruncationError : public Error {
public:
    TruncationError(const std::string& what, double neglected)
        : Error(what), neglected_(neglected) {}

    double neglected() const noexcept { return neglected_; }

private:
    double neglected_;
};

}  // namespace nlphase
