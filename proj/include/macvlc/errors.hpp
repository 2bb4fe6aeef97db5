#pragma once

#include <stdexcept>
#include <string>

namespace macvlc {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A transition row whose sum deviates from 1 by 1e-9 or more.
struct NonStochastic : Error {
    int row;
    double sum;
    NonStochastic(int row_, double sum_)
        : Error("transition row " + std::to_string(row_) + " sums to " + std::to_string(sum_)),
          row(row_), sum(sum_) {}
};

struct NegativeEntry : Error {
    int index;
    explicit NegativeEntry(int index_)
        : Error("negative probability at flat index " + std::to_string(index_)), index(index_) {}
};

struct UnknownName : Error {
    explicit UnknownName(const std::string& name) : Error("unknown builtin channel: " + name) {}
};

struct SymbolOutOfRange : Error {
    using Error::Error;
};

struct NoConvergence : Error {
    using Error::Error;
};

// Requested a Chernoff root for an increment whose mean is not negative.
struct NonNegativeDrift : Error {
    double value;
    explicit NonNegativeDrift(double v)
        : Error("walk drift is " + std::to_string(v) + " (expected < 0)"), value(v) {}
};

struct DegenerateQuery : Error {
    using Error::Error;
};

struct NotPentagonShaped : Error {
    using Error::Error;
};

struct MessageOutOfRange : Error {
    using Error::Error;
};

struct NonPositiveRate : Error {
    using Error::Error;
};

struct InvalidScheme : Error {
    using Error::Error;
};

// Received an output symbol that has probability zero under the model
// (channel/codebook mismatch); distinct from a zero numerator, which just
// eliminates one hypothesis.
struct DegenerateOutput : Error {
    using Error::Error;
};

} // namespace macvlc
