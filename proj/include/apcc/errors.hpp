#pragma once

#include <stdexcept>
#include <string>

namespace apcc {

/// Base class for all apcc error conditions.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A caller violated an argument contract (lengths, shapes, ranges, duplicates).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Interpolation nodes closer than the distinctness tolerance.
class DegenerateNodes : public Error {
public:
    using Error::Error;
};

/// Set sizes do not sum to the declared total.
class PartitionSumError : public Error {
public:
    using Error::Error;
};

/// A recovery threshold exceeds the worker count.
class InfeasibleThreshold : public Error {
public:
    using Error::Error;
};

/// Accurate decoding was attempted with fewer results than the threshold.
class InsufficientResults : public Error {
public:
    InsufficientResults(const std::string& what, int deficit)
        : Error(what), deficit(deficit) {}

    /// How many more results would have been needed.
    int deficit;
};

/// A single set size makes its delay constraint unsatisfiable.
class InfeasibleSet : public Error {
public:
    using Error::Error;
};

/// The partitioning problem as a whole has no feasible solution.
class InfeasibleModel : public Error {
public:
    using Error::Error;
};

/// A guarded enumeration would exceed its complexity budget.
class TooLarge : public Error {
public:
    using Error::Error;
};

/// A numerical routine failed to converge or bracket a root.
class NumericError : public Error {
public:
    using Error::Error;
};

}  // namespace apcc
