#pragma once

#include <stdexcept>
#include <string>

namespace permtest {

// Thrown when two elements of different kind or dimension are combined.
class InvalidComposition : public std::invalid_argument {
public:
    explicit InvalidComposition(const std::string& what) : std::invalid_argument(what) {}
};

// Thrown when an element and a data vector disagree on dimension, or a
// statistic is incompatible with the data it is given.
class DimensionError : public std::invalid_argument {
public:
    explicit DimensionError(const std::string& what) : std::invalid_argument(what) {}
};

// Enumeration would exceed the configured cap; callers must switch to sampling.
class GroupTooLarge : public std::runtime_error {
public:
    explicit GroupTooLarge(const std::string& what) : std::runtime_error(what) {}
};

// The equivalence-class decomposition would exceed the configured cap.
class TooManyClasses : public std::runtime_error {
public:
    explicit TooManyClasses(const std::string& what) : std::runtime_error(what) {}
};

// A sampling plan cannot be satisfied (e.g. more distinct draws than elements).
class PlanInfeasible : public std::runtime_error {
public:
    explicit PlanInfeasible(const std::string& what) : std::runtime_error(what) {}
};

// A testing operation was handed draws that do not include the identity.
// Such plans break the level guarantee and must be enabled explicitly.
class RefusedNaivePlan : public std::runtime_error {
public:
    explicit RefusedNaivePlan(const std::string& what) : std::runtime_error(what) {}
};

// A design parameter is outside what the construction supports
// (e.g. balanced relabelings for an odd arm size).
class UnsupportedDesign : public std::invalid_argument {
public:
    explicit UnsupportedDesign(const std::string& what) : std::invalid_argument(what) {}
};

} // namespace permtest
