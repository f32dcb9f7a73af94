#pragma once

#include <stdexcept>
#include <string>

namespace cliffcat {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct InputError : Error {
    explicit InputError(const std::string& msg) : Error("input: " + msg) {}
};

struct TooLargeError : Error {
    explicit TooLargeError(const std::string& msg) : Error("too large: " + msg) {}
};

struct NotNormalError : Error {
    explicit NotNormalError(const std::string& msg) : Error("not normal: " + msg) {}
};

struct DegreeZeroError : Error {
    explicit DegreeZeroError(const std::string& msg) : Error("degree zero: " + msg) {}
};

struct CategoryMismatchError : Error {
    explicit CategoryMismatchError(const std::string& msg) : Error("category mismatch: " + msg) {}
};

struct InvariantBrokenError : Error {
    explicit InvariantBrokenError(const std::string& msg) : Error("invariant broken: " + msg) {}
};

struct LiftDependenceError : Error {
    explicit LiftDependenceError(const std::string& msg) : Error("lift dependence: " + msg) {}
};

// Raised when a theorem-level consistency assertion fails; the message names
// the violated clause.
struct ConsistencyError : Error {
    explicit ConsistencyError(const std::string& clause) : Error("consistency: " + clause) {}
};

struct NotCocycleError : Error {
    explicit NotCocycleError(const std::string& msg) : Error("not a cocycle: " + msg) {}
};

struct ObstructedError : Error {
    explicit ObstructedError(const std::string& msg) : Error("obstructed: " + msg) {}
};

struct ContextMismatchError : Error {
    explicit ContextMismatchError(const std::string& msg) : Error("context mismatch: " + msg) {}
};

struct GroupTheoreticalCaseError : Error {
    explicit GroupTheoreticalCaseError(const std::string& msg)
        : Error("group-theoretical case: " + msg) {}
};

}  // namespace cliffcat
