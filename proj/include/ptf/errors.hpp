#pragma once

#include <stdexcept>
#include <string>

namespace ptf {

// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct StringNotInTree : Error {
    explicit StringNotInTree(const std::string& s) : Error("string not in tree: " + s) {}
};

struct EmptyInput : Error {
    EmptyInput() : Error("empty input") {}
};

struct DepthExceeded : Error {
    explicit DepthExceeded(const std::string& ctx) : Error("exactness depth exceeded: " + ctx) {}
};

struct ChainNotDecreasing : Error {
    explicit ChainNotDecreasing(const std::string& ctx) : Error("chain not <=c-decreasing: " + ctx) {}
};

struct TaskUnmet : Error {
    std::string task;
    explicit TaskUnmet(const std::string& t) : Error("splitting task unmet: " + t), task(t) {}
};

struct PreconditionViolated : Error {
    explicit PreconditionViolated(const std::string& ctx) : Error("precondition violated: " + ctx) {}
};

struct RegularityViolated : Error {
    explicit RegularityViolated(const std::string& ctx) : Error("regularity violated: " + ctx) {}
};

struct SearchBudgetExceeded : Error {
    explicit SearchBudgetExceeded(const std::string& ctx) : Error("search budget exceeded: " + ctx) {}
};

struct BudgetRejected : Error {
    explicit BudgetRejected(const std::string& ctx) : Error("task budget rejected: " + ctx) {}
};

struct TaskStuck : Error {
    std::string task;
    explicit TaskStuck(const std::string& t) : Error("dense task stuck: " + t), task(t) {}
};

struct DomainNotSuperset : Error {
    DomainNotSuperset() : Error("target domain does not contain |pi|") {}
};

struct NotPreDense : Error {
    std::string id;
    explicit NotPreDense(const std::string& i) : Error("set not pre-dense: " + i), id(i) {}
};

struct NoSplitLevel : Error {
    NoSplitLevel() : Error("tree has a single branch up to the horizon") {}
};

struct NotDecided : Error {
    explicit NotDecided(const std::string& ctx) : Error("filter does not decide: " + ctx) {}
};

struct AmbiguousValue : Error {
    explicit AmbiguousValue(const std::string& ctx) : Error("internal consistency: ambiguous name value: " + ctx) {}
};

struct ParseError : Error {
    explicit ParseError(const std::string& ctx) : Error("parse error: " + ctx) {}
};

}  // namespace ptf
