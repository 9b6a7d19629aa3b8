#pragma once

#include <stdexcept>
#include <string>

namespace junta {

/// Malformed arguments: arity mismatch, bad parameters, unreadable files.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The request is well-formed but outside what the backing supports
/// (evaluator-backed input to an exact routine, enumeration over budget).
class UnsupportedError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A probabilistic stage gave up, e.g. the consistent-input sampler ran out
/// of its iteration budget. Never a wrong answer, only a missing one.
class StageFailure : public std::runtime_error {
public:
    StageFailure(std::string stage, const std::string& what)
        : std::runtime_error(stage + ": " + what), stage_(std::move(stage)) {}

    const std::string& stage() const noexcept { return stage_; }

private:
    std::string stage_;
};

}  // namespace junta
