#pragma once

#include <stdexcept>
#include <string>

namespace gl3lab {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NonTempered : Error { using Error::Error; };
struct HypothesisViolated : Error { using Error::Error; };
struct DegenerateRange : Error { using Error::Error; };
struct PoleAtNonpositiveInteger : Error { using Error::Error; };
struct NonPositiveArgument : Error { using Error::Error; };
struct NonPositiveModulus : Error { using Error::Error; };
struct PrimeOutOfRange : Error { using Error::Error; };
struct CoverageError : Error { using Error::Error; };
struct NonCoprime : Error { using Error::Error; };
struct ZeroIndex : Error { using Error::Error; };
struct EmptyFamily : Error { using Error::Error; };
struct DuplicatePrime : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };
struct UsageError : Error { using Error::Error; };

// Carries the best value reached before the refinement budget ran out.
struct ConvergenceFailure : Error {
    ConvergenceFailure(const std::string& what, double best, double estimate)
        : Error(what), best_value(best), error_estimate(estimate) {}
    double best_value;
    double error_estimate;
};

struct ParseError : Error {
    ParseError(const std::string& what, int line_no)
        : Error("line " + std::to_string(line_no) + ": " + what), line(line_no) {}
    int line;
};

}  // namespace gl3lab
