#pragma once

#include <stdexcept>
#include <string>

namespace trajpred {

/// Broad failure classes. The CLI maps these onto process exit codes.
enum class ErrorKind {
    parse,                 // malformed input text
    validation,            // well-formed input that violates an invariant
    degenerate,            // numerically degenerate geometry (clustered nodes, zero variance)
    insufficient_history,  // not enough past samples for the requested predictor
    alignment,             // timestamps that do not line up across series
    convergence,           // iterative solver did not reach its tolerance
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error(ErrorKind::parse, "line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& what) : Error(ErrorKind::validation, what) {}
};

class DegenerateError : public Error {
public:
    explicit DegenerateError(const std::string& what) : Error(ErrorKind::degenerate, what) {}
};

class InsufficientHistoryError : public Error {
public:
    InsufficientHistoryError(std::size_t needed, std::size_t available)
        : Error(ErrorKind::insufficient_history,
                "insufficient history: need " + std::to_string(needed) + " points, have " +
                    std::to_string(available)),
          needed_(needed),
          available_(available) {}

    std::size_t needed() const noexcept { return needed_; }
    std::size_t available() const noexcept { return available_; }

private:
    std::size_t needed_;
    std::size_t available_;
};

class AlignmentError : public Error {
public:
    explicit AlignmentError(const std::string& what) : Error(ErrorKind::alignment, what) {}
};

class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double residual)
        : Error(ErrorKind::convergence, what), residual_(residual) {}

    /// Maximal KKT violation at the point the solver gave up.
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

}  // namespace trajpred
