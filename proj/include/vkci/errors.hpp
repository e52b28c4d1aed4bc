#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace vkci {

/// Process exit codes used by the CLI; library exceptions carry the code so
/// the front end can map failures without string matching.
enum class ExitCode : int {
    ok = 0,
    io = 1,
    config = 2,
    not_short = 3,
    infeasible = 4,
    degenerate = 5,
    verify_mismatch = 6,
};

class Error : public std::runtime_error {
public:
    Error(ExitCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}
    ExitCode code() const { return code_; }

private:
    ExitCode code_;
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& what) : Error(ExitCode::config, what) {}
};

struct IoError : Error {
    explicit IoError(const std::string& what) : Error(ExitCode::io, what) {}
};

/// Initial pair fails the strict shortness hypothesis (margin <= 0).
struct NotShortError : Error {
    double margin;
    explicit NotShortError(double m)
        : Error(ExitCode::not_short,
                "input pair is not short: deficit min-eigenvalue margin = " + std::to_string(m)),
          margin(m) {}
};

/// Planner cannot satisfy the per-stage error budgets within the grid's
/// frequency cap lambda*h <= 1/4.
struct InfeasibleError : Error {
    int stage;
    double lambda_needed;
    double lambda_cap;
    InfeasibleError(int k, double need, double cap)
        : Error(ExitCode::infeasible,
                "schedule infeasible at stage " + std::to_string(k) + ": needs lambda = " +
                    std::to_string(need) + " > grid cap " + std::to_string(cap)),
          stage(k), lambda_needed(need), lambda_cap(cap) {}
};

/// A stage overran its error budget at run time.
struct ScheduleTooAggressiveError : Error {
    int stage;
    double measured;
    double budget;
    ScheduleTooAggressiveError(int k, double meas, double bud)
        : Error(ExitCode::infeasible,
                "stage " + std::to_string(k) + " overran its budget: deviation " +
                    std::to_string(meas) + " > " + std::to_string(bud)),
          stage(k), measured(meas), budget(bud) {}
};

/// Deficit left the admissibility cone |d12| <= min(d11, d22) at some node.
struct ConeViolationError : Error {
    std::size_t node;
    double margin;
    ConeViolationError(std::size_t n, double m)
        : Error(ExitCode::infeasible,
                "cone admissibility violated at node " + std::to_string(n) +
                    " (margin " + std::to_string(m) + ")"),
          node(n), margin(m) {}
};

/// Jacobian with non-positive determinant where an orientation-preserving
/// map is required.
struct NonOrientationError : Error {
    explicit NonOrientationError(const std::string& where)
        : Error(ExitCode::degenerate, "non-orientation-preserving Jacobian in " + where) {}
};

/// Zero deficit: nothing to cancel / nothing to lift.
struct DegenerateDeficitError : Error {
    DegenerateDeficitError() : Error(ExitCode::degenerate, "deficit is identically zero") {}
};

struct VerifyMismatchError : Error {
    explicit VerifyMismatchError(const std::string& what) : Error(ExitCode::verify_mismatch, what) {}
};

} // namespace vkci
