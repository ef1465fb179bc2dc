#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace motohashi {

/// Failure categories. The CLI maps these onto exit codes: numerical
/// inconclusiveness exits with 3, everything else with 2.
enum class ErrorKind {
    precondition,
    pole_at_one,
    near_singularity,
    no_sign_change,
    coverage,
    normalization,
    local_pole,
    singularity,
    coincidence,
    parameter_mismatch,
    boundary_too_close,
    non_convergence,
    inconclusive,
    pole_on_line,
    limit_too_large,
    parse,
    ordering,
    usage,
    io,
};

constexpr std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::precondition: return "precondition";
        case ErrorKind::pole_at_one: return "pole-at-one";
        case ErrorKind::near_singularity: return "near-singularity";
        case ErrorKind::no_sign_change: return "no-sign-change";
        case ErrorKind::coverage: return "coverage";
        case ErrorKind::normalization: return "normalization";
        case ErrorKind::local_pole: return "local-pole";
        case ErrorKind::singularity: return "singularity";
        case ErrorKind::coincidence: return "coincidence";
        case ErrorKind::parameter_mismatch: return "parameter-mismatch";
        case ErrorKind::boundary_too_close: return "boundary-too-close";
        case ErrorKind::non_convergence: return "non-convergence";
        case ErrorKind::inconclusive: return "inconclusive";
        case ErrorKind::pole_on_line: return "pole-on-line";
        case ErrorKind::limit_too_large: return "limit-too-large";
        case ErrorKind::parse: return "parse";
        case ErrorKind::ordering: return "ordering";
        case ErrorKind::usage: return "usage";
        case ErrorKind::io: return "io";
    }
    return "unknown";
}

constexpr bool is_numerical(ErrorKind kind) noexcept {
    return kind == ErrorKind::inconclusive || kind == ErrorKind::non_convergence;
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message, std::string tag = {})
        : std::runtime_error(message), kind_(kind), tag_(std::move(tag)) {}

    ErrorKind kind() const noexcept { return kind_; }

    /// Extra machine-readable detail: the singularity class for
    /// singularity errors, the offending flag for usage errors, etc.
    const std::string& tag() const noexcept { return tag_; }

private:
    ErrorKind kind_;
    std::string tag_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message, std::string tag = {}) {
    throw Error(kind, message, std::move(tag));
}

inline void require(bool condition, const std::string& message) {
    if (!condition) fail(ErrorKind::precondition, message);
}

}  // namespace motohashi
