#pragma once

#include <stdexcept>
#include <string>

namespace fglab {

enum class errc {
    ok = 0,
    precision_exhausted,
    non_unit,
    denominator_cap_exceeded,
    unsupported_ring,
    newton_hypothesis_failed,
    inner_constant_term_nonzero,
    non_unit_derivative,
    infinite_height_at_cap,
    divergent_evaluation,
    integrality_failure,
    not_commuting,
    reconstruction_mismatch,
    axiom_check_failed,
    schema_error,
    usage_error,
    config_mismatch,
    bad_argument,
};

const char* errc_name(errc c);

class Error : public std::runtime_error {
public:
    Error(errc code, const std::string& msg)
        : std::runtime_error(std::string(errc_name(code)) + ": " + msg), code_(code) {}

    errc code() const noexcept { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void raise(errc code, const std::string& msg) {
    throw Error(code, msg);
}

} // namespace fglab
