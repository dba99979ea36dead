#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace hslab {

/// Error categories surfaced by the library. Each carries the witness
/// indices that triggered it (when meaningful) so callers can report
/// the exact offending entry.
enum class Errc {
    triangle_violation,
    asymmetric_distance,
    nonpositive_weight,
    too_few_points,
    invalid_ball,
    bad_radii,
    degenerate_domain,
    empty_set,
    zero_phi,
    empty_annulus,
    precondition_radius,
    bad_exponents,
    bad_beta,
    bad_params,
    missing_constant,
    lambda_out_of_range,
    not_a_gradient,
    zero_gradient_norm,
    empty_corpus,
    degenerate_rhs,
    v_condition_fails,
    chain_stuck,
    construction_impossible,
    io_error,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& msg, std::vector<int> witness = {})
        : std::runtime_error(std::string(errc_name(code)) + ": " + msg),
          code_(code),
          witness_(std::move(witness)) {}

    Errc code() const noexcept { return code_; }
    const std::vector<int>& witness() const noexcept { return witness_; }

private:
    Errc code_;
    std::vector<int> witness_;
};

} // namespace hslab
