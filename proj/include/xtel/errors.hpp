#pragma once

#include <stdexcept>
#include <string>

namespace xtel {

/// Reason codes for typed failures; callers and tests should match on these
/// rather than on message text.
enum class ErrorKind {
    unsupported_dimension,
    not_hermitian,
    not_projector,
    not_density_matrix,
    channel_trace,
    channel_negative_population,
    channel_psd,
    channel_canonical_order,
    channel_principal_subspace,
    use_zero_ratio,
    use_ratio_above_one,
    protocol_weights,
    parse_error,
    invalid_argument,
};

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

  private:
    ErrorKind kind_;
};

} // namespace xtel
