#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace eif {

enum class Errc {
    invalid_argument,
    invalid_range,
    insufficient_data,
    dimension_mismatch,
    unsupported_dimension,
    undefined_metric,
    io,
    unsupported_version,
    corrupt_model,
    parse,
    schema,
};

std::string_view to_string(Errc code) noexcept;

/// Every failure raised by the library carries one of the codes above so the
/// CLI can map it to an exit status without parsing messages.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& message) {
    throw Error(code, message);
}

} // namespace eif
