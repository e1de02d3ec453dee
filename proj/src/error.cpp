#include "eif/error.hpp"

namespace eif {

std::string_view to_string(Errc code) noexcept {
    switch (code) {
    case Errc::invalid_argument: return "invalid-argument";
    case Errc::invalid_range: return "invalid-range";
    case Errc::insufficient_data: return "insufficient-data";
    case Errc::dimension_mismatch: return "dimension-mismatch";
    case Errc::unsupported_dimension: return "unsupported-dimension";
    case Errc::undefined_metric: return "undefined-metric";
    case Errc::io: return "io";
    case Errc::unsupported_version: return "unsupported-version";
    case Errc::corrupt_model: return "corrupt-model";
    case Errc::parse: return "parse";
    case Errc::schema: return "schema";
    }
    return "unknown";
}

} // namespace eif
