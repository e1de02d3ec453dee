#include "eif/dataset.hpp"

#include <cmath>
#include <string>

#include "eif/error.hpp"

namespace eif {

Dataset::Dataset(std::size_t dim) : dim_(dim) {
    if (dim == 0)
        fail(Errc::invalid_argument, "dataset dimension must be at least 1");
}

Dataset::Dataset(std::size_t dim, std::vector<double> values)
    : dim_(dim), values_(std::move(values)) {
    if (dim == 0)
        fail(Errc::invalid_argument, "dataset dimension must be at least 1");
    if (values_.size() % dim != 0)
        fail(Errc::dimension_mismatch, "value count " + std::to_string(values_.size()) +
                                           " is not a multiple of dimension " + std::to_string(dim));
    check_finite(values_);
}

void Dataset::push_back(std::span<const double> point) {
    check_dimension(dim_, point.size());
    check_finite(point);
    values_.insert(values_.end(), point.begin(), point.end());
}

void check_finite(std::span<const double> point) {
    for (double v : point)
        if (!std::isfinite(v))
            fail(Errc::invalid_argument, "non-finite coordinate");
}

void check_dimension(std::size_t expected, std::size_t actual) {
    if (expected != actual)
        fail(Errc::dimension_mismatch, "dimension mismatch: expected " + std::to_string(expected) +
                                           ", got " + std::to_string(actual));
}

} // namespace eif
