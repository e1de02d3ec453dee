#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace eif {

using Point = std::vector<double>;

/// Row-major block of finite points sharing one dimension (>= 1).
class Dataset {
public:
    explicit Dataset(std::size_t dim);
    Dataset(std::size_t dim, std::vector<double> values);

    std::size_t dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return dim_ == 0 ? 0 : values_.size() / dim_; }
    bool empty() const noexcept { return values_.empty(); }

    std::span<const double> row(std::size_t i) const noexcept {
        return {values_.data() + i * dim_, dim_};
    }
    std::span<const double> values() const noexcept { return values_; }

    void reserve(std::size_t rows) { values_.reserve(rows * dim_); }
    void push_back(std::span<const double> point);

    friend bool operator==(const Dataset&, const Dataset&) = default;

private:
    std::size_t dim_;
    std::vector<double> values_;
};

void check_finite(std::span<const double> point);
void check_dimension(std::size_t expected, std::size_t actual);

} // namespace eif
