#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "eif/forest.hpp"

namespace eif {

/// (x cos a - y sin a, x sin a + y cos a). Throws unsupported_dimension unless 2-D.
Point rotate_point(std::span<const double> x, double angle);

/// Standard (extension level 0) trees, each trained on its subsample rotated
/// about the origin by a per-tree angle in [0, 2 pi). 2-D only.
class RotatedForest {
public:
    RotatedForest(Forest base, std::vector<double> angles);

    const Forest& base() const noexcept { return base_; }
    const std::vector<double>& angles() const noexcept { return angles_; }
    std::size_t dim() const noexcept { return 2; }
    std::size_t psi() const noexcept { return base_.psi(); }
    double normalizer() const noexcept { return base_.normalizer(); }
    std::uint64_t seed() const noexcept { return base_.seed(); }

    friend bool operator==(const RotatedForest&, const RotatedForest&) = default;

private:
    Forest base_;
    std::vector<double> angles_;
};

struct RotationOptions {
    /// Overrides every per-tree angle; only meant for identity checks.
    std::optional<double> forced_angle;
};

/// Tree i uses derive_stream(root, i) for the subsample and splits, exactly
/// like build_forest, and derive_stream(derive_stream(root, i), kAngleStream)
/// for its angle.
RotatedForest build_rotated_forest(const Dataset& data, std::size_t t, std::size_t psi,
                                   std::uint64_t seed, RotationOptions options = {},
                                   Threads threads = {});

inline constexpr std::uint64_t kAngleStream = 0x616e676c65ULL;

double rotated_score(std::span<const double> x, const RotatedForest& forest);
std::vector<double> score_batch(const Dataset& data, const RotatedForest& forest,
                                Threads threads = {});

} // namespace eif
