#include "eif/rotation.hpp"

#include <cmath>
#include <numbers>

#include "eif/error.hpp"
#include "omp_util.hpp"

namespace eif {

Point rotate_point(std::span<const double> x, double angle) {
    if (x.size() != 2)
        fail(Errc::unsupported_dimension, "rotation is only defined for 2-D points");
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    return {x[0] * c - x[1] * s, x[0] * s + x[1] * c};
}

RotatedForest::RotatedForest(Forest base, std::vector<double> angles)
    : base_(std::move(base)), angles_(std::move(angles)) {
    if (base_.dim() != 2)
        fail(Errc::unsupported_dimension, "rotated forests are 2-D only");
    if (base_.extension_level() != 0)
        fail(Errc::invalid_argument, "rotated forests use extension level 0 trees");
    if (angles_.size() != base_.trees().size())
        fail(Errc::invalid_argument, "one angle per tree is required");
    for (double a : angles_)
        if (!(a >= 0.0 && a < 2.0 * std::numbers::pi))
            fail(Errc::invalid_argument, "tree angle outside [0, 2 pi)");
}

namespace {

double draw_angle(const RngStream& tree_stream) {
    RngStream rng = derive_stream(tree_stream, kAngleStream);
    const double a = 2.0 * std::numbers::pi * rng.next_unit();
    return a < 2.0 * std::numbers::pi ? a : 0.0;
}

Dataset rotate_all(const Dataset& data, double angle) {
    Dataset out(2);
    out.reserve(data.size());
    for (std::size_t i = 0; i < data.size(); ++i)
        out.push_back(rotate_point(data.row(i), angle));
    return out;
}

} // namespace

RotatedForest build_rotated_forest(const Dataset& data, std::size_t t, std::size_t psi,
                                   std::uint64_t seed, RotationOptions options, Threads threads) {
    if (data.dim() != 2)
        fail(Errc::unsupported_dimension, "rotated forests need 2-D data, got dimension " +
                                              std::to_string(data.dim()));
    check_forest_args(data, t, psi, 0);
    const RngStream root = make_rng(seed);
    const std::size_t limit = height_limit_for(psi);
    std::vector<IsolationTree> trees(t, IsolationTree(2, psi, limit));
    std::vector<double> angles(t);

    const auto n = static_cast<std::ptrdiff_t>(t);
#pragma omp parallel for schedule(dynamic) num_threads(detail::thread_count(threads))
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        RngStream rng = derive_stream(root, static_cast<std::uint64_t>(i));
        const double angle = options.forced_angle ? *options.forced_angle : draw_angle(rng);
        const Dataset sample = rotate_all(subsample(rng, data, psi), angle);
        trees[i] = build_tree(sample, 0, limit, 0, rng);
        angles[i] = angle;
    }
    return RotatedForest(Forest(std::move(trees), psi, 2, 0, seed), std::move(angles));
}

namespace {

double rotated_score_with(std::span<const double> x, const RotatedForest& forest,
                          std::vector<double>& lengths) {
    const auto& trees = forest.base().trees();
    lengths.resize(trees.size());
    for (std::size_t k = 0; k < trees.size(); ++k) {
        const double a = forest.angles()[k];
        const double c = std::cos(a), s = std::sin(a);
        const double rotated[2] = {x[0] * c - x[1] * s, x[0] * s + x[1] * c};
        lengths[k] = path_length(rotated, trees[k]);
    }
    return score_from_depth(order_free_mean(lengths), forest.normalizer());
}

} // namespace

double rotated_score(std::span<const double> x, const RotatedForest& forest) {
    check_dimension(2, x.size());
    std::vector<double> lengths;
    return rotated_score_with(x, forest, lengths);
}

std::vector<double> score_batch(const Dataset& data, const RotatedForest& forest,
                                Threads threads) {
    check_dimension(2, data.dim());
    std::vector<double> out(data.size());
    const auto n = static_cast<std::ptrdiff_t>(data.size());
#pragma omp parallel num_threads(detail::thread_count(threads))
    {
        std::vector<double> lengths;
#pragma omp for schedule(static)
        for (std::ptrdiff_t i = 0; i < n; ++i)
            out[i] = rotated_score_with(data.row(static_cast<std::size_t>(i)), forest, lengths);
    }
    return out;
}

} // namespace eif
