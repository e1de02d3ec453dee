#include <cstddef>
#include <vector>

#include "eif/forest.hpp"
#include "omp_util.hpp"

namespace eif {

Forest build_forest(const Dataset& data, std::size_t t, std::size_t psi, int extension_level,
                    std::uint64_t seed, Threads threads) {
    check_forest_args(data, t, psi, extension_level);
    const RngStream root = make_rng(seed);
    const std::size_t limit = height_limit_for(psi);
    std::vector<IsolationTree> trees(t, IsolationTree(data.dim(), psi, limit));

    const auto n = static_cast<std::ptrdiff_t>(t);
#pragma omp parallel for schedule(dynamic) num_threads(detail::thread_count(threads))
    for (std::ptrdiff_t i = 0; i < n; ++i)
        trees[i] = detail::build_forest_tree(data, psi, limit, extension_level, root,
                                             static_cast<std::size_t>(i));

    return Forest(std::move(trees), psi, data.dim(), extension_level, seed);
}

std::vector<double> score_batch(const Dataset& data, const Forest& forest, Threads threads) {
    check_dimension(forest.dim(), data.dim());
    std::vector<double> out(data.size());
    const auto n = static_cast<std::ptrdiff_t>(data.size());
    const auto& trees = forest.trees();
#pragma omp parallel num_threads(detail::thread_count(threads))
    {
        std::vector<double> lengths(trees.size());
#pragma omp for schedule(static)
        for (std::ptrdiff_t i = 0; i < n; ++i) {
            const auto x = data.row(static_cast<std::size_t>(i));
            for (std::size_t k = 0; k < trees.size(); ++k)
                lengths[k] = path_length(x, trees[k]);
            out[i] = score_from_depth(order_free_mean(lengths), forest.normalizer());
        }
    }
    return out;
}

} // namespace eif
