#include <cstddef>
#include <vector>

#include "eif/forest.hpp"

namespace eif::serial {

Forest build_forest(const Dataset& data, std::size_t t, std::size_t psi, int extension_level,
                    std::uint64_t seed) {
    check_forest_args(data, t, psi, extension_level);
    const RngStream root = make_rng(seed);
    const std::size_t limit = height_limit_for(psi);
    std::vector<IsolationTree> trees;
    trees.reserve(t);
    for (std::size_t i = 0; i < t; ++i)
        trees.push_back(detail::build_forest_tree(data, psi, limit, extension_level, root, i));
    return Forest(std::move(trees), psi, data.dim(), extension_level, seed);
}

std::vector<double> score_batch(const Dataset& data, const Forest& forest) {
    check_dimension(forest.dim(), data.dim());
    std::vector<double> out;
    out.reserve(data.size());
    for (std::size_t i = 0; i < data.size(); ++i)
        out.push_back(anomaly_score(data.row(i), forest));
    return out;
}

} // namespace eif::serial
