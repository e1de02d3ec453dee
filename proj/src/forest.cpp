#include "eif/forest.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>

#include "eif/error.hpp"

namespace eif {

double harmonic_estimate(std::size_t i) {
    if (i == 0)
        fail(Errc::invalid_argument, "harmonic_estimate: i must be at least 1");
    return std::log(static_cast<double>(i)) + kEulerGamma;
}

double c_factor(std::size_t n) {
    if (n <= 1)
        return 0.0;
    if (n == 2)
        return 1.0;
    const double nd = static_cast<double>(n);
    return 2.0 * harmonic_estimate(n - 1) - 2.0 * (nd - 1.0) / nd;
}

std::size_t height_limit_for(std::size_t psi) {
    return psi <= 1 ? 0 : static_cast<std::size_t>(std::bit_width(psi - 1));
}

double score_from_depth(double expected_depth, double normalizer) {
    return std::exp2(-expected_depth / normalizer);
}

double signed_offset(std::span<const double> x, std::span<const double> normal,
                     std::span<const double> intercept) noexcept {
    double acc = 0.0;
    for (std::size_t d = 0; d < x.size(); ++d)
        acc += (x[d] - intercept[d]) * normal[d];
    return acc;
}

bool branch_left(std::span<const double> x, const Hyperplane& h) {
    check_dimension(h.normal.size(), x.size());
    check_dimension(h.normal.size(), h.intercept.size());
    return signed_offset(x, h.normal, h.intercept) <= 0.0;
}

namespace {

void check_extension(int extension_level, std::size_t dim) {
    if (extension_level < 0 || static_cast<std::size_t>(extension_level) >= dim)
        fail(Errc::invalid_argument, "extension level " + std::to_string(extension_level) +
                                         " outside [0, " + std::to_string(dim - 1) + "]");
}

/// Per-node split draw. Order of draws: all normal coordinates, all intercept
/// coordinates, then the coordinates to zero.
void draw_split(std::span<const double> lo, std::span<const double> hi, int extension_level,
                RngStream& rng, std::span<double> normal, std::span<double> intercept,
                std::vector<std::size_t>& coords) {
    const std::size_t dim = normal.size();
    for (std::size_t d = 0; d < dim; ++d)
        normal[d] = draw_standard_normal(rng);
    for (std::size_t d = 0; d < dim; ++d)
        intercept[d] = draw_uniform(rng, lo[d], hi[d]);

    const std::size_t zeroed = dim - 1 - static_cast<std::size_t>(extension_level);
    coords.resize(dim);
    std::iota(coords.begin(), coords.end(), std::size_t{0});
    for (std::size_t j = 0; j < zeroed; ++j) {
        const std::size_t k = j + draw_index(rng, dim - j);
        std::swap(coords[j], coords[k]);
        normal[coords[j]] = 0.0;
    }
    // keeps the nonzero count at exactly extension_level + 1
    for (std::size_t j = zeroed; j < dim; ++j)
        while (normal[coords[j]] == 0.0)
            normal[coords[j]] = draw_standard_normal(rng);
}

class TreeBuilder {
public:
    TreeBuilder(const Dataset& data, std::size_t height_limit, int extension_level, RngStream& rng,
                BuildTrace* trace, IsolationTree& tree)
        : data_(data), limit_(height_limit), ext_(extension_level), rng_(rng), trace_(trace),
          tree_(tree), normal_(data.dim()), intercept_(data.dim()), lo_(data.dim()),
          hi_(data.dim()) {}

    std::size_t grow(std::span<std::size_t> idx, std::size_t depth) {
        if (depth >= limit_ || idx.size() <= 1 || !bounding_box(idx))
            return record(tree_.add_leaf(idx.size()), idx);

        draw_split(lo_, hi_, ext_, rng_, normal_, intercept_, coords_);
        const std::size_t node = record(tree_.add_internal(normal_, intercept_), idx);

        auto mid = std::partition(idx.begin(), idx.end(), [&](std::size_t i) {
            return signed_offset(data_.row(i), normal_, intercept_) <= 0.0;
        });
        const auto n_left = static_cast<std::size_t>(mid - idx.begin());
        const std::size_t left = grow(idx.first(n_left), depth + 1);
        const std::size_t right = grow(idx.subspan(n_left), depth + 1);
        tree_.link(node, left, right);
        return node;
    }

private:
    /// Fills lo_/hi_; false when every point coincides.
    bool bounding_box(std::span<const std::size_t> idx) {
        const auto first = data_.row(idx[0]);
        std::copy(first.begin(), first.end(), lo_.begin());
        std::copy(first.begin(), first.end(), hi_.begin());
        for (std::size_t k = 1; k < idx.size(); ++k) {
            const auto r = data_.row(idx[k]);
            for (std::size_t d = 0; d < r.size(); ++d) {
                lo_[d] = std::min(lo_[d], r[d]);
                hi_[d] = std::max(hi_[d], r[d]);
            }
        }
        for (std::size_t d = 0; d < lo_.size(); ++d)
            if (lo_[d] < hi_[d])
                return true;
        return false;
    }

    std::size_t record(std::size_t node, std::span<const std::size_t> idx) {
        if (trace_) {
            if (trace_->members.size() <= node)
                trace_->members.resize(node + 1);
            trace_->members[node].assign(idx.begin(), idx.end());
        }
        return node;
    }

    const Dataset& data_;
    std::size_t limit_;
    int ext_;
    RngStream& rng_;
    BuildTrace* trace_;
    IsolationTree& tree_;
    std::vector<double> normal_, intercept_, lo_, hi_;
    std::vector<std::size_t> coords_;
};

} // namespace

Hyperplane sample_hyperplane(const Dataset& node_data, int extension_level, RngStream& rng) {
    if (node_data.size() < 2)
        fail(Errc::invalid_argument, "sample_hyperplane: need at least two points");
    const std::size_t dim = node_data.dim();
    check_extension(extension_level, dim);

    std::vector<double> lo(node_data.row(0).begin(), node_data.row(0).end());
    std::vector<double> hi = lo;
    for (std::size_t i = 1; i < node_data.size(); ++i) {
        const auto r = node_data.row(i);
        for (std::size_t d = 0; d < dim; ++d) {
            lo[d] = std::min(lo[d], r[d]);
            hi[d] = std::max(hi[d], r[d]);
        }
    }
    Hyperplane h{std::vector<double>(dim), std::vector<double>(dim)};
    std::vector<std::size_t> coords;
    draw_split(lo, hi, extension_level, rng, h.normal, h.intercept, coords);
    return h;
}

std::size_t IsolationTree::add_leaf(std::size_t size) {
    Node n;
    n.size = static_cast<std::uint32_t>(size);
    nodes_.push_back(n);
    return nodes_.size() - 1;
}

std::size_t IsolationTree::add_internal(std::span<const double> normal,
                                        std::span<const double> intercept) {
    check_dimension(dim_, normal.size());
    check_dimension(dim_, intercept.size());
    Node n;
    n.plane = static_cast<std::uint32_t>(planes_.size() / (2 * dim_));
    planes_.insert(planes_.end(), normal.begin(), normal.end());
    planes_.insert(planes_.end(), intercept.begin(), intercept.end());
    nodes_.push_back(n);
    return nodes_.size() - 1;
}

void IsolationTree::link(std::size_t parent, std::size_t left, std::size_t right) {
    nodes_[parent].left = static_cast<std::int32_t>(left);
    nodes_[parent].right = static_cast<std::int32_t>(right);
}

std::size_t IsolationTree::depth() const {
    if (nodes_.empty())
        return 0;
    std::size_t deepest = 0;
    std::vector<std::pair<std::size_t, std::size_t>> stack{{0, 0}};
    while (!stack.empty()) {
        auto [node, d] = stack.back();
        stack.pop_back();
        deepest = std::max(deepest, d);
        const Node& n = nodes_[node];
        if (!n.is_leaf()) {
            stack.emplace_back(static_cast<std::size_t>(n.left), d + 1);
            stack.emplace_back(static_cast<std::size_t>(n.right), d + 1);
        }
    }
    return deepest;
}

IsolationTree build_tree(const Dataset& subsample, std::size_t current_height,
                         std::size_t height_limit, int extension_level, RngStream& rng,
                         BuildTrace* trace) {
    check_extension(extension_level, subsample.dim());
    IsolationTree tree(subsample.dim(), subsample.size(), height_limit);
    if (trace)
        trace->members.clear();
    std::vector<std::size_t> idx(subsample.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    TreeBuilder builder(subsample, height_limit, extension_level, rng, trace, tree);
    builder.grow(idx, current_height);
    return tree;
}

Forest::Forest(std::vector<IsolationTree> trees, std::size_t psi, std::size_t dim,
               int extension_level, std::uint64_t seed)
    : trees_(std::move(trees)), psi_(psi), dim_(dim), extension_level_(extension_level),
      normalizer_(c_factor(psi)), seed_(seed) {
    if (trees_.empty())
        fail(Errc::invalid_argument, "a forest needs at least one tree");
    if (dim == 0)
        fail(Errc::invalid_argument, "forest dimension must be at least 1");
    check_extension(extension_level, dim);
    for (const auto& t : trees_) {
        if (t.dim() != dim || t.psi() != psi)
            fail(Errc::invalid_argument, "all trees must share psi and dimension");
    }
}

void check_forest_args(const Dataset& data, std::size_t t, std::size_t psi, int extension_level) {
    if (data.size() < 2)
        fail(Errc::insufficient_data, "training needs at least two rows");
    if (t == 0)
        fail(Errc::invalid_argument, "tree count must be at least 1");
    if (psi < 2)
        fail(Errc::invalid_argument, "psi must be at least 2");
    if (psi > data.size())
        fail(Errc::insufficient_data, "psi = " + std::to_string(psi) + " exceeds the " +
                                          std::to_string(data.size()) + " training rows");
    check_extension(extension_level, data.dim());
}

IsolationTree detail::build_forest_tree(const Dataset& data, std::size_t psi,
                                        std::size_t height_limit, int extension_level,
                                        const RngStream& root, std::size_t index) {
    RngStream rng = derive_stream(root, index);
    const Dataset sample = subsample(rng, data, psi);
    return build_tree(sample, 0, height_limit, extension_level, rng);
}

double path_length(std::span<const double> x, const IsolationTree& tree) {
    check_dimension(tree.dim(), x.size());
    const auto& nodes = tree.nodes();
    std::size_t node = 0;
    std::size_t depth = 0;
    while (!nodes[node].is_leaf()) {
        const auto& n = nodes[node];
        node = signed_offset(x, tree.normal(n), tree.intercept(n)) <= 0.0
                   ? static_cast<std::size_t>(n.left)
                   : static_cast<std::size_t>(n.right);
        ++depth;
    }
    return static_cast<double>(depth) + c_factor(nodes[node].size);
}

double order_free_mean(std::span<double> lengths) {
    std::sort(lengths.begin(), lengths.end());
    double sum = 0.0;
    for (double v : lengths)
        sum += v;
    return sum / static_cast<double>(lengths.size());
}

double expected_depth(std::span<const double> x, const Forest& forest) {
    check_dimension(forest.dim(), x.size());
    std::vector<double> lengths;
    lengths.reserve(forest.trees().size());
    for (const auto& tree : forest.trees())
        lengths.push_back(path_length(x, tree));
    return order_free_mean(lengths);
}

double anomaly_score(std::span<const double> x, const Forest& forest) {
    return score_from_depth(expected_depth(x, forest), forest.normalizer());
}

} // namespace eif
