#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "eif/dataset.hpp"
#include "eif/rng.hpp"

namespace eif {

inline constexpr double kEulerGamma = 0.5772156649;

/// ln(i) + gamma. Throws invalid_argument for i == 0.
double harmonic_estimate(std::size_t i);

/// Average unsuccessful-search depth in a BST of n points.
/// c(0) = c(1) = 0, c(2) = 1, otherwise 2 H(n-1) - 2 (n-1) / n.
double c_factor(std::size_t n);

/// ceil(log2(psi)), computed on integers.
std::size_t height_limit_for(std::size_t psi);

/// Score from a mean path length and the c(psi) normalizer: 2^(-depth / c).
double score_from_depth(double expected_depth, double normalizer);

struct Hyperplane {
    std::vector<double> normal;
    std::vector<double> intercept;

    friend bool operator==(const Hyperplane&, const Hyperplane&) = default;
};

/// (x - p) . n, accumulated in coordinate order.
double signed_offset(std::span<const double> x, std::span<const double> normal,
                     std::span<const double> intercept) noexcept;

/// True when x goes to the left branch, i.e. (x - p) . n <= 0.
bool branch_left(std::span<const double> x, const Hyperplane& h);

/// Draws a split for the points in node_data: Gaussian normal with
/// dim - 1 - extension_level coordinates zeroed, intercept uniform within the
/// node's bounding box. Requires at least two points.
Hyperplane sample_hyperplane(const Dataset& node_data, int extension_level, RngStream& rng);

enum class Variant { standard, extended, rotated };

/// Flattened binary tree, nodes in preorder with the root at index 0.
///
/// Internal nodes own a slot in `planes` holding dim normal coordinates
/// followed by dim intercept coordinates.
class IsolationTree {
public:
    struct Node {
        std::int32_t left = -1;
        std::int32_t right = -1;
        std::uint32_t size = 0;   // leaves only
        std::uint32_t plane = 0;  // internal nodes only

        bool is_leaf() const noexcept { return left < 0; }
        friend bool operator==(const Node&, const Node&) = default;
    };

    IsolationTree(std::size_t dim, std::size_t psi, std::size_t height_limit)
        : dim_(dim), psi_(psi), height_limit_(height_limit) {}

    std::size_t dim() const noexcept { return dim_; }
    std::size_t psi() const noexcept { return psi_; }
    std::size_t height_limit() const noexcept { return height_limit_; }
    const std::vector<Node>& nodes() const noexcept { return nodes_; }

    std::span<const double> normal(const Node& n) const noexcept {
        return {planes_.data() + 2 * dim_ * n.plane, dim_};
    }
    std::span<const double> intercept(const Node& n) const noexcept {
        return {planes_.data() + 2 * dim_ * n.plane + dim_, dim_};
    }

    std::size_t add_leaf(std::size_t size);
    std::size_t add_internal(std::span<const double> normal, std::span<const double> intercept);
    void link(std::size_t parent, std::size_t left, std::size_t right);

    /// Depth of the deepest node (root = 0).
    std::size_t depth() const;

    friend bool operator==(const IsolationTree&, const IsolationTree&) = default;

private:
    std::size_t dim_;
    std::size_t psi_;
    std::size_t height_limit_;
    std::vector<Node> nodes_;
    std::vector<double> planes_;
};

/// Optional record of which subsample rows reached each node, indexed like
/// IsolationTree::nodes(). Used to audit partitions in tests.
struct BuildTrace {
    std::vector<std::vector<std::size_t>> members;
};

/// Recursive tree construction. The root sits at depth current_height; a node
/// becomes a leaf when its depth reaches height_limit, when it holds at most
/// one point, or when all its points coincide.
IsolationTree build_tree(const Dataset& subsample, std::size_t current_height,
                         std::size_t height_limit, int extension_level, RngStream& rng,
                         BuildTrace* trace = nullptr);

/// Immutable ensemble of trees sharing psi and dimension.
class Forest {
public:
    Forest(std::vector<IsolationTree> trees, std::size_t psi, std::size_t dim,
           int extension_level, std::uint64_t seed);

    const std::vector<IsolationTree>& trees() const noexcept { return trees_; }
    std::size_t psi() const noexcept { return psi_; }
    std::size_t dim() const noexcept { return dim_; }
    int extension_level() const noexcept { return extension_level_; }
    double normalizer() const noexcept { return normalizer_; }
    std::uint64_t seed() const noexcept { return seed_; }
    std::size_t height_limit() const noexcept { return height_limit_for(psi_); }
    Variant variant() const noexcept {
        return extension_level_ == 0 ? Variant::standard : Variant::extended;
    }

    friend bool operator==(const Forest&, const Forest&) = default;

private:
    std::vector<IsolationTree> trees_;
    std::size_t psi_;
    std::size_t dim_;
    int extension_level_;
    double normalizer_;
    std::uint64_t seed_;
};

/// Parallelism knob for the OpenMP kernels; 0 means the OpenMP default.
struct Threads {
    int count = 0;
};

/// Validates build_forest arguments; throws on the first violation.
void check_forest_args(const Dataset& data, std::size_t t, std::size_t psi, int extension_level);

/// Tree i is built from derive_stream(make_rng(seed), i): subsample first,
/// then the recursive splits. Trees are built in parallel.
Forest build_forest(const Dataset& data, std::size_t t, std::size_t psi, int extension_level,
                    std::uint64_t seed, Threads threads = {});

/// Depth of the leaf reached by x plus c(leaf size).
double path_length(std::span<const double> x, const IsolationTree& tree);

/// Mean of the given per-tree path lengths; sorts them first so the result
/// does not depend on tree order.
double order_free_mean(std::span<double> lengths);

double expected_depth(std::span<const double> x, const Forest& forest);
double anomaly_score(std::span<const double> x, const Forest& forest);

/// Scores every row; points are scored in parallel, output order matches input.
std::vector<double> score_batch(const Dataset& data, const Forest& forest, Threads threads = {});

/// Single-threaded reference versions of the parallel kernels. They share the
/// per-tree and per-point code paths and must agree bit-for-bit.
namespace serial {
Forest build_forest(const Dataset& data, std::size_t t, std::size_t psi, int extension_level,
                    std::uint64_t seed);
std::vector<double> score_batch(const Dataset& data, const Forest& forest);
} // namespace serial

namespace detail {
/// The per-tree recipe shared by the serial and parallel builders.
IsolationTree build_forest_tree(const Dataset& data, std::size_t psi, std::size_t height_limit,
                                int extension_level, const RngStream& root, std::size_t index);
} // namespace detail

} // namespace eif
