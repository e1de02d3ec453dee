#include "eif/model_io.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <json.hpp>

#include "eif/error.hpp"
#include "eif/file_util.hpp"

namespace eif {

namespace {

using ordered_json = nlohmann::ordered_json;
using json = nlohmann::json;

std::string_view variant_name(Variant v) {
    switch (v) {
    case Variant::standard: return "standard";
    case Variant::extended: return "extended";
    case Variant::rotated: return "rotated";
    }
    return "extended";
}

ordered_json tree_json(const IsolationTree& tree) {
    ordered_json nodes = ordered_json::array();
    for (const auto& n : tree.nodes()) {
        ordered_json node;
        if (n.is_leaf()) {
            node["kind"] = "leaf";
            node["size"] = n.size;
        } else {
            const auto normal = tree.normal(n);
            const auto intercept = tree.intercept(n);
            node["kind"] = "internal";
            node["normal"] = std::vector<double>(normal.begin(), normal.end());
            node["intercept"] = std::vector<double>(intercept.begin(), intercept.end());
            node["left_index"] = n.left;
            node["right_index"] = n.right;
        }
        nodes.push_back(std::move(node));
    }
    ordered_json out;
    out["nodes"] = std::move(nodes);
    return out;
}

ordered_json header_json(const Forest& f, Variant variant) {
    ordered_json doc;
    doc["format"] = "eif-model";
    doc["version"] = kModelFormatVersion;
    doc["variant"] = variant_name(variant);
    doc["dimension"] = f.dim();
    doc["t"] = f.trees().size();
    doc["psi"] = f.psi();
    doc["extension_level"] = f.extension_level();
    doc["seed"] = f.seed();
    doc["rng_family"] = kRngFamily;
    return doc;
}

[[noreturn]] void corrupt(const std::string& what) {
    fail(Errc::corrupt_model, "corrupt model: " + what);
}

template <class T>
T field(const json& obj, const char* key, const std::string& where) {
    if (!obj.is_object() || !obj.contains(key))
        corrupt(where + ": missing field '" + key + "'");
    const json& v = obj.at(key);
    if constexpr (std::is_same_v<T, std::string>) {
        if (!v.is_string())
            corrupt(where + ": field '" + key + "' must be a string");
    } else if constexpr (std::is_floating_point_v<T>) {
        if (!v.is_number())
            corrupt(where + ": field '" + key + "' must be a number");
    } else if constexpr (std::is_unsigned_v<T>) {
        if (!v.is_number_unsigned())
            corrupt(where + ": field '" + key + "' must be a non-negative integer");
    } else {
        if (!v.is_number_integer())
            corrupt(where + ": field '" + key + "' must be an integer");
    }
    return v.get<T>();
}

std::vector<double> vector_field(const json& obj, const char* key, std::size_t dim,
                                 const std::string& where) {
    if (!obj.contains(key) || !obj.at(key).is_array())
        corrupt(where + ": field '" + key + "' must be an array");
    const json& arr = obj.at(key);
    if (arr.size() != dim)
        corrupt(where + ": '" + key + "' has " + std::to_string(arr.size()) +
                " coordinates, expected " + std::to_string(dim));
    std::vector<double> out;
    out.reserve(dim);
    for (const auto& v : arr) {
        if (!v.is_number() || !std::isfinite(v.get<double>()))
            corrupt(where + ": '" + key + "' holds a non-finite or non-numeric value");
        out.push_back(v.get<double>());
    }
    return out;
}

IsolationTree tree_from_json(const json& jt, std::size_t dim, std::size_t psi, int ext,
                             const std::string& where) {
    if (!jt.is_object() || !jt.contains("nodes") || !jt.at("nodes").is_array() ||
        jt.at("nodes").empty())
        corrupt(where + ": missing or empty 'nodes' array");
    const json& nodes = jt.at("nodes");
    const std::size_t n_nodes = nodes.size();
    const std::size_t limit = height_limit_for(psi);

    IsolationTree tree(dim, psi, limit);
    std::vector<std::pair<std::int64_t, std::int64_t>> children(n_nodes, {-1, -1});
    std::vector<char> internal(n_nodes, 0);
    std::uint64_t leaf_total = 0;
    for (std::size_t i = 0; i < n_nodes; ++i) {
        const json& jn = nodes[i];
        const std::string node_where = where + " node " + std::to_string(i);
        const auto kind = field<std::string>(jn, "kind", node_where);
        if (kind == "leaf") {
            const auto size = field<std::uint64_t>(jn, "size", node_where);
            if (size > psi)
                corrupt(node_where + ": leaf size exceeds psi");
            leaf_total += size;
            tree.add_leaf(size);
        } else if (kind == "internal") {
            const auto normal = vector_field(jn, "normal", dim, node_where);
            const auto intercept = vector_field(jn, "intercept", dim, node_where);
            int nonzero = 0;
            for (double v : normal)
                nonzero += v != 0.0;
            if (nonzero != ext + 1)
                corrupt(node_where + ": normal has " + std::to_string(nonzero) +
                        " nonzero coordinates, extension level requires " +
                        std::to_string(ext + 1));
            children[i] = {field<std::int64_t>(jn, "left_index", node_where),
                           field<std::int64_t>(jn, "right_index", node_where)};
            internal[i] = 1;
            tree.add_internal(normal, intercept);
        } else {
            corrupt(node_where + ": unknown node kind '" + kind + "'");
        }
    }

    // Children must appear in preorder: this rules out cycles, shared
    // children, dangling indices and unreachable nodes in one pass.
    std::vector<std::pair<std::size_t, std::size_t>> stack{{0, 0}};
    std::size_t expected = 0;
    while (!stack.empty()) {
        const auto [i, depth] = stack.back();
        stack.pop_back();
        if (i != expected)
            corrupt(where + ": node " + std::to_string(i) + " reached out of preorder (expected " +
                    std::to_string(expected) + ")");
        ++expected;
        if (depth > limit)
            corrupt(where + ": node " + std::to_string(i) + " exceeds the height limit " +
                    std::to_string(limit));
        const auto [l, r] = children[i];
        if (!internal[i])
            continue;
        for (auto c : {l, r})
            if (c <= static_cast<std::int64_t>(i) || c >= static_cast<std::int64_t>(n_nodes))
                corrupt(where + ": node " + std::to_string(i) + " has child index " +
                        std::to_string(c) + " out of range");
        tree.link(i, static_cast<std::size_t>(l), static_cast<std::size_t>(r));
        stack.emplace_back(static_cast<std::size_t>(r), depth + 1);
        stack.emplace_back(static_cast<std::size_t>(l), depth + 1);
    }
    if (expected != n_nodes)
        corrupt(where + ": " + std::to_string(n_nodes - expected) + " unreachable nodes");
    if (leaf_total != psi)
        corrupt(where + ": leaf sizes sum to " + std::to_string(leaf_total) + ", expected psi = " +
                std::to_string(psi));
    return tree;
}

} // namespace

std::string forest_to_json(const Forest& forest) {
    ordered_json doc = header_json(forest, forest.variant());
    ordered_json trees = ordered_json::array();
    for (const auto& t : forest.trees())
        trees.push_back(tree_json(t));
    doc["trees"] = std::move(trees);
    return doc.dump();
}

std::string forest_to_json(const RotatedForest& forest) {
    ordered_json doc = header_json(forest.base(), Variant::rotated);
    ordered_json trees = ordered_json::array();
    for (std::size_t i = 0; i < forest.angles().size(); ++i) {
        ordered_json t;
        t["angle"] = forest.angles()[i];
        t["nodes"] = std::move(tree_json(forest.base().trees()[i])["nodes"]);
        trees.push_back(std::move(t));
    }
    doc["trees"] = std::move(trees);
    return doc.dump();
}

std::string model_to_json(const Model& model) {
    return std::visit([](const auto& f) { return forest_to_json(f); }, model);
}

Model model_from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        corrupt(std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object())
        corrupt("top level must be a JSON object");
    if (field<std::string>(doc, "format", "header") != "eif-model")
        corrupt("not an eif-model document");
    const auto version = field<std::int64_t>(doc, "version", "header");
    if (version != kModelFormatVersion)
        fail(Errc::unsupported_version,
             "model format version " + std::to_string(version) +
                 " is not supported (this build reads version " +
                 std::to_string(kModelFormatVersion) + ")");

    const auto variant = field<std::string>(doc, "variant", "header");
    const auto dim = field<std::uint64_t>(doc, "dimension", "header");
    const auto t = field<std::uint64_t>(doc, "t", "header");
    const auto psi = field<std::uint64_t>(doc, "psi", "header");
    const auto ext = field<std::int64_t>(doc, "extension_level", "header");
    const auto seed = field<std::uint64_t>(doc, "seed", "header");
    field<std::string>(doc, "rng_family", "header");

    if (dim == 0)
        corrupt("dimension must be at least 1");
    if (psi < 2 || psi > std::numeric_limits<std::uint32_t>::max())
        corrupt("psi out of range");
    if (t == 0)
        corrupt("t must be at least 1");
    if (ext < 0 || static_cast<std::uint64_t>(ext) >= dim)
        corrupt("extension_level " + std::to_string(ext) + " outside [0, dimension - 1]");
    const bool rotated = variant == "rotated";
    if (variant == "standard" && ext != 0)
        corrupt("variant 'standard' requires extension_level 0");
    if (variant == "extended" && ext == 0)
        corrupt("variant 'extended' requires extension_level >= 1");
    if (rotated && (dim != 2 || ext != 0))
        corrupt("variant 'rotated' requires dimension 2 and extension_level 0");
    if (!rotated && variant != "standard" && variant != "extended")
        corrupt("unknown variant '" + variant + "'");
    if (!doc.contains("trees") || !doc.at("trees").is_array())
        corrupt("missing 'trees' array");
    const json& jtrees = doc.at("trees");
    if (jtrees.size() != t)
        corrupt("'t' is " + std::to_string(t) + " but " + std::to_string(jtrees.size()) +
                " trees are stored");

    std::vector<IsolationTree> trees;
    std::vector<double> angles;
    trees.reserve(t);
    for (std::size_t i = 0; i < jtrees.size(); ++i) {
        const std::string where = "tree " + std::to_string(i);
        trees.push_back(tree_from_json(jtrees[i], dim, psi, static_cast<int>(ext), where));
        if (rotated) {
            const double a = field<double>(jtrees[i], "angle", where);
            if (!(a >= 0.0 && a < 2.0 * std::numbers::pi))
                corrupt(where + ": angle outside [0, 2 pi)");
            angles.push_back(a);
        }
    }
    Forest forest(std::move(trees), psi, dim, static_cast<int>(ext), seed);
    if (rotated)
        return RotatedForest(std::move(forest), std::move(angles));
    return forest;
}

void save_forest(const Model& model, const std::string& path) {
    write_file_atomic(path, model_to_json(model));
}

void save_forest(const Forest& forest, const std::string& path) {
    write_file_atomic(path, forest_to_json(forest));
}

void save_forest(const RotatedForest& forest, const std::string& path) {
    write_file_atomic(path, forest_to_json(forest));
}

Model load_forest(const std::string& path) {
    const std::string text = read_file(path);
    try {
        return model_from_json(text);
    } catch (const Error& e) {
        throw Error(e.code(), path + ": " + e.what());
    }
}

} // namespace eif
