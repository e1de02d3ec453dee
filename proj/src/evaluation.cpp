#include "eif/evaluation.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "eif/error.hpp"
#include "eif/synth.hpp"

namespace eif {

ScorerView::ScorerView(const Model& m) {
    if (const auto* f = std::get_if<Forest>(&m))
        target_ = f;
    else
        target_ = &std::get<RotatedForest>(m);
}

std::size_t ScorerView::dim() const {
    return std::visit([](const auto* f) { return f->dim(); }, target_);
}

double ScorerView::score(std::span<const double> x) const {
    if (const auto* f = std::get_if<const Forest*>(&target_))
        return anomaly_score(x, **f);
    return rotated_score(x, *std::get<const RotatedForest*>(target_));
}

std::vector<double> ScorerView::score_batch(const Dataset& data, Threads threads) const {
    return std::visit([&](const auto* f) { return eif::score_batch(data, *f, threads); }, target_);
}

std::pair<double, double> mean_variance(std::span<const double> values) {
    if (values.empty())
        fail(Errc::invalid_argument, "mean_variance: no values");
    // Welford: a constant input yields exactly that value and zero variance.
    double mean = 0.0;
    double m2 = 0.0;
    std::size_t k = 0;
    for (double v : values) {
        ++k;
        const double d = v - mean;
        mean += d / static_cast<double>(k);
        m2 += d * (v - mean);
    }
    return {mean, m2 / static_cast<double>(k)};
}

double ScoreGrid::x_at(std::size_t i) const {
    return spec.x_min + (static_cast<double>(i) + 0.5) * (spec.x_max - spec.x_min) /
                            static_cast<double>(spec.nx);
}

double ScoreGrid::y_at(std::size_t j) const {
    return spec.y_min + (static_cast<double>(j) + 0.5) * (spec.y_max - spec.y_min) /
                            static_cast<double>(spec.ny);
}

ScoreGrid score_map(ScorerView scorer, const GridSpec& grid, Threads threads) {
    if (scorer.dim() != 2)
        fail(Errc::unsupported_dimension, "score maps need a 2-D model, got dimension " +
                                              std::to_string(scorer.dim()));
    if (grid.nx < 2 || grid.ny < 2)
        fail(Errc::invalid_argument, "score map needs nx, ny >= 2");
    if (!(grid.x_min < grid.x_max) || !(grid.y_min < grid.y_max))
        fail(Errc::invalid_argument, "score map bounds must satisfy min < max");
    ScoreGrid out{grid, {}};
    Dataset lattice(2);
    lattice.reserve(grid.nx * grid.ny);
    for (std::size_t j = 0; j < grid.ny; ++j)
        for (std::size_t i = 0; i < grid.nx; ++i) {
            const double p[2] = {out.x_at(i), out.y_at(j)};
            lattice.push_back(p);
        }
    out.values = scorer.score_batch(lattice, threads);
    return out;
}

namespace {

LevelSetStats summarize(double level, const std::vector<double>& scores) {
    const auto [mean, var] = mean_variance(scores);
    return {level, mean, var, scores.size()};
}

void check_probe_args(std::size_t n_levels, std::size_t n_probe) {
    if (n_levels == 0)
        fail(Errc::invalid_argument, "at least one level is required");
    if (n_probe < 2)
        fail(Errc::invalid_argument, "n_probe must be at least 2");
}

} // namespace

std::vector<LevelSetStats> levelset_stats(ScorerView scorer, std::span<const double> radii,
                                          std::size_t n_probe, std::size_t dim,
                                          std::uint64_t seed, Threads threads) {
    check_probe_args(radii.size(), n_probe);
    check_dimension(scorer.dim(), dim);
    std::vector<LevelSetStats> out;
    for (double r : radii)
        out.push_back(summarize(r, scorer.score_batch(gen_sphere_levelset(r, n_probe, dim, seed),
                                                      threads)));
    return out;
}

std::vector<LevelSetStats> line_levelset_stats(ScorerView scorer, std::span<const double> offsets,
                                               std::size_t n_probe, const SinusoidParams& params,
                                               std::uint64_t seed, Threads threads) {
    check_probe_args(offsets.size(), n_probe);
    check_dimension(scorer.dim(), 2);
    std::vector<LevelSetStats> out;
    for (double off : offsets) {
        const Dataset probes = gen_line_levelset(off, n_probe, params.amplitude, params.x_max, seed);
        out.push_back(summarize(off, scorer.score_batch(probes, threads)));
    }
    return out;
}

ConvergenceSeries convergence_curve(const Dataset& data, const Dataset& probes,
                                    std::span<const std::size_t> t_values, std::size_t psi,
                                    int extension_level, std::uint64_t seed, Threads threads) {
    if (t_values.empty())
        fail(Errc::invalid_argument, "t_values must not be empty");
    for (std::size_t k = 0; k < t_values.size(); ++k) {
        if (t_values[k] == 0)
            fail(Errc::invalid_argument, "t_values must be at least 1");
        if (k > 0 && t_values[k] <= t_values[k - 1])
            fail(Errc::invalid_argument, "t_values must be strictly increasing");
    }
    check_dimension(data.dim(), probes.dim());
    const RngStream root = make_rng(seed);
    ConvergenceSeries out;
    for (std::size_t k = 0; k < t_values.size(); ++k) {
        const std::uint64_t forest_seed = derive_stream(root, k).next_u64();
        const Forest f = build_forest(data, t_values[k], psi, extension_level, forest_seed, threads);
        const auto scores = score_batch(probes, f, threads);
        const auto [mean, var] = mean_variance(scores);
        out.points.push_back({t_values[k], mean, var});
    }
    return out;
}

namespace {

struct ClassCounts {
    std::size_t positives = 0;
    std::size_t negatives = 0;
};

ClassCounts check_labels(const LabeledScores& ls) {
    if (ls.scores.size() != ls.labels.size())
        fail(Errc::invalid_argument, "scores and labels differ in length");
    ClassCounts c;
    for (int l : ls.labels) {
        if (l == 1)
            ++c.positives;
        else if (l == 0)
            ++c.negatives;
        else
            fail(Errc::invalid_argument, "labels must be 0 or 1");
    }
    return c;
}

} // namespace

double auroc(const LabeledScores& ls) {
    const ClassCounts c = check_labels(ls);
    if (c.positives == 0 || c.negatives == 0)
        fail(Errc::undefined_metric, "AUROC needs both anomalies and nominal points");

    std::vector<std::size_t> order(ls.scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return ls.scores[a] < ls.scores[b]; });

    // Ranks are 1-based; a tie group spanning ranks [lo, hi] gets (lo + hi) / 2.
    double positive_rank_sum = 0.0;
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j < order.size() && ls.scores[order[j]] == ls.scores[order[i]])
            ++j;
        const double midrank = 0.5 * static_cast<double>(i + 1 + j);
        for (std::size_t k = i; k < j; ++k)
            if (ls.labels[order[k]] == 1)
                positive_rank_sum += midrank;
        i = j;
    }
    const double p = static_cast<double>(c.positives);
    const double n = static_cast<double>(c.negatives);
    return (positive_rank_sum - p * (p + 1.0) / 2.0) / (p * n);
}

double auprc(const LabeledScores& ls) {
    const ClassCounts c = check_labels(ls);
    if (c.positives == 0)
        fail(Errc::undefined_metric, "AUPRC needs at least one anomaly");

    std::vector<std::size_t> order(ls.scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return ls.scores[a] > ls.scores[b]; });

    const double total_pos = static_cast<double>(c.positives);
    std::size_t seen = 0, true_pos = 0;
    double ap = 0.0;
    for (std::size_t i = 0; i < order.size();) {
        std::size_t group_pos = 0;
        std::size_t j = i;
        for (; j < order.size() && ls.scores[order[j]] == ls.scores[order[i]]; ++j)
            group_pos += ls.labels[order[j]] == 1;
        seen += j - i;
        true_pos += group_pos;
        if (group_pos > 0)
            ap += (static_cast<double>(true_pos) / static_cast<double>(seen)) *
                  (static_cast<double>(group_pos) / total_pos);
        i = j;
    }
    return ap;
}

} // namespace eif
