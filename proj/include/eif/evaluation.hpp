#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "eif/forest.hpp"
#include "eif/rotation.hpp"

namespace eif {

using Model = std::variant<Forest, RotatedForest>;

/// Non-owning handle over anything that can score points.
class ScorerView {
public:
    ScorerView(const Forest& f) : target_(&f) {}
    ScorerView(const RotatedForest& f) : target_(&f) {}
    ScorerView(const Model& m);

    std::size_t dim() const;
    double score(std::span<const double> x) const;
    std::vector<double> score_batch(const Dataset& data, Threads threads = {}) const;

private:
    std::variant<const Forest*, const RotatedForest*> target_;
};

struct GridSpec {
    double x_min = -5, x_max = 5, y_min = -5, y_max = 5;
    std::size_t nx = 100, ny = 100;
};

struct ScoreGrid {
    GridSpec spec;
    std::vector<double> values;  // row-major, x fastest

    double x_at(std::size_t i) const;
    double y_at(std::size_t j) const;
    double at(std::size_t i, std::size_t j) const { return values[j * spec.nx + i]; }
};

struct LevelSetStats {
    double level = 0;
    double mean = 0;
    double variance = 0;
    std::size_t n_probe = 0;
};

struct ConvergencePoint {
    std::size_t t = 0;
    double mean = 0;
    double variance = 0;
};

struct ConvergenceSeries {
    std::vector<ConvergencePoint> points;
};

struct LabeledScores {
    std::vector<double> scores;
    std::vector<int> labels;  // 0 nominal, 1 anomaly
};

/// Mean and population variance.
std::pair<double, double> mean_variance(std::span<const double> values);

/// Scores the cell centers of the grid. Scorer must be 2-D.
ScoreGrid score_map(ScorerView scorer, const GridSpec& grid, Threads threads = {});

/// Each radius is probed with gen_sphere_levelset(radius, n_probe, dim, seed).
std::vector<LevelSetStats> levelset_stats(ScorerView scorer, std::span<const double> radii,
                                          std::size_t n_probe, std::size_t dim,
                                          std::uint64_t seed, Threads threads = {});

struct SinusoidParams {
    double amplitude = 5.0;
    double x_max = 12.566370614359172;
};

/// Each offset is probed with gen_line_levelset(offset, n_probe, amplitude, x_max, seed).
std::vector<LevelSetStats> line_levelset_stats(ScorerView scorer, std::span<const double> offsets,
                                               std::size_t n_probe, const SinusoidParams& params,
                                               std::uint64_t seed, Threads threads = {});

/// One fresh forest per t; forest k is seeded from stream k of the root seed.
ConvergenceSeries convergence_curve(const Dataset& data, const Dataset& probes,
                                    std::span<const std::size_t> t_values, std::size_t psi,
                                    int extension_level, std::uint64_t seed, Threads threads = {});

/// Mann-Whitney statistic with midranks.
double auroc(const LabeledScores& ls);

/// Average precision; tied scores are consumed as one block.
double auprc(const LabeledScores& ls);

} // namespace eif
