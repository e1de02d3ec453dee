#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "eif/dataset.hpp"
#include "eif/evaluation.hpp"

namespace eif {

/// Column selected by header name or by 0-based index.
using ColumnRef = std::variant<std::string, std::size_t>;

struct CsvTable {
    Dataset data;
    std::optional<std::vector<int>> labels;
    std::vector<std::string> header;  // feature columns only; empty without a header
};

CsvTable read_csv(const std::string& path, bool has_header,
                  const std::optional<ColumnRef>& label_column = std::nullopt);
CsvTable parse_csv(const std::string& text, bool has_header,
                   const std::optional<ColumnRef>& label_column = std::nullopt);

/// Shortest round-trip decimal.
std::string format_real(double v);
/// 9 significant digits.
std::string format_score(double v);

std::string dataset_csv(const Dataset& data, const std::vector<int>* labels = nullptr);
std::string scores_csv(std::span<const double> scores);
std::string grid_csv(const ScoreGrid& grid);
std::string stats_csv(std::span<const LevelSetStats> stats);
std::string convergence_csv(const ConvergenceSeries& series);

void write_dataset_csv(const std::string& path, const Dataset& data,
                       const std::vector<int>* labels = nullptr);
void write_scores_csv(const std::string& path, std::span<const double> scores);
void write_grid_csv(const std::string& path, const ScoreGrid& grid);
void write_stats_csv(const std::string& path, std::span<const LevelSetStats> stats);
void write_convergence_csv(const std::string& path, const ConvergenceSeries& series);

} // namespace eif
