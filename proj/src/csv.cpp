#include "eif/csv.hpp"

#include <charconv>
#include <cmath>
#include <string_view>

#include "eif/error.hpp"
#include "eif/file_util.hpp"

namespace eif {

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        out.push_back(line.substr(start, comma == std::string_view::npos ? comma : comma - start));
        if (comma == std::string_view::npos)
            break;
        start = comma + 1;
    }
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t'))
        s.remove_suffix(1);
    return s;
}

bool parse_double(std::string_view s, double& out) {
    s = trim(s);
    if (!s.empty() && s.front() == '+')
        s.remove_prefix(1);
    if (s.empty())
        return false;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

std::size_t resolve_label(const ColumnRef& ref, const std::vector<std::string>& header,
                          std::size_t n_cols) {
    if (const auto* idx = std::get_if<std::size_t>(&ref)) {
        if (*idx >= n_cols)
            fail(Errc::schema, "label column index " + std::to_string(*idx) + " out of range (" +
                                   std::to_string(n_cols) + " columns)");
        return *idx;
    }
    const auto& name = std::get<std::string>(ref);
    if (header.empty())
        fail(Errc::schema, "label column '" + name + "' named but the file has no header");
    for (std::size_t c = 0; c < header.size(); ++c)
        if (header[c] == name)
            return c;
    fail(Errc::schema, "unknown label column '" + name + "'");
}

} // namespace

CsvTable parse_csv(const std::string& text, bool has_header,
                   const std::optional<ColumnRef>& label_column) {
    std::vector<std::pair<std::size_t, std::string_view>> lines;
    std::string_view rest = text;
    for (std::size_t line_no = 1; !rest.empty(); ++line_no) {
        const std::size_t nl = rest.find('\n');
        std::string_view line = rest.substr(0, nl);
        rest = nl == std::string_view::npos ? std::string_view{} : rest.substr(nl + 1);
        if (!line.empty() && line.back() == '\r')
            line.remove_suffix(1);
        if (!trim(line).empty())
            lines.emplace_back(line_no, line);
    }
    if (lines.empty())
        fail(Errc::parse, "empty CSV input");

    std::vector<std::string> header;
    std::size_t first = 0;
    if (has_header) {
        for (auto f : split_fields(lines[0].second))
            header.emplace_back(trim(f));
        first = 1;
    }
    const std::size_t n_cols =
        has_header ? header.size()
                   : split_fields(lines[0].second).size();

    std::optional<std::size_t> label_idx;
    if (label_column)
        label_idx = resolve_label(*label_column, header, n_cols);
    const std::size_t dim = n_cols - (label_idx ? 1 : 0);
    if (dim == 0)
        fail(Errc::schema, "no feature columns");

    std::vector<double> values;
    values.reserve((lines.size() - first) * dim);
    std::vector<int> labels;
    for (std::size_t k = first; k < lines.size(); ++k) {
        const auto [line_no, line] = lines[k];
        const auto fields = split_fields(line);
        if (fields.size() != n_cols)
            fail(Errc::parse, "line " + std::to_string(line_no) + ": expected " +
                                  std::to_string(n_cols) + " fields, got " +
                                  std::to_string(fields.size()));
        for (std::size_t c = 0; c < n_cols; ++c) {
            double v;
            if (!parse_double(fields[c], v) || !std::isfinite(v))
                fail(Errc::parse, "line " + std::to_string(line_no) + ", column " +
                                      std::to_string(c + 1) + ": not a finite number: '" +
                                      std::string(fields[c]) + "'");
            if (label_idx && c == *label_idx) {
                if (v != 0.0 && v != 1.0)
                    fail(Errc::schema, "line " + std::to_string(line_no) +
                                           ": label must be 0 or 1, got '" +
                                           std::string(trim(fields[c])) + "'");
                labels.push_back(static_cast<int>(v));
            } else {
                values.push_back(v);
            }
        }
    }

    CsvTable out{Dataset(dim, std::move(values)), std::nullopt, {}};
    if (label_idx) {
        out.labels = std::move(labels);
        if (!header.empty())
            header.erase(header.begin() + static_cast<std::ptrdiff_t>(*label_idx));
    }
    out.header = std::move(header);
    return out;
}

CsvTable read_csv(const std::string& path, bool has_header,
                  const std::optional<ColumnRef>& label_column) {
    try {
        return parse_csv(read_file(path), has_header, label_column);
    } catch (const Error& e) {
        if (e.code() == Errc::io)
            throw;
        throw Error(e.code(), path + ": " + e.what());
    }
}

std::string format_real(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

std::string format_score(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 9);
    return std::string(buf, ptr);
}

std::string dataset_csv(const Dataset& data, const std::vector<int>* labels) {
    if (labels && labels->size() != data.size())
        fail(Errc::invalid_argument, "label count does not match row count");
    std::string out;
    for (std::size_t d = 0; d < data.dim(); ++d)
        out += (d ? ",x" : "x") + std::to_string(d);
    out += labels ? ",label\n" : "\n";
    for (std::size_t i = 0; i < data.size(); ++i) {
        const auto r = data.row(i);
        for (std::size_t d = 0; d < r.size(); ++d) {
            if (d)
                out += ',';
            out += format_real(r[d]);
        }
        if (labels)
            out += (*labels)[i] ? ",1" : ",0";
        out += '\n';
    }
    return out;
}

std::string scores_csv(std::span<const double> scores) {
    std::string out = "index,score\n";
    for (std::size_t i = 0; i < scores.size(); ++i)
        out += std::to_string(i) + ',' + format_score(scores[i]) + '\n';
    return out;
}

std::string grid_csv(const ScoreGrid& grid) {
    std::string out = "x,y,score\n";
    for (std::size_t j = 0; j < grid.spec.ny; ++j)
        for (std::size_t i = 0; i < grid.spec.nx; ++i)
            out += format_real(grid.x_at(i)) + ',' + format_real(grid.y_at(j)) + ',' +
                   format_score(grid.at(i, j)) + '\n';
    return out;
}

std::string stats_csv(std::span<const LevelSetStats> stats) {
    std::string out = "level,mean,variance,n_probe\n";
    for (const auto& s : stats)
        out += format_real(s.level) + ',' + format_score(s.mean) + ',' + format_score(s.variance) +
               ',' + std::to_string(s.n_probe) + '\n';
    return out;
}

std::string convergence_csv(const ConvergenceSeries& series) {
    std::string out = "t,mean,variance\n";
    for (const auto& p : series.points)
        out += std::to_string(p.t) + ',' + format_score(p.mean) + ',' + format_score(p.variance) +
               '\n';
    return out;
}

void write_dataset_csv(const std::string& path, const Dataset& data,
                       const std::vector<int>* labels) {
    write_file_atomic(path, dataset_csv(data, labels));
}

void write_scores_csv(const std::string& path, std::span<const double> scores) {
    write_file_atomic(path, scores_csv(scores));
}

void write_grid_csv(const std::string& path, const ScoreGrid& grid) {
    write_file_atomic(path, grid_csv(grid));
}

void write_stats_csv(const std::string& path, std::span<const LevelSetStats> stats) {
    write_file_atomic(path, stats_csv(stats));
}

void write_convergence_csv(const std::string& path, const ConvergenceSeries& series) {
    write_file_atomic(path, convergence_csv(series));
}

} // namespace eif
