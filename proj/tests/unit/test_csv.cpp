#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include "eif/csv.hpp"
#include "eif/error.hpp"

namespace eif {
namespace {

Errc parse_code(const std::string& text, bool header, std::optional<ColumnRef> label,
                std::string* message = nullptr) {
    try {
        parse_csv(text, header, label);
    } catch (const Error& e) {
        if (message)
            *message = e.what();
        return e.code();
    }
    ADD_FAILURE() << "no error for: " << text;
    return Errc::io;
}

std::size_t count_lines(const std::string& s) {
    return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

TEST(CsvRead, HeaderAndRows) {
    const CsvTable t = parse_csv("x,y\n0,0\n1,2", true);
    ASSERT_EQ(t.data.size(), 2u);
    EXPECT_EQ(t.data.dim(), 2u);
    EXPECT_EQ(t.data.row(1)[0], 1.0);
    EXPECT_EQ(t.data.row(1)[1], 2.0);
    EXPECT_EQ(t.header, (std::vector<std::string>{"x", "y"}));
    EXPECT_FALSE(t.labels.has_value());
}

TEST(CsvRead, NoHeader) {
    const CsvTable t = parse_csv("1.5,-2e3\n", false);
    ASSERT_EQ(t.data.size(), 1u);
    EXPECT_EQ(t.data.row(0)[1], -2000.0);
    EXPECT_TRUE(t.header.empty());
}

TEST(CsvRead, CrLfAndBlankTrailingLine) {
    const CsvTable t = parse_csv("a,b\r\n1,2\r\n3,4\r\n\r\n", true);
    EXPECT_EQ(t.data.size(), 2u);
}

TEST(CsvRead, LabelByNameAndIndex) {
    const std::string text = "x0,label,x1\n1,0,2\n3,1,4\n";
    const CsvTable a = parse_csv(text, true, ColumnRef{std::string("label")});
    const CsvTable b = parse_csv(text, true, ColumnRef{std::size_t{1}});
    EXPECT_EQ(a.data, b.data);
    EXPECT_EQ(*a.labels, (std::vector<int>{0, 1}));
    EXPECT_EQ(a.data.dim(), 2u);
    EXPECT_EQ(a.data.row(1)[1], 4.0);
    EXPECT_EQ(a.header, (std::vector<std::string>{"x0", "x1"}));
}

TEST(CsvRead, BadLabelValue) {
    EXPECT_EQ(parse_code("x,label\n1,2\n", true, ColumnRef{std::string("label")}), Errc::schema);
}

TEST(CsvRead, UnknownLabelColumn) {
    EXPECT_EQ(parse_code("x,y\n1,2\n", true, ColumnRef{std::string("label")}), Errc::schema);
    EXPECT_EQ(parse_code("x,y\n1,2\n", true, ColumnRef{std::size_t{5}}), Errc::schema);
}

TEST(CsvRead, RaggedRowCitesLine) {
    std::string msg;
    EXPECT_EQ(parse_code("x,y\n1,2\n3\n", true, std::nullopt, &msg), Errc::parse);
    EXPECT_NE(msg.find("line 3"), std::string::npos) << msg;
}

TEST(CsvRead, NonNumericCell) {
    std::string msg;
    EXPECT_EQ(parse_code("x,y\n1,abc\n", true, std::nullopt, &msg), Errc::parse);
    EXPECT_NE(msg.find("line 2"), std::string::npos) << msg;
    EXPECT_EQ(parse_code("x\nnan\n", true, std::nullopt), Errc::parse);
    EXPECT_EQ(parse_code("x\ninf\n", true, std::nullopt), Errc::parse);
}

TEST(CsvRead, EmptyInput) { EXPECT_EQ(parse_code("", true, std::nullopt), Errc::parse); }

TEST(CsvRead, MissingFile) {
    try {
        read_csv("/nonexistent/eif/data.csv", true);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::io);
    }
}

TEST(CsvWrite, DatasetRoundTrip) {
    const double v[6] = {0.1, -1e-300, 3.0, 1.0 / 3.0, 2.5e17, -0.0};
    const Dataset d(3, std::vector<double>(v, v + 6));
    const std::vector<int> labels = {0, 1};
    const std::string text = dataset_csv(d, &labels);
    EXPECT_EQ(text.substr(0, text.find('\n')), "x0,x1,x2,label");
    const CsvTable back = parse_csv(text, true, ColumnRef{std::string("label")});
    EXPECT_EQ(back.data, d);
    EXPECT_EQ(*back.labels, labels);
}

TEST(CsvWrite, EmptyScoresWriteHeaderOnly) {
    EXPECT_EQ(scores_csv({}), "index,score\n");
}

TEST(CsvWrite, ScoresUseNineSignificantDigits) {
    const double s[2] = {0.123456789123, 0.5};
    EXPECT_EQ(scores_csv(s), "index,score\n0,0.123456789\n1,0.5\n");
}

TEST(CsvWrite, NineDigitFormattingIsStable) {
    // Reparsing a 9-digit score and formatting again gives the same text.
    for (double v = 0.0001234; v < 1.0; v = v * 1.37 + 1e-5) {
        const std::string once = format_score(v);
        const double back = std::strtod(once.c_str(), nullptr);
        EXPECT_EQ(format_score(back), once);
        EXPECT_NEAR(back, v, 5e-9 * std::abs(v));
    }
}

TEST(CsvWrite, ShortestRoundTrip) {
    EXPECT_EQ(format_real(0.1), "0.1");
    EXPECT_EQ(std::strtod(format_real(1.0 / 3.0).c_str(), nullptr), 1.0 / 3.0);
}

TEST(CsvWrite, GridShape) {
    ScoreGrid g;
    g.spec = {0, 1, 0, 1, 3, 2};
    g.values.assign(6, 0.25);
    const std::string text = grid_csv(g);
    EXPECT_EQ(count_lines(text), 3u * 2u + 1u);
    EXPECT_EQ(text.substr(0, text.find('\n')), "x,y,score");
}

TEST(CsvWrite, StatsAndConvergenceHeaders) {
    const LevelSetStats st[1] = {{1.0, 0.5, 0.01, 10}};
    EXPECT_EQ(stats_csv(st), "level,mean,variance,n_probe\n1,0.5,0.01,10\n");
    ConvergenceSeries cs;
    cs.points.push_back({10, 0.4, 0.001});
    EXPECT_EQ(convergence_csv(cs), "t,mean,variance\n10,0.4,0.001\n");
}

} // namespace
} // namespace eif
