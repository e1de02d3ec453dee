#include <gtest/gtest.h>

#include <cmath>

#include "eif/error.hpp"
#include "eif/evaluation.hpp"
#include "eif/synth.hpp"
#include "support/oracles.hpp"

namespace eif {
namespace {

LabeledScores random_instance(RngStream& rng, bool allow_ties) {
    LabeledScores ls;
    const std::size_t n = 2 + draw_index(rng, 49);
    for (std::size_t i = 0; i < n; ++i) {
        ls.scores.push_back(allow_ties ? static_cast<double>(draw_index(rng, 6)) / 5.0
                                       : rng.next_unit());
        ls.labels.push_back(static_cast<int>(draw_index(rng, 2)));
    }
    ls.labels[0] = 1;
    ls.labels[1] = 0;
    return ls;
}

TEST(Auroc, Examples) {
    EXPECT_EQ(auroc({{0.9, 0.8, 0.2, 0.1}, {1, 1, 0, 0}}), 1.0);
    EXPECT_EQ(auroc({{0.5, 0.5, 0.5, 0.5}, {1, 0, 1, 0}}), 0.5);
    EXPECT_EQ(auroc({{0.9, 0.4, 0.6, 0.2}, {1, 0, 0, 1}}), 0.5);
}

TEST(Auroc, SingleClassIsUndefined) {
    try {
        auroc({{0.1, 0.2}, {1, 1}});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::undefined_metric);
    }
}

TEST(Auroc, MatchesPairwiseOracle) {
    RngStream rng = make_rng(2024);
    for (int rep = 0; rep < 200; ++rep) {
        const LabeledScores ls = random_instance(rng, rep % 2 == 0);
        ASSERT_EQ(auroc(ls), oracle::auroc_pairs(ls.scores, ls.labels)) << "instance " << rep;
    }
}

TEST(Auroc, InvariantUnderMonotoneTransform) {
    RngStream rng = make_rng(9);
    for (int rep = 0; rep < 50; ++rep) {
        LabeledScores ls = random_instance(rng, true);
        LabeledScores warped = ls;
        for (auto& s : warped.scores)
            s = std::exp(3.0 * s) - 7.0;
        EXPECT_EQ(auroc(ls), auroc(warped));
    }
}

TEST(Auroc, ComplementaryLabelsSumToOne) {
    RngStream rng = make_rng(10);
    for (int rep = 0; rep < 50; ++rep) {
        LabeledScores ls = random_instance(rng, false);
        LabeledScores flipped = ls;
        for (auto& l : flipped.labels)
            l = 1 - l;
        EXPECT_NEAR(auroc(ls) + auroc(flipped), 1.0, 1e-12);
    }
}

TEST(Auprc, Examples) {
    EXPECT_EQ(auprc({{4, 3, 2, 1}, {1, 1, 0, 0}}), 1.0);
    EXPECT_NEAR(auprc({{4, 3, 2, 1}, {1, 0, 1, 0}}), 0.8333333333333333, 1e-9);
    EXPECT_EQ(auprc({{0.3, 0.1, 0.7}, {1, 1, 1}}), 1.0);
    try {
        auprc({{0.3, 0.1}, {0, 0}});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::undefined_metric);
    }
}

TEST(Auprc, TiesDoNotDependOnInputOrder) {
    EXPECT_EQ(auprc({{0.5, 0.5, 0.1}, {1, 0, 0}}), auprc({{0.5, 0.5, 0.1}, {0, 1, 0}}));
}

TEST(Auprc, MatchesThresholdOracle) {
    RngStream rng = make_rng(77);
    for (int rep = 0; rep < 200; ++rep) {
        const LabeledScores ls = random_instance(rng, rep % 2 == 1);
        ASSERT_EQ(auprc(ls), oracle::auprc_thresholds(ls.scores, ls.labels))
            << "instance " << rep;
    }
}

TEST(MeanVariance, Population) {
    const double v[4] = {1, 2, 3, 4};
    const auto [m, var] = mean_variance(v);
    EXPECT_EQ(m, 2.5);
    EXPECT_EQ(var, 1.25);
}

class TrainedBlob : public ::testing::Test {
protected:
    static void SetUpTestSuite() {
        data_ = new Dataset(gen_gaussian_blob(1500, 2, {}, 1.0, 3));
        forest_ = new Forest(build_forest(*data_, 100, 256, 1, 4));
    }
    static void TearDownTestSuite() {
        delete forest_;
        delete data_;
    }
    static Dataset* data_;
    static Forest* forest_;
};

Dataset* TrainedBlob::data_ = nullptr;
Forest* TrainedBlob::forest_ = nullptr;

TEST_F(TrainedBlob, ScoreMapMatchesPointwiseScores) {
    const ScoreGrid g = score_map(*forest_, {-2, 2, -1, 3, 2, 2});
    ASSERT_EQ(g.values.size(), 4u);
    const double xs[2] = {-1, 1}, ys[2] = {0, 2};
    for (std::size_t j = 0; j < 2; ++j)
        for (std::size_t i = 0; i < 2; ++i) {
            const double p[2] = {xs[i], ys[j]};
            EXPECT_EQ(g.at(i, j), anomaly_score(p, *forest_));
        }
}

TEST_F(TrainedBlob, ScoreMapCenterBelowCorner) {
    const ScoreGrid g = score_map(*forest_, {-5, 5, -5, 5, 21, 21});
    EXPECT_LT(g.at(10, 10), g.at(0, 0));
    EXPECT_LT(g.at(10, 10), g.at(20, 20));
    for (double v : g.values) {
        EXPECT_GT(v, 0.0);
        EXPECT_LT(v, 1.0);
    }
}

TEST_F(TrainedBlob, LevelsetStats) {
    const double radii[3] = {0.0, 1.0, 5.0};
    const auto stats = levelset_stats(*forest_, radii, 300, 2, 8);
    ASSERT_EQ(stats.size(), 3u);
    EXPECT_EQ(stats[0].variance, 0.0);
    EXPECT_GT(stats[2].mean, stats[1].mean);
    EXPECT_EQ(stats[1].n_probe, 300u);
    EXPECT_THROW(levelset_stats(*forest_, radii, 300, 3, 8), Error);
    EXPECT_THROW(levelset_stats(*forest_, radii, 1, 2, 8), Error);
}

TEST(Evaluation, ScoreMapNeedsPlanarModel) {
    const Dataset data = gen_gaussian_blob(100, 3, {}, 1.0, 1);
    const Forest f = build_forest(data, 5, 64, 2, 1);
    try {
        score_map(f, {});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::unsupported_dimension);
    }
}

TEST(Evaluation, LineLevelsetTrend) {
    const Dataset data = gen_sinusoid(2000, 5.0, kDefaultSinXMax, 0.5, 2);
    const Forest f = build_forest(data, 100, 256, 1, 3);
    const double offsets[2] = {0.0, 6.0};
    const auto stats = line_levelset_stats(f, offsets, 500, {}, 4);
    EXPECT_LT(stats[0].mean, stats[1].mean);
    for (const auto& s : stats)
        EXPECT_GE(s.variance, 0.0);
}

TEST(Evaluation, ConvergenceCurve) {
    const Dataset data = gen_gaussian_blob(1000, 2, {}, 1.0, 5);
    const Dataset probes = gen_sphere_levelset(3.0, 100, 2, 6);
    const std::size_t ts[3] = {1, 10, 50};
    const auto a = convergence_curve(data, probes, ts, 128, 1, 7);
    const auto b = convergence_curve(data, probes, ts, 128, 1, 7);
    ASSERT_EQ(a.points.size(), 3u);
    for (std::size_t k = 0; k < 3; ++k) {
        EXPECT_EQ(a.points[k].t, ts[k]);
        EXPECT_EQ(a.points[k].mean, b.points[k].mean);
        EXPECT_EQ(a.points[k].variance, b.points[k].variance);
    }
    const std::size_t bad[2] = {10, 10};
    EXPECT_THROW(convergence_curve(data, probes, bad, 128, 1, 7), Error);
    const std::size_t zero[1] = {0};
    EXPECT_THROW(convergence_curve(data, probes, zero, 128, 1, 7), Error);
}

TEST(Evaluation, ConvergenceSpreadShrinksWithT) {
    // Across independent seeds, the t = 500 estimates scatter less than the t = 1 ones.
    const Dataset data = gen_gaussian_blob(2000, 2, {}, 1.0, 15);
    const Dataset probes = gen_sphere_levelset(2.0, 200, 2, 16);
    const std::size_t ts[2] = {1, 500};
    std::vector<double> small_t, large_t;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto s = convergence_curve(data, probes, ts, 256, 1, seed);
        small_t.push_back(s.points[0].mean);
        large_t.push_back(s.points[1].mean);
    }
    EXPECT_LT(mean_variance(large_t).second, mean_variance(small_t).second);
}

TEST(Evaluation, ConvergenceRanksFarProbeAboveNearProbe) {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const Dataset data = gen_gaussian_blob(1000, 2, {}, 1.0, seed);
        const std::size_t ts[2] = {50, 100};
        const auto near = convergence_curve(data, gen_sphere_levelset(0.5, 1, 2, seed), ts, 256, 1,
                                            seed + 50);
        const auto far = convergence_curve(data, gen_sphere_levelset(4.0, 1, 2, seed), ts, 256, 1,
                                           seed + 50);
        for (std::size_t k = 0; k < 2; ++k)
            EXPECT_GT(far.points[k].mean, near.points[k].mean) << "seed " << seed;
    }
}

} // namespace
} // namespace eif
