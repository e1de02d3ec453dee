#include <gtest/gtest.h>

#include <cstring>

#include "eif/forest.hpp"
#include "eif/model_io.hpp"
#include "eif/rotation.hpp"
#include "eif/synth.hpp"

namespace eif {
namespace {

TEST(Parallel, BuildMatchesSerialReference) {
    const Dataset data = gen_gaussian_blob(1500, 4, {}, 1.0, 3);
    for (int ext : {0, 2, 3}) {
        const Forest reference = serial::build_forest(data, 48, 200, ext, 11);
        for (int threads : {1, 2, 4, 7}) {
            const Forest parallel = build_forest(data, 48, 200, ext, 11, Threads{threads});
            EXPECT_EQ(parallel, reference) << "ext " << ext << " threads " << threads;
        }
    }
}

TEST(Parallel, ScoresMatchSerialReferenceBitForBit) {
    const Dataset data = gen_gaussian_blob(1000, 3, {}, 1.0, 5);
    const Forest f = build_forest(data, 64, 256, 2, 6);
    const Dataset probes = gen_gaussian_blob(777, 3, {}, 2.0, 7);
    const auto reference = serial::score_batch(probes, f);
    for (int threads : {1, 3, 8}) {
        const auto parallel = score_batch(probes, f, Threads{threads});
        ASSERT_EQ(parallel.size(), reference.size());
        EXPECT_EQ(0, std::memcmp(parallel.data(), reference.data(),
                                 parallel.size() * sizeof(double)));
    }
}

TEST(Parallel, RotatedForestIndependentOfThreadCount) {
    const Dataset data = gen_gaussian_blob(800, 2, {}, 1.0, 9);
    const RotatedForest a = build_rotated_forest(data, 30, 128, 4, {}, Threads{1});
    const RotatedForest b = build_rotated_forest(data, 30, 128, 4, {}, Threads{5});
    EXPECT_EQ(forest_to_json(a), forest_to_json(b));
    EXPECT_EQ(score_batch(data, a, Threads{1}), score_batch(data, a, Threads{6}));
}

} // namespace
} // namespace eif
