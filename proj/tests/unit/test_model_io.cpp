#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "eif/error.hpp"
#include "eif/file_util.hpp"
#include "eif/model_io.hpp"
#include "eif/synth.hpp"

namespace eif {
namespace {

namespace fs = std::filesystem;

class ModelIo : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("eif_model_io_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }
    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    fs::path dir_;
};

Errc code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error thrown";
    return Errc::io;
}

TEST_F(ModelIo, RoundTripScoresAreBitIdentical) {
    const Dataset data = gen_gaussian_blob(600, 3, {}, 1.0, 1);
    const Forest f = build_forest(data, 40, 128, 2, 9);
    save_forest(f, path("m.json"));
    const Model m = load_forest(path("m.json"));
    ASSERT_TRUE(std::holds_alternative<Forest>(m));
    EXPECT_EQ(std::get<Forest>(m), f);
    const Dataset probes = gen_gaussian_blob(100, 3, {}, 2.0, 2);
    const auto a = score_batch(probes, f);
    const auto b = ScorerView(m).score_batch(probes);
    for (std::size_t i = 0; i < a.size(); ++i)
        ASSERT_EQ(a[i], b[i]);
}

TEST_F(ModelIo, DocumentStartsWithMagic) {
    const Forest f = build_forest(gen_gaussian_blob(50, 2, {}, 1.0, 1), 3, 32, 1, 2);
    const std::string text = forest_to_json(f);
    EXPECT_EQ(text.rfind("{\"format\":\"eif-model\",\"version\":1", 0), 0u);
    const auto j = nlohmann::json::parse(text);
    EXPECT_EQ(j["variant"], "extended");
    EXPECT_EQ(j["trees"].size(), 3u);
    const Forest g = build_forest(gen_gaussian_blob(50, 2, {}, 1.0, 1), 3, 32, 0, 2);
    EXPECT_EQ(nlohmann::json::parse(forest_to_json(g))["variant"], "standard");
}

TEST_F(ModelIo, RotatedRoundTrip) {
    const Dataset data = gen_gaussian_blob(300, 2, {}, 1.0, 3);
    const RotatedForest rf = build_rotated_forest(data, 20, 64, 4);
    save_forest(rf, path("r.json"));
    const Model m = load_forest(path("r.json"));
    ASSERT_TRUE(std::holds_alternative<RotatedForest>(m));
    const auto& back = std::get<RotatedForest>(m);
    EXPECT_EQ(back.angles(), rf.angles());
    const double p[2] = {1.25, -0.5};
    EXPECT_EQ(rotated_score(p, back), rotated_score(p, rf));
}

TEST_F(ModelIo, SaveIsDeterministic) {
    const Dataset data = gen_gaussian_blob(200, 2, {}, 1.0, 3);
    save_forest(build_forest(data, 10, 64, 1, 5), path("a.json"));
    save_forest(build_forest(data, 10, 64, 1, 5), path("b.json"));
    EXPECT_EQ(read_file(path("a.json")), read_file(path("b.json")));
}

TEST_F(ModelIo, TruncatedFileIsCorrupt) {
    const Forest f = build_forest(gen_gaussian_blob(100, 2, {}, 1.0, 1), 5, 64, 1, 2);
    const std::string text = forest_to_json(f);
    write_file_atomic(path("t.json"), text.substr(0, text.size() / 2));
    EXPECT_EQ(code_of([&] { load_forest(path("t.json")); }), Errc::corrupt_model);
}

TEST_F(ModelIo, MissingFileIsIoError) {
    EXPECT_EQ(code_of([&] { load_forest(path("absent.json")); }), Errc::io);
}

TEST_F(ModelIo, NewerVersionNamesBothVersions) {
    const Forest f = build_forest(gen_gaussian_blob(100, 2, {}, 1.0, 1), 2, 32, 1, 2);
    auto j = nlohmann::ordered_json::parse(forest_to_json(f));
    j["version"] = 2;
    try {
        model_from_json(j.dump());
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::unsupported_version);
        const std::string msg = e.what();
        EXPECT_NE(msg.find('1'), std::string::npos);
        EXPECT_NE(msg.find('2'), std::string::npos);
    }
}

class Tampered : public ::testing::Test {
protected:
    void SetUp() override {
        const Forest f = build_forest(gen_gaussian_blob(200, 3, {}, 1.0, 1), 2, 64, 1, 2);
        doc_ = nlohmann::ordered_json::parse(forest_to_json(f));
    }
    nlohmann::ordered_json& first_internal() {
        for (auto& n : doc_["trees"][0]["nodes"])
            if (n["kind"] == "internal")
                return n;
        throw std::logic_error("no internal node");
    }
    Errc load() { return code_of([&] { model_from_json(doc_.dump()); }); }

    nlohmann::ordered_json doc_;
};

TEST_F(Tampered, ValidDocumentLoads) { EXPECT_NO_THROW(model_from_json(doc_.dump())); }

TEST_F(Tampered, ChildIndexOutOfRange) {
    first_internal()["left_index"] = 100000;
    EXPECT_EQ(load(), Errc::corrupt_model);
}

TEST_F(Tampered, ChildIndexNegative) {
    first_internal()["right_index"] = -1;
    EXPECT_EQ(load(), Errc::corrupt_model);
}

TEST_F(Tampered, SelfLoop) {
    first_internal()["left_index"] = 0;
    EXPECT_EQ(load(), Errc::corrupt_model);
}

TEST_F(Tampered, WrongNormalLength) {
    first_internal()["normal"].push_back(1.0);
    EXPECT_EQ(load(), Errc::corrupt_model);
}

TEST_F(Tampered, TooManyNonzeroCoordinates) {
    for (auto& v : first_internal()["normal"])
        v = 0.5;
    EXPECT_EQ(load(), Errc::corrupt_model);
}

TEST_F(Tampered, LeafSizesMustSumToPsi) {
    for (auto& n : doc_["trees"][0]["nodes"])
        if (n["kind"] == "leaf") {
            n["size"] = n["size"].get<int>() + 1;
            break;
        }
    EXPECT_EQ(load(), Errc::corrupt_model);
}

TEST_F(Tampered, TreeCountMismatch) {
    doc_["t"] = 3;
    EXPECT_EQ(load(), Errc::corrupt_model);
}

TEST_F(Tampered, UnknownVariant) {
    doc_["variant"] = "fancy";
    EXPECT_EQ(load(), Errc::corrupt_model);
}

TEST_F(Tampered, WrongFieldType) {
    doc_["psi"] = "64";
    EXPECT_EQ(load(), Errc::corrupt_model);
}

TEST_F(Tampered, NotAModel) {
    doc_["format"] = "something-else";
    EXPECT_EQ(load(), Errc::corrupt_model);
}

} // namespace
} // namespace eif
