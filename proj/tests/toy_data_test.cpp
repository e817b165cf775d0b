#include <gtest/gtest.h>

#include <filesystem>

#include "lcool/toy_data.hpp"

using namespace lcool;

TEST(ToyData, SourceFormulaAtForcedDraws) {
    EXPECT_EQ(source_manifold.sample(0.0, 0.0), (Point{0.0, 0.0}));
    EXPECT_EQ(source_manifold.sample(1.0, 0.2), (Point{1.0, 0.95}));
}

TEST(ToyData, TargetFormulaAtForcedDraws) {
    EXPECT_EQ(target_manifold.sample(0.0, 0.0), (Point{0.0, 0.0}));
    EXPECT_EQ(target_manifold.sample(1.0, 0.1), (Point{1.0, 0.5}));
}

TEST(ToyData, SourceMoments) {
    const Dataset d = generate_source({100000, Domain::source, 3});
    double mx = 0.0, mr = 0.0;
    for (const auto& p : d.points) {
        mx += p[0];
        mr += p[1] - 0.75 * p[0] * p[0];
    }
    EXPECT_NEAR(mx / d.size(), 0.5, 0.01);
    EXPECT_NEAR(mr / d.size(), 0.1, 0.005);
}

TEST(ToyData, TargetMoments) {
    const Dataset d = generate_target({100000, Domain::target, 4});
    double mr = 0.0;
    for (const auto& p : d.points) mr += p[1] - 0.4 * p[0];
    EXPECT_NEAR(mr / d.size(), 0.05, 0.003);
}

TEST(ToyData, GeneratedPointsSatisfyBandInvariant) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const Dataset s = generate_source({2000, Domain::source, seed});
        const Dataset t = generate_target({2000, Domain::target, seed});
        for (const auto& p : s.points) ASSERT_TRUE(source_manifold.contains(p));
        for (const auto& p : t.points) ASSERT_TRUE(target_manifold.contains(p));
        EXPECT_EQ(manifold_residual(s.points, Domain::source).mean, 0.0);
        EXPECT_EQ(manifold_residual(t.points, Domain::target).mean, 0.0);
    }
}

TEST(ToyData, GenerationIsPureInSpec) {
    EXPECT_EQ(generate_source({500, Domain::source, 9}), generate_source({500, Domain::source, 9}));
    EXPECT_NE(generate_source({500, Domain::source, 9}), generate_source({500, Domain::source, 10}));
}

TEST(ToyData, SpecValidation) {
    EXPECT_THROW(generate_source({10, Domain::target, 0}), DataError);
    EXPECT_THROW(generate_target({0, Domain::target, 0}), DataError);
}

TEST(ToyData, OffManifoldAcceptsPointsOutsideBand) {
    const Dataset d = make_offmanifold_tests({{0.5, 0.6}, {0.2, -0.3}});
    EXPECT_EQ(d.size(), 2u);
    EXPECT_EQ(d.domain, Domain::test);
}

TEST(ToyData, OffManifoldRejectsPointInsideBand) {
    EXPECT_THROW(make_offmanifold_tests({{0.5, 0.25}}), DataError);
}

TEST(ToyData, DefaultTestPointsLieAboveTheBand) {
    for (const auto& p : default_offmanifold_points()) EXPECT_GT(source_manifold.offset(p), source_manifold.band);
    EXPECT_NO_THROW(make_offmanifold_tests(default_offmanifold_points()));
}

TEST(ToyData, CsvRoundTripIsBitExact) {
    const Dataset d = generate_source({257, Domain::source, 1});
    const auto path = std::filesystem::temp_directory_path() / "lcool_toy_roundtrip.csv";
    save_dataset(path, d);
    EXPECT_EQ(load_dataset(path, Domain::source), d);
    std::filesystem::remove(path);
}

TEST(ToyData, EmptyFileIsAParseError) {
    try {
        dataset_from_csv("");
        FAIL() << "expected a parse error";
    } catch (const DataError& e) {
        EXPECT_NE(std::string(e.what()).find("parse error"), std::string::npos);
    }
}

TEST(ToyData, ThreeColumnRowIsADimensionErrorNamingTheRow) {
    try {
        dataset_from_csv("x1,x2\n0.1,0.2\n0.3,0.4,0.5\n");
        FAIL() << "expected a dimension error";
    } catch (const DimensionError& e) {
        EXPECT_NE(std::string(e.what()).find("row 2"), std::string::npos);
    }
}

TEST(ToyData, BadNumberIsRejected) { EXPECT_THROW(dataset_from_csv("x1,x2\n0.1,abc\n"), DataError); }

TEST(ToyData, MissingFile) { EXPECT_THROW(load_dataset("/nonexistent/lcool.csv"), DataError); }
