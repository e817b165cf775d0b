#include <gtest/gtest.h>

#include <algorithm>

#include "lcool/bench.hpp"
#include "toy_fixture.hpp"

using namespace lcool;
using lcool::testing::ToySetup;

TEST(ManifoldResidual, Examples) {
    const auto s = manifold_residual({{0.5, 0.2875}, {0.5, 0.65}}, Domain::source);
    EXPECT_EQ(s.values[0], 0.0);
    EXPECT_NEAR(s.values[1], 0.2625, 1e-15);
    EXPECT_NEAR(s.mean, 0.13125, 1e-15);
    EXPECT_NEAR(s.median, 0.13125, 1e-15);
    EXPECT_NEAR(manifold_residual({{0.5, -0.1}}, Domain::target).values[0], 0.3, 1e-15);
}

TEST(ManifoldResidual, GeneratedPointsAreExactlyZero) {
    const auto& toy = ToySetup::get();
    const auto s = manifold_residual(toy.source.points, Domain::source);
    EXPECT_EQ(s.mean, 0.0);
    EXPECT_EQ(s.median, 0.0);
}

TEST(VerifyTemperature, MatchesTemperedVariance) {
    const auto report = verify_temperature(GaussianDensity::standard(2), {.betas = {1.0, 10.0, 0.5}, .seed = 1});
    ASSERT_EQ(report.rows.size(), 3u);
    for (const auto& row : report.rows) {
        for (std::size_t d = 0; d < 2; ++d) EXPECT_NEAR(row.variance[d], 1.0 / row.beta, 0.1 / row.beta);
        EXPECT_LT(row.max_relative_error, 0.1);
    }
    EXPECT_FALSE(report.rows[0].heating);
    EXPECT_FALSE(report.rows[1].heating);
    EXPECT_TRUE(report.rows[2].heating);
}

TEST(VerifyTemperature, VarianceRatioFollowsInverseBeta) {
    const auto report = verify_temperature(GaussianDensity::diagonal({1.0, -1.0}, {2.0, 0.5}),
                                           {.betas = {2.0, 8.0}, .seed = 2});
    for (std::size_t d = 0; d < 2; ++d) {
        const double ratio = report.rows[0].variance[d] / report.rows[1].variance[d];
        EXPECT_NEAR(ratio, 4.0, 4.0 * 0.1);
        EXPECT_NEAR(report.rows[0].mean[d], d == 0 ? 1.0 : -1.0, 0.05);
    }
}

TEST(VerifyTemperature, Errors) {
    const auto g = GaussianDensity::standard(2);
    EXPECT_THROW(verify_temperature(g, {.chain_length = 9999}), DataError);
    EXPECT_THROW(verify_temperature(g, {.betas = {}}), DataError);
    EXPECT_THROW(verify_temperature(g, {.betas = {0.0}}), DataError);
}

TEST(Sweep, GridOrderIsDeterministic) {
    const SweepGrid grid;
    EXPECT_EQ(grid.size(), 60u);
    EXPECT_EQ(grid.cell(0), std::make_tuple(0.001, 0.0001, std::size_t{20}));
    EXPECT_EQ(grid.cell(1), std::make_tuple(0.001, 0.0001, std::size_t{40}));
    EXPECT_EQ(grid.cell(5), std::make_tuple(0.001, 0.001, std::size_t{20}));
    EXPECT_EQ(grid.cell(59), std::make_tuple(0.01, 0.01, std::size_t{100}));
}

TEST(Sweep, SingleCellEqualsSinglePipelineRun) {
    const auto& toy = ToySetup::get();
    const auto det = FringeDetector::proportion(1.0);
    const SweepGrid grid{{0.005}, {0.001}, {100}};
    const auto report = run_sweep(grid, toy.gan, toy.dae, det, toy.tests, 17);
    const CoolingConfig cfg{0.005, 0.001, 100, 17};
    ASSERT_EQ(report.rows.size(), 1u);
    EXPECT_EQ(report.rows[0], summarize_run(run_lcool_pipeline(toy.gan, toy.dae, det, cfg, toy.tests), cfg));
}

TEST(Sweep, DefaultGridEmitsSixtyRows) {
    const auto& toy = ToySetup::get();
    const auto report = run_sweep(SweepGrid{}, toy.gan, toy.dae, FringeDetector::proportion(1.0), toy.tests, 3);
    EXPECT_EQ(report.rows.size(), 60u);
    const std::string csv = metrics_to_csv(report.rows);
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 61);
}

TEST(Sweep, ZeroStepCellMatchesBaseline) {
    const auto& toy = ToySetup::get();
    const auto report =
        run_sweep(SweepGrid{{0.005}, {0.001}, {0, 50}}, toy.gan, toy.dae, FringeDetector::proportion(1.0), toy.tests, 3);
    const auto& zero = report.rows[0];
    EXPECT_EQ(zero.n_steps, 0u);
    EXPECT_EQ(zero.tgt_cooled_mean, zero.tgt_baseline_mean);
    EXPECT_EQ(zero.tgt_cooled_median, zero.tgt_baseline_median);
    EXPECT_EQ(zero.src_after_mean, zero.src_before_mean);
}

TEST(Sweep, BestCellTieBreaking) {
    std::vector<MetricRow> rows(3);
    rows[0].tgt_cooled_mean = 0.0;
    rows[0].n_steps = 100;
    rows[0].alpha = 0.001;
    rows[1].tgt_cooled_mean = 0.0;
    rows[1].n_steps = 40;
    rows[1].alpha = 0.01;
    rows[2].tgt_cooled_mean = 0.0;
    rows[2].n_steps = 40;
    rows[2].alpha = 0.005;
    EXPECT_EQ(select_best(rows), 2u);
    rows[0].tgt_cooled_mean = -1.0;
    EXPECT_EQ(select_best(rows), 0u);
    EXPECT_THROW(select_best({}), DataError);
}

TEST(Sweep, SelectionIsPureFunctionOfSavedReport) {
    const auto& toy = ToySetup::get();
    const auto report = run_sweep(SweepGrid{{0.001, 0.005}, {0.001, 0.01}, {20, 60}}, toy.gan, toy.dae,
                                  FringeDetector::proportion(1.0), toy.tests, 4);
    const auto reloaded = metrics_from_csv(metrics_to_csv(report.rows));
    EXPECT_EQ(reloaded, report.rows);
    EXPECT_EQ(select_best(reloaded), report.best);
}

TEST(Sweep, MalformedReport) {
    EXPECT_THROW(metrics_from_csv("nope\n"), DataError);
    EXPECT_THROW(metrics_from_csv(std::string(kMetricHeader) + "\n1,2,3\n"), DataError);
}
