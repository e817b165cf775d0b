#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "lcool/score.hpp"

using namespace lcool;

namespace {

constexpr double kSigmaSq = 0.09;

// r*(x) = E[x | x + e] = x / (1 + sigma^2) for x ~ N(0, I), e ~ N(0, sigma^2 I).
DaeModel optimal_gaussian_dae() { return DaeModel(affine_mlp(2, 1.0 / (1.0 + kSigmaSq)), kSigmaSq); }

std::vector<Point> grid21() {
    std::vector<Point> g;
    for (int i = 0; i <= 20; ++i)
        for (int j = 0; j <= 20; ++j) g.push_back({-2.0 + 0.2 * i, -2.0 + 0.2 * j});
    return g;
}

const DaeModel& trained_gaussian_dae() {
    static const DaeModel model = [] {
        Rng data_rng(101);
        std::vector<Point> data;
        for (int i = 0; i < 10000; ++i) data.push_back(data_rng.normal(2));
        Rng rng(102);
        return train_dae(data, {.sigma_sq = kSigmaSq, .epochs = 100, .learning_rate = 3e-3}, rng);
    }();
    return model;
}

} // namespace

TEST(DaeScore, IdentityBodyHasZeroScore) {
    const DaeModel dae(affine_mlp(2, 1.0), kSigmaSq);
    Rng rng(1);
    for (int i = 0; i < 20; ++i) {
        const Point s = dae_score(dae, rng.normal(2));
        EXPECT_EQ(s, (Point{0.0, 0.0}));
    }
}

TEST(DaeScore, OptimalGaussianDenoiser) {
    const Point s = dae_score(optimal_gaussian_dae(), Point{2.0, 0.0});
    EXPECT_NEAR(s[0], -1.8349, 1e-4);
    EXPECT_NEAR(s[1], 0.0, 1e-15);
}

TEST(DaeScore, OptimalDenoiserIsShrunkGaussianScore) {
    const auto density = GaussianDensity::standard(2);
    const DaeModel dae = optimal_gaussian_dae();
    for (const auto& x : grid21()) {
        const Point a = dae.score(x);
        const Point b = density.score(x);
        for (int d = 0; d < 2; ++d) EXPECT_NEAR(a[d], b[d] / (1.0 + kSigmaSq), 1e-12);
    }
}

TEST(DaeScore, LinearInResidual) {
    // Scaling the residual r(x) - x by c scales the score by c.
    const double c = 3.0;
    const DaeModel base(affine_mlp(2, 0.8, 0.1), kSigmaSq);
    Layer scaled(2, 2, Activation::identity);
    for (int i = 0; i < 2; ++i) {
        scaled.w(i, i) = 1.0 + c * (0.8 - 1.0);
        scaled.bias[i] = c * 0.1;
    }
    const DaeModel tripled(Mlp({scaled}), kSigmaSq);
    for (const auto& x : grid21()) {
        const Point a = base.score(x), b = tripled.score(x);
        for (int d = 0; d < 2; ++d) EXPECT_NEAR(b[d], c * a[d], 1e-12);
    }
}

TEST(DaeScore, DimensionMismatch) {
    EXPECT_THROW(dae_score(optimal_gaussian_dae(), Point{1.0}), DimensionError);
    Rng rng(2);
    EXPECT_THROW(DaeModel(Mlp::make({2, 3}, Activation::tanh, Activation::identity, rng), 0.1), DimensionError);
    EXPECT_THROW(DaeModel(affine_mlp(2, 1.0), 0.0), DataError);
}

TEST(TrainDae, ZeroEpochsReturnsInitialization) {
    const std::vector<Point> data{{0.0, 0.0}, {1.0, 1.0}};
    Rng a(5), b(5);
    const DaeModel dae = train_dae(data, {.sigma_sq = kSigmaSq, .epochs = 0}, a);
    const Mlp init = Mlp::make({2, 64, 2}, Activation::tanh, Activation::identity, b);
    EXPECT_EQ(dae.body, init);
    EXPECT_EQ(dae.sigma_sq, kSigmaSq);
}

TEST(TrainDae, DeterministicUnderSeed) {
    Rng data_rng(6);
    std::vector<Point> data;
    for (int i = 0; i < 300; ++i) data.push_back(data_rng.normal(2));
    Rng a(7), b(7);
    const DaeModel m1 = train_dae(data, {.epochs = 5}, a);
    const DaeModel m2 = train_dae(data, {.epochs = 5}, b);
    EXPECT_EQ(to_json(m1).dump(), to_json(m2).dump());
}

TEST(TrainDae, Errors) {
    Rng rng(1);
    EXPECT_THROW(train_dae({}, {}, rng), DataError);
    EXPECT_THROW(train_dae({{0.0, 0.0}}, {.sigma_sq = 0.0}, rng), DataError);
    EXPECT_THROW(train_dae({{0.0, 0.0}}, {.sigma_sq = -1.0}, rng), DataError);
}

TEST(TrainDae, LearnsOptimalGaussianDenoiser) {
    const DaeModel& dae = trained_gaussian_dae();
    double err = 0.0;
    const auto grid = grid21();
    for (const auto& x : grid) {
        const Point r = dae.body.forward(x);
        err += std::hypot(r[0] - x[0] / (1.0 + kSigmaSq), r[1] - x[1] / (1.0 + kSigmaSq));
    }
    EXPECT_LT(err / grid.size(), 0.05);
}

TEST(TrainDae, ScoreDirectionMatchesAnalyticScore) {
    const DaeModel& dae = trained_gaussian_dae();
    std::vector<double> angles;
    for (const auto& x : grid21()) {
        if (x[0] == 0.0 && x[1] == 0.0) continue;
        angles.push_back(angle_degrees(dae.score(x), Point{-x[0], -x[1]}));
    }
    std::nth_element(angles.begin(), angles.begin() + angles.size() / 2, angles.end());
    EXPECT_LT(angles[angles.size() / 2], 15.0);
}

TEST(DaeCheckpoint, RoundTripKeepsSigmaAndForward) {
    const DaeModel& dae = trained_gaussian_dae();
    const DaeModel back = dae_from_json(json::parse(to_json(dae).dump()));
    EXPECT_EQ(back, dae);
    EXPECT_THROW(dae_from_json(to_json(dae.body)), DataError);
}

TEST(GaussianScore, Examples) {
    const auto std2 = GaussianDensity::standard(2);
    EXPECT_EQ(gaussian_score(std2, Point{0.0, 0.0}), (Point{0.0, 0.0}));
    EXPECT_EQ(gaussian_score(std2, Point{1.0, -2.0}), (Point{-1.0, 2.0}));
    const auto diag = GaussianDensity::diagonal({0.0, 0.0}, {4.0, 1.0});
    const Point s = gaussian_score(diag, Point{2.0, 1.0});
    EXPECT_DOUBLE_EQ(s[0], -0.5);
    EXPECT_DOUBLE_EQ(s[1], -1.0);
}

TEST(GaussianScore, FullCovariance) {
    // Sigma = [[2, 1], [1, 2]], Sigma^-1 = [[2, -1], [-1, 2]] / 3.
    const GaussianDensity g({1.0, 0.0}, {2.0, 1.0, 1.0, 2.0});
    const Point s = g.score(Point{2.0, 1.0});
    EXPECT_NEAR(s[0], -(2.0 * 1.0 - 1.0 * 1.0) / 3.0, 1e-15);
    EXPECT_NEAR(s[1], -(-1.0 * 1.0 + 2.0 * 1.0) / 3.0, 1e-15);
}

TEST(GaussianScore, Errors) {
    EXPECT_THROW(GaussianDensity::diagonal({0.0, 0.0}, {1.0, 0.0}), DataError);
    EXPECT_THROW(GaussianDensity({0.0, 0.0}, {1.0, 2.0, 2.0, 1.0}), DataError);
    EXPECT_THROW(gaussian_score(GaussianDensity::standard(2), Point{1.0}), DimensionError);
}

TEST(CycleScore, PerfectCycleIsZero) {
    const Mlp id = affine_mlp(2, 1.0);
    EXPECT_EQ(cycle_score(id, id, {2.0}, Point{0.3, 0.7}), (Point{0.0, 0.0}));
}

TEST(CycleScore, ScalesResidualByGamma) {
    // F(G(x)) - x = (0.1, -0.1) with G = identity and F = x + (0.1, -0.1).
    Layer shift(2, 2, Activation::identity);
    shift.w(0, 0) = shift.w(1, 1) = 1.0;
    shift.bias = {0.1, -0.1};
    const Mlp f({shift});
    const Point s = cycle_score(affine_mlp(2, 1.0), f, {2.0}, Point{0.5, 0.5});
    EXPECT_NEAR(s[0], 0.2, 1e-15);
    EXPECT_NEAR(s[1], -0.2, 1e-15);
}

TEST(CycleScore, Errors) {
    Rng rng(3);
    const Mlp g = Mlp::make({2, 3}, Activation::relu, Activation::identity, rng);
    const Mlp f = Mlp::make({2, 2}, Activation::relu, Activation::identity, rng);
    EXPECT_THROW(cycle_score(g, f, {1.0}, Point{0.0, 0.0}), DimensionError);
    EXPECT_THROW(cycle_score(f, f, {0.0}, Point{0.0, 0.0}), DataError);
}

TEST(ScoreProviders, ShareOneInterface) {
    static_assert(ScoreProvider<DaeModel>);
    static_assert(ScoreProvider<GaussianDensity>);
    static_assert(ScoreProvider<CycleScore>);
    static_assert(ScoreProvider<AnyScore>);
    const Mlp id = affine_mlp(2, 1.0);
    const std::vector<AnyScore> providers{optimal_gaussian_dae(), GaussianDensity::standard(2),
                                          CycleScore(id, id, {1.0})};
    for (const auto& p : providers) EXPECT_EQ(p(Point{0.0, 0.0}).size(), 2u);
}
