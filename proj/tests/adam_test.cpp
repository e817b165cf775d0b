#include <gtest/gtest.h>

#include <limits>

#include "lcool/adam.hpp"

using namespace lcool;

namespace {

Mlp scalar_model(double w, double b) {
    Layer layer(1, 1, Activation::identity);
    layer.weight = {w};
    layer.bias = {b};
    return Mlp({layer});
}

} // namespace

TEST(Adam, ZeroGradientsLeaveParametersUnchanged) {
    Rng rng(1);
    Mlp m = Mlp::make({2, 8, 2}, Activation::tanh, Activation::identity, rng);
    const Mlp before = m;
    Adam adam(m);
    adam.step(m, m.zero_gradients());
    EXPECT_EQ(m, before);
    EXPECT_EQ(adam.steps(), 1u);
}

TEST(Adam, ConvexScalarDescent) {
    // f(w) = w^2 / 2 from w = 1; the gradient equals w.
    Mlp m = scalar_model(1.0, 0.0);
    Adam adam(m, {.learning_rate = 0.01});
    double prev = m.layers()[0].weight[0];
    for (int i = 0; i < 50; ++i) {
        Gradients g = m.zero_gradients();
        g.weight[0][0] = m.layers()[0].weight[0];
        adam.step(m, g);
        const double w = m.layers()[0].weight[0];
        EXPECT_LT(w, prev);
        prev = w;
    }
}

TEST(Adam, LeastSquaresConverges) {
    // Fit y = 3x - 1 on x in {-1, 0, 1, 2} with a single affine unit.
    const std::vector<double> xs{-1.0, 0.0, 1.0, 2.0};
    Mlp m = scalar_model(0.0, 0.0);
    Adam adam(m, {.learning_rate = 0.1});
    auto loss = [&] {
        double s = 0.0;
        for (double x : xs) {
            const double r = m.forward(Point{x})[0] - (3.0 * x - 1.0);
            s += r * r / xs.size();
        }
        return s;
    };
    for (int step = 0; step < 200; ++step) {
        Gradients acc = m.zero_gradients();
        for (double x : xs) {
            const double r = m.forward(Point{x})[0] - (3.0 * x - 1.0);
            acc.add(m.backward(Point{x}, Point{2.0 * r / xs.size()}).params);
        }
        adam.step(m, acc);
    }
    EXPECT_LT(loss(), 1e-6);
}

TEST(Adam, RejectsNonFiniteGradient) {
    Mlp m = scalar_model(1.0, 0.0);
    const Mlp before = m;
    Adam adam(m);
    Gradients g = m.zero_gradients();
    g.bias[0][0] = std::numeric_limits<double>::quiet_NaN();
    EXPECT_THROW(adam.step(m, g), DivergenceError);
    EXPECT_EQ(m, before);
    EXPECT_EQ(adam.steps(), 0u);
}

TEST(Adam, RejectsStepProducingNonFiniteParameters) {
    Mlp m = scalar_model(std::numeric_limits<double>::max(), 0.0);
    Adam adam(m, {.learning_rate = std::numeric_limits<double>::max()});
    Gradients g = m.zero_gradients();
    g.weight[0][0] = -1.0;
    EXPECT_THROW(adam.step(m, g), DivergenceError);
    EXPECT_EQ(m.layers()[0].weight[0], std::numeric_limits<double>::max());
}

TEST(Adam, ShapeMismatch) {
    Rng rng(2);
    Mlp a = Mlp::make({2, 3, 2}, Activation::relu, Activation::identity, rng);
    Mlp b = Mlp::make({2, 4, 2}, Activation::relu, Activation::identity, rng);
    Adam adam(a);
    EXPECT_THROW(adam.step(a, b.zero_gradients()), DimensionError);
}
