#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include "lcool/error.hpp"
#include "lcool/mlp.hpp"

namespace lcool {

struct AdamOptions {
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

/// Moment accumulators for one model.
class Adam {
public:
    Adam(const Mlp& model, AdamOptions options = {})
        : options_(options), m_(model.zero_gradients()), v_(model.zero_gradients()) {
        if (!(options.learning_rate > 0.0)) throw DataError("Adam learning rate must be positive");
    }

    const AdamOptions& options() const { return options_; }

    void set_learning_rate(double lr) {
        if (!(lr > 0.0)) throw DataError("Adam learning rate must be positive");
        options_.learning_rate = lr;
    }
    std::uint64_t steps() const { return step_; }
    const Gradients& first_moment() const { return m_; }
    const Gradients& second_moment() const { return v_; }

    /// Applies one update in place. The model is left untouched if the
    /// gradients or the resulting parameters are non-finite.
    void step(Mlp& model, const Gradients& grads) {
        auto& layers = model.layers();
        if (grads.weight.size() != layers.size() || grads.bias.size() != layers.size())
            throw DimensionError("gradient layer count does not match the model");
        for (std::size_t k = 0; k < layers.size(); ++k)
            if (grads.weight[k].size() != layers[k].weight.size() || grads.bias[k].size() != layers[k].bias.size())
                throw DimensionError("gradient shape mismatch at layer " + std::to_string(k));
        if (!grads.all_finite()) throw DivergenceError("non-finite gradient passed to Adam");

        Gradients m = m_;
        Gradients v = v_;
        Mlp updated = model;
        const std::uint64_t t = step_ + 1;
        const double c1 = 1.0 - std::pow(options_.beta1, static_cast<double>(t));
        const double c2 = 1.0 - std::pow(options_.beta2, static_cast<double>(t));
        auto apply = [&](std::vector<double>& param, const std::vector<double>& g, std::vector<double>& mk,
                         std::vector<double>& vk) {
            for (std::size_t i = 0; i < param.size(); ++i) {
                mk[i] = options_.beta1 * mk[i] + (1.0 - options_.beta1) * g[i];
                vk[i] = options_.beta2 * vk[i] + (1.0 - options_.beta2) * g[i] * g[i];
                const double mhat = mk[i] / c1;
                const double vhat = vk[i] / c2;
                param[i] -= options_.learning_rate * mhat / (std::sqrt(vhat) + options_.epsilon);
            }
        };
        auto& ul = updated.layers();
        for (std::size_t k = 0; k < ul.size(); ++k) {
            apply(ul[k].weight, grads.weight[k], m.weight[k], v.weight[k]);
            apply(ul[k].bias, grads.bias[k], m.bias[k], v.bias[k]);
        }
        if (!updated.all_finite()) throw DivergenceError("Adam step produced non-finite parameters");

        model = std::move(updated);
        m_ = std::move(m);
        v_ = std::move(v);
        step_ = t;
    }

private:
    AdamOptions options_;
    Gradients m_;
    Gradients v_;
    std::uint64_t step_ = 0;
};

} // namespace lcool
