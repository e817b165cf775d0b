#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lcool/error.hpp"
#include "lcool/rng.hpp"

namespace lcool {

/// A sample in L-dimensional Euclidean space.
using Point = std::vector<double>;

enum class Activation { relu, tanh, sigmoid, identity };

inline std::string_view to_string(Activation a) {
    switch (a) {
    case Activation::relu: return "relu";
    case Activation::tanh: return "tanh";
    case Activation::sigmoid: return "sigmoid";
    case Activation::identity: return "identity";
    }
    return "identity";
}

inline Activation activation_from_string(std::string_view name) {
    if (name == "relu") return Activation::relu;
    if (name == "tanh") return Activation::tanh;
    if (name == "sigmoid") return Activation::sigmoid;
    if (name == "identity") return Activation::identity;
    throw DataError("unknown activation '" + std::string(name) + "'");
}

namespace detail {

inline double activate(Activation a, double z) {
    switch (a) {
    case Activation::relu: return z > 0.0 ? z : 0.0;
    case Activation::tanh: return std::tanh(z);
    case Activation::sigmoid: return 1.0 / (1.0 + std::exp(-z));
    case Activation::identity: return z;
    }
    return z;
}

// Derivative expressed through the pre-activation z and the output y.
inline double activate_deriv(Activation a, double z, double y) {
    switch (a) {
    case Activation::relu: return z > 0.0 ? 1.0 : 0.0;
    case Activation::tanh: return 1.0 - y * y;
    case Activation::sigmoid: return y * (1.0 - y);
    case Activation::identity: return 1.0;
    }
    return 1.0;
}

} // namespace detail

/// Fully connected layer y = act(W x + b); W is row-major [out x in].
struct Layer {
    std::size_t in = 0;
    std::size_t out = 0;
    std::vector<double> weight;
    std::vector<double> bias;
    Activation activation = Activation::identity;

    Layer() = default;
    Layer(std::size_t in_dim, std::size_t out_dim, Activation act)
        : in(in_dim), out(out_dim), weight(in_dim * out_dim, 0.0), bias(out_dim, 0.0), activation(act) {}

    double& w(std::size_t row, std::size_t col) { return weight[row * in + col]; }
    double w(std::size_t row, std::size_t col) const { return weight[row * in + col]; }

    bool operator==(const Layer&) const = default;
};

/// Gradient storage with the same shapes as an Mlp's parameters.
struct Gradients {
    std::vector<std::vector<double>> weight;
    std::vector<std::vector<double>> bias;

    void scale(double c) {
        for (auto& w : weight)
            for (auto& v : w) v *= c;
        for (auto& b : bias)
            for (auto& v : b) v *= c;
    }

    void add(const Gradients& other) {
        for (std::size_t k = 0; k < weight.size(); ++k) {
            for (std::size_t i = 0; i < weight[k].size(); ++i) weight[k][i] += other.weight[k][i];
            for (std::size_t i = 0; i < bias[k].size(); ++i) bias[k][i] += other.bias[k][i];
        }
    }

    bool all_finite() const {
        for (const auto& w : weight)
            for (double v : w)
                if (!std::isfinite(v)) return false;
        for (const auto& b : bias)
            for (double v : b)
                if (!std::isfinite(v)) return false;
        return true;
    }
};

/// Result of one backpropagation pass.
struct Backprop {
    Gradients params;
    Point input; ///< d loss / d x
};

/// Small feed-forward network with exact backpropagation.
class Mlp {
public:
    Mlp() = default;

    explicit Mlp(std::vector<Layer> layers) : layers_(std::move(layers)) { validate(); }

    /// Builds a network with the given layer widths, e.g. {2, 64, 2}.
    /// Hidden layers use `hidden`, the last layer uses `output`. Weights are
    /// Glorot-uniform, biases zero.
    static Mlp make(std::span<const std::size_t> widths, Activation hidden, Activation output, Rng& rng) {
        if (widths.size() < 2) throw DataError("an Mlp needs at least an input and an output width");
        std::vector<Layer> layers;
        for (std::size_t k = 0; k + 1 < widths.size(); ++k) {
            const bool last = k + 2 == widths.size();
            Layer layer(widths[k], widths[k + 1], last ? output : hidden);
            const double limit = std::sqrt(6.0 / static_cast<double>(layer.in + layer.out));
            for (auto& v : layer.weight) v = rng.uniform(-limit, limit);
            layers.push_back(std::move(layer));
        }
        return Mlp(std::move(layers));
    }

    static Mlp make(std::initializer_list<std::size_t> widths, Activation hidden, Activation output, Rng& rng) {
        const std::vector<std::size_t> w(widths);
        return make(std::span<const std::size_t>(w), hidden, output, rng);
    }

    std::size_t input_dim() const { return layers_.empty() ? 0 : layers_.front().in; }
    std::size_t output_dim() const { return layers_.empty() ? 0 : layers_.back().out; }
    const std::vector<Layer>& layers() const { return layers_; }
    std::vector<Layer>& layers() { return layers_; }

    Point forward(std::span<const double> x) const {
        check_input(x);
        Point cur(x.begin(), x.end());
        Point next;
        for (const auto& layer : layers_) {
            next.assign(layer.out, 0.0);
            for (std::size_t r = 0; r < layer.out; ++r) {
                double z = layer.bias[r];
                for (std::size_t c = 0; c < layer.in; ++c) z += layer.w(r, c) * cur[c];
                next[r] = detail::activate(layer.activation, z);
            }
            cur.swap(next);
        }
        return cur;
    }

    /// Gradients of a scalar loss given d loss / d output at `x`.
    Backprop backward(std::span<const double> x, std::span<const double> loss_grad) const {
        check_input(x);
        if (loss_grad.size() != output_dim())
            throw DimensionError("loss gradient has dimension " + std::to_string(loss_grad.size()) +
                                 ", network output is " + std::to_string(output_dim()));

        // Forward pass keeping pre-activations and outputs of every layer.
        std::vector<Point> outs(layers_.size() + 1);
        std::vector<Point> pre(layers_.size());
        outs[0].assign(x.begin(), x.end());
        for (std::size_t k = 0; k < layers_.size(); ++k) {
            const auto& layer = layers_[k];
            pre[k].assign(layer.out, 0.0);
            outs[k + 1].assign(layer.out, 0.0);
            for (std::size_t r = 0; r < layer.out; ++r) {
                double z = layer.bias[r];
                for (std::size_t c = 0; c < layer.in; ++c) z += layer.w(r, c) * outs[k][c];
                pre[k][r] = z;
                outs[k + 1][r] = detail::activate(layer.activation, z);
            }
        }

        Backprop result;
        result.params = zero_gradients();
        Point delta(loss_grad.begin(), loss_grad.end());
        for (std::size_t k = layers_.size(); k-- > 0;) {
            const auto& layer = layers_[k];
            for (std::size_t r = 0; r < layer.out; ++r)
                delta[r] *= detail::activate_deriv(layer.activation, pre[k][r], outs[k + 1][r]);
            auto& gw = result.params.weight[k];
            auto& gb = result.params.bias[k];
            Point prev(layer.in, 0.0);
            for (std::size_t r = 0; r < layer.out; ++r) {
                gb[r] = delta[r];
                for (std::size_t c = 0; c < layer.in; ++c) {
                    gw[r * layer.in + c] = delta[r] * outs[k][c];
                    prev[c] += layer.w(r, c) * delta[r];
                }
            }
            delta.swap(prev);
        }
        result.input = std::move(delta);
        return result;
    }

    Gradients zero_gradients() const {
        Gradients g;
        for (const auto& layer : layers_) {
            g.weight.emplace_back(layer.weight.size(), 0.0);
            g.bias.emplace_back(layer.bias.size(), 0.0);
        }
        return g;
    }

    bool all_finite() const {
        for (const auto& layer : layers_) {
            for (double v : layer.weight)
                if (!std::isfinite(v)) return false;
            for (double v : layer.bias)
                if (!std::isfinite(v)) return false;
        }
        return true;
    }

    bool operator==(const Mlp&) const = default;

private:
    void validate() const {
        if (layers_.empty()) throw DataError("an Mlp needs at least one layer");
        for (std::size_t k = 0; k < layers_.size(); ++k) {
            const auto& layer = layers_[k];
            if (layer.in == 0 || layer.out == 0)
                throw DimensionError("layer " + std::to_string(k) + " has a zero dimension");
            if (layer.weight.size() != layer.in * layer.out || layer.bias.size() != layer.out)
                throw DimensionError("layer " + std::to_string(k) + " parameter sizes do not match its shape");
            if (k > 0 && layers_[k - 1].out != layer.in)
                throw DimensionError("layer " + std::to_string(k) + " input " + std::to_string(layer.in) +
                                     " does not chain with previous output " + std::to_string(layers_[k - 1].out));
        }
    }

    void check_input(std::span<const double> x) const {
        if (x.size() != input_dim())
            throw DimensionError("input has dimension " + std::to_string(x.size()) + ", network expects " +
                                 std::to_string(input_dim()));
    }

    std::vector<Layer> layers_;
};

/// Single identity-activation layer computing `scale * x + offset`.
inline Mlp affine_mlp(std::size_t dim, double scale, double offset = 0.0) {
    Layer layer(dim, dim, Activation::identity);
    for (std::size_t i = 0; i < dim; ++i) {
        layer.w(i, i) = scale;
        layer.bias[i] = offset;
    }
    return Mlp({layer});
}

} // namespace lcool
