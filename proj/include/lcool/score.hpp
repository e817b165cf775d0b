#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <functional>
#include <numbers>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "lcool/adam.hpp"
#include "lcool/checkpoint.hpp"
#include "lcool/error.hpp"
#include "lcool/mlp.hpp"
#include "lcool/rng.hpp"
#include "lcool/toy_data.hpp"

namespace lcool {

/// Anything that maps a point to an estimate of grad_x log p(x).
template <class S>
concept ScoreProvider = requires(const S& s, const Point& x) {
    { s(x) } -> std::convertible_to<Point>;
};

/// Type-erased score provider for runtime selection.
using AnyScore = std::function<Point(const Point&)>;

inline double norm2(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

/// Angle between two vectors in degrees; 0 if either is zero.
inline double angle_degrees(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw DimensionError("angle between vectors of different dimension");
    const double na = norm2(a), nb = norm2(b);
    if (na == 0.0 || nb == 0.0) return 0.0;
    double dot = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) dot += a[i] * b[i];
    const double c = std::clamp(dot / (na * nb), -1.0, 1.0);
    return std::acos(c) * 180.0 / std::numbers::pi;
}

// ---------------------------------------------------------------------------
// Denoising autoencoder

/// Reconstruction network r plus the noise variance it was trained with.
struct DaeModel {
    Mlp body;
    double sigma_sq = 0.09;

    DaeModel() = default;
    DaeModel(Mlp b, double s) : body(std::move(b)), sigma_sq(s) { validate(); }

    void validate() const {
        if (!(sigma_sq > 0.0)) throw DataError("DAE sigma_sq must be positive");
        if (body.input_dim() != body.output_dim())
            throw DimensionError("DAE body must map R^L to R^L");
    }

    std::size_t dim() const { return body.input_dim(); }

    /// (r(x) - x) / sigma^2
    Point score(std::span<const double> x) const {
        Point r = body.forward(x);
        for (std::size_t i = 0; i < r.size(); ++i) r[i] = (r[i] - x[i]) / sigma_sq;
        return r;
    }

    Point operator()(const Point& x) const { return score(x); }

    bool operator==(const DaeModel&) const = default;
};

inline Point dae_score(const DaeModel& model, std::span<const double> x) { return model.score(x); }

struct DaeTrainOptions {
    double sigma_sq = 0.09;
    std::size_t epochs = 200;
    double learning_rate = 1e-3;
    /// Learning rate decays geometrically to this value over the epochs.
    double final_learning_rate = 1e-5;
    std::size_t batch_size = 64;
    std::size_t hidden = 64;
};

/// Minimizes E ||r(x + e) - x||^2 with e ~ N(0, sigma^2 I) redrawn for every
/// sample in every epoch. Initialization and shuffling consume `rng`.
inline DaeModel train_dae(const std::vector<Point>& data, const DaeTrainOptions& opt, Rng& rng) {
    if (data.empty()) throw DataError("cannot train a DAE on an empty dataset");
    if (!(opt.sigma_sq > 0.0)) throw DataError("DAE sigma_sq must be positive");
    if (opt.batch_size == 0 || opt.hidden == 0) throw DataError("batch size and hidden width must be positive");
    if (!(opt.learning_rate > 0.0) || !(opt.final_learning_rate > 0.0))
        throw DataError("learning rates must be positive");
    const std::size_t dim = data.front().size();
    for (const auto& p : data)
        if (p.size() != dim) throw DimensionError("DAE training data has mixed dimensions");

    DaeModel model(Mlp::make({dim, opt.hidden, dim}, Activation::tanh, Activation::identity, rng), opt.sigma_sq);
    Adam adam(model.body, {.learning_rate = opt.learning_rate});
    const double sigma = std::sqrt(opt.sigma_sq);

    std::vector<std::size_t> order(data.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    Point noisy(dim), grad_out(dim);
    const double decay = opt.epochs > 1 ? std::pow(opt.final_learning_rate / opt.learning_rate,
                                                   1.0 / static_cast<double>(opt.epochs - 1))
                                        : 1.0;
    for (std::size_t epoch = 0; epoch < opt.epochs; ++epoch) {
        adam.set_learning_rate(opt.learning_rate * std::pow(decay, static_cast<double>(epoch)));
        for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.index(i)]);
        for (std::size_t start = 0; start < order.size(); start += opt.batch_size) {
            const std::size_t end = std::min(order.size(), start + opt.batch_size);
            const double inv_batch = 1.0 / static_cast<double>(end - start);
            Gradients acc = model.body.zero_gradients();
            for (std::size_t b = start; b < end; ++b) {
                const auto& x = data[order[b]];
                for (std::size_t d = 0; d < dim; ++d) noisy[d] = x[d] + sigma * rng.normal();
                const Point r = model.body.forward(noisy);
                for (std::size_t d = 0; d < dim; ++d) grad_out[d] = 2.0 * (r[d] - x[d]) * inv_batch;
                acc.add(model.body.backward(noisy, grad_out).params);
            }
            adam.step(model.body, acc);
        }
    }
    return model;
}

inline json to_json(const DaeModel& model) {
    json doc = to_json(model.body);
    doc["sigma_sq"] = model.sigma_sq;
    return doc;
}

inline DaeModel dae_from_json(const json& doc) {
    if (!doc.contains("sigma_sq")) throw DataError("DAE checkpoint is missing 'sigma_sq'");
    return DaeModel(mlp_from_json(doc), doc.at("sigma_sq").get<double>());
}

// ---------------------------------------------------------------------------
// Analytic Gaussian

/// N(mean, covariance) with a full symmetric positive-definite covariance.
class GaussianDensity {
public:
    GaussianDensity(Point mean, std::vector<double> covariance) : mean_(std::move(mean)), cov_(std::move(covariance)) {
        const std::size_t n = mean_.size();
        if (n == 0) throw DimensionError("Gaussian density needs a non-empty mean");
        if (cov_.size() != n * n) throw DimensionError("covariance must be an L x L matrix");
        for (std::size_t i = 0; i < n; ++i)
            if (!(cov_[i * n + i] > 0.0)) throw DataError("covariance diagonal entries must be positive");
        // Cholesky factor, lower triangular.
        chol_.assign(n * n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j <= i; ++j) {
                double s = cov_[i * n + j];
                for (std::size_t k = 0; k < j; ++k) s -= chol_[i * n + k] * chol_[j * n + k];
                if (i == j) {
                    if (!(s > 0.0)) throw DataError("covariance is not positive definite");
                    chol_[i * n + i] = std::sqrt(s);
                } else {
                    chol_[i * n + j] = s / chol_[j * n + j];
                }
            }
        }
        // Precision = (L L^T)^-1, column by column.
        precision_.assign(n * n, 0.0);
        for (std::size_t c = 0; c < n; ++c) {
            Point e(n, 0.0);
            e[c] = 1.0;
            const Point col = solve(e);
            for (std::size_t r = 0; r < n; ++r) precision_[r * n + c] = col[r];
        }
    }

    static GaussianDensity diagonal(Point mean, const std::vector<double>& variances) {
        const std::size_t n = mean.size();
        if (variances.size() != n) throw DimensionError("variance vector does not match the mean");
        std::vector<double> cov(n * n, 0.0);
        for (std::size_t i = 0; i < n; ++i) cov[i * n + i] = variances[i];
        return GaussianDensity(std::move(mean), std::move(cov));
    }

    static GaussianDensity standard(std::size_t dim) {
        return diagonal(Point(dim, 0.0), std::vector<double>(dim, 1.0));
    }

    std::size_t dim() const { return mean_.size(); }
    const Point& mean() const { return mean_; }
    double covariance(std::size_t i, std::size_t j) const { return cov_[i * dim() + j]; }

    /// -Sigma^-1 (x - mu)
    Point score(std::span<const double> x) const {
        const std::size_t n = dim();
        if (x.size() != n) throw DimensionError("point dimension does not match the Gaussian");
        Point out(n, 0.0);
        for (std::size_t r = 0; r < n; ++r) {
            double s = 0.0;
            for (std::size_t c = 0; c < n; ++c) s += precision_[r * n + c] * (x[c] - mean_[c]);
            out[r] = -s;
        }
        return out;
    }

    Point operator()(const Point& x) const { return score(x); }

    Point sample(Rng& rng) const {
        const std::size_t n = dim();
        const Point z = rng.normal(n);
        Point out = mean_;
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c <= r; ++c) out[r] += chol_[r * n + c] * z[c];
        return out;
    }

private:
    Point solve(const Point& b) const {
        const std::size_t n = dim();
        Point y(n);
        for (std::size_t i = 0; i < n; ++i) {
            double s = b[i];
            for (std::size_t k = 0; k < i; ++k) s -= chol_[i * n + k] * y[k];
            y[i] = s / chol_[i * n + i];
        }
        Point x(n);
        for (std::size_t i = n; i-- > 0;) {
            double s = y[i];
            for (std::size_t k = i + 1; k < n; ++k) s -= chol_[k * n + i] * x[k];
            x[i] = s / chol_[i * n + i];
        }
        return x;
    }

    Point mean_;
    std::vector<double> cov_;
    std::vector<double> chol_;
    std::vector<double> precision_;
};

inline Point gaussian_score(const GaussianDensity& density, std::span<const double> x) { return density.score(x); }

// ---------------------------------------------------------------------------
// Cycle structure

struct CycleScoreConfig {
    double gamma = 1.0 / 0.09;

    void validate() const {
        if (!(gamma > 0.0)) throw DataError("cycle score gamma must be positive");
    }
};

/// gamma * (F(G(x)) - x)
inline Point cycle_score(const Mlp& g, const Mlp& f, const CycleScoreConfig& cfg, std::span<const double> x) {
    cfg.validate();
    if (g.output_dim() != f.input_dim() || f.output_dim() != g.input_dim())
        throw DimensionError("cycle score needs G: R^a -> R^b and F: R^b -> R^a");
    Point r = f.forward(g.forward(x));
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = cfg.gamma * (r[i] - x[i]);
    return r;
}

/// Binds a generator pair into a score provider. Holds references; the
/// networks must outlive it.
class CycleScore {
public:
    CycleScore(const Mlp& g, const Mlp& f, CycleScoreConfig cfg) : g_(&g), f_(&f), cfg_(cfg) {
        cycle_score(g, f, cfg, Point(g.input_dim(), 0.0));
    }

    Point operator()(const Point& x) const { return cycle_score(*g_, *f_, cfg_, x); }

private:
    const Mlp* g_;
    const Mlp* f_;
    CycleScoreConfig cfg_;
};

} // namespace lcool
