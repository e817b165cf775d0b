#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "lcool/adam.hpp"
#include "lcool/checkpoint.hpp"
#include "lcool/error.hpp"
#include "lcool/langevin.hpp"
#include "lcool/mlp.hpp"
#include "lcool/rng.hpp"
#include "lcool/score.hpp"
#include "lcool/toy_data.hpp"

namespace lcool {

/// Generators G (source -> target), F (target -> source) and one
/// discriminator per domain.
struct ToyCycleGan {
    Mlp g;
    Mlp f;
    Mlp d_source;
    Mlp d_target;
    double lambda_cycle = 10.0;

    void validate() const {
        if (g.input_dim() != 2 || g.output_dim() != 2 || f.input_dim() != 2 || f.output_dim() != 2)
            throw DimensionError("toy generators must map R^2 to R^2");
        if (d_source.input_dim() != 2 || d_source.output_dim() != 1 || d_target.input_dim() != 2 ||
            d_target.output_dim() != 1)
            throw DimensionError("toy discriminators must map R^2 to R^1");
        if (d_source.layers().back().activation != Activation::sigmoid ||
            d_target.layers().back().activation != Activation::sigmoid)
            throw DataError("discriminators need a sigmoid output");
        if (!(lambda_cycle > 0.0)) throw DataError("lambda_cycle must be positive");
    }

    bool operator==(const ToyCycleGan&) const = default;
};

struct CycleGanTrainOptions {
    std::size_t steps = 5000;
    double learning_rate = 2e-4;
    double lambda_cycle = 10.0;
    std::size_t batch_size = 64;
    std::size_t hidden = 64;
};

inline ToyCycleGan init_cyclegan(const CycleGanTrainOptions& opt, Rng& rng) {
    ToyCycleGan m;
    m.g = Mlp::make({2, opt.hidden, 2}, Activation::relu, Activation::identity, rng);
    m.f = Mlp::make({2, opt.hidden, 2}, Activation::relu, Activation::identity, rng);
    m.d_source = Mlp::make({2, opt.hidden, 1}, Activation::relu, Activation::sigmoid, rng);
    m.d_target = Mlp::make({2, opt.hidden, 1}, Activation::relu, Activation::sigmoid, rng);
    m.lambda_cycle = opt.lambda_cycle;
    m.validate();
    return m;
}

/// Losses of the most recent training step.
struct CycleGanLosses {
    double d_source = 0.0;
    double d_target = 0.0;
    double g_adversarial = 0.0;
    double cycle = 0.0;
};

namespace detail {

inline constexpr double kProbClamp = 1e-12;

inline double clamp_prob(double p) { return std::clamp(p, kProbClamp, 1.0 - kProbClamp); }

// Adds the gradients of BCE(D(x), label) / batch to `acc`, returns the loss term.
inline double bce_accumulate(const Mlp& d, const Point& x, double label, double inv_batch, Gradients& acc) {
    const double p = clamp_prob(d.forward(x)[0]);
    const double loss = -(label * std::log(p) + (1.0 - label) * std::log(1.0 - p));
    const double dl_dp = (-label / p + (1.0 - label) / (1.0 - p)) * inv_batch;
    acc.add(d.backward(x, Point{dl_dp}).params);
    return loss * inv_batch;
}

inline void check_loss(double v, const char* what, std::size_t step) {
    if (!std::isfinite(v)) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "non-finite %s loss at training step %zu", what, step);
        throw DivergenceError(buf);
    }
}

} // namespace detail

/// Alternating updates at a 1:1 ratio. Discriminators minimize binary
/// cross-entropy; generators minimize -log D(fake) plus
/// lambda * (||F(G(x)) - x||^2 + ||G(F(x')) - x'||^2).
inline ToyCycleGan train_cyclegan_toy(const Dataset& source, const Dataset& target, const CycleGanTrainOptions& opt,
                                      Rng& rng, CycleGanLosses* last = nullptr) {
    if (source.empty() || target.empty()) throw DataError("CycleGAN training needs non-empty source and target sets");
    if (opt.batch_size == 0) throw DataError("batch size must be positive");
    ToyCycleGan m = init_cyclegan(opt, rng);
    const AdamOptions adam_opt{.learning_rate = opt.learning_rate};
    Adam adam_g(m.g, adam_opt), adam_f(m.f, adam_opt), adam_ds(m.d_source, adam_opt), adam_dt(m.d_target, adam_opt);
    const double inv_batch = 1.0 / static_cast<double>(opt.batch_size);
    const double lambda = m.lambda_cycle;

    std::vector<Point> xs(opt.batch_size), xt(opt.batch_size);
    for (std::size_t step = 0; step < opt.steps; ++step) {
        for (std::size_t b = 0; b < opt.batch_size; ++b) {
            xs[b] = source.points[rng.index(source.size())];
            xt[b] = target.points[rng.index(target.size())];
        }

        // Discriminators.
        CycleGanLosses losses;
        Gradients gds = m.d_source.zero_gradients();
        Gradients gdt = m.d_target.zero_gradients();
        for (std::size_t b = 0; b < opt.batch_size; ++b) {
            losses.d_target += detail::bce_accumulate(m.d_target, xt[b], 1.0, inv_batch, gdt);
            losses.d_target += detail::bce_accumulate(m.d_target, m.g.forward(xs[b]), 0.0, inv_batch, gdt);
            losses.d_source += detail::bce_accumulate(m.d_source, xs[b], 1.0, inv_batch, gds);
            losses.d_source += detail::bce_accumulate(m.d_source, m.f.forward(xt[b]), 0.0, inv_batch, gds);
        }
        detail::check_loss(losses.d_source, "source discriminator", step);
        detail::check_loss(losses.d_target, "target discriminator", step);
        adam_ds.step(m.d_source, gds);
        adam_dt.step(m.d_target, gdt);

        // Generators.
        Gradients gg = m.g.zero_gradients();
        Gradients gf = m.f.zero_gradients();
        auto generator_pass = [&](const Mlp& fwd, const Mlp& back, const Mlp& disc, const Point& x, Gradients& g_fwd,
                                  Gradients& g_back) {
            const Point y = fwd.forward(x);
            const double p = detail::clamp_prob(disc.forward(y)[0]);
            losses.g_adversarial += -std::log(p) * inv_batch;
            Point dl_dy = disc.backward(y, Point{-inv_batch / p}).input;

            const Point z = back.forward(y);
            Point dl_dz(z.size());
            double sq = 0.0;
            for (std::size_t i = 0; i < z.size(); ++i) {
                const double r = z[i] - x[i];
                sq += r * r;
                dl_dz[i] = 2.0 * lambda * r * inv_batch;
            }
            losses.cycle += sq * inv_batch;
            Backprop through_back = back.backward(y, dl_dz);
            g_back.add(through_back.params);
            for (std::size_t i = 0; i < dl_dy.size(); ++i) dl_dy[i] += through_back.input[i];
            g_fwd.add(fwd.backward(x, dl_dy).params);
        };
        for (std::size_t b = 0; b < opt.batch_size; ++b) {
            generator_pass(m.g, m.f, m.d_target, xs[b], gg, gf);
            generator_pass(m.f, m.g, m.d_source, xt[b], gf, gg);
        }
        detail::check_loss(losses.g_adversarial, "generator adversarial", step);
        detail::check_loss(losses.cycle, "cycle-consistency", step);
        adam_g.step(m.g, gg);
        adam_f.step(m.f, gf);
        if (last) *last = losses;
    }
    return m;
}

/// Mean of ||F(G(x)) - x|| over the points.
inline double mean_cycle_error(const ToyCycleGan& m, const std::vector<Point>& points) {
    if (points.empty()) return 0.0;
    double sum = 0.0;
    for (const auto& x : points) {
        const Point z = m.f.forward(m.g.forward(x));
        Point d(z.size());
        for (std::size_t i = 0; i < z.size(); ++i) d[i] = z[i] - x[i];
        sum += norm2(d);
    }
    return sum / static_cast<double>(points.size());
}

/// Sum of squared cycle residuals in both directions over a batch.
inline double cycle_consistency_loss(const ToyCycleGan& m, const std::vector<Point>& source,
                                     const std::vector<Point>& target) {
    double loss = 0.0;
    auto add = [&](const Mlp& a, const Mlp& b, const Point& x) {
        const Point z = b.forward(a.forward(x));
        for (std::size_t i = 0; i < z.size(); ++i) loss += (z[i] - x[i]) * (z[i] - x[i]);
    };
    for (const auto& x : source) add(m.g, m.f, x);
    for (const auto& x : target) add(m.f, m.g, x);
    return loss;
}

inline Point translate(const ToyCycleGan& m, std::span<const double> x) { return m.g.forward(x); }

inline json to_json(const ToyCycleGan& m) {
    return {{"g", to_json(m.g)},
            {"f", to_json(m.f)},
            {"d_source", to_json(m.d_source)},
            {"d_target", to_json(m.d_target)},
            {"lambda_cycle", m.lambda_cycle}};
}

inline ToyCycleGan cyclegan_from_json(const json& doc) {
    try {
        ToyCycleGan m{mlp_from_json(doc.at("g")), mlp_from_json(doc.at("f")), mlp_from_json(doc.at("d_source")),
                      mlp_from_json(doc.at("d_target")), doc.at("lambda_cycle").get<double>()};
        m.validate();
        return m;
    } catch (const json::exception& e) {
        throw DataError(std::string("malformed CycleGAN checkpoint: ") + e.what());
    }
}

// ---------------------------------------------------------------------------
// Pipeline

struct PipelineResult {
    Point original;
    Point cooled; ///< equals `original` when the sample was not flagged
    bool fringe = false;
    double fringe_score = 0.0;
    Point y_baseline;
    Point y_cooled;
    Trail trail;
};

struct PipelineRun {
    std::vector<PipelineResult> results;
    double xi = 0.0;
    std::size_t n_flagged = 0;
};

/// Fringe scores every test sample, cools the flagged ones, translates all.
/// Sample i uses noise substream i of cfg.seed.
template <ScoreProvider S>
PipelineRun run_lcool_pipeline(const ToyCycleGan& model, const S& score, const FringeDetector& detector,
                               const CoolingConfig& cfg, const Dataset& tests) {
    cfg.validate();
    if (tests.empty()) throw DataError("pipeline needs at least one test sample");
    std::vector<double> scores;
    scores.reserve(tests.size());
    for (const auto& x : tests.points) {
        if (x.size() != model.g.input_dim()) throw DimensionError("test point dimension does not match G");
        scores.push_back(fringe_score(score, x));
    }
    const FringeDecision decision = detect_fringe(scores, detector);

    PipelineRun run;
    run.xi = decision.xi;
    run.n_flagged = decision.count;
    for (std::size_t i = 0; i < tests.size(); ++i) {
        PipelineResult r;
        r.original = tests.points[i];
        r.fringe = decision.flagged[i];
        r.fringe_score = scores[i];
        if (r.fringe) {
            r.trail = cool(r.original, score, cfg, i);
        } else {
            r.trail.points = {r.original};
            r.trail.config = cfg;
        }
        r.cooled = r.trail.end();
        r.y_baseline = translate(model, r.original);
        r.y_cooled = translate(model, r.cooled);
        run.results.push_back(std::move(r));
    }
    return run;
}

/// Same pipeline with gamma * (F(G(x)) - x) as the score.
inline PipelineRun run_lcool_cycle_pipeline(const ToyCycleGan& model, const CycleScoreConfig& cycle_cfg,
                                            const FringeDetector& detector, const CoolingConfig& cfg,
                                            const Dataset& tests) {
    const CycleScore score(model.g, model.f, cycle_cfg);
    return run_lcool_pipeline(model, score, detector, cfg, tests);
}

inline std::string pipeline_to_csv(const PipelineRun& run) {
    std::string out =
        "sample_id,fringe_flag,x1,x2,xc1,xc2,yb1,yb2,yc1,yc2,src_residual_before,src_residual_after,"
        "tgt_residual_baseline,tgt_residual_cooled\n";
    for (std::size_t i = 0; i < run.results.size(); ++i) {
        const auto& r = run.results[i];
        out += std::to_string(i) + ',' + (r.fringe ? "1" : "0");
        for (const Point* p : {&r.original, &r.cooled, &r.y_baseline, &r.y_cooled})
            out += ',' + format_double(p->at(0)) + ',' + format_double(p->at(1));
        out += ',' + format_double(source_manifold.residual(r.original));
        out += ',' + format_double(source_manifold.residual(r.cooled));
        out += ',' + format_double(target_manifold.residual(r.y_baseline));
        out += ',' + format_double(target_manifold.residual(r.y_cooled));
        out += '\n';
    }
    return out;
}

inline std::vector<Trail> pipeline_trails(const PipelineRun& run) {
    std::vector<Trail> out;
    for (const auto& r : run.results) out.push_back(r.trail);
    return out;
}

} // namespace lcool
