#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "lcool/error.hpp"
#include "lcool/langevin.hpp"
#include "lcool/score.hpp"
#include "lcool/toy_data.hpp"
#include "lcool/translate.hpp"

namespace lcool {

// ---------------------------------------------------------------------------
// Tempered equilibrium check

struct TemperatureOptions {
    std::vector<double> betas{1.0, 4.0, 10.0};
    std::size_t chain_length = 100000;
    /// Independent chains pooled per beta.
    std::size_t chains = 16;
    double alpha = 0.005;
    double burn_in_fraction = 0.1;
    std::uint64_t seed = 0;
};

struct TemperatureRow {
    double beta = 0.0;
    double delta_sq = 0.0;
    bool heating = false; ///< delta^2 > 2 alpha, i.e. beta < 1
    Point mean;
    std::vector<double> variance;
    std::vector<double> expected_variance; ///< Sigma_ii / beta
    double max_relative_error = 0.0;        ///< over coordinates, |var / expected - 1|
};

struct TemperatureReport {
    std::vector<TemperatureRow> rows;
    double seconds = 0.0;
};

/// Runs rejection-free Langevin chains on a Gaussian with its analytic score
/// and compares the post-burn-in moments against N(mu, Sigma / beta).
inline TemperatureReport verify_temperature(const GaussianDensity& density, const TemperatureOptions& opt) {
    if (opt.betas.empty()) throw DataError("at least one beta is required");
    if (opt.chain_length < 10000) throw DataError("chain_length must be at least 10^4");
    if (opt.chains == 0) throw DataError("at least one chain is required");
    if (!(opt.alpha > 0.0)) throw DataError("alpha must be positive");
    if (!(opt.burn_in_fraction >= 0.0 && opt.burn_in_fraction < 1.0)) throw DataError("burn-in fraction must lie in [0, 1)");
    const auto t0 = std::chrono::steady_clock::now();
    const std::size_t dim = density.dim();
    const auto burn = static_cast<std::size_t>(std::floor(opt.burn_in_fraction * static_cast<double>(opt.chain_length)));

    TemperatureReport report;
    for (std::size_t b = 0; b < opt.betas.size(); ++b) {
        const double beta = opt.betas[b];
        if (!(beta > 0.0)) throw DataError("beta values must be positive");
        TemperatureRow row;
        row.beta = beta;
        row.delta_sq = 2.0 * opt.alpha / beta;
        row.heating = row.delta_sq > 2.0 * opt.alpha;
        std::vector<double> sum(dim, 0.0), sum_sq(dim, 0.0);
        std::size_t count = 0;
        const Rng beta_rng = Rng(opt.seed).substream(b);
        for (std::size_t c = 0; c < opt.chains; ++c) {
            Rng rng = beta_rng.substream(c);
            Point x = density.mean();
            for (std::size_t k = 0; k < opt.chain_length; ++k) {
                x = mala_step(x, density, opt.alpha, row.delta_sq, rng);
                if (k < burn) continue;
                for (std::size_t d = 0; d < dim; ++d) {
                    sum[d] += x[d];
                    sum_sq[d] += x[d] * x[d];
                }
                ++count;
            }
        }
        const double n = static_cast<double>(count);
        for (std::size_t d = 0; d < dim; ++d) {
            const double m = sum[d] / n;
            row.mean.push_back(m);
            row.variance.push_back(sum_sq[d] / n - m * m);
            row.expected_variance.push_back(density.covariance(d, d) / beta);
            row.max_relative_error =
                std::max(row.max_relative_error, std::abs(row.variance.back() / row.expected_variance.back() - 1.0));
        }
        report.rows.push_back(std::move(row));
    }
    report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

inline std::string temperature_to_csv(const TemperatureReport& report) {
    std::string out = "beta,delta_sq,heating,coordinate,mean,variance,expected_variance,relative_error\n";
    for (const auto& row : report.rows) {
        for (std::size_t d = 0; d < row.variance.size(); ++d) {
            out += format_double(row.beta) + ',' + format_double(row.delta_sq) + ',' + (row.heating ? "1" : "0") +
                   ',' + std::to_string(d) + ',' + format_double(row.mean[d]) + ',' + format_double(row.variance[d]) +
                   ',' + format_double(row.expected_variance[d]) + ',' +
                   format_double(row.variance[d] / row.expected_variance[d] - 1.0) + '\n';
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Hyperparameter sweep

struct SweepGrid {
    std::vector<double> alphas{0.001, 0.005, 0.01};
    std::vector<double> temperatures{0.0001, 0.001, 0.005, 0.01};
    std::vector<std::size_t> n_steps{20, 40, 60, 80, 100};

    std::size_t size() const { return alphas.size() * temperatures.size() * n_steps.size(); }

    void validate() const {
        if (alphas.empty() || temperatures.empty() || n_steps.empty()) throw DataError("sweep grid axes must be non-empty");
    }

    /// Cell `index` in alpha-major, then temperature, then N order.
    std::tuple<double, double, std::size_t> cell(std::size_t index) const {
        const std::size_t nn = n_steps.size(), nt = temperatures.size();
        return {alphas[index / (nt * nn)], temperatures[(index / nn) % nt], n_steps[index % nn]};
    }
};

/// Aggregates of one pipeline run.
struct MetricRow {
    std::size_t cell = 0;
    double alpha = 0.0;
    double temperature = 0.0;
    std::size_t n_steps = 0;
    std::size_t n_samples = 0;
    std::size_t n_flagged = 0;
    double fringe_proportion = 0.0;
    double src_before_mean = 0.0, src_before_median = 0.0;
    double src_after_mean = 0.0, src_after_median = 0.0;
    double tgt_baseline_mean = 0.0, tgt_baseline_median = 0.0;
    double tgt_cooled_mean = 0.0, tgt_cooled_median = 0.0;

    bool operator==(const MetricRow&) const = default;
};

inline MetricRow summarize_run(const PipelineRun& run, const CoolingConfig& cfg, std::size_t cell = 0) {
    std::vector<Point> before, after, yb, yc;
    for (const auto& r : run.results) {
        before.push_back(r.original);
        after.push_back(r.cooled);
        yb.push_back(r.y_baseline);
        yc.push_back(r.y_cooled);
    }
    const auto sb = manifold_residual(before, Domain::source), sa = manifold_residual(after, Domain::source);
    const auto tb = manifold_residual(yb, Domain::target), tc = manifold_residual(yc, Domain::target);
    MetricRow row;
    row.cell = cell;
    row.alpha = cfg.alpha;
    row.temperature = cfg.temperature;
    row.n_steps = cfg.n_steps;
    row.n_samples = run.results.size();
    row.n_flagged = run.n_flagged;
    row.fringe_proportion = run.results.empty() ? 0.0 : static_cast<double>(run.n_flagged) / static_cast<double>(run.results.size());
    row.src_before_mean = sb.mean;
    row.src_before_median = sb.median;
    row.src_after_mean = sa.mean;
    row.src_after_median = sa.median;
    row.tgt_baseline_mean = tb.mean;
    row.tgt_baseline_median = tb.median;
    row.tgt_cooled_mean = tc.mean;
    row.tgt_cooled_median = tc.median;
    return row;
}

struct SweepReport {
    std::vector<MetricRow> rows;
    std::size_t best = 0; ///< index into rows
    std::vector<double> cell_seconds;
};

/// Lowest mean cooled target residual; ties go to smaller N, then smaller alpha.
inline std::size_t select_best(const std::vector<MetricRow>& rows) {
    if (rows.empty()) throw DataError("cannot select from an empty report");
    std::size_t best = 0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& a = rows[i];
        const auto& b = rows[best];
        if (std::tie(a.tgt_cooled_mean, a.n_steps, a.alpha) < std::tie(b.tgt_cooled_mean, b.n_steps, b.alpha)) best = i;
    }
    return best;
}

/// Runs the pipeline on every grid cell with the same master seed.
template <ScoreProvider S>
SweepReport run_sweep(const SweepGrid& grid, const ToyCycleGan& model, const S& score, const FringeDetector& detector,
                      const Dataset& tests, std::uint64_t seed) {
    grid.validate();
    SweepReport report;
    for (std::size_t c = 0; c < grid.size(); ++c) {
        const auto t0 = std::chrono::steady_clock::now();
        const auto [alpha, temperature, n] = grid.cell(c);
        const CoolingConfig cfg{alpha, temperature, n, seed};
        const PipelineRun run = run_lcool_pipeline(model, score, detector, cfg, tests);
        report.rows.push_back(summarize_run(run, cfg, c));
        report.cell_seconds.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    }
    report.best = select_best(report.rows);
    return report;
}

inline constexpr const char* kMetricHeader =
    "cell,alpha,temperature,n_steps,n_samples,n_flagged,fringe_proportion,src_before_mean,src_before_median,"
    "src_after_mean,src_after_median,tgt_baseline_mean,tgt_baseline_median,tgt_cooled_mean,tgt_cooled_median";

inline std::string metrics_to_csv(const std::vector<MetricRow>& rows) {
    std::string out = std::string(kMetricHeader) + "\n";
    for (const auto& r : rows) {
        out += std::to_string(r.cell) + ',' + format_double(r.alpha) + ',' + format_double(r.temperature) + ',' +
               std::to_string(r.n_steps) + ',' + std::to_string(r.n_samples) + ',' + std::to_string(r.n_flagged);
        for (double v : {r.fringe_proportion, r.src_before_mean, r.src_before_median, r.src_after_mean,
                         r.src_after_median, r.tgt_baseline_mean, r.tgt_baseline_median, r.tgt_cooled_mean,
                         r.tgt_cooled_median})
            out += ',' + format_double(v);
        out += '\n';
    }
    return out;
}

inline std::vector<MetricRow> metrics_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != kMetricHeader) throw DataError("parse error: not a metric report");
    std::vector<MetricRow> rows;
    std::size_t row_no = 0;
    while (std::getline(in, line)) {
        ++row_no;
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) f.push_back(cell);
        if (f.size() != 15) throw DataError("row " + std::to_string(row_no) + " of the metric report has " +
                                            std::to_string(f.size()) + " columns, expected 15");
        auto num = [&](std::size_t i) { return parse_double(f[i], row_no); };
        MetricRow r;
        r.cell = static_cast<std::size_t>(num(0));
        r.alpha = num(1);
        r.temperature = num(2);
        r.n_steps = static_cast<std::size_t>(num(3));
        r.n_samples = static_cast<std::size_t>(num(4));
        r.n_flagged = static_cast<std::size_t>(num(5));
        r.fringe_proportion = num(6);
        r.src_before_mean = num(7);
        r.src_before_median = num(8);
        r.src_after_mean = num(9);
        r.src_after_median = num(10);
        r.tgt_baseline_mean = num(11);
        r.tgt_baseline_median = num(12);
        r.tgt_cooled_mean = num(13);
        r.tgt_cooled_median = num(14);
        rows.push_back(r);
    }
    return rows;
}

} // namespace lcool

namespace lcool {

/// Direction disagreement between the DAE and cycle estimators at each point.
struct EstimatorComparison {
    std::vector<double> angle_degrees;
    std::vector<double> dae_norm;
    std::vector<double> cycle_norm;
};

inline EstimatorComparison compare_estimators(const DaeModel& dae, const ToyCycleGan& model,
                                              const CycleScoreConfig& cycle_cfg, const std::vector<Point>& points) {
    EstimatorComparison out;
    for (const auto& x : points) {
        const Point a = dae.score(x);
        const Point b = cycle_score(model.g, model.f, cycle_cfg, x);
        out.angle_degrees.push_back(lcool::angle_degrees(a, b));
        out.dae_norm.push_back(norm2(a));
        out.cycle_norm.push_back(norm2(b));
    }
    return out;
}

inline std::string comparison_to_csv(const EstimatorComparison& c) {
    std::string out = "sample_id,angle_deg,dae_score_norm,cycle_score_norm\n";
    for (std::size_t i = 0; i < c.angle_degrees.size(); ++i)
        out += std::to_string(i) + ',' + format_double(c.angle_degrees[i]) + ',' + format_double(c.dae_norm[i]) + ',' +
               format_double(c.cycle_norm[i]) + '\n';
    return out;
}

} // namespace lcool
