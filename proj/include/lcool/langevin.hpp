#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "lcool/error.hpp"
#include "lcool/mlp.hpp"
#include "lcool/rng.hpp"
#include "lcool/score.hpp"
#include "lcool/toy_data.hpp"

namespace lcool {

/// Score norms above this abort a trail as diverged.
inline constexpr double kScoreNormLimit = 1e6;

/// Step size and temperature of a cooling run. The perturbation variance is
/// always derived: delta^2 = 2 * alpha * T.
struct CoolingConfig {
    double alpha = 0.005;
    double temperature = 0.001;
    std::size_t n_steps = 100;
    std::uint64_t seed = 0;

    double delta_sq() const { return 2.0 * alpha * temperature; }

    /// 2 alpha > delta^2, i.e. T < 1.
    bool is_cooling() const { return 2.0 * alpha > delta_sq(); }

    void validate() const {
        if (!(alpha > 0.0) || !std::isfinite(alpha)) throw DataError("step size alpha must be positive");
        if (!(temperature >= 0.0) || !std::isfinite(temperature)) throw DataError("temperature must be non-negative");
    }
};

/// beta = 2 alpha / delta^2. delta^2 = 0 is the deterministic limit and has
/// no finite beta.
inline double effective_beta(double alpha, double delta_sq) {
    if (!(alpha > 0.0)) throw DataError("alpha must be positive");
    if (delta_sq == 0.0) throw DataError("delta_sq = 0 gives infinite beta; use temperature 0 for gradient ascent");
    if (!(delta_sq > 0.0)) throw DataError("delta_sq must be positive");
    return 2.0 * alpha / delta_sq;
}

namespace detail {

inline void check_score(const Point& s, std::size_t dim) {
    if (s.size() != dim) throw DimensionError("score provider returned a vector of the wrong dimension");
    for (double v : s)
        if (!std::isfinite(v)) throw DivergenceError("score estimate is not finite");
}

} // namespace detail

/// One rejection-free Langevin step, writing the score norm at x to
/// `score_norm` when given. Always consumes L normal draws, so chains with
/// different scores share their noise stream.
template <ScoreProvider S>
Point mala_step(const Point& x, const S& score, double alpha, double delta_sq, Rng& rng,
                double* score_norm = nullptr) {
    if (!(alpha > 0.0)) throw DataError("alpha must be positive");
    if (!(delta_sq >= 0.0)) throw DataError("delta_sq must be non-negative");
    const Point s = score(x);
    detail::check_score(s, x.size());
    const double n = norm2(s);
    if (n > kScoreNormLimit) throw DivergenceError("score norm " + std::to_string(n) + " exceeds the divergence guard");
    if (score_norm) *score_norm = n;
    const double delta = std::sqrt(delta_sq);
    Point out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] + alpha * s[i] + delta * rng.normal();
    return out;
}

/// Trajectory of one sample through N cooling steps.
struct Trail {
    std::vector<Point> points;       ///< x_0 .. x_N
    std::vector<double> score_norms; ///< score norm at x_0 .. x_{N-1}
    CoolingConfig config;

    const Point& start() const { return points.front(); }
    const Point& end() const { return points.back(); }
    bool operator==(const Trail& o) const { return points == o.points && score_norms == o.score_norms; }
};

/// Noise stream of sample `index` under a master seed.
inline Rng sample_rng(std::uint64_t seed, std::size_t index) { return Rng(seed).substream(index); }

template <ScoreProvider S>
Trail cool(const Point& x, const S& score, const CoolingConfig& cfg, std::size_t sample_index = 0) {
    cfg.validate();
    Rng rng = sample_rng(cfg.seed, sample_index);
    Trail trail;
    trail.config = cfg;
    trail.points.reserve(cfg.n_steps + 1);
    trail.score_norms.reserve(cfg.n_steps);
    trail.points.push_back(x);
    const double delta_sq = cfg.delta_sq();
    for (std::size_t k = 0; k < cfg.n_steps; ++k) {
        double n = 0.0;
        trail.points.push_back(mala_step(trail.points.back(), score, cfg.alpha, delta_sq, rng, &n));
        trail.score_norms.push_back(n);
    }
    return trail;
}

/// ||score(x)||_2
template <ScoreProvider S>
double fringe_score(const S& score, const Point& x) {
    const Point s = score(x);
    detail::check_score(s, x.size());
    return norm2(s);
}

/// Threshold rule for fringe samples: either a fixed xi or the proportion of
/// samples to flag.
class FringeDetector {
public:
    static FringeDetector threshold(double xi) {
        if (!(xi >= 0.0)) throw DataError("fringe threshold must be non-negative");
        return FringeDetector(xi, std::nullopt);
    }

    static FringeDetector proportion(double q) {
        if (!(q > 0.0 && q <= 1.0)) throw DataError("fringe proportion must lie in (0, 1]");
        return FringeDetector(std::nullopt, q);
    }

    const std::optional<double>& xi() const { return xi_; }
    const std::optional<double>& q() const { return q_; }

private:
    FringeDetector(std::optional<double> xi, std::optional<double> q) : xi_(xi), q_(q) {}
    std::optional<double> xi_;
    std::optional<double> q_;
};

struct FringeDecision {
    std::vector<bool> flagged;
    double xi = 0.0;
    std::size_t count = 0;
};

/// ceil(q * n), robust to q * n landing a rounding error above an integer.
inline std::size_t fringe_count(double q, std::size_t n) {
    const double raw = q * static_cast<double>(n);
    const double nearest = std::round(raw);
    const double k = std::abs(raw - nearest) <= 1e-9 * std::max(1.0, raw) ? nearest : std::ceil(raw);
    return std::min(n, static_cast<std::size_t>(k));
}

/// Flags score > xi. In proportion mode the ceil(q n) largest scores are
/// flagged (earlier index wins ties) and xi is reported as the largest
/// unflagged score, or 0 when every sample is flagged.
inline FringeDecision detect_fringe(const std::vector<double>& scores, const FringeDetector& detector) {
    if (scores.empty()) throw DataError("fringe detection needs at least one score");
    FringeDecision d;
    d.flagged.assign(scores.size(), false);
    if (detector.xi()) {
        d.xi = *detector.xi();
        for (std::size_t i = 0; i < scores.size(); ++i) {
            d.flagged[i] = scores[i] > d.xi;
            d.count += d.flagged[i];
        }
        return d;
    }
    const std::size_t k = fringe_count(*detector.q(), scores.size());
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
    for (std::size_t r = 0; r < k; ++r) d.flagged[order[r]] = true;
    d.count = k;
    d.xi = k < order.size() ? std::max(0.0, scores[order[k]]) : 0.0;
    return d;
}

// ---------------------------------------------------------------------------
// Trail export

inline std::string trail_to_csv(const Trail& trail) {
    std::string out = "step,x1,x2,score_norm\n";
    for (std::size_t k = 0; k < trail.points.size(); ++k) {
        const auto& p = trail.points[k];
        out += std::to_string(k) + ',' + format_double(p.at(0)) + ',' + format_double(p.at(1)) + ',';
        out += k < trail.score_norms.size() ? format_double(trail.score_norms[k]) : std::string("nan");
        out += '\n';
    }
    return out;
}

inline std::string trails_to_csv(const std::vector<Trail>& trails) {
    std::string out = "sample_id,step,x1,x2,score_norm\n";
    for (std::size_t i = 0; i < trails.size(); ++i) {
        const auto& trail = trails[i];
        for (std::size_t k = 0; k < trail.points.size(); ++k) {
            const auto& p = trail.points[k];
            out += std::to_string(i) + ',' + std::to_string(k) + ',' + format_double(p.at(0)) + ',' +
                   format_double(p.at(1)) + ',';
            out += k < trail.score_norms.size() ? format_double(trail.score_norms[k]) : std::string("nan");
            out += '\n';
        }
    }
    return out;
}

} // namespace lcool
