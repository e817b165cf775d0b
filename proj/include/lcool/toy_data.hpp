#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "lcool/checkpoint.hpp"
#include "lcool/error.hpp"
#include "lcool/mlp.hpp"
#include "lcool/rng.hpp"

namespace lcool {

enum class Domain { source, target, test };

inline std::string_view to_string(Domain d) {
    switch (d) {
    case Domain::source: return "source";
    case Domain::target: return "target";
    case Domain::test: return "test";
    }
    return "test";
}

/// Curve and noise band of one toy domain: x2 = slope*x1 + curvature*x1^2 + e,
/// e ~ Uniform(0, band).
struct ToyManifold {
    double slope;
    double curvature;
    double band;

    double curve(double x1) const { return slope * x1 + curvature * x1 * x1; }

    /// Signed offset of x2 above the curve.
    double offset(std::span<const double> p) const { return p[1] - curve(p[0]); }

    /// Distance from the noise band along x2; zero inside [0, band].
    double residual(std::span<const double> p) const {
        const double r = offset(p);
        if (r < 0.0) return -r;
        if (r > band) return r - band;
        return 0.0;
    }

    bool contains(std::span<const double> p) const {
        const double r = offset(p);
        return p[0] >= 0.0 && p[0] <= 1.0 && r >= 0.0 && r <= band;
    }

    Point sample(double t, double noise) const { return {t, curve(t) + noise}; }
};

inline constexpr ToyManifold source_manifold{0.0, 0.75, 0.2};
inline constexpr ToyManifold target_manifold{0.4, 0.0, 0.1};

inline const ToyManifold& manifold_for(Domain d) {
    if (d == Domain::target) return target_manifold;
    return source_manifold;
}

struct ToyDatasetSpec {
    std::size_t n_samples = 1000;
    Domain domain = Domain::source;
    std::uint64_t seed = 0;
};

struct Dataset {
    std::vector<Point> points;
    Domain domain = Domain::source;

    std::size_t size() const { return points.size(); }
    bool empty() const { return points.empty(); }
    bool operator==(const Dataset&) const = default;
};

namespace detail {

inline Dataset generate_toy(const ToyDatasetSpec& spec, Domain expected) {
    if (spec.domain != expected)
        throw DataError(std::string("dataset spec is for the ") + std::string(to_string(spec.domain)) +
                        " domain, expected " + std::string(to_string(expected)));
    if (spec.n_samples == 0) throw DataError("n_samples must be positive");
    const auto& m = manifold_for(expected);
    Rng rng(spec.seed);
    Dataset out{{}, expected};
    out.points.reserve(spec.n_samples);
    for (std::size_t i = 0; i < spec.n_samples; ++i) {
        const double t = rng.uniform();
        const double e = rng.uniform(0.0, m.band);
        out.points.push_back(m.sample(t, e));
    }
    return out;
}

} // namespace detail

/// x = (t, 0.75 t^2 + e), t ~ U(0,1), e ~ U(0,0.2).
inline Dataset generate_source(const ToyDatasetSpec& spec) { return detail::generate_toy(spec, Domain::source); }

/// x' = (t', 0.4 t' + e'), t' ~ U(0,1), e' ~ U(0,0.1).
inline Dataset generate_target(const ToyDatasetSpec& spec) { return detail::generate_toy(spec, Domain::target); }

inline std::vector<Point> default_offmanifold_points() { return {{0.2, 0.55}, {0.5, 0.65}, {0.8, 0.9}}; }

/// Wraps user-chosen test points. Points inside the source band are rejected.
inline Dataset make_offmanifold_tests(const std::vector<Point>& offsets) {
    Dataset out{{}, Domain::test};
    for (std::size_t i = 0; i < offsets.size(); ++i) {
        const auto& p = offsets[i];
        if (p.size() != 2) throw DimensionError("test point " + std::to_string(i) + " is not two-dimensional");
        const double r = source_manifold.offset(p);
        if (r >= 0.0 && r <= source_manifold.band) {
            char buf[160];
            std::snprintf(buf, sizeof buf, "warning: test point %zu (%g, %g) lies inside the source band", i, p[0],
                          p[1]);
            throw DataError(buf);
        }
        out.points.push_back(p);
    }
    return out;
}

/// %.17g formatting, which round-trips every double.
inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string dataset_to_csv(const Dataset& data) {
    std::string out = "x1,x2\n";
    for (const auto& p : data.points) {
        if (p.size() != 2) throw DimensionError("only two-dimensional datasets can be written as CSV");
        out += format_double(p[0]);
        out += ',';
        out += format_double(p[1]);
        out += '\n';
    }
    return out;
}

inline double parse_double(std::string_view field, std::size_t row) {
    while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
    while (!field.empty() && (field.back() == ' ' || field.back() == '\t' || field.back() == '\r'))
        field.remove_suffix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc() || ptr != field.data() + field.size())
        throw DataError("row " + std::to_string(row) + ": cannot parse '" + std::string(field) + "' as a number");
    return v;
}

inline Dataset dataset_from_csv(const std::string& text, Domain domain = Domain::source) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw DataError("parse error: empty dataset file (expected header 'x1,x2')");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "x1,x2") throw DataError("parse error: expected header 'x1,x2', got '" + line + "'");
    Dataset out{{}, domain};
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string_view> fields;
        std::string_view rest(line);
        for (;;) {
            const auto comma = rest.find(',');
            fields.push_back(rest.substr(0, comma));
            if (comma == std::string_view::npos) break;
            rest.remove_prefix(comma + 1);
        }
        if (fields.size() != 2)
            throw DimensionError("row " + std::to_string(row) + " has " + std::to_string(fields.size()) +
                                 " columns, expected 2");
        out.points.push_back({parse_double(fields[0], row), parse_double(fields[1], row)});
    }
    return out;
}

inline void save_dataset(const std::filesystem::path& path, const Dataset& data) {
    write_text_file(path, dataset_to_csv(data));
}

inline Dataset load_dataset(const std::filesystem::path& path, Domain domain = Domain::source) {
    return dataset_from_csv(read_text_file(path), domain);
}

struct ResidualStats {
    std::vector<double> values;
    double mean = 0.0;
    double median = 0.0;
};

/// Band distance of each point from the given domain's manifold.
inline ResidualStats manifold_residual(const std::vector<Point>& points, Domain domain) {
    const auto& m = manifold_for(domain);
    ResidualStats s;
    for (const auto& p : points) {
        if (p.size() != 2) throw DimensionError("manifold residual needs two-dimensional points");
        s.values.push_back(m.residual(p));
    }
    if (s.values.empty()) return s;
    double sum = 0.0;
    for (double v : s.values) sum += v;
    s.mean = sum / static_cast<double>(s.values.size());
    std::vector<double> sorted = s.values;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    s.median = n % 2 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
    return s;
}

} // namespace lcool
