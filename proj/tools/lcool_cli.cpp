// Command-line front end: data generation, training, cooling, the full
// pipeline, sweeps and the tempered-equilibrium check. Every command writes
// `<command>.manifest.json` next to its outputs; `replay` re-runs a command
// from such a manifest.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "lcool/lcool.hpp"

namespace fs = std::filesystem;
using namespace lcool;

namespace {

/// Records every bound option so the resolved configuration can be logged
/// and replayed.
class Binder {
public:
    explicit Binder(CLI::App* app) : app_(app) {}

    template <class T>
    CLI::Option* add(const std::string& name, T& value, const std::string& help) {
        entries_.emplace_back(name, [&value] { return json(value); });
        return app_->add_option("--" + name, value, help)->capture_default_str();
    }

    template <class T>
    CLI::Option* add(const std::string& name, std::optional<T>& value, const std::string& help) {
        entries_.emplace_back(name, [&value] { return value ? json(*value) : json(nullptr); });
        return app_->add_option("--" + name, value, help);
    }

    /// Input path, logged as an absolute path.
    CLI::Option* add_input(const std::string& name, std::string& value, const std::string& help) {
        input_keys_.push_back(name);
        entries_.emplace_back(name, [&value] { return value.empty() ? json("") : json(fs::absolute(value).string()); });
        return app_->add_option("--" + name, value, help)->check(CLI::ExistingFile);
    }

    json resolved() const {
        json out = json::object();
        for (const auto& [name, get] : entries_) {
            json v = get();
            if (!v.is_null()) out[name] = std::move(v);
        }
        return out;
    }

    const std::vector<std::string>& input_keys() const { return input_keys_; }

private:
    CLI::App* app_;
    std::vector<std::string> input_keys_;
    std::vector<std::pair<std::string, std::function<json()>>> entries_;
};

/// Buffers outputs so nothing is written unless the command succeeds.
class Outputs {
public:
    explicit Outputs(fs::path dir) : dir_(std::move(dir)) {}

    void text(const std::string& rel, std::string content) { files_.emplace_back(rel, std::move(content)); }
    void doc(const std::string& rel, const json& d) { text(rel, d.dump(2) + "\n"); }

    const fs::path& dir() const { return dir_; }

    json commit() {
        json hashes = json::object();
        for (const auto& [rel, content] : files_) {
            write_text_file(dir_ / rel, content);
            hashes[rel] = fnv1a_hex(content);
        }
        return hashes;
    }

private:
    fs::path dir_;
    std::vector<std::pair<std::string, std::string>> files_;
};

struct Command {
    CLI::App* app = nullptr;
    std::unique_ptr<Binder> binder;
    std::function<json(Outputs&)> run; ///< returns command-specific results for the manifest
};

std::string default_out_dir() {
    if (const char* env = std::getenv("LCOOL_OUT_DIR"); env && *env) return env;
    return ".";
}

Point parse_point(const std::string& text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos) throw DataError("expected a point 'x1,x2', got '" + text + "'");
    return {parse_double(std::string_view(text).substr(0, comma), 0),
            parse_double(std::string_view(text).substr(comma + 1), 0)};
}

json row_json(const MetricRow& r) {
    return {{"alpha", r.alpha},
            {"temperature", r.temperature},
            {"n_steps", r.n_steps},
            {"n_samples", r.n_samples},
            {"n_flagged", r.n_flagged},
            {"fringe_proportion", r.fringe_proportion},
            {"src_residual_before_mean", r.src_before_mean},
            {"src_residual_after_mean", r.src_after_mean},
            {"tgt_residual_baseline_mean", r.tgt_baseline_mean},
            {"tgt_residual_cooled_mean", r.tgt_cooled_mean}};
}

FringeDetector make_detector(const std::optional<double>& threshold, double proportion) {
    return threshold ? FringeDetector::threshold(*threshold) : FringeDetector::proportion(proportion);
}

// Parameter blocks, one per command. Defaults follow the toy setup.
struct GenDataParams {
    std::size_t n_samples = 1000;
    std::uint64_t seed = 0;
    std::vector<std::string> test_points;
    std::string out_dir;
};

struct TrainDaeParams {
    std::string data;
    double sigma = 0.3;
    std::size_t epochs = 100;
    double lr = 3e-3;
    double final_lr = 1e-5;
    std::size_t batch_size = 64;
    std::size_t hidden = 64;
    std::uint64_t seed = 0;
    std::string out_dir;
};

struct TrainGanParams {
    std::string source;
    std::string target;
    std::size_t steps = 5000;
    double lr = 2e-4;
    double lambda_cycle = 10.0;
    std::size_t batch_size = 64;
    std::size_t hidden = 64;
    std::uint64_t seed = 0;
    std::string out_dir;
};

struct CoolParams {
    std::string dae;
    std::string tests;
    double alpha = 0.005;
    double temperature = 0.001;
    std::size_t n_steps = 100;
    std::uint64_t seed = 0;
    std::string out_dir;
};

struct PipelineParams {
    std::string cyclegan;
    std::string dae;
    std::string tests;
    std::string score = "dae";
    std::optional<double> gamma;
    double fringe_proportion = 1.0;
    std::optional<double> fringe_threshold;
    double alpha = 0.005;
    double temperature = 0.001;
    std::size_t n_steps = 100;
    std::uint64_t seed = 0;
    std::string out_dir;
};

struct ExportParams {
    std::string trails;
    std::string out_dir;
};

struct SweepParams {
    std::string cyclegan;
    std::string dae;
    std::string tests;
    std::vector<double> alphas{0.001, 0.005, 0.01};
    std::vector<double> temperatures{0.0001, 0.001, 0.005, 0.01};
    std::vector<std::size_t> n_steps{20, 40, 60, 80, 100};
    double fringe_proportion = 1.0;
    std::uint64_t seed = 0;
    std::string out_dir;
};

struct TemperatureParams {
    std::vector<double> betas{1.0, 4.0, 10.0};
    std::size_t chain_length = 100000;
    std::size_t chains = 16;
    double alpha = 0.005;
    std::vector<double> mean{0.0, 0.0};
    std::vector<double> variances{1.0, 1.0};
    std::uint64_t seed = 0;
    std::string out_dir;
};

Dataset load_tests(const std::string& path) { return load_dataset(path, Domain::test); }

/// Builds the CLI, parses, runs. Returns the process exit code.
int run_cli(int argc, const char* const* argv) {
    CLI::App app{"Langevin cooling of fringe samples for domain translation (2D toy setting)", "lcool"};
    app.set_config("--config", "", "key = value configuration file; command-line flags take precedence");
    app.require_subcommand(1);

    std::map<std::string, Command> commands;
    auto make = [&](const std::string& name, const std::string& help) -> Command& {
        Command& c = commands[name];
        c.app = app.add_subcommand(name, help);
        c.binder = std::make_unique<Binder>(c.app);
        return c;
    };

    // gen-data
    GenDataParams gd;
    {
        Command& c = make("gen-data", "generate the toy source/target training sets and off-manifold test points");
        c.binder->add("n-samples", gd.n_samples, "training samples per domain")->check(CLI::PositiveNumber);
        c.binder->add("seed", gd.seed, "master seed");
        c.binder->add("test-points", gd.test_points, "off-manifold test points as 'x1,x2' (default: three built-in)");
        c.binder->add("out-dir", gd.out_dir, "output directory (env LCOOL_OUT_DIR)");
        c.run = [&](Outputs& out) {
            const Rng master(gd.seed);
            const Dataset src = generate_source({gd.n_samples, Domain::source, master.substream(0).seed()});
            const Dataset tgt = generate_target({gd.n_samples, Domain::target, master.substream(1).seed()});
            std::vector<Point> pts;
            for (const auto& s : gd.test_points) pts.push_back(parse_point(s));
            if (pts.empty()) pts = default_offmanifold_points();
            const Dataset tests = make_offmanifold_tests(pts);
            out.text("source.csv", dataset_to_csv(src));
            out.text("target.csv", dataset_to_csv(tgt));
            out.text("tests.csv", dataset_to_csv(tests));
            return json{{"n_source", src.size()}, {"n_target", tgt.size()}, {"n_tests", tests.size()}};
        };
    }

    // train-dae
    TrainDaeParams td;
    {
        Command& c = make("train-dae", "train the denoising autoencoder used as score estimator");
        c.binder->add_input("data", td.data, "training CSV")->required();
        c.binder->add("sigma", td.sigma, "training noise standard deviation")->check(CLI::PositiveNumber);
        c.binder->add("epochs", td.epochs, "training epochs");
        c.binder->add("lr", td.lr, "initial Adam learning rate")->check(CLI::PositiveNumber);
        c.binder->add("final-lr", td.final_lr, "learning rate reached at the last epoch")->check(CLI::PositiveNumber);
        c.binder->add("batch-size", td.batch_size, "minibatch size")->check(CLI::PositiveNumber);
        c.binder->add("hidden", td.hidden, "hidden width")->check(CLI::PositiveNumber);
        c.binder->add("seed", td.seed, "seed for initialization, shuffling and noise");
        c.binder->add("out-dir", td.out_dir, "output directory (env LCOOL_OUT_DIR)");
        c.run = [&](Outputs& out) {
            const Dataset data = load_dataset(td.data);
            Rng rng(td.seed);
            const DaeModel dae = train_dae(data.points,
                                           {.sigma_sq = td.sigma * td.sigma,
                                            .epochs = td.epochs,
                                            .learning_rate = td.lr,
                                            .final_learning_rate = td.final_lr,
                                            .batch_size = td.batch_size,
                                            .hidden = td.hidden},
                                           rng);
            out.doc("dae.json", to_json(dae));
            double on = 0.0;
            for (const auto& p : data.points) on += fringe_score(dae, p);
            return json{{"sigma_sq", dae.sigma_sq}, {"mean_fringe_score_training", on / double(data.size())}};
        };
    }

    // train-cyclegan
    TrainGanParams tg;
    {
        Command& c = make("train-cyclegan", "train the toy CycleGAN between the source and target sets");
        c.binder->add_input("source", tg.source, "source-domain CSV")->required();
        c.binder->add_input("target", tg.target, "target-domain CSV")->required();
        c.binder->add("steps", tg.steps, "alternating training steps");
        c.binder->add("lr", tg.lr, "Adam learning rate")->check(CLI::PositiveNumber);
        c.binder->add("lambda-cycle", tg.lambda_cycle, "cycle-consistency weight")->check(CLI::PositiveNumber);
        c.binder->add("batch-size", tg.batch_size, "minibatch size")->check(CLI::PositiveNumber);
        c.binder->add("hidden", tg.hidden, "hidden width")->check(CLI::PositiveNumber);
        c.binder->add("seed", tg.seed, "seed");
        c.binder->add("out-dir", tg.out_dir, "output directory (env LCOOL_OUT_DIR)");
        c.run = [&](Outputs& out) {
            const Dataset src = load_dataset(tg.source, Domain::source);
            const Dataset tgt = load_dataset(tg.target, Domain::target);
            Rng rng(tg.seed);
            CycleGanLosses losses;
            const ToyCycleGan m = train_cyclegan_toy(src, tgt,
                                                     {.steps = tg.steps,
                                                      .learning_rate = tg.lr,
                                                      .lambda_cycle = tg.lambda_cycle,
                                                      .batch_size = tg.batch_size,
                                                      .hidden = tg.hidden},
                                                     rng, &losses);
            out.doc("cyclegan.json", to_json(m));
            std::vector<Point> translated;
            for (const auto& x : src.points) translated.push_back(translate(m, x));
            const auto res = manifold_residual(translated, Domain::target);
            return json{{"mean_cycle_error_source", mean_cycle_error(m, src.points)},
                        {"mean_target_residual_translated", res.mean},
                        {"final_losses",
                         {{"d_source", losses.d_source},
                          {"d_target", losses.d_target},
                          {"g_adversarial", losses.g_adversarial},
                          {"cycle", losses.cycle}}}};
        };
    }

    // cool
    CoolParams cp;
    {
        Command& c = make("cool", "cool test samples with the DAE score and export their trails");
        c.binder->add_input("dae", cp.dae, "DAE checkpoint")->required();
        c.binder->add_input("tests", cp.tests, "test points CSV")->required();
        c.binder->add("alpha", cp.alpha, "step size")->check(CLI::PositiveNumber);
        c.binder->add("temperature", cp.temperature, "temperature T = 1/beta")->check(CLI::NonNegativeNumber);
        c.binder->add("n-steps", cp.n_steps, "cooling steps N");
        c.binder->add("seed", cp.seed, "master seed; sample i uses substream i");
        c.binder->add("out-dir", cp.out_dir, "output directory (env LCOOL_OUT_DIR)");
        c.run = [&](Outputs& out) {
            const DaeModel dae = dae_from_json(read_json_file(cp.dae));
            const Dataset tests = load_tests(cp.tests);
            const CoolingConfig cfg{cp.alpha, cp.temperature, cp.n_steps, cp.seed};
            std::vector<Trail> trails;
            Dataset cooled{{}, Domain::test};
            for (std::size_t i = 0; i < tests.size(); ++i) {
                trails.push_back(cool(tests.points[i], dae, cfg, i));
                cooled.points.push_back(trails.back().end());
            }
            out.text("trails.csv", trails_to_csv(trails));
            out.text("cooled.csv", dataset_to_csv(cooled));
            const auto before = manifold_residual(tests.points, Domain::source);
            const auto after = manifold_residual(cooled.points, Domain::source);
            return json{{"src_residual_before_mean", before.mean},
                        {"src_residual_after_mean", after.mean},
                        {"delta_sq", cfg.delta_sq()},
                        {"cooling", cfg.is_cooling()}};
        };
    }

    // pipeline
    PipelineParams pp;
    {
        Command& c = make("pipeline", "fringe detection, cooling and translation of the test samples");
        c.binder->add_input("cyclegan", pp.cyclegan, "CycleGAN checkpoint")->required();
        c.binder->add_input("dae", pp.dae, "DAE checkpoint (required for --score dae)");
        c.binder->add_input("tests", pp.tests, "test points CSV")->required();
        c.binder->add("score", pp.score, "score estimator")->check(CLI::IsMember({"dae", "cycle"}));
        c.binder->add("gamma", pp.gamma, "cycle-score scale (default 1/sigma^2 of the DAE, else 1/0.09)")
            ->check(CLI::PositiveNumber);
        auto* prop = c.binder->add("fringe-proportion", pp.fringe_proportion, "fraction of samples flagged as fringe")
                         ->check(CLI::Range(0.0, 1.0));
        c.binder->add("fringe-threshold", pp.fringe_threshold, "explicit score-norm threshold xi")
            ->check(CLI::NonNegativeNumber)
            ->excludes(prop);
        c.binder->add("alpha", pp.alpha, "step size")->check(CLI::PositiveNumber);
        c.binder->add("temperature", pp.temperature, "temperature T = 1/beta")->check(CLI::NonNegativeNumber);
        c.binder->add("n-steps", pp.n_steps, "cooling steps N");
        c.binder->add("seed", pp.seed, "master seed; sample i uses substream i");
        c.binder->add("out-dir", pp.out_dir, "output directory (env LCOOL_OUT_DIR)");
        c.run = [&](Outputs& out) {
            const ToyCycleGan model = cyclegan_from_json(read_json_file(pp.cyclegan));
            const Dataset tests = load_tests(pp.tests);
            std::optional<DaeModel> dae;
            if (!pp.dae.empty()) dae = dae_from_json(read_json_file(pp.dae));
            if (pp.score == "dae" && !dae) throw CLI::ValidationError("--dae", "required when --score dae");
            const CycleScoreConfig cycle_cfg{pp.gamma.value_or(1.0 / (dae ? dae->sigma_sq : 0.09))};
            const FringeDetector detector = make_detector(pp.fringe_threshold, pp.fringe_proportion);
            const CoolingConfig cfg{pp.alpha, pp.temperature, pp.n_steps, pp.seed};

            const PipelineRun run = pp.score == "dae"
                                        ? run_lcool_pipeline(model, *dae, detector, cfg, tests)
                                        : run_lcool_cycle_pipeline(model, cycle_cfg, detector, cfg, tests);
            out.text("pipeline.csv", pipeline_to_csv(run));
            const auto trails = pipeline_trails(run);
            out.text("trails.csv", trails_to_csv(trails));
            for (std::size_t i = 0; i < trails.size(); ++i)
                out.text("trails/trail_" + std::to_string(i) + ".csv", trail_to_csv(trails[i]));

            const MetricRow row = summarize_run(run, cfg);
            json results = row_json(row);
            results["score"] = pp.score;
            results["xi"] = run.xi;
            results["all_cooled"] = run.n_flagged == run.results.size();
            if (dae) {
                const auto cmp = compare_estimators(*dae, model, cycle_cfg, tests.points);
                out.text("estimator_angles.csv", comparison_to_csv(cmp));
                results["estimator_angle_deg"] = cmp.angle_degrees;
                results["gamma"] = cycle_cfg.gamma;
            }
            return results;
        };
    }

    // export-trails
    ExportParams ep;
    {
        Command& c = make("export-trails", "split a combined trails CSV into one file per sample");
        c.binder->add_input("trails", ep.trails, "combined trails CSV (sample_id,step,x1,x2,score_norm)")->required();
        c.binder->add("out-dir", ep.out_dir, "output directory (env LCOOL_OUT_DIR)");
        c.run = [&](Outputs& out) {
            const std::string text = read_text_file(ep.trails);
            std::istringstream in(text);
            std::string line;
            if (!std::getline(in, line) || line != "sample_id,step,x1,x2,score_norm")
                throw DataError("parse error: not a combined trails file");
            std::map<std::size_t, std::string> files;
            std::size_t row = 0;
            while (std::getline(in, line)) {
                ++row;
                if (line.empty()) continue;
                const auto comma = line.find(',');
                if (comma == std::string::npos) throw DataError("row " + std::to_string(row) + " has no columns");
                const auto id = static_cast<std::size_t>(parse_double(std::string_view(line).substr(0, comma), row));
                auto& f = files[id];
                if (f.empty()) f = "step,x1,x2,score_norm\n";
                f += line.substr(comma + 1) + "\n";
            }
            for (const auto& [id, content] : files) out.text("trails/trail_" + std::to_string(id) + ".csv", content);
            return json{{"n_trails", files.size()}};
        };
    }

    // sweep
    SweepParams sp;
    {
        Command& c = make("sweep", "grid search over step size, temperature and step count");
        c.binder->add_input("cyclegan", sp.cyclegan, "CycleGAN checkpoint")->required();
        c.binder->add_input("dae", sp.dae, "DAE checkpoint")->required();
        c.binder->add_input("tests", sp.tests, "validation points CSV")->required();
        c.binder->add("alphas", sp.alphas, "step sizes")->check(CLI::PositiveNumber);
        c.binder->add("temperatures", sp.temperatures, "temperatures")->check(CLI::NonNegativeNumber);
        c.binder->add("n-steps", sp.n_steps, "step counts");
        c.binder->add("fringe-proportion", sp.fringe_proportion, "fraction flagged as fringe")
            ->check(CLI::Range(0.0, 1.0));
        c.binder->add("seed", sp.seed, "master seed shared by all cells");
        c.binder->add("out-dir", sp.out_dir, "output directory (env LCOOL_OUT_DIR)");
        c.run = [&](Outputs& out) {
            const ToyCycleGan model = cyclegan_from_json(read_json_file(sp.cyclegan));
            const DaeModel dae = dae_from_json(read_json_file(sp.dae));
            const Dataset tests = load_tests(sp.tests);
            const SweepGrid grid{sp.alphas, sp.temperatures, sp.n_steps};
            const SweepReport report =
                run_sweep(grid, model, dae, FringeDetector::proportion(sp.fringe_proportion), tests, sp.seed);
            out.text("sweep.csv", metrics_to_csv(report.rows));
            json summary{{"n_cells", report.rows.size()},
                         {"best_cell", report.rows[report.best].cell},
                         {"best", row_json(report.rows[report.best])},
                         {"cell_seconds", report.cell_seconds}};
            out.doc("sweep_summary.json", summary);
            summary.erase("cell_seconds");
            return summary;
        };
    }

    // verify-temperature
    TemperatureParams tp;
    {
        Command& c = make("verify-temperature", "check that tempered chains on a Gaussian reach N(mu, Sigma/beta)");
        c.binder->add("betas", tp.betas, "inverse temperatures")->check(CLI::PositiveNumber);
        c.binder->add("chain-length", tp.chain_length, "steps per chain (>= 10^4)");
        c.binder->add("chains", tp.chains, "independent chains pooled per beta")->check(CLI::PositiveNumber);
        c.binder->add("alpha", tp.alpha, "step size")->check(CLI::PositiveNumber);
        c.binder->add("mean", tp.mean, "Gaussian mean");
        c.binder->add("variances", tp.variances, "diagonal covariance")->check(CLI::PositiveNumber);
        c.binder->add("seed", tp.seed, "master seed");
        c.binder->add("out-dir", tp.out_dir, "output directory (env LCOOL_OUT_DIR)");
        c.run = [&](Outputs& out) {
            const auto density = GaussianDensity::diagonal(tp.mean, tp.variances);
            const TemperatureReport report = verify_temperature(density, {.betas = tp.betas,
                                                                          .chain_length = tp.chain_length,
                                                                          .chains = tp.chains,
                                                                          .alpha = tp.alpha,
                                                                          .seed = tp.seed});
            out.text("temperature.csv", temperature_to_csv(report));
            json rows = json::array();
            for (const auto& r : report.rows)
                rows.push_back({{"beta", r.beta},
                                {"delta_sq", r.delta_sq},
                                {"regime", r.heating ? "heating" : (r.beta == 1.0 ? "untempered" : "cooling")},
                                {"variance", r.variance},
                                {"expected_variance", r.expected_variance},
                                {"max_relative_error", r.max_relative_error}});
            out.doc("temperature_summary.json", {{"rows", rows}, {"seconds", report.seconds}});
            return json{{"rows", rows}};
        };
    }

    // replay
    std::string replay_manifest, replay_out;
    auto* replay = app.add_subcommand("replay", "re-run a command from its manifest");
    replay->add_option("--manifest", replay_manifest, "manifest JSON written by a previous run")
        ->required()
        ->check(CLI::ExistingFile);
    replay->add_option("--out-dir", replay_out, "write outputs here instead of the recorded directory");

    for (auto& [name, c] : commands) c.app->get_option("--out-dir")->envname("LCOOL_OUT_DIR");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : static_cast<int>(ExitCode::usage);
    }

    try {
        if (replay->parsed()) {
            const json manifest = read_json_file(replay_manifest);
            const std::string cmd = manifest.at("command").get<std::string>();
            if (!commands.count(cmd)) throw DataError("manifest names unknown command '" + cmd + "'");
            std::vector<std::string> args{"lcool", cmd};
            for (const auto& [key, value] : manifest.at("config").items()) {
                if (key == "out-dir" && !replay_out.empty()) continue;
                const json items = value.is_array() ? value : json::array({value});
                if (items.empty()) continue;
                args.push_back("--" + key);
                for (const auto& v : items) args.push_back(v.is_string() ? v.get<std::string>() : v.dump());
            }
            if (!replay_out.empty()) {
                args.push_back("--out-dir");
                args.push_back(replay_out);
            }
            std::vector<const char*> cargs;
            for (const auto& a : args) cargs.push_back(a.c_str());
            return run_cli(static_cast<int>(cargs.size()), cargs.data());
        }

        for (auto& [name, c] : commands) {
            if (!c.app->parsed()) continue;
            std::string& out_dir = name == "gen-data"         ? gd.out_dir
                                   : name == "train-dae"      ? td.out_dir
                                   : name == "train-cyclegan" ? tg.out_dir
                                   : name == "cool"           ? cp.out_dir
                                   : name == "pipeline"       ? pp.out_dir
                                   : name == "export-trails"  ? ep.out_dir
                                   : name == "sweep"          ? sp.out_dir
                                                              : tp.out_dir;
            if (out_dir.empty()) out_dir = default_out_dir();
            out_dir = fs::absolute(out_dir).lexically_normal().string();

            Outputs out{fs::path(out_dir)};
            const json results = c.run(out);
            json inputs = json::object();
            const json config = c.binder->resolved();
            for (const auto& key : c.binder->input_keys())
                if (config.contains(key) && !config[key].get<std::string>().empty())
                    inputs[config[key].get<std::string>()] = file_hash(config[key].get<std::string>());
            json manifest{{"command", name}, {"config", config}, {"inputs", inputs}, {"results", results}};
            manifest["outputs"] = out.commit();
            write_json_file(out.dir() / (name + ".manifest.json"), manifest);
            std::cout << "wrote " << (out.dir() / (name + ".manifest.json")).string() << "\n";
            return 0;
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return static_cast<int>(ExitCode::usage);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return static_cast<int>(e.exit_code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return static_cast<int>(ExitCode::data);
    }
    return static_cast<int>(ExitCode::usage);
}

} // namespace

int main(int argc, char** argv) { return run_cli(argc, argv); }
