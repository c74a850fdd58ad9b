#include "cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>

#include "twotier/allocation.hpp"
#include "twotier/game.hpp"
#include "twotier/kvfile.hpp"
#include "twotier/pivot_mc.hpp"
#include "twotier/population.hpp"
#include "twotier/verify.hpp"

namespace twotier::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

// Flag values that override config-file keys.
struct Overrides {
    std::string config_path;
    std::optional<std::int64_t> seed;
    std::optional<std::int64_t> replications;
    std::optional<unsigned> threads;
    std::optional<std::string> out_dir;
    std::optional<std::string> alpha_grid;
    std::optional<double> quota;
    std::optional<std::string> game_path;
};

struct RunConfig {
    KeyValueFile kv;
    std::string base_dir;  // directory of the config file, for relative paths
    std::optional<std::uint64_t> seed;
    std::uint64_t replications = 1'000'000;
    unsigned threads = 1;
    double quota = 0.5;
    std::string out_dir = ".";
    std::int64_t weight_resolution = 10'000;
    double tolerance_scale = 1.0;
    std::vector<double> alpha_grid;
    SweepDirection direction = SweepDirection::left_to_right;
    std::optional<std::string> game_path;
};

std::vector<double> parse_alpha_grid(const std::string& text) {
    // "lo:hi:step"
    double lo, hi, step;
    if (std::sscanf(text.c_str(), "%lf:%lf:%lf", &lo, &hi, &step) != 3)
        throw std::invalid_argument("alpha grid must be lo:hi:step, got: " + text);
    return make_alpha_grid(lo, hi, step);
}

RunConfig load_config(const Overrides& ov) {
    RunConfig cfg;
    if (!ov.config_path.empty()) {
        cfg.kv = KeyValueFile::load(ov.config_path);
        cfg.base_dir = fs::path(ov.config_path).parent_path().string();
    }
    const auto& kv = cfg.kv;
    if (kv.has("seed")) cfg.seed = static_cast<std::uint64_t>(kv.get_int("seed"));
    cfg.replications = static_cast<std::uint64_t>(kv.get_int("replications", 1'000'000));
    cfg.threads = static_cast<unsigned>(kv.get_int("threads", 1));
    cfg.quota = kv.get_double("quota", 0.5);
    cfg.out_dir = kv.get_string("out", ".");
    cfg.weight_resolution = kv.get_int("weight_resolution", 10'000);
    cfg.tolerance_scale = kv.get_double("tolerance_scale", 1.0);
    cfg.alpha_grid = kv.has("alpha_grid") ? parse_alpha_grid(kv.get_string("alpha_grid"))
                                          : make_alpha_grid(0.0, 2.0, 0.05);
    const std::string dir = kv.get_string("direction", "left");
    if (dir == "right")
        cfg.direction = SweepDirection::right_to_left;
    else if (dir != "left")
        throw std::invalid_argument("direction must be left or right");
    if (kv.has("game_file")) cfg.game_path = kv.get_string("game_file");

    if (ov.seed) cfg.seed = static_cast<std::uint64_t>(*ov.seed);
    if (ov.replications) cfg.replications = static_cast<std::uint64_t>(*ov.replications);
    if (ov.threads) cfg.threads = *ov.threads;
    if (ov.out_dir) cfg.out_dir = *ov.out_dir;
    if (ov.alpha_grid) cfg.alpha_grid = parse_alpha_grid(*ov.alpha_grid);
    if (ov.quota) cfg.quota = *ov.quota;
    if (ov.game_path) cfg.game_path = *ov.game_path;

    if (cfg.replications < 1) throw std::invalid_argument("replications must be >= 1");
    return cfg;
}

std::uint64_t require_seed(const RunConfig& cfg) {
    if (!cfg.seed)
        throw std::invalid_argument("seed is required (config key 'seed' or --seed); "
                                    "runs must be reproducible");
    return *cfg.seed;
}

fs::path resolve(const RunConfig& cfg, const std::string& p) {
    fs::path path(p);
    if (path.is_relative() && !cfg.base_dir.empty()) path = fs::path(cfg.base_dir) / path;
    return path;
}

// All outputs go through a temp file and atomic rename, so a failed run
// never leaves a partial artifact behind.
void write_file_atomic(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out << content;
        if (!out) throw std::runtime_error("failed writing " + tmp.string());
    }
    fs::rename(tmp, path);
}

json base_metadata(const char* command, const RunConfig& cfg) {
    json meta;
    meta["command"] = command;
    meta["version"] = kVersion;
    meta["threads"] = cfg.threads;
    if (cfg.seed) meta["seed"] = *cfg.seed;
    json raw;
    for (const auto& [k, v] : cfg.kv.entries()) raw[k] = v;
    meta["config"] = raw;
    return meta;
}

void write_metadata(const fs::path& csv_path, const json& meta) {
    fs::path p = csv_path;
    p += ".meta.json";
    write_file_atomic(p, meta.dump(2) + "\n");
}

WeightedVotingGame game_for_partition(const RunConfig& cfg,
                                      const ConstituencyPartition& partition,
                                      const PreferenceModel& model, json& meta) {
    if (cfg.game_path) {
        auto game = load_game_file(resolve(cfg, *cfg.game_path).string());
        if (game.size() != partition.size())
            throw std::invalid_argument("game has " + std::to_string(game.size()) +
                                        " weights but partition has " +
                                        std::to_string(partition.size()));
        meta["weights_source"] = *cfg.game_path;
        return game;
    }
    if (cfg.kv.has("weights")) {
        auto w = cfg.kv.get_doubles("weights");
        if (w.size() != partition.size())
            throw std::invalid_argument("'weights' has " + std::to_string(w.size()) +
                                        " entries but partition has " +
                                        std::to_string(partition.size()));
        meta["weights_source"] = "explicit";
        return WeightedVotingGame(cfg.quota, std::move(w));
    }
    const std::string rule = cfg.kv.get_string("weight_rule", "sqrt");
    std::vector<double> w;
    if (rule == "equal")
        w = power_law_weights(partition, 0.0);
    else if (rule == "sqrt")
        w = power_law_weights(partition, 0.5);
    else if (rule == "linear")
        w = power_law_weights(partition, 1.0);
    else if (rule == "power")
        w = power_law_weights(partition, cfg.kv.get_double("weight_alpha"));
    else if (rule == "density")
        w = density_rule_weights(partition, model);
    else
        throw std::invalid_argument("unknown weight_rule: " + rule);
    meta["weights_source"] = rule;
    return WeightedVotingGame(cfg.quota, std::move(w));
}

int cmd_shapley(const RunConfig& cfg) {
    if (!cfg.game_path)
        throw std::invalid_argument("shapley: provide --game FILE or config key game_file");
    const auto game = load_game_file(resolve(cfg, *cfg.game_path).string());

    json meta = base_metadata("shapley", cfg);
    meta["game"] = game_to_text(game);

    std::vector<PowerIndexVector> out;
    if (game.integral_weights()) {
        out.push_back(shapley_dp(game));
        out.push_back(banzhaf(game));
    } else {
        out.push_back(shapley_exact(game));
        const auto ints = rationalize_weights(game.weights, cfg.weight_resolution);
        WeightedVotingGame scaled(game.quota_fraction,
                                  std::vector<double>(ints.begin(), ints.end()));
        out.push_back(banzhaf(scaled));
        meta["banzhaf_weight_resolution"] = cfg.weight_resolution;
    }

    const fs::path csv = fs::path(cfg.out_dir) / "power_indices.csv";
    write_file_atomic(csv, power_index_csv(out));
    write_metadata(csv, meta);
    std::cout << "wrote " << csv.string() << "\n";
    return 0;
}

int cmd_simulate(const RunConfig& cfg) {
    const std::uint64_t seed = require_seed(cfg);
    const auto partition = partition_from_config(cfg.kv, cfg.base_dir);
    const auto model = model_from_config(cfg.kv);

    json meta = base_metadata("simulate", cfg);
    const auto game = game_for_partition(cfg, partition, model, meta);

    RunOptions opts;
    opts.threads = cfg.threads;
    opts.direction = cfg.direction;
    const auto est =
        estimate_pivot_probabilities(game, model, partition, cfg.replications, seed, opts);
    const auto prof = influence_profile(est, partition);

    meta["replications"] = cfg.replications;
    meta["quota"] = game.quota_fraction;
    meta["model"] = model.describe();
    meta["partition"] = partition.describe();
    meta["population_rounding"] = "nearest odd, ties up";
    meta["l1_distance"] = prof.l1_distance;
    meta["direction"] = cfg.direction == SweepDirection::left_to_right ? "left" : "right";

    const fs::path csv = fs::path(cfg.out_dir) / "pivot_estimate.csv";
    write_file_atomic(csv, estimate_csv(est, partition, game));
    write_metadata(csv, meta);
    std::cout << "wrote " << csv.string() << " (l1=" << prof.l1_distance << ")\n";
    return 0;
}

int cmd_optimize_alpha(const RunConfig& cfg) {
    const std::uint64_t seed = require_seed(cfg);
    const auto partition = partition_from_config(cfg.kv, cfg.base_dir);
    const auto model = model_from_config(cfg.kv);

    std::vector<AllocationRuleKind> kinds;
    const std::string rule = cfg.kv.get_string("rule_kind", "both");
    if (rule == "direct" || rule == "both") kinds.push_back(AllocationRuleKind::direct_power_law);
    if (rule == "shapley" || rule == "both") kinds.push_back(AllocationRuleKind::shapley_power_law);
    if (kinds.empty())
        throw std::invalid_argument("rule_kind must be direct, shapley or both");

    json meta = base_metadata("optimize-alpha", cfg);
    meta["replications"] = cfg.replications;
    meta["alpha_grid_size"] = cfg.alpha_grid.size();
    meta["weight_resolution"] = cfg.weight_resolution;
    meta["model"] = model.describe();
    meta["partition"] = partition.describe();

    std::string table_csv = "ratio,alpha,l1,rule_kind\n";
    std::string transition_csv = "ratio,alpha_star,rule_kind\n";
    char buf[128];

    const bool sweep = cfg.kv.has("ratio_grid");
    std::vector<double> ratios{-1.0};  // sentinel: single run on the config model
    if (sweep) {
        ratios = cfg.kv.get_doubles("ratio_grid");
        if (ratios.empty() || !std::is_sorted(ratios.begin(), ratios.end()))
            throw std::invalid_argument("ratio_grid must be a sorted nonempty list");
        if (model.h.is_degenerate())
            throw std::invalid_argument("ratio_grid sweep needs a non-degenerate h");
    }

    for (std::size_t k = 0; k < ratios.size(); ++k) {
        PreferenceModel point_model = model;
        double ratio = ratios[k];
        if (sweep) {
            // shock_scale realizing sigma_H^2 / sigma_G^2 = ratio.
            point_model = PreferenceModel(
                model.g, model.h,
                std::sqrt(ratio * model.g.variance() / model.h.variance()));
        } else {
            ratio = model.iid() ? 0.0
                                : model.shock_scale * model.shock_scale *
                                      model.h.variance() / model.g.variance();
        }
        for (const auto kind : kinds) {
            const auto res = optimize_alpha(partition, point_model, kind, cfg.alpha_grid,
                                            cfg.quota, cfg.replications,
                                            derive_seed(seed, k), cfg.threads,
                                            cfg.weight_resolution);
            for (const auto& [alpha, l1] : res.l1_by_alpha) {
                std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g,%s\n", ratio, alpha, l1,
                              rule_kind_name(kind));
                table_csv += buf;
            }
            std::snprintf(buf, sizeof buf, "%.12g,%.12g,%s\n", ratio, res.alpha_star,
                          rule_kind_name(kind));
            transition_csv += buf;
            std::cout << "ratio=" << ratio << " rule=" << rule_kind_name(kind)
                      << " alpha*=" << res.alpha_star << "\n";
        }
    }

    const fs::path table_path = fs::path(cfg.out_dir) / "alpha_l1.csv";
    const fs::path transition_path = fs::path(cfg.out_dir) / "transition.csv";
    write_file_atomic(table_path, table_csv);
    write_file_atomic(transition_path, transition_csv);
    write_metadata(table_path, meta);
    std::cout << "wrote " << table_path.string() << ", " << transition_path.string() << "\n";
    return 0;
}

int cmd_inverse(const RunConfig& cfg) {
    std::vector<double> target;
    if (cfg.kv.has("target")) {
        target = cfg.kv.get_doubles("target");
    } else {
        const auto partition = partition_from_config(cfg.kv, cfg.base_dir);
        const std::string rule = cfg.kv.get_string("target_rule", "linear");
        double alpha = 1.0;
        if (rule == "sqrt")
            alpha = 0.5;
        else if (rule == "power")
            alpha = cfg.kv.get_double("target_alpha");
        else if (rule != "linear")
            throw std::invalid_argument("target_rule must be linear, sqrt or power");
        target = power_law_weights(partition, alpha);
    }

    const int max_iters = static_cast<int>(cfg.kv.get_int("max_iters", 100));
    const double tolerance = cfg.kv.get_double("tolerance", 1e-4);
    const auto res =
        inverse_shapley(target, cfg.quota, max_iters, tolerance, cfg.weight_resolution);

    double tsum = 0.0;
    for (double t : target) tsum += t;

    std::string csv = "index,weight,target,achieved_shapley\n";
    char buf[128];
    for (std::size_t i = 0; i < res.weights.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%zu,%.12g,%.12g,%.12g\n", i + 1, res.weights[i],
                      target[i] / tsum, res.achieved.values[i]);
        csv += buf;
    }

    json meta = base_metadata("inverse", cfg);
    meta["residual_linf"] = res.residual_linf;
    meta["iterations"] = res.iterations;
    meta["converged"] = res.converged;
    meta["weight_resolution"] = cfg.weight_resolution;
    meta["note"] = "heuristic solution; residual reported, exactness not claimed";

    const fs::path csv_path = fs::path(cfg.out_dir) / "inverse.csv";
    write_file_atomic(csv_path, csv);
    write_metadata(csv_path, meta);
    write_file_atomic(fs::path(cfg.out_dir) / "inverse_game.txt",
                      game_to_text(WeightedVotingGame(cfg.quota, res.weights)));
    std::cout << "wrote " << csv_path.string() << " (residual=" << res.residual_linf
              << ", iterations=" << res.iterations << ")\n";
    return 0;
}

// Fallback partition for the square root rule check when no population
// file is configured: 51 odd sizes spread over [101, 1001], fixed.
ConstituencyPartition default_sqrt_partition() {
    std::vector<std::int64_t> sizes;
    RandomStream rs(mix64(0x5157u), 0);
    for (int i = 0; i < 51; ++i) sizes.push_back(round_to_odd(rs.uniform(101.0, 1001.0)));
    return ConstituencyPartition(std::move(sizes));
}

int cmd_verify(const RunConfig& cfg) {
    const std::uint64_t seed = require_seed(cfg);
    VerifyOptions vo;
    vo.threads = cfg.threads;
    vo.tolerance_scale = cfg.tolerance_scale;

    std::vector<CheckReport> reports;

    const ReplicaType types[] = {{2.0, 405, 0.5}, {1.0, 101, 0.5}};
    const std::int64_t m_grid[] = {20, 100};
    auto r1 = check_pivot_ratio_limit(types, m_grid, cfg.replications,
                                      derive_seed(seed, 1), vo);
    reports.insert(reports.end(), r1.begin(), r1.end());

    const std::int64_t weights[] = {5, 4, 3, 3, 2, 2, 2, 1, 1};
    const std::int64_t sizes[] = {3, 5, 7, 9, 11, 13, 15, 17, 19};
    const double t_grid[] = {0.0, 10.0, 1000.0};
    auto r2 = check_shock_shapley_limit(0.6, weights, sizes,
                                        DistributionSpec::uniform(-0.5, 0.5),
                                        DistributionSpec::normal(0.0, 1.0), t_grid,
                                        cfg.replications, derive_seed(seed, 2), vo);
    reports.insert(reports.end(), r2.begin(), r2.end());

    const auto norm_reps = static_cast<std::uint64_t>(
        cfg.kv.get_int("normality_replications", 100'000));
    auto r3 = check_median_normality(DistributionSpec::uniform(0.0, 1.0), 1001, norm_reps,
                                     derive_seed(seed, 3), vo);
    reports.insert(reports.end(), r3.begin(), r3.end());

    ConstituencyPartition sqrt_partition =
        cfg.kv.has("population_file") ? partition_from_config(cfg.kv, cfg.base_dir)
                                      : default_sqrt_partition();
    reports.push_back(
        check_square_root_rule(sqrt_partition, cfg.replications, derive_seed(seed, 4), vo));

    print_reports(std::cout, reports);
    const fs::path csv = fs::path(cfg.out_dir) / "verify_report.csv";
    write_file_atomic(csv, reports_csv(reports));
    json meta = base_metadata("verify", cfg);
    meta["replications"] = cfg.replications;
    meta["tolerance_scale"] = cfg.tolerance_scale;
    write_metadata(csv, meta);

    const bool ok = all_hard_pass(reports);
    std::cout << (ok ? "verify: all hard checks passed\n" : "verify: HARD CHECK FAILED\n");
    return ok ? 0 : 1;
}

}  // namespace

int run(int argc, const char* const* argv) {
    CLI::App app{"Two-tier weighted voting: power indices, pivot simulation, "
                 "weight allocation rules"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags stay valid after the subcommand name

    Overrides ov;
    app.add_option("--config", ov.config_path, "key = value run configuration file");
    app.add_option("--seed", ov.seed, "master seed (overrides config)");
    app.add_option("--replications", ov.replications, "Monte Carlo replications");
    app.add_option("--threads", ov.threads, "worker threads");
    app.add_option("--out", ov.out_dir, "output directory");
    app.add_option("--alpha-grid", ov.alpha_grid, "alpha grid lo:hi:step");
    app.add_option("--quota", ov.quota, "relative quota in [0.5, 1)");

    auto* sh = app.add_subcommand("shapley", "exact Shapley and Banzhaf indices of a game");
    sh->add_option("--game", ov.game_path, "game file: quota line, then weights");
    auto* sim = app.add_subcommand("simulate", "Monte Carlo pivot probabilities");
    auto* oa = app.add_subcommand("optimize-alpha", "search the power-law exponent");
    auto* inv = app.add_subcommand("inverse", "weights matching a target Shapley value");
    auto* ver = app.add_subcommand("verify", "run the statistical verification suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        const RunConfig cfg = load_config(ov);
        if (sh->parsed()) return cmd_shapley(cfg);
        if (sim->parsed()) return cmd_simulate(cfg);
        if (oa->parsed()) return cmd_optimize_alpha(cfg);
        if (inv->parsed()) return cmd_inverse(cfg);
        if (ver->parsed()) return cmd_verify(cfg);
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

int run(const std::vector<std::string>& args) {
    std::vector<const char*> argv;
    argv.push_back("twotier");
    for (const auto& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace twotier::cli
