// Command-line front end: run a single stream, sweep horizons, compare
// allocators on shared streams, or benchmark a recorded stream.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mirec/mirec.hpp"

namespace {

struct ConfigOverrides {
    std::optional<std::int64_t> periods;
    std::optional<std::uint32_t> slots;
    std::optional<std::string> method;
    std::optional<std::string> solver;
    std::optional<std::string> update_rule;
    std::optional<std::string> pacing;
    std::optional<double> step_c;
    std::optional<double> noise_sigma;
    std::optional<std::string> benchmark;
    std::optional<std::uint64_t> seed;
};

void add_override_flags(CLI::App* cmd, ConfigOverrides& ov) {
    cmd->add_option("--periods", ov.periods, "horizon T (overrides config)");
    cmd->add_option("--slots", ov.slots, "page slots N (overrides config)");
    cmd->add_option("--method", ov.method, "allocator: me2a | fixed | wpo");
    cmd->add_option("--solver", ov.solver, "layout solver: auto | assignment | separable | brute");
    cmd->add_option("--update-rule", ov.update_rule, "dual update: free | projected");
    cmd->add_option("--pacing", ov.pacing, "pacing targets: static | adaptive");
    cmd->add_option("--step-c", ov.step_c, "step constant c in eta = c/sqrt(T)");
    cmd->add_option("--noise-sigma", ov.noise_sigma, "estimation noise std-dev");
    cmd->add_option("--benchmark", ov.benchmark, "regret benchmark: auto | dp | dual | none");
}

mirec::RunConfig apply_overrides(mirec::RunConfig cfg, const ConfigOverrides& ov) {
    if (ov.periods) cfg.periods = *ov.periods;
    if (ov.slots) cfg.slots = *ov.slots;
    if (ov.method) cfg.allocator.method = mirec::method_from_string(*ov.method);
    if (ov.solver) cfg.allocator.solver = mirec::solver_from_string(*ov.solver);
    if (ov.update_rule)
        cfg.allocator.update_rule = mirec::update_rule_from_string(*ov.update_rule);
    if (ov.pacing) cfg.allocator.pacing = mirec::pacing_from_string(*ov.pacing);
    if (ov.step_c) cfg.allocator.step_c = *ov.step_c;
    if (ov.noise_sigma) cfg.scorer.noise_sigma = *ov.noise_sigma;
    if (ov.benchmark) cfg.benchmark = mirec::benchmark_from_string(*ov.benchmark);
    if (ov.seed) cfg.seed = *ov.seed;
    cfg.validate();
    return cfg;
}

int cmd_run(const std::string& config_path, const ConfigOverrides& ov,
            const std::string& log_path, const std::string& report_path,
            const std::string& summary_path, const std::string& stream_path,
            const std::string& replay_path, bool shuffle_replay) {
    const mirec::RunConfig cfg = apply_overrides(mirec::load_run_config(config_path), ov);
    mirec::ReplaySource replay;
    if (!replay_path.empty()) {
        replay.requests = mirec::read_stream_file(replay_path).requests;
        replay.shuffle = shuffle_replay;
    }
    const mirec::RunResult result =
        mirec::run_stream(cfg, true, replay_path.empty() ? nullptr : &replay);
    if (!log_path.empty()) mirec::write_step_log(log_path, cfg, result);
    const std::string report = mirec::report_to_json(result.report).dump(2);
    if (!report_path.empty()) {
        std::ofstream out(report_path);
        out << report << '\n';
    }
    if (!summary_path.empty()) {
        std::ofstream out(summary_path);
        mirec::write_summary_csv(out, {result.report});
    }
    if (!stream_path.empty()) {
        std::ofstream out(stream_path);
        mirec::write_stream_file(out, cfg);
    }
    std::cout << report << '\n';
    return 0;
}

int cmd_sweep(const std::string& config_path, const ConfigOverrides& ov,
              std::vector<std::int64_t> T_list, std::uint32_t seeds, unsigned threads,
              const std::string& summary_path) {
    const mirec::RunConfig cfg = apply_overrides(mirec::load_run_config(config_path), ov);
    const mirec::SweepResult sw = mirec::sweep(cfg, T_list, seeds, threads);
    if (!summary_path.empty()) {
        std::ofstream out(summary_path);
        mirec::write_summary_csv(out, sw.rows);
    }
    std::printf("%12s %16s %16s %16s\n", "T", "mean_regret", "mean_underspend", "max_violation");
    for (const mirec::SweepPoint& p : sw.points)
        std::printf("%12lld %16.6g %16.6g %16.6g\n", static_cast<long long>(p.periods),
                    p.mean_regret, p.mean_underspend, p.mean_violation_max);
    std::printf("underspend log-log slope: %.4f\n", sw.underspend_slope);
    std::printf("regret log-log slope:     %.4f\n", sw.regret_slope);
    return 0;
}

int cmd_compare(const std::string& config_path, const ConfigOverrides& ov,
                const std::vector<std::string>& method_names, std::uint32_t seeds,
                const std::string& summary_path) {
    const mirec::RunConfig cfg = apply_overrides(mirec::load_run_config(config_path), ov);
    std::vector<mirec::MethodKind> methods;
    for (const std::string& s : method_names) methods.push_back(mirec::method_from_string(s));
    const std::vector<mirec::CompareRow> rows = mirec::compare_methods(cfg, methods, seeds);
    if (!summary_path.empty()) {
        std::vector<mirec::RunReport> all;
        for (const mirec::CompareRow& r : rows)
            all.insert(all.end(), r.runs.begin(), r.runs.end());
        std::ofstream out(summary_path);
        mirec::write_summary_csv(out, all);
    }
    std::printf("%8s %16s %16s %16s %12s\n", "method", "mean_utility", "mean_clicks",
                "worst_violation", "lift");
    for (const mirec::CompareRow& r : rows)
        std::printf("%8s %16.6f %16.1f %16.6f %11.2f%%\n", r.method.c_str(), r.mean_utility,
                    r.mean_realized_clicks, r.worst_lower_violation, 100.0 * r.lift_vs_fixed);
    return 0;
}

int cmd_oracle(const std::string& stream_path, std::size_t grid_points, bool no_refine,
               const std::string& out_path) {
    const mirec::RecordedStream rec = mirec::read_stream_file(stream_path);
    nlohmann::json out;
    out["stream"] = stream_path;
    out["periods"] = rec.requests.size();

    mirec::HindsightInstance inst{rec.requests, rec.budgets, rec.model};
    if (mirec::within_dp_bounds(inst)) {
        const mirec::HindsightResult dp = mirec::hindsight_opt_dp(inst);
        out["dp"] = {{"feasible", dp.feasible}};
        if (dp.feasible) out["dp"]["value"] = dp.value;
    } else {
        out["dp"] = {{"skipped", "instance outside exact-DP bounds"}};
    }

    double u_max = 0.0;
    for (const mirec::Request& r : rec.requests)
        for (const mirec::Candidate& c : r.candidates) u_max = std::max(u_max, c.utility);
    u_max = std::max(u_max, 1e-6);
    mirec::DualBound bound;
    if (no_refine) {
        std::vector<std::vector<double>> axes(rec.budgets.channel_count(),
                                              mirec::mu_axis(u_max, grid_points));
        bound = mirec::dual_upper_bound(rec.requests, rec.budgets, rec.model, axes);
    } else {
        bound = mirec::dual_upper_bound_refined(rec.requests, rec.budgets, rec.model, u_max,
                                                grid_points);
    }
    out["dual_bound"] = {{"value", bound.value},
                         {"argmin", bound.argmin},
                         {"evaluations", bound.evaluations}};
    const std::string text = out.dump(2);
    if (!out_path.empty()) {
        std::ofstream f(out_path);
        f << text << '\n';
    }
    std::cout << text << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-layer online exposure allocation simulator"};
    app.require_subcommand(1);

    std::string config_path, log_path, report_path, summary_path, stream_path;
    ConfigOverrides ov;

    CLI::App* run = app.add_subcommand("run", "simulate a single request stream");
    run->add_option("--config", config_path, "run configuration JSON")->required();
    std::uint64_t run_seed = 0;
    run->add_option("--seed", run_seed, "stream seed")->required();
    add_override_flags(run, ov);
    run->add_option("--log", log_path, "write the step log (JSONL)");
    run->add_option("--report", report_path, "write the run report (JSON)");
    run->add_option("--summary", summary_path, "write a one-row summary CSV");
    run->add_option("--dump-stream", stream_path, "record the request stream (JSONL)");
    std::string replay_path;
    bool shuffle_replay = false;
    run->add_option("--replay", replay_path, "feed a recorded stream instead of drawing one");
    run->add_flag("--shuffle-replay", shuffle_replay, "replay in a seeded shuffled order");

    CLI::App* sw = app.add_subcommand("sweep", "scaling grid over horizons and seeds");
    std::vector<std::int64_t> T_list;
    std::uint32_t seeds = 5;
    unsigned threads = 0;
    sw->add_option("--config", config_path, "run configuration JSON")->required();
    sw->add_option("--T-list", T_list, "horizons to sweep")->required();
    sw->add_option("--seeds", seeds, "seeds per horizon");
    sw->add_option("--threads", threads, "worker threads (0 = all cores)");
    add_override_flags(sw, ov);
    sw->add_option("--summary", summary_path, "write all rows as CSV");

    CLI::App* cmp = app.add_subcommand("compare", "head-to-head methods on shared streams");
    std::vector<std::string> methods{"me2a", "fixed", "wpo"};
    cmp->add_option("--config", config_path, "run configuration JSON")->required();
    cmp->add_option("--methods", methods, "methods to compare");
    cmp->add_option("--seeds", seeds, "shared seeds per method");
    add_override_flags(cmp, ov);
    cmp->add_option("--summary", summary_path, "write all rows as CSV");

    CLI::App* orc = app.add_subcommand("oracle", "benchmarks for a recorded stream");
    std::string oracle_stream, oracle_out;
    std::size_t grid_points = 41;
    bool no_refine = false;
    orc->add_option("--stream", oracle_stream, "recorded stream (JSONL)")->required();
    orc->add_option("--grid-points", grid_points, "points per grid axis");
    orc->add_flag("--no-refine", no_refine, "skip the refinement pass");
    orc->add_option("--out", oracle_out, "write the benchmark report (JSON)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            ov.seed = run_seed;
            return cmd_run(config_path, ov, log_path, report_path, summary_path, stream_path,
                           replay_path, shuffle_replay);
        }
        if (sw->parsed()) return cmd_sweep(config_path, ov, T_list, seeds, threads, summary_path);
        if (cmp->parsed()) return cmd_compare(config_path, ov, methods, seeds, summary_path);
        if (orc->parsed()) return cmd_oracle(oracle_stream, grid_points, no_refine, oracle_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
