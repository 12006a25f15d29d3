#pragma once
// Online simulation loop and experiment drivers.
//
// Per period: draw request -> drop candidates of frozen channels -> solve the
// page under the current prices -> book exposure -> subgradient -> price
// update. Every run emits a step log (one JSON object per line) from which
// the report is recomputable bit-for-bit, modulo the wall-clock field.

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "mirec/baselines.hpp"
#include "mirec/config.hpp"
#include "mirec/domain.hpp"
#include "mirec/dual.hpp"
#include "mirec/oracle.hpp"
#include "mirec/primal.hpp"
#include "mirec/scorer.hpp"

namespace mirec {

struct StepRecord {
    std::int64_t t = 0;
    std::vector<double> mu;  // prices used for this decision (zeros for baselines)
    std::vector<double> g;   // per-channel exposure consumed by the page
    double f = 0.0;          // page utility under position weights
    std::vector<ItemId> items;
    std::vector<double> remaining;  // per-channel remaining upper budget, post-page
    std::vector<std::uint8_t> clicks;
};

struct ChannelReportRow {
    double consumed = 0.0;
    double initial_min = 0.0;
    double initial_max = 0.0;
    double achieved_share = 0.0;
    double lower_violation = 0.0;
    double upper_headroom = 0.0;
};

struct BenchmarkInfo {
    std::string kind = "none";  // "dp", "dual", or "none"
    bool available = false;
    double value = 0.0;
};

struct RunReport {
    std::string method;
    std::int64_t periods = 0;
    std::uint32_t slots = 0;
    std::uint64_t seed = 0;
    double eta = 0.0;
    double expected_utility = 0.0;
    std::int64_t realized_clicks = 0;
    std::vector<ChannelReportRow> channels;
    double underspend = 0.0;     // sum_m [G^min_m - consumed_m]_+
    double violation_max = 0.0;  // max_m lower_violation
    std::int64_t tau_freeze = 0; // first period a channel was frozen; T if never
    BenchmarkInfo benchmark;
    double regret = 0.0;  // benchmark - expected_utility, meaningful iff available
    double wallclock_ms = 0.0;
};

struct RunResult {
    RunReport report;
    std::vector<StepRecord> steps;  // empty when keep_steps = false
    DualState dual;                 // final dual state (me2a)
    BetaWeights betas;              // final betas (wpo)
};

// Regenerates the full i.i.d. request stream for a config. Requests are pure
// functions of (seed, t), so benchmarks never need the stream persisted.
inline std::vector<Request> synth_stream(const RunConfig& cfg) {
    const SyntheticWorld world = cfg.make_world();
    std::vector<Request> requests;
    requests.reserve(cfg.periods);
    for (std::int64_t t = 1; t <= cfg.periods; ++t)
        requests.push_back(draw_request(world, t, cfg.scorer.candidates_per_channel));
    return requests;
}

// Replay source for ablations: feed a recorded stream back through the loop
// instead of drawing fresh requests, optionally in a seeded shuffled order.
struct ReplaySource {
    std::vector<Request> requests;
    bool shuffle = false;
};

namespace detail {

// Order and relabel replayed requests so period indices stay 1..T.
inline std::vector<Request> replay_order(const ReplaySource& replay, std::uint64_t seed) {
    std::vector<Request> out = replay.requests;
    if (replay.shuffle) {
        for (std::size_t i = out.size(); i > 1; --i) {
            const std::size_t j = rng::mix(seed, 0x7265706cULL, i) % i;
            std::swap(out[i - 1], out[j]);
        }
    }
    for (std::size_t i = 0; i < out.size(); ++i) out[i].t = static_cast<std::int64_t>(i + 1);
    return out;
}

inline double page_utility(const PageLayout& layout, const ExposureModel& model) {
    double f = 0.0;
    for (std::size_t n = 0; n < layout.slots.size(); ++n)
        f += model.weights[n] * layout.slots[n].utility;
    return f;
}

// Benchmark selection: exact DP whenever the instance fits its bounds; else a
// two-point dual bound at mu = 0 and at the run's time-averaged prices (both
// upper bounds by weak duality, the min is reported).
inline BenchmarkInfo compute_benchmark(const RunConfig& cfg, const std::vector<double>& mu_bar,
                                       const std::vector<Request>* replayed) {
    BenchmarkInfo info;
    const BenchmarkKind kind = cfg.benchmark;
    if (kind == BenchmarkKind::none) return info;

    const ExposureModel model = cfg.make_exposure_model();
    HindsightInstance inst{replayed ? *replayed : synth_stream(cfg),
                           budgets_from_shares(cfg.channels, cfg.periods, model), model};
    const bool dp_ok = within_dp_bounds(inst);
    if (kind == BenchmarkKind::dp || (kind == BenchmarkKind::auto_select && dp_ok)) {
        const HindsightResult r = hindsight_opt_dp(inst);
        if (r.feasible) {
            info.kind = "dp";
            info.available = true;
            info.value = r.value;
            return info;
        }
        if (kind == BenchmarkKind::dp) return info;  // infeasible, nothing to report
    }
    if (kind == BenchmarkKind::dual) {
        double u_max = 0.0;
        for (const Request& r : inst.requests)
            for (const Candidate& c : r.candidates) u_max = std::max(u_max, c.utility);
        const DualBound b =
            dual_upper_bound_refined(inst.requests, inst.budgets, inst.model, std::max(u_max, 1e-6));
        info.kind = "dual";
        info.available = true;
        info.value = b.value;
        return info;
    }
    // auto fallback: cheap two-point grid
    const std::vector<double> zeros(cfg.channel_count(), 0.0);
    double best = empirical_dual(zeros, inst.requests, inst.budgets, inst.model);
    if (!mu_bar.empty())
        best = std::min(best, empirical_dual(mu_bar, inst.requests, inst.budgets, inst.model));
    info.kind = "dual";
    info.available = true;
    info.value = best;
    return info;
}

}  // namespace detail

inline RunResult run_stream(const RunConfig& cfg, bool keep_steps = true,
                            const ReplaySource* replay = nullptr) {
    cfg.validate();
    const auto t_start = std::chrono::steady_clock::now();

    std::vector<Request> replayed;
    if (replay) {
        if (static_cast<std::int64_t>(replay->requests.size()) != cfg.periods)
            throw std::invalid_argument("replay stream has " +
                                        std::to_string(replay->requests.size()) +
                                        " requests, config expects " +
                                        std::to_string(cfg.periods));
        replayed = detail::replay_order(*replay, cfg.seed);
    }

    const ExposureModel model = cfg.make_exposure_model();
    const SyntheticWorld world = cfg.make_world();
    const std::size_t n_channels = cfg.channel_count();
    ExposureLedger ledger = budgets_from_shares(cfg.channels, cfg.periods, model);

    RunResult result;
    result.dual = make_dual_state(n_channels, step_schedule(cfg.allocator.step_c, cfg.periods),
                                  cfg.allocator.update_rule, cfg.allocator.pacing);
    result.betas = make_beta_weights(n_channels, cfg.allocator.wpo.kappa,
                                     cfg.allocator.wpo.beta_lo, cfg.allocator.wpo.beta_hi);

    std::vector<double> lower_shares(n_channels, 0.0);
    double lower_sum = 0.0;
    for (std::size_t m = 0; m < n_channels; ++m) {
        lower_shares[m] = cfg.channels[m].lower_share;
        lower_sum += lower_shares[m];
    }
    FixedPattern pattern;
    if (cfg.allocator.method == MethodKind::fixed) {
        // no floors configured: fall back to an even split
        std::vector<double> shares =
            lower_sum > 0.0 ? lower_shares : std::vector<double>(n_channels, 1.0);
        pattern = pattern_from_shares(shares, cfg.slots);
    }
    const PacingTargets static_targets =
        make_pacing_targets(ledger, PacingMode::static_rate, cfg.periods, 0);

    const std::vector<double> zero_mu(n_channels, 0.0);
    std::vector<double> mu_sum(n_channels, 0.0);
    double expected_utility = 0.0;
    std::int64_t realized_clicks = 0;
    std::int64_t tau_freeze = 0;
    if (keep_steps) result.steps.reserve(static_cast<std::size_t>(cfg.periods));

    for (std::int64_t t = 1; t <= cfg.periods; ++t) {
        const Request request =
            replay ? replayed[t - 1] : draw_request(world, t, cfg.scorer.candidates_per_channel);

        if (tau_freeze == 0)
            for (ChannelId m = 0; m < n_channels; ++m)
                if (channel_frozen(ledger, m, model)) {
                    tau_freeze = t;
                    break;
                }

        Request live = request;
        live.candidates = filter_exhausted(request, ledger, model);

        PageLayout layout;
        switch (cfg.allocator.method) {
            case MethodKind::me2a:
                layout = solve_layout(cfg.allocator.solver, live.candidates, result.dual.mu,
                                      model.weights, model.weights);
                break;
            case MethodKind::fixed:
                layout = fixed_allocate(live, pattern);
                break;
            case MethodKind::wpo:
                layout = wpo_allocate(live, result.betas, cfg.slots);
                break;
        }
        if (auto violation = validate_layout(layout, request, cfg.slots))
            throw std::logic_error("t=" + std::to_string(t) + ": solver produced invalid layout: " +
                                   *violation);

        const std::vector<double> g = consume(ledger, layout, model);
        const double f = detail::page_utility(layout, model);
        expected_utility += f;
        const std::vector<std::uint8_t> clicks =
            realize_feedback(world, request.user_key, t, layout, model);
        for (std::uint8_t c : clicks) realized_clicks += c;

        if (keep_steps) {
            StepRecord rec;
            rec.t = t;
            rec.mu = cfg.allocator.method == MethodKind::me2a ? result.dual.mu : zero_mu;
            rec.g = g;
            rec.f = f;
            rec.items.reserve(layout.slots.size());
            for (const Candidate& c : layout.slots) rec.items.push_back(c.item_id);
            rec.remaining.resize(n_channels);
            for (ChannelId m = 0; m < n_channels; ++m) rec.remaining[m] = ledger.remaining_max(m);
            rec.clicks = clicks;
            result.steps.push_back(std::move(rec));
        }

        if (cfg.allocator.method == MethodKind::me2a) {
            for (std::size_t m = 0; m < n_channels; ++m) mu_sum[m] += result.dual.mu[m];
            const PacingTargets targets =
                cfg.allocator.pacing == PacingMode::static_rate
                    ? static_targets
                    : make_pacing_targets(ledger, PacingMode::adaptive_rate, cfg.periods, t);
            const std::vector<double> grad = subgradient(result.dual.mu, g, targets);
            result.dual = update(result.dual, grad);
        } else if (cfg.allocator.method == MethodKind::wpo) {
            const double mass_so_far = static_cast<double>(t) * model.page_mass();
            std::vector<double> achieved(n_channels);
            for (ChannelId m = 0; m < n_channels; ++m)
                achieved[m] = ledger.consumed(m) / mass_so_far;
            result.betas = wpo_feedback(result.betas, achieved, lower_shares);
        }
    }

    const auto t_loop = std::chrono::steady_clock::now();

    RunReport& rep = result.report;
    rep.method = to_string(cfg.allocator.method);
    rep.periods = cfg.periods;
    rep.slots = cfg.slots;
    rep.seed = cfg.seed;
    rep.eta = result.dual.step_eta;
    rep.expected_utility = expected_utility;
    rep.realized_clicks = realized_clicks;
    rep.tau_freeze = tau_freeze == 0 ? cfg.periods : tau_freeze;
    const std::vector<ChannelCompleteness> comp = completeness(ledger);
    rep.channels.resize(n_channels);
    for (ChannelId m = 0; m < n_channels; ++m) {
        ChannelReportRow& row = rep.channels[m];
        row.consumed = ledger.consumed(m);
        row.initial_min = ledger.initial_min(m);
        row.initial_max = ledger.initial_max(m);
        row.achieved_share = comp[m].achieved_share;
        row.lower_violation = comp[m].lower_violation;
        row.upper_headroom = comp[m].upper_headroom;
        rep.underspend += std::max(0.0, row.initial_min - row.consumed);
        rep.violation_max = std::max(rep.violation_max, row.lower_violation);
    }

    std::vector<double> mu_bar(n_channels, 0.0);
    for (std::size_t m = 0; m < n_channels; ++m)
        mu_bar[m] = mu_sum[m] / static_cast<double>(cfg.periods);
    rep.benchmark = detail::compute_benchmark(cfg, mu_bar, replay ? &replayed : nullptr);
    rep.regret = rep.benchmark.available ? regret(expected_utility, rep.benchmark.value) : 0.0;
    rep.wallclock_ms =
        std::chrono::duration<double, std::milli>(t_loop - t_start).count();
    return result;
}

// ---- report / log serialization ---------------------------------------------

inline nlohmann::json report_to_json(const RunReport& r, bool include_wallclock = true) {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["method"] = r.method;
    j["periods"] = r.periods;
    j["slots"] = r.slots;
    j["seed"] = r.seed;
    j["eta"] = r.eta;
    j["expected_utility"] = r.expected_utility;
    j["realized_clicks"] = r.realized_clicks;
    j["channels"] = nlohmann::json::array();
    for (const ChannelReportRow& c : r.channels)
        j["channels"].push_back({{"consumed", c.consumed},
                                 {"initial_min", c.initial_min},
                                 {"initial_max", c.initial_max},
                                 {"achieved_share", c.achieved_share},
                                 {"lower_violation", c.lower_violation},
                                 {"upper_headroom", c.upper_headroom}});
    j["underspend"] = r.underspend;
    j["violation_max"] = r.violation_max;
    j["tau_freeze"] = r.tau_freeze;
    j["benchmark"] = {{"kind", r.benchmark.kind}, {"available", r.benchmark.available}};
    if (r.benchmark.available) {
        j["benchmark"]["value"] = r.benchmark.value;
        j["regret"] = r.regret;
    }
    if (include_wallclock) j["wallclock_ms"] = r.wallclock_ms;
    return j;
}

// Everything except timing; the replay-equality contract compares this.
inline std::string report_signature(const RunReport& r) {
    return report_to_json(r, false).dump();
}

// Step log: a header object followed by one object per period. The header
// carries everything a reader needs to rebuild the report without the config.
inline void write_step_log(std::ostream& out, const RunConfig& cfg, const RunResult& result) {
    const ExposureModel model = cfg.make_exposure_model();
    nlohmann::json header;
    header["kind"] = "header";
    header["schema_version"] = 1;
    header["method"] = result.report.method;
    header["periods"] = cfg.periods;
    header["slots"] = cfg.slots;
    header["seed"] = cfg.seed;
    header["eta"] = result.report.eta;
    header["weights"] = model.weights;
    nlohmann::json imax = nlohmann::json::array(), imin = nlohmann::json::array();
    for (const ChannelReportRow& c : result.report.channels) {
        imax.push_back(c.initial_max);
        imin.push_back(c.initial_min);
    }
    header["initial_max"] = imax;
    header["initial_min"] = imin;
    header["benchmark"] = {{"kind", result.report.benchmark.kind},
                           {"available", result.report.benchmark.available}};
    if (result.report.benchmark.available)
        header["benchmark"]["value"] = result.report.benchmark.value;
    out << header.dump() << '\n';
    for (const StepRecord& s : result.steps) {
        nlohmann::json j;
        j["kind"] = "step";
        j["t"] = s.t;
        j["mu"] = s.mu;
        j["g"] = s.g;
        j["f"] = s.f;
        j["items"] = s.items;
        j["remaining"] = s.remaining;
        j["clicks"] = s.clicks;
        out << j.dump() << '\n';
    }
}

inline void write_step_log(const std::string& path, const RunConfig& cfg,
                           const RunResult& result) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open step log for writing: " + path);
    write_step_log(out, cfg, result);
}

// Rebuilds the report from a step log alone. Field-for-field identical to the
// original (wall-clock excepted, which a log cannot carry).
inline RunReport replay_report(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty step log");
    const nlohmann::json header = nlohmann::json::parse(line);
    if (header.value("kind", "") != "header") throw std::runtime_error("missing log header");

    RunReport rep;
    rep.method = header.at("method").get<std::string>();
    rep.periods = header.at("periods").get<std::int64_t>();
    rep.slots = header.at("slots").get<std::uint32_t>();
    rep.seed = header.at("seed").get<std::uint64_t>();
    rep.eta = header.at("eta").get<double>();
    const std::vector<double> weights = header.at("weights").get<std::vector<double>>();
    const std::vector<double> initial_max = header.at("initial_max").get<std::vector<double>>();
    const std::vector<double> initial_min = header.at("initial_min").get<std::vector<double>>();
    const std::size_t n_channels = initial_max.size();
    double page_mass = 0.0;
    for (double w : weights) page_mass += w;
    const double total_budget = static_cast<double>(rep.periods) * page_mass;

    std::vector<double> consumed(n_channels, 0.0);
    std::int64_t tau_freeze = 0;
    std::int64_t records = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const nlohmann::json j = nlohmann::json::parse(line);
        if (j.value("kind", "") != "step") continue;
        ++records;
        if (tau_freeze == 0)
            for (std::size_t m = 0; m < n_channels; ++m)
                if (initial_max[m] - consumed[m] < page_mass) {
                    tau_freeze = j.at("t").get<std::int64_t>();
                    break;
                }
        const std::vector<double> g = j.at("g").get<std::vector<double>>();
        for (std::size_t m = 0; m < n_channels; ++m) consumed[m] += g[m];
        rep.expected_utility += j.at("f").get<double>();
        for (std::uint8_t c : j.at("clicks").get<std::vector<std::uint8_t>>())
            rep.realized_clicks += c;
    }
    if (records != rep.periods)
        throw std::runtime_error("step log truncated: " + std::to_string(records) + " of " +
                                 std::to_string(rep.periods) + " records");
    rep.tau_freeze = tau_freeze == 0 ? rep.periods : tau_freeze;
    rep.channels.resize(n_channels);
    for (std::size_t m = 0; m < n_channels; ++m) {
        ChannelReportRow& row = rep.channels[m];
        row.consumed = consumed[m];
        row.initial_min = initial_min[m];
        row.initial_max = initial_max[m];
        row.achieved_share = total_budget > 0.0 ? consumed[m] / total_budget : 0.0;
        row.lower_violation =
            initial_min[m] > 0.0
                ? std::max(0.0, (initial_min[m] - consumed[m]) / initial_min[m])
                : 0.0;
        row.upper_headroom = initial_max[m] - consumed[m];
        rep.underspend += std::max(0.0, row.initial_min - row.consumed);
        rep.violation_max = std::max(rep.violation_max, row.lower_violation);
    }
    rep.benchmark.kind = header.at("benchmark").at("kind").get<std::string>();
    rep.benchmark.available = header.at("benchmark").at("available").get<bool>();
    if (rep.benchmark.available) {
        rep.benchmark.value = header.at("benchmark").at("value").get<double>();
        rep.regret = regret(rep.expected_utility, rep.benchmark.value);
    }
    return rep;
}

inline RunReport replay_report(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open step log: " + path);
    return replay_report(in);
}

// ---- recorded streams --------------------------------------------------------

struct RecordedStream {
    std::vector<Request> requests;
    ExposureLedger budgets;
    ExposureModel model;
};

inline void write_stream_file(std::ostream& out, const RunConfig& cfg) {
    const ExposureModel model = cfg.make_exposure_model();
    const ExposureLedger ledger = budgets_from_shares(cfg.channels, cfg.periods, model);
    nlohmann::json header;
    header["kind"] = "stream_header";
    header["schema_version"] = 1;
    header["periods"] = cfg.periods;
    header["slots"] = cfg.slots;
    header["exposure_kind"] = to_string(model.kind);
    header["weights"] = model.weights;
    nlohmann::json imax = nlohmann::json::array(), imin = nlohmann::json::array();
    for (ChannelId m = 0; m < ledger.channel_count(); ++m) {
        imax.push_back(ledger.initial_max(m));
        imin.push_back(ledger.initial_min(m));
    }
    header["initial_max"] = imax;
    header["initial_min"] = imin;
    out << header.dump() << '\n';
    for (const Request& r : synth_stream(cfg)) {
        nlohmann::json j;
        j["kind"] = "request";
        j["t"] = r.t;
        j["user_key"] = r.user_key;
        nlohmann::json cands = nlohmann::json::array();
        for (const Candidate& c : r.candidates)
            cands.push_back({c.item_id, c.channel, c.utility});
        j["candidates"] = std::move(cands);
        out << j.dump() << '\n';
    }
}

inline RecordedStream read_stream_file(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty stream file");
    const nlohmann::json header = nlohmann::json::parse(line);
    if (header.value("kind", "") != "stream_header")
        throw std::runtime_error("missing stream header");
    RecordedStream rec;
    const std::vector<double> weights = header.at("weights").get<std::vector<double>>();
    rec.model = ExposureModel::from_weights(
        exposure_kind_from_string(header.at("exposure_kind").get<std::string>()), weights);
    const std::vector<double> imax = header.at("initial_max").get<std::vector<double>>();
    const std::vector<double> imin = header.at("initial_min").get<std::vector<double>>();
    std::vector<ExposureLedger::Entry> entries(imax.size());
    for (std::size_t m = 0; m < imax.size(); ++m) {
        entries[m].initial_max = imax[m];
        entries[m].initial_min = imin[m];
    }
    const double total =
        static_cast<double>(header.at("periods").get<std::int64_t>()) * rec.model.page_mass();
    rec.budgets = ExposureLedger(std::move(entries), total);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const nlohmann::json j = nlohmann::json::parse(line);
        if (j.value("kind", "") != "request") continue;
        Request r;
        r.t = j.at("t").get<std::int64_t>();
        r.user_key = j.at("user_key").get<std::uint64_t>();
        for (const nlohmann::json& cj : j.at("candidates"))
            r.candidates.push_back(Candidate{cj.at(0).get<ItemId>(), cj.at(1).get<ChannelId>(),
                                             cj.at(2).get<double>()});
        rec.requests.push_back(std::move(r));
    }
    return rec;
}

inline RecordedStream read_stream_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open stream file: " + path);
    return read_stream_file(in);
}

// ---- summary CSV --------------------------------------------------------------

inline std::string summary_csv_header() {
    return "method,T,seed,utility,regret,underspend,violation_max,tau_freeze,wallclock_ms";
}

inline std::string summary_csv_row(const RunReport& r) {
    char buf[320];
    std::snprintf(buf, sizeof(buf), "%s,%lld,%llu,%.10g,%.10g,%.10g,%.10g,%lld,%.3f",
                  r.method.c_str(), static_cast<long long>(r.periods),
                  static_cast<unsigned long long>(r.seed), r.expected_utility,
                  r.benchmark.available ? r.regret : std::numeric_limits<double>::quiet_NaN(),
                  r.underspend, r.violation_max, static_cast<long long>(r.tau_freeze),
                  r.wallclock_ms);
    return std::string(buf);
}

inline void write_summary_csv(std::ostream& out, const std::vector<RunReport>& reports) {
    out << summary_csv_header() << '\n';
    for (const RunReport& r : reports) out << summary_csv_row(r) << '\n';
}

// ---- experiment drivers --------------------------------------------------------

// Least-squares slope of log(y) on log(x); y is clamped away from zero so an
// exactly-met budget (underspend 0) cannot produce -inf.
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("slope needs >= 2 points");
    const std::size_t n = x.size();
    double sx = 0.0, sy = 0.0;
    std::vector<double> lx(n), ly(n);
    for (std::size_t i = 0; i < n; ++i) {
        lx[i] = std::log(x[i]);
        ly[i] = std::log(std::max(y[i], 1e-12));
        sx += lx[i];
        sy += ly[i];
    }
    const double mx = sx / n, my = sy / n;
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        num += (lx[i] - mx) * (ly[i] - my);
        den += (lx[i] - mx) * (lx[i] - mx);
    }
    return num / den;
}

struct SweepPoint {
    std::int64_t periods = 0;
    double mean_regret = 0.0;
    double mean_underspend = 0.0;
    double mean_violation_max = 0.0;
};

struct SweepResult {
    std::vector<RunReport> rows;  // one per (T, seed), T-major
    std::vector<SweepPoint> points;
    double regret_slope = 0.0;
    double underspend_slope = 0.0;
};

// Scaling sweep: every (T, seed) pair runs independently (eta tracks c/sqrt(T)
// through the step schedule). Pairs fan out over a small worker pool; results
// land in pre-assigned slots so output is independent of scheduling.
inline SweepResult sweep(const RunConfig& base, const std::vector<std::int64_t>& T_list,
                         std::uint32_t n_seeds, unsigned threads = 0) {
    if (T_list.empty() || n_seeds == 0) throw std::invalid_argument("empty sweep grid");
    struct Job {
        std::int64_t T;
        std::uint64_t seed;
    };
    std::vector<Job> jobs;
    for (std::int64_t T : T_list)
        for (std::uint32_t s = 0; s < n_seeds; ++s) jobs.push_back({T, base.seed + s});

    SweepResult result;
    result.rows.resize(jobs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= jobs.size()) return;
            RunConfig cfg = base;
            cfg.periods = jobs[i].T;
            cfg.seed = jobs[i].seed;
            result.rows[i] = run_stream(cfg, /*keep_steps=*/false).report;
        }
    };
    unsigned n_threads = threads == 0 ? std::thread::hardware_concurrency() : threads;
    n_threads = std::max(1u, std::min<unsigned>(n_threads, jobs.size()));
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(worker);
        for (std::thread& th : pool) th.join();
    }

    std::vector<double> xs, regrets, underspends;
    for (std::size_t ti = 0; ti < T_list.size(); ++ti) {
        SweepPoint p;
        p.periods = T_list[ti];
        std::size_t with_benchmark = 0;
        for (std::uint32_t s = 0; s < n_seeds; ++s) {
            const RunReport& r = result.rows[ti * n_seeds + s];
            if (r.benchmark.available) {
                p.mean_regret += r.regret;
                ++with_benchmark;
            }
            p.mean_underspend += r.underspend;
            p.mean_violation_max = std::max(p.mean_violation_max, r.violation_max);
        }
        p.mean_regret = with_benchmark > 0
                            ? p.mean_regret / static_cast<double>(with_benchmark)
                            : std::numeric_limits<double>::quiet_NaN();
        p.mean_underspend /= static_cast<double>(n_seeds);
        result.points.push_back(p);
        xs.push_back(static_cast<double>(p.periods));
        regrets.push_back(p.mean_regret);
        underspends.push_back(p.mean_underspend);
    }
    result.underspend_slope = loglog_slope(xs, underspends);
    const bool all_benchmarked =
        std::none_of(regrets.begin(), regrets.end(), [](double v) { return std::isnan(v); });
    result.regret_slope = all_benchmarked && xs.size() >= 2
                              ? loglog_slope(xs, regrets)
                              : std::numeric_limits<double>::quiet_NaN();
    return result;
}

struct CompareRow {
    std::string method;
    double mean_utility = 0.0;
    double mean_realized_clicks = 0.0;
    double worst_lower_violation = 0.0;
    double lift_vs_fixed = 0.0;
    std::vector<RunReport> runs;
};

// Head-to-head on shared streams: same seeds, same worlds, methods differ only
// in the allocator. Lift is relative to the fixed baseline when present.
inline std::vector<CompareRow> compare_methods(const RunConfig& base,
                                               const std::vector<MethodKind>& methods,
                                               std::uint32_t n_seeds) {
    if (methods.empty() || n_seeds == 0) throw std::invalid_argument("empty comparison");
    std::vector<CompareRow> rows;
    for (MethodKind m : methods) {
        CompareRow row;
        row.method = to_string(m);
        for (std::uint32_t s = 0; s < n_seeds; ++s) {
            RunConfig cfg = base;
            cfg.allocator.method = m;
            cfg.seed = base.seed + s;
            RunReport rep = run_stream(cfg, /*keep_steps=*/false).report;
            row.mean_utility += rep.expected_utility;
            row.mean_realized_clicks += static_cast<double>(rep.realized_clicks);
            row.worst_lower_violation = std::max(row.worst_lower_violation, rep.violation_max);
            row.runs.push_back(std::move(rep));
        }
        row.mean_utility /= n_seeds;
        row.mean_realized_clicks /= n_seeds;
        rows.push_back(std::move(row));
    }
    const auto fixed_it =
        std::find_if(rows.begin(), rows.end(),
                     [](const CompareRow& r) { return r.method == "fixed"; });
    if (fixed_it != rows.end() && fixed_it->mean_utility != 0.0)
        for (CompareRow& r : rows)
            r.lift_vs_fixed = (r.mean_utility - fixed_it->mean_utility) / fixed_it->mean_utility;
    return rows;
}

}  // namespace mirec
