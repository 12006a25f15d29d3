#pragma once
// Run configuration: one JSON document drives a whole simulation. Parsing is
// strict -- unknown keys are rejected so typos fail loudly -- and
// serialization round-trips losslessly.

#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "mirec/baselines.hpp"
#include "mirec/domain.hpp"
#include "mirec/dual.hpp"
#include "mirec/primal.hpp"
#include "mirec/scorer.hpp"

namespace mirec {

enum class MethodKind { me2a, fixed, wpo };
enum class BenchmarkKind { auto_select, dp, dual, none };

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct ScorerConfig {
    std::uint32_t user_dim = 8;
    std::vector<double> channel_bias;  // defaults to zeros, one per channel
    double noise_sigma = 0.0;
    std::uint64_t items_per_channel = 100000;
    std::uint32_t candidates_per_channel = 20;
};

struct ExposureConfig {
    ExposureModel::Kind kind = ExposureModel::Kind::uniform;
    double decay = 1.0;                   // position_decayed only
    std::vector<double> weights;          // explicit override, empty = derive
};

struct WpoConfig {
    double kappa = 0.3;
    double beta_lo = 0.1;
    double beta_hi = 10.0;
};

struct AllocatorConfig {
    MethodKind method = MethodKind::me2a;
    SolverKind solver = SolverKind::auto_select;
    UpdateRule update_rule = UpdateRule::free_signed;
    PacingMode pacing = PacingMode::static_rate;
    double step_c = 1.0;
    WpoConfig wpo;
};

struct RunConfig {
    int schema_version = 1;
    std::int64_t periods = 1000;  // T
    std::uint32_t slots = 10;     // N
    std::vector<ChannelSpec> channels;
    ExposureConfig exposure;
    ScorerConfig scorer;
    AllocatorConfig allocator;
    BenchmarkKind benchmark = BenchmarkKind::auto_select;
    std::uint64_t seed = 0;

    std::size_t channel_count() const { return channels.size(); }

    ExposureModel make_exposure_model() const {
        if (!exposure.weights.empty())
            return ExposureModel::from_weights(exposure.kind, exposure.weights);
        return exposure.kind == ExposureModel::Kind::uniform
                   ? ExposureModel::uniform(slots)
                   : ExposureModel::position_decayed(slots, exposure.decay);
    }

    SyntheticWorld make_world() const {
        SyntheticWorld w;
        w.seed = seed;
        w.user_dim = scorer.user_dim;
        w.channel_bias = scorer.channel_bias;
        if (w.channel_bias.empty()) w.channel_bias.assign(channels.size(), 0.0);
        w.noise_sigma = scorer.noise_sigma;
        w.items_per_channel = scorer.items_per_channel;
        return w;
    }

    void validate() const {
        if (schema_version != 1) throw ConfigError("unsupported schema_version");
        if (periods < 1) throw ConfigError("periods must be >= 1");
        if (slots < 1) throw ConfigError("slots must be >= 1");
        validate_channel_specs(channels);
        if (!scorer.channel_bias.empty() && scorer.channel_bias.size() != channels.size())
            throw ConfigError("channel_bias length must equal channel count");
        if (scorer.noise_sigma < 0.0) throw ConfigError("noise_sigma must be >= 0");
        if (scorer.candidates_per_channel < 1)
            throw ConfigError("candidates_per_channel must be >= 1");
        if (channels.size() * scorer.candidates_per_channel < slots)
            throw ConfigError("too few candidates per request to fill a page");
        if (!(allocator.step_c > 0.0)) throw ConfigError("step_c must be positive");
        make_exposure_model().validate();
    }
};

// ---- enum <-> string -------------------------------------------------------

inline std::string to_string(MethodKind m) {
    switch (m) {
        case MethodKind::me2a: return "me2a";
        case MethodKind::fixed: return "fixed";
        case MethodKind::wpo: return "wpo";
    }
    return "?";
}

inline MethodKind method_from_string(const std::string& s) {
    if (s == "me2a") return MethodKind::me2a;
    if (s == "fixed") return MethodKind::fixed;
    if (s == "wpo") return MethodKind::wpo;
    throw ConfigError("unknown method: " + s);
}

inline std::string to_string(SolverKind s) {
    switch (s) {
        case SolverKind::auto_select: return "auto";
        case SolverKind::assignment: return "assignment";
        case SolverKind::separable: return "separable";
        case SolverKind::brute: return "brute";
    }
    return "?";
}

inline SolverKind solver_from_string(const std::string& s) {
    if (s == "auto") return SolverKind::auto_select;
    if (s == "assignment") return SolverKind::assignment;
    if (s == "separable") return SolverKind::separable;
    if (s == "brute") return SolverKind::brute;
    throw ConfigError("unknown solver: " + s);
}

inline std::string to_string(UpdateRule r) {
    return r == UpdateRule::free_signed ? "free" : "projected";
}

inline UpdateRule update_rule_from_string(const std::string& s) {
    if (s == "free") return UpdateRule::free_signed;
    if (s == "projected") return UpdateRule::projected;
    throw ConfigError("unknown update_rule: " + s);
}

inline std::string to_string(PacingMode p) {
    return p == PacingMode::static_rate ? "static" : "adaptive";
}

inline PacingMode pacing_from_string(const std::string& s) {
    if (s == "static") return PacingMode::static_rate;
    if (s == "adaptive") return PacingMode::adaptive_rate;
    throw ConfigError("unknown pacing: " + s);
}

inline std::string to_string(BenchmarkKind b) {
    switch (b) {
        case BenchmarkKind::auto_select: return "auto";
        case BenchmarkKind::dp: return "dp";
        case BenchmarkKind::dual: return "dual";
        case BenchmarkKind::none: return "none";
    }
    return "?";
}

inline BenchmarkKind benchmark_from_string(const std::string& s) {
    if (s == "auto") return BenchmarkKind::auto_select;
    if (s == "dp") return BenchmarkKind::dp;
    if (s == "dual") return BenchmarkKind::dual;
    if (s == "none") return BenchmarkKind::none;
    throw ConfigError("unknown benchmark: " + s);
}

inline std::string to_string(ExposureModel::Kind k) {
    return k == ExposureModel::Kind::uniform ? "uniform" : "position_decayed";
}

inline ExposureModel::Kind exposure_kind_from_string(const std::string& s) {
    if (s == "uniform") return ExposureModel::Kind::uniform;
    if (s == "position_decayed") return ExposureModel::Kind::position_decayed;
    throw ConfigError("unknown exposure kind: " + s);
}

// ---- JSON ------------------------------------------------------------------

namespace detail {

inline void reject_unknown_keys(const nlohmann::json& j, const char* section,
                                std::initializer_list<const char*> allowed) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : allowed)
            if (it.key() == k) ok = true;
        if (!ok)
            throw ConfigError(std::string("unknown key '") + it.key() + "' in " + section);
    }
}

}  // namespace detail

inline nlohmann::json run_config_to_json(const RunConfig& c) {
    nlohmann::json j;
    j["schema_version"] = c.schema_version;
    j["periods"] = c.periods;
    j["slots"] = c.slots;
    j["channels"] = nlohmann::json::array();
    for (const ChannelSpec& s : c.channels)
        j["channels"].push_back({{"id", s.id},
                                 {"lower_share", s.lower_share},
                                 {"upper_share", s.upper_share}});
    j["exposure"] = {{"kind", to_string(c.exposure.kind)}};
    if (c.exposure.kind == ExposureModel::Kind::position_decayed)
        j["exposure"]["decay"] = c.exposure.decay;
    if (!c.exposure.weights.empty()) j["exposure"]["weights"] = c.exposure.weights;
    j["scorer"] = {{"user_dim", c.scorer.user_dim},
                   {"channel_bias", c.scorer.channel_bias},
                   {"noise_sigma", c.scorer.noise_sigma},
                   {"items_per_channel", c.scorer.items_per_channel},
                   {"candidates_per_channel", c.scorer.candidates_per_channel}};
    j["allocator"] = {{"method", to_string(c.allocator.method)},
                      {"solver", to_string(c.allocator.solver)},
                      {"update_rule", to_string(c.allocator.update_rule)},
                      {"pacing", to_string(c.allocator.pacing)},
                      {"step_c", c.allocator.step_c},
                      {"wpo",
                       {{"kappa", c.allocator.wpo.kappa},
                        {"beta_lo", c.allocator.wpo.beta_lo},
                        {"beta_hi", c.allocator.wpo.beta_hi}}}};
    j["benchmark"] = to_string(c.benchmark);
    j["seed"] = c.seed;
    return j;
}

inline RunConfig run_config_from_json(const nlohmann::json& j) {
    detail::reject_unknown_keys(j, "config root",
                                {"schema_version", "periods", "slots", "channels", "exposure",
                                 "scorer", "allocator", "benchmark", "seed"});
    RunConfig c;
    c.schema_version = j.value("schema_version", 1);
    if (!j.contains("periods")) throw ConfigError("missing 'periods'");
    c.periods = j.at("periods").get<std::int64_t>();
    if (!j.contains("slots")) throw ConfigError("missing 'slots'");
    c.slots = j.at("slots").get<std::uint32_t>();
    if (!j.contains("channels")) throw ConfigError("missing 'channels'");
    for (const nlohmann::json& cj : j.at("channels")) {
        detail::reject_unknown_keys(cj, "channels[]", {"id", "lower_share", "upper_share"});
        ChannelSpec s;
        s.id = cj.at("id").get<ChannelId>();
        s.lower_share = cj.value("lower_share", 0.0);
        s.upper_share = cj.value("upper_share", 1.0);
        c.channels.push_back(s);
    }
    if (j.contains("exposure")) {
        const nlohmann::json& ej = j.at("exposure");
        detail::reject_unknown_keys(ej, "exposure", {"kind", "decay", "weights"});
        c.exposure.kind = exposure_kind_from_string(ej.value("kind", "uniform"));
        c.exposure.decay = ej.value("decay", 1.0);
        if (ej.contains("weights")) c.exposure.weights = ej.at("weights").get<std::vector<double>>();
    }
    if (j.contains("scorer")) {
        const nlohmann::json& sj = j.at("scorer");
        detail::reject_unknown_keys(sj, "scorer",
                                    {"user_dim", "channel_bias", "noise_sigma",
                                     "items_per_channel", "candidates_per_channel"});
        c.scorer.user_dim = sj.value("user_dim", 8u);
        if (sj.contains("channel_bias"))
            c.scorer.channel_bias = sj.at("channel_bias").get<std::vector<double>>();
        c.scorer.noise_sigma = sj.value("noise_sigma", 0.0);
        c.scorer.items_per_channel = sj.value("items_per_channel", std::uint64_t{100000});
        c.scorer.candidates_per_channel = sj.value("candidates_per_channel", 20u);
    }
    if (j.contains("allocator")) {
        const nlohmann::json& aj = j.at("allocator");
        detail::reject_unknown_keys(
            aj, "allocator", {"method", "solver", "update_rule", "pacing", "step_c", "wpo"});
        c.allocator.method = method_from_string(aj.value("method", "me2a"));
        c.allocator.solver = solver_from_string(aj.value("solver", "auto"));
        c.allocator.update_rule = update_rule_from_string(aj.value("update_rule", "free"));
        c.allocator.pacing = pacing_from_string(aj.value("pacing", "static"));
        c.allocator.step_c = aj.value("step_c", 1.0);
        if (aj.contains("wpo")) {
            const nlohmann::json& wj = aj.at("wpo");
            detail::reject_unknown_keys(wj, "allocator.wpo", {"kappa", "beta_lo", "beta_hi"});
            c.allocator.wpo.kappa = wj.value("kappa", 0.3);
            c.allocator.wpo.beta_lo = wj.value("beta_lo", 0.1);
            c.allocator.wpo.beta_hi = wj.value("beta_hi", 10.0);
        }
    }
    c.benchmark = benchmark_from_string(j.value("benchmark", "auto"));
    c.seed = j.value("seed", std::uint64_t{0});
    c.validate();
    return c;
}

inline RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config parse error in " + path + ": " + e.what());
    }
    return run_config_from_json(j);
}

}  // namespace mirec
