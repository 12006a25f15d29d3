#pragma once
// Core data model: requests, page layouts, per-channel exposure budgets and
// the ledger that tracks consumption over a horizon of T requests.
//
// A run allocates N page slots per request among candidates from M channels.
// Each channel m carries a share-based exposure budget: cumulative consumption
// must stay below upper_share * N(S) and should reach lower_share * N(S),
// where N(S) = T * sum_n w_n is the total exposure mass of the horizon.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mirec {

using ChannelId = std::uint32_t;
using ItemId = std::uint64_t;

struct InfeasibleLayout : std::runtime_error {
    explicit InfeasibleLayout(const std::string& what) : std::runtime_error(what) {}
};

// Raised by ExposureLedger when a page would push a channel past its upper
// budget. The upstream candidate filter makes this unreachable in a normal
// run; if it fires, slot filtering is broken.
struct OverdraftError : std::logic_error {
    explicit OverdraftError(const std::string& what) : std::logic_error(what) {}
};

struct ChannelSpec {
    ChannelId id = 0;
    double lower_share = 0.0;
    double upper_share = 1.0;
};

inline void validate_channel_specs(const std::vector<ChannelSpec>& specs) {
    if (specs.empty()) throw std::invalid_argument("channel specs empty");
    double lower_sum = 0.0;
    for (std::size_t m = 0; m < specs.size(); ++m) {
        const ChannelSpec& s = specs[m];
        if (s.id != m) throw std::invalid_argument("channel ids must be 0..M-1 in order");
        if (!(s.lower_share >= 0.0 && s.lower_share <= s.upper_share && s.upper_share <= 1.0))
            throw std::invalid_argument("channel " + std::to_string(m) +
                                        ": need 0 <= lower_share <= upper_share <= 1");
        lower_sum += s.lower_share;
    }
    if (lower_sum > 1.0 + 1e-12)
        throw std::invalid_argument("sum of lower shares exceeds 1");
}

struct Candidate {
    ItemId item_id = 0;
    ChannelId channel = 0;
    double utility = 0.0;  // estimated per-item contribution, finite, >= 0
};

struct Request {
    std::int64_t t = 0;  // period index, 1-based
    std::uint64_t user_key = 0;
    std::vector<Candidate> candidates;
};

// The per-request decision: an ordered assignment of one candidate per slot.
struct PageLayout {
    std::vector<Candidate> slots;
};

// Per-slot exposure mass w_n in (0,1]. Uniform pages weigh every slot 1;
// position-decayed pages weigh later slots less (weights non-increasing).
struct ExposureModel {
    enum class Kind { uniform, position_decayed };

    Kind kind = Kind::uniform;
    std::vector<double> weights;

    static ExposureModel uniform(std::size_t n_slots) {
        ExposureModel m;
        m.kind = Kind::uniform;
        m.weights.assign(n_slots, 1.0);
        return m;
    }

    static ExposureModel position_decayed(std::size_t n_slots, double decay) {
        if (!(decay > 0.0 && decay <= 1.0))
            throw std::invalid_argument("decay must lie in (0, 1]");
        ExposureModel m;
        m.kind = Kind::position_decayed;
        m.weights.resize(n_slots);
        double w = 1.0;
        for (std::size_t n = 0; n < n_slots; ++n, w *= decay) m.weights[n] = w;
        return m;
    }

    static ExposureModel from_weights(Kind kind, std::vector<double> weights) {
        ExposureModel m;
        m.kind = kind;
        m.weights = std::move(weights);
        m.validate();
        return m;
    }

    void validate() const {
        if (weights.empty()) throw std::invalid_argument("exposure model has no slots");
        for (std::size_t n = 0; n < weights.size(); ++n) {
            if (!(weights[n] > 0.0 && weights[n] <= 1.0))
                throw std::invalid_argument("slot weight out of (0, 1]");
            if (kind == Kind::position_decayed && n > 0 && weights[n] > weights[n - 1])
                throw std::invalid_argument("decayed weights must be non-increasing");
        }
    }

    std::size_t slot_count() const { return weights.size(); }

    // Total exposure mass of one full page, sum_n w_n.
    double page_mass() const {
        return std::accumulate(weights.begin(), weights.end(), 0.0);
    }
};

// Tracks cumulative exposure per channel against its budgets.
class ExposureLedger {
public:
    struct Entry {
        double initial_max = 0.0;  // G^max_m
        double initial_min = 0.0;  // G^min_m
        double consumed = 0.0;
    };

    ExposureLedger() = default;
    ExposureLedger(std::vector<Entry> entries, double total_budget)
        : entries_(std::move(entries)), total_budget_(total_budget) {}

    std::size_t channel_count() const { return entries_.size(); }
    double total_budget() const { return total_budget_; }  // N(S)
    double initial_max(ChannelId m) const { return entries_.at(m).initial_max; }
    double initial_min(ChannelId m) const { return entries_.at(m).initial_min; }
    double consumed(ChannelId m) const { return entries_.at(m).consumed; }
    double remaining_max(ChannelId m) const {
        return entries_.at(m).initial_max - entries_.at(m).consumed;
    }

    void add(ChannelId m, double mass) {
        Entry& e = entries_.at(m);
        if (e.consumed + mass > e.initial_max + 1e-9)
            throw OverdraftError("channel " + std::to_string(m) + " overdraft: consumed " +
                                 std::to_string(e.consumed) + " + " + std::to_string(mass) +
                                 " exceeds " + std::to_string(e.initial_max));
        e.consumed += mass;
    }

private:
    std::vector<Entry> entries_;
    double total_budget_ = 0.0;
};

// Checks the layout constraint set: exactly n_slots slots, every slot holding
// a candidate of the request, no item in more than one slot.
// Returns std::nullopt when the layout is admissible, else a description of
// the first violated constraint.
inline std::optional<std::string> validate_layout(const PageLayout& layout,
                                                  const Request& request,
                                                  std::size_t n_slots) {
    if (layout.slots.size() != n_slots)
        return "layout has " + std::to_string(layout.slots.size()) + " slots, expected " +
               std::to_string(n_slots);
    for (std::size_t n = 0; n < layout.slots.size(); ++n) {
        const Candidate& c = layout.slots[n];
        const bool known = std::any_of(
            request.candidates.begin(), request.candidates.end(), [&](const Candidate& r) {
                return r.item_id == c.item_id && r.channel == c.channel;
            });
        if (!known)
            return "slot " + std::to_string(n) + ": item " + std::to_string(c.item_id) +
                   " is not in the candidate set";
        for (std::size_t k = 0; k < n; ++k)
            if (layout.slots[k].item_id == c.item_id)
                return "item " + std::to_string(c.item_id) + " occupies slots " +
                       std::to_string(k) + " and " + std::to_string(n);
    }
    return std::nullopt;
}

// Per-channel page consumption g_m(x) = sum of w_n over slots holding a
// channel-m item.
inline std::vector<double> page_consumption(const PageLayout& layout,
                                            const ExposureModel& model,
                                            std::size_t n_channels) {
    std::vector<double> g(n_channels, 0.0);
    for (std::size_t n = 0; n < layout.slots.size(); ++n)
        g.at(layout.slots[n].channel) += model.weights.at(n);
    return g;
}

// Books one page into the ledger and returns g(x_t).
inline std::vector<double> consume(ExposureLedger& ledger, const PageLayout& layout,
                                   const ExposureModel& model) {
    std::vector<double> g = page_consumption(layout, model, ledger.channel_count());
    for (ChannelId m = 0; m < ledger.channel_count(); ++m)
        if (g[m] > 0.0) ledger.add(m, g[m]);
    return g;
}

// Builds the ledger for a horizon: N(S) = T * page_mass, budgets from shares.
inline ExposureLedger budgets_from_shares(const std::vector<ChannelSpec>& specs,
                                          std::int64_t periods, const ExposureModel& model) {
    validate_channel_specs(specs);
    if (periods < 1) throw std::invalid_argument("periods must be >= 1");
    const double total = static_cast<double>(periods) * model.page_mass();
    std::vector<ExposureLedger::Entry> entries(specs.size());
    for (std::size_t m = 0; m < specs.size(); ++m) {
        entries[m].initial_max = specs[m].upper_share * total;
        entries[m].initial_min = specs[m].lower_share * total;
    }
    return ExposureLedger(std::move(entries), total);
}

struct ChannelCompleteness {
    double achieved_share = 0.0;   // consumed / N(S)
    double lower_violation = 0.0;  // [ (G^min - consumed) / G^min ]_+, 0 when G^min = 0
    double upper_headroom = 0.0;   // G^max - consumed, in exposure mass
};

inline std::vector<ChannelCompleteness> completeness(const ExposureLedger& ledger) {
    std::vector<ChannelCompleteness> out(ledger.channel_count());
    for (ChannelId m = 0; m < ledger.channel_count(); ++m) {
        ChannelCompleteness& c = out[m];
        c.achieved_share =
            ledger.total_budget() > 0.0 ? ledger.consumed(m) / ledger.total_budget() : 0.0;
        const double min_budget = ledger.initial_min(m);
        c.lower_violation =
            min_budget > 0.0 ? std::max(0.0, (min_budget - ledger.consumed(m)) / min_budget)
                             : 0.0;
        c.upper_headroom = ledger.remaining_max(m);
    }
    return out;
}

}  // namespace mirec
