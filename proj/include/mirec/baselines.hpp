#pragma once
// Comparison allocators: a fixed slot->channel pattern, and priority-weighted
// list merging (beta-WPO) with a proportional feedback controller steering
// the betas toward target exposure shares.

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "mirec/domain.hpp"

namespace mirec {

struct FixedPattern {
    std::vector<ChannelId> slot_to_channel;
};

// Derives a pattern from target shares by largest-remainder rounding
// (shares are renormalized to sum to 1; fractional quotas mean the pattern
// can only approximate the shares). Slots are interleaved so each prefix of
// the page tracks the quotas.
inline FixedPattern pattern_from_shares(std::span<const double> shares, std::size_t n_slots) {
    if (shares.empty()) throw std::invalid_argument("no shares");
    double sum = 0.0;
    for (double s : shares) {
        if (s < 0.0) throw std::invalid_argument("negative share");
        sum += s;
    }
    if (sum <= 0.0) throw std::invalid_argument("shares sum to zero");
    const std::size_t n_channels = shares.size();
    std::vector<double> quota(n_channels);
    std::vector<std::size_t> count(n_channels);
    std::size_t assigned = 0;
    for (std::size_t m = 0; m < n_channels; ++m) {
        quota[m] = shares[m] / sum * static_cast<double>(n_slots);
        count[m] = static_cast<std::size_t>(std::floor(quota[m]));
        assigned += count[m];
    }
    std::vector<std::size_t> order(n_channels);
    for (std::size_t m = 0; m < n_channels; ++m) order[m] = m;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const double ra = quota[a] - std::floor(quota[a]);
        const double rb = quota[b] - std::floor(quota[b]);
        if (ra != rb) return ra > rb;
        return a < b;
    });
    for (std::size_t k = 0; assigned < n_slots; ++k, ++assigned) count[order[k % n_channels]]++;

    FixedPattern p;
    p.slot_to_channel.reserve(n_slots);
    std::vector<std::size_t> placed(n_channels, 0);
    for (std::size_t n = 0; n < n_slots; ++n) {
        // next channel: the one furthest behind its quota pace
        std::size_t best = n_channels;
        double best_deficit = -1e300;
        for (std::size_t m = 0; m < n_channels; ++m) {
            if (placed[m] >= count[m]) continue;
            const double pace = static_cast<double>(count[m]) * static_cast<double>(n + 1) /
                                static_cast<double>(n_slots);
            const double deficit = pace - static_cast<double>(placed[m]);
            if (deficit > best_deficit) {
                best_deficit = deficit;
                best = m;
            }
        }
        placed[best]++;
        p.slot_to_channel.push_back(static_cast<ChannelId>(best));
    }
    return p;
}

// Slot n takes the highest-utility unused candidate of the pattern channel.
inline PageLayout fixed_allocate(const Request& request, const FixedPattern& pattern) {
    std::vector<std::vector<const Candidate*>> by_channel;
    for (const Candidate& c : request.candidates) {
        if (c.channel >= by_channel.size()) by_channel.resize(c.channel + 1);
        by_channel[c.channel].push_back(&c);
    }
    for (auto& list : by_channel)
        std::sort(list.begin(), list.end(), [](const Candidate* a, const Candidate* b) {
            if (a->utility != b->utility) return a->utility > b->utility;
            return a->item_id < b->item_id;
        });
    std::vector<std::size_t> next(by_channel.size(), 0);
    PageLayout layout;
    layout.slots.reserve(pattern.slot_to_channel.size());
    for (std::size_t n = 0; n < pattern.slot_to_channel.size(); ++n) {
        const ChannelId ch = pattern.slot_to_channel[n];
        if (ch >= by_channel.size() || next[ch] >= by_channel[ch].size())
            throw InfeasibleLayout("t=" + std::to_string(request.t) + ": pattern needs channel " +
                                   std::to_string(ch) + " at slot " + std::to_string(n) +
                                   " but no candidate is left");
        layout.slots.push_back(*by_channel[ch][next[ch]++]);
    }
    return layout;
}

struct BetaWeights {
    std::vector<double> beta;  // priority per channel, kept inside [lo, hi]
    double kappa = 1.0;        // proportional controller gain, >= 0
    double beta_lo = 0.1;
    double beta_hi = 10.0;
};

inline BetaWeights make_beta_weights(std::size_t n_channels, double kappa, double beta_lo,
                                     double beta_hi) {
    if (!(beta_lo > 0.0 && beta_lo <= 1.0 && 1.0 <= beta_hi))
        throw std::invalid_argument("need 0 < beta_lo <= 1 <= beta_hi");
    if (kappa < 0.0) throw std::invalid_argument("kappa must be >= 0");
    BetaWeights b;
    b.beta.assign(n_channels, 1.0);
    b.kappa = kappa;
    b.beta_lo = beta_lo;
    b.beta_hi = beta_hi;
    return b;
}

// Merge all channel lists by priority-weighted score beta_c * u, top N fill
// the page in key order; ties go to the smaller item id.
inline PageLayout wpo_allocate(const Request& request, const BetaWeights& betas,
                               std::size_t n_slots) {
    if (request.candidates.size() < n_slots)
        throw InfeasibleLayout("t=" + std::to_string(request.t) + ": " +
                               std::to_string(request.candidates.size()) + " candidates for " +
                               std::to_string(n_slots) + " slots");
    std::vector<std::size_t> order(request.candidates.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    auto key = [&](std::size_t i) {
        const Candidate& c = request.candidates[i];
        return betas.beta.at(c.channel) * c.utility;
    };
    std::partial_sort(order.begin(), order.begin() + n_slots, order.end(),
                      [&](std::size_t a, std::size_t b) {
                          const double ka = key(a), kb = key(b);
                          if (ka != kb) return ka > kb;
                          return request.candidates[a].item_id < request.candidates[b].item_id;
                      });
    PageLayout layout;
    layout.slots.reserve(n_slots);
    for (std::size_t n = 0; n < n_slots; ++n)
        layout.slots.push_back(request.candidates[order[n]]);
    return layout;
}

// Proportional-only feedback: multiplicative nudge by the share shortfall,
// clamped to the configured band.
inline BetaWeights wpo_feedback(const BetaWeights& betas,
                                std::span<const double> achieved_share,
                                std::span<const double> target_share) {
    BetaWeights next = betas;
    for (std::size_t m = 0; m < next.beta.size(); ++m) {
        const double adjusted =
            betas.beta[m] * (1.0 + betas.kappa * (target_share[m] - achieved_share[m]));
        next.beta[m] = std::clamp(adjusted, betas.beta_lo, betas.beta_hi);
    }
    return next;
}

}  // namespace mirec
