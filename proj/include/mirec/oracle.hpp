#pragma once
// Regret benchmarks. Two routes:
//  - an exact hindsight optimum via dynamic programming, limited to tiny
//    two-channel instances with uniform exposure (integral ledger state);
//  - a dual upper bound min_{mu in grid} D(mu), valid at any scale because
//    every grid point upper-bounds the constrained optimum by weak duality.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "mirec/domain.hpp"
#include "mirec/dual.hpp"

namespace mirec {

struct HindsightInstance {
    std::vector<Request> requests;
    ExposureLedger budgets;
    ExposureModel model;
};

struct HindsightResult {
    bool feasible = false;
    double value = 0.0;
    std::vector<PageLayout> layouts;
};

inline bool within_dp_bounds(const HindsightInstance& inst) {
    if (inst.budgets.channel_count() > 2) return false;
    if (inst.requests.size() > 200 || inst.requests.empty()) return false;
    if (inst.model.slot_count() > 3) return false;
    for (double w : inst.model.weights)
        if (w != 1.0) return false;
    for (const Request& r : inst.requests)
        if (r.candidates.size() > 6) return false;
    return true;
}

namespace detail {

// Candidate utilities of one channel, sorted descending (ties to smaller id),
// with prefix sums so the best j-subset is prefix[j].
struct ChannelTop {
    std::vector<const Candidate*> items;
    std::vector<double> prefix;  // prefix[j] = sum of top j utilities

    void build() {
        std::sort(items.begin(), items.end(), [](const Candidate* a, const Candidate* b) {
            if (a->utility != b->utility) return a->utility > b->utility;
            return a->item_id < b->item_id;
        });
        prefix.assign(items.size() + 1, 0.0);
        for (std::size_t j = 0; j < items.size(); ++j)
            prefix[j + 1] = prefix[j] + items[j]->utility;
    }
};

}  // namespace detail

// Exact constrained hindsight optimum over the full stream. State: cumulative
// channel-0 exposure count (channel 1 is implied by the total, every page
// being full). Uniform weights make page value independent of slot order, so
// the best page with exactly k channel-0 items is top-k of channel 0 plus
// top-(N-k) of channel 1.
inline HindsightResult hindsight_opt_dp(const HindsightInstance& inst) {
    if (!within_dp_bounds(inst))
        throw std::invalid_argument("instance outside hindsight DP bounds");
    const std::size_t periods = inst.requests.size();
    const std::size_t n_slots = inst.model.slot_count();
    const std::size_t n_channels = inst.budgets.channel_count();
    const double kNegInf = -std::numeric_limits<double>::infinity();

    std::vector<std::array<detail::ChannelTop, 2>> tops(periods);
    for (std::size_t t = 0; t < periods; ++t) {
        for (const Candidate& c : inst.requests[t].candidates) {
            if (c.channel >= n_channels)
                throw std::invalid_argument("candidate channel outside ledger");
            tops[t][c.channel].items.push_back(&c);
        }
        tops[t][0].build();
        if (n_channels == 2) tops[t][1].build();
    }

    const std::size_t max_count = periods * n_slots;
    std::vector<double> value(max_count + 1, kNegInf);
    value[0] = 0.0;
    std::vector<std::vector<std::int8_t>> choice(
        periods, std::vector<std::int8_t>(max_count + 1, -1));
    std::vector<double> next(max_count + 1);
    for (std::size_t t = 0; t < periods; ++t) {
        std::fill(next.begin(), next.end(), kNegInf);
        for (std::size_t c = 0; c <= t * n_slots; ++c) {
            if (value[c] == kNegInf) continue;
            for (std::size_t k = 0; k <= n_slots; ++k) {
                if (k > tops[t][0].items.size()) break;
                const std::size_t rest = n_slots - k;
                if (n_channels == 1 && rest > 0) continue;
                if (n_channels == 2 && rest > tops[t][1].items.size()) continue;
                const double page = tops[t][0].prefix[k] +
                                    (n_channels == 2 ? tops[t][1].prefix[rest] : 0.0);
                if (value[c] + page > next[c + k]) {
                    next[c + k] = value[c] + page;
                    choice[t][c + k] = static_cast<std::int8_t>(k);
                }
            }
        }
        value.swap(next);
    }

    const double eps = 1e-9;
    auto final_feasible = [&](std::size_t c0) {
        const double g0 = static_cast<double>(c0);
        if (g0 > inst.budgets.initial_max(0) + eps) return false;
        if (g0 + eps < inst.budgets.initial_min(0)) return false;
        if (n_channels == 2) {
            const double g1 = static_cast<double>(max_count - c0);
            if (g1 > inst.budgets.initial_max(1) + eps) return false;
            if (g1 + eps < inst.budgets.initial_min(1)) return false;
        }
        return true;
    };

    HindsightResult result;
    std::size_t best_c = 0;
    double best = kNegInf;
    for (std::size_t c = 0; c <= max_count; ++c) {
        if (value[c] == kNegInf || !final_feasible(c)) continue;
        if (value[c] > best) {
            best = value[c];
            best_c = c;
        }
    }
    if (best == kNegInf) return result;  // no sequence meets both bounds

    result.feasible = true;
    result.value = best;
    result.layouts.resize(periods);
    std::size_t c = best_c;
    for (std::size_t t = periods; t-- > 0;) {
        const std::size_t k = static_cast<std::size_t>(choice[t][c]);
        PageLayout& layout = result.layouts[t];
        for (std::size_t j = 0; j < k; ++j) layout.slots.push_back(*tops[t][0].items[j]);
        for (std::size_t j = 0; j < n_slots - k; ++j)
            layout.slots.push_back(*tops[t][1].items[j]);
        c -= k;
    }
    return result;
}

struct DualBound {
    double value = std::numeric_limits<double>::infinity();
    std::vector<double> argmin;
    std::size_t evaluations = 0;
};

// Per-channel linspace over [-u_max, u_max]. Adjusted scores live within
// u_max of the raw utilities, so prices beyond that range cannot change any
// layout and need not be searched.
inline std::vector<double> mu_axis(double u_max, std::size_t points) {
    if (points < 2) throw std::invalid_argument("grid needs at least 2 points");
    std::vector<double> axis(points);
    for (std::size_t i = 0; i < points; ++i)
        axis[i] = -u_max + 2.0 * u_max * static_cast<double>(i) / static_cast<double>(points - 1);
    return axis;
}

// min over the grid of D(mu). Up to two channels the product grid is searched
// exhaustively; for more channels the axes are swept coordinate-wise (two
// passes) -- every evaluated point is a valid bound, so the minimum over the
// visited set still is.
inline DualBound dual_upper_bound(std::span<const Request> requests,
                                  const ExposureLedger& budgets, const ExposureModel& model,
                                  const std::vector<std::vector<double>>& axes) {
    const std::size_t n_channels = budgets.channel_count();
    if (axes.size() != n_channels) throw std::invalid_argument("one axis per channel required");
    for (const auto& axis : axes)
        if (axis.empty()) throw std::invalid_argument("empty grid axis");

    DualBound bound;
    std::vector<double> mu(n_channels, 0.0);
    auto visit = [&](const std::vector<double>& point) {
        const double d = empirical_dual(point, requests, budgets, model);
        bound.evaluations++;
        if (d < bound.value) {
            bound.value = d;
            bound.argmin = point;
        }
    };

    if (n_channels == 1) {
        for (double x : axes[0]) {
            mu[0] = x;
            visit(mu);
        }
    } else if (n_channels == 2) {
        for (double x : axes[0]) {
            mu[0] = x;
            for (double y : axes[1]) {
                mu[1] = y;
                visit(mu);
            }
        }
    } else {
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t m = 0; m < n_channels; ++m) {
                std::vector<double> probe = bound.argmin.empty() ? mu : bound.argmin;
                for (double x : axes[m]) {
                    probe[m] = x;
                    visit(probe);
                }
                mu = bound.argmin;
            }
        }
    }
    return bound;
}

// Coarse grid plus one refinement: a second, tighter grid centered on the
// coarse minimizer with halfwidth equal to the coarse spacing. The result is
// the min over both rounds, so refinement can only improve the bound.
inline DualBound dual_upper_bound_refined(std::span<const Request> requests,
                                          const ExposureLedger& budgets,
                                          const ExposureModel& model, double u_max,
                                          std::size_t points = 41) {
    const std::size_t n_channels = budgets.channel_count();
    std::vector<std::vector<double>> axes(n_channels, mu_axis(u_max, points));
    DualBound coarse = dual_upper_bound(requests, budgets, model, axes);

    const double spacing = 2.0 * u_max / static_cast<double>(points - 1);
    std::vector<std::vector<double>> fine(n_channels);
    for (std::size_t m = 0; m < n_channels; ++m) {
        const double center = coarse.argmin[m];
        fine[m].resize(points);
        for (std::size_t i = 0; i < points; ++i)
            fine[m][i] = center - spacing +
                         2.0 * spacing * static_cast<double>(i) / static_cast<double>(points - 1);
    }
    DualBound refined = dual_upper_bound(requests, budgets, model, fine);
    refined.evaluations += coarse.evaluations;
    if (coarse.value < refined.value) {
        refined.value = coarse.value;
        refined.argmin = coarse.argmin;
    }
    return refined;
}

// Benchmark-minus-achieved. Negative values are possible (and reported as-is)
// when the benchmark is the loose dual bound.
inline double regret(double run_utility, double benchmark_value) {
    return benchmark_value - run_utility;
}

}  // namespace mirec
