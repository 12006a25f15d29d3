#pragma once
// Per-request layout solvers. Given dual prices mu, the page decision is
//
//   maximize  sum_n ( wf_n * u_{sigma(n)} - mu_{c(sigma(n))} * wg_n )
//
// over injective slot->candidate maps sigma, where wf are the utility
// position weights and wg the exposure weights. Solved exactly either by a
// rectangular assignment solver (general weights) or by a sort (when
// wf == wg and the weights are non-increasing, top-N by adjusted score in
// weight order is optimal by the rearrangement inequality).

#include <algorithm>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "mirec/domain.hpp"

namespace mirec {

enum class SolverKind { auto_select, assignment, separable, brute };

// Slot-by-candidate adjusted scores s[n][i] = wf_n * u_i - mu_{c(i)} * wg_n.
struct AdjustedScoreMatrix {
    std::size_t n_slots = 0;
    std::size_t n_cands = 0;
    std::vector<double> s;  // row-major, n_slots x n_cands

    double at(std::size_t n, std::size_t i) const { return s[n * n_cands + i]; }
};

inline AdjustedScoreMatrix build_adjusted_scores(std::span<const Candidate> candidates,
                                                 std::span<const double> mu,
                                                 std::span<const double> wf,
                                                 std::span<const double> wg) {
    if (wf.size() != wg.size()) throw std::invalid_argument("weight vectors differ in length");
    AdjustedScoreMatrix m;
    m.n_slots = wf.size();
    m.n_cands = candidates.size();
    m.s.resize(m.n_slots * m.n_cands);
    for (std::size_t n = 0; n < m.n_slots; ++n)
        for (std::size_t i = 0; i < m.n_cands; ++i)
            m.s[n * m.n_cands + i] =
                wf[n] * candidates[i].utility - mu[candidates[i].channel] * wg[n];
    return m;
}

// A channel is frozen once its remaining upper budget can no longer absorb a
// worst-case full page of its items. Dropping frozen channels here is what
// makes ledger overdraft impossible downstream.
inline bool channel_frozen(const ExposureLedger& ledger, ChannelId m,
                           const ExposureModel& model) {
    return ledger.remaining_max(m) < model.page_mass();
}

inline std::vector<Candidate> filter_exhausted(const Request& request,
                                               const ExposureLedger& ledger,
                                               const ExposureModel& model) {
    std::vector<Candidate> kept;
    kept.reserve(request.candidates.size());
    for (const Candidate& c : request.candidates)
        if (!channel_frozen(ledger, c.channel, model)) kept.push_back(c);
    if (kept.size() < model.slot_count())
        throw InfeasibleLayout("t=" + std::to_string(request.t) + ": " +
                               std::to_string(kept.size()) + " candidates survive filtering, " +
                               std::to_string(model.slot_count()) + " slots to fill");
    return kept;
}

namespace detail {

// Shortest-augmenting-path assignment (Jonker-Volgenant style potentials),
// minimizing total cost of assigning each of n rows to a distinct column,
// n <= m. Returns row -> column. Exact.
inline std::vector<int> min_cost_assignment(const std::vector<double>& cost, int n, int m) {
    const double kInf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
    std::vector<int> match(m + 1, 0), way(m + 1, 0);  // match[j]: 1-based row on column j
    for (int i = 1; i <= n; ++i) {
        match[0] = i;
        int j0 = 0;
        std::vector<double> min_slack(m + 1, kInf);
        std::vector<char> used(m + 1, 0);
        do {
            used[j0] = 1;
            const int i0 = match[j0];
            int j1 = -1;
            double delta = kInf;
            for (int j = 1; j <= m; ++j) {
                if (used[j]) continue;
                const double cur = cost[(i0 - 1) * m + (j - 1)] - u[i0] - v[j];
                if (cur < min_slack[j]) {
                    min_slack[j] = cur;
                    way[j] = j0;
                }
                if (min_slack[j] < delta) {
                    delta = min_slack[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= m; ++j) {
                if (used[j]) {
                    u[match[j]] += delta;
                    v[j] -= delta;
                } else {
                    min_slack[j] -= delta;
                }
            }
            j0 = j1;
        } while (match[j0] != 0);
        do {
            const int j1 = way[j0];
            match[j0] = match[j1];
            j0 = j1;
        } while (j0);
    }
    std::vector<int> row_to_col(n, -1);
    for (int j = 1; j <= m; ++j)
        if (match[j] != 0) row_to_col[match[j] - 1] = j - 1;
    return row_to_col;
}

}  // namespace detail

// Exact argmax over all injective slot assignments, general weights.
inline PageLayout solve_assignment(const AdjustedScoreMatrix& scores,
                                   std::span<const Candidate> candidates) {
    if (candidates.size() != scores.n_cands)
        throw std::invalid_argument("candidate count does not match score matrix");
    if (candidates.size() < scores.n_slots)
        throw InfeasibleLayout(std::to_string(candidates.size()) + " candidates for " +
                               std::to_string(scores.n_slots) + " slots");
    std::vector<double> cost(scores.s.size());
    for (std::size_t k = 0; k < scores.s.size(); ++k) cost[k] = -scores.s[k];
    const std::vector<int> row_to_col = detail::min_cost_assignment(
        cost, static_cast<int>(scores.n_slots), static_cast<int>(scores.n_cands));
    PageLayout layout;
    layout.slots.reserve(scores.n_slots);
    for (std::size_t n = 0; n < scores.n_slots; ++n)
        layout.slots.push_back(candidates[row_to_col[n]]);
    return layout;
}

inline PageLayout solve_assignment(std::span<const Candidate> candidates,
                                   std::span<const double> mu, std::span<const double> wf,
                                   std::span<const double> wg) {
    return solve_assignment(build_adjusted_scores(candidates, mu, wf, wg), candidates);
}

// Fast path for proportional weights (wf == wg == weights, non-increasing):
// rank candidates by adjusted score u_i - mu_{c(i)}, take the top N in order.
inline PageLayout solve_separable(std::span<const Candidate> candidates,
                                  std::span<const double> mu,
                                  std::span<const double> weights) {
    const std::size_t n_slots = weights.size();
    for (std::size_t n = 0; n + 1 < n_slots; ++n)
        if (weights[n + 1] > weights[n])
            throw std::invalid_argument("separable solver needs non-increasing weights");
    if (candidates.size() < n_slots)
        throw InfeasibleLayout(std::to_string(candidates.size()) + " candidates for " +
                               std::to_string(n_slots) + " slots");
    std::vector<std::size_t> order(candidates.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    auto better = [&](std::size_t a, std::size_t b) {
        const double sa = candidates[a].utility - mu[candidates[a].channel];
        const double sb = candidates[b].utility - mu[candidates[b].channel];
        if (sa != sb) return sa > sb;
        return candidates[a].item_id < candidates[b].item_id;
    };
    std::partial_sort(order.begin(), order.begin() + n_slots, order.end(), better);
    PageLayout layout;
    layout.slots.reserve(n_slots);
    for (std::size_t n = 0; n < n_slots; ++n) layout.slots.push_back(candidates[order[n]]);
    return layout;
}

struct LayoutValue {
    double f = 0.0;               // sum_n wf_n * u
    std::vector<double> g;        // per-channel exposure consumption
    double penalized = 0.0;       // f - mu . g
};

inline LayoutValue layout_value(const PageLayout& layout, std::span<const double> mu,
                                const ExposureModel& model) {
    LayoutValue v;
    v.g.assign(mu.size(), 0.0);
    for (std::size_t n = 0; n < layout.slots.size(); ++n) {
        const Candidate& c = layout.slots[n];
        v.f += model.weights.at(n) * c.utility;
        v.g.at(c.channel) += model.weights.at(n);
    }
    double price = 0.0;
    for (std::size_t m = 0; m < mu.size(); ++m) price += mu[m] * v.g[m];
    v.penalized = v.f - price;
    return v;
}

// Exhaustive test oracle: enumerates every injective assignment in
// lexicographic item-id order and keeps the first maximum, so ties resolve to
// the lexicographically-smallest slot sequence. Bounded to N <= 5, |I| <= 8.
inline PageLayout brute_force_layout(std::span<const Candidate> candidates,
                                     std::span<const double> mu, std::span<const double> wf,
                                     std::span<const double> wg) {
    const std::size_t n_slots = wf.size();
    if (n_slots > 5 || candidates.size() > 8)
        throw std::invalid_argument("brute force oracle bounded to N <= 5, |I| <= 8");
    if (candidates.size() < n_slots)
        throw InfeasibleLayout("not enough candidates for brute force");
    std::vector<Candidate> sorted(candidates.begin(), candidates.end());
    std::sort(sorted.begin(), sorted.end(),
              [](const Candidate& a, const Candidate& b) { return a.item_id < b.item_id; });

    std::vector<std::size_t> pick(n_slots, 0);
    std::vector<char> taken(sorted.size(), 0);
    std::vector<std::size_t> best;
    double best_value = -std::numeric_limits<double>::infinity();
    auto recurse = [&](auto&& self, std::size_t n, double value) -> void {
        if (n == n_slots) {
            if (value > best_value) {
                best_value = value;
                best.assign(pick.begin(), pick.begin() + n_slots);
            }
            return;
        }
        for (std::size_t i = 0; i < sorted.size(); ++i) {
            if (taken[i]) continue;
            taken[i] = 1;
            pick[n] = i;
            self(self, n + 1,
                 value + wf[n] * sorted[i].utility - mu[sorted[i].channel] * wg[n]);
            taken[i] = 0;
        }
    };
    recurse(recurse, 0, 0.0);
    PageLayout layout;
    layout.slots.reserve(n_slots);
    for (std::size_t idx : best) layout.slots.push_back(sorted[idx]);
    return layout;
}

inline PageLayout brute_force_layout(std::span<const Candidate> candidates,
                                     std::span<const double> mu,
                                     std::span<const double> weights) {
    return brute_force_layout(candidates, mu, weights, weights);
}

// Config-level dispatch. auto_select takes the sort path exactly when both
// weight vectors coincide and are non-increasing, else the assignment solver.
inline PageLayout solve_layout(SolverKind kind, std::span<const Candidate> candidates,
                               std::span<const double> mu, std::span<const double> wf,
                               std::span<const double> wg) {
    switch (kind) {
        case SolverKind::assignment:
            return solve_assignment(candidates, mu, wf, wg);
        case SolverKind::separable:
            return solve_separable(candidates, mu, wf);
        case SolverKind::brute:
            return brute_force_layout(candidates, mu, wf, wg);
        case SolverKind::auto_select: {
            bool proportional = true;
            for (std::size_t n = 0; n < wf.size() && proportional; ++n) {
                if (wf[n] != wg[n]) proportional = false;
                if (n + 1 < wf.size() && wf[n + 1] > wf[n]) proportional = false;
            }
            return proportional ? solve_separable(candidates, mu, wf)
                                : solve_assignment(candidates, mu, wf, wg);
        }
    }
    throw std::logic_error("unknown solver kind");
}

}  // namespace mirec
