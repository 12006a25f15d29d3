#pragma once
// Dual-variable maintenance for the allocation layer. One signed price per
// channel: mu_m > 0 taxes exposure (channel near its cap), mu_m < 0
// subsidizes it (channel behind its floor). After each page the price moves
// against the Danskin subgradient
//
//   grad_m = -g_m(x_t) + rho_max_m * 1(mu_m >= 0) + rho_min_m * 1(mu_m < 0)
//
// (the branches are disjoint; at mu_m = 0 only the upper one fires), followed
// by a mirror-descent step with quadratic reference function, which is plain
// gradient descent: mu' = mu - eta * grad, optionally projected onto mu >= 0.
// The signed (free) rule is the default; projection can never reach the
// mu < 0 subsidy branch and is kept only as a config option.

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "mirec/domain.hpp"

namespace mirec {

enum class UpdateRule { free_signed, projected };
enum class PacingMode { static_rate, adaptive_rate };

struct DualState {
    std::vector<double> mu;        // one signed real per channel
    double step_eta = 0.0;         // constant step size, > 0
    UpdateRule rule = UpdateRule::free_signed;
    PacingMode pacing = PacingMode::static_rate;
};

inline DualState make_dual_state(std::size_t n_channels, double eta, UpdateRule rule,
                                 PacingMode pacing) {
    if (!(eta > 0.0)) throw std::invalid_argument("step size must be positive");
    DualState s;
    s.mu.assign(n_channels, 0.0);
    s.step_eta = eta;
    s.rule = rule;
    s.pacing = pacing;
    return s;
}

// Per-request exposure rate targets. Static: initial budget spread evenly
// over the horizon. Adaptive: remaining budget (after the page at period t)
// spread over the remaining periods.
struct PacingTargets {
    std::vector<double> rho_max;
    std::vector<double> rho_min;
};

inline PacingTargets make_pacing_targets(const ExposureLedger& ledger, PacingMode mode,
                                         std::int64_t periods, std::int64_t t) {
    PacingTargets targets;
    const std::size_t n = ledger.channel_count();
    targets.rho_max.resize(n);
    targets.rho_min.resize(n);
    if (mode == PacingMode::static_rate) {
        for (ChannelId m = 0; m < n; ++m) {
            targets.rho_max[m] = ledger.initial_max(m) / static_cast<double>(periods);
            targets.rho_min[m] = ledger.initial_min(m) / static_cast<double>(periods);
        }
    } else {
        const double left = static_cast<double>(std::max<std::int64_t>(1, periods - t));
        for (ChannelId m = 0; m < n; ++m) {
            targets.rho_max[m] = std::max(0.0, ledger.remaining_max(m)) / left;
            targets.rho_min[m] =
                std::max(0.0, ledger.initial_min(m) - ledger.consumed(m)) / left;
        }
    }
    return targets;
}

inline std::vector<double> subgradient(std::span<const double> mu, std::span<const double> g,
                                       const PacingTargets& targets) {
    std::vector<double> grad(mu.size());
    for (std::size_t m = 0; m < mu.size(); ++m)
        grad[m] = -g[m] + (mu[m] >= 0.0 ? targets.rho_max[m] : targets.rho_min[m]);
    return grad;
}

inline DualState update(const DualState& state, std::span<const double> grad) {
    DualState next = state;
    for (std::size_t m = 0; m < next.mu.size(); ++m) {
        next.mu[m] = state.mu[m] - state.step_eta * grad[m];
        if (state.rule == UpdateRule::projected) next.mu[m] = std::max(0.0, next.mu[m]);
    }
    return next;
}

// eta = c / sqrt(T), constant over the run.
inline double step_schedule(double c, std::int64_t periods) {
    if (!(c > 0.0)) throw std::invalid_argument("step constant must be positive");
    if (periods < 1) throw std::invalid_argument("periods must be >= 1");
    return c / std::sqrt(static_cast<double>(periods));
}

// Offline dual objective at a fixed price vector:
//
//   D(mu) = sum_t max_x ( f(x) - mu . g(x) )
//         + sum_m ( [mu_m]_+ G^max_m - [-mu_m]_+ G^min_m ).
//
// Weak duality makes this an upper bound on the constrained hindsight optimum
// for every mu, which is what the oracle grid search minimizes. Page weights
// are non-increasing by construction, so the inner max is the top-N adjusted
// scores paired with weights in order (same optimum the layout solvers reach).
inline double empirical_dual(std::span<const double> mu, std::span<const Request> requests,
                             const ExposureLedger& budgets, const ExposureModel& model) {
    const std::size_t n_slots = model.slot_count();
    double total = 0.0;
    std::vector<double> top;
    for (const Request& req : requests) {
        top.assign(n_slots, -std::numeric_limits<double>::infinity());
        for (const Candidate& c : req.candidates) {
            double a = c.utility - mu[c.channel];
            for (std::size_t n = 0; n < n_slots; ++n) {
                if (a > top[n]) std::swap(a, top[n]);
            }
        }
        if (std::isinf(top[n_slots - 1]))
            throw InfeasibleLayout("t=" + std::to_string(req.t) +
                                   ": fewer candidates than slots");
        for (std::size_t n = 0; n < n_slots; ++n) total += model.weights[n] * top[n];
    }
    for (ChannelId m = 0; m < budgets.channel_count(); ++m) {
        total += std::max(mu[m], 0.0) * budgets.initial_max(m);
        total -= std::max(-mu[m], 0.0) * budgets.initial_min(m);
    }
    return total;
}

}  // namespace mirec
