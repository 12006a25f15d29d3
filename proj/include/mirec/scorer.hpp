#pragma once
// Synthetic scoring seam. Stands in for a learned ranking layer: provides
// per-candidate utility estimates plus ground-truth click feedback, all as
// pure functions of (seed, inputs) so identical configs replay bit-identically.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "mirec/domain.hpp"
#include "mirec/rng.hpp"

namespace mirec {

using ScoreVector = std::vector<double>;

// Latent-factor world: users and items live in a shared latent space, each
// channel adds a fixed bias. True utility of (user, item) is
// sigmoid(dot(user_vec, item_vec) + channel_bias[channel]).
// Latent components are scaled so the dot product has unit variance
// regardless of user_dim.
struct SyntheticWorld {
    std::uint64_t seed = 0;
    std::uint32_t user_dim = 8;
    std::vector<double> channel_bias;  // one entry per channel
    double noise_sigma = 0.0;
    std::uint64_t items_per_channel = 100000;
};

namespace detail {
inline constexpr std::uint64_t kUserTag = 0x75736572;   // latent user vectors
inline constexpr std::uint64_t kItemTag = 0x6974656d;   // latent item vectors
inline constexpr std::uint64_t kNoiseTag = 0x6e6f6973;  // estimation noise
inline constexpr std::uint64_t kClickTag = 0x636c636b;  // click draws
inline constexpr std::uint64_t kDrawTag = 0x64726177;   // candidate sampling

inline double latent_scale(std::uint32_t dim) {
    return std::pow(static_cast<double>(dim), -0.25);
}

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

inline std::vector<double> latent_vector(const SyntheticWorld& world, std::uint64_t tag,
                                         std::uint64_t key) {
    const double scale = latent_scale(world.user_dim);
    std::vector<double> v(world.user_dim);
    for (std::uint32_t d = 0; d < world.user_dim; ++d)
        v[d] = rng::gaussian(rng::mix(world.seed, tag, key, d)) * scale;
    return v;
}

inline double utility_from_user_vec(const SyntheticWorld& world,
                                    const std::vector<double>& user_vec,
                                    const Candidate& cand) {
    const double scale = latent_scale(world.user_dim);
    double dot = 0.0;
    for (std::uint32_t d = 0; d < world.user_dim; ++d)
        dot += user_vec[d] *
               (rng::gaussian(rng::mix(world.seed, kItemTag, cand.item_id, d)) * scale);
    return sigmoid(dot + world.channel_bias.at(cand.channel));
}

}  // namespace detail

inline ItemId make_item_id(ChannelId channel, std::uint64_t index) {
    return (static_cast<std::uint64_t>(channel) + 1) << 40 | index;
}

inline double true_utility(const SyntheticWorld& world, std::uint64_t user_key,
                           const Candidate& cand) {
    return detail::utility_from_user_vec(
        world, detail::latent_vector(world, detail::kUserTag, user_key), cand);
}

// Noisy estimates, one per request candidate: clamp(true + N(0, sigma^2), 0, 1),
// seeded per (t, item) so the same request always scores identically.
inline ScoreVector estimate(const SyntheticWorld& world, const Request& request,
                            double noise_sigma) {
    const std::vector<double> user_vec =
        detail::latent_vector(world, detail::kUserTag, request.user_key);
    ScoreVector scores(request.candidates.size());
    for (std::size_t i = 0; i < request.candidates.size(); ++i) {
        const Candidate& c = request.candidates[i];
        double u = detail::utility_from_user_vec(world, user_vec, c);
        if (noise_sigma > 0.0) {
            const std::uint64_t key =
                rng::mix(world.seed, detail::kNoiseTag, static_cast<std::uint64_t>(request.t),
                         c.item_id);
            u += noise_sigma * rng::gaussian(key);
        }
        scores[i] = std::clamp(u, 0.0, 1.0);
    }
    return scores;
}

// Independent per-slot Bernoulli(true_utility * w_n) click draws for a served
// page. Feeds realized metrics only; allocators never see these.
inline std::vector<std::uint8_t> realize_feedback(const SyntheticWorld& world,
                                                  std::uint64_t user_key, std::int64_t t,
                                                  const PageLayout& layout,
                                                  const ExposureModel& model) {
    const std::vector<double> user_vec =
        detail::latent_vector(world, detail::kUserTag, user_key);
    std::vector<std::uint8_t> clicks(layout.slots.size(), 0);
    for (std::size_t n = 0; n < layout.slots.size(); ++n) {
        const double p =
            detail::utility_from_user_vec(world, user_vec, layout.slots[n]) * model.weights.at(n);
        const std::uint64_t key =
            rng::mix(world.seed, detail::kClickTag, static_cast<std::uint64_t>(t), n);
        clicks[n] = rng::bernoulli(key, p) ? 1 : 0;
    }
    return clicks;
}

// Draws the period-t request: a fresh user and, per channel, a sample of
// distinct items from that channel's universe. Candidate.utility carries the
// (possibly noisy) estimate the allocator will optimize.
inline Request draw_request(const SyntheticWorld& world, std::int64_t t,
                            std::uint32_t candidates_per_channel) {
    if (world.channel_bias.empty()) throw std::invalid_argument("world has no channels");
    if (candidates_per_channel > world.items_per_channel)
        throw std::invalid_argument("candidates_per_channel exceeds items_per_channel");
    Request req;
    req.t = t;
    req.user_key = rng::mix(world.seed, detail::kUserTag, detail::kDrawTag,
                            static_cast<std::uint64_t>(t));
    const std::size_t n_channels = world.channel_bias.size();
    req.candidates.reserve(n_channels * candidates_per_channel);
    for (ChannelId ch = 0; ch < n_channels; ++ch) {
        std::vector<std::uint64_t> seen;
        seen.reserve(candidates_per_channel);
        for (std::uint32_t j = 0; j < candidates_per_channel; ++j) {
            std::uint64_t idx = 0;
            for (std::uint64_t attempt = 0;; ++attempt) {
                idx = rng::mix(world.seed, detail::kDrawTag, static_cast<std::uint64_t>(t), ch,
                               j, attempt) %
                      world.items_per_channel;
                if (std::find(seen.begin(), seen.end(), idx) == seen.end()) break;
            }
            seen.push_back(idx);
            req.candidates.push_back(Candidate{make_item_id(ch, idx), ch, 0.0});
        }
    }
    const ScoreVector scores = estimate(world, req, world.noise_sigma);
    for (std::size_t i = 0; i < req.candidates.size(); ++i)
        req.candidates[i].utility = scores[i];
    return req;
}

}  // namespace mirec
