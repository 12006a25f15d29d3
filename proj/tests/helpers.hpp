#pragma once
// Shared random-instance generators for the test suites.

#include <random>
#include <vector>

#include "mirec/domain.hpp"

namespace mirec::testing {

inline std::vector<Candidate> random_candidates(std::mt19937_64& gen, std::size_t count,
                                                std::size_t n_channels) {
    std::uniform_real_distribution<double> util(0.0, 1.0);
    std::uniform_int_distribution<ChannelId> chan(0, static_cast<ChannelId>(n_channels - 1));
    std::vector<Candidate> cands(count);
    for (std::size_t i = 0; i < count; ++i)
        cands[i] = Candidate{100 + i, chan(gen), util(gen)};
    return cands;
}

inline std::vector<double> random_mu(std::mt19937_64& gen, std::size_t n_channels,
                                     double span = 1.0) {
    std::uniform_real_distribution<double> d(-span, span);
    std::vector<double> mu(n_channels);
    for (double& v : mu) v = d(gen);
    return mu;
}

// Arbitrary positive weights in (0, 1], no monotonicity.
inline std::vector<double> random_weights(std::mt19937_64& gen, std::size_t n_slots) {
    std::uniform_real_distribution<double> d(0.05, 1.0);
    std::vector<double> w(n_slots);
    for (double& v : w) v = d(gen);
    return w;
}

// Non-increasing weights in (0, 1], first slot 1.
inline std::vector<double> random_decreasing_weights(std::mt19937_64& gen,
                                                     std::size_t n_slots) {
    std::uniform_real_distribution<double> shrink(0.6, 1.0);
    std::vector<double> w(n_slots);
    double cur = 1.0;
    for (std::size_t n = 0; n < n_slots; ++n) {
        w[n] = cur;
        cur *= shrink(gen);
    }
    return w;
}

inline Request make_request(std::int64_t t, std::vector<Candidate> cands) {
    Request r;
    r.t = t;
    r.user_key = static_cast<std::uint64_t>(t) * 977;
    r.candidates = std::move(cands);
    return r;
}

}  // namespace mirec::testing
