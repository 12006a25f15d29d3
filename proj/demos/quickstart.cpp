// Minimal library walkthrough: build a config in code, run a short stream,
// print how each channel paced against its exposure floor.

#include <cstdio>

#include "mirec/mirec.hpp"

int main() {
    mirec::RunConfig cfg;
    cfg.periods = 2000;
    cfg.slots = 6;
    cfg.channels = {
        {0, 0.50, 1.0},  // high-utility channel, half the exposure guaranteed
        {1, 0.30, 1.0},
        {2, 0.20, 1.0},  // weakest channel, floor forces it onto pages
    };
    cfg.scorer.channel_bias = {0.8, 0.0, -0.8};
    cfg.scorer.candidates_per_channel = 10;
    cfg.benchmark = mirec::BenchmarkKind::none;
    cfg.seed = 7;

    const mirec::RunResult result = mirec::run_stream(cfg);
    const mirec::RunReport& rep = result.report;

    std::printf("T=%lld  expected utility %.1f  realized clicks %lld\n",
                static_cast<long long>(rep.periods), rep.expected_utility,
                static_cast<long long>(rep.realized_clicks));
    for (std::size_t m = 0; m < rep.channels.size(); ++m) {
        const mirec::ChannelReportRow& c = rep.channels[m];
        std::printf("channel %zu: share %.3f (floor %.3f)  violation %.4f  mu_end %+.4f\n", m,
                    c.achieved_share, cfg.channels[m].lower_share, c.lower_violation,
                    result.dual.mu[m]);
    }
    return 0;
}
