#include <random>

#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "mirec/dual.hpp"
#include "mirec/primal.hpp"

using namespace mirec;

namespace {

PacingTargets targets_of(std::vector<double> rho_max, std::vector<double> rho_min) {
    PacingTargets t;
    t.rho_max = std::move(rho_max);
    t.rho_min = std::move(rho_min);
    return t;
}

}  // namespace

TEST_CASE("subgradient branches on the sign of mu") {
    SECTION("positive price uses the upper target") {
        const std::vector<double> mu{0.2}, g{7.0};
        const auto grad = subgradient(mu, g, targets_of({5.0}, {2.0}));
        CHECK(grad[0] == Catch::Approx(-2.0));
    }
    SECTION("negative price uses the lower target") {
        const std::vector<double> mu{-0.1}, g{7.0};
        const auto grad = subgradient(mu, g, targets_of({5.0}, {2.0}));
        CHECK(grad[0] == Catch::Approx(-5.0));
    }
    SECTION("on-pace positive price is a fixed point") {
        const std::vector<double> mu{0.4}, g{5.0};
        CHECK(subgradient(mu, g, targets_of({5.0}, {2.0}))[0] == 0.0);
    }
    SECTION("mu exactly zero takes the upper branch only") {
        const std::vector<double> mu{0.0}, g{0.0};
        CHECK(subgradient(mu, g, targets_of({5.0}, {2.0}))[0] == Catch::Approx(5.0));
    }
}

TEST_CASE("mirror-descent update, free and projected") {
    DualState s = make_dual_state(1, 0.1, UpdateRule::free_signed, PacingMode::static_rate);
    s.mu[0] = 0.5;
    CHECK(update(s, std::vector<double>{2.0}).mu[0] == Catch::Approx(0.3));

    DualState p = make_dual_state(1, 0.1, UpdateRule::projected, PacingMode::static_rate);
    p.mu[0] = 0.5;
    CHECK(update(p, std::vector<double>{2.0}).mu[0] == Catch::Approx(0.3));

    SECTION("projection clamps at zero, the free rule crosses") {
        DualState f = make_dual_state(1, 1.0, UpdateRule::free_signed, PacingMode::static_rate);
        f.mu[0] = 0.1;
        CHECK(update(f, std::vector<double>{0.5}).mu[0] == Catch::Approx(-0.4));
        DualState pr = make_dual_state(1, 1.0, UpdateRule::projected, PacingMode::static_rate);
        pr.mu[0] = 0.1;
        CHECK(update(pr, std::vector<double>{0.5}).mu[0] == 0.0);
    }
    SECTION("zero gradient is a fixed point under both rules") {
        DualState f = make_dual_state(2, 0.7, UpdateRule::free_signed, PacingMode::static_rate);
        f.mu = {0.3, -0.2};
        const auto next = update(f, std::vector<double>{0.0, 0.0});
        CHECK(next.mu == f.mu);
    }
}

TEST_CASE("step schedule is c over sqrt(T)") {
    CHECK(step_schedule(1.0, 100) == Catch::Approx(0.1));
    CHECK(step_schedule(1.0, 10000) == Catch::Approx(0.01));
    CHECK(step_schedule(2.0, 400) == Catch::Approx(0.1));
    CHECK(step_schedule(0.5, 100) == Catch::Approx(2.0 * step_schedule(0.5, 400)));
    CHECK_THROWS_AS(step_schedule(0.0, 10), std::invalid_argument);
}

TEST_CASE("sign-semantics of consecutive updates") {
    std::mt19937_64 gen(99);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int iter = 0; iter < 200; ++iter) {
        const double rho_min = 1.0 + u(gen), rho_max = rho_min + 1.0 + u(gen);
        DualState s = make_dual_state(1, 0.05 + u(gen), UpdateRule::free_signed,
                                      PacingMode::static_rate);
        // under-paced negative price keeps falling
        s.mu[0] = -u(gen) - 0.01;
        const double g_low = rho_min * u(gen) * 0.99;
        auto next = update(s, subgradient(s.mu, std::vector<double>{g_low},
                                          targets_of({rho_max}, {rho_min})));
        CHECK(next.mu[0] < s.mu[0]);

        // over-paced non-negative price keeps rising
        s.mu[0] = u(gen);
        const double g_high = rho_max + u(gen) + 0.01;
        next = update(s, subgradient(s.mu, std::vector<double>{g_high},
                                     targets_of({rho_max}, {rho_min})));
        CHECK(next.mu[0] > s.mu[0]);
    }
}

TEST_CASE("projected rule never goes negative") {
    std::mt19937_64 gen(123);
    std::uniform_real_distribution<double> g_d(0.0, 10.0);
    DualState s = make_dual_state(2, 0.3, UpdateRule::projected, PacingMode::static_rate);
    const PacingTargets targets = targets_of({3.0, 4.0}, {1.0, 0.0});
    for (int t = 0; t < 500; ++t) {
        const std::vector<double> g{g_d(gen), g_d(gen)};
        s = update(s, subgradient(s.mu, g, targets));
        CHECK(s.mu[0] >= 0.0);
        CHECK(s.mu[1] >= 0.0);
    }
}

TEST_CASE("pacing target modes") {
    const ExposureModel model = ExposureModel::uniform(2);
    std::vector<ChannelSpec> specs{{0, 0.25, 0.75}};
    ExposureLedger ledger = budgets_from_shares(specs, 10, model);  // N(S)=20

    const PacingTargets st = make_pacing_targets(ledger, PacingMode::static_rate, 10, 0);
    CHECK(st.rho_max[0] == Catch::Approx(1.5));
    CHECK(st.rho_min[0] == Catch::Approx(0.5));

    PageLayout page;
    page.slots = {Candidate{1, 0, 0.5}, Candidate{2, 0, 0.5}};
    for (int t = 1; t <= 2; ++t) consume(ledger, page, model);  // consumed 4 after t=2
    const PacingTargets ad = make_pacing_targets(ledger, PacingMode::adaptive_rate, 10, 2);
    CHECK(ad.rho_max[0] == Catch::Approx((15.0 - 4.0) / 8.0));
    CHECK(ad.rho_min[0] == Catch::Approx((5.0 - 4.0) / 8.0));

    // floor already met: adaptive lower target clamps at zero
    for (int t = 3; t <= 4; ++t) consume(ledger, page, model);
    const PacingTargets ad2 = make_pacing_targets(ledger, PacingMode::adaptive_rate, 10, 4);
    CHECK(ad2.rho_min[0] == 0.0);
    CHECK(ad.rho_min[0] <= ad.rho_max[0]);
}

TEST_CASE("empirical dual value") {
    const ExposureModel model = ExposureModel::uniform(2);
    std::vector<ChannelSpec> specs{{0, 0.2, 0.9}, {1, 0.1, 1.0}};

    std::mt19937_64 gen(31);
    std::vector<Request> stream;
    for (int t = 1; t <= 5; ++t)
        stream.push_back(testing::make_request(t, testing::random_candidates(gen, 5, 2)));
    const ExposureLedger budgets = budgets_from_shares(specs, 5, model);

    SECTION("zero prices: sum of unconstrained per-request maxima") {
        const std::vector<double> zero{0.0, 0.0};
        double expect = 0.0;
        for (const Request& r : stream) {
            const PageLayout l = brute_force_layout(r.candidates, zero, model.weights);
            expect += layout_value(l, zero, model).f;
        }
        CHECK(empirical_dual(zero, stream, budgets, model) == Catch::Approx(expect));
    }
    SECTION("degenerate stream: one request, one candidate") {
        const ExposureModel one_slot = ExposureModel::uniform(1);
        std::vector<ChannelSpec> spec1{{0, 0.5, 1.0}};
        const ExposureLedger b1 = budgets_from_shares(spec1, 1, one_slot);
        std::vector<Request> s1{testing::make_request(1, {Candidate{4, 0, 0.6}})};
        const std::vector<double> mu{-0.25};
        // f - mu*g + ( [mu]+ Gmax - [-mu]+ Gmin ) = .6 + .25 - .25*.5
        CHECK(empirical_dual(mu, s1, b1, one_slot) == Catch::Approx(0.6 + 0.25 - 0.125));
    }
    SECTION("inner max agrees with the assignment solver") {
        for (int iter = 0; iter < 50; ++iter) {
            const auto mu = testing::random_mu(gen, 2);
            double via_solver = 0.0;
            for (const Request& r : stream) {
                const PageLayout l = solve_assignment(r.candidates, mu, model.weights,
                                                      model.weights);
                via_solver += layout_value(l, mu, model).penalized;
            }
            for (ChannelId m = 0; m < 2; ++m) {
                via_solver += std::max(mu[m], 0.0) * budgets.initial_max(m);
                via_solver -= std::max(-mu[m], 0.0) * budgets.initial_min(m);
            }
            CHECK(empirical_dual(mu, stream, budgets, model) ==
                  Catch::Approx(via_solver).margin(1e-9));
        }
    }
    SECTION("weak duality against every feasible brute-force sequence") {
        // T=3, N=2, 4 candidates per request: enumerate all ordered layouts
        // per request, all sequences, keep the feasible ones
        const ExposureModel m2 = ExposureModel::uniform(2);
        std::vector<ChannelSpec> tight{{0, 0.3, 0.7}, {1, 0.3, 0.7}};
        const ExposureLedger b2 = budgets_from_shares(tight, 3, m2);
        std::vector<Request> s2;
        for (int t = 1; t <= 3; ++t)
            s2.push_back(testing::make_request(t, testing::random_candidates(gen, 4, 2)));

        std::vector<std::vector<PageLayout>> pages(3);
        for (int t = 0; t < 3; ++t)
            for (std::size_t i = 0; i < 4; ++i)
                for (std::size_t j = 0; j < 4; ++j) {
                    if (i == j) continue;
                    PageLayout l;
                    l.slots = {s2[t].candidates[i], s2[t].candidates[j]};
                    pages[t].push_back(l);
                }
        double best_feasible = -1e300;
        const std::vector<double> zero{0.0, 0.0};
        for (const PageLayout& l0 : pages[0])
            for (const PageLayout& l1 : pages[1])
                for (const PageLayout& l2 : pages[2]) {
                    std::vector<double> g(2, 0.0);
                    double f = 0.0;
                    for (const PageLayout* l : {&l0, &l1, &l2}) {
                        const LayoutValue v = layout_value(*l, zero, m2);
                        f += v.f;
                        for (int m = 0; m < 2; ++m) g[m] += v.g[m];
                    }
                    bool ok = true;
                    for (ChannelId m = 0; m < 2; ++m)
                        if (g[m] > b2.initial_max(m) + 1e-9 || g[m] < b2.initial_min(m) - 1e-9)
                            ok = false;
                    if (ok) best_feasible = std::max(best_feasible, f);
                }
        REQUIRE(best_feasible > -1e300);
        for (int iter = 0; iter < 40; ++iter) {
            const auto mu = testing::random_mu(gen, 2, 1.5);
            CHECK(empirical_dual(mu, s2, b2, m2) >= best_feasible - 1e-9);
        }
    }
}
