#include <catch2/catch_amalgamated.hpp>

#include "bipolar/rng.hpp"
#include "bipolar/stats.hpp"
#include "bipolar/walk.hpp"

using namespace bipolar;

TEST_CASE("empty window has a single position at the origin") {
    WindowedWalk w = sample_window(7, 0, 0);
    REQUIRE(w.steps.empty());
    REQUIRE(w.position(0) == Pos{0, 0});
}

TEST_CASE("sampling is deterministic in the seed") {
    WindowedWalk a = sample_window(12345, 10, 1000);
    WindowedWalk b = sample_window(12345, 10, 1000);
    REQUIRE(a.steps == b.steps);
    WindowedWalk c = sample_window(12346, 10, 1000);
    REQUIRE(a.steps != c.steps);
}

TEST_CASE("step frequencies are uniform over the three steps") {
    const std::int64_t n = 1'000'000;
    WindowedWalk w = sample_window(99, 0, n);
    std::int64_t counts[3] = {0, 0, 0};
    for (auto c : w.steps) counts[c]++;
    double se = std::sqrt(double(n) * (1.0 / 3) * (2.0 / 3));
    for (int c = 0; c < 3; ++c)
        REQUIRE(std::fabs(double(counts[c]) - double(n) / 3) < 3 * se);
}

TEST_CASE("per-step moments match the uniform step law") {
    // exact over the three equally likely steps: mean 0, Var = 2/3, Cov = -1/3
    const std::int64_t n = 1'000'000;
    WindowedWalk w = sample_window(4242, 0, n);
    double sl = 0, sr = 0, sll = 0, srr = 0, slr = 0;
    for (auto c : w.steps) {
        double dl = kSteps[c].dx, dr = kSteps[c].dy;
        sl += dl;
        sr += dr;
        sll += dl * dl;
        srr += dr * dr;
        slr += dl * dr;
    }
    double N = double(n);
    REQUIRE(std::fabs(sl / N) < 3 * std::sqrt(2.0 / 3 / N));
    REQUIRE(std::fabs(sr / N) < 3 * std::sqrt(2.0 / 3 / N));
    // variance of dl^2 terms: dl^2 is Bernoulli(2/3)
    double se2 = 3 * std::sqrt((2.0 / 3) * (1.0 / 3) / N);
    REQUIRE(std::fabs(sll / N - 2.0 / 3) < se2);
    REQUIRE(std::fabs(srr / N - 2.0 / 3) < se2);
    REQUIRE(std::fabs(slr / N + 1.0 / 3) < se2);
    // implied correlation -1/2
    double corr = (slr / N) / std::sqrt((sll / N) * (srr / N));
    REQUIRE(std::fabs(corr + 0.5) < 0.01);
}

TEST_CASE("enumerate_walks small cases") {
    REQUIRE(enumerate_walks(1, 2, 1).empty()); // no single step equals (-1,0)
    auto two = enumerate_walks(2, 2, 1);
    REQUIRE(two.size() == 1);
    auto pos = two[0].positions();
    REQUIRE(pos == std::vector<Pos>{{1, 0}, {0, 1}, {0, 0}});
    REQUIRE(count_walks_dp(2, 2, 1) == 1);
    REQUIRE(count_walks_dp(1, 2, 1) == 0);
    // frozen by the independent DP oracle
    REQUIRE(enumerate_walks(3, 1, 1).size() == count_walks_dp(3, 1, 1));
    REQUIRE(count_walks_dp(3, 1, 1) == 1);
}

TEST_CASE("enumeration agrees with the DP counter and stays in the quadrant") {
    for (int k = 0; k <= 12; ++k) {
        auto ws = enumerate_walks(k, 2, 1);
        REQUIRE(std::uint64_t(ws.size()) == count_walks_dp(k, 2, 1));
        for (const auto& w : ws) REQUIRE(w.stays_in_quadrant());
        // no duplicates: lexicographic enumeration is strictly increasing
        for (std::size_t i = 1; i < ws.size(); ++i) REQUIRE(ws[i - 1].steps < ws[i].steps);
    }
}

TEST_CASE("conditioned sampler: unique walk and infeasible case") {
    LatticeWalk w = sample_conditioned_walk(2, 2, 1, 5);
    REQUIRE(w.positions() == std::vector<Pos>{{1, 0}, {0, 1}, {0, 0}});
    REQUIRE_THROWS_AS(sample_conditioned_walk(1, 2, 1, 5), Infeasible);
}

TEST_CASE("conditioned sampler is uniform (chi-square)") {
    // smallest sizes with a rich support; (6,2,1) is infeasible (k = 2 mod 3)
    const int k = 5, l = 2, r = 1;
    auto support = enumerate_walks(k, l, r);
    REQUIRE(support.size() > 1);
    std::map<std::vector<std::uint8_t>, std::int64_t> counts;
    for (const auto& w : support) counts[w.steps] = 0;
    const int trials = 10000;
    for (int t = 0; t < trials; ++t) {
        LatticeWalk w = sample_conditioned_walk(k, l, r, derive_seed(77, std::uint64_t(t)));
        auto it = counts.find(w.steps);
        REQUIRE(it != counts.end());
        it->second++;
    }
    std::vector<std::int64_t> obs;
    std::vector<double> probs;
    for (auto& [_, c] : counts) {
        obs.push_back(c);
        probs.push_back(1.0 / double(support.size()));
    }
    auto res = chi_square(obs, probs);
    REQUIRE(res.p_value > 0.001);
}

TEST_CASE("recenter is a group action preserving the step multiset") {
    WindowedWalk w = sample_window(3, 50, 50);
    REQUIRE(recenter(w, 0).steps == w.steps);
    REQUIRE(recenter(w, 0).origin == w.origin);
    WindowedWalk v = recenter(recenter(w, 17), -17);
    REQUIRE(v.steps == w.steps);
    REQUIRE(v.origin == w.origin);
    REQUIRE_THROWS_AS(recenter(w, 99), IndexOutOfWindow);
}

TEST_CASE("rescale is exact at grid times and linear between") {
    LatticeWalk w;
    w.start = {1, 0};
    w.steps = {kStepDiag, kStepDown};
    ScalingConfig cfg;
    cfg.m = 1;
    cfg.alpha = 2.0 / 3.0; // prefactor 1
    REQUIRE(cfg.prefactor() == Catch::Approx(1.0));
    RescaledPath p = rescale(w, cfg);
    REQUIRE(p.at(0.0).first == Catch::Approx(1.0));
    REQUIRE(p.at(1.0).first == Catch::Approx(0.0));
    REQUIRE(p.at(1.0).second == Catch::Approx(1.0));
    REQUIRE(p.at(2.0).second == Catch::Approx(0.0));
    REQUIRE(p.at(0.5).first == Catch::Approx(0.5));

    cfg.m = 4;
    RescaledPath q = rescale(w, cfg);
    // value at t = 1/4 is Z_1 / 2
    REQUIRE(q.at(0.25).first == Catch::Approx(0.0));
    REQUIRE(q.at(0.25).second == Catch::Approx(0.5));
}

TEST_CASE("first-passage excursion sampler hits -1 exactly at the end") {
    for (int d : {1, 4, 10, 31, 100}) {
        LatticeWalk w = sample_first_passage_excursion(d, std::uint64_t(d) * 31 + 1);
        auto pos = w.positions();
        REQUIRE(std::int64_t(w.steps.size()) == d);
        for (int i = 0; i < d; ++i) REQUIRE(pos[std::size_t(i)].y >= 0);
        REQUIRE(pos[std::size_t(d)].y == -1);
    }
    REQUIRE_THROWS_AS(sample_first_passage_excursion(3, 1), Infeasible);
}

TEST_CASE("reverse_swap is an involution with the same step set") {
    WindowedWalk w = sample_window(8, 20, 30);
    WindowedWalk v = reverse_swap(reverse_swap(w));
    REQUIRE(v.steps == w.steps);
    REQUIRE(v.origin == w.origin);
}
