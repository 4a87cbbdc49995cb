#include <catch2/catch_amalgamated.hpp>

#include "bipolar/excursion.hpp"
#include "bipolar/stats.hpp"

using namespace bipolar;

namespace {

WindowedWalk from_steps(std::vector<int> codes) {
    WindowedWalk w;
    w.origin = 0;
    for (int c : codes) w.steps.push_back(std::uint8_t(c));
    return w;
}

} // namespace

TEST_CASE("X on the worked examples") {
    {
        auto w = from_steps({kStepDiag, kStepDown, kStepDown});
        auto p = compute_X(w);
        REQUIRE(p.values == std::vector<std::int32_t>{0, 1, 0, 0});
        REQUIRE(p.n_east == std::vector<std::int64_t>{0, 2});
        REQUIRE(p.n_west == std::vector<std::int64_t>{1});
        auto l = local_time(p);
        REQUIRE(l.values == std::vector<std::int64_t>{1, 1, 2, 3});
    }
    {
        auto w = from_steps({kStepRight});
        auto p = compute_X(w);
        REQUIRE(p.values == std::vector<std::int32_t>{0, -1});
        auto l = local_time(p);
        REQUIRE(l.values == std::vector<std::int64_t>{1, 1});
    }
    {
        WindowedWalk w;
        w.origin = 0;
        auto p = compute_X(w);
        REQUIRE(p.values == std::vector<std::int32_t>{0});
    }
}

TEST_CASE("stopping time formulas hold exactly") {
    WindowedWalk w = sample_window(5, 0, 20000);
    auto p = compute_X(w);
    // N_k^W = inf{ n >= N_k^E : X_n = 1 }; N_{k+1}^E = inf{ n >= N_k^W : X_n = 0 }
    for (std::size_t k = 0; k < p.n_west.size(); ++k) {
        std::int64_t ne = p.n_east[k];
        std::int64_t found = -1;
        for (std::int64_t n = ne; n <= p.length(); ++n)
            if (p.values[std::size_t(n)] == 1) {
                found = n;
                break;
            }
        REQUIRE(found == p.n_west[k]);
        if (k + 1 < p.n_east.size()) {
            std::int64_t found0 = -1;
            for (std::int64_t n = p.n_west[k]; n <= p.length(); ++n)
                if (p.values[std::size_t(n)] == 0) {
                    found0 = n;
                    break;
                }
            REQUIRE(found0 == p.n_east[k + 1]);
        }
    }
    // per-phase step mapping
    std::size_t iw = 0, ie = 1;
    for (std::int64_t n = 1; n <= p.length(); ++n) {
        bool west_phase;
        // west on (N_k^W, N_{k+1}^E]
        std::int64_t last_w = -1, last_e = 0;
        while (iw < p.n_west.size() && p.n_west[iw] < n) ++iw;
        while (ie < p.n_east.size() && p.n_east[ie] < n) ++ie;
        last_w = (iw > 0 && false) ? 0 : -1;
        (void)last_w;
        (void)last_e;
        // recompute simply: find the greatest stopping time < n of each kind
        std::int64_t w_le = -1, e_le = -1;
        for (auto t : p.n_west)
            if (t < n) w_le = t;
        for (auto t : p.n_east)
            if (t < n) e_le = t;
        west_phase = w_le > e_le;
        int c = w.step_at(n - 1);
        int dx = west_phase ? kSteps[c].dy : -kSteps[c].dx;
        REQUIRE(p.values[std::size_t(n)] - p.values[std::size_t(n - 1)] == dx);
    }
}

TEST_CASE("X is marginally a lazy uniform walk") {
    WindowedWalk w = sample_window(11, 0, 1000000);
    auto p = compute_X(w);
    std::int64_t counts[3] = {0, 0, 0};
    for (std::int64_t n = 1; n <= p.length(); ++n) {
        int d = p.values[std::size_t(n)] - p.values[std::size_t(n - 1)];
        counts[d + 1]++;
    }
    auto res = chi_square({counts[0], counts[1], counts[2]}, {1.0 / 3, 1.0 / 3, 1.0 / 3});
    REQUIRE(res.p_value > 0.001);
}

TEST_CASE("geometric increments of the local time at west starts") {
    WindowedWalk w = sample_window(21, 0, 4000000);
    auto p = compute_X(w);
    std::size_t K = p.n_west.size() - 1;
    auto ys = geometric_increments(p, K);
    REQUIRE(ys.size() == K);
    std::vector<std::int64_t> hist(12, 0);
    double mean = 0;
    for (auto y : ys) {
        REQUIRE(y >= 1);
        mean += double(y);
        hist[std::size_t(std::min<std::int64_t>(y, 11))]++;
    }
    mean /= double(ys.size());
    // E[Y] = 3, Var[Y] = 6
    REQUIRE(std::fabs(mean - 3.0) < 3 * std::sqrt(6.0 / double(ys.size())));
    std::vector<std::int64_t> obs(hist.begin() + 1, hist.end());
    std::vector<double> probs;
    double tail = 1.0;
    for (int v = 1; v <= 10; ++v) {
        double q = std::pow(2.0 / 3.0, v - 1) / 3.0;
        probs.push_back(q);
        tail -= q;
    }
    probs.push_back(tail);
    auto res = chi_square(obs, probs);
    REQUIRE(res.p_value > 0.001);
}

TEST_CASE("decompose/reassemble is the identity") {
    for (std::uint64_t seed : {100ull, 101ull, 102ull}) {
        WindowedWalk w = sample_window(seed, 500, 5000);
        auto d = decompose(w);
        WindowedWalk back = reassemble(d);
        REQUIRE(back.origin == w.origin);
        REQUIRE(back.steps == w.steps);
        // single-excursion sanity: records tile [0, last_zero]
        std::int64_t t = 0;
        for (const auto& r : d.records) {
            REQUIRE(r.start == t);
            REQUIRE(r.end > r.start);
            t = r.end;
        }
    }
}

TEST_CASE("east/west excursion signs are balanced") {
    // the zero count of a single window fluctuates heavily; pool windows
    std::int64_t east = 0, west = 0;
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        WindowedWalk w = sample_window(3100 + seed, 0, 100000);
        auto d = decompose(w);
        for (const auto& r : d.records) {
            if (r.sign < 0) ++east;
            if (r.sign > 0) ++west;
        }
    }
    double n = double(east + west);
    REQUIRE(n > 2000);
    REQUIRE(std::fabs(double(east) / n - 0.5) < 3 * std::sqrt(0.25 / n));
}

TEST_CASE("crossing set of the north flow line equals the zero set of X") {
    for (std::uint64_t seed : {7ull, 8ull, 9ull}) {
        WindowedWalk w = sample_window(seed, 2000, 20000);
        SewnWindow sw = sew(w);
        HalfEdgeMap dual = dualize(sw.map);
        CrossingSet cs = crossing_set(sw, dual);
        auto p = compute_X(w);
        std::vector<std::int64_t> zeros;
        for (std::int64_t n = 0; n <= p.length(); ++n)
            if (p.values[std::size_t(n)] == 0) zeros.push_back(n);
        // compare up to the resolved horizon
        REQUIRE(cs.times.size() >= 3);
        std::int64_t horizon = cs.truncated ? cs.times.back() : w.t_max();
        std::vector<std::int64_t> zcut;
        for (auto z : zeros)
            if (z <= horizon) zcut.push_back(z);
        REQUIRE(cs.times == zcut);
        REQUIRE(cs.times.front() == 0);
        // sign refinement on the intervals between crossings
        for (std::size_t k = 0; k + 1 < cs.times.size(); ++k) {
            if (cs.interval_side[k] == 0) continue;
            for (std::int64_t n = cs.times[k] + 1; n < cs.times[k + 1]; ++n) {
                int sgn = p.values[std::size_t(n)] > 0 ? 1 : -1;
                REQUIRE(sgn == cs.interval_side[k]);
            }
        }
    }
}
