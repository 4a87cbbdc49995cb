#include <catch2/catch_amalgamated.hpp>

#include "bipolar/harness.hpp"
#include "bipolar/io.hpp"

using namespace bipolar;

namespace {

SuiteConfig small(const std::string& name, std::int64_t m, std::int64_t trials,
                  std::uint64_t seed = 11) {
    SuiteConfig cfg;
    cfg.suite = name;
    cfg.m = m;
    cfg.trials = trials;
    cfg.seed = seed;
    return cfg;
}

} // namespace

TEST_CASE("unknown suite is rejected") {
    REQUIRE_THROWS_AS(run_suite(small("no-such-suite", 10, 1)), UnknownSuite);
}

TEST_CASE("exact suites pass at small scale") {
    for (const char* name : {"bijection", "excursion-identities", "dual-order",
                             "dual-height-identity"}) {
        SuiteConfig cfg = small(name, 4000, 12);
        StatsReport rep = run_suite(cfg);
        INFO(name);
        for (const auto& c : rep.checks) {
            INFO(c.name << " estimate " << c.estimate);
            REQUIRE(c.pass);
        }
        REQUIRE(rep.pass());
    }
}

TEST_CASE("statistical suites pass at small scale") {
    REQUIRE(run_suite(small("geometric-law", 300000, 24)).pass());
    REQUIRE(run_suite(small("correlation", 1000000, 64)).pass());
    REQUIRE(run_suite(small("l-over-k", 2000, 1)).pass());
    REQUIRE(run_suite(small("local-time-3/2", 100000, 48)).pass());
    REQUIRE(run_suite(small("conditioned-excursion", 2500, 4000)).pass());
}

TEST_CASE("scaling suites pass at small scale") {
    {
        StatsReport rep = run_suite(small("variance-ratio-9", 20000, 160));
        INFO("estimate " << rep.checks[0].estimate);
        REQUIRE(rep.pass());
    }
    {
        StatsReport rep = run_suite(small("primal-dual-sup", 100000, 32));
        REQUIRE(rep.pass());
    }
    {
        StatsReport rep = run_suite(small("joint-ZX", 10000, 1500));
        for (const auto& c : rep.checks) {
            INFO(c.name << " estimate " << c.estimate);
            REQUIRE(c.pass);
        }
    }
    {
        StatsReport rep = run_suite(small("merge-tightness", 10000, 150));
        for (const auto& c : rep.checks) {
            INFO(c.name << " estimate " << c.estimate);
            REQUIRE(c.pass);
        }
    }
    {
        StatsReport rep = run_suite(small("y-walk", 1000, 40));
        for (const auto& c : rep.checks) {
            INFO(c.name << " estimate " << c.estimate);
            REQUIRE(c.pass);
        }
    }
}

TEST_CASE("reports are deterministic and independent of thread count") {
    SuiteConfig cfg = small("variance-ratio-9", 5000, 40);
    cfg.threads = 1;
    auto a = report_to_json(run_suite(cfg)).dump(2);
    cfg.threads = 4;
    auto b = report_to_json(run_suite(cfg)).dump(2);
    REQUIRE(a == b);
}

TEST_CASE("enumeration table") {
    auto table = enumerate_and_count(8);
    REQUIRE(table[1].walks == 0);
    REQUIRE(table[2].walks == 1);
    REQUIRE(table[2].distinct_maps == 1);
    for (const auto& row : table) REQUIRE(row.walks == row.distinct_maps);
    // monotone growth over the feasible step counts (2 mod 3)
    REQUIRE(table[5].walks > table[2].walks);
    REQUIRE(table[8].walks > table[5].walks);
}
