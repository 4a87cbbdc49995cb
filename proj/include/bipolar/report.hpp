#pragma once

#include <charconv>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace bipolar {

struct UnknownSuite : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct ResolutionTooLow : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SuiteConfig {
    std::string suite;
    std::int64_t m = 100000;    // diffusive scale / window size
    std::int64_t trials = 100;  // Monte Carlo repetitions
    std::uint64_t seed = 1;     // master seed
    int threads = 0;            // 0 = hardware concurrency
    int inflation_cap = 7;      // window doublings before giving up
    double se_mult = 3.0;       // moment checks: |z| <= se_mult
    double p_floor = 0.001;     // goodness-of-fit checks
    double ratio_tol = 0.10;    // ratio-limit checks at the default scale
    double min_resolution = 0.99;
};

struct CheckResult {
    std::string name;
    double estimate = 0.0;
    double lo = 0.0; // pass iff lo <= estimate <= hi
    double hi = 0.0;
    bool pass = false;
    std::string note;
};

struct StatsReport {
    std::string suite;
    SuiteConfig cfg;
    std::vector<CheckResult> checks;
    std::int64_t attempted = 0;
    std::int64_t resolved = 0;

    double resolution() const {
        return attempted == 0 ? 1.0 : double(resolved) / double(attempted);
    }
    bool pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }

    CheckResult& add(const std::string& name, double estimate, double lo, double hi,
                     const std::string& note = "") {
        checks.push_back({name, estimate, lo, hi, estimate >= lo && estimate <= hi, note});
        return checks.back();
    }
};

// The joint scaling limit itself is not directly observable; this battery of
// exact identities and statistical checks is the declared operationalization.
// Statistical thresholds are engineering choices, not values from the theory.
inline const char* kReportHeader =
    "exact combinatorial identities plus statistical checks of the limit "
    "constants; statistical thresholds are engineering defaults";

inline std::string fmt_double(double v) {
    char buf[40];
    auto r = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, r.ptr);
}

inline nlohmann::json report_to_json(const StatsReport& r) {
    nlohmann::json j;
    j["suite"] = r.suite;
    j["header"] = kReportHeader;
    j["config"] = {{"m", r.cfg.m},
                   {"trials", r.cfg.trials},
                   {"seed", r.cfg.seed},
                   {"inflation_cap", r.cfg.inflation_cap},
                   {"se_mult", fmt_double(r.cfg.se_mult)},
                   {"p_floor", fmt_double(r.cfg.p_floor)},
                   {"ratio_tol", fmt_double(r.cfg.ratio_tol)}};
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : r.checks) {
        nlohmann::json cj;
        cj["name"] = c.name;
        cj["estimate"] = fmt_double(c.estimate);
        cj["lo"] = fmt_double(c.lo);
        cj["hi"] = fmt_double(c.hi);
        cj["pass"] = c.pass;
        if (!c.note.empty()) cj["note"] = c.note;
        checks.push_back(std::move(cj));
    }
    j["checks"] = std::move(checks);
    j["resolution"] = {{"attempted", r.attempted},
                       {"resolved", r.resolved},
                       {"rate", fmt_double(r.resolution())}};
    j["pass"] = r.pass();
    return j;
}

} // namespace bipolar
