#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "bipolar/rng.hpp"

namespace bipolar {

// The three allowed steps of the encoding walk, as small codes.
//   0 -> (+1, 0)    1 -> (0, -1)    2 -> (-1, +1)
struct Step {
    int dx;
    int dy;
};

inline constexpr Step kSteps[3] = {{1, 0}, {0, -1}, {-1, 1}};
inline constexpr int kStepRight = 0; // (1,0)
inline constexpr int kStepDown  = 1; // (0,-1)
inline constexpr int kStepDiag  = 2; // (-1,1)

inline int step_code(int dx, int dy) {
    if (dx == 1 && dy == 0) return kStepRight;
    if (dx == 0 && dy == -1) return kStepDown;
    if (dx == -1 && dy == 1) return kStepDiag;
    throw std::invalid_argument("not a walk step: (" + std::to_string(dx) + "," +
                                std::to_string(dy) + ")");
}

struct Pos {
    std::int32_t x;
    std::int32_t y;
    friend bool operator==(Pos a, Pos b) { return a.x == b.x && a.y == b.y; }
};

// A finite walk with explicit start position. Positions are derived from the
// steps; 32-bit coordinates with an overflow guard on construction.
struct LatticeWalk {
    Pos start{0, 0};
    std::vector<std::uint8_t> steps;

    std::size_t num_steps() const { return steps.size(); }

    std::vector<Pos> positions() const {
        std::vector<Pos> out;
        out.reserve(steps.size() + 1);
        std::int64_t x = start.x, y = start.y;
        out.push_back({start.x, start.y});
        for (auto c : steps) {
            x += kSteps[c].dx;
            y += kSteps[c].dy;
            if (x > std::numeric_limits<std::int32_t>::max() || x < std::numeric_limits<std::int32_t>::min() ||
                y > std::numeric_limits<std::int32_t>::max() || y < std::numeric_limits<std::int32_t>::min())
                throw std::overflow_error("walk position exceeds 32-bit range");
            out.push_back({static_cast<std::int32_t>(x), static_cast<std::int32_t>(y)});
        }
        return out;
    }

    bool stays_in_quadrant() const {
        std::int64_t x = start.x, y = start.y;
        if (x < 0 || y < 0) return false;
        for (auto c : steps) {
            x += kSteps[c].dx;
            y += kSteps[c].dy;
            if (x < 0 || y < 0) return false;
        }
        return true;
    }

    Pos end() const {
        std::int64_t x = start.x, y = start.y;
        for (auto c : steps) { x += kSteps[c].dx; y += kSteps[c].dy; }
        return {static_cast<std::int32_t>(x), static_cast<std::int32_t>(y)};
    }
};

// A finite window of the bi-infinite walk. steps[k] is the increment from
// time (k - origin) to (k - origin + 1); time 0 carries the root edge.
struct WindowedWalk {
    std::vector<std::uint8_t> steps;
    std::int64_t origin = 0; // index into steps[] of the time-0 step

    std::int64_t t_min() const { return -origin; }                      // first position time
    std::int64_t t_max() const { return std::int64_t(steps.size()) - origin; } // last position time

    int step_at(std::int64_t t) const { // increment from t to t+1
        std::int64_t k = t + origin;
        if (k < 0 || k >= std::int64_t(steps.size()))
            throw std::out_of_range("step time outside window");
        return steps[std::size_t(k)];
    }

    // Position at time t relative to time 0 (Z_0 = (0,0)).
    Pos position(std::int64_t t) const {
        std::int64_t x = 0, y = 0;
        if (t >= 0) {
            for (std::int64_t i = 0; i < t; ++i) {
                x += kSteps[step_at(i)].dx;
                y += kSteps[step_at(i)].dy;
            }
        } else {
            for (std::int64_t i = t; i < 0; ++i) {
                x -= kSteps[step_at(i)].dx;
                y -= kSteps[step_at(i)].dy;
            }
        }
        return {static_cast<std::int32_t>(x), static_cast<std::int32_t>(y)};
    }
};

struct IndexOutOfWindow : std::out_of_range {
    using std::out_of_range::out_of_range;
};
struct Infeasible : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct BudgetExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline WindowedWalk sample_window(std::uint64_t seed, std::int64_t m_minus, std::int64_t m_plus) {
    if (m_minus < 0 || m_plus < 0) throw std::invalid_argument("window bounds must be >= 0");
    WindowedWalk w;
    w.origin = m_minus;
    w.steps.resize(std::size_t(m_minus + m_plus));
    Rng rng(seed);
    for (auto& s : w.steps) s = std::uint8_t(rng.step3());
    return w;
}

// New origin at time q of the old window: Z'_t = Z_{q+t} - Z_q.
inline WindowedWalk recenter(const WindowedWalk& w, std::int64_t q) {
    std::int64_t k = w.origin + q;
    if (k < 0 || k > std::int64_t(w.steps.size()))
        throw IndexOutOfWindow("recenter index outside window");
    WindowedWalk out = w;
    out.origin = k;
    return out;
}

// Time reversal with coordinate swap: (L,R) read backwards is again a walk
// with the same step set. Step (dx,dy) at time -1-k maps to (-dy,-dx).
inline WindowedWalk reverse_swap(const WindowedWalk& w) {
    WindowedWalk out;
    out.steps.resize(w.steps.size());
    for (std::size_t k = 0; k < w.steps.size(); ++k) {
        int c = w.steps[w.steps.size() - 1 - k];
        // (1,0)->(0,-1), (0,-1)->(1,0), (-1,1)->(-1,1)
        int m = (c == kStepRight) ? kStepDown : (c == kStepDown ? kStepRight : kStepDiag);
        out.steps[k] = std::uint8_t(m);
    }
    out.origin = std::int64_t(w.steps.size()) - w.origin;
    return out;
}

// ---- enumeration and exact counting (small n) -------------------------------

// Count quadrant walks from (l-1,0) to (0,r-1) with `num_steps` steps.
// Plain dynamic programming over (step, x, y); the independent oracle for the
// enumerator and for the map bijection counts.
inline std::uint64_t count_walks_dp(int num_steps, int l, int r) {
    if (num_steps < 0 || l < 1 || r < 1) return 0;
    int span = num_steps + l + r + 2;
    auto idx = [span](int x, int y) { return std::size_t(x) * span + y; };
    std::vector<std::uint64_t> cur(std::size_t(span) * span, 0), nxt;
    cur[idx(l - 1, 0)] = 1;
    for (int s = 0; s < num_steps; ++s) {
        nxt.assign(cur.size(), 0);
        for (int x = 0; x < span; ++x)
            for (int y = 0; y < span; ++y) {
                std::uint64_t c = cur[idx(x, y)];
                if (!c) continue;
                if (x + 1 < span) nxt[idx(x + 1, y)] += c;
                if (y > 0) nxt[idx(x, y - 1)] += c;
                if (x > 0 && y + 1 < span) nxt[idx(x - 1, y + 1)] += c;
            }
        cur.swap(nxt);
    }
    return cur[idx(0, r - 1)];
}

// All quadrant walks from (l-1,0) to (0,r-1), lexicographic in step codes.
inline std::vector<LatticeWalk> enumerate_walks(int num_steps, int l, int r) {
    std::vector<LatticeWalk> out;
    if (num_steps < 0 || l < 1 || r < 1) return out;
    LatticeWalk w;
    w.start = {std::int32_t(l - 1), 0};
    w.steps.assign(std::size_t(num_steps), 0);
    // DFS with a feasibility prune: remaining displacement must be reachable.
    auto feasible = [&](std::int64_t x, std::int64_t y, int left) {
        // With steps (1,0),(0,-1),(-1,1): reach (0,r-1) in `left` steps iff
        // counts na,nb,nc >= 0 with na-nc = dx, nc-nb = dy, na+nb+nc = left.
        std::int64_t dx = 0 - x, dy = (r - 1) - y;
        std::int64_t t = left - dx - 2 * dy; // = 3*nb
        if (t < 0 || t % 3 != 0) return false;
        std::int64_t nb = t / 3, nc = nb + dy, na = dx + nc;
        return na >= 0 && nb >= 0 && nc >= 0;
    };
    std::vector<std::pair<std::int64_t, std::int64_t>> pos(std::size_t(num_steps) + 1);
    pos[0] = {l - 1, 0};
    int depth = 0;
    std::vector<int> choice(std::size_t(num_steps), -1);
    while (depth >= 0) {
        if (depth == num_steps) {
            if (pos[depth].first == 0 && pos[depth].second == r - 1) {
                for (int i = 0; i < num_steps; ++i) w.steps[i] = std::uint8_t(choice[i]);
                out.push_back(w);
            }
            --depth;
            continue;
        }
        int c = ++choice[depth];
        if (c > 2) {
            choice[depth] = -1;
            --depth;
            continue;
        }
        auto [x, y] = pos[depth];
        std::int64_t nx = x + kSteps[c].dx, ny = y + kSteps[c].dy;
        if (nx < 0 || ny < 0) continue;
        if (!feasible(nx, ny, num_steps - depth - 1)) continue;
        pos[depth + 1] = {nx, ny};
        ++depth;
    }
    return out;
}

// Exact uniform sample over the set enumerate_walks() describes, by rejection
// from the unconditioned walk. Adequate for the small sizes used in tests.
inline LatticeWalk sample_conditioned_walk(int num_steps, int l, int r, std::uint64_t seed,
                                           std::uint64_t max_attempts = 20'000'000) {
    if (count_walks_dp(num_steps, l, r) == 0)
        throw Infeasible("no quadrant walk with these parameters");
    Rng rng(seed);
    LatticeWalk w;
    w.start = {std::int32_t(l - 1), 0};
    w.steps.resize(std::size_t(num_steps));
    for (std::uint64_t attempt = 0; attempt < max_attempts; ++attempt) {
        std::int64_t x = l - 1, y = 0;
        bool ok = true;
        for (int i = 0; i < num_steps; ++i) {
            int c = rng.step3();
            w.steps[std::size_t(i)] = std::uint8_t(c);
            x += kSteps[c].dx;
            y += kSteps[c].dy;
            if (x < 0 || y < 0) { ok = false; break; }
        }
        if (ok && x == 0 && y == r - 1) return w;
    }
    throw BudgetExceeded("rejection sampler exceeded attempt cap");
}

// ---- diffusive rescaling ----------------------------------------------------

struct ScalingConfig {
    std::int64_t m = 1;   // diffusive scale
    double alpha = 1.0;   // the unknown variance constant; tests use ratios
    double prefactor() const { return std::sqrt(1.5 * alpha); }
};

// Z^m_t = prefactor * m^{-1/2} * Z_{tm}, linear between grid times i/m.
struct RescaledPath {
    std::vector<Pos> lattice;  // Z_i along the walk
    std::int64_t t0 = 0;       // lattice index of path time 0
    std::int64_t m = 1;
    double scale = 1.0;        // prefactor * m^{-1/2}

    std::pair<double, double> at(double t) const {
        double u = t * double(m) + double(t0);
        double lo = 0.0, hi = double(lattice.size() - 1);
        if (u < lo) u = lo;
        if (u > hi) u = hi;
        std::size_t i = std::size_t(u);
        if (i + 1 >= lattice.size()) i = lattice.size() - 2 + (lattice.size() == 1 ? 1 : 0);
        if (lattice.size() == 1) return {scale * lattice[0].x, scale * lattice[0].y};
        double f = u - double(i);
        double x = (1 - f) * lattice[i].x + f * lattice[i + 1].x;
        double y = (1 - f) * lattice[i].y + f * lattice[i + 1].y;
        return {scale * x, scale * y};
    }
};

inline RescaledPath rescale(const LatticeWalk& w, const ScalingConfig& cfg) {
    if (cfg.m < 1) throw std::invalid_argument("scale m must be >= 1");
    RescaledPath p;
    p.lattice = w.positions();
    p.t0 = 0;
    p.m = cfg.m;
    p.scale = cfg.prefactor() / std::sqrt(double(cfg.m));
    return p;
}

inline RescaledPath rescale(const WindowedWalk& w, const ScalingConfig& cfg) {
    if (cfg.m < 1) throw std::invalid_argument("scale m must be >= 1");
    RescaledPath p;
    p.lattice.reserve(w.steps.size() + 1);
    std::int64_t x = 0, y = 0;
    Pos o = w.position(w.t_min());
    x = o.x;
    y = o.y;
    p.lattice.push_back({std::int32_t(x), std::int32_t(y)});
    for (auto c : w.steps) {
        x += kSteps[c].dx;
        y += kSteps[c].dy;
        p.lattice.push_back({std::int32_t(x), std::int32_t(y)});
    }
    p.t0 = w.origin;
    p.m = cfg.m;
    p.scale = cfg.prefactor() / std::sqrt(double(cfg.m));
    return p;
}

// Exact sampler for the walk of duration D conditioned so that the R
// coordinate stays >= 0 before time D and hits -1 at time D (the discrete
// excursion of Lemma-4.2 type). Uses the cycle lemma: among the D cyclic
// shifts of a step sequence with net R-displacement -1 exactly one is a
// first-passage path. The L-coordinate is then forced stepwise.
inline LatticeWalk sample_first_passage_excursion(int duration, std::uint64_t seed) {
    if (duration < 1 || duration % 3 != 1)
        throw Infeasible("first-passage duration must be 1 mod 3");
    // nb = #down = nc + 1, na = #right = nc; 3*nc + 1 = duration.
    int nc = (duration - 1) / 3;
    std::vector<std::uint8_t> seq;
    seq.reserve(std::size_t(duration));
    seq.insert(seq.end(), std::size_t(nc), std::uint8_t(kStepRight));
    seq.insert(seq.end(), std::size_t(nc + 1), std::uint8_t(kStepDown));
    seq.insert(seq.end(), std::size_t(nc), std::uint8_t(kStepDiag));
    Rng rng(seed);
    for (std::size_t i = seq.size(); i > 1; --i)
        std::swap(seq[i - 1], seq[rng.below(i)]);
    // Unique rotation making partial R-sums first hit -1 at the end.
    // The rotation point is just after the position where R-prefix attains
    // its minimum for the last time.
    std::int64_t run = 0, best = 1, best_at = -1;
    for (int i = 0; i < duration; ++i) {
        run += kSteps[seq[std::size_t(i)]].dy;
        if (run < best) { best = run; best_at = i; }
    }
    LatticeWalk w;
    w.start = {0, 0};
    w.steps.resize(std::size_t(duration));
    for (int i = 0; i < duration; ++i)
        w.steps[std::size_t(i)] = seq[std::size_t((best_at + 1 + i) % duration)];
    return w;
}

} // namespace bipolar
