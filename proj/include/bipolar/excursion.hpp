#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "bipolar/dual.hpp"
#include "bipolar/map.hpp"
#include "bipolar/walk.hpp"

namespace bipolar {

struct MalformedDecomposition : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The signed frontier-distance walk of the excursion decomposition, together
// with its alternating stopping times. X_0 = 0; during an east phase
// (N_k^E, N_k^W] the increment is -dL, during a west phase (N_k^W, N_{k+1}^E]
// it is +dR.
struct ExcursionProcess {
    std::vector<std::int32_t> values; // X_0 .. X_n
    std::vector<std::int64_t> n_east; // N_1^E = 0, N_2^E, ...
    std::vector<std::int64_t> n_west; // N_1^W, N_2^W, ...

    std::int64_t length() const { return std::int64_t(values.size()) - 1; }
};

// Streaming phase machine; feed step codes for times 0,1,2,...
class XMachine {
public:
    std::int32_t x = 0;
    bool west_phase = false;
    std::int64_t t = 0;
    std::int64_t zeros = 1; // local time, counting X_0 = 0

    // Returns the new X value after consuming the step from t to t+1.
    std::int32_t feed(int code) {
        int dl = kSteps[code].dx, dr = kSteps[code].dy;
        x += west_phase ? dr : -dl;
        ++t;
        if (!west_phase && x == 1) {
            west_phase = true;
            new_west = true;
        } else {
            new_west = false;
        }
        if (west_phase && !new_west && x == 0) {
            west_phase = false;
            new_east = true;
        } else {
            new_east = false;
        }
        if (x == 0) ++zeros;
        return x;
    }

    bool new_west = false; // t just became some N_k^W
    bool new_east = false; // t just became some N_k^E (k >= 2)
};

inline ExcursionProcess compute_X(const WindowedWalk& w) {
    ExcursionProcess p;
    p.values.reserve(std::size_t(w.t_max()) + 1);
    p.values.push_back(0);
    p.n_east.push_back(0);
    XMachine mach;
    for (std::int64_t t = 0; t < w.t_max(); ++t) {
        p.values.push_back(mach.feed(w.step_at(t)));
        if (mach.new_west) p.n_west.push_back(mach.t);
        if (mach.new_east) p.n_east.push_back(mach.t);
    }
    return p;
}

// The analogous process along the south-going flow line: computed on the
// reversed, coordinate-swapped window, so that negative times of the
// original map become positive times here.
inline ExcursionProcess compute_X_south(const WindowedWalk& w) {
    return compute_X(reverse_swap(w));
}

struct LocalTime {
    std::vector<std::int64_t> values; // l_0 .. l_n
};

inline LocalTime local_time(const ExcursionProcess& p) {
    LocalTime l;
    l.values.reserve(p.values.size());
    std::int64_t c = 0;
    for (auto x : p.values) {
        if (x == 0) ++c;
        l.values.push_back(c);
    }
    return l;
}

// Y_k = l_{N^W_{k+1}} - l_{N^W_k}, k = 1..K.
inline std::vector<std::int64_t> geometric_increments(const ExcursionProcess& p, std::size_t K) {
    if (p.n_west.size() < K + 1) throw WindowExhausted("not enough west phases in window");
    LocalTime l = local_time(p);
    std::vector<std::int64_t> out;
    out.reserve(K);
    for (std::size_t k = 0; k + 1 <= K; ++k)
        out.push_back(l.values[std::size_t(p.n_west[k + 1])] -
                      l.values[std::size_t(p.n_west[k])]);
    return out;
}

// ---- decomposition round trip -------------------------------------------------

// One record per interval between consecutive zeros of X. `east` is set when
// X <= 0 on the interior; intervals of length one carry sign 0.
struct ExcursionRecord {
    std::int64_t start = 0;
    std::int64_t end = 0;
    int sign = 0; // +1 west, -1 east, 0 for single-step intervals at level 0
    std::vector<std::uint8_t> z_steps; // walk increments over [start, end)
};

struct ExcursionDecomposition {
    std::vector<ExcursionRecord> records;
    std::vector<std::uint8_t> head_steps; // steps before time 0 (window part)
    std::int64_t t0 = 0;                  // = -origin of the source window
    std::vector<std::uint8_t> tail_steps; // steps after the last zero
    std::int64_t last_zero = 0;
};

inline ExcursionDecomposition decompose(const WindowedWalk& w) {
    ExcursionDecomposition d;
    d.t0 = w.t_min();
    for (std::int64_t t = d.t0; t < 0; ++t)
        d.head_steps.push_back(std::uint8_t(w.step_at(t)));
    ExcursionProcess p = compute_X(w);
    std::int64_t prev_zero = 0;
    for (std::int64_t t = 1; t <= p.length(); ++t) {
        if (p.values[std::size_t(t)] != 0) continue;
        ExcursionRecord r;
        r.start = prev_zero;
        r.end = t;
        int sgn = 0;
        for (std::int64_t k = prev_zero + 1; k < t; ++k) {
            if (p.values[std::size_t(k)] > 0) sgn = +1;
            if (p.values[std::size_t(k)] < 0) sgn = -1;
        }
        r.sign = sgn;
        for (std::int64_t k = r.start; k < r.end; ++k)
            r.z_steps.push_back(std::uint8_t(w.step_at(k)));
        d.records.push_back(std::move(r));
        prev_zero = t;
    }
    d.last_zero = prev_zero;
    for (std::int64_t t = prev_zero; t < w.t_max(); ++t)
        d.tail_steps.push_back(std::uint8_t(w.step_at(t)));
    return d;
}

inline WindowedWalk reassemble(const ExcursionDecomposition& d) {
    WindowedWalk w;
    w.origin = -d.t0;
    w.steps.insert(w.steps.end(), d.head_steps.begin(), d.head_steps.end());
    std::int64_t t = 0;
    for (const auto& r : d.records) {
        if (r.start != t)
            throw MalformedDecomposition("excursion intervals do not tile the window");
        if (r.end - r.start != std::int64_t(r.z_steps.size()))
            throw MalformedDecomposition("excursion record length mismatch");
        w.steps.insert(w.steps.end(), r.z_steps.begin(), r.z_steps.end());
        t = r.end;
    }
    if (t != d.last_zero) throw MalformedDecomposition("trailing zero index mismatch");
    w.steps.insert(w.steps.end(), d.tail_steps.begin(), d.tail_steps.end());
    return w;
}

// ---- geometric crossing set ----------------------------------------------------

// The north-going flow line from the root, read off the dual map, together
// with the crossing times of the exploration path and the side labels it
// induces on nearby vertices. Everything here is combinatorial; the zero-set
// identity against X is asserted by the callers.
struct CrossingSet {
    std::vector<std::int64_t> times;     // peano times of crossed edges, increasing
    std::vector<EId> corridor;           // the crossed edges themselves
    bool truncated = false;              // flow line left the window
    // side of the interval (times[k], times[k+1]): +1 west, -1 east; entry k
    // describes the interval following crossing k (absent for zero-length).
    std::vector<int> interval_side;
};

// Side of the edge `g` with respect to the corridor built around crossing k:
// used only for edges adjacent to the corridor, where the label is forced.
namespace detail {
struct CorridorLabels {
    // vertex -> +1 west / -1 east, for vertices incident to corridor faces
    std::vector<std::pair<VId, int>> labels;
    int side_of_vertex(VId v) const {
        for (auto [u, s] : labels)
            if (u == v) return s;
        return 0;
    }
};
} // namespace detail

// Build the crossing set of the north flow line from the root of a sewn
// window. `dual` must be dualize(w.map). Times are restricted to the window.
inline CrossingSet crossing_set(const SewnWindow& w, const HalfEdgeMap& dual) {
    CrossingSet out;
    const HalfEdgeMap& m = w.map;
    EId g = w.root;
    while (true) {
        std::int64_t t = m.peano_[std::size_t(g)];
        if (t == kNoTime || t > w.t_max) break;
        out.corridor.push_back(g);
        out.times.push_back(t);
        ParentResult p = tree_parent(dual, g, TreeDir::East);
        if (p.status != ParentResult::Status::Ok) {
            out.truncated = true;
            break;
        }
        g = p.e;
    }
    // Interval sides: look at the successor of each crossed edge. When it
    // stays on the corridor the interval is empty; otherwise the landing edge
    // is incident to the corridor and its side is forced.
    out.interval_side.assign(out.corridor.size(), 0);
    for (std::size_t k = 0; k < out.corridor.size(); ++k) {
        EId e = out.corridor[k];
        HopResult r = successor(m, e);
        if (r.status != HopStatus::Ok) continue;
        if (k + 1 < out.corridor.size() && r.hop.e == out.corridor[k + 1]) continue;
        if (r.hop.dl == -1) {
            // slide across the head vertex, which is strictly west
            out.interval_side[k] = +1;
            continue;
        }
        // face crossing into the corridor face east of e: the landing edge t
        // shares no vertex with the next corridor edge on the west side iff
        // the two crossed edges share their heads.
        if (k + 1 < out.corridor.size()) {
            EId enext = out.corridor[k + 1];
            VId h1 = m.head(e), h2 = m.head(enext);
            VId t1 = m.tail(e), t2 = m.tail(enext);
            if (h1 == h2)
                out.interval_side[k] = -1; // third edge joins the two tails: east
            else if (t1 == t2)
                out.interval_side[k] = +1; // third edge joins the two heads: west
            else
                out.interval_side[k] = 0; // cannot be forced; caller skips
        }
    }
    return out;
}

} // namespace bipolar
