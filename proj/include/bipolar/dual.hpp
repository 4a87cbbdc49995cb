#pragma once

#include <cstdint>
#include <vector>

#include "bipolar/contour.hpp"
#include "bipolar/map.hpp"

namespace bipolar {

// Recompute the per-vertex block extremes of a map from its rotation lists.
// Only vertices whose full cycle is known get marks; others are left unknown.
inline void set_extremes_from_cycles(HalfEdgeMap& m) {
    const std::size_t nv = m.num_vertices();
    std::vector<std::uint8_t> done(nv, 0);
    for (auto& a : m.closing_in_) a = kNoDart;
    for (auto& a : m.first_in_) a = kNoDart;
    for (auto& a : m.oldest_out_) a = kNoDart;
    for (auto& a : m.newest_out_) a = kNoDart;
    std::vector<std::uint8_t> seen(m.num_darts(), 0);
    for (Dart d0 = 0; d0 < Dart(m.num_darts()); ++d0) {
        if (seen[std::size_t(d0)]) continue;
        VId v = m.origin_[std::size_t(d0)];
        if (v < 0) continue;
        if (done[std::size_t(v)]) continue;
        // walk the cycle; bail out on unknown links
        std::vector<Dart> cycle;
        Dart d = d0;
        bool complete = true;
        while (true) {
            cycle.push_back(d);
            Dart n = m.next_[std::size_t(d)];
            if (n == kUnknownDart) {
                complete = false;
                break;
            }
            if (n == d0) break;
            if (cycle.size() > m.num_darts()) {
                complete = false;
                break;
            }
            d = n;
        }
        for (Dart c : cycle) seen[std::size_t(c)] = 1;
        if (!complete) continue;
        done[std::size_t(v)] = 1;
        auto kind = [&](Dart c) {
            if (m.is_augment_dart(c)) return 2;
            return HalfEdgeMap::is_up(c) ? 1 : 0;
        };
        const std::size_t k = cycle.size();
        for (std::size_t i = 0; i < k; ++i) {
            Dart cur = cycle[i];
            Dart nxt = cycle[(i + 1) % k];
            int kc = kind(cur), kn = kind(nxt);
            if (kc == 0 && kn != 0) m.closing_in_[std::size_t(v)] = cur;
            if (kn == 0 && kc != 0) m.first_in_[std::size_t(v)] = nxt;
            if (kc == 1 && kn != 1) m.oldest_out_[std::size_t(v)] = cur;
            if (kn == 1 && kc != 1) m.newest_out_[std::size_t(v)] = nxt;
        }
    }
}

// Dual of the (augmented, in the finite case) map. Dual darts reuse the
// primal ids: the dual edge of e crosses e from its east face to its west
// face, and the dart at the east face is the primal up dart. Dual rotation
// is the inverse face permutation, which is counterclockwise around faces.
inline HalfEdgeMap dualize(const HalfEdgeMap& m) {
    HalfEdgeMap d;
    const std::size_t nd = m.num_darts();
    d.next_.assign(nd, kUnknownDart);
    d.prev_.assign(nd, kUnknownDart);
    d.origin_.assign(nd, kUnknownVertex);
    d.peano_.assign(m.num_edges(), kNoTime);
    for (Dart x = 0; x < Dart(nd); ++x) {
        Dart p = m.prev_[std::size_t(x)];
        if (p != kUnknownDart) {
            d.next_[std::size_t(x)] = HalfEdgeMap::twin(p);
            d.prev_[std::size_t(HalfEdgeMap::twin(p))] = x;
        }
    }
    auto faces = face_orbits(m);
    d.closing_in_.assign(faces.size(), kNoDart);
    d.first_in_.assign(faces.size(), kNoDart);
    d.oldest_out_.assign(faces.size(), kNoDart);
    d.newest_out_.assign(faces.size(), kNoDart);
    for (VId f = 0; f < VId(faces.size()); ++f)
        for (Dart x : faces[std::size_t(f)]) d.origin_[std::size_t(x)] = f;
    d.augment = m.augment;
    set_extremes_from_cycles(d);
    if (m.augment != kNoEdge) {
        d.source = d.origin_[std::size_t(HalfEdgeMap::up(m.augment))];
        d.sink = d.origin_[std::size_t(HalfEdgeMap::down(m.augment))];
    }
    return d;
}

// The dual exploration of a window: the west-going Peano order on the dual
// map, indexed by dual time with the root edge at time 0.
struct DualExploration {
    HalfEdgeMap dual;
    ContourWalk walk; // walk.edges are primal/dual edge ids (shared)

    std::int64_t t_min() const { return walk.t_min(); }
    std::int64_t t_max() const { return walk.t_max(); }
    EId edge_at(std::int64_t t) const {
        if (t < t_min() || t > t_max()) throw IndexOutOfWindow("dual time outside range");
        return walk.edges[std::size_t(t + walk.origin)];
    }
    // Position of the dual walk at dual time t relative to time 0.
    Pos position(std::int64_t t) const { return walk.position(t); }
};

inline DualExploration explore_dual(const HalfEdgeMap& primal, EId root,
                                    std::int64_t max_back, std::int64_t max_fwd) {
    DualExploration out;
    out.dual = dualize(primal);
    out.walk = contour_from(out.dual, root, max_back, max_fwd);
    return out;
}

// The primal west-going Peano order: contour of the mirrored map, visiting
// edges in the same order as the dual exploration. The mirror reflects left
// and right, so here the NORTH-side height is the FIRST coordinate (and the
// steps stay in the primal step set), whereas the dual exploration reports
// the north-side height in its second coordinate.
inline DualExploration explore_primal_west(const HalfEdgeMap& primal, EId root,
                                           std::int64_t max_back, std::int64_t max_fwd) {
    DualExploration out;
    out.dual = mirror(primal);
    out.walk = contour_from(out.dual, root, max_back, max_fwd);
    return out;
}

// Height of the exploration in the tree of north-going flow lines, relative
// to time 0.
inline std::int32_t north_height(const DualExploration& x, bool is_primal_west,
                                 std::int64_t t) {
    Pos p = x.position(t);
    return is_primal_west ? p.x : p.y;
}

} // namespace bipolar
