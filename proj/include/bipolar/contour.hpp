#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "bipolar/map.hpp"

namespace bipolar {

// One contour move: the edge reached and the walk increment of the move.
struct Hop {
    EId e = kNoEdge;
    int dl = 0;
    int dr = 0;
};

enum class HopStatus { Ok, Exhausted, Boundary };

struct HopResult {
    HopStatus status = HopStatus::Exhausted;
    Hop hop;
};

// Edge visited right after e by the exploration path, with the walk step.
// Boundary means the finite exploration ended (east face is a pole face).
inline HopResult successor(const HalfEdgeMap& m, EId e) {
    const Dart de = HalfEdgeMap::down(e);
    const VId v = m.origin_[std::size_t(de)];
    if (v >= 0 && m.closing_in_[std::size_t(v)] == de) {
        // e is the closing incoming edge at its head: the path slides one
        // edge up the west arm without crossing a face.
        Dart w = m.oldest_out_[std::size_t(v)];
        if (w == kNoDart) {
            if (v == m.sink) return {HopStatus::Boundary, {}};
            return {HopStatus::Exhausted, {}};
        }
        return {HopStatus::Ok, {HalfEdgeMap::edge_of(w), -1, +1}};
    }
    Dart x = m.next_[std::size_t(de)];
    if (x == kUnknownDart) return {HopStatus::Exhausted, {}};
    if (m.is_augment_dart(x)) return {HopStatus::Boundary, {}};
    if (HalfEdgeMap::is_up(x)) {
        // Closing move at a vertex without a recorded mark (pre-window
        // head): scan the outgoing block for its ccw-last member.
        Dart d = x;
        while (true) {
            Dart n = m.next_[std::size_t(d)];
            if (n == kUnknownDart) return {HopStatus::Exhausted, {}};
            if (m.is_augment_dart(n) || !HalfEdgeMap::is_up(n)) break;
            d = n;
        }
        return {HopStatus::Ok, {HalfEdgeMap::edge_of(d), -1, +1}};
    }
    // Face crossing: e is the top edge of the west side; land on the lowest
    // east edge. Walk the face orbit to count both sides.
    int downs = 1;
    Dart dcur = x;
    Dart y;
    while (true) {
        y = m.next_[std::size_t(HalfEdgeMap::twin(dcur))];
        if (y == kUnknownDart) return {HopStatus::Exhausted, {}};
        if (m.is_augment_dart(y)) return {HopStatus::Exhausted, {}};
        if (HalfEdgeMap::is_up(y)) break;
        dcur = y;
        ++downs;
    }
    Dart landing = dcur;
    int ups = 1;
    Dart ucur = y;
    while (HalfEdgeMap::edge_of(ucur) != e) {
        Dart n = m.next_[std::size_t(HalfEdgeMap::twin(ucur))];
        if (n == kUnknownDart) return {HopStatus::Exhausted, {}};
        if (!HalfEdgeMap::is_up(n)) return {HopStatus::Exhausted, {}};
        ucur = n;
        ++ups;
    }
    return {HopStatus::Ok, {HalfEdgeMap::edge_of(landing), downs - 1, 1 - ups}};
}

// Edge visited right before e, with the step taken into e.
// Boundary means e is the first edge of a finite exploration.
inline HopResult predecessor(const HalfEdgeMap& m, EId e) {
    const Dart ue = HalfEdgeMap::up(e);
    const VId u = m.origin_[std::size_t(ue)];
    if (u < 0) return {HopStatus::Exhausted, {}};
    auto diag_inverse = [&]() -> HopResult {
        Dart c = m.closing_in_[std::size_t(u)];
        if (c == kNoDart) {
            if (u == m.source) return {HopStatus::Boundary, {}};
            return {HopStatus::Exhausted, {}};
        }
        return {HopStatus::Ok, {HalfEdgeMap::edge_of(c), -1, +1}};
    };
    if (m.oldest_out_[std::size_t(u)] == ue) return diag_inverse();
    Dart z = m.next_[std::size_t(ue)];
    if (z == kUnknownDart) return {HopStatus::Exhausted, {}};
    if (m.is_augment_dart(z)) return diag_inverse();
    if (!HalfEdgeMap::is_up(z)) return diag_inverse(); // out block ends at e
    // Face inverse: z starts the west side of the face west of e from below;
    // the predecessor is the top west edge.
    int ups = 1;
    Dart ucur = z;
    Dart n;
    while (true) {
        n = m.next_[std::size_t(HalfEdgeMap::twin(ucur))];
        if (n == kUnknownDart) return {HopStatus::Exhausted, {}};
        if (m.is_augment_dart(n)) return {HopStatus::Exhausted, {}};
        if (!HalfEdgeMap::is_up(n)) break;
        ucur = n;
        ++ups;
    }
    EId pred_edge = HalfEdgeMap::edge_of(ucur);
    int downs = 0;
    Dart dcur = n;
    while (true) {
        ++downs;
        if (HalfEdgeMap::edge_of(dcur) == e) break;
        Dart nn = m.next_[std::size_t(HalfEdgeMap::twin(dcur))];
        if (nn == kUnknownDart) return {HopStatus::Exhausted, {}};
        if (HalfEdgeMap::is_up(nn) || m.is_augment_dart(nn))
            return {HopStatus::Exhausted, {}};
        dcur = nn;
    }
    return {HopStatus::Ok, {pred_edge, downs - 1, 1 - ups}};
}

// The walk read back from a map by repeated successor/predecessor moves,
// relative to the given root edge: Z_0 = (0,0). Steps are general lattice
// vectors: the dual of a triangulation has faces of arbitrary size.
struct ContourWalk {
    std::vector<std::int32_t> dl;
    std::vector<std::int32_t> dr;
    std::int64_t origin = 0; // index of the time-0 step boundary
    std::vector<EId> edges;  // edge at each time; size dl.size()+1
    bool begin_reached = false; // pred hit the start of a finite exploration
    bool end_reached = false;   // succ hit the end of a finite exploration

    std::int64_t t_min() const { return -origin; }
    std::int64_t t_max() const { return std::int64_t(dl.size()) - origin; }

    // Position at time t relative to time 0.
    Pos position(std::int64_t t) const {
        std::int64_t x = 0, y = 0;
        if (t >= 0) {
            for (std::int64_t i = 0; i < t; ++i) {
                x += dl[std::size_t(i + origin)];
                y += dr[std::size_t(i + origin)];
            }
        } else {
            for (std::int64_t i = t; i < 0; ++i) {
                x -= dl[std::size_t(i + origin)];
                y -= dr[std::size_t(i + origin)];
            }
        }
        return {std::int32_t(x), std::int32_t(y)};
    }

    // Step codes for triangulation contours.
    std::vector<std::uint8_t> tri_codes() const {
        std::vector<std::uint8_t> out;
        out.reserve(dl.size());
        for (std::size_t i = 0; i < dl.size(); ++i)
            out.push_back(std::uint8_t(step_code(dl[i], dr[i])));
        return out;
    }
};

inline ContourWalk contour_from(const HalfEdgeMap& m, EId root, std::int64_t max_back,
                                std::int64_t max_fwd) {
    std::vector<std::int32_t> bl, br;
    std::vector<EId> back_edges;
    EId e = root;
    for (std::int64_t i = 0; i < max_back; ++i) {
        HopResult r = predecessor(m, e);
        if (r.status != HopStatus::Ok) break;
        bl.push_back(r.hop.dl);
        br.push_back(r.hop.dr);
        back_edges.push_back(r.hop.e);
        e = r.hop.e;
    }
    ContourWalk out;
    out.begin_reached = predecessor(m, e).status == HopStatus::Boundary;
    out.origin = std::int64_t(bl.size());
    out.edges.assign(back_edges.rbegin(), back_edges.rend());
    out.edges.push_back(root);
    out.dl.assign(bl.rbegin(), bl.rend());
    out.dr.assign(br.rbegin(), br.rend());
    e = root;
    for (std::int64_t i = 0; i < max_fwd; ++i) {
        HopResult r = successor(m, e);
        if (r.status == HopStatus::Boundary) {
            out.end_reached = true;
            break;
        }
        if (r.status == HopStatus::Exhausted) break;
        out.dl.push_back(r.hop.dl);
        out.dr.push_back(r.hop.dr);
        out.edges.push_back(r.hop.e);
        e = r.hop.e;
    }
    return out;
}

// Finite maps: recover the full walk from (l-1,0) to (0,r-1).
inline LatticeWalk contour_finite(const HalfEdgeMap& m) {
    if (m.source == kNoVertex || m.augment == kNoEdge)
        throw std::invalid_argument("contour_finite needs a sealed finite map");
    Dart d0 = m.oldest_out_[std::size_t(m.source)];
    if (d0 == kNoDart) throw std::logic_error("source has no outgoing edge");
    EId root = HalfEdgeMap::edge_of(d0);
    ContourWalk c = contour_from(m, root, 0, std::int64_t(m.num_edges()) + 1);
    if (!c.end_reached || c.dl.size() != m.num_edges() - 2)
        throw WindowExhausted("finite contour did not cover the map");
    // L_0 = distance from the head of the first edge to the sink in the
    // west-going tree.
    std::int32_t l0 = 0;
    VId v = m.head(root);
    while (v != m.sink) {
        Dart w = m.oldest_out_[std::size_t(v)];
        if (w == kNoDart) throw std::logic_error("west chain broken");
        v = m.head(HalfEdgeMap::edge_of(w));
        ++l0;
    }
    LatticeWalk out;
    out.start = {l0, 0};
    out.steps = c.tri_codes();
    return out;
}

// ---- trees and flow lines ----------------------------------------------------

enum class TreeDir { East, West, North, South };

struct ParentResult {
    enum class Status { Ok, Root, Unknown } status = Status::Unknown;
    EId e = kNoEdge;
};

// Parent of an edge in one of the four trees. East/West are the trees whose
// heights the encoding walk reports. North/South are the reflected pair: the
// north tree ascends through each head's newest outgoing edge (its branches
// run parallel to the north-going flow lines of the dual), the south tree
// descends through each tail's first incoming edge.
inline ParentResult tree_parent(const HalfEdgeMap& m, EId e, TreeDir dir) {
    auto wrap = [&](VId v, const std::vector<Dart>& hints, VId pole) -> ParentResult {
        if (v == kUnknownVertex || v == kNoVertex) return {ParentResult::Status::Unknown, kNoEdge};
        if (pole != kNoVertex && v == pole) return {ParentResult::Status::Root, kNoEdge};
        Dart d = hints[std::size_t(v)];
        if (d == kNoDart) return {ParentResult::Status::Unknown, kNoEdge};
        return {ParentResult::Status::Ok, HalfEdgeMap::edge_of(d)};
    };
    switch (dir) {
    case TreeDir::East: return wrap(m.tail(e), m.closing_in_, m.source);
    case TreeDir::West: return wrap(m.head(e), m.oldest_out_, m.sink);
    case TreeDir::North: return wrap(m.head(e), m.newest_out_, m.sink);
    case TreeDir::South: return wrap(m.tail(e), m.first_in_, m.source);
    }
    return {};
}

struct FlowLine {
    std::vector<EId> edges; // starts at the seed edge
    bool reached_root = false;
    bool truncated = false; // stopped at the window boundary or max length
};

inline FlowLine flow_line(const HalfEdgeMap& m, EId e, TreeDir dir,
                          std::size_t max_len = SIZE_MAX) {
    FlowLine out;
    out.edges.push_back(e);
    while (out.edges.size() < max_len) {
        ParentResult p = tree_parent(m, out.edges.back(), dir);
        if (p.status == ParentResult::Status::Root) {
            out.reached_root = true;
            return out;
        }
        if (p.status == ParentResult::Status::Unknown) {
            out.truncated = true;
            return out;
        }
        out.edges.push_back(p.e);
    }
    out.truncated = true;
    return out;
}

} // namespace bipolar
