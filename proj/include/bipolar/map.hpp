#pragma once

#include <cassert>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "bipolar/walk.hpp"

namespace bipolar {

// Dart/vertex/edge ids. Edge e owns darts 2e (up dart, at the tail) and
// 2e+1 (down dart, at the head). twin(d) = d ^ 1.
using Dart = std::int32_t;
using VId = std::int32_t;
using EId = std::int32_t;

inline constexpr Dart kNoDart = -1;       // does not exist (e.g. pole has no parent)
inline constexpr Dart kUnknownDart = -2;  // exists but lies outside the window
inline constexpr VId kNoVertex = -1;
inline constexpr VId kUnknownVertex = -2;
inline constexpr EId kNoEdge = -1;
inline constexpr std::int64_t kNoTime = std::numeric_limits<std::int64_t>::min();

struct InvalidWalk : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct WindowExhausted : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Rotation-system planar map with per-edge orientation. Every edge is
// directed tail -> head ("upward"); next_ walks counterclockwise around the
// origin vertex of a dart. Links that would require structure outside a
// window are kUnknownDart. Immutable after construction.
struct HalfEdgeMap {
    std::vector<Dart> next_;
    std::vector<Dart> prev_;
    std::vector<VId> origin_;
    std::vector<std::int64_t> peano_; // per edge; kNoTime for pre-window edges

    // Per-vertex block extremes (kNoDart when not determined by the window).
    // closing_in: the incoming dart followed ccw by the outgoing block.
    // oldest_out: the outgoing dart followed ccw by the incoming block.
    std::vector<Dart> closing_in_;
    std::vector<Dart> first_in_;
    std::vector<Dart> oldest_out_;
    std::vector<Dart> newest_out_;

    VId source = kNoVertex;
    VId sink = kNoVertex;
    EId augment = kNoEdge;

    static Dart twin(Dart d) { return d ^ 1; }
    static bool is_up(Dart d) { return (d & 1) == 0; }
    static EId edge_of(Dart d) { return d >> 1; }
    static Dart up(EId e) { return 2 * e; }
    static Dart down(EId e) { return 2 * e + 1; }

    std::size_t num_edges() const { return peano_.size(); }
    std::size_t num_darts() const { return next_.size(); }
    std::size_t num_vertices() const { return closing_in_.size(); }

    VId tail(EId e) const { return origin_[std::size_t(up(e))]; }
    VId head(EId e) const { return origin_[std::size_t(down(e))]; }
    bool is_augment_dart(Dart d) const { return augment != kNoEdge && edge_of(d) == augment; }

    Dart next(Dart d) const { return next_[std::size_t(d)]; }
    Dart prev(Dart d) const { return prev_[std::size_t(d)]; }
};

// Reflected copy: same darts and orientation, reversed rotation. The trees of
// the mirror are the primal north/south trees of the original.
inline HalfEdgeMap mirror(const HalfEdgeMap& m) {
    HalfEdgeMap out = m;
    out.next_ = m.prev_;
    out.prev_ = m.next_;
    out.closing_in_ = m.first_in_;
    out.first_in_ = m.closing_in_;
    out.oldest_out_ = m.newest_out_;
    out.newest_out_ = m.oldest_out_;
    return out;
}

namespace detail {

// Shared frontier machinery for both sewing modes.
class SewBuilder {
public:
    HalfEdgeMap m;
    std::vector<std::uint8_t> vertex_created_;  // full history inside the window
    std::vector<std::uint8_t> vertex_closed_;   // incoming block finished
    std::vector<std::uint8_t> vertex_exited_;   // left the frontier
    std::vector<Dart> last_in_;                 // newest known incoming dart
    std::vector<Dart> arc_start_;               // ccw-first known dart (pre-window vertices)

    std::vector<EId> west_;  // arm above the current edge; back() is adjacent
    std::vector<EId> east_;  // arm below the current edge; back() is adjacent
    EId current_ = kNoEdge;

    VId new_vertex(bool created) {
        VId v = VId(m.closing_in_.size());
        m.closing_in_.push_back(kNoDart);
        m.first_in_.push_back(kNoDart);
        m.oldest_out_.push_back(kNoDart);
        m.newest_out_.push_back(kNoDart);
        vertex_created_.push_back(created ? 1 : 0);
        vertex_closed_.push_back(0);
        vertex_exited_.push_back(0);
        last_in_.push_back(kNoDart);
        arc_start_.push_back(kNoDart);
        return v;
    }

    EId new_edge(VId tail, VId head, std::int64_t peano) {
        EId e = EId(m.peano_.size());
        m.peano_.push_back(peano);
        m.next_.insert(m.next_.end(), 2, kUnknownDart);
        m.prev_.insert(m.prev_.end(), 2, kUnknownDart);
        m.origin_.push_back(tail);
        m.origin_.push_back(head);
        return e;
    }

    void link(Dart a, Dart b) {
        m.next_[std::size_t(a)] = b;
        m.prev_[std::size_t(b)] = a;
    }

    void insert_after(Dart a, Dart b) {
        Dart old = m.next_[std::size_t(a)];
        m.next_[std::size_t(a)] = b;
        m.prev_[std::size_t(b)] = a;
        m.next_[std::size_t(b)] = old;
        if (old != kUnknownDart) m.prev_[std::size_t(old)] = b;
    }

    void insert_before(Dart a, Dart b) {
        Dart old = m.prev_[std::size_t(a)];
        m.prev_[std::size_t(a)] = b;
        m.next_[std::size_t(b)] = a;
        m.prev_[std::size_t(b)] = old;
        if (old != kUnknownDart) m.next_[std::size_t(old)] = b;
    }

    // One sewing move. `window_mode` permits frontier underflow by creating
    // pre-window phantom edges; finite mode treats underflow as InvalidWalk.
    // Returns the edge visited at the new time.
    EId apply_step(int code, std::int64_t new_time, bool window_mode) {
        const EId cur = current_;
        const VId v = m.head(cur);
        const VId u = m.tail(cur);
        switch (code) {
        case kStepDiag: {
            // Close v and move the mark one edge up the west arm.
            assert(last_in_[std::size_t(v)] == HalfEdgeMap::down(cur));
            m.closing_in_[std::size_t(v)] = HalfEdgeMap::down(cur);
            vertex_closed_[std::size_t(v)] = 1;
            EId w1;
            if (!west_.empty()) {
                w1 = west_.back();
                west_.pop_back();
                assert(m.peano_[std::size_t(w1)] == kNoTime);
                m.peano_[std::size_t(w1)] = new_time;
            } else {
                if (!window_mode) throw InvalidWalk("walk leaves the quadrant (L < 0)");
                VId p = new_vertex(false);
                w1 = new_edge(v, p, new_time);
                insert_after(HalfEdgeMap::down(cur), HalfEdgeMap::up(w1));
                m.oldest_out_[std::size_t(v)] = HalfEdgeMap::up(w1);
                if (m.newest_out_[std::size_t(v)] == kNoDart)
                    m.newest_out_[std::size_t(v)] = HalfEdgeMap::up(w1);
                arc_start_[std::size_t(p)] = HalfEdgeMap::down(w1);
                last_in_[std::size_t(p)] = HalfEdgeMap::down(w1);
            }
            east_.push_back(cur);
            current_ = w1;
            return w1;
        }
        case kStepRight: {
            // Glue a triangle whose west side is the current edge alone.
            VId x = new_vertex(true);
            EId n1 = new_edge(u, x, new_time);
            EId n2 = new_edge(x, v, kNoTime);
            insert_before(HalfEdgeMap::up(cur), HalfEdgeMap::up(n1));
            if (arc_start_[std::size_t(u)] == HalfEdgeMap::up(cur))
                arc_start_[std::size_t(u)] = HalfEdgeMap::up(n1);
            link(HalfEdgeMap::down(n1), HalfEdgeMap::up(n2));
            link(HalfEdgeMap::up(n2), HalfEdgeMap::down(n1));
            m.first_in_[std::size_t(x)] = HalfEdgeMap::down(n1);
            m.oldest_out_[std::size_t(x)] = HalfEdgeMap::up(n2);
            last_in_[std::size_t(x)] = HalfEdgeMap::down(n1);
            m.newest_out_[std::size_t(x)] = HalfEdgeMap::up(n2);
            insert_after(HalfEdgeMap::down(cur), HalfEdgeMap::down(n2));
            last_in_[std::size_t(v)] = HalfEdgeMap::down(n2);
            m.newest_out_[std::size_t(u)] = HalfEdgeMap::up(n1);
            west_.push_back(n2);
            current_ = n1;
            return n1;
        }
        case kStepDown: {
            // Glue a triangle east of {E1, current}; the vertex between them
            // leaves the frontier for good.
            EId e1;
            if (!east_.empty()) {
                e1 = east_.back();
                east_.pop_back();
            } else {
                if (!window_mode) throw InvalidWalk("walk leaves the quadrant (R < 0)");
                VId p = new_vertex(false);
                e1 = new_edge(p, u, kNoTime);
                // E1 is older than every incoming known at u: it starts the arc.
                Dart a = arc_start_[std::size_t(u)];
                assert(a != kNoDart);
                insert_before(a, HalfEdgeMap::down(e1));
                arc_start_[std::size_t(u)] = HalfEdgeMap::down(e1);
                if (last_in_[std::size_t(u)] == kNoDart)
                    last_in_[std::size_t(u)] = HalfEdgeMap::down(e1);
                arc_start_[std::size_t(p)] = HalfEdgeMap::up(e1);
            }
            VId y = m.tail(e1);
            EId c2 = new_edge(y, v, new_time);
            insert_before(HalfEdgeMap::up(e1), HalfEdgeMap::up(c2));
            if (arc_start_[std::size_t(y)] == HalfEdgeMap::up(e1))
                arc_start_[std::size_t(y)] = HalfEdgeMap::up(c2);
            m.newest_out_[std::size_t(y)] = HalfEdgeMap::up(c2);
            insert_after(HalfEdgeMap::down(cur), HalfEdgeMap::down(c2));
            last_in_[std::size_t(v)] = HalfEdgeMap::down(c2);
            // u exits: its outgoing block is final, and its incoming block was
            // already final (its closing move happened before the window when
            // it was not observed).
            assert(m.newest_out_[std::size_t(u)] == HalfEdgeMap::up(cur) ||
                   vertex_created_[std::size_t(u)] == 0);
            m.newest_out_[std::size_t(u)] = HalfEdgeMap::up(cur);
            vertex_exited_[std::size_t(u)] = 1;
            if (!vertex_closed_[std::size_t(u)] && last_in_[std::size_t(u)] != kNoDart) {
                m.closing_in_[std::size_t(u)] = last_in_[std::size_t(u)];
                vertex_closed_[std::size_t(u)] = 1;
            }
            current_ = c2;
            return c2;
        }
        default:
            throw std::invalid_argument("bad step code");
        }
    }

    // Invalidate the rotation links that the window does not pin down, and
    // clear block extremes that are not final.
    void seal_window() {
        auto cut_next = [&](Dart d) {
            if (d == kNoDart) return;
            Dart old = m.next_[std::size_t(d)];
            m.next_[std::size_t(d)] = kUnknownDart;
            if (old != kUnknownDart) m.prev_[std::size_t(old)] = kUnknownDart;
        };
        for (VId v = 0; v < VId(m.num_vertices()); ++v) {
            auto sv = std::size_t(v);
            if (!vertex_exited_[sv]) {
                // Still on the frontier: edges keep arriving in the gap right
                // after the newest incoming (before the closing move) or right
                // after the closing incoming (before the vertex exits).
                if (vertex_closed_[sv])
                    cut_next(m.closing_in_[sv]);
                else
                    cut_next(last_in_[sv]);
                m.newest_out_[sv] = kNoDart;
            }
            if (!vertex_closed_[sv]) m.closing_in_[sv] = kNoDart;
            if (!vertex_created_[sv]) m.first_in_[sv] = kNoDart;
        }
    }
};

} // namespace detail

// A sewed window of the infinite map, with the time->edge table.
struct SewnWindow {
    HalfEdgeMap map;
    std::int64_t t_min = 0;
    std::int64_t t_max = 0;
    std::vector<EId> edge_by_time; // index t - t_min, inclusive both ends
    EId root = kNoEdge;            // edge at time 0

    EId edge_at(std::int64_t t) const {
        if (t < t_min || t > t_max) throw IndexOutOfWindow("time outside window");
        return edge_by_time[std::size_t(t - t_min)];
    }
};

// Sewing in window mode: any step sequence is acceptable; structure the steps
// do not determine is marked unknown rather than guessed.
inline SewnWindow sew(const WindowedWalk& w) {
    detail::SewBuilder b;
    SewnWindow out;
    out.t_min = w.t_min();
    out.t_max = w.t_max();
    VId t0 = b.new_vertex(false);
    VId h0 = b.new_vertex(false);
    EId e0 = b.new_edge(t0, h0, out.t_min);
    b.arc_start_[std::size_t(t0)] = HalfEdgeMap::up(e0);
    b.arc_start_[std::size_t(h0)] = HalfEdgeMap::down(e0);
    b.last_in_[std::size_t(h0)] = HalfEdgeMap::down(e0);
    b.current_ = e0;
    out.edge_by_time.reserve(w.steps.size() + 1);
    out.edge_by_time.push_back(e0);
    for (std::int64_t t = out.t_min; t < out.t_max; ++t)
        out.edge_by_time.push_back(b.apply_step(w.step_at(t), t + 1, true));
    b.seal_window();
    out.map = std::move(b.m);
    out.root = out.edge_by_time[std::size_t(-out.t_min)];
    return out;
}

// Sewing in finite mode: the walk must run from (l-1,0) to (0,r-1) inside the
// closed quadrant. Produces the bipolar-oriented triangulation together with
// the augmenting edge between the poles.
inline HalfEdgeMap sew_finite(const LatticeWalk& walk) {
    if (walk.start.y != 0 || walk.start.x < 0)
        throw InvalidWalk("finite walk must start at (l-1, 0)");
    Pos e = walk.end();
    if (e.x != 0 || e.y < 0) throw InvalidWalk("finite walk must end at (0, r-1)");
    const int l = walk.start.x + 1;
    const int r = e.y + 1;

    detail::SewBuilder b;
    std::vector<VId> boundary;
    for (int i = 0; i <= l; ++i) boundary.push_back(b.new_vertex(true));
    std::vector<EId> sw;
    for (int i = 0; i < l; ++i)
        sw.push_back(b.new_edge(boundary[std::size_t(i)], boundary[std::size_t(i + 1)],
                                i == 0 ? 0 : kNoTime));
    // Rotation on the initial southwest chain: one-dart cycles at the poles,
    // two-dart cycles in between.
    b.link(HalfEdgeMap::up(sw[0]), HalfEdgeMap::up(sw[0]));
    for (int i = 1; i < l; ++i) {
        b.link(HalfEdgeMap::down(sw[std::size_t(i - 1)]), HalfEdgeMap::up(sw[std::size_t(i)]));
        b.link(HalfEdgeMap::up(sw[std::size_t(i)]), HalfEdgeMap::down(sw[std::size_t(i - 1)]));
    }
    b.link(HalfEdgeMap::down(sw.back()), HalfEdgeMap::down(sw.back()));
    for (int i = 0; i < l; ++i) {
        VId vt = boundary[std::size_t(i)];
        VId vh = boundary[std::size_t(i + 1)];
        b.m.oldest_out_[std::size_t(vt)] = HalfEdgeMap::up(sw[std::size_t(i)]);
        b.m.newest_out_[std::size_t(vt)] = HalfEdgeMap::up(sw[std::size_t(i)]);
        b.m.first_in_[std::size_t(vh)] = HalfEdgeMap::down(sw[std::size_t(i)]);
        b.last_in_[std::size_t(vh)] = HalfEdgeMap::down(sw[std::size_t(i)]);
    }
    for (std::size_t i = sw.size(); i > 1; --i) b.west_.push_back(sw[i - 1]);
    b.current_ = sw[0];

    for (std::size_t i = 0; i < walk.steps.size(); ++i)
        b.apply_step(walk.steps[i], std::int64_t(i) + 1, false);
    if (!b.west_.empty()) throw InvalidWalk("finite walk must end with L = 0");
    if (std::int64_t(b.east_.size()) != r - 1)
        throw InvalidWalk("finite walk must end with R = r-1");

    VId s = boundary[0];
    VId t = boundary[std::size_t(l)];
    if (b.m.head(b.current_) != t)
        throw InvalidWalk("final edge does not reach the sink");

    // Complete every remaining frontier vertex, then add the augmenting edge.
    for (VId v = 0; v < VId(b.m.num_vertices()); ++v) {
        auto sv = std::size_t(v);
        if (!b.vertex_closed_[sv]) b.m.closing_in_[sv] = b.last_in_[sv];
    }
    EId aug = b.new_edge(s, t, kNoTime);
    b.insert_after(b.m.oldest_out_[std::size_t(s)], HalfEdgeMap::up(aug));
    b.insert_after(b.m.closing_in_[std::size_t(t)], HalfEdgeMap::down(aug));
    // Patch the two open link slots left on the outer boundary.
    if (b.m.next_[std::size_t(HalfEdgeMap::up(aug))] == kUnknownDart ||
        b.m.prev_[std::size_t(HalfEdgeMap::up(aug))] == kUnknownDart ||
        b.m.next_[std::size_t(HalfEdgeMap::down(aug))] == kUnknownDart ||
        b.m.prev_[std::size_t(HalfEdgeMap::down(aug))] == kUnknownDart)
        throw std::logic_error("augment insertion left open links");

    b.m.source = s;
    b.m.sink = t;
    b.m.augment = aug;
    return std::move(b.m);
}

// ---- integrity checks --------------------------------------------------------

// Collect the counterclockwise face orbits (next of twin). Returns one vector
// of darts per complete face; darts on unresolved faces are skipped.
inline std::vector<std::vector<Dart>> face_orbits(const HalfEdgeMap& m) {
    std::vector<std::vector<Dart>> faces;
    std::vector<std::uint8_t> seen(m.num_darts(), 0);
    for (Dart d0 = 0; d0 < Dart(m.num_darts()); ++d0) {
        if (seen[std::size_t(d0)]) continue;
        std::vector<Dart> orbit;
        Dart d = d0;
        bool complete = true;
        while (true) {
            orbit.push_back(d);
            Dart n = m.next_[std::size_t(HalfEdgeMap::twin(d))];
            if (n == kUnknownDart) {
                complete = false;
                break;
            }
            if (n == d0) break;
            if (std::size_t(orbit.size()) > m.num_darts()) {
                complete = false; // corrupt orbit; caller's checks will fail
                break;
            }
            d = n;
        }
        if (!complete) continue;
        bool fresh = true;
        for (Dart d2 : orbit)
            if (seen[std::size_t(d2)]) fresh = false;
        if (!fresh) continue;
        for (Dart d2 : orbit) seen[std::size_t(d2)] = 1;
        faces.push_back(std::move(orbit));
    }
    return faces;
}

// Structural validation of a finite sewn triangulation.
inline void check_finite_map(const HalfEdgeMap& m) {
    const std::size_t nd = m.num_darts();
    // rotation is a permutation with consistent prev
    std::vector<int> indeg(nd, 0);
    for (Dart d = 0; d < Dart(nd); ++d) {
        Dart n = m.next_[std::size_t(d)];
        if (n == kUnknownDart || n < 0) throw std::logic_error("finite map has unknown link");
        if (m.prev_[std::size_t(n)] != d) throw std::logic_error("prev/next mismatch");
        indeg[std::size_t(n)]++;
        if (m.origin_[std::size_t(n)] != m.origin_[std::size_t(d)])
            throw std::logic_error("rotation leaves vertex");
    }
    for (auto c : indeg)
        if (c != 1) throw std::logic_error("rotation not a permutation");
    // no self loops
    for (EId e = 0; e < EId(m.num_edges()); ++e)
        if (m.tail(e) == m.head(e)) throw std::logic_error("self loop");
    // orientation acyclic with unique source/sink
    std::size_t nv = m.num_vertices();
    std::vector<int> din(nv, 0), dout(nv, 0), topo_in(nv, 0);
    for (EId e = 0; e < EId(m.num_edges()); ++e) {
        if (e == m.augment) continue;
        dout[std::size_t(m.tail(e))]++;
        din[std::size_t(m.head(e))]++;
    }
    int sources = 0, sinks = 0;
    for (std::size_t v = 0; v < nv; ++v) {
        if (din[v] == 0) ++sources;
        if (dout[v] == 0) ++sinks;
    }
    if (sources != 1 || sinks != 0 + 1) throw std::logic_error("not bipolar");
    if (din[std::size_t(m.source)] != 0 || dout[std::size_t(m.sink)] != 0)
        throw std::logic_error("pole markers wrong");
    // Kahn toposort for acyclicity
    topo_in = din;
    std::vector<VId> stack{m.source};
    std::size_t visited = 0;
    std::vector<std::vector<VId>> adj(nv);
    for (EId e = 0; e < EId(m.num_edges()); ++e)
        if (e != m.augment) adj[std::size_t(m.tail(e))].push_back(m.head(e));
    while (!stack.empty()) {
        VId v = stack.back();
        stack.pop_back();
        ++visited;
        for (VId wv : adj[std::size_t(v)])
            if (--topo_in[std::size_t(wv)] == 0) stack.push_back(wv);
    }
    if (visited != nv) throw std::logic_error("orientation has a cycle");
    // faces: all triangles except the two pole faces; Euler formula
    auto faces = face_orbits(m);
    std::size_t covered = 0;
    int pole_faces = 0;
    for (auto& f : faces) {
        covered += f.size();
        bool has_aug = false;
        for (Dart d : f)
            if (m.is_augment_dart(d)) has_aug = true;
        if (has_aug)
            ++pole_faces;
        else if (f.size() != 3)
            throw std::logic_error("inner face is not a triangle");
    }
    if (covered != nd) throw std::logic_error("faces do not cover all darts");
    if (pole_faces != 2) throw std::logic_error("expected exactly two pole faces");
    std::int64_t V = std::int64_t(nv), E = std::int64_t(m.num_edges()),
                 F = std::int64_t(faces.size());
    if (V - E + F != 2) throw std::logic_error("Euler formula fails");
}

// Canonical encoding of a finite map (poles and embedding respected): a BFS
// relabelling starting from the augment up-dart. Equal encodings <=> equal
// rooted oriented maps.
inline std::vector<std::int32_t> canonical_form(const HalfEdgeMap& m) {
    if (m.augment == kNoEdge) throw std::invalid_argument("canonical_form needs a finite map");
    std::vector<std::int32_t> label(m.num_darts(), -1);
    std::vector<Dart> order;
    std::int32_t fresh = 0;
    auto visit = [&](Dart d) {
        if (label[std::size_t(d)] < 0) {
            label[std::size_t(d)] = fresh++;
            order.push_back(d);
        }
    };
    visit(HalfEdgeMap::up(m.augment));
    for (std::size_t i = 0; i < order.size(); ++i) {
        Dart d = order[i];
        visit(m.next_[std::size_t(d)]);
        visit(HalfEdgeMap::twin(d));
    }
    std::vector<std::int32_t> code;
    code.reserve(m.num_darts() * 3);
    for (Dart d : order) {
        code.push_back(label[std::size_t(m.next_[std::size_t(d)])]);
        code.push_back(label[std::size_t(HalfEdgeMap::twin(d))]);
        code.push_back(HalfEdgeMap::is_up(d) ? 1 : 0);
    }
    return code;
}

} // namespace bipolar
