#pragma once

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

#include "bipolar/map.hpp"

namespace bipolar {

// Layered upward drawing of a finite bipolar map: y is the longest-path rank
// from the source, x orders vertices by the mean exploration time of their
// incident edges. Every oriented edge strictly increases y.
inline std::string render_svg(const HalfEdgeMap& m, std::size_t max_edges = 5000) {
    if (m.num_edges() > max_edges)
        throw std::invalid_argument("map too large to render");
    if (m.source == kNoVertex) throw std::invalid_argument("render needs a finite map");
    const std::size_t nv = m.num_vertices();
    std::vector<std::int64_t> rank(nv, 0);
    // longest path from the source over the DAG
    std::vector<int> indeg(nv, 0);
    for (EId e = 0; e < EId(m.num_edges()); ++e)
        if (e != m.augment) indeg[std::size_t(m.head(e))]++;
    std::vector<VId> order;
    for (VId v = 0; v < VId(nv); ++v)
        if (indeg[std::size_t(v)] == 0) order.push_back(v);
    for (std::size_t i = 0; i < order.size(); ++i) {
        VId v = order[i];
        for (EId e = 0; e < EId(m.num_edges()); ++e) {
            if (e == m.augment || m.tail(e) != v) continue;
            VId h = m.head(e);
            rank[std::size_t(h)] = std::max(rank[std::size_t(h)], rank[std::size_t(v)] + 1);
            if (--indeg[std::size_t(h)] == 0) order.push_back(h);
        }
    }
    // x coordinate: average peano time of incident edges
    std::vector<double> xsum(nv, 0.0);
    std::vector<int> xcnt(nv, 0);
    for (EId e = 0; e < EId(m.num_edges()); ++e) {
        if (e == m.augment || m.peano_[std::size_t(e)] == kNoTime) continue;
        double t = double(m.peano_[std::size_t(e)]);
        xsum[std::size_t(m.tail(e))] += t;
        xcnt[std::size_t(m.tail(e))]++;
        xsum[std::size_t(m.head(e))] += t;
        xcnt[std::size_t(m.head(e))]++;
    }
    std::int64_t max_rank = 0;
    for (auto r : rank) max_rank = std::max(max_rank, r);
    double W = 640.0, H = 80.0 * double(std::max<std::int64_t>(max_rank, 1)) + 80.0;
    double tmax = 1.0;
    for (std::size_t v = 0; v < nv; ++v)
        if (xcnt[v]) tmax = std::max(tmax, xsum[v] / xcnt[v]);
    auto px = [&](VId v) {
        double t = xcnt[std::size_t(v)] ? xsum[std::size_t(v)] / xcnt[std::size_t(v)] : 0.0;
        return 40.0 + (W - 80.0) * (t / tmax);
    };
    auto py = [&](VId v) { return H - 40.0 - 80.0 * double(rank[std::size_t(v)]); };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
        << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (EId e = 0; e < EId(m.num_edges()); ++e) {
        VId a = m.tail(e), b = m.head(e);
        bool aug = e == m.augment;
        svg << "<line x1=\"" << px(a) << "\" y1=\"" << py(a) << "\" x2=\"" << px(b)
            << "\" y2=\"" << py(b) << "\" stroke=\"" << (aug ? "#bbbbbb" : "#336699")
            << "\" stroke-width=\"1.5\"" << (aug ? " stroke-dasharray=\"4 3\"" : "") << "/>\n";
    }
    for (VId v = 0; v < VId(nv); ++v) {
        const char* fill = (v == m.source) ? "#cc3333" : (v == m.sink ? "#33aa33" : "#222222");
        svg << "<circle cx=\"" << px(v) << "\" cy=\"" << py(v) << "\" r=\"3.5\" fill=\"" << fill
            << "\"/>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

} // namespace bipolar
