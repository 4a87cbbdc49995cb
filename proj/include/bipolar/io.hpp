#pragma once

#include <fstream>
#include <ostream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "bipolar/dual.hpp"
#include "bipolar/excursion.hpp"
#include "bipolar/map.hpp"
#include "bipolar/walk.hpp"

namespace bipolar {

using json = nlohmann::json;

// ---- walks: JSONL, one record per walk -----------------------------------------

inline json walk_to_json(const LatticeWalk& w) {
    json j;
    j["start"] = {w.start.x, w.start.y};
    json steps = json::array();
    for (auto c : w.steps) steps.push_back({kSteps[c].dx, kSteps[c].dy});
    j["steps"] = std::move(steps);
    return j;
}

inline json walk_to_json(const WindowedWalk& w) {
    json j;
    Pos s = w.position(w.t_min());
    j["start"] = {s.x, s.y};
    json steps = json::array();
    for (auto c : w.steps) steps.push_back({kSteps[c].dx, kSteps[c].dy});
    j["steps"] = std::move(steps);
    j["origin"] = w.origin;
    return j;
}

// Either flavor; windowed records carry "origin".
struct ParsedWalk {
    bool windowed = false;
    LatticeWalk finite;
    WindowedWalk window;
};

inline ParsedWalk walk_from_json(const json& j) {
    ParsedWalk out;
    std::vector<std::uint8_t> steps;
    for (const auto& s : j.at("steps"))
        steps.push_back(std::uint8_t(step_code(s.at(0).get<int>(), s.at(1).get<int>())));
    if (j.contains("origin")) {
        out.windowed = true;
        out.window.steps = std::move(steps);
        out.window.origin = j.at("origin").get<std::int64_t>();
    } else {
        out.finite.start = {j.at("start").at(0).get<std::int32_t>(),
                            j.at("start").at(1).get<std::int32_t>()};
        out.finite.steps = std::move(steps);
    }
    return out;
}

// ---- maps: a single JSON document ----------------------------------------------

inline json map_to_json(const HalfEdgeMap& m) {
    json j;
    json darts = json::array();
    for (Dart d = 0; d < Dart(m.num_darts()); ++d) {
        json r;
        r["twin"] = HalfEdgeMap::twin(d);
        r["next"] = m.next_[std::size_t(d)];
        r["origin"] = m.origin_[std::size_t(d)];
        darts.push_back(std::move(r));
    }
    j["darts"] = std::move(darts);
    json up = json::array();
    for (EId e = 0; e < EId(m.num_edges()); ++e) up.push_back(HalfEdgeMap::up(e));
    j["up_dart"] = std::move(up);
    j["poles"] = {{"source", m.source}, {"sink", m.sink}, {"augment", m.augment}};
    json peano = json::array();
    for (auto t : m.peano_) peano.push_back(t == kNoTime ? json(nullptr) : json(t));
    j["peano"] = std::move(peano);
    return j;
}

inline HalfEdgeMap map_from_json(const json& j) {
    HalfEdgeMap m;
    const auto& darts = j.at("darts");
    m.next_.resize(darts.size());
    m.prev_.assign(darts.size(), kUnknownDart);
    m.origin_.resize(darts.size());
    VId max_v = -1;
    for (std::size_t d = 0; d < darts.size(); ++d) {
        m.next_[d] = darts[d].at("next").get<Dart>();
        m.origin_[d] = darts[d].at("origin").get<VId>();
        max_v = std::max(max_v, m.origin_[d]);
    }
    for (std::size_t d = 0; d < darts.size(); ++d)
        if (m.next_[d] >= 0) m.prev_[std::size_t(m.next_[d])] = Dart(d);
    const auto& peano = j.at("peano");
    m.peano_.resize(peano.size());
    for (std::size_t e = 0; e < peano.size(); ++e)
        m.peano_[e] = peano[e].is_null() ? kNoTime : peano[e].get<std::int64_t>();
    m.source = j.at("poles").at("source").get<VId>();
    m.sink = j.at("poles").at("sink").get<VId>();
    m.augment = j.at("poles").at("augment").get<EId>();
    m.closing_in_.assign(std::size_t(max_v + 1), kNoDart);
    m.first_in_.assign(std::size_t(max_v + 1), kNoDart);
    m.oldest_out_.assign(std::size_t(max_v + 1), kNoDart);
    m.newest_out_.assign(std::size_t(max_v + 1), kNoDart);
    set_extremes_from_cycles(m);
    return m;
}

// ---- CSV exports ----------------------------------------------------------------

inline void write_x_csv(std::ostream& os, const ExcursionProcess& p, const LocalTime& l) {
    os << "n,X,l\n";
    for (std::size_t n = 0; n < p.values.size(); ++n)
        os << n << "," << p.values[n] << "," << l.values[n] << "\n";
}

inline void write_decomposition_jsonl(std::ostream& os, const ExcursionDecomposition& d) {
    for (const auto& r : d.records) {
        json j;
        j["start"] = r.start;
        j["end"] = r.end;
        j["side"] = r.sign > 0 ? "west" : (r.sign < 0 ? "east" : "flat");
        json steps = json::array();
        for (auto c : r.z_steps) steps.push_back({kSteps[c].dx, kSteps[c].dy});
        j["steps"] = std::move(steps);
        os << j.dump() << "\n";
    }
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

} // namespace bipolar
