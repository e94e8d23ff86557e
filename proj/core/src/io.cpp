#include "ckgraph/io.hpp"

#include <fstream>
#include <map>

namespace ckgraph {

namespace {

const json& field(const json& j, const char* key, const std::string& where) {
    if (!j.is_object() || !j.contains(key)) throw input_error(where + ": missing \"" + key + "\"");
    return j.at(key);
}

std::string str(const json& j, const std::string& where) {
    if (!j.is_string()) throw input_error(where + ": expected a string");
    return j.get<std::string>();
}

std::int64_t num(const json& j, const std::string& where) {
    if (!j.is_number_integer()) throw input_error(where + ": expected an integer");
    return j.get<std::int64_t>();
}

const json& array(const json& j, const std::string& where) {
    if (!j.is_array()) throw input_error(where + ": expected an array");
    return j;
}

std::vector<std::string> strings(const json& j, const std::string& where) {
    std::vector<std::string> out;
    for (const auto& x : array(j, where)) out.push_back(str(x, where));
    return out;
}

}  // namespace

json graph_document_json(const GraphDocument& doc) {
    json edges = json::array();
    for (const auto& e : doc.edges) edges.push_back({{"id", e.id}, {"r", e.r}, {"s", e.s}});
    return {{"vertices", doc.vertices}, {"edges", edges}};
}

GraphDocument graph_document_from_json(const json& j) {
    GraphDocument doc;
    doc.vertices = strings(field(j, "vertices", "graph"), "vertices");
    for (const auto& e : array(field(j, "edges", "graph"), "edges"))
        doc.edges.push_back({str(field(e, "id", "edge"), "edge id"), str(field(e, "r", "edge"), "edge r"),
                             str(field(e, "s", "edge"), "edge s")});
    return doc;
}

json kgraph_document_json(const KGraphDocument& doc) {
    json edges = json::array();
    for (const auto& e : doc.edges) edges.push_back({{"id", e.id}, {"r", e.r}, {"s", e.s}, {"color", e.color}});
    json squares = json::array();
    for (const auto& s : doc.squares) squares.push_back(json::array({json::array({s.f, s.g}), json::array({s.g2, s.f2})}));
    return {{"k", doc.k}, {"vertices", doc.vertices}, {"edges", edges}, {"squares", squares}};
}

KGraphDocument kgraph_document_from_json(const json& j) {
    KGraphDocument doc;
    doc.k = static_cast<int>(num(field(j, "k", "k-graph"), "k"));
    doc.vertices = strings(field(j, "vertices", "k-graph"), "vertices");
    for (const auto& e : array(field(j, "edges", "k-graph"), "edges"))
        doc.edges.push_back({str(field(e, "id", "edge"), "edge id"), str(field(e, "r", "edge"), "edge r"),
                             str(field(e, "s", "edge"), "edge s"),
                             e.contains("color") ? static_cast<int>(num(e.at("color"), "edge color")) : 1});
    if (j.contains("squares"))
        for (const auto& s : array(j.at("squares"), "squares")) {
            if (!s.is_array() || s.size() != 2 || !s[0].is_array() || s[0].size() != 2 || !s[1].is_array() ||
                s[1].size() != 2)
                throw input_error("square must be [[f, g], [g2, f2]]");
            doc.squares.push_back({str(s[0][0], "square"), str(s[0][1], "square"), str(s[1][0], "square"),
                                   str(s[1][1], "square")});
        }
    return doc;
}

json template_json(const ColumnTemplate& t) {
    json tracks = json::array();
    for (const auto& tr : t.tracks) tracks.push_back({{"id", tr}});
    json temps = json::array();
    for (const auto& e : t.templates) {
        json x = {{"id", e.id},
                  {"r", {{"track", t.tracks[static_cast<std::size_t>(e.r_track)]}, {"offset", e.r_off}}},
                  {"s", {{"track", t.tracks[static_cast<std::size_t>(e.s_track)]}, {"offset", e.s_off}}}};
        if (e.period != 1) x["period"] = e.period;
        if (e.phase != 0) x["phase"] = e.phase;
        if (t.k > 0) x["color"] = e.color + 1;
        temps.push_back(x);
    }
    json out = {{"tracks", tracks}, {"templates", temps}};
    if (t.k > 0) out["k"] = t.k;
    if (t.origin != 0) out["origin"] = t.origin;
    if (!t.hairs.empty()) {
        json hairs = json::array();
        for (const auto& h : t.hairs)
            hairs.push_back(h.on_track ? json{{"attach_track", t.tracks[static_cast<std::size_t>(h.index)]}}
                                       : json{{"attach_vertex", t.sporadic_vertices[static_cast<std::size_t>(h.index)]}});
        out["hairs"] = hairs;
    }
    if (!t.sporadic_vertices.empty()) {
        json edges = json::array();
        for (const auto& e : t.sporadic_edges) {
            json s = e.s_on_track ? json{{"track", t.tracks[static_cast<std::size_t>(e.s_index)]}, {"offset", e.s_col}}
                                  : json(t.sporadic_vertices[static_cast<std::size_t>(e.s_index)]);
            edges.push_back({{"id", e.id}, {"r", t.sporadic_vertices[static_cast<std::size_t>(e.r)]}, {"s", s}});
        }
        out["sporadic"] = {{"vertices", t.sporadic_vertices}, {"edges", edges}};
    }
    if (!t.rays.empty()) {
        json rays = json::array();
        for (const auto& r : t.rays) {
            json ids = json::array();
            for (int i : r.templates) ids.push_back(t.templates[static_cast<std::size_t>(i)].id);
            rays.push_back({{"id", r.id}, {"templates", ids}});
        }
        out["rays"] = rays;
    }
    if (!t.squares.empty()) {
        json sq = json::array();
        for (const auto& s : t.squares) {
            auto id = [&](int i) { return t.templates[static_cast<std::size_t>(i)].id; };
            sq.push_back(json::array({json::array({id(s[0]), id(s[1])}), json::array({id(s[2]), id(s[3])})}));
        }
        out["squares"] = sq;
    }
    return out;
}

ColumnTemplate template_from_json(const json& j) {
    ColumnTemplate t;
    std::map<std::string, int> track, tmpl, spor;
    for (const auto& tr : array(field(j, "tracks", "template"), "tracks")) {
        std::string id = tr.is_string() ? tr.get<std::string>() : str(field(tr, "id", "track"), "track id");
        track.emplace(id, static_cast<int>(t.tracks.size()));
        t.tracks.push_back(id);
    }
    auto track_of = [&](const json& end, const std::string& where) {
        std::string id = str(field(end, "track", where), where + " track");
        auto it = track.find(id);
        if (it == track.end()) throw input_error(where + ": unknown track '" + id + "'");
        return it->second;
    };
    if (j.contains("k")) t.k = static_cast<int>(num(j.at("k"), "k"));
    if (j.contains("origin")) t.origin = num(j.at("origin"), "origin");
    for (const auto& e : array(field(j, "templates", "template"), "templates")) {
        EdgeTemplate x;
        x.id = str(field(e, "id", "template"), "template id");
        const auto& r = field(e, "r", x.id);
        const auto& s = field(e, "s", x.id);
        x.r_track = track_of(r, x.id + ".r");
        x.r_off = r.contains("offset") ? num(r.at("offset"), x.id) : 0;
        x.s_track = track_of(s, x.id + ".s");
        x.s_off = s.contains("offset") ? num(s.at("offset"), x.id) : 0;
        if (e.contains("period")) x.period = num(e.at("period"), x.id + " period");
        if (e.contains("phase")) x.phase = num(e.at("phase"), x.id + " phase");
        if (e.contains("color")) x.color = static_cast<int>(num(e.at("color"), x.id + " color")) - 1;
        tmpl.emplace(x.id, static_cast<int>(t.templates.size()));
        t.templates.push_back(x);
    }
    if (j.contains("sporadic")) {
        const auto& sp = j.at("sporadic");
        if (sp.contains("vertices"))
            for (const auto& v : strings(sp.at("vertices"), "sporadic vertices")) {
                spor.emplace(v, static_cast<int>(t.sporadic_vertices.size()));
                t.sporadic_vertices.push_back(v);
            }
        auto spor_of = [&](const std::string& id) {
            auto it = spor.find(id);
            if (it == spor.end()) throw input_error("unknown sporadic vertex '" + id + "'");
            return it->second;
        };
        if (sp.contains("edges"))
            for (const auto& e : array(sp.at("edges"), "sporadic edges")) {
                SporadicEdge x;
                x.id = str(field(e, "id", "sporadic edge"), "sporadic edge id");
                x.r = spor_of(str(field(e, "r", x.id), x.id + " r"));
                const auto& s = field(e, "s", x.id);
                if (s.is_string()) {
                    x.s_index = spor_of(s.get<std::string>());
                } else {
                    x.s_on_track = true;
                    x.s_index = track_of(s, x.id + ".s");
                    x.s_col = s.contains("offset") ? num(s.at("offset"), x.id) : 0;
                }
                t.sporadic_edges.push_back(x);
            }
    }
    if (j.contains("hairs"))
        for (const auto& h : array(j.at("hairs"), "hairs")) {
            if (h.contains("attach_track")) {
                t.hairs.push_back({true, track_of({{"track", h.at("attach_track")}}, "hair")});
            } else {
                std::string id = str(field(h, "attach_vertex", "hair"), "hair vertex");
                auto it = spor.find(id);
                if (it == spor.end()) throw input_error("hair: unknown sporadic vertex '" + id + "'");
                t.hairs.push_back({false, it->second});
            }
        }
    auto tmpl_of = [&](const json& x) {
        std::string id = str(x, "template reference");
        auto it = tmpl.find(id);
        if (it == tmpl.end()) throw input_error("unknown template '" + id + "'");
        return it->second;
    };
    if (j.contains("rays"))
        for (const auto& r : array(j.at("rays"), "rays")) {
            RayDecl d;
            d.id = str(field(r, "id", "ray"), "ray id");
            for (const auto& x : array(field(r, "templates", d.id), "ray templates")) d.templates.push_back(tmpl_of(x));
            t.rays.push_back(d);
        }
    if (j.contains("squares"))
        for (const auto& s : array(j.at("squares"), "squares")) {
            if (!s.is_array() || s.size() != 2 || s[0].size() != 2 || s[1].size() != 2)
                throw input_error("square must be [[a, b], [c, d]]");
            t.squares.push_back({tmpl_of(s[0][0]), tmpl_of(s[0][1]), tmpl_of(s[1][0]), tmpl_of(s[1][1])});
        }
    return t;
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw input_error("'" + path + "' is not valid JSON: " + e.what());
    }
}

DocumentKind document_kind(const json& j) {
    if (!j.is_object()) throw input_error("document must be a JSON object");
    if (j.contains("tracks")) return DocumentKind::column_template;
    if (j.contains("k") || j.contains("squares")) return DocumentKind::kgraph;
    if (j.contains("vertices")) return DocumentKind::graph;
    throw input_error("unrecognised document: expected \"vertices\" or \"tracks\"");
}

}  // namespace ckgraph
