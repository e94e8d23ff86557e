#include "ckgraph/staged.hpp"

#include <charconv>
#include <map>
#include <numeric>

namespace ckgraph {

std::int64_t floor_mod(std::int64_t a, std::int64_t m) {
    std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}

namespace {

std::optional<std::int64_t> parse_int(std::string_view s) {
    if (s.empty()) return std::nullopt;
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) return std::nullopt;
    return v;
}

bool bad_name(const std::string& s) {
    return s.empty() || s.find('.') != std::string::npos || s.find('~') != std::string::npos ||
           s.find(' ') != std::string::npos || s.find(';') != std::string::npos ||
           s.find('@') != std::string::npos;
}

}  // namespace

ValidationReport validate_template(const ColumnTemplate& t) {
    ValidationReport rep;
    int nt = static_cast<int>(t.tracks.size());
    std::set<std::string> names;
    for (const auto& tr : t.tracks) {
        if (bad_name(tr)) rep.fail("bad track id '" + tr + "'", {{"track", tr}});
        if (!names.insert(tr).second) rep.fail("duplicate track id '" + tr + "'", {{"track", tr}});
    }
    std::set<std::string> tids;
    for (const auto& e : t.templates) {
        if (bad_name(e.id)) rep.fail("bad template id '" + e.id + "'", {{"template", e.id}});
        if (!tids.insert(e.id).second)
            rep.fail("duplicate template id '" + e.id + "'", {{"template", e.id}});
        if (e.r_track < 0 || e.r_track >= nt || e.s_track < 0 || e.s_track >= nt)
            rep.fail("template '" + e.id + "' references an unknown track", {{"template", e.id}});
        if (e.delta() != 0 && e.delta() != 1)
            rep.fail("template '" + e.id + "' must have s offset - r offset in {0,1}",
                     {{"template", e.id}, {"delta", e.delta()}});
        if (e.period < 1 || e.phase < 0 || e.phase >= e.period)
            rep.fail("template '" + e.id + "' has a bad period/phase", {{"template", e.id}});
        if (t.k > 0 && (e.color < 0 || e.color >= t.k))
            rep.fail("template '" + e.id + "' has a bad color", {{"template", e.id}});
    }
    int ns = static_cast<int>(t.sporadic_vertices.size());
    std::set<std::string> sv;
    for (const auto& v : t.sporadic_vertices) {
        if (bad_name(v)) rep.fail("bad sporadic vertex id '" + v + "'", {{"vertex", v}});
        if (!sv.insert(v).second) rep.fail("duplicate sporadic vertex '" + v + "'", {{"vertex", v}});
    }
    std::set<std::string> se;
    for (const auto& e : t.sporadic_edges) {
        if (!se.insert(e.id).second || tids.count(e.id))
            rep.fail("duplicate sporadic edge '" + e.id + "'", {{"edge", e.id}});
        if (e.r < 0 || e.r >= ns)
            rep.fail("sporadic edge '" + e.id + "' must have a sporadic range", {{"edge", e.id}});
        if (e.s_on_track ? (e.s_index < 0 || e.s_index >= nt || e.s_col < 0)
                         : (e.s_index < 0 || e.s_index >= ns))
            rep.fail("sporadic edge '" + e.id + "' has a bad source", {{"edge", e.id}});
    }
    std::set<std::pair<bool, int>> attach;
    for (const auto& h : t.hairs) {
        bool ok = h.on_track ? (h.index >= 0 && h.index < nt) : (h.index >= 0 && h.index < ns);
        if (!ok) rep.fail("hair attached to an unknown vertex", {{"hair", h.index}});
        if (!attach.insert({h.on_track, h.index}).second)
            rep.fail("two hairs on the same vertex", {{"hair", h.index}});
    }
    for (const auto& r : t.rays) {
        if (r.templates.empty()) {
            rep.fail("ray '" + r.id + "' is empty", {{"ray", r.id}});
            continue;
        }
        std::int64_t volt = 0;
        bool ok = true;
        for (std::size_t i = 0; i < r.templates.size(); ++i) {
            int a = r.templates[i];
            int b = r.templates[(i + 1) % r.templates.size()];
            if (a < 0 || a >= (int)t.templates.size() || b < 0 || b >= (int)t.templates.size()) {
                ok = false;
                break;
            }
            if (t.templates[a].s_track != t.templates[b].r_track) ok = false;
            volt += t.templates[a].delta();
        }
        if (!ok || volt <= 0)
            rep.fail("ray '" + r.id + "' does not close up with positive column advance",
                     {{"ray", r.id}});
    }
    for (const auto& sq : t.squares) {
        for (int i : sq)
            if (i < 0 || i >= (int)t.templates.size()) {
                rep.fail("square references an unknown template");
                break;
            }
    }
    return rep;
}

StagedGraph::StagedGraph(ColumnTemplate t) : t_(std::move(t)) {
    auto rep = validate_template(t_);
    if (!rep.valid) throw input_error("invalid column template: " + rep.problems.front());
    for (const auto& e : t_.templates) period_ = std::lcm(period_, e.period);
    hair_of_track_.assign(t_.tracks.size(), -1);
    hair_of_sporadic_.assign(t_.sporadic_vertices.size(), -1);
    for (std::size_t h = 0; h < t_.hairs.size(); ++h) {
        if (t_.hairs[h].on_track)
            hair_of_track_[t_.hairs[h].index] = static_cast<int>(h);
        else
            hair_of_sporadic_[t_.hairs[h].index] = static_cast<int>(h);
    }
}

int StagedGraph::ray_index(std::string_view id) const {
    for (std::size_t i = 0; i < t_.rays.size(); ++i)
        if (t_.rays[i].id == id) return static_cast<int>(i);
    return -1;
}

bool StagedGraph::instance_exists(int tmpl, std::int64_t n) const {
    const auto& e = t_.templates[tmpl];
    if (n + e.r_off < 0 || n + e.s_off < 0) return false;
    return floor_mod(n - e.phase, e.period) == 0;
}

ERef StagedGraph::hair_edge(const VRef& attach, std::int64_t depth) const {
    int h = attach.kind == 0 ? hair_of_track_[attach.idx] : hair_of_sporadic_[attach.idx];
    return ERef{1, h, attach.kind == 0 ? attach.a : 0, depth};
}

std::int64_t StagedGraph::edge_column(const ERef& e) const { return column(range(e)); }

VRef StagedGraph::range(const ERef& e) const {
    switch (e.kind) {
        case 0: {
            const auto& t = t_.templates[e.idx];
            return track_vertex(t.r_track, e.a + t.r_off);
        }
        case 1: {
            const auto& h = t_.hairs[e.idx];
            if (h.on_track) return VRef{0, h.index, e.a, e.b - 1};
            return VRef{1, h.index, 0, e.b - 1};
        }
        default:
            return sporadic_vertex(t_.sporadic_edges[e.idx].r);
    }
}

VRef StagedGraph::source(const ERef& e) const {
    switch (e.kind) {
        case 0: {
            const auto& t = t_.templates[e.idx];
            return track_vertex(t.s_track, e.a + t.s_off);
        }
        case 1: {
            const auto& h = t_.hairs[e.idx];
            if (h.on_track) return VRef{0, h.index, e.a, e.b};
            return VRef{1, h.index, 0, e.b};
        }
        default: {
            const auto& s = t_.sporadic_edges[e.idx];
            if (s.s_on_track) return track_vertex(s.s_index, s.s_col);
            return sporadic_vertex(s.s_index);
        }
    }
}

std::vector<ERef> StagedGraph::range_edges(const VRef& v) const {
    std::vector<ERef> out;
    int h = v.kind == 0 ? hair_of_track_[v.idx] : hair_of_sporadic_[v.idx];
    if (v.b > 0) {
        out.push_back(ERef{1, h, v.kind == 0 ? v.a : 0, v.b + 1});
        return out;
    }
    if (v.kind == 0) {
        for (std::size_t i = 0; i < t_.templates.size(); ++i) {
            const auto& t = t_.templates[i];
            if (t.r_track != v.idx) continue;
            std::int64_t n = v.a - t.r_off;
            if (instance_exists(static_cast<int>(i), n)) out.push_back(template_edge((int)i, n));
        }
    } else {
        for (std::size_t i = 0; i < t_.sporadic_edges.size(); ++i)
            if (t_.sporadic_edges[i].r == v.idx) out.push_back(ERef{2, (int)i, 0, 0});
    }
    if (h >= 0) out.push_back(ERef{1, h, v.kind == 0 ? v.a : 0, 1});
    return out;
}

std::vector<ERef> StagedGraph::source_edges(const VRef& v) const {
    std::vector<ERef> out;
    if (v.b > 0) {
        int h = v.kind == 0 ? hair_of_track_[v.idx] : hair_of_sporadic_[v.idx];
        out.push_back(ERef{1, h, v.kind == 0 ? v.a : 0, v.b});
        return out;
    }
    if (v.kind == 0) {
        for (std::size_t i = 0; i < t_.templates.size(); ++i) {
            const auto& t = t_.templates[i];
            if (t.s_track != v.idx) continue;
            std::int64_t n = v.a - t.s_off;
            if (instance_exists(static_cast<int>(i), n)) out.push_back(template_edge((int)i, n));
        }
        for (std::size_t i = 0; i < t_.sporadic_edges.size(); ++i) {
            const auto& s = t_.sporadic_edges[i];
            if (s.s_on_track && s.s_index == v.idx && s.s_col == v.a) out.push_back(ERef{2, (int)i, 0, 0});
        }
    } else {
        for (std::size_t i = 0; i < t_.sporadic_edges.size(); ++i) {
            const auto& s = t_.sporadic_edges[i];
            if (!s.s_on_track && s.s_index == v.idx) out.push_back(ERef{2, (int)i, 0, 0});
        }
    }
    return out;
}

std::string StagedGraph::vertex_name(const VRef& v) const {
    std::string base = v.kind == 0 ? t_.tracks[v.idx] + "_" + std::to_string(v.a + t_.origin)
                                   : t_.sporadic_vertices[v.idx];
    if (v.b > 0) base += "." + std::to_string(v.b);
    return base;
}

std::string StagedGraph::edge_name(const ERef& e) const {
    switch (e.kind) {
        case 0: return t_.templates[e.idx].id + "_" + std::to_string(e.a + t_.origin);
        case 1: return vertex_name(range(ERef{1, e.idx, e.a, 1})) + "~" + std::to_string(e.b);
        default: return t_.sporadic_edges[e.idx].id;
    }
}

std::optional<VRef> StagedGraph::parse_vertex(std::string_view name) const {
    auto dot = name.rfind('.');
    if (dot != std::string_view::npos) {
        auto base = parse_vertex(name.substr(0, dot));
        auto depth = parse_int(name.substr(dot + 1));
        if (!base || !depth || *depth < 1 || base->b != 0) return std::nullopt;
        VRef v = *base;
        v.b = *depth;
        if (!valid_vertex(v)) return std::nullopt;
        return v;
    }
    for (std::size_t i = 0; i < t_.sporadic_vertices.size(); ++i)
        if (t_.sporadic_vertices[i] == name) return sporadic_vertex((int)i);
    auto us = name.rfind('_');
    if (us == std::string_view::npos) return std::nullopt;
    auto num = parse_int(name.substr(us + 1));
    if (!num) return std::nullopt;
    auto track = name.substr(0, us);
    for (std::size_t i = 0; i < t_.tracks.size(); ++i)
        if (t_.tracks[i] == track) {
            VRef v = track_vertex((int)i, *num - t_.origin);
            if (!valid_vertex(v)) return std::nullopt;
            return v;
        }
    return std::nullopt;
}

std::optional<ERef> StagedGraph::parse_edge(std::string_view name) const {
    for (std::size_t i = 0; i < t_.sporadic_edges.size(); ++i)
        if (t_.sporadic_edges[i].id == name) return ERef{2, (int)i, 0, 0};
    auto tilde = name.rfind('~');
    if (tilde != std::string_view::npos) {
        auto base = parse_vertex(name.substr(0, tilde));
        auto depth = parse_int(name.substr(tilde + 1));
        if (!base || !depth || base->b != 0 || *depth < 1) return std::nullopt;
        int h = base->kind == 0 ? hair_of_track_[base->idx] : hair_of_sporadic_[base->idx];
        if (h < 0) return std::nullopt;
        return ERef{1, h, base->kind == 0 ? base->a : 0, *depth};
    }
    auto us = name.rfind('_');
    if (us == std::string_view::npos) return std::nullopt;
    auto num = parse_int(name.substr(us + 1));
    if (!num) return std::nullopt;
    auto id = name.substr(0, us);
    for (std::size_t i = 0; i < t_.templates.size(); ++i)
        if (t_.templates[i].id == id) {
            ERef e = template_edge((int)i, *num - t_.origin);
            if (!valid_edge(e)) return std::nullopt;
            return e;
        }
    return std::nullopt;
}

bool StagedGraph::valid_vertex(const VRef& v) const {
    if (v.b < 0) return false;
    if (v.kind == 0) {
        if (v.idx < 0 || v.idx >= track_count() || v.a < 0) return false;
        return v.b == 0 || hair_of_track_[v.idx] >= 0;
    }
    if (v.kind == 1) {
        if (v.idx < 0 || v.idx >= (int)t_.sporadic_vertices.size() || v.a != 0) return false;
        return v.b == 0 || hair_of_sporadic_[v.idx] >= 0;
    }
    return false;
}

bool StagedGraph::valid_edge(const ERef& e) const {
    switch (e.kind) {
        case 0:
            return e.idx >= 0 && e.idx < (int)t_.templates.size() && e.b == 0 &&
                   instance_exists(e.idx, e.a);
        case 1: {
            if (e.idx < 0 || e.idx >= (int)t_.hairs.size() || e.b < 1) return false;
            return t_.hairs[e.idx].on_track ? e.a >= 0 : e.a == 0;
        }
        case 2:
            return e.idx >= 0 && e.idx < (int)t_.sporadic_edges.size() && e.a == 0 && e.b == 0;
        default: return false;
    }
}

VRef StagedGraph::translate(const VRef& v, const Shift& s) const {
    VRef out = v;
    if (v.kind == 0) out.a += s.dcol;
    if (v.b > 0) out.b += s.ddepth;
    return out;
}

ERef StagedGraph::translate(const ERef& e, const Shift& s) const {
    ERef out = e;
    if (e.kind == 0) out.a += s.dcol;
    if (e.kind == 1) {
        if (t_.hairs[e.idx].on_track) out.a += s.dcol;
        out.b += s.ddepth;
    }
    return out;
}

DirectedGraph StagedGraph::stage(std::int64_t n) const {
    DirectedGraph g;
    std::map<VRef, int> index;
    auto add = [&](const VRef& v) {
        auto it = index.find(v);
        if (it != index.end()) return it->second;
        int id = g.add_vertex(vertex_name(v));
        index.emplace(v, id);
        return id;
    };
    for (int v = 0; v < (int)t_.sporadic_vertices.size(); ++v) add(sporadic_vertex(v));
    for (std::int64_t c = 0; c <= n; ++c)
        for (int t = 0; t < track_count(); ++t) add(track_vertex(t, c));
    std::vector<VRef> attach;
    for (const auto& h : t_.hairs) {
        if (h.on_track) {
            for (std::int64_t c = 0; c <= n; ++c) attach.push_back(track_vertex(h.index, c));
        } else {
            attach.push_back(sporadic_vertex(h.index));
        }
    }
    for (const auto& a : attach)
        for (std::int64_t d = 1; d <= n; ++d) {
            VRef v = a;
            v.b = d;
            add(v);
        }
    auto emit = [&](const ERef& e) {
        VRef r = range(e), s = source(e);
        if (!index.count(r) || !index.count(s)) return;
        g.add_edge(edge_name(e), index.at(r), index.at(s));
    };
    for (std::int64_t c = 0; c <= n; ++c)
        for (int t = 0; t < track_count(); ++t)
            for (const auto& e : range_edges(track_vertex(t, c))) emit(e);
    for (int v = 0; v < (int)t_.sporadic_vertices.size(); ++v)
        for (const auto& e : range_edges(sporadic_vertex(v))) emit(e);
    for (const auto& a : attach)
        for (std::int64_t d = 1; d < n; ++d) {
            VRef v = a;
            v.b = d;
            for (const auto& e : range_edges(v)) emit(e);
        }
    return g;
}

std::set<std::string> StagedGraph::frontier(std::int64_t n) const {
    // vertices of stage(n) with some in-range edge missing from stage(n)
    std::set<std::string> out;
    auto in_stage = [&](const VRef& v) {
        if (v.kind == 0 && v.a > n) return false;
        return v.b <= n;
    };
    std::vector<VRef> vs;
    for (int v = 0; v < (int)t_.sporadic_vertices.size(); ++v) vs.push_back(sporadic_vertex(v));
    for (std::int64_t c = 0; c <= n; ++c)
        for (int t = 0; t < track_count(); ++t) vs.push_back(track_vertex(t, c));
    for (const auto& h : t_.hairs) {
        VRef base = h.on_track ? track_vertex(h.index, 0) : sporadic_vertex(h.index);
        std::int64_t cmax = h.on_track ? n : 0;
        for (std::int64_t c = 0; c <= cmax; ++c) {
            VRef v = base;
            if (h.on_track) v.a = c;
            v.b = n;
            if (n >= 1) vs.push_back(v);
        }
    }
    for (const auto& v : vs) {
        for (const auto& e : range_edges(v))
            if (!in_stage(source(e))) {
                out.insert(vertex_name(v));
                break;
            }
    }
    return out;
}

std::set<std::string> StagedGraph::ports() const {
    std::set<std::string> out;
    for (const auto& h : t_.hairs)
        out.insert(h.on_track ? t_.tracks[h.index] + "_*" : t_.sporadic_vertices[h.index]);
    return out;
}

ValidationReport validate_stages(const StageProvider& p, std::int64_t max_n) {
    ValidationReport rep;
    for (std::int64_t n = 0; n < max_n; ++n) {
        DirectedGraph a = p.stage(n), b = p.stage(n + 1);
        auto fr = p.frontier(n);
        for (const auto& f : fr)
            if (!a.find_vertex(f)) rep.fail("frontier vertex '" + f + "' missing from stage", {{"stage", n}});
        for (int v = 0; v < a.vertex_count(); ++v)
            if (!b.find_vertex(a.vertex_id(v)))
                rep.fail("vertex '" + a.vertex_id(v) + "' disappears", {{"stage", n}, {"vertex", a.vertex_id(v)}});
        for (int e = 0; e < a.edge_count(); ++e) {
            auto eb = b.find_edge(a.edge_id(e));
            if (!eb || b.vertex_id(b.edge_range(*eb)) != a.vertex_id(a.edge_range(e)) ||
                b.vertex_id(b.edge_source(*eb)) != a.vertex_id(a.edge_source(e)))
                rep.fail("edge '" + a.edge_id(e) + "' changes between stages",
                         {{"stage", n}, {"edge", a.edge_id(e)}});
        }
        for (int v = 0; v < a.vertex_count(); ++v) {
            const auto& name = a.vertex_id(v);
            if (fr.count(name)) continue;
            auto vb = b.find_vertex(name);
            if (!vb) continue;
            std::set<std::string> ea, eb;
            for (int e : a.in_range(v)) ea.insert(a.edge_id(e));
            for (int e : b.in_range(*vb)) eb.insert(b.edge_id(e));
            if (ea != eb)
                rep.fail("stability violated at '" + name + "'",
                         {{"stage", n}, {"vertex", name}, {"kind", "stability"}});
        }
    }
    return rep;
}

}  // namespace ckgraph
