#include "ckgraph/paths.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include "ckgraph/staged.hpp"
#include "ckgraph/staged_analysis.hpp"

namespace ckgraph {

ERef Path::edge(const Graph& g, std::size_t i) const {
    if (i < head.size()) return head[i];
    if (!tail) throw std::out_of_range("edge index past the end of a finite path");
    std::size_t j = i - head.size();
    std::size_t L = tail->block.size();
    auto q = static_cast<std::int64_t>(j / L);
    return g.translate(tail->block[j % L], tail->shift.times(q));
}

VRef Path::vertex(const Graph& g, std::size_t n) const {
    if (n == 0) return start;
    return g.source(edge(g, n - 1));
}

VRef Path::source(const Graph& g) const {
    if (head.empty()) return start;
    return g.source(head.back());
}

std::vector<ERef> Path::unroll(const Graph& g, std::size_t n) const {
    std::vector<ERef> out;
    if (!tail) n = std::min(n, head.size());
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(edge(g, i));
    return out;
}

Path vertex_path(const VRef& v) { return Path{v, {}, std::nullopt}; }

Path finite_path(const Graph& g, std::vector<ERef> edges) {
    if (edges.empty()) throw input_error("finite_path needs an edge; use vertex_path");
    for (std::size_t i = 0; i + 1 < edges.size(); ++i)
        if (g.source(edges[i]) != g.range(edges[i + 1]))
            throw input_error("edges '" + g.edge_name(edges[i]) + "' and '" + g.edge_name(edges[i + 1]) +
                              "' do not compose");
    VRef r = g.range(edges.front());
    return Path{r, std::move(edges), std::nullopt};
}

bool well_formed(const Graph& g, const Path& x) {
    if (!g.valid_vertex(x.start)) return false;
    VRef at = x.start;
    for (const auto& e : x.head) {
        if (!g.valid_edge(e) || g.range(e) != at) return false;
        at = g.source(e);
    }
    if (!x.tail) return true;
    const auto& t = *x.tail;
    if (t.block.empty()) return false;
    for (const auto& e : t.block) {
        if (!g.valid_edge(e) || g.range(e) != at) return false;
        at = g.source(e);
    }
    return g.translate(g.range(t.block.front()), t.shift) == at &&
           g.valid_edge(g.translate(t.block.front(), t.shift));
}

Path infinite_path(const Graph& g, VRef start, std::vector<ERef> head, Tail tail) {
    Path x{start, std::move(head), std::move(tail)};
    if (!well_formed(g, x)) throw input_error("malformed infinite path");
    return normalize(g, std::move(x));
}

namespace {

Shift neg(const Shift& s) { return {-s.dcol, -s.ddepth}; }

void canonical_shift(const Graph& g, Tail& t) {
    bool col = false, depth = false;
    for (const auto& e : t.block) {
        if (g.translate(e, Shift{1, 0}) != e) col = true;
        if (g.translate(e, Shift{0, 1}) != e) depth = true;
    }
    if (!col) t.shift.dcol = 0;
    if (!depth) t.shift.ddepth = 0;
}

}  // namespace

Path normalize(const Graph& g, Path x) {
    if (!x.tail) return x;
    auto& t = *x.tail;
    canonical_shift(g, t);
    std::size_t L = t.block.size();
    for (std::size_t p = 1; p < L; ++p) {
        if (L % p) continue;
        auto k = static_cast<std::int64_t>(L / p);
        if (t.shift.dcol % k || t.shift.ddepth % k) continue;
        Shift s{t.shift.dcol / k, t.shift.ddepth / k};
        bool ok = true;
        for (std::size_t i = 0; i + p < L && ok; ++i) ok = t.block[i + p] == g.translate(t.block[i], s);
        if (!ok) continue;
        t.block.resize(p);
        t.shift = s;
        break;
    }
    // a hair edge leaving depth 0 cannot start the block: translation fixes depth 0
    while (!x.head.empty() && x.head.back() == g.translate(t.block.back(), neg(t.shift)) &&
           g.translate(g.range(x.head.back()), t.shift) == g.range(t.block.back())) {
        t.block.pop_back();
        t.block.insert(t.block.begin(), x.head.back());
        x.head.pop_back();
    }
    return x;
}

Path segment(const Graph& g, const Path& x, std::size_t m, std::size_t n) {
    if (m > n || (x.is_finite() && n > x.length())) throw std::out_of_range("segment indices out of range");
    Path out{x.vertex(g, m), {}, std::nullopt};
    for (std::size_t i = m; i < n; ++i) out.head.push_back(x.edge(g, i));
    return out;
}

Path shift(const Graph& g, const Path& x, std::size_t n) {
    if (x.is_finite()) return segment(g, x, n, x.length());
    Path out{x.vertex(g, n), {}, Tail{{}, x.tail->shift}};
    if (n <= x.head.size()) {
        out.head.assign(x.head.begin() + static_cast<std::ptrdiff_t>(n), x.head.end());
        out.tail->block = x.tail->block;
    } else {
        for (std::size_t t = 0; t < x.tail->block.size(); ++t) out.tail->block.push_back(x.edge(g, n + t));
    }
    return normalize(g, std::move(out));
}

Path concat(const Graph& g, const Path& alpha, const Path& x) {
    if (!alpha.is_finite()) throw input_error("concat needs a finite prefix");
    if (alpha.source(g) != x.start) throw input_error("concat of non-composable paths");
    Path out{alpha.start, alpha.head, x.tail};
    out.head.insert(out.head.end(), x.head.begin(), x.head.end());
    return normalize(g, std::move(out));
}

LagSet LagSet::coset(std::int64_t a, std::int64_t p) {
    LagSet s;
    s.kind = Kind::progression;
    s.p = p;
    s.a = floor_mod(a, p);
    return s;
}

bool LagSet::contains(std::int64_t n) const {
    switch (kind) {
        case Kind::empty: return false;
        case Kind::finite: return std::find(values.begin(), values.end(), n) != values.end();
        default: return floor_mod(n - a, p) == 0;
    }
}

std::optional<std::int64_t> LagSet::any() const {
    switch (kind) {
        case Kind::empty: return std::nullopt;
        case Kind::finite: return values.front();
        default: return a;
    }
}

LagSet LagSet::negate() const {
    switch (kind) {
        case Kind::empty: return *this;
        case Kind::finite: {
            LagSet s = *this;
            for (auto& v : s.values) v = -v;
            std::sort(s.values.begin(), s.values.end());
            return s;
        }
        default: return coset(-a, p);
    }
}

json LagSet::to_json() const {
    switch (kind) {
        case Kind::empty: return {{"kind", "empty"}};
        case Kind::finite: return {{"kind", "finite"}, {"values", values}};
        default: return {{"kind", "progression"}, {"a", a}, {"p", p}};
    }
}

namespace {

std::int64_t to_i(std::size_t v) { return static_cast<std::int64_t>(v); }

// position of e in the periodic part of x, when the tail translates
std::optional<std::int64_t> regime_position(const Graph& g, const Path& x, const ERef& e) {
    const auto& t = *x.tail;
    auto L = to_i(t.block.size());
    for (std::int64_t r = 0; r < L; ++r) {
        const auto& b = t.block[r];
        if (b.kind != e.kind || b.idx != e.idx) continue;
        std::optional<std::int64_t> q;
        if (g.translate(b, Shift{1, 0}) != b && t.shift.dcol != 0) {
            if ((e.a - b.a) % t.shift.dcol == 0) q = (e.a - b.a) / t.shift.dcol;
        } else if (g.translate(b, Shift{0, 1}) != b && t.shift.ddepth != 0) {
            if ((e.b - b.b) % t.shift.ddepth == 0) q = (e.b - b.b) / t.shift.ddepth;
        }
        if (q && *q >= 0 && g.translate(b, t.shift.times(*q)) == e) return to_i(x.head.size()) + *q * L + r;
    }
    return std::nullopt;
}

}  // namespace

LagSet shift_equivalent(const Graph& g, const Path& x0, const Path& y0) {
    Path x = normalize(g, x0), y = normalize(g, y0);
    if (x.is_finite() != y.is_finite()) return LagSet::none();
    if (x.is_finite()) {
        if (x.source(g) != y.source(g)) return LagSet::none();
        return LagSet::single(to_i(x.length()) - to_i(y.length()));
    }
    auto Lx = to_i(x.tail->block.size()), Ly = to_i(y.tail->block.size());
    const auto &Tx = x.tail->shift, &Ty = y.tail->shift;
    if (Tx.dcol * Ly != Ty.dcol * Lx || Tx.ddepth * Ly != Ty.ddepth * Lx) return LagSet::none();
    auto hx = to_i(x.head.size()), hy = to_i(y.head.size());
    std::int64_t L = std::lcm(Lx, Ly);
    auto agrees = [&](std::int64_t n) {
        std::int64_t i0 = std::max(hx, hy + n);
        for (std::int64_t i = i0; i < i0 + L; ++i)
            if (x.edge(g, static_cast<std::size_t>(i)) != y.edge(g, static_cast<std::size_t>(i - n))) return false;
        return true;
    };
    if (Tx.is_zero()) {
        std::vector<std::int64_t> res;
        for (std::int64_t r = 0; r < L; ++r)
            if (agrees(r)) res.push_back(r);
        if (res.empty()) return LagSet::none();
        std::int64_t p = L;
        for (std::size_t i = 1; i < res.size(); ++i) p = std::gcd(p, res[i] - res[0]);
        return LagSet::coset(res[0], p);
    }
    std::vector<std::int64_t> cands;
    if (auto j = regime_position(g, y, x.edge(g, static_cast<std::size_t>(hx)))) cands.push_back(hx - *j);
    if (auto i = regime_position(g, x, y.edge(g, static_cast<std::size_t>(hy)))) cands.push_back(*i - hy);
    for (auto n : cands)
        if (agrees(n)) return LagSet::single(n);
    return LagSet::none();
}

bool boundary_member(const Graph& g, const Path& x) {
    if (!x.is_finite()) return true;
    return g.is_source(x.source(g));
}

namespace {

struct BoundedReach {
    std::unordered_set<VRef, ref_hash> seen;
    bool truncated = false;
};

// vertices reachable from v, cut off at column max_col and hair depth max_depth
BoundedReach reach_bounded(const Graph& g, const VRef& v, std::int64_t max_col, std::int64_t max_depth,
                           std::int64_t budget) {
    BoundedReach out;
    std::deque<VRef> q{v};
    out.seen.insert(v);
    while (!q.empty()) {
        VRef u = q.front();
        q.pop_front();
        for (const auto& e : g.range_edges(u)) {
            VRef s = g.source(e);
            if (out.seen.count(s)) continue;
            if (!g.is_finite() && ((s.kind == 0 && s.a > max_col) || s.b > max_depth)) {
                out.truncated = true;
                continue;
            }
            if (to_i(out.seen.size()) >= budget) {
                out.truncated = true;
                continue;
            }
            out.seen.insert(s);
            q.push_back(s);
        }
    }
    return out;
}

std::int64_t col_of(const VRef& v) { return v.kind == 0 ? v.a : -1; }

}  // namespace

Decision frequently_divertable(const Graph& g, const Path& x0, const Path& y0, std::int64_t budget) {
    Path x = normalize(g, x0), y = normalize(g, y0);
    std::size_t hx = x.head.size(), hy = y.head.size();
    if (g.is_finite()) {
        // reach(x(n)) shrinks with n and is constant once x is on its cycle
        std::size_t n = x.is_finite() ? x.length() : hx;
        std::size_t ny = y.is_finite() ? y.length() : hy + y.tail->block.size();
        std::unordered_set<VRef, ref_hash> targets;
        for (std::size_t j = 0; j <= ny; ++j) targets.insert(y.vertex(g, j));
        auto r = reach_bounded(g, x.vertex(g, n), 0, 0, budget);
        for (const auto& v : r.seen)
            if (targets.count(v)) return Decision::yes({{"kind", "diversion"}, {"checked_from", n}});
        return Decision::no({{"kind", "no_diversion"}, {"n", n}, {"vertex", g.vertex_name(x.vertex(g, n))}});
    }

    // staged graphs
    std::int64_t period = 1;
    if (auto* sg = dynamic_cast<const StagedGraph*>(&g)) period = sg->period();
    std::int64_t ymax_col = -1, ymax_depth = 0;
    bool y_bounded = true;
    if (y.is_finite()) {
        for (std::size_t j = 0; j <= y.length(); ++j) {
            ymax_col = std::max(ymax_col, col_of(y.vertex(g, j)));
            ymax_depth = std::max(ymax_depth, y.vertex(g, j).b);
        }
    } else {
        y_bounded = y.tail->shift.dcol == 0;
        for (std::size_t j = 0; j <= hy + y.tail->block.size(); ++j) ymax_col = std::max(ymax_col, col_of(y.vertex(g, j)));
    }
    // x eventually leaves every column y visits
    if (y_bounded && !x.is_finite() && x.tail->shift.dcol > 0) {
        std::size_t n = hx;
        while (col_of(x.vertex(g, n)) <= ymax_col) ++n;
        return Decision::no({{"kind", "column_escape"}, {"n", n}, {"vertex", g.vertex_name(x.vertex(g, n))}});
    }
    // x eventually runs down a hair that y never reaches
    if (!x.is_finite() && x.tail->shift.dcol == 0 && x.tail->shift.ddepth > 0) {
        if (!shift_equivalent(g, x, y).empty())
            return Decision::yes({{"kind", "common_tail"}});
        std::size_t n = hx;
        VRef v = x.vertex(g, n);
        bool meets = false;
        std::size_t ny = y.is_finite() ? y.length() : hy + 4 * y.tail->block.size();
        for (std::size_t j = 0; j <= ny; ++j) {
            VRef w = y.vertex(g, j);
            if (w.kind == v.kind && w.idx == v.idx && w.a == v.a && w.b >= v.b) meets = true;
        }
        if (!meets && (y.is_finite() || y.tail->shift.ddepth == 0))
            return Decision::no({{"kind", "hair_escape"}, {"n", n}, {"vertex", g.vertex_name(v)}});
        return Decision::unknown("staged diversion not separated within budget", budget);
    }
    if (x.is_finite() || y.is_finite()) {
        std::size_t n = x.is_finite() ? x.length() : hx;
        VRef v = x.vertex(g, n);
        std::int64_t cap = std::max(ymax_col, col_of(v)) + period;
        auto r = reach_bounded(g, v, cap, ymax_depth + 1, budget);
        std::size_t ny = y.is_finite() ? y.length() : hy + y.tail->block.size();
        for (std::size_t j = 0; j <= ny; ++j)
            if (r.seen.count(y.vertex(g, j))) return Decision::yes({{"kind", "diversion"}});
        if (!r.truncated || (y.is_finite() && col_of(v) >= 0))
            return Decision::no({{"kind", "no_diversion"}, {"n", n}, {"vertex", g.vertex_name(v)}});
        return Decision::unknown("staged reach exceeded budget", budget);
    }
    // both infinite with translating tails
    auto Lx = to_i(x.tail->block.size()), Ly = to_i(y.tail->block.size());
    const auto &Tx = x.tail->shift, &Ty = y.tail->shift;
    if (Tx.dcol * Ly != Ty.dcol * Lx || Tx.ddepth * Ly != Ty.ddepth * Lx)
        return Decision::unknown("tails translate at different rates", budget);
    std::int64_t steps = Lx * Ly * period;
    std::int64_t used = 0;
    if (auto* sg = dynamic_cast<const StagedGraph*>(&g)) {
        // exact class counts; reach from x(n) is translation invariant by the period
        StagedAnalyzer an(*sg, budget);
        bool exact = true;
        for (std::int64_t n = to_i(hx); n < to_i(hx) + steps && exact; ++n) {
            VRef v = x.vertex(g, static_cast<std::size_t>(n));
            auto c = an.count(v, y);
            ++used;
            if (c.kind == ClassCount::Kind::unknown) exact = false;
            else if (c.finite() && c.value == 0)
                return Decision::no({{"kind", "no_diversion"}, {"n", n}, {"vertex", g.vertex_name(v)}}, used);
        }
        if (exact) return Decision::yes({{"kind", "periodic_diversion"}, {"window", steps}}, used);
    }
    for (std::int64_t n = to_i(hx); n < to_i(hx) + steps; ++n) {
        VRef v = x.vertex(g, static_cast<std::size_t>(n));
        std::int64_t cap = col_of(v) + 2 * std::abs(Ty.dcol) * Lx + 2 * period + 2;
        auto r = reach_bounded(g, v, cap, 0, budget);
        used += to_i(r.seen.size());
        bool hit = false;
        for (std::size_t j = hy; !hit; ++j) {
            VRef w = y.vertex(g, j);
            if (col_of(w) > cap) break;
            hit = r.seen.count(w) > 0;
        }
        if (!hit) {
            if (!r.truncated)
                return Decision::no({{"kind", "no_diversion"}, {"n", n}, {"vertex", g.vertex_name(v)}}, used);
            return Decision::unknown("staged reach exceeded budget", used);
        }
    }
    return Decision::yes({{"kind", "periodic_diversion"}, {"window", steps}}, used);
}

namespace {

std::vector<std::string> tokens(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    std::string t;
    while (in >> t) out.push_back(t);
    return out;
}

ERef need_edge(const Graph& g, const std::string& name) {
    auto e = g.parse_edge(name);
    if (!e) throw input_error("unknown edge '" + name + "'");
    return *e;
}

}  // namespace

Path parse_path(const Graph& g, const std::string& literal, std::optional<VRef> start) {
    auto semi = literal.find(';');
    auto head_tok = tokens(literal.substr(0, semi));
    std::vector<ERef> head;
    std::optional<VRef> at = start;
    for (std::size_t i = 0; i < head_tok.size(); ++i) {
        const auto& t = head_tok[i];
        if (i == 0 && !g.parse_edge(t)) {
            auto v = g.parse_vertex(t);
            if (!v) throw input_error("unknown edge or vertex '" + t + "'");
            at = *v;
            continue;
        }
        head.push_back(need_edge(g, t));
    }
    if (!head.empty()) {
        if (!at) at = g.range(head.front());
        VRef cur = *at;
        for (const auto& e : head) {
            if (g.range(e) != cur) throw input_error("path edges do not compose at '" + g.edge_name(e) + "'");
            cur = g.source(e);
        }
    }
    if (semi == std::string::npos) {
        if (!at) throw input_error("empty path literal");
        return Path{*at, head, std::nullopt};
    }
    auto tail_tok = tokens(literal.substr(semi + 1));
    if (tail_tok.empty()) throw input_error("empty tail in path literal");
    VRef tail_start;
    Tail tail;
    auto* sg = dynamic_cast<const StagedGraph*>(&g);
    if (tail_tok.size() == 1 && tail_tok[0].size() > 1 && tail_tok[0][0] == '@') {
        std::string name = tail_tok[0].substr(1);
        if (!sg) throw input_error("'@' tails need a staged graph");
        if (int ri = sg->ray_index(name); ri >= 0) {
            if (!at) throw input_error("ray tail needs a head or start vertex");
            tail_start = head.empty() ? *at : g.source(head.back());
            if (tail_start.kind != 0 || tail_start.b != 0) throw input_error("ray must start on a track");
            VRef cur = tail_start;
            std::int64_t volt = 0;
            for (int ti : sg->spec().rays[ri].templates) {
                const auto& t = sg->spec().templates[ti];
                if (t.r_track != cur.idx) throw input_error("ray '" + name + "' does not start at this vertex");
                ERef e = StagedGraph::template_edge(ti, cur.a - t.r_off);
                if (!g.valid_edge(e)) throw input_error("ray '" + name + "' has no instance here");
                tail.block.push_back(e);
                cur = g.source(e);
                volt += t.delta();
            }
            tail.shift = Shift{volt, 0};
        } else {
            auto v = g.parse_vertex(name);
            if (!v) throw input_error("unknown ray or port '" + name + "'");
            int h = v->kind == 0 ? sg->hair_on_track(v->idx) : sg->hair_on_sporadic(v->idx);
            if (h < 0) throw input_error("'" + name + "' is not a port");
            tail_start = *v;
            tail.block.push_back(ERef{1, h, v->kind == 0 ? v->a : 0, v->b + 1});
            tail.shift = Shift{0, 1};
            if (at && (head.empty() ? *at : g.source(head.back())) != tail_start)
                throw input_error("head does not end at port '" + name + "'");
        }
    } else {
        for (const auto& t : tail_tok) tail.block.push_back(need_edge(g, t));
        tail_start = g.range(tail.block.front());
        VRef first_s = g.source(tail.block.back());
        Shift s{0, 0};
        if (!g.is_finite()) {
            VRef r0 = g.range(tail.block.front());
            if (first_s.kind == r0.kind && first_s.idx == r0.idx) s = Shift{first_s.a - r0.a, first_s.b - r0.b};
        }
        tail.shift = s;
    }
    if (!at) at = tail_start;
    Path x{*at, head, tail};
    if (!well_formed(g, x)) throw input_error("tail does not close up into a periodic path");
    return normalize(g, std::move(x));
}

std::string to_literal(const Graph& g, const Path& x) {
    std::string out;
    if (x.head.empty()) out = g.vertex_name(x.start);
    for (const auto& e : x.head) out += (out.empty() ? "" : " ") + g.edge_name(e);
    if (x.tail) {
        out += " ;";
        for (const auto& e : x.tail->block) out += " " + g.edge_name(e);
    }
    return out;
}

json path_json(const Graph& g, const Path& x) {
    json j;
    j["literal"] = to_literal(g, x);
    j["range"] = g.vertex_name(x.start);
    std::vector<std::string> h;
    for (const auto& e : x.head) h.push_back(g.edge_name(e));
    j["head"] = h;
    if (x.tail) {
        std::vector<std::string> b;
        for (const auto& e : x.tail->block) b.push_back(g.edge_name(e));
        j["block"] = b;
        j["shift"] = {x.tail->shift.dcol, x.tail->shift.ddepth};
    }
    return j;
}

}  // namespace ckgraph
