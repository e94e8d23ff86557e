#include "ckgraph/groupoid.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "ckgraph/families.hpp"
#include "ckgraph/structure.hpp"

namespace ckgraph {

GroupoidElement make_element(const Graph& g, const Path& x, std::int64_t n, const Path& y) {
    if (!well_formed(g, x) || !well_formed(g, y)) throw input_error("groupoid element needs well-formed paths");
    if (!shift_equivalent(g, x, y).contains(n))
        throw input_error("paths are not shift equivalent with lag " + std::to_string(n));
    return {normalize(g, x), n, normalize(g, y)};
}

GroupoidElement unit(const Graph& g, const Path& x) { return make_element(g, x, 0, x); }
GroupoidElement range_unit(const GroupoidElement& a) { return {a.x, 0, a.x}; }
GroupoidElement source_unit(const GroupoidElement& a) { return {a.y, 0, a.y}; }
bool composable(const GroupoidElement& a, const GroupoidElement& b) { return a.y == b.x; }

GroupoidElement compose(const GroupoidElement& a, const GroupoidElement& b) {
    if (!composable(a, b)) throw input_error("elements are not composable");
    return {a.x, a.lag + b.lag, b.y};
}

GroupoidElement inverse(const GroupoidElement& a) { return {a.y, -a.lag, a.x}; }

json element_json(const Graph& g, const GroupoidElement& a) {
    return {{"x", to_literal(g, a.x)}, {"n", a.lag}, {"y", to_literal(g, a.y)}};
}

namespace {

bool has_prefix(const Graph& g, const Path& x, const Path& alpha) {
    if (x.start != alpha.start) return false;
    if (x.is_finite() && x.length() < alpha.length()) return false;
    return x.unroll(g, alpha.length()) == alpha.head;
}

}  // namespace

bool basis_member(const Graph& g, const GroupoidElement& a, const BasisSet& z) {
    if (!z.alpha.is_finite() || !z.beta.is_finite()) return false;
    if (z.alpha.source(g) != z.beta.source(g)) return false;
    const auto la = static_cast<std::int64_t>(z.alpha.length()), lb = static_cast<std::int64_t>(z.beta.length());
    if (a.lag != la - lb) return false;
    if (!has_prefix(g, a.x, z.alpha) || !has_prefix(g, a.y, z.beta)) return false;
    return shift(g, a.x, z.alpha.length()) == shift(g, a.y, z.beta.length());
}

json basis_json(const Graph& g, const BasisSet& z) {
    return {{"alpha", to_literal(g, z.alpha)}, {"beta", to_literal(g, z.beta)}};
}

std::int64_t divergence_depth(const Graph& g, const GroupoidElement& a) {
    auto span = [](const Path& p) {
        return static_cast<std::int64_t>(p.head.size() + (p.tail ? p.tail->block.size() : 0));
    };
    const std::int64_t cap = span(a.x) + span(a.y) + std::abs(a.lag) + 1;
    for (std::int64_t m = std::max<std::int64_t>(0, a.lag); m <= cap + std::max<std::int64_t>(0, a.lag); ++m) {
        if (a.x.is_finite() && m > static_cast<std::int64_t>(a.x.length())) break;
        if (a.y.is_finite() && m - a.lag > static_cast<std::int64_t>(a.y.length())) break;
        if (shift(g, a.x, static_cast<std::size_t>(m)) == shift(g, a.y, static_cast<std::size_t>(m - a.lag))) return m;
    }
    throw std::logic_error("element paths never agree");
}

ClassCount count_shift_class_in_cylinder(const StagedAnalyzer& an, const Path& x, const Path& alpha) {
    if (!alpha.is_finite()) throw input_error("cylinder needs a finite path");
    return an.count(alpha.source(an.graph()), x);
}

ClassCount count_shift_class_in_cylinder(const Graph& g, const Path& x, const Path& alpha, std::int64_t budget) {
    if (const auto* sg = dynamic_cast<const StagedGraph*>(&g))
        return count_shift_class_in_cylinder(StagedAnalyzer(*sg, budget), x, alpha);
    const auto& dg = dynamic_cast<const DirectedGraph&>(g);
    if (!alpha.is_finite()) throw input_error("cylinder needs a finite path");
    ClassCount out;
    if (auto c = some_cycle(dg)) {
        out.kind = ClassCount::Kind::unknown;
        out.reason = "non-principal";
        return out;
    }
    // without cycles E^inf is empty, so x ends at a source
    if (!boundary_member(g, x)) throw input_error("path is not a boundary path");
    const int target = x.source(g).idx;
    std::vector<std::int64_t> memo(static_cast<std::size_t>(dg.vertex_count()), -1);
    std::function<std::int64_t(int)> paths = [&](int v) -> std::int64_t {
        auto& m = memo[static_cast<std::size_t>(v)];
        if (m >= 0) return m;
        m = v == target ? 1 : 0;
        for (int e : dg.in_range(v)) m += paths(dg.edge_source(e));
        return m;
    };
    out.value = paths(alpha.source(g).idx);
    out.certificate = {{"kind", "dag"}, {"target", dg.vertex_id(target)}};
    return out;
}

const FamilyLimit& SequenceFamily::limit(const std::string& id) const {
    if (limits.empty()) throw input_error("family '" + name + "' has no limit paths");
    if (id.empty()) return limits.front();
    for (const auto& l : limits)
        if (l.name == id) return l;
    throw input_error("family '" + name + "' has no limit '" + id + "'");
}

std::vector<std::string> sequence_family_names() { return {"2times", "ktimes:<k>", "ml2mu3", "nonhausdorff"}; }

namespace {

struct Diversion {
    int row_tmpl, row_track;
    std::vector<int> down;
    int hair_track;
};

// row from column 0 to column n-1, down the listed edges there, then the hair
Path diversion(const StagedGraph& g, const Diversion& d, std::int64_t n) {
    if (n < 1) throw input_error("family index must be at least 1");
    std::vector<ERef> head;
    for (std::int64_t c = 0; c + 1 < n; ++c) head.push_back(StagedGraph::template_edge(d.row_tmpl, c));
    for (int t : d.down) {
        if (!g.instance_exists(t, n - 1))
            throw input_error("edge " + g.spec().templates[static_cast<std::size_t>(t)].id + " is absent at index " +
                              std::to_string(n));
        head.push_back(StagedGraph::template_edge(t, n - 1));
    }
    const VRef attach = StagedGraph::track_vertex(d.hair_track, n - 1);
    head.push_back(g.hair_edge(attach, 1));
    Tail tail{{g.hair_edge(attach, 2)}, Shift{0, 1}};
    return normalize(g, infinite_path(g, StagedGraph::track_vertex(d.row_track, 0), std::move(head), std::move(tail)));
}

Path ray(const StagedGraph& g, int row_track, const std::string& id) {
    return parse_path(g, "; @" + id, StagedGraph::track_vertex(row_track, 0));
}

WitnessFormula diverted_witness(std::shared_ptr<const StagedGraph> g, Diversion range, Diversion source) {
    return [g, range, source](std::int64_t n) {
        return make_element(*g, diversion(*g, range, n), 0, diversion(*g, source, n));
    };
}

SequenceFamily k_times_family(const std::string& name, ColumnTemplate t, int witnesses) {
    SequenceFamily f;
    f.name = name;
    auto g = std::make_shared<const StagedGraph>(std::move(t));
    f.graph = g;
    const Diversion base{0, 0, {1}, 1};
    f.member = [g, base](std::int64_t n) { return diversion(*g, base, n); };
    FamilyLimit lim{"z", ray(*g, 0, "z"), {}, {}};
    for (int i = 1; i <= witnesses; ++i) {
        lim.witness_names.push_back("f" + std::to_string(i));
        lim.witnesses.push_back(diverted_witness(g, Diversion{0, 0, {i}, 1}, base));
    }
    f.limits.push_back(std::move(lim));
    f.contract = {true, g->period(), 1};
    f.closed_form_witnesses = true;
    f.locally_closed_orbit = true;
    return f;
}

SequenceFamily nonhausdorff_family() {
    SequenceFamily f;
    f.name = "nonhausdorff";
    auto g = std::make_shared<const StagedGraph>(nonhausdorff_template());
    f.graph = g;
    // tracks v w c h; templates ev ew cv cw f1 f2
    const Diversion base{0, 0, {2, 4}, 3};
    f.member = [g, base](std::int64_t n) { return diversion(*g, base, n); };
    FamilyLimit x{"x", ray(*g, 0, "x"), {"f1", "f2"}, {}};
    x.witnesses = {diverted_witness(g, base, base), diverted_witness(g, Diversion{0, 0, {2, 5}, 3}, base)};
    FamilyLimit y{"y", ray(*g, 1, "y"), {"f1", "f2"}, {}};
    y.witnesses = {diverted_witness(g, Diversion{1, 1, {3, 4}, 3}, base),
                   diverted_witness(g, Diversion{1, 1, {3, 5}, 3}, base)};
    f.limits = {std::move(x), std::move(y)};
    f.contract = {true, 1, 1};
    f.closed_form_witnesses = true;
    f.locally_closed_orbit = true;
    return f;
}

}  // namespace

SequenceFamily sequence_family(const std::string& full) {
    std::string name = full.rfind("thesis:", 0) == 0 ? full.substr(7) : full;
    if (name == "2times") return k_times_family("2times", k_times_template(2), 2);
    if (name.rfind("ktimes:", 0) == 0) {
        int k = 0;
        try {
            std::size_t used = 0;
            k = std::stoi(name.substr(7), &used);
            if (used != name.size() - 7) k = 0;
        } catch (const std::exception&) {
        }
        if (k < 1) throw input_error("bad family '" + name + "': k must be a positive integer");
        return k_times_family(name, k_times_template(k), k);
    }
    if (name == "ml2mu3") return k_times_family("ml2mu3", ml2mu3_template(), 2);
    if (name == "nonhausdorff") return nonhausdorff_family();
    throw input_error("unknown sequence family '" + full + "'");
}

namespace {

json count_cell(const ClassCount& c) {
    if (c.finite()) return c.value;
    if (c.infinite()) return "inf";
    return "unknown";
}

json ratio_json(const std::optional<Ratio>& r) {
    if (!r) return nullptr;
    if (r->denominator() == 1) return r->numerator();
    return std::to_string(r->numerator()) + "/" + std::to_string(r->denominator());
}

}  // namespace

json MultiplicityProfile::to_json() const {
    json rows = json::array();
    for (std::size_t i = 0; i < depths.size(); ++i) {
        json cells = json::array();
        for (const auto& c : table[i]) cells.push_back(count_cell(c));
        rows.push_back({{"m", depths[i]}, {"lambda_z", count_cell(lambda_z[i])}, {"counts", cells}});
    }
    return {{"family", family},
            {"limit", limit},
            {"indices", {{"first", indices.empty() ? 0 : indices.front()}, {"last", indices.empty() ? 0 : indices.back()}}},
            {"table", rows},
            {"M_L", ratio_json(lower)},
            {"M_U", ratio_json(upper)},
            {"status", status},
            {"certified", certified()},
            {"notes", notes}};
}

MultiplicityProfile multiplicity_profile(const SequenceFamily& f, const std::string& limit_name,
                                         const ProfileOptions& opt) {
    if (opt.cylinders < 1 || opt.window < 1) throw input_error("cylinders and window must be positive");
    const auto& g = *f.graph;
    const auto& lim = f.limit(limit_name);
    StagedAnalyzer an(g, opt.budget);

    MultiplicityProfile p;
    p.family = f.name;
    p.limit = lim.name;
    for (std::int64_t m = 0; m < opt.cylinders; ++m) p.depths.push_back(m);
    for (std::int64_t n = f.first_index; n < f.first_index + opt.window; ++n) p.indices.push_back(n);
    std::vector<Path> members;
    for (auto n : p.indices) members.push_back(f.member(n));

    bool unknown = false, certified = f.contract.declared && f.locally_closed_orbit;
    if (!f.contract.declared) p.notes.push_back("no count contract: lim inf and lim sup read off the window tail");
    for (auto m : p.depths) {
        Path alpha = segment(g, lim.z, 0, static_cast<std::size_t>(m));
        auto lz = count_shift_class_in_cylinder(an, lim.z, alpha);
        std::vector<ClassCount> row;
        for (const auto& x : members) row.push_back(count_shift_class_in_cylinder(an, x, alpha));

        // indices in the periodic regime (contract) or the second half of the window
        std::size_t from = p.indices.size() / 2;
        if (f.contract.declared) {
            std::int64_t settle = m + f.contract.settle;
            from = static_cast<std::size_t>(std::max<std::int64_t>(0, settle - f.first_index));
            if (from + 2 * static_cast<std::size_t>(f.contract.period) > p.indices.size()) {
                certified = false;
                p.notes.push_back("window too short for the count contract at m = " + std::to_string(m));
                from = std::min(from, p.indices.size() - 1);
            }
        }
        std::optional<std::int64_t> lo, hi;
        for (std::size_t i = from; i < row.size(); ++i) {
            if (!row[i].finite()) {
                unknown = true;
                continue;
            }
            lo = lo ? std::min(*lo, row[i].value) : row[i].value;
            hi = hi ? std::max(*hi, row[i].value) : row[i].value;
            auto per = static_cast<std::size_t>(f.contract.period);
            if (f.contract.declared && i + per < row.size() && row[i + per].finite() &&
                row[i + per].value != row[i].value) {
                certified = false;
                p.notes.push_back("counts break the declared period at m = " + std::to_string(m) +
                                  ", n = " + std::to_string(p.indices[i]));
            }
        }
        if (!lz.finite() || lz.value == 0 || !lo) {
            unknown = true;
        } else {
            Ratio rl(*lo, lz.value), ru(*hi, lz.value);
            p.lower = p.lower ? std::min(*p.lower, rl) : rl;
            p.upper = p.upper ? std::min(*p.upper, ru) : ru;
        }
        p.lambda_z.push_back(lz);
        p.table.push_back(std::move(row));
    }
    if (unknown) {
        p.lower.reset();
        p.upper.reset();
        p.status = "Unknown";
    } else {
        p.status = certified ? "Certified" : "Empirical";
    }
    return p;
}

bool WitnessReport::passed() const {
    return std::all_of(conditions.begin(), conditions.end(), [](const auto& c) { return c.passed; });
}

bool WitnessReport::certified() const {
    return std::all_of(conditions.begin(), conditions.end(), [](const auto& c) { return c.status == "Certified"; });
}

json WitnessReport::to_json() const {
    json conds = json::array();
    for (const auto& c : conditions)
        conds.push_back({{"condition", c.condition}, {"passed", c.passed}, {"status", c.status}, {"detail", c.detail}});
    return {{"family", family}, {"limit", limit}, {"conditions", conds}, {"passed", passed()},
            {"certified", certified()}};
}

namespace {

std::vector<std::int64_t> window_indices(const SequenceFamily& f, const WitnessOptions& opt) {
    if (opt.cylinders < 1 || opt.window < 2) throw input_error("cylinders must be positive and the window at least 2");
    std::vector<std::int64_t> out;
    for (std::int64_t n = f.first_index; n < f.first_index + opt.window; ++n) out.push_back(n);
    return out;
}

// length of the common prefix of x and y, capped
std::size_t agreement(const Graph& g, const Path& x, const Path& y, std::size_t cap) {
    if (x.start != y.start) return 0;
    auto a = x.unroll(g, cap), b = y.unroll(g, cap);
    std::size_t i = 0;
    while (i < a.size() && i < b.size() && a[i] == b[i]) ++i;
    return i;
}

bool strictly_increasing(const std::vector<std::int64_t>& v) {
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] <= v[i - 1]) return false;
    return true;
}

}  // namespace

std::vector<BasisSet> default_escape_cover(const SequenceFamily& f, const FamilyLimit& lim,
                                           const std::vector<WitnessFormula>& gammas, const WitnessOptions& opt) {
    const auto& g = *f.graph;
    std::vector<BasisSet> cover;
    for (std::int64_t m = 0; m < opt.cylinders; ++m) {
        Path a = segment(g, lim.z, 0, static_cast<std::size_t>(m));
        cover.push_back({a, a});
    }
    for (std::int64_t n = f.first_index; n < f.first_index + std::min<std::int64_t>(3, opt.window); ++n)
        for (std::size_t j = 0; j < gammas.size(); ++j)
            for (std::size_t i = 0; i < j; ++i) {
                auto p = compose(gammas[j](n), inverse(gammas[i](n)));
                auto d = divergence_depth(g, p);
                cover.push_back({segment(g, p.x, 0, static_cast<std::size_t>(d)),
                                 segment(g, p.y, 0, static_cast<std::size_t>(d - p.lag))});
            }
    return cover;
}

WitnessReport k_times_witness_check(const SequenceFamily& f, const FamilyLimit& lim,
                                    const std::vector<WitnessFormula>& gammas, const WitnessOptions& opt,
                                    std::vector<BasisSet> cover) {
    const auto& g = *f.graph;
    if (gammas.empty()) throw input_error("no witnesses given");
    const auto idx = window_indices(f, opt);
    if (cover.empty()) cover = default_escape_cover(f, lim, gammas, opt);
    for (const auto& z : cover)
        if (!z.alpha.is_finite() || !z.beta.is_finite()) throw input_error("escape cover needs finite paths");

    // table[i][t] = gamma_{idx[t]}^{(i)}
    std::vector<std::vector<GroupoidElement>> table(gammas.size());
    for (std::size_t i = 0; i < gammas.size(); ++i)
        for (auto n : idx) {
            try {
                table[i].push_back(gammas[i](n));
            } catch (const input_error& e) {
                throw input_error("malformed witness " + std::to_string(i + 1) + " at n = " + std::to_string(n) +
                                  ": " + e.what());
            }
        }

    WitnessReport rep;
    rep.family = f.name;
    rep.limit = lim.name;
    const std::string closed = f.closed_form_witnesses ? "Certified" : "Empirical";

    {  // (i) s(gamma_n) = x_n
        ConditionVerdict c{"i", true, closed, json::object()};
        for (std::size_t t = 0; t < idx.size(); ++t) {
            Path x = normalize(g, f.member(idx[t]));
            for (std::size_t i = 0; i < gammas.size(); ++i)
                if (table[i][t].y != x) {
                    c.passed = false;
                    c.detail = {{"witness", i + 1}, {"n", idx[t]}};
                }
        }
        if (c.passed) c.detail = {{"checked", idx.size() * gammas.size()}};
        rep.conditions.push_back(c);
    }

    {  // (ii) r(gamma_n) -> z
        ConditionVerdict c{"ii", true, closed, json::object()};
        json entry = json::array();
        for (std::size_t i = 0; i < gammas.size(); ++i) {
            std::vector<std::int64_t> depth;
            for (const auto& e : table[i])
                depth.push_back(static_cast<std::int64_t>(agreement(g, e.x, lim.z, idx.size() + 64)));
            json per = json::array();
            for (std::int64_t m = 0; m < opt.cylinders; ++m) {
                // least window index after which r(gamma_n) stays in Z(z(0, m))
                std::optional<std::int64_t> from;
                for (std::size_t t = idx.size(); t-- > 0;) {
                    if (depth[t] < m) break;
                    from = idx[t];
                }
                if (!from || *from > idx[idx.size() / 2]) {
                    c.passed = false;
                    per.push_back(nullptr);
                } else {
                    per.push_back(*from);
                }
            }
            if (!strictly_increasing(depth)) c.status = "Empirical";
            entry.push_back({{"witness", i + 1}, {"enters_from", per}});
        }
        c.detail = {{"cylinders", entry}};
        rep.conditions.push_back(c);
    }

    {  // (iii) gamma^(j) (gamma^(i))^-1 -> infinity
        ConditionVerdict c{"iii", true, closed, json::object()};
        json pairs = json::array();
        for (std::size_t j = 0; j < gammas.size(); ++j)
            for (std::size_t i = 0; i < j; ++i) {
                std::vector<std::int64_t> depth;
                std::vector<GroupoidElement> prod;
                for (std::size_t t = 0; t < idx.size(); ++t) {
                    prod.push_back(compose(table[j][t], inverse(table[i][t])));
                    depth.push_back(divergence_depth(g, prod.back()));
                }
                bool grows = strictly_increasing(depth);
                json stuck = json::array();
                for (std::size_t b = 0; b < cover.size(); ++b) {
                    std::optional<std::size_t> last;
                    for (std::size_t t = 0; t < idx.size(); ++t)
                        if (basis_member(g, prod[t], cover[b])) last = t;
                    // members must stop in the first half of the window
                    if (last && *last >= idx.size() / 2) {
                        c.passed = false;
                        stuck.push_back({{"set", basis_json(g, cover[b])}, {"last_member", idx[*last]}});
                    } else if (last && !grows) {
                        c.status = "Empirical";
                    }
                }
                if (!grows) c.status = "Empirical";
                json p = {{"pair", {i + 1, j + 1}}, {"divergence_grows", grows}};
                if (!stuck.empty()) p["not_escaping"] = stuck;
                pairs.push_back(p);
            }
        c.detail = {{"cover_size", cover.size()}, {"pairs", pairs}};
        rep.conditions.push_back(c);
    }
    return rep;
}

}  // namespace ckgraph
