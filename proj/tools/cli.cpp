#include "cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <variant>

#include <ckgraph/classify.hpp>
#include <ckgraph/desourcify.hpp>
#include <ckgraph/families.hpp>
#include <ckgraph/groupoid.hpp>
#include <ckgraph/io.hpp>
#include <ckgraph/kclassify.hpp>
#include <ckgraph/kgraph.hpp>
#include <ckgraph/paths.hpp>

namespace ckgraph::cli {

namespace {

constexpr const char* kVersion = "0.1.0";

// a loaded input: directed (finite or staged) or higher rank
struct Input {
    std::string name;
    std::variant<std::monostate, AnyGraph, KGraph> graph;
    std::map<std::string, std::string> paths;

    const Graph* digraph() const {
        if (auto* a = std::get_if<AnyGraph>(&graph)) return &as_graph(*a);
        return nullptr;
    }
    const KGraph* kgraph() const { return std::get_if<KGraph>(&graph); }
};

Input load_input(const std::string& arg, const std::string& m) {
    Input in;
    in.name = arg;
    if (std::filesystem::exists(arg)) {
        json j = read_json_file(arg);
        try {
            switch (document_kind(j)) {
                case DocumentKind::graph:
                    in.graph = AnyGraph(DirectedGraph::from_document(graph_document_from_json(j)));
                    break;
                case DocumentKind::kgraph:
                    in.graph = KGraph::from_document(kgraph_document_from_json(j));
                    break;
                case DocumentKind::column_template: {
                    auto t = template_from_json(j);
                    if (t.k > 0)
                        in.graph = KGraph::from_template(std::move(t));
                    else
                        in.graph = AnyGraph(StagedGraph(std::move(t)));
                    break;
                }
            }
        } catch (const json::exception& e) {
            throw input_error("'" + arg + "': " + e.what());
        }
        if (j.contains("paths") && j.at("paths").is_object())
            for (const auto& [k, v] : j.at("paths").items())
                if (v.is_string()) in.paths[k] = v.get<std::string>();
        return in;
    }
    std::string base = arg.rfind("thesis:", 0) == 0 ? arg.substr(7) : arg;
    for (const auto& n : kgraph_family_names())
        if (n == base) {
            auto f = kgraph_family(base, m.empty() ? Degree{} : parse_degree(m));
            in.graph = f.graph;
            in.paths = f.paths;
            return in;
        }
    auto f = digraph_family(arg);
    in.graph = f.graph;
    in.paths = f.paths;
    return in;
}

std::string path_literal(const Input& in, const std::string& s) {
    auto it = in.paths.find(s);
    return it == in.paths.end() ? s : it->second;
}

// more than half of the properties undecided
bool unknown_dominated(const ClassificationReport& r) {
    std::size_t unknown = 0;
    for (const auto& [p, d] : r.properties) unknown += d.is_unknown();
    return 2 * unknown > r.properties.size();
}

json meta() { return {{"tool", "ckgraph"}, {"version", kVersion}}; }

struct Common {
    std::string out;
    std::int64_t budget = 1 << 16;
    std::int64_t box = 2;
};

int emit(const Common& c, const std::string& command, json params, json result, int code, std::ostream& out) {
    json doc = {{"command", command}, {"parameters", std::move(params)}, {"result", std::move(result)},
                {"meta", meta()}};
    std::string text = doc.dump(2) + "\n";
    if (c.out.empty()) {
        out << text;
    } else {
        std::ofstream f(c.out);
        if (!f) throw input_error("cannot write '" + c.out + "'");
        f << text;
    }
    return code;
}

std::vector<char*> argv_of(std::vector<std::string>& args) {
    std::vector<char*> v;
    for (auto& a : args) v.push_back(a.data());
    return v;
}

}  // namespace

int run(const std::vector<std::string>& args_in, std::ostream& out, std::ostream& err) {
    CLI::App app{"Classification, path-groupoid and desourcification tools for directed and higher-rank graphs",
                 "ckgraph"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    Common c;
    auto common = [&](CLI::App* s) {
        s->add_option("--out", c.out, "write the report here instead of stdout");
        s->add_option("--budget", c.budget, "work budget for staged graphs")
            ->envname("CKGRAPH_BUDGET")
            ->capture_default_str();
    };
    auto kbox = [&](CLI::App* s) {
        s->add_option("--box", c.box, "degree box for k-graph searches")->capture_default_str();
    };

    std::string input, m, property;
    auto* cls = app.add_subcommand("classify", "classify a graph, k-graph or column template");
    cls->add_option("input", input, "JSON file or built-in name")->required();
    cls->add_option("--m", m, "degree for the omega builder, e.g. 3,2");
    cls->add_option("--property", property, "report only this property");
    common(cls);
    kbox(cls);

    std::string px, py;
    auto* pth = app.add_subcommand("paths", "normal forms, boundary membership and shift equivalence of paths");
    pth->add_option("input", input, "JSON file or built-in name")->required();
    pth->add_option("--m", m, "degree for the omega builder");
    pth->add_option("-x,--x", px, "path literal or a named path of the input")->required();
    pth->add_option("-y,--y", py, "second path");
    common(pth);
    kbox(pth);

    auto* val = app.add_subcommand("kgraph-validate", "check the factorization property of a k-graph");
    val->add_option("input", input, "JSON file or built-in name")->required();
    val->add_option("--m", m, "degree for the omega builder");
    std::int64_t window = 4;
    val->add_option("--columns", window, "columns materialized for periodic k-graphs")->capture_default_str();
    common(val);

    std::string truncate;
    std::int64_t columns = 3;
    auto* des = app.add_subcommand("desourcify", "add heads to a directed graph or truncate a k-graph desourcification");
    des->add_option("input", input, "JSON file or built-in name")->required();
    des->add_option("--m", m, "degree for the omega builder");
    des->add_option("--truncate", truncate, "degree bound for k-graphs, e.g. 3,3");
    des->add_option("--columns", columns, "column window for periodic k-graphs")->capture_default_str();
    common(des);
    kbox(des);

    std::string family, limit;
    ProfileOptions popt;
    auto* prof = app.add_subcommand("groupoid-profile", "cylinder counts and relative multiplicity numbers");
    prof->add_option("--family", family, "thesis:2times, thesis:ktimes:<k>, thesis:ml2mu3 or thesis:nonhausdorff")
        ->required();
    prof->add_option("--limit", limit, "limit path of the family (default: first)");
    prof->add_option("--cylinders", popt.cylinders, "cylinder depths 0..cylinders-1")->capture_default_str();
    prof->add_option("--window", popt.window, "number of sequence indices")->capture_default_str();
    common(prof);

    WitnessOptions wopt;
    bool duplicate = false;
    std::string cover_file;
    auto* wit = app.add_subcommand("witness-check", "check explicit k-times convergence witnesses");
    wit->add_option("--family", family, "built-in sequence family")->required();
    wit->add_option("--limit", limit, "limit path of the family (default: first)");
    wit->add_option("--cylinders", wopt.cylinders, "cylinder depths for condition (ii)")->capture_default_str();
    wit->add_option("--window", wopt.window, "number of sequence indices")->capture_default_str();
    wit->add_flag("--duplicate", duplicate, "replace the second witness by the first");
    wit->add_option("--cover", cover_file, "JSON list of {\"alpha\", \"beta\"} path literals");
    common(wit);

    std::vector<std::string> args{"ckgraph"};
    args.insert(args.end(), args_in.begin(), args_in.end());
    auto argv = argv_of(args);
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kExitDecided : kExitInputError;
    }

    try {
        if (*cls) {
            auto in = load_input(input, m);
            ClassificationReport r;
            if (auto* k = in.kgraph())
                r = classify_kgraph(*k, c.box);
            else
                r = classify_digraph(*in.digraph(), c.budget);
            json params = {{"input", input}, {"budget", c.budget}, {"box", c.box}};
            if (!property.empty()) {
                auto it = r.properties.find(property);
                if (it == r.properties.end()) throw input_error("unknown property '" + property + "'");
                params["property"] = property;
                return emit(c, "classify", params, {{property, it->second.to_json()}},
                            it->second.is_unknown() ? kExitUnknown : kExitDecided, out);
            }
            return emit(c, "classify", params, r.to_json(), unknown_dominated(r) ? kExitUnknown : kExitDecided, out);
        }

        if (*pth) {
            auto in = load_input(input, m);
            json params = {{"input", input}, {"x", px}};
            json res;
            int code = kExitDecided;
            if (auto* k = in.kgraph()) {
                auto x = parse_kpath(*k, path_literal(in, px));
                auto b = boundary_member(*k, x, c.box);
                res = {{"x", kpath_json(*k, x)}, {"le_infty", le_infty_member(*k, x)}, {"boundary", b.to_json()}};
                if (b.is_unknown()) code = kExitUnknown;
                if (!py.empty()) {
                    auto y = parse_kpath(*k, path_literal(in, py));
                    json lags = json::array();
                    for (const auto& d : lags_in_box(*k, x, y, c.box)) lags.push_back(degree_json(d));
                    res["y"] = kpath_json(*k, y);
                    res["lags_in_box"] = lags;
                    params["y"] = py;
                }
            } else {
                const Graph& g = *in.digraph();
                auto x = parse_path(g, path_literal(in, px));
                res = {{"x", path_json(g, normalize(g, x))}, {"boundary", boundary_member(g, x)}};
                if (!py.empty()) {
                    auto y = parse_path(g, path_literal(in, py));
                    auto fd = frequently_divertable(g, x, y, c.budget);
                    res["y"] = path_json(g, normalize(g, y));
                    res["lags"] = shift_equivalent(g, x, y).to_json();
                    res["frequently_divertable"] = fd.to_json();
                    params["y"] = py;
                    if (fd.is_unknown()) code = kExitUnknown;
                }
            }
            return emit(c, "paths", params, res, code, out);
        }

        if (*val) {
            auto in = load_input(input, m);
            auto* k = in.kgraph();
            if (!k) throw input_error("'" + input + "' is not a k-graph");
            auto doc = k->is_finite() ? k->to_document() : k->window_document(window);
            auto rep = validate_kgraph(doc);
            json res = rep.to_json();
            res["k"] = k->k();
            res["vertices"] = doc.vertices.size();
            res["edges"] = doc.edges.size();
            res["squares"] = doc.squares.size();
            return emit(c, "kgraph-validate", {{"input", input}, {"columns", window}}, res, kExitDecided, out);
        }

        if (*des) {
            auto in = load_input(input, m);
            json params = {{"input", input}};
            if (auto* k = in.kgraph()) {
                if (truncate.empty()) throw input_error("k-graph desourcification needs --truncate");
                auto fr = materialize_truncation(*k, parse_degree(truncate), columns, c.box);
                params["truncate"] = truncate;
                params["columns"] = columns;
                params["box"] = c.box;
                json res = fr.to_json();
                res["valid"] = validate_kgraph(fr.doc).valid;
                return emit(c, "desourcify", params, res, kExitDecided, out);
            }
            const auto* dg = dynamic_cast<const DirectedGraph*>(in.digraph());
            if (!dg) throw input_error("heads are added to finite directed graphs only");
            auto headed = add_heads(*dg);
            auto r = classify_digraph(headed, c.budget);
            json res = {{"template", template_json(headed.spec())}, {"classification", r.to_json()}};
            return emit(c, "desourcify", params, res, unknown_dominated(r) ? kExitUnknown : kExitDecided, out);
        }

        if (*prof) {
            popt.budget = c.budget;
            auto f = sequence_family(family);
            auto p = multiplicity_profile(f, limit, popt);
            json params = {{"family", family}, {"limit", p.limit}, {"cylinders", popt.cylinders},
                           {"window", popt.window}, {"budget", c.budget}};
            return emit(c, "groupoid-profile", params, p.to_json(),
                        p.status == "Unknown" ? kExitUnknown : kExitDecided, out);
        }

        if (*wit) {
            auto f = sequence_family(family);
            const auto& lim = f.limit(limit);
            auto gammas = lim.witnesses;
            if (duplicate) {
                if (gammas.size() < 2) throw input_error("--duplicate needs two witnesses");
                gammas[1] = gammas[0];
            }
            std::vector<BasisSet> cover;
            if (!cover_file.empty()) {
                json j = read_json_file(cover_file);
                if (!j.is_array()) throw input_error("cover must be a JSON array");
                for (const auto& s : j) {
                    if (!s.is_object() || !s.contains("alpha") || !s.contains("beta") || !s["alpha"].is_string() ||
                        !s["beta"].is_string())
                        throw input_error("cover entries need string fields \"alpha\" and \"beta\"");
                    cover.push_back({parse_path(*f.graph, s["alpha"].get<std::string>()),
                                     parse_path(*f.graph, s["beta"].get<std::string>())});
                }
            }
            auto rep = k_times_witness_check(f, lim, gammas, wopt, cover);
            json params = {{"family", family}, {"limit", lim.name}, {"cylinders", wopt.cylinders},
                           {"window", wopt.window}, {"duplicate", duplicate}};
            if (!cover_file.empty()) params["cover"] = cover_file;
            return emit(c, "witness-check", params, rep.to_json(), kExitDecided, out);
        }
    } catch (const input_error& e) {
        err << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const budget_exhausted& e) {
        err << "unknown: " << e.what() << "\n";
        return kExitUnknown;
    } catch (const std::out_of_range& e) {
        err << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    return kExitInputError;
}

}  // namespace ckgraph::cli
