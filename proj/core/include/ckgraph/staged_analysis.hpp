#pragma once

#include <optional>
#include <vector>

#include "ckgraph/paths.hpp"
#include "ckgraph/staged.hpp"

namespace ckgraph {

// Count of paths in a shift class, possibly infinite.
struct ClassCount {
    enum class Kind { finite, infinite, unknown };
    Kind kind = Kind::finite;
    std::int64_t value = 0;
    json certificate = json::object();
    std::string reason;

    bool finite() const { return kind == Kind::finite; }
    bool infinite() const { return kind == Kind::infinite; }
    json to_json() const;
};

struct SplitScan {
    bool infinitely_many = false;
    bool exhausted = false;
    std::int64_t finite_pairs = 0;  // pairs seen before the periodic regime
    json witness = json::object();
};

// Exact analysis of a staged graph by column scans. The column structure
// repeats with the template period, so reach sets become eventually periodic.
class StagedAnalyzer {
public:
    explicit StagedAnalyzer(const StagedGraph& g, std::int64_t budget = 1 << 16);

    const StagedGraph& graph() const { return g_; }

    // witness of a cycle inside one column or among sporadic vertices
    const std::optional<json>& vertical_cycle() const { return vertical_; }
    // a quotient node with two distinct return loops; rays through it branch
    const std::optional<json>& branching() const { return branching_; }

    // one lift per ray class; empty when branching
    const std::vector<Path>& ray_classes() const { return rays_; }
    std::vector<VRef> representatives() const;
    // tracks that carry a hair or are sources at some phase
    bool has_hairs() const { return !g_.spec().hairs.empty(); }
    std::optional<VRef> some_source() const;

    // number of paths in w E^{<=inf} that are shift equivalent to x
    ClassCount count(const VRef& w, const Path& x) const;

    // splitting pairs of E|_{w E^{<=inf}}
    SplitScan splitting(const VRef& w) const;

    // sup over hair and source classes of the class counts from w
    ClassCount boundary_sup(const VRef& w) const;

    // reach of w eventually holds every track on a quotient cycle, at every
    // column; then every infinite path is reached from w
    bool covers_recurrent(const VRef& w) const;

    // finite paths from w to u
    ClassCount paths_between(const VRef& w, const VRef& u) const;

private:
    struct Scan;
    Scan start_scan(const VRef& w) const;
    void advance(Scan& s) const;

    ClassCount ray_count(const VRef& w, const Path& x) const;

    const StagedGraph& g_;
    std::int64_t budget_;
    int T_ = 0;
    std::int64_t P_ = 1;
    // per source phase: template indices landing in a column with that phase
    std::vector<std::vector<int>> into_delta1_, into_delta0_;
    std::vector<std::vector<int>> topo_;  // per phase, track order for delta-0 closure
    std::vector<std::int64_t> sporadic_order_;
    std::optional<json> vertical_, branching_;
    std::vector<Path> rays_;
    std::vector<char> recurrent_;  // per (track, phase)
};

// checked arithmetic helpers
bool add_overflows(std::int64_t a, std::int64_t b, std::int64_t& out);
bool mul_overflows(std::int64_t a, std::int64_t b, std::int64_t& out);

}  // namespace ckgraph
