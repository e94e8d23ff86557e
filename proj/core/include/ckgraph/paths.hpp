#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ckgraph/graph.hpp"

namespace ckgraph {

// Periodic continuation B T(B) T^2(B) ... where T is applied once per
// repetition of the block B. Finite graphs always use the zero shift.
struct Tail {
    std::vector<ERef> block;
    Shift shift;

    friend bool operator==(const Tail&, const Tail&) = default;
};

// A path x = head . tail starting at `start` = r(x). Without a tail the
// path is finite; an empty head with no tail is the vertex `start`.
// Edges are indexed from 0, so x_i in the usual 1-based notation is edge(i-1)
// and x(n) is vertex(n).
struct Path {
    VRef start;
    std::vector<ERef> head;
    std::optional<Tail> tail;

    bool is_finite() const { return !tail.has_value(); }
    std::size_t head_length() const { return head.size(); }
    // number of edges; only meaningful for finite paths
    std::size_t length() const { return head.size(); }

    ERef edge(const Graph& g, std::size_t i) const;
    VRef vertex(const Graph& g, std::size_t n) const;
    VRef range() const { return start; }
    VRef source(const Graph& g) const;  // finite paths only
    std::vector<ERef> unroll(const Graph& g, std::size_t n) const;  // first n edges

    friend bool operator==(const Path&, const Path&) = default;
};

Path vertex_path(const VRef& v);
Path finite_path(const Graph& g, std::vector<ERef> edges);
// throws input_error when the pieces do not compose
Path infinite_path(const Graph& g, VRef start, std::vector<ERef> head, Tail tail);

// composability and validity of every edge, including one tail period
bool well_formed(const Graph& g, const Path& x);

// Shortest head with a primitive block; equal paths have equal normal forms.
Path normalize(const Graph& g, Path x);

// x(m, n): edges x_{m+1} ... x_n, or the vertex x(m) when m == n.
Path segment(const Graph& g, const Path& x, std::size_t m, std::size_t n);

// sigma^n(x), normalized
Path shift(const Graph& g, const Path& x, std::size_t n);

// Concatenation alpha . x with s(alpha) = r(x).
Path concat(const Graph& g, const Path& alpha, const Path& x);

// {n : x ~_n y}, where x ~_n y iff x_i = y_{i-n} for all large i.
struct LagSet {
    enum class Kind { empty, finite, progression };
    Kind kind = Kind::empty;
    std::vector<std::int64_t> values;  // finite
    std::int64_t a = 0, p = 0;         // progression a + p Z, 0 <= a < p

    static LagSet none() { return {}; }
    static LagSet single(std::int64_t n) { return {Kind::finite, {n}, 0, 0}; }
    static LagSet coset(std::int64_t a, std::int64_t p);

    bool empty() const { return kind == Kind::empty; }
    bool contains(std::int64_t n) const;
    std::optional<std::int64_t> any() const;
    LagSet negate() const;
    json to_json() const;

    friend bool operator==(const LagSet&, const LagSet&) = default;
};

LagSet shift_equivalent(const Graph& g, const Path& x, const Path& y);

// x in E^{<=inf}: infinite, or finite with s(x) a source
bool boundary_member(const Graph& g, const Path& x);

// Every x(n) reaches a path shift equivalent to y. Exact on finite graphs.
Decision frequently_divertable(const Graph& g, const Path& x, const Path& y, std::int64_t budget = 4096);

// Path literals: "e1 e2", "e1 e2 ; c1 c2", "v ; c1" (head given by a
// start vertex), "e1 ; @ray" or "; @port" on staged graphs.
Path parse_path(const Graph& g, const std::string& literal, std::optional<VRef> start = std::nullopt);
std::string to_literal(const Graph& g, const Path& x);

json path_json(const Graph& g, const Path& x);

}  // namespace ckgraph
