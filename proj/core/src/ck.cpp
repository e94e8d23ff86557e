#include "ckgraph/ck.hpp"

namespace ckgraph {

Matrix Matrix::identity(int n) {
    Matrix m(n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

Matrix Matrix::unit(int n, int i, int j) {
    Matrix m(n);
    m.at(i, j) = 1;
    return m;
}

bool Matrix::is_zero() const {
    for (const auto& x : a_)
        if (x.numerator() != 0) return false;
    return true;
}

Matrix Matrix::transpose() const {
    Matrix t(n_);
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) t.at(j, i) = at(i, j);
    return t;
}

Matrix Matrix::operator*(const Matrix& b) const {
    Matrix c(n_);
    for (int i = 0; i < n_; ++i)
        for (int l = 0; l < n_; ++l) {
            if (at(i, l).numerator() == 0) continue;
            for (int j = 0; j < n_; ++j) c.at(i, j) += at(i, l) * b.at(l, j);
        }
    return c;
}

Matrix Matrix::operator+(const Matrix& b) const {
    Matrix c = *this;
    for (std::size_t i = 0; i < a_.size(); ++i) c.a_[i] += b.a_[i];
    return c;
}

Matrix Matrix::operator-(const Matrix& b) const {
    Matrix c = *this;
    for (std::size_t i = 0; i < a_.size(); ++i) c.a_[i] -= b.a_[i];
    return c;
}

Matrix Matrix::scaled(const Rational& c) const {
    Matrix m = *this;
    for (auto& x : m.a_) x *= c;
    return m;
}

json Matrix::to_json() const {
    json rows = json::array();
    for (int i = 0; i < n_; ++i) {
        json row = json::array();
        for (int j = 0; j < n_; ++j) {
            const auto& x = at(i, j);
            row.push_back(x.denominator() == 1 ? std::to_string(x.numerator())
                                               : std::to_string(x.numerator()) + "/" + std::to_string(x.denominator()));
        }
        rows.push_back(row);
    }
    return rows;
}

bool ViolationReport::violates(const std::string& relation) const {
    for (const auto& v : violations)
        if (v.relation == relation) return true;
    return false;
}

json ViolationReport::to_json() const {
    json vs = json::array();
    for (const auto& v : violations) vs.push_back({{"relation", v.relation}, {"where", v.where}, {"residual", v.residual.to_json()}});
    return {{"ok", ok()}, {"relations_checked", relations_checked}, {"violations", vs}};
}

namespace {

struct Checker {
    const KGraph& g;
    const CKFamily& f;
    ViolationReport rep;

    const Matrix& P(const VRef& v) const { return f.vertex.at(g.skeleton().vertex_name(v)); }
    const Matrix& S(const ERef& e) const { return f.edge.at(g.skeleton().edge_name(e)); }

    void expect(const std::string& rel, json where, const Matrix& lhs, const Matrix& rhs) {
        ++rep.relations_checked;
        Matrix r = lhs - rhs;
        if (!r.is_zero()) rep.violations.push_back({rel, std::move(where), r});
    }
};

}  // namespace

Matrix morphism_matrix(const KGraph& g, const CKFamily& f, const Morphism& m) {
    Matrix out = f.vertex.at(g.skeleton().vertex_name(m.start));
    for (const auto& e : m.edges) out = out * f.edge.at(g.skeleton().edge_name(e));
    return out;
}

ViolationReport ck_verify(const KGraph& g, const CKFamily& f) {
    const auto* sk = g.finite();
    if (!sk) throw input_error("ck_verify needs a finite graph");
    for (const auto& v : sk->all_vertices()) {
        auto it = f.vertex.find(sk->vertex_name(v));
        if (it == f.vertex.end()) throw input_error("family has no matrix for vertex '" + sk->vertex_name(v) + "'");
        if (it->second.dim() != f.dim) throw input_error("dimension mismatch at vertex '" + sk->vertex_name(v) + "'");
    }
    for (const auto& e : sk->all_edges()) {
        auto it = f.edge.find(sk->edge_name(e));
        if (it == f.edge.end()) throw input_error("family has no matrix for edge '" + sk->edge_name(e) + "'");
        if (it->second.dim() != f.dim) throw input_error("dimension mismatch at edge '" + sk->edge_name(e) + "'");
    }

    Checker c{g, f, {}};
    const bool one = g.k() == 1;
    auto vs = sk->all_vertices();
    auto es = sk->all_edges();
    auto vn = [&](const VRef& v) { return sk->vertex_name(v); };
    auto en = [&](const ERef& e) { return sk->edge_name(e); };

    for (const auto& v : vs) {
        const Matrix& p = c.P(v);
        c.expect("projection", {{"vertex", vn(v)}, {"law", "idempotent"}}, p * p, p);
        c.expect("projection", {{"vertex", vn(v)}, {"law", "self_adjoint"}}, p.transpose(), p);
        for (const auto& w : vs)
            if (v < w) c.expect("projection", {{"vertices", {vn(v), vn(w)}}, {"law", "orthogonal"}}, p * c.P(w), Matrix(f.dim));
    }
    for (const auto& e : es) {
        const Matrix& s = c.S(e);
        json at = {{"edge", en(e)}};
        c.expect("CK2", at, c.P(sk->range(e)) * s, s);
        c.expect("CK2", at, s * c.P(sk->source(e)), s);
        c.expect(one ? "CK(i)" : "CK3", at, s.transpose() * s, c.P(sk->source(e)));
    }
    for (const auto& e : es)
        for (const auto& h : es) {
            if (g.color(e) == g.color(h) || !(sk->source(e) == sk->range(h))) continue;
            auto fl = g.flip(e, h);
            if (!fl) continue;
            c.expect("CK2", {{"square", {en(e), en(h), en(fl->first), en(fl->second)}}}, c.S(e) * c.S(h),
                     c.S(fl->first) * c.S(fl->second));
        }
    // distinct edges with a common range
    for (const auto& e : es)
        for (const auto& h : es) {
            if (e == h || !(sk->range(e) == sk->range(h))) continue;
            Morphism me{sk->range(e), {e}}, mh{sk->range(h), {h}};
            Matrix rhs(f.dim);
            for (const auto& [a, b] : lambda_min(g, me, mh))
                rhs = rhs + morphism_matrix(g, f, a) * morphism_matrix(g, f, b).transpose();
            c.expect(one ? "CK(i)" : "CK3", {{"pair", {en(e), en(h)}}}, c.S(e).transpose() * c.S(h), rhs);
        }

    if (one) {
        for (const auto& v : vs) {
            if (g.total_source(v)) continue;
            Matrix sum(f.dim);
            for (const auto& e : sk->range_edges(v)) sum = sum + c.S(e) * c.S(e).transpose();
            c.expect("CK(ii)", {{"vertex", vn(v)}}, c.P(v), sum);
        }
        return c.rep;
    }

    Degree ones(static_cast<std::size_t>(g.k()), 1);
    for (const auto& v : vs) {
        std::vector<Morphism> cand;
        for (const auto& mu : enumerate_up_to(g, v, ones))
            if (!mu.edges.empty()) cand.push_back(mu);
        std::vector<std::vector<Morphism>> sets;
        if (cand.size() <= 10) {
            for (std::uint32_t mask = 1; mask < (1u << cand.size()); ++mask) {
                std::vector<Morphism> D;
                for (std::size_t i = 0; i < cand.size(); ++i)
                    if (mask & (1u << i)) D.push_back(cand[i]);
                sets.push_back(std::move(D));
            }
        } else {
            for (int i = 0; i < g.k(); ++i) sets.push_back(enumerate_morphisms(g, v, unit_degree(g.k(), i)));
        }
        for (const auto& D : sets) {
            if (D.empty() || !is_exhaustive(g, v, D).is_yes()) continue;
            Matrix prod = c.P(v);
            json names = json::array();
            for (const auto& mu : D) {
                Matrix t = morphism_matrix(g, f, mu);
                prod = prod * (c.P(v) - t * t.transpose());
                names.push_back(to_literal(g, mu));
            }
            c.expect("CK4", {{"vertex", vn(v)}, {"D", names}}, prod, Matrix(f.dim));
        }
    }
    return c.rep;
}

ViolationReport ck_verify(const DirectedGraph& g, const CKFamily& f) { return ck_verify(KGraph::from_digraph(g), f); }

CKFamily single_loop_family() {
    CKFamily f;
    f.dim = 1;
    f.vertex["v"] = Matrix::identity(1);
    f.edge["e"] = Matrix::identity(1);
    return f;
}

DirectedGraph single_loop_graph() {
    DirectedGraph g;
    int v = g.add_vertex("v");
    g.add_edge("e", v, v);
    return g;
}

DirectedGraph parallel_edges_graph() {
    DirectedGraph g;
    int u = g.add_vertex("u"), v = g.add_vertex("v");
    g.add_edge("f", v, u);
    g.add_edge("g", v, u);
    return g;
}

CKFamily parallel_edges_family() {
    CKFamily f;
    f.dim = 3;
    f.vertex["u"] = Matrix::unit(3, 0, 0);
    f.vertex["v"] = Matrix::unit(3, 1, 1) + Matrix::unit(3, 2, 2);
    f.edge["f"] = Matrix::unit(3, 1, 0);
    f.edge["g"] = Matrix::unit(3, 2, 0);
    return f;
}

CKFamily ck_boundary_family(const KGraph& g) {
    const auto* sk = g.finite();
    if (!sk) throw input_error("boundary representation needs a finite k-graph");
    std::vector<KPath> basis;
    for (const auto& v : sk->all_vertices()) {
        auto b = boundary_candidates(g, v, 4);
        for (const auto& x : b)
            if (x.tail) throw input_error("boundary representation needs a finite boundary path space");
        basis.insert(basis.end(), b.begin(), b.end());
    }
    const int n = static_cast<int>(basis.size());
    auto index = [&](const Morphism& m) {
        for (int i = 0; i < n; ++i)
            if (basis[static_cast<std::size_t>(i)].prefix == m) return i;
        throw std::logic_error("boundary path outside the basis");
    };
    CKFamily f;
    f.dim = n;
    for (const auto& v : sk->all_vertices()) {
        Matrix p(n);
        for (int i = 0; i < n; ++i)
            if (basis[static_cast<std::size_t>(i)].range() == v) p.at(i, i) = 1;
        f.vertex[sk->vertex_name(v)] = p;
    }
    for (const auto& e : sk->all_edges()) {
        Matrix s(n);
        Morphism me{sk->range(e), {e}};
        for (int i = 0; i < n; ++i) {
            const auto& x = basis[static_cast<std::size_t>(i)].prefix;
            if (!(x.start == sk->source(e))) continue;
            s.at(index(compose(g, me, x)), i) = 1;
        }
        f.edge[sk->edge_name(e)] = s;
    }
    return f;
}

CKFamily mutate(const CKFamily& f, const std::string& generator, Mutation m) {
    CKFamily out = f;
    Matrix* target = nullptr;
    if (auto it = out.vertex.find(generator); it != out.vertex.end()) target = &it->second;
    if (auto it = out.edge.find(generator); it != out.edge.end()) target = &it->second;
    if (!target) throw input_error("no generator '" + generator + "'");
    switch (m) {
        case Mutation::scale: *target = target->scaled(2); break;
        case Mutation::zero: *target = Matrix(f.dim); break;
        case Mutation::transpose: *target = target->transpose(); break;
        case Mutation::bump: target->at(0, 0) += 1; break;
    }
    return out;
}

}  // namespace ckgraph
