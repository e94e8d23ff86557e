#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <boost/rational.hpp>

#include "ckgraph/kgraph.hpp"

namespace ckgraph {

using Rational = boost::rational<std::int64_t>;

// Dense square matrix over the rationals. Adjoint is the transpose.
class Matrix {
public:
    Matrix() = default;
    explicit Matrix(int n) : n_(n), a_(static_cast<std::size_t>(n) * n, Rational(0)) {}
    static Matrix identity(int n);
    static Matrix unit(int n, int i, int j);  // E_ij

    int dim() const { return n_; }
    Rational& at(int i, int j) { return a_[static_cast<std::size_t>(i) * n_ + j]; }
    const Rational& at(int i, int j) const { return a_[static_cast<std::size_t>(i) * n_ + j]; }
    bool is_zero() const;

    Matrix transpose() const;
    Matrix operator*(const Matrix& b) const;
    Matrix operator+(const Matrix& b) const;
    Matrix operator-(const Matrix& b) const;
    Matrix scaled(const Rational& c) const;
    friend bool operator==(const Matrix&, const Matrix&) = default;

    json to_json() const;  // rows of "p/q" strings

private:
    int n_ = 0;
    std::vector<Rational> a_;
};

// Matrices for the vertices and edges of a graph, by name.
struct CKFamily {
    int dim = 0;
    std::map<std::string, Matrix> vertex;
    std::map<std::string, Matrix> edge;
};

struct Violation {
    std::string relation;  // projection, CK2, CK(i), CK(ii), CK3, CK4
    json where;
    Matrix residual;
};

struct ViolationReport {
    std::vector<Violation> violations;
    std::int64_t relations_checked = 0;

    bool ok() const { return violations.empty(); }
    bool violates(const std::string& relation) const;
    json to_json() const;
};

// Checks a finite graph or k-graph family. k = 1 uses the relation names
// CK(i) and CK(ii); k >= 2 uses CK2, CK3 and CK4. Throws input_error on a
// missing generator or dimension mismatch.
ViolationReport ck_verify(const KGraph& g, const CKFamily& f);
ViolationReport ck_verify(const DirectedGraph& g, const CKFamily& f);

// t_lambda for a morphism, multiplied out from the edge matrices
Matrix morphism_matrix(const KGraph& g, const CKFamily& f, const Morphism& m);

// single vertex with one loop, P = S = (1)
CKFamily single_loop_family();
DirectedGraph single_loop_graph();
// v <- u through edges f and g, acting on three dimensions
CKFamily parallel_edges_family();
DirectedGraph parallel_edges_graph();
// the boundary path representation on l^2 of the boundary paths
CKFamily ck_boundary_family(const KGraph& g);

enum class Mutation { scale, zero, transpose, bump };
// the family with one generator changed; no-op mutations return the input
CKFamily mutate(const CKFamily& f, const std::string& generator, Mutation m);

}  // namespace ckgraph
