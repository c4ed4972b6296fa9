#pragma once

#include "bratteli/rational.hpp"
#include "bratteli/relation_algebra.hpp"

#include <cstdint>

namespace bratteli {

/// The data (X, V, E, V_) of an inclusion C*(R) in C*(R_): surjections
/// r : X -> V, s : E -> V, r : E -> V_. Derived objects:
///
///   X_  = {(x, a) : r(x) = s(a)}             points of the big algebra
///   R   = {(x, y) : r(x) = r(y)}             on X
///   R_  = {(xa, yb) : r(a) = r(b)}           on X_
///   R'  = {(a, b) : s(a) = s(b), r(a) = r(b)} on E
///   R1  = {(xa, yb) : a = b}                 on X_ (pinching target)
///
/// X_ is ordered lexicographically by (x, a) and named "x.a".
class InclusionGraph {
public:
    InclusionGraph(std::vector<std::string> X, std::vector<std::string> V, std::vector<std::string> E,
                   std::vector<std::string> V_, std::vector<int> x_to_v, std::vector<int> edge_src,
                   std::vector<int> edge_rng);

    int point_count() const { return static_cast<int>(x_to_v_.size()); }
    int edge_count() const { return static_cast<int>(edge_src_.size()); }
    int vertex_count() const { return static_cast<int>(vertices_.size()); }
    int target_count() const { return static_cast<int>(targets_.size()); }

    const std::string& edge_name(int c) const { return edges_[c]; }
    const std::string& vertex_name(int v) const { return vertices_[v]; }
    int vertex_of(int x) const { return x_to_v_[x]; }
    int src(int c) const { return edge_src_[c]; }
    int rng(int c) const { return edge_rng_[c]; }

    /// Index in X_ of (x, a), or -1 if r(x) != s(a).
    int lifted(int x, int a) const;
    std::pair<int, int> lifted_at(int i) const { return lifted_[i]; }
    int lifted_count() const { return static_cast<int>(lifted_.size()); }

    const RelationPtr& small() const { return R_; }
    const RelationPtr& big() const { return Rbig_; }
    const RelationPtr& edge_relation() const { return Rprime_; }
    const RelationPtr& pinched() const { return R1_; }

private:
    std::vector<std::string> vertices_, edges_, targets_;
    std::vector<int> x_to_v_, edge_src_, edge_rng_;
    std::vector<std::pair<int, int>> lifted_;
    std::vector<std::vector<int>> lifted_index_;
    RelationPtr R_, Rbig_, Rprime_, R1_;
};

/// j(f)(xa, yb) = f(x, y) if a = b, else 0. Unital injective *-homomorphism.
AlgebraElement include_j(const InclusionGraph& g, const AlgebraElement& f);

/// k(h)(xa, yb) = h(a, b) if x = y, else 0. Its image is the relative
/// commutant of j(C*(R)) in C*(R_).
AlgebraElement commutant_embed_k(const InclusionGraph& g, const AlgebraElement& h);

/// A transition probability on the graph's edges together with the graph.
/// Construction enforces p(c) > 0 and sum_{s(c) = v} p(c) = 1 exactly.
class ModelExpectation {
public:
    ModelExpectation(InclusionGraph graph, std::vector<Rational> p);
    /// Skips the positivity/row checks (shape is still checked). Only for
    /// exercising the axiom checker on degenerate input.
    static ModelExpectation unchecked(InclusionGraph graph, std::vector<Rational> p);

    const InclusionGraph& graph() const { return graph_; }
    const std::vector<Rational>& p() const { return p_; }

private:
    ModelExpectation(InclusionGraph graph, std::vector<Rational> p, bool check);
    InclusionGraph graph_;
    std::vector<Rational> p_;
};

/// Q(f_)(x, y) = sum over c with s(c) = r(x) of p(c) f_(xc, yc).
AlgebraElement model_expectation(const ModelExpectation& me, const AlgebraElement& f);

/// j o Q as a LinearMap on C*(R_).
LinearMap expectation_map(const ModelExpectation& me);

/// j applied to the canonical matrix units of C*(R).
std::vector<AlgebraElement> included_basis(const InclusionGraph& g);

struct ExpectationCheck {
    std::string name;
    bool passed = false;
    double defect = 0; // worst observed deviation (or minimum eigenvalue for definiteness checks)
};

struct ExpectationReport {
    std::vector<ExpectationCheck> checks;
    bool all_pass() const;
    const ExpectationCheck* find(const std::string& name) const;
};

/// Checks that Q (a linear map on C*(ambient)) is a faithful conditional
/// expectation onto span(subalgebra):
///   "unital", "idempotent", "range in subalgebra", "identity on subalgebra",
///   "bimodular" (Q(m f) = m Q(f) and Q(f m) = Q(f) m for basis m, as operator
///   identities), "positive" (Q(f* f) has PSD blocks for seeded random f),
///   "faithful" (per class, the Gram form G(v, v') = Tr Q(e(v, v')) is
///   positive definite, i.e. Tr Q(f* f) > 0 for f != 0).
ExpectationReport verify_expectation(const RelationPtr& ambient, const LinearMap& Q,
                                     const std::vector<AlgebraElement>& subalgebra, double tol = kAlgebraTolerance,
                                     std::uint64_t seed = 0x5eed);

/// Reads p off a faithful bimodular expectation through Q(eps(c)) = p(c) e(s(c))
/// with eps(c) = sum_{r(x) = s(c)} e(xc, xc). The scalar is converted to the
/// closest rational with denominator <= max_den, and the result must form an
/// exact transition probability. DomainError("not proportional") when Q(eps(c))
/// is not a multiple of e(s(c)); DomainError("not faithful") when p(c) <= 0.
std::vector<Rational> extract_transition(const LinearMap& Q, const InclusionGraph& g, unsigned long max_den = 1000000);

/// Q2(f_)(xa, yb) = f_(xa, yb) if a = b, else 0, as an element over R1.
AlgebraElement pinch(const InclusionGraph& g, const AlgebraElement& f);
/// sum_c eps(c) f_ eps(c) computed by multiplication in C*(R_).
AlgebraElement pinch_by_projections(const InclusionGraph& g, const AlgebraElement& f);
/// eps(c) = sum_{r(x) = s(c)} e(xc, xc) in C*(R_).
AlgebraElement edge_projection(const InclusionGraph& g, int c);
/// Q1(f)(x, y) = sum_{s(c) = r(x)} p(c) f(xc, yc) for f over R1.
AlgebraElement average(const ModelExpectation& me, const AlgebraElement& f1);

struct PinchAverage {
    LinearMap pinching;  // C*(R_) -> C*(R1)
    LinearMap averaging; // C*(R1) -> C*(R)
};

/// Q = Q1 o Q2: a pinching onto C*(R1) followed by slicing and averaging.
PinchAverage pinch_average_decompose(const ModelExpectation& me);

} // namespace bratteli
