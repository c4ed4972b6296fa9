#pragma once

#include "bratteli/group.hpp"
#include "bratteli/harmonic.hpp"
#include "bratteli/walk.hpp"

#include <map>
#include <memory>
#include <utility>

namespace bratteli {

/// rho[n][e] is the group value of edge e in E(n); rho[0] is empty.
using EdgePotential = std::vector<std::vector<GroupElement>>;

/// Ordered product rho(e_1) ... rho(e_k) along a path.
GroupElement potential_of_path(const GroupSpec& g, const EdgePotential& rho, const FinitePath& path);

/// Windowed skew product of a diagram by a group-valued potential.
///
/// Skew vertices are pairs (v, g) and skew edges (e, g) with
///     s(e, g) = (s(e), g),    r(e, g) = (r(e), g rho(e)).
/// Level 0 is V(0) x initial window; each further level holds exactly the
/// pairs reachable in one step, so the result is a valid Bratteli diagram.
/// The infinite translation-invariant picture is recovered through window
/// equivariance: building from h W gives the image of the W build under
/// (v, g) -> (v, h g).
///
/// Ids are "<base id>@<group element>". Vertices and edges are ordered by
/// (base index, group element).
struct SkewDiagram {
    std::shared_ptr<const BratteliDiagram> base;
    GroupSpec group;
    EdgePotential rho;
    std::vector<std::vector<GroupElement>> windows; // sorted group coordinates present per level
    std::shared_ptr<const BratteliDiagram> skewed;
    std::vector<std::vector<std::pair<int, GroupElement>>> vertex_labels;
    std::vector<std::vector<std::pair<int, GroupElement>>> edge_labels; // slot 0 empty

    /// Index of (v, g) in the skewed V(level), or -1.
    int find_vertex(int level, int base_vertex, const GroupElement& g) const;
};

void check_potential(const BratteliDiagram& d, const GroupSpec& g, const EdgePotential& rho);

SkewDiagram skew_product(std::shared_ptr<const BratteliDiagram> d, const GroupSpec& g, EdgePotential rho,
                         std::vector<GroupElement> initial_window);

/// Image under the left action (v, g) -> (v, h g); windows, labels and ids
/// are all translated and re-sorted.
SkewDiagram translate(const SkewDiagram& sd, const GroupElement& h);

/// Labeled-graph equality: same base, same labeled vertices per level and
/// same labeled edges with the same endpoints.
bool same_labeled_graph(const SkewDiagram& a, const SkewDiagram& b);

/// Checks the skew source/range law and window membership on every skew
/// edge; returns one message per failure.
std::vector<std::string> check_skew_laws(const SkewDiagram& sd);

/// rho(a) rho(b)^{-1}. Throws DomainError("paths not tail equivalent").
GroupElement group_cocycle(const BratteliDiagram& d, const GroupSpec& g, const EdgePotential& rho,
                           const FinitePath& a, const FinitePath& b);

struct PascalModel {
    std::shared_ptr<const BratteliDiagram> diagram;
    RandomWalk walk;
};

/// Pascal triangle: V(n) = {(n,k)}, E(n) = {(n-1,k,eps)} with edge
/// (n-1,k,eps) from (n-1,k) to (n,k+eps), edge index 2k + eps, and
/// p_n = (1-t) on eps = 0, t on eps = 1. Throws DomainError unless 0 < t < 1.
PascalModel pascal_diagram(int depth, const Rational& t);

/// Pascal path from a 0/1 word, e.g. "110".
FinitePath pascal_path(const std::string& word);

struct UhfModel {
    GroupSpec group;
    std::shared_ptr<const BratteliDiagram> diagram;
    RandomWalk walk;
    EdgePotential rho;
};

/// One vertex per level; E(n) is the support of the n-th step distribution,
/// p is its weights and rho the inclusion into the group, so the Markov
/// measure is the product of the steps. Throws DomainError("transition
/// probability") on empty supports, repeated elements or bad weights.
UhfModel uhf_from_group_walk(const GroupSpec& g,
                             const std::vector<std::vector<std::pair<GroupElement, Rational>>>& steps);

/// Walk lifted to the skew diagram: p~(e, g) = p(e) and
/// nu~_0(v, g) = nu_0(v) lambda_0(g) / sum lambda_0, where lambda_0 gives
/// positive weights aligned with sd.windows[0]. The finite window with
/// lambda_0 stands in for a Haar-equivalent initial measure.
RandomWalk lift_walk(const SkewDiagram& sd, const RandomWalk& base_walk, const std::vector<Rational>& lambda0);

/// Terminal data keyed by (base vertex id, group element).
using SkewTerminal = std::map<std::pair<std::string, GroupElement>, Rational>;

struct SkewHarmonic {
    RandomWalk lifted;
    HarmonicSequence h;
};

/// Harmonic sequence on the skew diagram from terminal values. Every key must
/// be a reachable terminal skew vertex and every reachable terminal skew
/// vertex must have a value; otherwise DomainError("window too small") naming
/// the offending element.
SkewHarmonic skew_harmonic(const SkewDiagram& sd, const RandomWalk& base_walk, const std::vector<Rational>& lambda0,
                           const SkewTerminal& terminal);

} // namespace bratteli
