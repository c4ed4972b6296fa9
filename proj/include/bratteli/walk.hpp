#pragma once

#include "bratteli/diagram.hpp"
#include "bratteli/rational.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>

namespace bratteli {

/// A random walk (p, nu_0) on a Bratteli diagram with its derived
/// one-dimensional distributions nu_n and cotransition probability q.
///
/// Full support is a construction invariant: every p(e) > 0 and every
/// nu_0(v) > 0, which makes every nu_n(w) > 0 and q well defined by
///
///     q_n(e) = nu_{n-1}(s(e)) p_n(e) / nu_n(r(e)).
///
/// The potential identity nu_0(s(a)) p(a) = q(a) nu_n(r(a)) then holds for every
/// path a from level 0. Only the per-edge q is stored; path values are products.
class RandomWalk {
public:
    const BratteliDiagram& diagram() const { return *diagram_; }
    std::shared_ptr<const BratteliDiagram> diagram_ptr() const { return diagram_; }
    int depth() const { return diagram_->depth(); }

    const EdgeFunction& transition() const { return p_; }
    const EdgeFunction& cotransition() const { return q_; }
    const VertexFunction& distributions() const { return nu_; }

    const Rational& p(int level, int e) const { return p_[level][e]; }
    const Rational& q(int level, int e) const { return q_[level][e]; }
    const Rational& nu(int level, int v) const { return nu_[level][v]; }

private:
    friend RandomWalk build_walk(std::shared_ptr<const BratteliDiagram>, EdgeFunction, std::vector<Rational>);

    std::shared_ptr<const BratteliDiagram> diagram_;
    EdgeFunction p_;
    EdgeFunction q_;
    VertexFunction nu_;
};

/// Throws DomainError("transition probability" | "initial distribution") on
/// shape mismatch, a nonpositive value, or a row/total not summing to 1.
RandomWalk build_walk(std::shared_ptr<const BratteliDiagram> d, EdgeFunction p, std::vector<Rational> nu0);

inline RandomWalk build_walk(const BratteliDiagram& d, EdgeFunction p, std::vector<Rational> nu0) {
    return build_walk(std::make_shared<const BratteliDiagram>(d), std::move(p), std::move(nu0));
}

/// mu(Z(a)) = nu_0(s(a)) p(a). `a` must start at level 0.
Rational cylinder_measure(const RandomWalk& w, const FinitePath& a);

/// q(a) = q(a_1) ... q(a_n): probability of having traversed a given r(a).
Rational cotransition_of_path(const RandomWalk& w, const FinitePath& a);

/// Product of p along the path (no initial weight).
Rational transition_of_path(const RandomWalk& w, const FinitePath& a);

/// D(a, b) = q(a) / q(b). Throws DomainError("paths not tail equivalent").
Rational radon_nikodym(const RandomWalk& w, const FinitePath& a, const FinitePath& b);

/// Rebuilds the unique walk with cotransition q and distributions nus.
/// Requires q to be a cotransition probability (positive, rows over in-edges
/// summing to 1), nus positive with nus[0] summing to 1, and exact
/// q-compatibility nu_{n-1}(v) = sum_{s(e)=v} nu_n(r(e)) q_n(e). The first
/// failing (level, vertex) is named in the DomainError.
RandomWalk from_cotransition(std::shared_ptr<const BratteliDiagram> d, const EdgeFunction& q, const VertexFunction& nus);

/// Throws DomainError("cotransition probability") unless q is positive with
/// in-edge rows summing to 1.
void check_cotransition(const BratteliDiagram& d, const EdgeFunction& q);

/// A measure given by its values on cylinders Z(a) for paths a from level 0
/// of length <= depth. Keys are paths; the empty path at v stands for {s = v}.
using CylinderTable = std::map<FinitePath, Rational>;

/// The Markov measure of w on every cylinder of length <= depth.
CylinderTable markov_measure_table(const RandomWalk& w, int depth);

struct QMeasureReport {
    bool ok = true;
    /// First cylinder (in level order, then path order) where m differs from
    /// q(a) times its level marginal at r(a).
    std::optional<FinitePath> witness;
    int level = 0;
    Rational mass;
    Rational expected;
};

/// Finite-depth q-measure test: m factors through the expectation chain iff
/// m(Z(a)) = q(a) * m_n(r(a)) for every length-n cylinder, where m_n is the
/// level-n marginal of m. Throws DomainError("measure not additive") when the
/// table is missing a cylinder, has a negative entry, does not have total
/// mass 1, or violates m(a) = sum_e m(ae).
QMeasureReport check_q_measure(const BratteliDiagram& d, const EdgeFunction& q, const CylinderTable& m, int depth);

/// Draws a path of length `depth` from the Markov measure. The generator is a
/// seeded mt19937_64 with a fixed double conversion, so a seed always yields
/// the same path on every platform.
FinitePath sample_path(const RandomWalk& w, std::uint64_t seed, int depth);

} // namespace bratteli
