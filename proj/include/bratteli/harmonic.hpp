#pragma once

#include "bratteli/walk.hpp"

#include <optional>

namespace bratteli {

// Finite-depth boundary theory.
//
// At depth N a tail-invariant function on paths is exactly a function of the
// terminal vertex r_N, so the invariant algebra is represented by
// InvariantFunction (values on V(N)). Harmonic sequences h_0..h_N satisfy
// h_{n-1} = p_n (h_n o r). The two are in bijection by backward induction
// (f -> h) and by reading h_N (h -> f); this is the depth-N truncation of the
// isomorphism between invariant L-infinity functions and bounded harmonic
// sequences, which is recovered as the projective limit over N.
//
// Under full support nu_N charges every vertex, so "essential" sup-norms are
// plain maxima over V(N).

struct HarmonicSequence {
    VertexFunction h;

    /// max over n, v of |h_n(v)|.
    Rational norm() const;
    friend bool operator==(const HarmonicSequence&, const HarmonicSequence&) = default;
};

struct InvariantFunction {
    int depth = 0;
    std::vector<Rational> values; // indexed by V(depth)

    friend bool operator==(const InvariantFunction&, const InvariantFunction&) = default;
};

struct HarmonicViolation {
    int level;
    int vertex;
    Rational lhs; // h_{n-1}(v)
    Rational rhs; // p_n(h_n o r)(v)
};

struct HarmonicCheck {
    bool ok = true;
    std::optional<HarmonicViolation> violation;
};

/// Exact check of the recursion at every vertex; reports the first failure
/// scanning levels upward. Throws DomainError("shape mismatch").
HarmonicCheck is_harmonic(const RandomWalk& w, const VertexFunction& h);

/// Backward induction from terminal values on V(N).
HarmonicSequence harmonic_from_terminal(const RandomWalk& w, const std::vector<Rational>& terminal);

/// h_n(v) = E[f(r_N) | position v at time n].
HarmonicSequence invariant_to_harmonic(const RandomWalk& w, const InvariantFunction& f);

/// f = h_N. Throws DomainError("not harmonic") if the recursion fails.
InvariantFunction harmonic_to_invariant(const RandomWalk& w, const HarmonicSequence& h);

/// max over V(N) of |f| restricted to nu_N-charged vertices.
Rational essential_sup(const RandomWalk& w, const InvariantFunction& f);

/// The measure mu' = f mu for f = h_N o r_N, built as the q-measure with
/// distributions nu'_n = h_n nu_n: mu'(Z(a)) = q(a) h_n(r(a)) nu_n(r(a)).
/// Total mass is sum h_0 nu_0 (not normalized).
struct DerivedMeasure {
    VertexFunction distributions;
    CylinderTable cylinders;
    Rational total_mass;
};

/// Throws DomainError("negativity") if some h_n(v) < 0 and
/// DomainError("not harmonic") if h fails the recursion.
DerivedMeasure measure_from_harmonic(const RandomWalk& w, const HarmonicSequence& h);

/// One ergodic component at depth N: the walk conditioned on {r_N = terminal}.
///
/// Conditioning kills every vertex that cannot reach `terminal`, so the
/// component lives on the sub-diagram of ancestors of `terminal` (original ids
/// kept) with Doob-transformed transition p'(e) = p(e) g(r(e)) / g(s(e)),
/// g_n(v) = P(r_N = terminal | r_n = v). Its cotransition is the restriction of
/// the original q and its terminal distribution is the point mass at
/// `terminal`.
struct ErgodicComponent {
    Rational weight;   // nu_N(terminal)
    int terminal;      // vertex index in V(N) of the original diagram
    RandomWalk walk;   // on the ancestor sub-diagram
    /// edge_map[n][e] = index in the component diagram of original edge e of
    /// E(n), or -1 if the edge is not in the component.
    std::vector<std::vector<int>> edge_map;
    std::vector<std::vector<int>> vertex_map;

    /// Component measure of a cylinder given by a path of the original diagram
    /// (0 when the path leaves the component).
    Rational measure(const FinitePath& original_path) const;
};

/// Components keyed by terminal vertex in V(N) order. Weights sum to 1 and
/// sum weight * component measure = mu on every cylinder.
std::vector<ErgodicComponent> ergodic_components(const RandomWalk& w);

} // namespace bratteli
