#include "bratteli/harmonic.hpp"

#include "bratteli/errors.hpp"

namespace bratteli {

Rational HarmonicSequence::norm() const {
    Rational best = 0;
    for (const auto& level : h)
        for (const auto& x : level)
            if (abs(x) > best)
                best = abs(x);
    return best;
}

namespace {

void check_vertex_shape(const BratteliDiagram& d, const VertexFunction& h) {
    if (static_cast<int>(h.size()) != d.depth() + 1)
        throw DomainError("shape mismatch", "expected values on levels 0.." + std::to_string(d.depth()));
    for (int n = 0; n <= d.depth(); ++n)
        if (static_cast<int>(h[n].size()) != d.vertex_count(n))
            throw DomainError("shape mismatch", "wrong number of values at level " + std::to_string(n));
}

std::vector<Rational> expectation_step(const RandomWalk& w, int n, const std::vector<Rational>& next) {
    const auto& d = w.diagram();
    std::vector<Rational> out(d.vertex_count(n - 1), Rational(0));
    for (int e = 0; e < d.edge_count(n); ++e)
        out[d.src(n, e)] += w.p(n, e) * next[d.rng(n, e)];
    return out;
}

} // namespace

HarmonicCheck is_harmonic(const RandomWalk& w, const VertexFunction& h) {
    const auto& d = w.diagram();
    check_vertex_shape(d, h);
    HarmonicCheck result;
    for (int n = 1; n <= d.depth(); ++n) {
        const auto rhs = expectation_step(w, n, h[n]);
        for (int v = 0; v < d.vertex_count(n - 1); ++v)
            if (h[n - 1][v] != rhs[v]) {
                result.ok = false;
                result.violation = HarmonicViolation{n, v, h[n - 1][v], rhs[v]};
                return result;
            }
    }
    return result;
}

HarmonicSequence harmonic_from_terminal(const RandomWalk& w, const std::vector<Rational>& terminal) {
    const auto& d = w.diagram();
    const int depth = d.depth();
    if (static_cast<int>(terminal.size()) != d.vertex_count(depth))
        throw DomainError("shape mismatch", "terminal values must cover V(" + std::to_string(depth) + ")");
    HarmonicSequence out;
    out.h.resize(depth + 1);
    out.h[depth] = terminal;
    for (int n = depth; n >= 1; --n)
        out.h[n - 1] = expectation_step(w, n, out.h[n]);
    return out;
}

HarmonicSequence invariant_to_harmonic(const RandomWalk& w, const InvariantFunction& f) {
    if (f.depth != w.depth())
        throw DomainError("shape mismatch", "invariant function depth differs from diagram depth");
    return harmonic_from_terminal(w, f.values);
}

InvariantFunction harmonic_to_invariant(const RandomWalk& w, const HarmonicSequence& h) {
    const auto check = is_harmonic(w, h.h);
    if (!check.ok)
        throw DomainError("not harmonic", "recursion fails at level " + std::to_string(check.violation->level));
    return InvariantFunction{w.depth(), h.h.back()};
}

Rational essential_sup(const RandomWalk& w, const InvariantFunction& f) {
    Rational best = 0;
    for (std::size_t v = 0; v < f.values.size(); ++v)
        if (sgn(w.nu(f.depth, static_cast<int>(v))) > 0 && abs(f.values[v]) > best)
            best = abs(f.values[v]);
    return best;
}

DerivedMeasure measure_from_harmonic(const RandomWalk& w, const HarmonicSequence& h) {
    const auto check = is_harmonic(w, h.h);
    if (!check.ok)
        throw DomainError("not harmonic", "recursion fails at level " + std::to_string(check.violation->level));
    const auto& d = w.diagram();
    DerivedMeasure out;
    out.distributions.resize(d.depth() + 1);
    for (int n = 0; n <= d.depth(); ++n) {
        out.distributions[n].resize(d.vertex_count(n));
        for (int v = 0; v < d.vertex_count(n); ++v) {
            if (sgn(h.h[n][v]) < 0)
                throw DomainError("negativity", "h_" + std::to_string(n) + " is negative at '" + d.vertex_id(n, v) + "'");
            out.distributions[n][v] = h.h[n][v] * w.nu(n, v);
        }
    }
    out.total_mass = 0;
    for (const auto& x : out.distributions[0])
        out.total_mass += x;

    for (int n = 0; n <= d.depth(); ++n)
        for (const auto& a : enumerate_paths(d, 0, n))
            out.cylinders.emplace(a, cotransition_of_path(w, a) * out.distributions[n][d.range(a)]);
    return out;
}

Rational ErgodicComponent::measure(const FinitePath& original_path) const {
    if (original_path.start_level != 0)
        throw DomainError("path not in diagram", "path must start at level 0");
    FinitePath mapped{0, {}, vertex_map[0].at(original_path.start_vertex)};
    if (mapped.start_vertex < 0)
        return 0;
    for (int i = 0; i < original_path.length(); ++i) {
        const int e = edge_map.at(i + 1).at(original_path.edges[i]);
        if (e < 0)
            return 0;
        mapped.edges.push_back(e);
    }
    return cylinder_measure(walk, mapped);
}

std::vector<ErgodicComponent> ergodic_components(const RandomWalk& w) {
    const auto& d = w.diagram();
    const int depth = d.depth();
    std::vector<ErgodicComponent> out;
    for (int t = 0; t < d.vertex_count(depth); ++t) {
        if (sgn(w.nu(depth, t)) == 0)
            continue;
        std::vector<Rational> indicator(d.vertex_count(depth), Rational(0));
        indicator[t] = 1;
        // g_n(v) = P(r_N = t | r_n = v) is the harmonic extension of the indicator.
        const auto g = harmonic_from_terminal(w, indicator).h;

        RawDiagram raw;
        ErgodicComponent comp{w.nu(depth, t), t, {}, {}, {}};
        comp.vertex_map.resize(depth + 1);
        comp.edge_map.resize(depth + 1);
        raw.vertices.resize(depth + 1);
        for (int n = 0; n <= depth; ++n) {
            comp.vertex_map[n].assign(d.vertex_count(n), -1);
            for (int v = 0; v < d.vertex_count(n); ++v)
                if (sgn(g[n][v]) > 0) {
                    comp.vertex_map[n][v] = static_cast<int>(raw.vertices[n].size());
                    raw.vertices[n].push_back(d.vertex_id(n, v));
                }
        }
        EdgeFunction p(depth + 1);
        for (int n = 1; n <= depth; ++n) {
            comp.edge_map[n].assign(d.edge_count(n), -1);
            std::vector<RawEdge> edges;
            for (int e = 0; e < d.edge_count(n); ++e) {
                if (sgn(g[n][d.rng(n, e)]) == 0)
                    continue;
                comp.edge_map[n][e] = static_cast<int>(edges.size());
                edges.push_back({d.edge_id(n, e), d.vertex_id(n - 1, d.src(n, e)), d.vertex_id(n, d.rng(n, e))});
                p[n].push_back(w.p(n, e) * g[n][d.rng(n, e)] / g[n - 1][d.src(n, e)]);
            }
            raw.edges.push_back(std::move(edges));
        }
        std::vector<Rational> nu0;
        for (int v = 0; v < d.vertex_count(0); ++v)
            if (sgn(g[0][v]) > 0)
                nu0.push_back(w.nu(0, v) * g[0][v] / comp.weight);
        comp.walk = build_walk(BratteliDiagram(raw), std::move(p), std::move(nu0));
        out.push_back(std::move(comp));
    }
    return out;
}

} // namespace bratteli
