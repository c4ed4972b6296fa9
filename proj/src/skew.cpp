#include "bratteli/skew.hpp"

#include "bratteli/errors.hpp"

#include <algorithm>
#include <set>

namespace bratteli {

GroupElement potential_of_path(const GroupSpec& g, const EdgePotential& rho, const FinitePath& path) {
    GroupElement out = GroupElement::identity(g);
    for (int i = 0; i < path.length(); ++i)
        out = out * rho.at(path.start_level + i + 1).at(path.edges[i]);
    return out;
}

int SkewDiagram::find_vertex(int level, int base_vertex, const GroupElement& g) const {
    const auto& labels = vertex_labels.at(level);
    const auto key = std::make_pair(base_vertex, g);
    const auto it = std::lower_bound(labels.begin(), labels.end(), key);
    if (it == labels.end() || !(*it == key))
        return -1;
    return static_cast<int>(it - labels.begin());
}

void check_potential(const BratteliDiagram& d, const GroupSpec& g, const EdgePotential& rho) {
    if (static_cast<int>(rho.size()) != d.depth() + 1)
        throw DomainError("edge potential", "expected values for levels 1.." + std::to_string(d.depth()));
    for (int n = 1; n <= d.depth(); ++n) {
        if (static_cast<int>(rho[n].size()) != d.edge_count(n))
            throw DomainError("edge potential", "wrong number of values at level " + std::to_string(n));
        for (int e = 0; e < d.edge_count(n); ++e)
            if (!rho[n][e].belongs_to(g))
                throw DomainError("edge potential", "value on edge '" + d.edge_id(n, e) + "' is not in the group");
    }
}

namespace {

std::string skew_id(const std::string& base_id, const GroupElement& g) {
    return base_id + "@" + g.to_string();
}

/// Assembles the skew diagram from labeled vertices and edges (edge labels
/// carry (base edge, source group coordinate)).
SkewDiagram assemble(std::shared_ptr<const BratteliDiagram> d, const GroupSpec& g, EdgePotential rho,
                     std::vector<std::set<std::pair<int, GroupElement>>> vertices,
                     std::vector<std::set<std::pair<int, GroupElement>>> edges) {
    SkewDiagram sd;
    sd.group = g;
    sd.rho = std::move(rho);
    const int depth = d->depth();
    sd.vertex_labels.resize(depth + 1);
    sd.edge_labels.resize(depth + 1);
    sd.windows.resize(depth + 1);
    RawDiagram raw;
    raw.vertices.resize(depth + 1);
    for (int n = 0; n <= depth; ++n) {
        std::set<GroupElement> window;
        for (const auto& [v, h] : vertices[n]) {
            sd.vertex_labels[n].emplace_back(v, h);
            raw.vertices[n].push_back(skew_id(d->vertex_id(n, v), h));
            window.insert(h);
        }
        sd.windows[n].assign(window.begin(), window.end());
    }
    for (int n = 1; n <= depth; ++n) {
        std::vector<RawEdge> level;
        for (const auto& [e, h] : edges[n]) {
            sd.edge_labels[n].emplace_back(e, h);
            level.push_back({skew_id(d->edge_id(n, e), h), skew_id(d->vertex_id(n - 1, d->src(n, e)), h),
                             skew_id(d->vertex_id(n, d->rng(n, e)), h * sd.rho[n][e])});
        }
        raw.edges.push_back(std::move(level));
    }
    sd.skewed = std::make_shared<const BratteliDiagram>(raw);
    sd.base = std::move(d);
    return sd;
}

} // namespace

SkewDiagram skew_product(std::shared_ptr<const BratteliDiagram> d, const GroupSpec& g, EdgePotential rho,
                         std::vector<GroupElement> initial_window) {
    check_potential(*d, g, rho);
    if (initial_window.empty())
        throw DomainError("window", "initial window is empty");
    for (const auto& h : initial_window)
        if (!h.belongs_to(g))
            throw DomainError("window", "element " + h.to_string() + " is not in the group");

    const int depth = d->depth();
    std::vector<std::set<std::pair<int, GroupElement>>> vertices(depth + 1), edges(depth + 1);
    for (int v = 0; v < d->vertex_count(0); ++v)
        for (const auto& h : initial_window)
            vertices[0].emplace(v, h);
    for (int n = 1; n <= depth; ++n)
        for (const auto& [v, h] : vertices[n - 1])
            for (int e : d->out_edges(n - 1, v)) {
                edges[n].emplace(e, h);
                vertices[n].emplace(d->rng(n, e), h * rho[n][e]);
            }
    return assemble(std::move(d), g, std::move(rho), std::move(vertices), std::move(edges));
}

SkewDiagram translate(const SkewDiagram& sd, const GroupElement& h) {
    const int depth = sd.base->depth();
    std::vector<std::set<std::pair<int, GroupElement>>> vertices(depth + 1), edges(depth + 1);
    for (int n = 0; n <= depth; ++n)
        for (const auto& [v, g] : sd.vertex_labels[n])
            vertices[n].emplace(v, h * g);
    for (int n = 1; n <= depth; ++n)
        for (const auto& [e, g] : sd.edge_labels[n])
            edges[n].emplace(e, h * g);
    return assemble(sd.base, sd.group, sd.rho, std::move(vertices), std::move(edges));
}

bool same_labeled_graph(const SkewDiagram& a, const SkewDiagram& b) {
    return *a.base == *b.base && a.group == b.group && a.vertex_labels == b.vertex_labels &&
           a.edge_labels == b.edge_labels && *a.skewed == *b.skewed;
}

std::vector<std::string> check_skew_laws(const SkewDiagram& sd) {
    std::vector<std::string> out;
    const auto& base = *sd.base;
    const auto& sk = *sd.skewed;
    for (int n = 0; n <= base.depth(); ++n)
        for (const auto& [v, g] : sd.vertex_labels[n])
            if (!std::binary_search(sd.windows[n].begin(), sd.windows[n].end(), g))
                out.push_back("vertex outside window at level " + std::to_string(n));
    for (int n = 1; n <= base.depth(); ++n)
        for (int k = 0; k < sk.edge_count(n); ++k) {
            const auto& [e, g] = sd.edge_labels[n][k];
            const auto& src = sd.vertex_labels[n - 1][sk.src(n, k)];
            const auto& rng = sd.vertex_labels[n][sk.rng(n, k)];
            if (src.first != base.src(n, e) || !(src.second == g))
                out.push_back("source law fails on " + sk.edge_id(n, k));
            if (rng.first != base.rng(n, e) || !(rng.second == g * sd.rho[n][e]))
                out.push_back("range law fails on " + sk.edge_id(n, k));
        }
    return out;
}

GroupElement group_cocycle(const BratteliDiagram& d, const GroupSpec& g, const EdgePotential& rho,
                           const FinitePath& a, const FinitePath& b) {
    if (!tail_related(d, a, b))
        throw DomainError("paths not tail equivalent", "");
    return potential_of_path(g, rho, a) * potential_of_path(g, rho, b).inverse();
}

PascalModel pascal_diagram(int depth, const Rational& t) {
    if (depth < 1)
        throw DomainError("pascal", "depth must be at least 1");
    if (sgn(t) <= 0 || t >= 1)
        throw DomainError("pascal", "t must satisfy 0 < t < 1, got " + to_string(t));
    auto vid = [](int n, int k) { return "(" + std::to_string(n) + "," + std::to_string(k) + ")"; };
    RawDiagram raw;
    raw.vertices.resize(depth + 1);
    for (int n = 0; n <= depth; ++n)
        for (int k = 0; k <= n; ++k)
            raw.vertices[n].push_back(vid(n, k));
    EdgeFunction p(depth + 1);
    for (int n = 1; n <= depth; ++n) {
        std::vector<RawEdge> level;
        for (int k = 0; k < n; ++k)
            for (int eps = 0; eps <= 1; ++eps) {
                level.push_back({"(" + std::to_string(n - 1) + "," + std::to_string(k) + "," + std::to_string(eps) + ")",
                                 vid(n - 1, k), vid(n, k + eps)});
                p[n].push_back(eps ? t : Rational(1 - t));
            }
        raw.edges.push_back(std::move(level));
    }
    auto d = std::make_shared<const BratteliDiagram>(raw);
    auto walk = build_walk(d, std::move(p), {Rational(1)});
    return PascalModel{std::move(d), std::move(walk)};
}

FinitePath pascal_path(const std::string& word) {
    FinitePath path;
    int k = 0;
    for (char c : word) {
        if (c != '0' && c != '1')
            throw ParseError("pascal path must be a 0/1 word, got '" + word + "'");
        const int eps = c - '0';
        path.edges.push_back(2 * k + eps);
        k += eps;
    }
    return path;
}

UhfModel uhf_from_group_walk(const GroupSpec& g,
                             const std::vector<std::vector<std::pair<GroupElement, Rational>>>& steps) {
    if (steps.empty())
        throw DomainError("transition probability", "need at least one step distribution");
    const int depth = static_cast<int>(steps.size());
    RawDiagram raw;
    for (int n = 0; n <= depth; ++n)
        raw.vertices.push_back({"v" + std::to_string(n)});
    UhfModel model{g, nullptr, {}, EdgePotential(depth + 1)};
    EdgeFunction p(depth + 1);
    for (int n = 1; n <= depth; ++n) {
        const auto& support = steps[n - 1];
        if (support.empty())
            throw DomainError("transition probability", "empty support at level " + std::to_string(n));
        std::set<GroupElement> seen;
        std::vector<RawEdge> level;
        for (const auto& [h, weight] : support) {
            if (!h.belongs_to(g))
                throw DomainError("transition probability", "support element " + h.to_string() + " not in group");
            if (!seen.insert(h).second)
                throw DomainError("transition probability", "repeated support element " + h.to_string());
            level.push_back({h.to_string(), "v" + std::to_string(n - 1), "v" + std::to_string(n)});
            p[n].push_back(weight);
            model.rho[n].push_back(h);
        }
        raw.edges.push_back(std::move(level));
    }
    model.diagram = std::make_shared<const BratteliDiagram>(raw);
    model.walk = build_walk(model.diagram, std::move(p), {Rational(1)});
    return model;
}

RandomWalk lift_walk(const SkewDiagram& sd, const RandomWalk& base_walk, const std::vector<Rational>& lambda0) {
    if (!(base_walk.diagram() == *sd.base))
        throw DomainError("skew walk", "walk is not defined on the skew product's base diagram");
    if (lambda0.size() != sd.windows[0].size())
        throw DomainError("skew walk", "lambda_0 must give one weight per initial window element");
    Rational total = 0;
    for (const auto& x : lambda0) {
        if (sgn(x) <= 0)
            throw DomainError("skew walk", "lambda_0 weights must be positive");
        total += x;
    }
    const auto& sk = *sd.skewed;
    std::vector<Rational> nu0(sk.vertex_count(0));
    for (int i = 0; i < sk.vertex_count(0); ++i) {
        const auto& [v, h] = sd.vertex_labels[0][i];
        const auto at = std::lower_bound(sd.windows[0].begin(), sd.windows[0].end(), h) - sd.windows[0].begin();
        nu0[i] = base_walk.nu(0, v) * lambda0[at] / total;
    }
    EdgeFunction p(sk.depth() + 1);
    for (int n = 1; n <= sk.depth(); ++n)
        for (const auto& [e, h] : sd.edge_labels[n])
            p[n].push_back(base_walk.p(n, e));
    return build_walk(sd.skewed, std::move(p), std::move(nu0));
}

SkewHarmonic skew_harmonic(const SkewDiagram& sd, const RandomWalk& base_walk, const std::vector<Rational>& lambda0,
                           const SkewTerminal& terminal) {
    const int depth = sd.base->depth();
    const auto& labels = sd.vertex_labels[depth];
    std::vector<Rational> values(labels.size());
    std::vector<bool> filled(labels.size(), false);
    for (const auto& [key, value] : terminal) {
        const int v = sd.base->find_vertex(depth, key.first);
        const int idx = v < 0 ? -1 : sd.find_vertex(depth, v, key.second);
        if (idx < 0)
            throw DomainError("window too small",
                              "terminal data at " + key.first + "@" + key.second.to_string() +
                                  " lies outside the reachable window");
        values[idx] = value;
        filled[idx] = true;
    }
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (!filled[i])
            throw DomainError("window too small", "no terminal value for reachable vertex " +
                                                      sd.skewed->vertex_id(depth, static_cast<int>(i)));
    SkewHarmonic out{lift_walk(sd, base_walk, lambda0), {}};
    out.h = harmonic_from_terminal(out.lifted, values);
    return out;
}

} // namespace bratteli
