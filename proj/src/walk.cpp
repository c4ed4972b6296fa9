#include "bratteli/walk.hpp"

#include "bratteli/errors.hpp"

#include <random>

namespace bratteli {

namespace {

std::string vertex_label(const BratteliDiagram& d, int level, int v) {
    return "level " + std::to_string(level) + ", vertex '" + d.vertex_id(level, v) + "'";
}

void check_shape(const BratteliDiagram& d, const EdgeFunction& f, const char* what) {
    if (static_cast<int>(f.size()) != d.depth() + 1)
        throw DomainError(what, "expected values for levels 1.." + std::to_string(d.depth()));
    for (int n = 1; n <= d.depth(); ++n)
        if (static_cast<int>(f[n].size()) != d.edge_count(n))
            throw DomainError(what, "wrong number of edge values at level " + std::to_string(n));
}

void check_from_origin(const BratteliDiagram& d, const FinitePath& a) {
    if (a.start_level != 0)
        throw DomainError("path not in diagram", "path must start at level 0");
    d.check_path(a);
}

} // namespace

RandomWalk build_walk(std::shared_ptr<const BratteliDiagram> d, EdgeFunction p, std::vector<Rational> nu0) {
    const int depth = d->depth();
    check_shape(*d, p, "transition probability");
    if (static_cast<int>(nu0.size()) != d->vertex_count(0))
        throw DomainError("initial distribution", "wrong number of values");

    Rational total = 0;
    for (int v = 0; v < d->vertex_count(0); ++v) {
        if (sgn(nu0[v]) <= 0)
            throw DomainError("initial distribution", "not positive at " + vertex_label(*d, 0, v));
        total += nu0[v];
    }
    if (total != 1)
        throw DomainError("initial distribution", "sums to " + to_string(total));

    for (int n = 1; n <= depth; ++n) {
        for (int e = 0; e < d->edge_count(n); ++e)
            if (sgn(p[n][e]) <= 0)
                throw DomainError("transition probability",
                                  "not positive on edge '" + d->edge_id(n, e) + "' at level " + std::to_string(n));
        for (int v = 0; v < d->vertex_count(n - 1); ++v) {
            Rational row = 0;
            for (int e : d->out_edges(n - 1, v))
                row += p[n][e];
            if (row != 1)
                throw DomainError("transition probability",
                                  "row sums to " + to_string(row) + " at " + vertex_label(*d, n - 1, v));
        }
    }

    RandomWalk w;
    w.nu_.resize(depth + 1);
    w.q_.resize(depth + 1);
    w.nu_[0] = std::move(nu0);
    for (int n = 1; n <= depth; ++n) {
        auto& nu = w.nu_[n];
        nu.assign(d->vertex_count(n), Rational(0));
        for (int e = 0; e < d->edge_count(n); ++e)
            nu[d->rng(n, e)] += p[n][e] * w.nu_[n - 1][d->src(n, e)];
        auto& q = w.q_[n];
        q.resize(d->edge_count(n));
        for (int e = 0; e < d->edge_count(n); ++e)
            q[e] = w.nu_[n - 1][d->src(n, e)] * p[n][e] / nu[d->rng(n, e)];
    }
    w.p_ = std::move(p);
    w.diagram_ = std::move(d);
    return w;
}

Rational transition_of_path(const RandomWalk& w, const FinitePath& a) {
    w.diagram().check_path(a);
    Rational out = 1;
    for (int i = 0; i < a.length(); ++i)
        out *= w.p(a.start_level + i + 1, a.edges[i]);
    return out;
}

Rational cylinder_measure(const RandomWalk& w, const FinitePath& a) {
    check_from_origin(w.diagram(), a);
    Rational out = w.nu(0, a.start_vertex);
    for (int i = 0; i < a.length(); ++i)
        out *= w.p(i + 1, a.edges[i]);
    return out;
}

Rational cotransition_of_path(const RandomWalk& w, const FinitePath& a) {
    check_from_origin(w.diagram(), a);
    Rational out = 1;
    for (int i = 0; i < a.length(); ++i)
        out *= w.q(i + 1, a.edges[i]);
    return out;
}

Rational radon_nikodym(const RandomWalk& w, const FinitePath& a, const FinitePath& b) {
    if (!tail_related(w.diagram(), a, b))
        throw DomainError("paths not tail equivalent", "");
    return cotransition_of_path(w, a) / cotransition_of_path(w, b);
}

void check_cotransition(const BratteliDiagram& d, const EdgeFunction& q) {
    check_shape(d, q, "cotransition probability");
    for (int n = 1; n <= d.depth(); ++n) {
        for (int e = 0; e < d.edge_count(n); ++e)
            if (sgn(q[n][e]) <= 0)
                throw DomainError("cotransition probability",
                                  "not positive on edge '" + d.edge_id(n, e) + "' at level " + std::to_string(n));
        for (int w = 0; w < d.vertex_count(n); ++w) {
            Rational row = 0;
            for (int e : d.in_edges(n, w))
                row += q[n][e];
            if (row != 1)
                throw DomainError("cotransition probability",
                                  "in-edge row sums to " + to_string(row) + " at " + vertex_label(d, n, w));
        }
    }
}

RandomWalk from_cotransition(std::shared_ptr<const BratteliDiagram> d, const EdgeFunction& q, const VertexFunction& nus) {
    check_cotransition(*d, q);
    const int depth = d->depth();
    if (static_cast<int>(nus.size()) != depth + 1)
        throw DomainError("q-compatibility", "expected distributions for levels 0.." + std::to_string(depth));
    for (int n = 0; n <= depth; ++n) {
        if (static_cast<int>(nus[n].size()) != d->vertex_count(n))
            throw DomainError("q-compatibility", "wrong number of values at level " + std::to_string(n));
        for (int v = 0; v < d->vertex_count(n); ++v)
            if (sgn(nus[n][v]) <= 0)
                throw DomainError("q-compatibility", "distribution not positive at " + vertex_label(*d, n, v));
    }
    for (int n = 1; n <= depth; ++n) {
        std::vector<Rational> pushed(d->vertex_count(n - 1), Rational(0));
        for (int e = 0; e < d->edge_count(n); ++e)
            pushed[d->src(n, e)] += nus[n][d->rng(n, e)] * q[n][e];
        for (int v = 0; v < d->vertex_count(n - 1); ++v)
            if (pushed[v] != nus[n - 1][v])
                throw DomainError("q-compatibility",
                                  "level " + std::to_string(n) + ": pushforward gives " + to_string(pushed[v]) +
                                      " at vertex '" + d->vertex_id(n - 1, v) + "' but nu_" + std::to_string(n - 1) +
                                      " is " + to_string(nus[n - 1][v]));
    }

    EdgeFunction p(depth + 1);
    for (int n = 1; n <= depth; ++n) {
        p[n].resize(d->edge_count(n));
        for (int e = 0; e < d->edge_count(n); ++e)
            p[n][e] = nus[n][d->rng(n, e)] * q[n][e] / nus[n - 1][d->src(n, e)];
    }
    return build_walk(std::move(d), std::move(p), nus[0]);
}

CylinderTable markov_measure_table(const RandomWalk& w, int depth) {
    const auto& d = w.diagram();
    if (depth < 0 || depth > d.depth())
        throw DomainError("level out of range", std::to_string(depth));
    CylinderTable table;
    std::vector<std::pair<FinitePath, Rational>> frontier;
    for (int v = 0; v < d.vertex_count(0); ++v)
        frontier.emplace_back(FinitePath{0, {}, v}, w.nu(0, v));
    for (int n = 0;; ++n) {
        for (const auto& [path, mass] : frontier)
            table.emplace(path, mass);
        if (n == depth)
            break;
        std::vector<std::pair<FinitePath, Rational>> next;
        for (const auto& [path, mass] : frontier)
            for (int e : d.out_edges(n, d.range(path))) {
                FinitePath ext = path;
                ext.edges.push_back(e);
                next.emplace_back(std::move(ext), mass * w.p(n + 1, e));
            }
        frontier = std::move(next);
    }
    return table;
}

QMeasureReport check_q_measure(const BratteliDiagram& d, const EdgeFunction& q, const CylinderTable& m, int depth) {
    if (depth < 0 || depth > d.depth())
        throw DomainError("level out of range", std::to_string(depth));
    check_cotransition(d, q);

    auto lookup = [&](const FinitePath& a) -> const Rational& {
        const auto it = m.find(a);
        if (it == m.end())
            throw DomainError("measure not additive", "no mass given for cylinder " + d.path_to_string(a));
        if (sgn(it->second) < 0)
            throw DomainError("measure not additive", "negative mass on cylinder " + d.path_to_string(a));
        return it->second;
    };

    Rational total = 0;
    for (const auto& root : enumerate_paths(d, 0, 0))
        total += lookup(root);
    if (total != 1)
        throw DomainError("measure not additive", "total mass is " + to_string(total));

    std::vector<std::vector<FinitePath>> by_length(depth + 1);
    for (int n = 0; n <= depth; ++n)
        by_length[n] = enumerate_paths(d, 0, n);
    for (int n = 0; n < depth; ++n)
        for (const auto& a : by_length[n]) {
            Rational children = 0;
            for (int e : d.out_edges(n, d.range(a))) {
                FinitePath ext = a;
                ext.edges.push_back(e);
                children += lookup(ext);
            }
            if (children != lookup(a))
                throw DomainError("measure not additive", "cylinder " + d.path_to_string(a) + " has mass " +
                                                               to_string(lookup(a)) + " but its extensions sum to " +
                                                               to_string(children));
        }

    QMeasureReport report;
    for (int n = 1; n <= depth; ++n) {
        std::vector<Rational> marginal(d.vertex_count(n), Rational(0));
        for (const auto& a : by_length[n])
            marginal[d.range(a)] += lookup(a);
        for (const auto& a : by_length[n]) {
            Rational qa = 1;
            for (int i = 0; i < n; ++i)
                qa *= q[i + 1][a.edges[i]];
            const Rational expected = qa * marginal[d.range(a)];
            if (lookup(a) != expected) {
                report.ok = false;
                report.witness = a;
                report.level = n;
                report.mass = lookup(a);
                report.expected = expected;
                return report;
            }
        }
    }
    return report;
}

FinitePath sample_path(const RandomWalk& w, std::uint64_t seed, int depth) {
    const auto& d = w.diagram();
    if (depth < 0 || depth > d.depth())
        throw DomainError("level out of range", std::to_string(depth));
    std::mt19937_64 gen(seed);
    auto uniform = [&gen] { return static_cast<double>(gen() >> 11) * 0x1.0p-53; };
    auto pick = [&](const auto& candidates, auto weight) {
        const double u = uniform();
        double acc = 0;
        for (std::size_t i = 0; i + 1 < candidates.size(); ++i) {
            acc += weight(candidates[i]);
            if (u < acc)
                return candidates[i];
        }
        return candidates.back();
    };

    std::vector<int> roots(d.vertex_count(0));
    for (int v = 0; v < d.vertex_count(0); ++v)
        roots[v] = v;
    FinitePath path{0, {}, pick(roots, [&](int v) { return w.nu(0, v).get_d(); })};
    int at = path.start_vertex;
    for (int n = 1; n <= depth; ++n) {
        const int e = pick(d.out_edges(n - 1, at), [&](int e) { return w.p(n, e).get_d(); });
        path.edges.push_back(e);
        at = d.rng(n, e);
    }
    return path;
}

} // namespace bratteli
