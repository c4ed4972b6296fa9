#pragma once

#include "bratteli/diagram.hpp"
#include "bratteli/harmonic.hpp"
#include "bratteli/inclusion.hpp"
#include "bratteli/skew.hpp"
#include "bratteli/walk.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <string>

namespace testing_support {

using namespace bratteli;
using Rng = std::mt19937_64;

inline int uniform(Rng& rng, int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline std::shared_ptr<const BratteliDiagram> chain_diagram(int depth) {
    RawDiagram raw;
    for (int n = 0; n <= depth; ++n)
        raw.vertices.push_back({"c" + std::to_string(n)});
    for (int n = 1; n <= depth; ++n)
        raw.edges.push_back({{"e" + std::to_string(n), "c" + std::to_string(n - 1), "c" + std::to_string(n)}});
    return std::make_shared<const BratteliDiagram>(raw);
}

inline RandomWalk chain_walk(int depth) {
    auto d = chain_diagram(depth);
    EdgeFunction p(depth + 1);
    for (int n = 1; n <= depth; ++n)
        p[n] = {Rational(1)};
    return build_walk(d, p, {Rational(1)});
}

struct DiagramShape {
    int max_depth = 6;
    int max_vertices = 4;
    int max_out = 3;
};

// Every vertex emits 1..max_out edges; the first |V(n)| edges of a level are
// spread over all targets so each one receives an edge.
inline std::shared_ptr<const BratteliDiagram> random_diagram(Rng& rng, DiagramShape shape = {}) {
    const int depth = uniform(rng, 1, shape.max_depth);
    RawDiagram raw;
    raw.vertices.resize(depth + 1);
    const int roots = uniform(rng, 1, std::min(2, shape.max_vertices));
    for (int v = 0; v < roots; ++v)
        raw.vertices[0].push_back("v0_" + std::to_string(v));
    for (int n = 1; n <= depth; ++n) {
        const auto& prev = raw.vertices[n - 1];
        std::vector<int> sources;
        for (int v = 0; v < static_cast<int>(prev.size()); ++v)
            for (int k = uniform(rng, 1, shape.max_out); k > 0; --k)
                sources.push_back(v);
        const int total = static_cast<int>(sources.size());
        const int width = uniform(rng, 1, std::min(shape.max_vertices, total));
        for (int w = 0; w < width; ++w)
            raw.vertices[n].push_back("v" + std::to_string(n) + "_" + std::to_string(w));
        std::vector<int> targets(total);
        for (int i = 0; i < total; ++i)
            targets[i] = i < width ? i : uniform(rng, 0, width - 1);
        std::shuffle(targets.begin(), targets.end(), rng);
        std::vector<RawEdge> level;
        for (int i = 0; i < total; ++i)
            level.push_back({"e" + std::to_string(n) + "_" + std::to_string(i), prev[sources[i]],
                             raw.vertices[n][targets[i]]});
        raw.edges.push_back(std::move(level));
    }
    return std::make_shared<const BratteliDiagram>(raw);
}

inline std::vector<Rational> random_distribution(Rng& rng, int size, int max_weight = 6) {
    std::vector<Rational> w(size);
    Rational total = 0;
    for (auto& x : w) {
        x = uniform(rng, 1, max_weight);
        total += x;
    }
    for (auto& x : w)
        x /= total;
    return w;
}

inline RandomWalk random_walk_on(Rng& rng, std::shared_ptr<const BratteliDiagram> d) {
    EdgeFunction p(d->depth() + 1);
    for (int n = 1; n <= d->depth(); ++n) {
        p[n].assign(d->edge_count(n), Rational(0));
        for (int v = 0; v < d->vertex_count(n - 1); ++v) {
            const auto& out = d->out_edges(n - 1, v);
            const auto w = random_distribution(rng, static_cast<int>(out.size()));
            for (std::size_t i = 0; i < out.size(); ++i)
                p[n][out[i]] = w[i];
        }
    }
    auto nu0 = random_distribution(rng, d->vertex_count(0));
    return build_walk(std::move(d), std::move(p), std::move(nu0));
}

inline RandomWalk random_walk(Rng& rng, DiagramShape shape = {}) {
    return random_walk_on(rng, random_diagram(rng, shape));
}

inline PascalModel pascal(int depth, int num, int den) {
    return pascal_diagram(depth, ratio(num, den));
}

// Oracle: mu(Z(a)) as the sum of the full-depth cylinders extending a.
inline Rational mass_by_enumeration(const RandomWalk& w, const FinitePath& a) {
    Rational sum = 0;
    for (const auto& full : enumerate_paths(w.diagram(), 0, w.depth()))
        if (prefix(full, a.length()) == a)
            sum += cylinder_measure(w, full);
    return sum;
}

// Oracle: depth-first enumeration independent of enumerate_paths.
inline std::vector<std::vector<int>> dfs_paths(const BratteliDiagram& d, int to_level) {
    std::vector<std::vector<int>> out;
    std::vector<int> stack;
    std::function<void(int, int)> go = [&](int level, int v) {
        if (level == to_level) {
            out.push_back(stack);
            return;
        }
        for (int e : d.out_edges(level, v)) {
            stack.push_back(e);
            go(level + 1, d.rng(level + 1, e));
            stack.pop_back();
        }
    };
    for (int v = 0; v < d.vertex_count(0); ++v)
        go(0, v);
    return out;
}

struct InclusionShape {
    int max_points = 6;
    int max_edges = 8;
};

inline InclusionGraph random_inclusion_graph(Rng& rng, InclusionShape shape = {}) {
    const int nv = uniform(rng, 1, 3);
    const int nw = uniform(rng, 1, 3);
    const int ne = uniform(rng, std::max(nv, nw), std::max({nv, nw, shape.max_edges}));
    std::vector<std::string> V, W, E, X;
    for (int v = 0; v < nv; ++v)
        V.push_back("v" + std::to_string(v));
    for (int w = 0; w < nw; ++w)
        W.push_back("w" + std::to_string(w));
    std::vector<int> src(ne), rng_(ne);
    for (int c = 0; c < ne; ++c) {
        src[c] = c < nv ? c : uniform(rng, 0, nv - 1);
        rng_[c] = c < nw ? c : uniform(rng, 0, nw - 1);
    }
    std::shuffle(rng_.begin(), rng_.end(), rng);
    for (int c = 0; c < ne; ++c)
        E.push_back("c" + std::to_string(c));
    std::vector<int> x_to_v;
    for (int v = 0; v < nv; ++v)
        x_to_v.push_back(v);
    const int extra = uniform(rng, 0, std::max(0, shape.max_points - nv));
    for (int i = 0; i < extra; ++i)
        x_to_v.push_back(uniform(rng, 0, nv - 1));
    std::sort(x_to_v.begin(), x_to_v.end());
    for (std::size_t i = 0; i < x_to_v.size(); ++i)
        X.push_back("x" + std::to_string(i));
    return InclusionGraph(X, V, E, W, x_to_v, src, rng_);
}

inline std::vector<Rational> random_graph_transition(Rng& rng, const InclusionGraph& g) {
    std::vector<Rational> p(g.edge_count());
    for (int v = 0; v < g.vertex_count(); ++v) {
        std::vector<int> out;
        for (int c = 0; c < g.edge_count(); ++c)
            if (g.src(c) == v)
                out.push_back(c);
        const auto w = random_distribution(rng, static_cast<int>(out.size()), 9);
        for (std::size_t i = 0; i < out.size(); ++i)
            p[out[i]] = w[i];
    }
    return p;
}

inline std::vector<Rational> uniform_graph_transition(const InclusionGraph& g) {
    std::vector<Rational> p(g.edge_count());
    for (int c = 0; c < g.edge_count(); ++c) {
        int deg = 0;
        for (int d = 0; d < g.edge_count(); ++d)
            deg += g.src(d) == g.src(c);
        p[c] = ratio(1, deg);
    }
    return p;
}

// All inclusion graphs up to relabeling with |X_| <= max_lifted: vertex
// multiplicities m_v >= 1 and an edge-multiplicity matrix with no zero row or
// column, with sum_v m_v * outdeg(v) <= max_lifted. Vertices are listed in
// nondecreasing multiplicity and target columns in nonincreasing lexicographic
// order to trim relabeled copies.
inline void for_each_inclusion_graph(int max_lifted, const std::function<void(const InclusionGraph&)>& visit) {
    for (int nv = 1; nv <= max_lifted; ++nv)
        for (int nw = 1; nw <= max_lifted; ++nw) {
            std::vector<int> m(nv, 1);
            std::function<void(int)> mult = [&](int i) {
                if (i == nv) {
                    const int cells = nv * nw;
                    std::vector<int> a(cells, 0);
                    std::function<void(int, int)> fill = [&](int cell, int used) {
                        if (cell == cells) {
                            for (int v = 0; v < nv; ++v) {
                                int row = 0;
                                for (int w = 0; w < nw; ++w)
                                    row += a[v * nw + w];
                                if (!row)
                                    return;
                            }
                            for (int w = 0; w < nw; ++w) {
                                int col = 0;
                                for (int v = 0; v < nv; ++v)
                                    col += a[v * nw + w];
                                if (!col)
                                    return;
                            }
                            for (int w = 1; w < nw; ++w)
                                for (int v = 0; v < nv; ++v) {
                                    if (a[v * nw + w - 1] > a[v * nw + w])
                                        break;
                                    if (a[v * nw + w - 1] < a[v * nw + w])
                                        return;
                                }
                            std::vector<std::string> X, V, E, W;
                            std::vector<int> x_to_v, src, rng_;
                            for (int v = 0; v < nv; ++v) {
                                V.push_back("v" + std::to_string(v));
                                for (int k = 0; k < m[v]; ++k) {
                                    X.push_back("x" + std::to_string(X.size()));
                                    x_to_v.push_back(v);
                                }
                            }
                            for (int w = 0; w < nw; ++w)
                                W.push_back("w" + std::to_string(w));
                            for (int v = 0; v < nv; ++v)
                                for (int w = 0; w < nw; ++w)
                                    for (int k = 0; k < a[v * nw + w]; ++k) {
                                        E.push_back("c" + std::to_string(E.size()));
                                        src.push_back(v);
                                        rng_.push_back(w);
                                    }
                            visit(InclusionGraph(X, V, E, W, x_to_v, src, rng_));
                            return;
                        }
                        const int row = cell / nw;
                        if (cell % nw == 0) {
                            if (row > 0 && std::all_of(a.begin() + (row - 1) * nw, a.begin() + row * nw,
                                                       [](int x) { return x == 0; }))
                                return;
                            if (used + std::accumulate(m.begin() + row, m.end(), 0) > max_lifted)
                                return;
                        }
                        const int weight = m[row];
                        for (int k = 0; used + k * weight <= max_lifted; ++k) {
                            a[cell] = k;
                            fill(cell + 1, used + k * weight);
                        }
                        a[cell] = 0;
                    };
                    fill(0, 0);
                    return;
                }
                for (int k = (i ? m[i - 1] : 1); k <= max_lifted; ++k) {
                    m[i] = k;
                    mult(i + 1);
                }
            };
            mult(0);
        }
}

inline AlgebraElement random_element(Rng& rng, const RelationPtr& rel) {
    std::normal_distribution<double> g;
    Eigen::VectorXcd c(rel->dimension());
    for (Eigen::Index i = 0; i < c.size(); ++i)
        c[i] = Complex(g(rng), g(rng));
    return AlgebraElement(rel, c);
}

inline RelationPtr relation_from_classes(const std::vector<int>& class_of) {
    std::vector<std::string> points, names;
    const int classes = class_of.empty() ? 0 : *std::max_element(class_of.begin(), class_of.end()) + 1;
    for (std::size_t i = 0; i < class_of.size(); ++i)
        points.push_back("p" + std::to_string(i));
    for (int c = 0; c < classes; ++c)
        names.push_back("k" + std::to_string(c));
    return std::make_shared<const FiniteEquivRelation>(points, names, class_of);
}

} // namespace testing_support
