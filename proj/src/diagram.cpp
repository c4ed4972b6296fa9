#include "bratteli/diagram.hpp"

#include "bratteli/errors.hpp"

#include <sstream>
#include <unordered_set>

namespace bratteli {

std::vector<Violation> validate_diagram(const RawDiagram& raw) {
    std::vector<Violation> out;
    const int levels = static_cast<int>(raw.vertices.size());
    if (levels < 2)
        out.push_back({0, "", "diagram needs depth >= 1"});
    if (static_cast<int>(raw.edges.size()) != levels - 1) {
        out.push_back({0, "", "edge level count must equal vertex level count minus one"});
        return out;
    }

    std::vector<std::unordered_map<std::string, int>> index(levels);
    for (int n = 0; n < levels; ++n) {
        if (raw.vertices[n].empty())
            out.push_back({n, "", "level has no vertices"});
        for (int v = 0; v < static_cast<int>(raw.vertices[n].size()); ++v) {
            const auto& id = raw.vertices[n][v];
            if (!index[n].emplace(id, v).second)
                out.push_back({n, id, "duplicate vertex id"});
        }
    }

    std::vector<std::vector<bool>> emits(levels), receives(levels);
    for (int n = 0; n < levels; ++n) {
        emits[n].assign(raw.vertices[n].size(), false);
        receives[n].assign(raw.vertices[n].size(), false);
    }
    for (int n = 1; n < levels; ++n) {
        std::unordered_set<std::string> seen;
        for (const auto& e : raw.edges[n - 1]) {
            if (!seen.insert(e.id).second)
                out.push_back({n, e.id, "duplicate edge id"});
            const auto s = index[n - 1].find(e.src);
            const auto r = index[n].find(e.rng);
            if (s == index[n - 1].end())
                out.push_back({n, e.id, "source '" + e.src + "' not in V(" + std::to_string(n - 1) + ")"});
            else
                emits[n - 1][s->second] = true;
            if (r == index[n].end())
                out.push_back({n, e.id, "range '" + e.rng + "' not in V(" + std::to_string(n) + ")"});
            else
                receives[n][r->second] = true;
        }
    }
    for (int n = 0; n + 1 < levels; ++n)
        for (std::size_t v = 0; v < raw.vertices[n].size(); ++v)
            if (!emits[n][v])
                out.push_back({n, raw.vertices[n][v], "emits no edge"});
    for (int n = 1; n < levels; ++n)
        for (std::size_t v = 0; v < raw.vertices[n].size(); ++v)
            if (!receives[n][v])
                out.push_back({n, raw.vertices[n][v], "receives no edge"});
    return out;
}

BratteliDiagram::BratteliDiagram(const RawDiagram& raw) {
    const auto violations = validate_diagram(raw);
    if (!violations.empty()) {
        const auto& v = violations.front();
        throw DomainError("invalid diagram", v.rule + " (level " + std::to_string(v.level) +
                                                 (v.id.empty() ? "" : ", '" + v.id + "'") + ")");
    }
    const int levels = static_cast<int>(raw.vertices.size());
    vertex_ids_ = raw.vertices;
    vertex_index_.resize(levels);
    edge_index_.resize(levels);
    edge_ids_.resize(levels);
    edge_src_.resize(levels);
    edge_rng_.resize(levels);
    out_.resize(levels);
    in_.resize(levels);
    for (int n = 0; n < levels; ++n) {
        for (int v = 0; v < static_cast<int>(vertex_ids_[n].size()); ++v)
            vertex_index_[n].emplace(vertex_ids_[n][v], v);
        out_[n].resize(vertex_ids_[n].size());
        in_[n].resize(vertex_ids_[n].size());
    }
    for (int n = 1; n < levels; ++n) {
        const auto& level_edges = raw.edges[n - 1];
        for (int e = 0; e < static_cast<int>(level_edges.size()); ++e) {
            const int s = vertex_index_[n - 1].at(level_edges[e].src);
            const int r = vertex_index_[n].at(level_edges[e].rng);
            edge_ids_[n].push_back(level_edges[e].id);
            edge_src_[n].push_back(s);
            edge_rng_[n].push_back(r);
            edge_index_[n].emplace(level_edges[e].id, e);
            out_[n - 1][s].push_back(e);
            in_[n][r].push_back(e);
        }
    }
}

int BratteliDiagram::vertex_count(int level) const {
    return static_cast<int>(vertex_ids_.at(level).size());
}

int BratteliDiagram::edge_count(int level) const {
    if (level < 1 || level > depth())
        throw DomainError("level out of range", std::to_string(level));
    return static_cast<int>(edge_ids_[level].size());
}

int BratteliDiagram::find_vertex(int level, const std::string& id) const {
    if (level < 0 || level > depth())
        return -1;
    const auto it = vertex_index_[level].find(id);
    return it == vertex_index_[level].end() ? -1 : it->second;
}

int BratteliDiagram::find_edge(int level, const std::string& id) const {
    if (level < 1 || level > depth())
        return -1;
    const auto it = edge_index_[level].find(id);
    return it == edge_index_[level].end() ? -1 : it->second;
}

void BratteliDiagram::check_path(const FinitePath& path) const {
    if (path.start_level < 0 || path.end_level() > depth())
        throw DomainError("path not in diagram", "levels out of range");
    if (path.start_vertex < 0 || path.start_vertex >= vertex_count(path.start_level))
        throw DomainError("path not in diagram", "start vertex out of range");
    int at = path.start_vertex;
    for (int i = 0; i < path.length(); ++i) {
        const int level = path.start_level + i + 1;
        const int e = path.edges[i];
        if (e < 0 || e >= edge_count(level))
            throw DomainError("path not in diagram", "edge index out of range at level " + std::to_string(level));
        if (edge_src_[level][e] != at)
            throw DomainError("path not in diagram",
                              "edge '" + edge_ids_[level][e] + "' does not start where the path is");
        at = edge_rng_[level][e];
    }
}

int BratteliDiagram::source(const FinitePath& path) const {
    return path.start_vertex;
}

int BratteliDiagram::range(const FinitePath& path) const {
    if (path.edges.empty())
        return path.start_vertex;
    return edge_rng_[path.end_level()][path.edges.back()];
}

FinitePath BratteliDiagram::path_from_ids(const std::string& comma_separated, int start_level) const {
    if (start_level < 0 || start_level > depth())
        throw DomainError("path not in diagram", "start level " + std::to_string(start_level) + " out of range");
    if (!comma_separated.empty() && comma_separated[0] == '@') {
        const int v = find_vertex(start_level, comma_separated.substr(1));
        if (v < 0)
            throw DomainError("path not in diagram", "no vertex '" + comma_separated.substr(1) + "' at level " +
                                                         std::to_string(start_level));
        return FinitePath{start_level, {}, v};
    }
    // Commas inside parentheses belong to the id, e.g. "(0,0,1),(1,1,0)".
    std::vector<std::string> ids(1);
    int nesting = 0;
    for (char c : comma_separated) {
        if (c == '(' || c == '[')
            ++nesting;
        else if (c == ')' || c == ']')
            --nesting;
        if (c == ',' && nesting == 0)
            ids.emplace_back();
        else
            ids.back() += c;
    }
    if (comma_separated.empty())
        throw ParseError("empty path specification");
    FinitePath path;
    path.start_level = start_level;
    int level = start_level;
    for (const auto& id : ids) {
        ++level;
        const int e = level <= depth() ? find_edge(level, id) : -1;
        if (e < 0)
            throw DomainError("path not in diagram", "no edge '" + id + "' at level " + std::to_string(level));
        path.edges.push_back(e);
    }
    path.start_vertex = edge_src_[start_level + 1][path.edges.front()];
    check_path(path);
    return path;
}

FinitePath BratteliDiagram::empty_path(int level, int v) const {
    FinitePath path{level, {}, v};
    check_path(path);
    return path;
}

std::string BratteliDiagram::path_to_string(const FinitePath& path) const {
    if (path.edges.empty())
        return "@" + vertex_id(path.start_level, path.start_vertex);
    std::string out;
    for (int i = 0; i < path.length(); ++i) {
        if (i)
            out += ',';
        out += edge_ids_[path.start_level + i + 1][path.edges[i]];
    }
    return out;
}

RawDiagram BratteliDiagram::to_raw() const {
    RawDiagram raw;
    raw.vertices = vertex_ids_;
    for (int n = 1; n <= depth(); ++n) {
        std::vector<RawEdge> level;
        for (int e = 0; e < edge_count(n); ++e)
            level.push_back({edge_ids_[n][e], vertex_ids_[n - 1][edge_src_[n][e]], vertex_ids_[n][edge_rng_[n][e]]});
        raw.edges.push_back(std::move(level));
    }
    return raw;
}

namespace {

void extend(const BratteliDiagram& d, FinitePath& path, int to_level, std::vector<FinitePath>& out) {
    if (path.end_level() == to_level) {
        out.push_back(path);
        return;
    }
    const int level = path.end_level();
    for (int e : d.out_edges(level, d.range(path))) {
        path.edges.push_back(e);
        extend(d, path, to_level, out);
        path.edges.pop_back();
    }
}

} // namespace

std::vector<FinitePath> enumerate_paths(const BratteliDiagram& d, int from_level, int to_level) {
    if (from_level < 0 || from_level > to_level || to_level > d.depth())
        throw DomainError("level out of range",
                          std::to_string(from_level) + ".." + std::to_string(to_level));
    std::vector<FinitePath> out;
    if (from_level == to_level) {
        for (int v = 0; v < d.vertex_count(from_level); ++v)
            out.push_back(FinitePath{from_level, {}, v});
        return out;
    }
    // Iterating first edges in index order gives the lexicographic order even
    // across different start vertices.
    for (int e = 0; e < d.edge_count(from_level + 1); ++e) {
        FinitePath path{from_level, {e}, d.src(from_level + 1, e)};
        extend(d, path, to_level, out);
    }
    return out;
}

std::vector<unsigned long long> path_counts(const BratteliDiagram& d, int level) {
    std::vector<unsigned long long> counts(d.vertex_count(0), 1);
    for (int n = 1; n <= level; ++n) {
        std::vector<unsigned long long> next(d.vertex_count(n), 0);
        for (int e = 0; e < d.edge_count(n); ++e)
            next[d.rng(n, e)] += counts[d.src(n, e)];
        counts = std::move(next);
    }
    return counts;
}

bool tail_related(const BratteliDiagram& d, const FinitePath& a, const FinitePath& b) {
    if (a.start_level != 0 || b.start_level != 0)
        throw DomainError("path not in diagram", "tail relation needs paths starting at level 0");
    d.check_path(a);
    d.check_path(b);
    return a.length() == b.length() && d.range(a) == d.range(b);
}

FinitePath concat(const BratteliDiagram& d, const FinitePath& a, const FinitePath& b) {
    if (a.end_level() != b.start_level || d.range(a) != b.start_vertex)
        throw DomainError("path not in diagram", "paths do not compose");
    FinitePath out = a;
    out.edges.insert(out.edges.end(), b.edges.begin(), b.edges.end());
    return out;
}

FinitePath prefix(const FinitePath& path, int k) {
    FinitePath out{path.start_level, {path.edges.begin(), path.edges.begin() + k}, path.start_vertex};
    return out;
}

} // namespace bratteli
