#pragma once

#include <compare>
#include <string>
#include <unordered_map>
#include <vector>

namespace bratteli {

/// One edge record as it appears in a diagram file: identifiers only.
struct RawEdge {
    std::string id;
    std::string src;
    std::string rng;
};

/// Unresolved diagram description. `vertices[n]` lists V(n) for n = 0..N and
/// `edges[n - 1]` lists E(n) for n = 1..N.
struct RawDiagram {
    std::vector<std::vector<std::string>> vertices;
    std::vector<std::vector<RawEdge>> edges;
};

struct Violation {
    int level;
    std::string id;
    std::string rule;

    friend bool operator==(const Violation&, const Violation&) = default;
};

/// Lists every broken structural rule: level count, identifier uniqueness,
/// dangling endpoints, vertices that emit no edge, vertices (n >= 1) that
/// receive no edge. Empty iff the description is a valid Bratteli diagram.
std::vector<Violation> validate_diagram(const RawDiagram& raw);

/// A finite path e_{m+1} ... e_{m+k} with e_i in E(i). The empty path is
/// anchored at `start_vertex`. For nonempty paths `start_vertex` is s(e_{m+1}).
///
/// Ordering is lexicographic by (start_level, edge indices, start_vertex),
/// which is the public path order used by enumeration and all tables.
struct FinitePath {
    int start_level = 0;
    std::vector<int> edges;
    int start_vertex = 0;

    int length() const { return static_cast<int>(edges.size()); }
    int end_level() const { return start_level + length(); }

    friend auto operator<=>(const FinitePath&, const FinitePath&) = default;
    friend bool operator==(const FinitePath&, const FinitePath&) = default;
};

/// Graded Bratteli diagram of finite depth N >= 1. Immutable and always valid:
/// construction runs validate_diagram and throws DomainError on the first
/// violation.
class BratteliDiagram {
public:
    explicit BratteliDiagram(const RawDiagram& raw);

    int depth() const { return static_cast<int>(edge_src_.size()) - 1; }

    int vertex_count(int level) const;
    int edge_count(int level) const;

    const std::string& vertex_id(int level, int v) const { return vertex_ids_.at(level).at(v); }
    const std::string& edge_id(int level, int e) const { return edge_ids_.at(level).at(e); }
    const std::vector<std::string>& vertex_ids(int level) const { return vertex_ids_.at(level); }

    /// -1 when absent.
    int find_vertex(int level, const std::string& id) const;
    int find_edge(int level, const std::string& id) const;

    /// Source in V(level - 1) and range in V(level) of an edge of E(level).
    int src(int level, int e) const { return edge_src_[level][e]; }
    int rng(int level, int e) const { return edge_rng_[level][e]; }

    /// Edges of E(level + 1) leaving vertex v of V(level), ascending.
    const std::vector<int>& out_edges(int level, int v) const { return out_[level][v]; }
    /// Edges of E(level) arriving at vertex w of V(level), ascending.
    const std::vector<int>& in_edges(int level, int w) const { return in_[level][w]; }

    /// Throws DomainError("path not in diagram") if indices are out of range or
    /// consecutive edges do not compose.
    void check_path(const FinitePath& path) const;
    int source(const FinitePath& path) const;
    int range(const FinitePath& path) const;

    /// Parses comma-separated edge ids starting at `start_level`. An empty
    /// string is not accepted here; use `empty_path`.
    FinitePath path_from_ids(const std::string& comma_separated, int start_level = 0) const;
    FinitePath empty_path(int level, int v) const;
    std::string path_to_string(const FinitePath& path) const;

    RawDiagram to_raw() const;

    friend bool operator==(const BratteliDiagram& a, const BratteliDiagram& b) {
        return a.vertex_ids_ == b.vertex_ids_ && a.edge_ids_ == b.edge_ids_ &&
               a.edge_src_ == b.edge_src_ && a.edge_rng_ == b.edge_rng_;
    }

private:
    std::vector<std::vector<std::string>> vertex_ids_;
    std::vector<std::vector<std::string>> edge_ids_;   // slot 0 empty
    std::vector<std::vector<int>> edge_src_;           // slot 0 empty
    std::vector<std::vector<int>> edge_rng_;           // slot 0 empty
    std::vector<std::vector<std::vector<int>>> out_;   // out_[n][v] edges of E(n+1)
    std::vector<std::vector<std::vector<int>>> in_;    // in_[n][w] edges of E(n)
    std::vector<std::unordered_map<std::string, int>> vertex_index_;
    std::vector<std::unordered_map<std::string, int>> edge_index_;
};

/// All paths from `from_level` to `to_level` in lexicographic edge-index order.
/// When the levels coincide, one empty path per vertex of V(from_level).
std::vector<FinitePath> enumerate_paths(const BratteliDiagram& d, int from_level, int to_level);

/// Number of paths from V(0) ending at each vertex of V(level), by the
/// incidence recursion count(w) = sum over r(e) = w of count(s(e)).
std::vector<unsigned long long> path_counts(const BratteliDiagram& d, int level);

/// The relation R_n: same length and same range. Both paths must start at 0.
bool tail_related(const BratteliDiagram& d, const FinitePath& a, const FinitePath& b);

/// Concatenation a.b; requires r(a) = s(b) and matching levels.
FinitePath concat(const BratteliDiagram& d, const FinitePath& a, const FinitePath& b);

/// Prefix of length k.
FinitePath prefix(const FinitePath& path, int k);

} // namespace bratteli
