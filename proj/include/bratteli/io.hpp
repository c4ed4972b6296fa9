#pragma once

#include "bratteli/diagram.hpp"
#include "bratteli/group.hpp"
#include "bratteli/inclusion.hpp"
#include "bratteli/skew.hpp"
#include "bratteli/walk.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <variant>

namespace bratteli {

// Diagram files are JSON:
//
//   {
//     "vertices": [["o"], ["a", "b"], ...],              // V(0), V(1), ...
//     "edges": [[{"id": "e1", "src": "o", "rng": "a", "p": "1/3", "rho": [1]}, ...], ...],
//     "nu0": {"o": "1/1"}
//   }
//
// "p" and "rho" are optional per edge; "nu0" is optional when V(0) has one
// vertex. "rho" is an integer array (lattice Z^d) or a "num/den" string
// (positive rationals); all edges must agree on the kind.

struct DiagramFile {
    RawDiagram raw;
    /// p[n - 1][e] for edge e of E(n), when given.
    std::vector<std::vector<std::optional<Rational>>> p;
    std::vector<std::pair<std::string, Rational>> nu0;
    std::optional<GroupSpec> group;
    std::vector<std::vector<std::optional<GroupElement>>> rho;
};

/// Throws ParseError on malformed JSON, wrong field types or bad rationals.
DiagramFile parse_diagram_file(const std::string& json_text);
DiagramFile read_diagram_file(const std::string& path);

/// Builds the walk from the "p" fields and "nu0". Missing values are a
/// DomainError("transition probability" / "initial distribution").
RandomWalk walk_from_file(const DiagramFile& file, std::shared_ptr<const BratteliDiagram> d);

/// Builds the potential from the "rho" fields; DomainError("edge potential")
/// if an edge has none.
EdgePotential potential_from_file(const DiagramFile& file, const BratteliDiagram& d);

// Inclusion graph files reuse the diagram format restricted to one floor
// (vertices = [V, V_], one edge level with "p") plus a mapping of X:
//
//   {"vertices": [["v"], ["w1", "w2"]],
//    "edges": [[{"id": "a", "src": "v", "rng": "w1", "p": "1/3"}, ...]],
//    "X": {"x1": "v", "x2": "v"}}

struct InclusionFile {
    InclusionGraph graph;
    std::optional<std::vector<Rational>> p;
};

InclusionFile parse_inclusion_file(const std::string& json_text);
InclusionFile read_inclusion_file(const std::string& path);

/// Measure files: {"cylinders": {"e1,e2": "1/4", "@v": "1/2", ...}}. Keys are
/// comma-separated edge ids from level 0 ("@id" for the empty path at a root).
/// All cylinders of the maximal length must be present; shorter ones are
/// filled in by summing their extensions when absent.
struct MeasureFile {
    int depth = 0;
    CylinderTable table;
};

MeasureFile parse_measure_file(const std::string& json_text, const BratteliDiagram& d);
MeasureFile read_measure_file(const std::string& path, const BratteliDiagram& d);

/// Terminal files: {"vertex id": "num/den", ...} over V(N).
std::vector<Rational> parse_terminal_file(const std::string& json_text, const BratteliDiagram& d);
std::vector<Rational> read_terminal_file(const std::string& path, const BratteliDiagram& d);

std::string read_text_file(const std::string& path);

/// A deterministic output table, printed as TSV (rationals "num/den") or as a
/// JSON array of row objects (rationals {"num": .., "den": ..}).
class Table {
public:
    using Cell = std::variant<std::string, long long, double, Rational>;

    explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}
    void add(std::vector<Cell> row);

    const std::vector<std::string>& columns() const { return columns_; }
    const std::vector<std::vector<Cell>>& rows() const { return rows_; }

    void write_tsv(std::ostream& out) const;
    /// JSON value (array of objects) as text.
    std::string to_json() const;

private:
    std::vector<std::string> columns_;
    std::vector<std::vector<Cell>> rows_;
};

/// Doubles are printed with 17 significant digits (round-trip exact).
std::string format_double(double x);

} // namespace bratteli
