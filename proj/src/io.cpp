#include "bratteli/io.hpp"

#include "bratteli/errors.hpp"

#include <json.hpp>

#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>

namespace bratteli {

using Json = nlohmann::ordered_json;

namespace {

Json parse_json(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what());
    }
}

const Json& field(const Json& obj, const char* name) {
    if (!obj.is_object() || !obj.contains(name))
        throw ParseError(std::string("missing field \"") + name + "\"");
    return obj.at(name);
}

std::string as_string(const Json& j, const char* what) {
    if (!j.is_string())
        throw ParseError(std::string(what) + " must be a string");
    return j.get<std::string>();
}

Rational as_rational(const Json& j, const char* what) {
    if (j.is_string())
        return parse_rational(j.get<std::string>());
    if (j.is_number_integer())
        return Rational(j.get<long>());
    throw ParseError(std::string(what) + " must be a \"num/den\" string");
}

std::vector<std::string> string_array(const Json& j, const char* what) {
    if (!j.is_array())
        throw ParseError(std::string(what) + " must be an array of strings");
    std::vector<std::string> out;
    for (const auto& x : j)
        out.push_back(as_string(x, what));
    return out;
}

GroupElement parse_rho(const Json& j, std::optional<GroupSpec>& group) {
    if (j.is_array()) {
        GroupElement::Lattice coords;
        for (const auto& x : j) {
            if (!x.is_number_integer())
                throw ParseError("\"rho\" arrays must contain integers");
            coords.push_back(x.get<std::int64_t>());
        }
        if (coords.empty())
            throw ParseError("\"rho\" array must be nonempty");
        const auto g = GroupSpec::lattice(static_cast<int>(coords.size()));
        if (group && !(*group == g))
            throw ParseError("\"rho\" values disagree on the group");
        group = g;
        return GroupElement(std::move(coords));
    }
    if (j.is_string()) {
        const auto g = GroupSpec::positive_rationals();
        if (group && !(*group == g))
            throw ParseError("\"rho\" values disagree on the group");
        group = g;
        return parse_group_element(g, j.get<std::string>());
    }
    throw ParseError("\"rho\" must be an integer array or a \"num/den\" string");
}

} // namespace

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ParseError("cannot read '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

DiagramFile parse_diagram_file(const std::string& json_text) {
    const Json root = parse_json(json_text);
    DiagramFile file;
    const auto& vertices = field(root, "vertices");
    if (!vertices.is_array())
        throw ParseError("\"vertices\" must be an array of arrays");
    for (const auto& level : vertices)
        file.raw.vertices.push_back(string_array(level, "vertex ids"));
    const auto& edges = field(root, "edges");
    if (!edges.is_array())
        throw ParseError("\"edges\" must be an array of arrays");
    for (const auto& level : edges) {
        if (!level.is_array())
            throw ParseError("each edge level must be an array");
        std::vector<RawEdge> raw_level;
        std::vector<std::optional<Rational>> p_level;
        std::vector<std::optional<GroupElement>> rho_level;
        for (const auto& e : level) {
            raw_level.push_back({as_string(field(e, "id"), "edge id"), as_string(field(e, "src"), "edge src"),
                                 as_string(field(e, "rng"), "edge rng")});
            p_level.push_back(e.contains("p") ? std::optional(as_rational(e.at("p"), "\"p\"")) : std::nullopt);
            rho_level.push_back(e.contains("rho") ? std::optional(parse_rho(e.at("rho"), file.group)) : std::nullopt);
        }
        file.raw.edges.push_back(std::move(raw_level));
        file.p.push_back(std::move(p_level));
        file.rho.push_back(std::move(rho_level));
    }
    if (root.contains("nu0")) {
        const auto& nu0 = root.at("nu0");
        if (!nu0.is_object())
            throw ParseError("\"nu0\" must be an object mapping vertex ids to rationals");
        for (const auto& [key, value] : nu0.items())
            file.nu0.emplace_back(key, as_rational(value, "\"nu0\" value"));
    }
    return file;
}

DiagramFile read_diagram_file(const std::string& path) {
    return parse_diagram_file(read_text_file(path));
}

RandomWalk walk_from_file(const DiagramFile& file, std::shared_ptr<const BratteliDiagram> d) {
    EdgeFunction p(d->depth() + 1);
    for (int n = 1; n <= d->depth(); ++n)
        for (int e = 0; e < d->edge_count(n); ++e) {
            const auto& value = file.p.at(n - 1).at(e);
            if (!value)
                throw DomainError("transition probability",
                                  "edge '" + d->edge_id(n, e) + "' at level " + std::to_string(n) + " has no \"p\"");
            p[n].push_back(*value);
        }
    std::vector<Rational> nu0(d->vertex_count(0), Rational(0));
    if (file.nu0.empty()) {
        if (d->vertex_count(0) != 1)
            throw DomainError("initial distribution", "\"nu0\" is required when V(0) has several vertices");
        nu0[0] = 1;
    } else {
        std::vector<bool> seen(d->vertex_count(0), false);
        for (const auto& [id, value] : file.nu0) {
            const int v = d->find_vertex(0, id);
            if (v < 0)
                throw DomainError("initial distribution", "unknown vertex '" + id + "'");
            nu0[v] = value;
            seen[v] = true;
        }
        for (int v = 0; v < d->vertex_count(0); ++v)
            if (!seen[v])
                throw DomainError("initial distribution", "no value for vertex '" + d->vertex_id(0, v) + "'");
    }
    return build_walk(std::move(d), std::move(p), std::move(nu0));
}

EdgePotential potential_from_file(const DiagramFile& file, const BratteliDiagram& d) {
    if (!file.group)
        throw DomainError("edge potential", "no \"rho\" values in the diagram file");
    EdgePotential rho(d.depth() + 1);
    for (int n = 1; n <= d.depth(); ++n)
        for (int e = 0; e < d.edge_count(n); ++e) {
            const auto& value = file.rho.at(n - 1).at(e);
            if (!value)
                throw DomainError("edge potential", "edge '" + d.edge_id(n, e) + "' has no \"rho\"");
            rho[n].push_back(*value);
        }
    return rho;
}

InclusionFile parse_inclusion_file(const std::string& json_text) {
    const Json root = parse_json(json_text);
    const auto& vertices = field(root, "vertices");
    if (!vertices.is_array() || vertices.size() != 2)
        throw ParseError("inclusion graph needs exactly two vertex levels [V, V_]");
    const auto V = string_array(vertices[0], "vertex ids");
    const auto Vbar = string_array(vertices[1], "vertex ids");
    const auto& edges = field(root, "edges");
    if (!edges.is_array() || edges.size() != 1 || !edges[0].is_array())
        throw ParseError("inclusion graph needs exactly one edge level");

    auto index_of = [](const std::vector<std::string>& ids, const std::string& id, const char* what) {
        for (std::size_t i = 0; i < ids.size(); ++i)
            if (ids[i] == id)
                return static_cast<int>(i);
        throw ParseError(std::string("unknown ") + what + " '" + id + "'");
    };

    std::vector<std::string> E;
    std::vector<int> src, rng;
    std::vector<Rational> p;
    bool all_p = true;
    for (const auto& e : edges[0]) {
        E.push_back(as_string(field(e, "id"), "edge id"));
        src.push_back(index_of(V, as_string(field(e, "src"), "edge src"), "vertex"));
        rng.push_back(index_of(Vbar, as_string(field(e, "rng"), "edge rng"), "vertex"));
        if (e.contains("p"))
            p.push_back(as_rational(e.at("p"), "\"p\""));
        else
            all_p = false;
    }
    const auto& xs = field(root, "X");
    if (!xs.is_object())
        throw ParseError("\"X\" must be an object mapping points to vertices of V");
    std::vector<std::string> X;
    std::vector<int> x_to_v;
    for (const auto& [key, value] : xs.items()) {
        X.push_back(key);
        x_to_v.push_back(index_of(V, as_string(value, "\"X\" value"), "vertex"));
    }
    InclusionGraph graph(std::move(X), V, std::move(E), Vbar, std::move(x_to_v), std::move(src), std::move(rng));
    return InclusionFile{std::move(graph), all_p ? std::optional(std::move(p)) : std::nullopt};
}

InclusionFile read_inclusion_file(const std::string& path) {
    return parse_inclusion_file(read_text_file(path));
}

MeasureFile parse_measure_file(const std::string& json_text, const BratteliDiagram& d) {
    const Json root = parse_json(json_text);
    const auto& cylinders = field(root, "cylinders");
    if (!cylinders.is_object())
        throw ParseError("\"cylinders\" must be an object");
    MeasureFile out;
    for (const auto& [key, value] : cylinders.items()) {
        FinitePath path;
        if (!key.empty() && key[0] == '@') {
            const int v = d.find_vertex(0, key.substr(1));
            if (v < 0)
                throw ParseError("unknown root vertex in cylinder key '" + key + "'");
            path = FinitePath{0, {}, v};
        } else {
            try {
                path = d.path_from_ids(key, 0);
            } catch (const DomainError& e) {
                throw ParseError("bad cylinder key '" + key + "': " + e.what());
            }
        }
        out.depth = std::max(out.depth, path.length());
        out.table[path] = as_rational(value, "cylinder mass");
    }
    if (out.table.empty())
        throw ParseError("no cylinders given");
    if (out.depth > d.depth())
        throw ParseError("cylinders longer than the diagram");
    for (const auto& a : enumerate_paths(d, 0, out.depth))
        if (!out.table.count(a))
            throw ParseError("missing mass for cylinder " + d.path_to_string(a));
    for (int n = out.depth - 1; n >= 0; --n)
        for (const auto& a : enumerate_paths(d, 0, n)) {
            if (out.table.count(a))
                continue;
            Rational sum = 0;
            for (int e : d.out_edges(n, d.range(a))) {
                FinitePath ext = a;
                ext.edges.push_back(e);
                sum += out.table.at(ext);
            }
            out.table[a] = sum;
        }
    return out;
}

MeasureFile read_measure_file(const std::string& path, const BratteliDiagram& d) {
    return parse_measure_file(read_text_file(path), d);
}

std::vector<Rational> parse_terminal_file(const std::string& json_text, const BratteliDiagram& d) {
    const Json root = parse_json(json_text);
    if (!root.is_object())
        throw ParseError("terminal file must map vertex ids to rationals");
    const int depth = d.depth();
    std::vector<Rational> out(d.vertex_count(depth), Rational(0));
    std::vector<bool> seen(out.size(), false);
    for (const auto& [key, value] : root.items()) {
        const int v = d.find_vertex(depth, key);
        if (v < 0)
            throw ParseError("'" + key + "' is not a vertex of V(" + std::to_string(depth) + ")");
        out[v] = as_rational(value, "terminal value");
        seen[v] = true;
    }
    for (int v = 0; v < d.vertex_count(depth); ++v)
        if (!seen[v])
            throw ParseError("no terminal value for vertex '" + d.vertex_id(depth, v) + "'");
    return out;
}

std::vector<Rational> read_terminal_file(const std::string& path, const BratteliDiagram& d) {
    return parse_terminal_file(read_text_file(path), d);
}

void Table::add(std::vector<Cell> row) {
    if (row.size() != columns_.size())
        throw std::logic_error("table row has the wrong number of cells");
    rows_.push_back(std::move(row));
}

std::string format_double(double x) {
    std::ostringstream out;
    out.precision(17);
    out << x;
    return out.str();
}

namespace {

std::string cell_text(const Table::Cell& cell) {
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::string>)
                return v;
            else if constexpr (std::is_same_v<T, long long>)
                return std::to_string(v);
            else if constexpr (std::is_same_v<T, double>)
                return format_double(v);
            else
                return to_string(v);
        },
        cell);
}

Json integer_json(const mpz_class& z) {
    if (z.fits_slong_p())
        return Json(z.get_si());
    return Json(z.get_str());
}

} // namespace

void Table::write_tsv(std::ostream& out) const {
    for (std::size_t i = 0; i < columns_.size(); ++i)
        out << (i ? "\t" : "") << columns_[i];
    out << '\n';
    for (const auto& row : rows_) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out << (i ? "\t" : "") << cell_text(row[i]);
        out << '\n';
    }
}

std::string Table::to_json() const {
    Json arr = Json::array();
    for (const auto& row : rows_) {
        Json obj = Json::object();
        for (std::size_t i = 0; i < row.size(); ++i)
            obj[columns_[i]] = std::visit(
                [](const auto& v) -> Json {
                    using T = std::decay_t<decltype(v)>;
                    if constexpr (std::is_same_v<T, Rational>)
                        return Json{{"num", integer_json(v.get_num())}, {"den", integer_json(v.get_den())}};
                    else
                        return Json(v);
                },
                row[i]);
        arr.push_back(std::move(obj));
    }
    return arr.dump(2);
}

} // namespace bratteli
