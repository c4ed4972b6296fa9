#include "bratteli/cli.hpp"

#include "bratteli/errors.hpp"
#include "bratteli/harmonic.hpp"
#include "bratteli/io.hpp"
#include "bratteli/skew.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <ostream>
#include <sstream>

namespace bratteli {

namespace {

struct Output {
    std::vector<std::pair<std::string, Table>> sections;
    std::vector<std::string> notes;
    /// Nonempty when the computation found a violated invariant.
    std::string failure_invariant;
    std::string failure_detail;

    Table& section(const std::string& name, std::vector<std::string> columns) {
        sections.emplace_back(name, Table(std::move(columns)));
        return sections.back().second;
    }
};

void emit(const Output& o, const std::string& format, std::ostream& out) {
    if (format == "json") {
        if (o.sections.size() == 1 && o.notes.empty()) {
            out << o.sections.front().second.to_json() << '\n';
            return;
        }
        nlohmann::ordered_json obj = nlohmann::ordered_json::object();
        for (const auto& [name, table] : o.sections)
            obj[name] = nlohmann::ordered_json::parse(table.to_json());
        if (!o.notes.empty())
            obj["checks"] = o.notes;
        out << obj.dump(2) << '\n';
        return;
    }
    const bool titled = o.sections.size() > 1;
    for (std::size_t i = 0; i < o.sections.size(); ++i) {
        if (i)
            out << '\n';
        if (titled)
            out << "# " << o.sections[i].first << '\n';
        o.sections[i].second.write_tsv(out);
    }
    for (const auto& line : o.notes)
        out << line << '\n';
}

struct Loaded {
    DiagramFile file;
    std::shared_ptr<const BratteliDiagram> diagram;
};

Loaded load_diagram(const std::string& path) {
    Loaded l{read_diagram_file(path), nullptr};
    l.diagram = std::make_shared<const BratteliDiagram>(l.file.raw);
    return l;
}

RandomWalk load_walk(const std::string& path) {
    auto l = load_diagram(path);
    return walk_from_file(l.file, l.diagram);
}

Output cmd_validate(const std::string& input) {
    const auto file = read_diagram_file(input);
    Output o;
    auto& t = o.section("violations", {"level", "id", "rule"});
    const auto violations = validate_diagram(file.raw);
    for (const auto& v : violations)
        t.add({static_cast<long long>(v.level), v.id, v.rule});
    if (!violations.empty()) {
        o.failure_invariant = "invalid diagram";
        o.failure_detail = std::to_string(violations.size()) + " violation(s)";
    }
    return o;
}

Output cmd_measure(const std::string& input, std::optional<int> depth) {
    const auto w = load_walk(input);
    const int n = depth.value_or(w.depth());
    if (n < 0 || n > w.depth())
        throw DomainError("depth", "requested " + std::to_string(n) + ", diagram has depth " + std::to_string(w.depth()));
    Output o;
    auto& t = o.section("cylinders", {"level", "path", "value"});
    for (const auto& a : enumerate_paths(w.diagram(), 0, n))
        t.add({static_cast<long long>(n), w.diagram().path_to_string(a), cylinder_measure(w, a)});
    return o;
}

Output cmd_cotransition(const std::string& input) {
    const auto w = load_walk(input);
    Output o;
    auto& t = o.section("cotransition", {"level", "id", "value"});
    for (int n = 1; n <= w.depth(); ++n)
        for (int e = 0; e < w.diagram().edge_count(n); ++e)
            t.add({static_cast<long long>(n), w.diagram().edge_id(n, e), w.q(n, e)});
    return o;
}

Output cmd_distributions(const std::string& input) {
    const auto w = load_walk(input);
    Output o;
    auto& t = o.section("distributions", {"level", "id", "value"});
    for (int n = 0; n <= w.depth(); ++n)
        for (int v = 0; v < w.diagram().vertex_count(n); ++v)
            t.add({static_cast<long long>(n), w.diagram().vertex_id(n, v), w.nu(n, v)});
    return o;
}

Output cmd_rn(const std::string& input, const std::string& a_text, const std::string& b_text) {
    const auto w = load_walk(input);
    const auto a = w.diagram().path_from_ids(a_text, 0);
    const auto b = w.diagram().path_from_ids(b_text, 0);
    Output o;
    auto& t = o.section("radon_nikodym", {"a", "b", "value"});
    t.add({w.diagram().path_to_string(a), w.diagram().path_to_string(b), radon_nikodym(w, a, b)});
    return o;
}

Output cmd_harmonic(const std::string& input, const std::string& terminal_path) {
    const auto w = load_walk(input);
    const auto terminal = read_terminal_file(terminal_path, w.diagram());
    const auto h = harmonic_from_terminal(w, terminal);
    Output o;
    auto& t = o.section("harmonic", {"level", "vertex", "value"});
    for (int n = 0; n <= w.depth(); ++n)
        for (int v = 0; v < w.diagram().vertex_count(n); ++v)
            t.add({static_cast<long long>(n), w.diagram().vertex_id(n, v), h.h[n][v]});
    return o;
}

Output cmd_decompose(const std::string& input) {
    const auto w = load_walk(input);
    Output o;
    auto& t = o.section("components", {"component", "weight", "terminal"});
    long long i = 0;
    for (const auto& c : ergodic_components(w))
        t.add({i++, c.weight, w.diagram().vertex_id(w.depth(), c.terminal)});
    return o;
}

Output cmd_qcheck(const std::string& input, const std::string& measure_path) {
    const auto w = load_walk(input);
    const auto m = read_measure_file(measure_path, w.diagram());
    const auto report = check_q_measure(w.diagram(), w.cotransition(), m.table, m.depth);
    Output o;
    auto& t = o.section("qcheck", {"result", "level", "witness", "mass", "expected"});
    if (report.ok) {
        t.add({std::string("ok"), static_cast<long long>(m.depth), std::string(""), Rational(1), Rational(1)});
    } else {
        const auto witness = w.diagram().path_to_string(*report.witness);
        t.add({std::string("fail"), static_cast<long long>(report.level), witness, report.mass, report.expected});
        o.failure_invariant = "q-measure";
        o.failure_detail = "m(" + witness + ") = " + to_string(report.mass) + ", expected " + to_string(report.expected);
    }
    return o;
}

std::vector<Rational> graph_transition(const InclusionFile& f) {
    if (!f.p)
        throw DomainError("transition probability", "every edge of the inclusion graph needs \"p\"");
    return *f.p;
}

Output cmd_expect(const std::string& graph_path) {
    auto f = read_inclusion_file(graph_path);
    const ModelExpectation me(f.graph, graph_transition(f));
    const auto& g = me.graph();
    const auto Q = expectation_map(me);
    Output o;
    auto& units = o.section("expectation", {"unit", "x", "y", "re", "im"});
    const auto& big = *g.big();
    const auto& small = *g.small();
    for (int i = 0; i < big.dimension(); ++i) {
        const auto [u, v] = big.pair_at(i);
        const auto image = model_expectation(me, AlgebraElement::unit(g.big(), u, v));
        const std::string unit = "e(" + big.point(u) + "," + big.point(v) + ")";
        for (int k = 0; k < small.dimension(); ++k) {
            const auto [x, y] = small.pair_at(k);
            const Complex c = image(x, y);
            if (std::abs(c) > kAlgebraTolerance)
                units.add({unit, small.point(x), small.point(y), c.real(), c.imag()});
        }
    }
    const auto report = verify_expectation(g.big(), Q, included_basis(g));
    auto& axioms = o.section("axioms", {"check", "passed", "defect"});
    for (const auto& c : report.checks) {
        axioms.add({c.name, std::string(c.passed ? "yes" : "no"), c.defect});
        if (!c.passed && o.failure_invariant.empty()) {
            o.failure_invariant = "conditional expectation";
            o.failure_detail = c.name + " fails (defect " + format_double(c.defect) + ")";
        }
    }
    return o;
}

Output cmd_extractp(const std::string& graph_path) {
    auto f = read_inclusion_file(graph_path);
    const auto p = graph_transition(f);
    const ModelExpectation me(f.graph, p);
    const auto recovered = extract_transition(expectation_map(me), me.graph());
    Output o;
    auto& t = o.section("transition", {"edge", "p"});
    for (int c = 0; c < me.graph().edge_count(); ++c)
        t.add({me.graph().edge_name(c), recovered[c]});
    return o;
}

std::string pascal_word(const FinitePath& a) {
    std::string w;
    for (int e : a.edges)
        w += (e % 2) ? '1' : '0';
    return w;
}

Output cmd_pascal(int depth, const std::string& t_text) {
    constexpr int kMaxDepth = 16;
    if (depth > kMaxDepth)
        throw DomainError("pascal", "depth above " + std::to_string(kMaxDepth) + " is not supported");
    const auto t = parse_rational(t_text);
    const auto model = pascal_diagram(depth, t);
    const auto reference = pascal_diagram(depth, ratio(1, 2));
    const auto& d = *model.diagram;
    const auto& w = model.walk;
    Output o;

    bool closed_form = true;
    bool same_as_reference = true;
    for (int n = 1; n <= depth; ++n)
        for (int e = 0; e < d.edge_count(n); ++e) {
            const int k_end = d.rng(n, e);
            const Rational expected = (e % 2) ? ratio(k_end, n) : Rational(1 - ratio(k_end, n));
            if (w.q(n, e) != expected)
                closed_form = false;
            if (w.q(n, e) != reference.walk.q(n, e))
                same_as_reference = false;
        }

    auto& table = o.section("pascal", {"path", "k", "q", "expected"});
    bool path_formula = true;
    const auto paths = enumerate_paths(d, 0, depth);
    std::vector<std::vector<const FinitePath*>> by_end(depth + 1);
    for (const auto& a : paths) {
        const int k = d.range(a);
        const Rational q = cotransition_of_path(w, a);
        const Rational expected = 1 / binomial(depth, k);
        if (q != expected)
            path_formula = false;
        table.add({pascal_word(a), static_cast<long long>(k), q, expected});
        by_end[k].push_back(&a);
    }

    // All tail pairs when affordable, otherwise every path against its class representative.
    constexpr std::size_t kPairBudget = 200000;
    std::size_t pairs = 0;
    for (const auto& cls : by_end)
        pairs += cls.size() * cls.size();
    bool rn_one = true;
    for (const auto& cls : by_end)
        for (std::size_t i = 0; i < cls.size() && rn_one; ++i)
            for (std::size_t j = 0; j < (pairs <= kPairBudget ? cls.size() : 1); ++j)
                if (radon_nikodym(w, *cls[i], *cls[j]) != 1) {
                    rn_one = false;
                    break;
                }

    auto line = [&](const std::string& name, bool ok) {
        o.notes.push_back(name + ": " + (ok ? "OK" : "FAIL"));
        if (!ok && o.failure_invariant.empty()) {
            o.failure_invariant = "pascal";
            o.failure_detail = name + " fails";
        }
    };
    line("q_n(n,k) == (1-k/n, k/n)", closed_form);
    line("q independent of t", same_as_reference);
    line("q(path) == 1/C(n,k)", path_formula);
    line("D == 1", rn_one);
    return o;
}

Output cmd_skew(const std::string& input, const std::string& window_text) {
    auto l = load_diagram(input);
    auto rho = potential_from_file(l.file, *l.diagram);
    const GroupSpec g = *l.file.group;
    const auto window = window_text.empty() ? std::vector<GroupElement>{GroupElement::identity(g)}
                                            : parse_group_elements(g, window_text);
    const auto sd = skew_product(l.diagram, g, std::move(rho), window);
    const auto& s = *sd.skewed;
    Output o;
    auto& vt = o.section("vertices", {"level", "id", "base", "g"});
    for (int n = 0; n <= s.depth(); ++n)
        for (int v = 0; v < s.vertex_count(n); ++v) {
            const auto& [base, elem] = sd.vertex_labels[n][v];
            vt.add({static_cast<long long>(n), s.vertex_id(n, v), l.diagram->vertex_id(n, base), elem.to_string()});
        }
    auto& et = o.section("edges", {"level", "id", "src", "rng"});
    for (int n = 1; n <= s.depth(); ++n)
        for (int e = 0; e < s.edge_count(n); ++e)
            et.add({static_cast<long long>(n), s.edge_id(n, e), s.vertex_id(n - 1, s.src(n, e)),
                    s.vertex_id(n, s.rng(n, e))});
    const auto problems = check_skew_laws(sd);
    if (!problems.empty()) {
        o.failure_invariant = "skew-product laws";
        o.failure_detail = problems.front();
    }
    return o;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact random walks on Bratteli diagrams", "bratteli"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string format = "tsv";
    app.add_option("--format", format, "Output format")->check(CLI::IsMember({"tsv", "json"}));

    std::string input, aux, a_text, b_text, t_text = "1/2", window;
    std::optional<int> depth;
    int pascal_depth = 8;

    auto with_input = [&](const char* name, const char* help) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("input", input, "Diagram file")->required();
        return sub;
    };
    auto* validate = with_input("validate", "Check the diagram axioms");
    auto* measure = with_input("measure", "Cylinder measures of the Markov measure");
    measure->add_option("--depth", depth, "Path length");
    auto* cotrans = with_input("cotransition", "Cotransition probabilities q");
    auto* dists = with_input("distributions", "Distributions nu_n");
    auto* rn = with_input("rn", "Radon-Nikodym cocycle D(a, b)");
    rn->add_option("--a", a_text, "Path a (comma-separated edge ids)")->required();
    rn->add_option("--b", b_text, "Path b (comma-separated edge ids)")->required();
    auto* harmonic = with_input("harmonic", "Harmonic sequence from terminal values");
    harmonic->add_option("--terminal", aux, "Terminal values file")->required();
    auto* decompose = with_input("decompose", "Ergodic components");
    auto* qcheck = with_input("qcheck", "Check a measure against the walk's cotransition");
    qcheck->add_option("--measure", aux, "Measure file")->required();
    auto* expect = app.add_subcommand("expect", "Model conditional expectation and its axioms");
    expect->add_option("--graph", aux, "Inclusion graph file")->required();
    auto* extractp = app.add_subcommand("extractp", "Recover p from the model expectation");
    extractp->add_option("--graph", aux, "Inclusion graph file")->required();
    auto* pascal = app.add_subcommand("pascal", "Pascal walk verification");
    pascal->add_option("--depth", pascal_depth, "Depth")->check(CLI::Range(1, 64));
    pascal->add_option("--t", t_text, "Parameter 0 < t < 1");
    auto* skew = with_input("skew", "Skew product over a window");
    skew->add_option("--rho-window,--window", window, "Initial window, elements separated by ';'");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "parse error: " << e.what() << '\n';
        return 2;
    }

    try {
        Output o;
        if (validate->parsed())
            o = cmd_validate(input);
        else if (measure->parsed())
            o = cmd_measure(input, depth);
        else if (cotrans->parsed())
            o = cmd_cotransition(input);
        else if (dists->parsed())
            o = cmd_distributions(input);
        else if (rn->parsed())
            o = cmd_rn(input, a_text, b_text);
        else if (harmonic->parsed())
            o = cmd_harmonic(input, aux);
        else if (decompose->parsed())
            o = cmd_decompose(input);
        else if (qcheck->parsed())
            o = cmd_qcheck(input, aux);
        else if (expect->parsed())
            o = cmd_expect(aux);
        else if (extractp->parsed())
            o = cmd_extractp(aux);
        else if (pascal->parsed())
            o = cmd_pascal(pascal_depth, t_text);
        else
            o = cmd_skew(input, window);
        emit(o, format, out);
        if (!o.failure_invariant.empty()) {
            err << "error: " << o.failure_invariant << ": " << o.failure_detail << '\n';
            return 1;
        }
        return 0;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << '\n';
        return 2;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "error: internal: " << e.what() << '\n';
        return 1;
    }
}

} // namespace bratteli
