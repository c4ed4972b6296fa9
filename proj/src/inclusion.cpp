#include "bratteli/inclusion.hpp"

#include "bratteli/errors.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <map>
#include <random>

namespace bratteli {

namespace {

void require_surjective(const std::vector<int>& map, int target_size, const char* what) {
    std::vector<bool> hit(target_size, false);
    for (int t : map) {
        if (t < 0 || t >= target_size)
            throw DomainError("inclusion graph", std::string(what) + " maps outside its target");
        hit[t] = true;
    }
    for (int t = 0; t < target_size; ++t)
        if (!hit[t])
            throw DomainError("inclusion graph", std::string(what) + " is not surjective");
}

} // namespace

InclusionGraph::InclusionGraph(std::vector<std::string> X, std::vector<std::string> V, std::vector<std::string> E,
                               std::vector<std::string> V_, std::vector<int> x_to_v, std::vector<int> edge_src,
                               std::vector<int> edge_rng)
    : vertices_(std::move(V)), edges_(std::move(E)), targets_(std::move(V_)), x_to_v_(std::move(x_to_v)),
      edge_src_(std::move(edge_src)), edge_rng_(std::move(edge_rng)) {
    if (x_to_v_.size() != X.size())
        throw DomainError("inclusion graph", "r : X -> V must be defined on every point");
    if (edge_src_.size() != edges_.size() || edge_rng_.size() != edges_.size())
        throw DomainError("inclusion graph", "s and r must be defined on every edge");
    require_surjective(x_to_v_, vertex_count(), "r : X -> V");
    require_surjective(edge_src_, vertex_count(), "s : E -> V");
    require_surjective(edge_rng_, target_count(), "r : E -> V_");

    lifted_index_.assign(X.size(), std::vector<int>(edges_.size(), -1));
    std::vector<std::string> lifted_names;
    std::vector<int> lifted_target, lifted_edge;
    for (int x = 0; x < point_count(); ++x)
        for (int a = 0; a < edge_count(); ++a)
            if (x_to_v_[x] == edge_src_[a]) {
                lifted_index_[x][a] = static_cast<int>(lifted_.size());
                lifted_.emplace_back(x, a);
                lifted_names.push_back(X[x] + "." + edges_[a]);
                lifted_target.push_back(edge_rng_[a]);
                lifted_edge.push_back(a);
            }

    R_ = std::make_shared<const FiniteEquivRelation>(X, vertices_, x_to_v_);
    Rbig_ = std::make_shared<const FiniteEquivRelation>(lifted_names, targets_, lifted_target);
    R1_ = std::make_shared<const FiniteEquivRelation>(lifted_names, edges_, lifted_edge);

    std::map<std::pair<int, int>, int> parallel;
    for (int a = 0; a < edge_count(); ++a)
        parallel.emplace(std::make_pair(edge_src_[a], edge_rng_[a]), 0);
    std::vector<std::string> parallel_names;
    for (auto& [key, idx] : parallel) {
        idx = static_cast<int>(parallel_names.size());
        parallel_names.push_back(vertices_[key.first] + "->" + targets_[key.second]);
    }
    std::vector<int> edge_class;
    for (int a = 0; a < edge_count(); ++a)
        edge_class.push_back(parallel.at({edge_src_[a], edge_rng_[a]}));
    Rprime_ = std::make_shared<const FiniteEquivRelation>(edges_, parallel_names, edge_class);
}

int InclusionGraph::lifted(int x, int a) const {
    if (x < 0 || a < 0 || x >= point_count() || a >= edge_count())
        return -1;
    return lifted_index_[x][a];
}

AlgebraElement include_j(const InclusionGraph& g, const AlgebraElement& f) {
    if (!f.relation().same_as(*g.small()))
        throw DomainError("shape mismatch", "j expects an element of C*(R)");
    const auto& big = *g.big();
    AlgebraElement out(g.big());
    for (int i = 0; i < big.dimension(); ++i) {
        const auto [u, w] = big.pair_at(i);
        const auto [x, a] = g.lifted_at(u);
        const auto [y, b] = g.lifted_at(w);
        if (a == b)
            out.coefficients()[i] = f(x, y);
    }
    return out;
}

AlgebraElement commutant_embed_k(const InclusionGraph& g, const AlgebraElement& h) {
    if (!h.relation().same_as(*g.edge_relation()))
        throw DomainError("shape mismatch", "k expects an element of C*(R')");
    const auto& big = *g.big();
    AlgebraElement out(g.big());
    for (int i = 0; i < big.dimension(); ++i) {
        const auto [u, w] = big.pair_at(i);
        const auto [x, a] = g.lifted_at(u);
        const auto [y, b] = g.lifted_at(w);
        if (x == y)
            out.coefficients()[i] = h(a, b);
    }
    return out;
}

ModelExpectation::ModelExpectation(InclusionGraph graph, std::vector<Rational> p)
    : ModelExpectation(std::move(graph), std::move(p), true) {}

ModelExpectation ModelExpectation::unchecked(InclusionGraph graph, std::vector<Rational> p) {
    return ModelExpectation(std::move(graph), std::move(p), false);
}

ModelExpectation::ModelExpectation(InclusionGraph graph, std::vector<Rational> p, bool check)
    : graph_(std::move(graph)), p_(std::move(p)) {
    if (static_cast<int>(p_.size()) != graph_.edge_count())
        throw DomainError("transition probability", "need one value per edge");
    if (!check)
        return;
    std::vector<Rational> rows(graph_.vertex_count(), Rational(0));
    for (int c = 0; c < graph_.edge_count(); ++c) {
        if (sgn(p_[c]) <= 0)
            throw DomainError("transition probability", "not positive on edge '" + graph_.edge_name(c) + "'");
        rows[graph_.src(c)] += p_[c];
    }
    for (int v = 0; v < graph_.vertex_count(); ++v)
        if (rows[v] != 1)
            throw DomainError("transition probability",
                              "row sums to " + to_string(rows[v]) + " at vertex '" + graph_.vertex_name(v) + "'");
}

AlgebraElement model_expectation(const ModelExpectation& me, const AlgebraElement& f) {
    const auto& g = me.graph();
    if (!f.relation().same_as(*g.big()))
        throw DomainError("shape mismatch", "Q expects an element of C*(R_)");
    const auto& small = *g.small();
    AlgebraElement out(g.small());
    for (int i = 0; i < small.dimension(); ++i) {
        const auto [x, y] = small.pair_at(i);
        Complex acc = 0;
        for (int c = 0; c < g.edge_count(); ++c)
            if (g.src(c) == g.vertex_of(x))
                acc += me.p()[c].get_d() * f(g.lifted(x, c), g.lifted(y, c));
        out.coefficients()[i] = acc;
    }
    return out;
}

LinearMap expectation_map(const ModelExpectation& me) {
    const auto& g = me.graph();
    return matrix_of(g.big(), g.big(), [&](const AlgebraElement& f) { return include_j(g, model_expectation(me, f)); });
}

std::vector<AlgebraElement> included_basis(const InclusionGraph& g) {
    std::vector<AlgebraElement> out;
    for (const auto& unit : algebra_of(g.small()).matrix_units)
        out.push_back(include_j(g, unit));
    return out;
}

bool ExpectationReport::all_pass() const {
    for (const auto& c : checks)
        if (!c.passed)
            return false;
    return !checks.empty();
}

const ExpectationCheck* ExpectationReport::find(const std::string& name) const {
    for (const auto& c : checks)
        if (c.name == name)
            return &c;
    return nullptr;
}

namespace {

double max_abs(const LinearMap& m) {
    double best = 0;
    for (int k = 0; k < m.outerSize(); ++k)
        for (LinearMap::InnerIterator it(m, k); it; ++it)
            best = std::max(best, std::abs(it.value()));
    return best;
}

double min_block_eigenvalue(const AlgebraElement& f) {
    double best = std::numeric_limits<double>::infinity();
    for (int c = 0; c < f.relation().class_count(); ++c) {
        const Eigen::MatrixXcd b = f.block(c);
        const Eigen::MatrixXcd herm = (b + b.adjoint()) * 0.5;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(herm, Eigen::EigenvaluesOnly);
        best = std::min(best, eig.eigenvalues().minCoeff());
        // A non-Hermitian block is not positive.
        if ((b - b.adjoint()).cwiseAbs().maxCoeff() > kAlgebraTolerance)
            best = std::min(best, -(b - b.adjoint()).cwiseAbs().maxCoeff());
    }
    return best;
}

} // namespace

ExpectationReport verify_expectation(const RelationPtr& ambient, const LinearMap& Q,
                                     const std::vector<AlgebraElement>& subalgebra, double tol, std::uint64_t seed) {
    const int dim = ambient->dimension();
    if (Q.rows() != dim || Q.cols() != dim)
        throw DomainError("shape mismatch", "Q must act on the ambient algebra");
    ExpectationReport report;
    auto record = [&](std::string name, double defect, bool passed) {
        report.checks.push_back({std::move(name), passed, defect});
    };

    const auto one = AlgebraElement::identity(ambient);
    {
        const double d = max_abs_diff(apply(Q, ambient, one), one);
        record("unital", d, d <= tol);
    }
    {
        const LinearMap diff = Q * Q - Q;
        const double d = max_abs(diff);
        record("idempotent", d, d <= tol);
    }

    std::vector<AlgebraElement> sub;
    for (const auto& m : subalgebra)
        sub.push_back(restrict_or_extend(m, ambient));
    {
        Eigen::MatrixXcd b(dim, static_cast<Eigen::Index>(sub.size()));
        for (std::size_t i = 0; i < sub.size(); ++i)
            b.col(static_cast<Eigen::Index>(i)) = sub[i].coefficients();
        Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(b);
        qr.setThreshold(tol);
        const Eigen::Index rank = qr.rank();
        const Eigen::MatrixXcd basis = qr.householderQ() * Eigen::MatrixXcd::Identity(dim, rank);
        double worst = 0;
        for (int k = 0; k < Q.outerSize(); ++k) {
            Eigen::VectorXcd col = Eigen::VectorXcd::Zero(dim);
            for (LinearMap::InnerIterator it(Q, k); it; ++it)
                col[it.row()] = it.value();
            worst = std::max(worst, (col - basis * (basis.adjoint() * col)).norm());
        }
        record("range in subalgebra", worst, worst <= tol);
    }
    {
        double worst = 0;
        for (const auto& m : sub)
            worst = std::max(worst, max_abs_diff(apply(Q, ambient, m), m));
        record("identity on subalgebra", worst, worst <= tol);
    }
    {
        double worst = 0;
        for (const auto& m : sub) {
            const LinearMap L = left_multiplication(m);
            const LinearMap R = right_multiplication(m);
            const LinearMap dl = Q * L - L * Q;
            const LinearMap dr = Q * R - R * Q;
            worst = std::max({worst, max_abs(dl), max_abs(dr)});
        }
        record("bimodular", worst, worst <= tol);
    }
    {
        std::mt19937_64 gen(seed);
        std::uniform_real_distribution<double> coeff(-1.0, 1.0);
        double worst = std::numeric_limits<double>::infinity();
        for (int trial = 0; trial < 8; ++trial) {
            AlgebraElement f(ambient);
            for (int i = 0; i < dim; ++i)
                f.coefficients()[i] = Complex(coeff(gen), coeff(gen));
            worst = std::min(worst, min_block_eigenvalue(apply(Q, ambient, f.adjoint() * f)));
        }
        if (dim == 0)
            worst = 0;
        record("positive", worst, worst >= -tol);
    }
    {
        double worst = std::numeric_limits<double>::infinity();
        for (int c = 0; c < ambient->class_count(); ++c) {
            const auto& members = ambient->members(c);
            const int k = static_cast<int>(members.size());
            Eigen::MatrixXcd gram(k, k);
            for (int i = 0; i < k; ++i)
                for (int j = 0; j < k; ++j)
                    gram(i, j) = apply(Q, ambient, AlgebraElement::unit(ambient, members[i], members[j])).trace();
            const Eigen::MatrixXcd herm = (gram + gram.adjoint()) * 0.5;
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(herm, Eigen::EigenvaluesOnly);
            worst = std::min(worst, eig.eigenvalues().minCoeff());
        }
        if (ambient->class_count() == 0)
            worst = 0;
        record("faithful", worst, worst > tol);
    }
    return report;
}

AlgebraElement edge_projection(const InclusionGraph& g, int c) {
    AlgebraElement out(g.big());
    for (int x = 0; x < g.point_count(); ++x) {
        const int u = g.lifted(x, c);
        if (u >= 0)
            out.set(u, u, 1.0);
    }
    return out;
}

std::vector<Rational> extract_transition(const LinearMap& Q, const InclusionGraph& g, unsigned long max_den) {
    const auto& ambient = g.big();
    if (Q.rows() != ambient->dimension() || Q.cols() != ambient->dimension())
        throw DomainError("shape mismatch", "Q must act on C*(R_)");
    std::vector<Rational> p(g.edge_count());
    for (int c = 0; c < g.edge_count(); ++c) {
        const auto image = apply(Q, ambient, edge_projection(g, c));
        const int v = g.src(c);
        // e(v) included in C*(R_): identity on every lifted point over v.
        AlgebraElement center(ambient);
        int probe = -1;
        for (int u = 0; u < g.lifted_count(); ++u)
            if (g.vertex_of(g.lifted_at(u).first) == v) {
                center.set(u, u, 1.0);
                if (probe < 0)
                    probe = u;
            }
        const Complex scalar = image(probe, probe);
        if (max_abs_diff(image, center * scalar) > kAlgebraTolerance || std::abs(scalar.imag()) > kAlgebraTolerance)
            throw DomainError("not proportional",
                              "Q(eps(" + g.edge_name(c) + ")) is not a multiple of e(" + g.vertex_name(v) + ")");
        if (scalar.real() <= kAlgebraTolerance)
            throw DomainError("not faithful", "Q(eps(" + g.edge_name(c) + ")) vanishes");
        p[c] = rationalize(scalar.real(), max_den);
        if (std::abs(p[c].get_d() - scalar.real()) > 1e-12)
            throw DomainError("transition probability", "value for edge '" + g.edge_name(c) +
                                                            "' is not a rational with small denominator");
    }
    std::vector<Rational> rows(g.vertex_count(), Rational(0));
    for (int c = 0; c < g.edge_count(); ++c)
        rows[g.src(c)] += p[c];
    for (int v = 0; v < g.vertex_count(); ++v)
        if (rows[v] != 1)
            throw DomainError("transition probability",
                              "recovered row sums to " + to_string(rows[v]) + " at vertex '" + g.vertex_name(v) + "'");
    return p;
}

AlgebraElement pinch(const InclusionGraph& g, const AlgebraElement& f) {
    if (!f.relation().same_as(*g.big()))
        throw DomainError("shape mismatch", "pinching expects an element of C*(R_)");
    const auto& r1 = *g.pinched();
    AlgebraElement out(g.pinched());
    for (int i = 0; i < r1.dimension(); ++i) {
        const auto [u, w] = r1.pair_at(i);
        out.coefficients()[i] = f(u, w);
    }
    return out;
}

AlgebraElement pinch_by_projections(const InclusionGraph& g, const AlgebraElement& f) {
    AlgebraElement out(g.big());
    for (int c = 0; c < g.edge_count(); ++c) {
        const auto eps = edge_projection(g, c);
        out = out + eps * restrict_or_extend(f, g.big()) * eps;
    }
    return out;
}

AlgebraElement average(const ModelExpectation& me, const AlgebraElement& f1) {
    const auto& g = me.graph();
    if (!f1.relation().same_as(*g.pinched()))
        throw DomainError("shape mismatch", "averaging expects an element of C*(R1)");
    const auto& small = *g.small();
    AlgebraElement out(g.small());
    for (int i = 0; i < small.dimension(); ++i) {
        const auto [x, y] = small.pair_at(i);
        Complex acc = 0;
        for (int c = 0; c < g.edge_count(); ++c)
            if (g.src(c) == g.vertex_of(x))
                acc += me.p()[c].get_d() * f1(g.lifted(x, c), g.lifted(y, c));
        out.coefficients()[i] = acc;
    }
    return out;
}

PinchAverage pinch_average_decompose(const ModelExpectation& me) {
    const auto& g = me.graph();
    PinchAverage out;
    out.pinching = matrix_of(g.big(), g.pinched(), [&](const AlgebraElement& f) { return pinch(g, f); });
    out.averaging = matrix_of(g.pinched(), g.small(), [&](const AlgebraElement& f) { return average(me, f); });
    return out;
}

} // namespace bratteli
