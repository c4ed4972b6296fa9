#include "support.hpp"

#include "bratteli/errors.hpp"
#include "bratteli/matrix_units.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>

using namespace bratteli;
using namespace testing_support;

namespace {

// X = {x}, V = {v}, E = {a, b} into one target.
InclusionGraph two_parallel_edges() {
    return InclusionGraph({"x"}, {"v"}, {"a", "b"}, {"w"}, {0}, {0, 0}, {0, 0});
}

InclusionGraph one_edge_per_vertex() {
    return InclusionGraph({"x1", "x2", "y"}, {"v", "u"}, {"a", "b"}, {"w1", "w2"}, {0, 0, 1}, {0, 1}, {0, 1});
}

double dense_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

AlgebraElement unit_of(const RelationPtr& r, int i) {
    const auto [x, y] = r->pair_at(i);
    return AlgebraElement::unit(r, x, y);
}

} // namespace

TEST_CASE("algebra dimensions") {
    CHECK(algebra_of(relation_from_classes({0})).dimension == 1);
    CHECK(algebra_of(relation_from_classes({0, 0, 0})).dimension == 9);
    const auto s = algebra_of(relation_from_classes({0, 0, 1}));
    CHECK(s.dimension == 5);
    CHECK(s.block_sizes == std::vector<int>{2, 1});
    CHECK(static_cast<int>(s.matrix_units.size()) == 5);
}

TEST_CASE("algebra products agree with dense matrices") {
    Rng rng(41);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<int> classes;
        const int n = uniform(rng, 1, 6);
        for (int i = 0; i < n; ++i)
            classes.push_back(uniform(rng, 0, 2));
        std::sort(classes.begin(), classes.end());
        classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
        std::vector<int> class_of;
        for (int i = 0; i < n; ++i)
            class_of.push_back(uniform(rng, 0, static_cast<int>(classes.size()) - 1));
        std::vector<int> used(class_of);
        std::sort(used.begin(), used.end());
        used.erase(std::unique(used.begin(), used.end()), used.end());
        for (auto& c : class_of)
            c = static_cast<int>(std::lower_bound(used.begin(), used.end(), c) - used.begin());
        const auto r = relation_from_classes(class_of);
        const auto f = random_element(rng, r);
        const auto g = random_element(rng, r);
        CHECK(dense_diff((f * g).to_dense(), f.to_dense() * g.to_dense()) < 1e-9);
        CHECK(dense_diff(f.adjoint().to_dense(), f.to_dense().adjoint()) < 1e-9);
        CHECK(std::abs(f.trace() - f.to_dense().trace()) < 1e-9);
        CHECK(max_abs_diff(AlgebraElement::from_dense(r, f.to_dense()), f) < 1e-12);
    }
}

TEST_CASE("inclusion j") {
    const auto g = two_parallel_edges();
    CHECK(max_abs_diff(include_j(g, AlgebraElement::identity(g.small())), AlgebraElement::identity(g.big())) < 1e-12);
    const Complex lambda(2.5, -1.0);
    const auto image = include_j(g, AlgebraElement::identity(g.small()) * lambda);
    Eigen::MatrixXcd expected = Eigen::MatrixXcd::Identity(2, 2) * lambda;
    CHECK(dense_diff(image.to_dense(), expected) < 1e-12);

    Rng rng(42);
    for (int trial = 0; trial < 50; ++trial) {
        const auto h = random_inclusion_graph(rng);
        const auto f = random_element(rng, h.small());
        const auto k = random_element(rng, h.small());
        CHECK(max_abs_diff(include_j(h, f * k), include_j(h, f) * include_j(h, k)) < 1e-9);
        CHECK(max_abs_diff(include_j(h, f.adjoint()), include_j(h, f).adjoint()) < 1e-9);
        CHECK(max_abs_diff(include_j(h, AlgebraElement::identity(h.small())), AlgebraElement::identity(h.big())) < 1e-12);
    }
}

TEST_CASE("commutant embedding k") {
    Rng rng(43);
    for (int trial = 0; trial < 50; ++trial) {
        const auto g = random_inclusion_graph(rng);
        CHECK(max_abs_diff(commutant_embed_k(g, AlgebraElement::identity(g.edge_relation())),
                           AlgebraElement::identity(g.big())) < 1e-12);
        const auto f = random_element(rng, g.small());
        const auto h = random_element(rng, g.edge_relation());
        const auto h2 = random_element(rng, g.edge_relation());
        const auto jf = include_j(g, f).to_dense();
        const auto kh = commutant_embed_k(g, h).to_dense();
        CHECK(dense_diff(jf * kh, kh * jf) < 1e-9);
        CHECK(max_abs_diff(commutant_embed_k(g, h * h2), commutant_embed_k(g, h) * commutant_embed_k(g, h2)) < 1e-9);
        CHECK(max_abs_diff(commutant_embed_k(g, h.adjoint()), commutant_embed_k(g, h).adjoint()) < 1e-9);
    }
}

TEST_CASE("brute-force commutant") {
    const auto full = relation_from_classes({0, 0, 0});
    CHECK(brute_force_commutant(full, algebra_of(full).matrix_units).dimension == 1);
    CHECK(brute_force_commutant(full, {AlgebraElement::identity(full)}).dimension == 9);

    // |X| = 2 in one class, two parallel edge pairs.
    const InclusionGraph g({"x1", "x2"}, {"v"}, {"a", "b", "c", "d"}, {"w1", "w2"}, {0, 0}, {0, 0, 0, 0}, {0, 0, 1, 1});
    const auto comm = brute_force_commutant(g.big(), included_basis(g));
    CHECK(comm.dimension == g.edge_relation()->dimension());
    CHECK(comm.dimension == 8);
}

TEST_CASE("commutant equals k-image on small inclusion graphs") {
    int visited = 0;
    for_each_inclusion_graph(4, [&](const InclusionGraph& g) {
        ++visited;
        std::vector<AlgebraElement> k_image;
        for (const auto& u : algebra_of(g.edge_relation()).matrix_units)
            k_image.push_back(commutant_embed_k(g, u));
        const auto comm = brute_force_commutant(g.big(), included_basis(g));
        CHECK(comm.dimension == span_rank(k_image));
        for (const auto& x : k_image)
            CHECK(span_residual(comm.basis, x) < 1e-9);
        for (const auto& b : comm.basis)
            CHECK(span_residual(k_image, b) < 1e-9);
    });
    CHECK(visited > 20);
}

TEST_CASE("model expectation examples") {
    SUBCASE("one edge per vertex is a left inverse of j") {
        const auto g = one_edge_per_vertex();
        const ModelExpectation me(g, {Rational(1), Rational(1)});
        Rng rng(44);
        const auto f = random_element(rng, g.small());
        CHECK(max_abs_diff(model_expectation(me, include_j(g, f)), f) < 1e-12);
    }
    SUBCASE("two parallel edges, p = (1/2, 1/2)") {
        const auto g = two_parallel_edges();
        const ModelExpectation me(g, {ratio(1, 2), ratio(1, 2)});
        const auto image = model_expectation(me, AlgebraElement::unit(g.big(), g.lifted(0, 0), g.lifted(0, 0)));
        CHECK(std::abs(image(0, 0) - Complex(0.5)) < 1e-12);
    }
    SUBCASE("Q(j(f)) = f on random graphs") {
        Rng rng(45);
        for (int trial = 0; trial < 50; ++trial) {
            const auto g = random_inclusion_graph(rng);
            const ModelExpectation me(g, random_graph_transition(rng, g));
            for (const auto& u : algebra_of(g.small()).matrix_units)
                CHECK(max_abs_diff(model_expectation(me, include_j(g, u)), u) < 1e-12);
        }
    }
    SUBCASE("bad p is rejected") {
        CHECK_THROWS_AS(ModelExpectation(two_parallel_edges(), {ratio(1, 2), ratio(1, 3)}), DomainError);
        CHECK_THROWS_AS(ModelExpectation(two_parallel_edges(), {Rational(0), Rational(1)}), DomainError);
    }
}

TEST_CASE("conditional expectation axioms") {
    Rng rng(46);
    for (int trial = 0; trial < 40; ++trial) {
        const auto g = random_inclusion_graph(rng);
        const ModelExpectation me(g, random_graph_transition(rng, g));
        const auto report = verify_expectation(g.big(), expectation_map(me), included_basis(g));
        CHECK(report.all_pass());
        CHECK(report.checks.size() == 7);
    }

    const auto full = relation_from_classes({0, 0, 1});
    LinearMap id(full->dimension(), full->dimension());
    id.setIdentity();
    CHECK(verify_expectation(full, id, algebra_of(full).matrix_units).all_pass());

    const auto g = two_parallel_edges();
    const auto degenerate = ModelExpectation::unchecked(g, {Rational(0), Rational(1)});
    const auto report = verify_expectation(g.big(), expectation_map(degenerate), included_basis(g));
    REQUIRE(report.find("faithful") != nullptr);
    CHECK_FALSE(report.find("faithful")->passed);
    const auto witness = AlgebraElement::unit(g.big(), g.lifted(0, 0), g.lifted(0, 0));
    CHECK(model_expectation(degenerate, witness).coefficients().cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("transition extraction") {
    const auto g = two_parallel_edges();
    const ModelExpectation me(g, {ratio(1, 3), ratio(2, 3)});
    CHECK(extract_transition(expectation_map(me), g) == std::vector<Rational>{ratio(1, 3), ratio(2, 3)});

    Rng rng(47);
    for (int trial = 0; trial < 40; ++trial) {
        const auto h = random_inclusion_graph(rng);
        const auto p = random_graph_transition(rng, h);
        CHECK(extract_transition(expectation_map(ModelExpectation(h, p)), h) == p);
        const auto u = uniform_graph_transition(h);
        CHECK(extract_transition(expectation_map(ModelExpectation(h, u)), h) == u);
    }
}

TEST_CASE("pinching and averaging") {
    SUBCASE("off-diagonal edge blocks are killed") {
        const auto g = two_parallel_edges();
        const auto off = AlgebraElement::unit(g.big(), g.lifted(0, 0), g.lifted(0, 1));
        CHECK(pinch(g, off).coefficients().cwiseAbs().maxCoeff() < 1e-15);
        const auto diag = AlgebraElement::unit(g.big(), g.lifted(0, 1), g.lifted(0, 1));
        CHECK(std::abs(pinch(g, diag)(g.lifted(0, 1), g.lifted(0, 1)) - Complex(1)) < 1e-15);
    }
    SUBCASE("one edge per vertex") {
        const auto g = one_edge_per_vertex();
        CHECK(g.pinched()->same_as(*g.big()));
        Rng rng(48);
        const auto f = random_element(rng, g.big());
        CHECK(max_abs_diff(pinch(g, f), restrict_or_extend(f, g.pinched())) < 1e-15);
    }
    SUBCASE("Q1 Q2 = Q") {
        Rng rng(49);
        for (int trial = 0; trial < 40; ++trial) {
            const auto g = random_inclusion_graph(rng);
            const ModelExpectation me(g, random_graph_transition(rng, g));
            for (int i = 0; i < g.big()->dimension(); ++i) {
                const auto u = unit_of(g.big(), i);
                CHECK(max_abs_diff(average(me, pinch(g, u)), model_expectation(me, u)) == 0.0);
                CHECK(max_abs_diff(pinch(g, u), restrict_or_extend(pinch_by_projections(g, u), g.pinched())) < 1e-15);
            }
            const auto pa = pinch_average_decompose(me);
            const LinearMap composite = pa.averaging * pa.pinching;
            const auto direct = matrix_of(g.big(), g.small(), [&](const AlgebraElement& f) { return model_expectation(me, f); });
            CHECK(Eigen::MatrixXcd(composite - direct).cwiseAbs().maxCoeff() == 0.0);
        }
    }
}

TEST_CASE("cocycle trivialization") {
    const auto S = relation_from_classes({0, 0, 1, 1, 1});
    TorusCocycle one{AlgebraElement::identity(S)};
    for (int i = 0; i < S->dimension(); ++i) {
        const auto [x, y] = S->pair_at(i);
        one.c.set(x, y, 1.0);
    }
    for (const auto& b : trivialize_cocycle(one))
        CHECK(std::abs(b - Complex(1)) < 1e-15);

    Rng rng(50);
    std::uniform_real_distribution<double> angle(0, 2 * M_PI);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<Complex> b0(S->size());
        for (auto& z : b0)
            z = std::polar(1.0, angle(rng));
        TorusCocycle tc{AlgebraElement(S)};
        for (int i = 0; i < S->dimension(); ++i) {
            const auto [x, y] = S->pair_at(i);
            tc.c.set(x, y, b0[x] * std::conj(b0[y]));
        }
        const auto b = trivialize_cocycle(tc);
        for (int i = 0; i < S->dimension(); ++i) {
            const auto [x, y] = S->pair_at(i);
            CHECK(std::abs(tc.c(x, y) - b[x] * std::conj(b[y])) <= 1e-12);
            CHECK(std::abs(b[x] / b0[x] - b[y] / b0[y]) <= 1e-12);
        }
    }

    TorusCocycle bad{AlgebraElement(S)};
    for (int i = 0; i < S->dimension(); ++i) {
        const auto [x, y] = S->pair_at(i);
        bad.c.set(x, y, 1.0);
    }
    bad.c.set(2, 3, Complex(0, 1));
    bad.c.set(3, 2, Complex(0, -1));
    CHECK_THROWS_WITH_AS(trivialize_cocycle(bad), doctest::Contains("cocycle identity"), DomainError);
}

TEST_CASE("matrix unit extension") {
    const auto R = relation_from_classes({0, 0, 1, 1});
    const auto reference = canonical_matrix_unit(R);
    CHECK(check_matrix_unit(*R, reference).empty());

    SUBCASE("S diagonal returns the reference") {
        const auto S = relation_from_classes({0, 1, 2, 3});
        MatrixUnit partial;
        for (int x = 0; x < 4; ++x)
            partial.emplace(std::make_pair(x, x), reference.at({x, x}));
        const auto out = extend_matrix_unit(S, partial, R, reference);
        for (const auto& [key, e] : reference)
            CHECK(max_abs_diff(out.at(key), e) < 1e-12);
    }
    SUBCASE("S = R returns the input") {
        MatrixUnit twisted;
        const std::vector<Complex> phase = {1.0, std::polar(1.0, 0.7), std::polar(1.0, -2.0), std::polar(1.0, 1.1)};
        for (const auto& [key, e] : reference)
            twisted.emplace(key, e * (phase[key.first] * std::conj(phase[key.second])));
        const auto out = extend_matrix_unit(R, twisted, R, reference);
        for (const auto& [key, e] : twisted)
            CHECK(max_abs_diff(out.at(key), e) < 1e-12);
    }
    SUBCASE("random twisted partial units on a refinement") {
        const auto S = relation_from_classes({0, 1, 2, 2});
        Rng rng(51);
        std::uniform_real_distribution<double> angle(0, 2 * M_PI);
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<Complex> phase(4);
            for (auto& z : phase)
                z = std::polar(1.0, angle(rng));
            MatrixUnit partial;
            for (int i = 0; i < S->dimension(); ++i) {
                const auto [x, y] = S->pair_at(i);
                partial.emplace(std::make_pair(x, y), reference.at({x, y}) * (phase[x] * std::conj(phase[y])));
            }
            const auto out = extend_matrix_unit(S, partial, R, reference);
            CHECK(check_matrix_unit(*R, out).empty());
            for (const auto& [key, e] : partial)
                CHECK(max_abs_diff(out.at(key), e) < 1e-12);
        }
    }
    SUBCASE("invalid partial unit") {
        const auto S = relation_from_classes({0, 1, 2, 2});
        MatrixUnit partial;
        for (int i = 0; i < S->dimension(); ++i) {
            const auto [x, y] = S->pair_at(i);
            partial.emplace(std::make_pair(x, y), reference.at({x, y}) * 2.0);
        }
        CHECK_THROWS_WITH_AS(extend_matrix_unit(S, partial, R, reference), doctest::Contains("not a partial matrix unit"),
                             DomainError);
    }
}

TEST_CASE("state diagonalization") {
    const Eigen::MatrixXcd half = Eigen::MatrixXcd::Identity(2, 2) * 0.5;
    const auto flat = diagonalize_state(half);
    CHECK(dense_diff(flat.basis, Eigen::MatrixXcd::Identity(2, 2)) < 1e-12);

    Eigen::MatrixXcd rho(2, 2);
    rho << 0.5, 0.25, 0.25, 0.5;
    const auto d = diagonalize_state(rho);
    CHECK(std::abs(d.eigenvalues[0] - 0.75) < 1e-12);
    CHECK(std::abs(d.eigenvalues[1] - 0.25) < 1e-12);
    for (int k = 0; k < 2; ++k) {
        const double lambda = d.eigenvalues[k];
        CHECK(std::abs((lambda - 0.5) * (lambda - 0.5) - 0.0625) < 1e-12);
    }

    Rng rng(52);
    std::normal_distribution<double> gauss;
    for (int trial = 0; trial < 10; ++trial) {
        Eigen::MatrixXcd a(5, 5);
        for (int i = 0; i < 5; ++i)
            for (int j = 0; j < 5; ++j)
                a(i, j) = Complex(gauss(rng), gauss(rng));
        Eigen::MatrixXcd density = a * a.adjoint() + Eigen::MatrixXcd::Identity(5, 5);
        density /= density.trace();
        const auto s = diagonalize_state(density);
        const Eigen::MatrixXcd rebuilt = s.basis * s.eigenvalues.cast<Complex>().asDiagonal() * s.basis.adjoint();
        CHECK(dense_diff(rebuilt, density) < 1e-9);
        CHECK(std::is_sorted(s.eigenvalues.data(), s.eigenvalues.data() + 5, std::greater<double>()));
        const Eigen::MatrixXcd compressed = diagonal_compression(s.basis, density);
        CHECK(dense_diff(compressed, density) < 1e-9);
        CHECK(std::abs(state_value(density, Eigen::MatrixXcd::Identity(5, 5)) - Complex(1)) < 1e-9);
    }

    Eigen::MatrixXcd singular = Eigen::MatrixXcd::Zero(2, 2);
    singular(0, 0) = 1;
    CHECK_THROWS_WITH_AS(diagonalize_state(singular), doctest::Contains("not faithful"), DomainError);
    CHECK_THROWS_WITH_AS(diagonalize_state(Eigen::MatrixXcd::Identity(2, 2)), doctest::Contains("not trace 1"),
                         DomainError);
}
