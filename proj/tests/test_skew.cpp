#include "support.hpp"

#include "bratteli/errors.hpp"

#include <doctest.h>

using namespace bratteli;
using namespace testing_support;

namespace {

const GroupSpec Z = GroupSpec::lattice(1);

EdgePotential pascal_epsilon(const BratteliDiagram& d) {
    EdgePotential rho(d.depth() + 1);
    for (int n = 1; n <= d.depth(); ++n)
        for (int e = 0; e < d.edge_count(n); ++e)
            rho[n].push_back(GroupElement::integer(e % 2));
    return rho;
}

EdgePotential cotransition_potential(const RandomWalk& w) {
    EdgePotential rho(w.depth() + 1);
    for (int n = 1; n <= w.depth(); ++n)
        for (int e = 0; e < w.diagram().edge_count(n); ++e)
            rho[n].push_back(GroupElement(w.q(n, e)));
    return rho;
}

UhfModel bernoulli_uhf(int depth, const Rational& t) {
    std::vector<std::vector<std::pair<GroupElement, Rational>>> steps(
        depth, {{GroupElement::integer(0), 1 - t}, {GroupElement::integer(1), t}});
    return uhf_from_group_walk(Z, steps);
}

} // namespace

TEST_CASE("group elements") {
    const auto Z2 = GroupSpec::lattice(2);
    const auto a = parse_group_element(Z2, "(1,-2)");
    const auto b = parse_group_element(Z2, "3,4");
    CHECK((a * b).to_string() == "(4,2)");
    CHECK((a * a.inverse()) == GroupElement::identity(Z2));
    CHECK(parse_group_element(Z, "-7").to_string() == "-7");
    const auto Q = GroupSpec::positive_rationals();
    const auto r = parse_group_element(Q, "2/3");
    CHECK((r * r.inverse()) == GroupElement::identity(Q));
    CHECK(r.to_string() == "2/3");
    CHECK(parse_group_elements(Z, "0;1;-1").size() == 3);
    CHECK_THROWS_AS(parse_group_element(Q, "-1/2"), std::exception);
    CHECK_THROWS_AS(parse_group_element(Z2, "(1,2,3)"), std::exception);
}

TEST_CASE("trivial potential gives disjoint copies") {
    const auto m = pascal(3, 1, 2);
    EdgePotential rho(4);
    for (int n = 1; n <= 3; ++n)
        rho[n].assign(m.diagram->edge_count(n), GroupElement::identity(Z));
    const std::vector<GroupElement> window = {GroupElement::integer(-1), GroupElement::integer(2)};
    const auto sd = skew_product(m.diagram, Z, rho, window);
    for (int n = 0; n <= 3; ++n) {
        CHECK(sd.skewed->vertex_count(n) == 2 * m.diagram->vertex_count(n));
        CHECK(sd.windows[n] == window);
    }
    for (int n = 1; n <= 3; ++n)
        CHECK(sd.skewed->edge_count(n) == 2 * m.diagram->edge_count(n));
    CHECK(check_skew_laws(sd).empty());
}

TEST_CASE("pascal skew by epsilon tracks k") {
    const auto m = pascal(5, 1, 2);
    const auto sd = skew_product(m.diagram, Z, pascal_epsilon(*m.diagram), {GroupElement::integer(0)});
    for (int n = 0; n <= 5; ++n) {
        CHECK(sd.skewed->vertex_count(n) == n + 1);
        for (const auto& [base, g] : sd.vertex_labels[n])
            CHECK(g == GroupElement::integer(base));
    }
    for (const auto& a : enumerate_paths(*m.diagram, 0, 5)) {
        const auto g = potential_of_path(Z, pascal_epsilon(*m.diagram), a);
        CHECK(g == GroupElement::integer(m.diagram->range(a)));
    }
    CHECK(check_skew_laws(sd).empty());
}

TEST_CASE("uhf skew windows") {
    const auto model = bernoulli_uhf(6, ratio(1, 2));
    const auto sd = skew_product(model.diagram, Z, model.rho, {GroupElement::integer(0)});
    for (int n = 0; n <= 6; ++n) {
        std::vector<GroupElement> expected;
        for (int k = 0; k <= n; ++k)
            expected.push_back(GroupElement::integer(k));
        CHECK(sd.windows[n] == expected);
    }

    const auto chain = uhf_from_group_walk(Z, {{{GroupElement::integer(3), Rational(1)}}, {{GroupElement::integer(3), Rational(1)}}});
    CHECK(enumerate_paths(*chain.diagram, 0, 2).size() == 1);

    const auto weighted = uhf_from_group_walk(
        Z, std::vector<std::vector<std::pair<GroupElement, Rational>>>(
               4, {{GroupElement::integer(-1), ratio(1, 5)}, {GroupElement::integer(2), ratio(4, 5)}}));
    for (const auto& a : enumerate_paths(*weighted.diagram, 0, 4)) {
        Rational product = 1;
        for (int i = 0; i < a.length(); ++i)
            product *= a.edges[i] == 0 ? ratio(1, 5) : ratio(4, 5);
        CHECK(cylinder_measure(weighted.walk, a) == product);
    }
    CHECK_THROWS_AS(uhf_from_group_walk(Z, {{{GroupElement::integer(0), ratio(1, 2)}}}), DomainError);
}

TEST_CASE("uhf with bernoulli steps is the pascal kernel") {
    const Rational t(2, 7);
    const auto model = bernoulli_uhf(5, t);
    const auto m = pascal(5, 2, 7);
    const auto sd = skew_product(model.diagram, Z, model.rho, {GroupElement::integer(0)});
    const auto lifted = lift_walk(sd, model.walk, {Rational(1)});
    for (int n = 0; n <= 5; ++n) {
        REQUIRE(sd.skewed->vertex_count(n) == n + 1);
        for (int k = 0; k <= n; ++k)
            CHECK(lifted.nu(n, k) == m.walk.nu(n, k));
    }
}

TEST_CASE("equivariance under translation") {
    Rng rng(61);
    for (int trial = 0; trial < 15; ++trial) {
        const auto d = random_diagram(rng, {4, 3, 2});
        EdgePotential rho(d->depth() + 1);
        for (int n = 1; n <= d->depth(); ++n)
            for (int e = 0; e < d->edge_count(n); ++e)
                rho[n].push_back(GroupElement::integer(uniform(rng, -2, 2)));
        const std::vector<GroupElement> window = {GroupElement::integer(0), GroupElement::integer(uniform(rng, 1, 3))};
        const auto sd = skew_product(d, Z, rho, window);
        CHECK(check_skew_laws(sd).empty());
        const auto h = GroupElement::integer(uniform(rng, -5, 5));
        std::vector<GroupElement> moved;
        for (const auto& g : window)
            moved.push_back(h * g);
        const auto rebuilt = skew_product(d, Z, rho, moved);
        CHECK(same_labeled_graph(translate(sd, h), rebuilt));
    }
}

TEST_CASE("group cocycle") {
    const auto m = pascal(4, 1, 2);
    const auto rho = pascal_epsilon(*m.diagram);
    const auto paths = enumerate_paths(*m.diagram, 0, 4);
    for (const auto& a : paths) {
        CHECK(group_cocycle(*m.diagram, Z, rho, a, a) == GroupElement::identity(Z));
        for (const auto& b : paths)
            if (tail_related(*m.diagram, a, b))
                CHECK(group_cocycle(*m.diagram, Z, rho, a, b) == GroupElement::integer(0));
    }
    CHECK_THROWS_WITH_AS(group_cocycle(*m.diagram, Z, rho, pascal_path("1111"), pascal_path("0000")),
                         doctest::Contains("paths not tail equivalent"), DomainError);

    const auto Q = GroupSpec::positive_rationals();
    Rng rng(62);
    for (int trial = 0; trial < 15; ++trial) {
        const auto w = random_walk(rng, {4, 3, 3});
        const auto q = cotransition_potential(w);
        const auto all = enumerate_paths(w.diagram(), 0, w.depth());
        if (all.size() > 40)
            continue;
        for (const auto& a : all)
            for (const auto& b : all) {
                if (!tail_related(w.diagram(), a, b))
                    continue;
                const auto g = group_cocycle(w.diagram(), Q, q, a, b);
                CHECK(g.ratio() == radon_nikodym(w, a, b));
                for (const auto& c : all)
                    if (tail_related(w.diagram(), b, c))
                        CHECK(g * group_cocycle(w.diagram(), Q, q, b, c) == group_cocycle(w.diagram(), Q, q, a, c));
            }
    }
}

TEST_CASE("pascal model") {
    const auto two = pascal(2, 1, 3);
    const int v = two.diagram->find_vertex(2, "(2,1)");
    for (int e : two.diagram->in_edges(2, v))
        CHECK(two.walk.q(2, e) == ratio(1, 2));
    for (int n : {1, 4, 9})
        CHECK(pascal(n, 1, 2).diagram->vertex_count(n) == n + 1);
    CHECK(pascal(8, 1, 5).walk.cotransition() == pascal(8, 7, 10).walk.cotransition());
    for (const auto& t : {ratio(1, 5), ratio(1, 2), ratio(7, 10), ratio(99, 100)}) {
        const auto m = pascal_diagram(7, t);
        for (int n = 1; n <= 7; ++n)
            for (int e = 0; e < m.diagram->edge_count(n); ++e) {
                const int k = m.diagram->rng(n, e);
                CHECK(m.walk.q(n, e) == ((e % 2) ? ratio(k, n) : Rational(1 - ratio(k, n))));
            }
    }
    CHECK_THROWS_AS(pascal_diagram(3, Rational(1)), DomainError);
    CHECK_THROWS_AS(pascal_diagram(3, Rational(0)), DomainError);
}

TEST_CASE("skew harmonic sequences") {
    const auto m = pascal(4, 1, 2);
    const auto sd = skew_product(m.diagram, Z, pascal_epsilon(*m.diagram), {GroupElement::integer(0)});
    for (int n = 0; n <= 4; ++n)
        CHECK(sd.skewed->vertex_count(n) == m.diagram->vertex_count(n));

    SkewTerminal ones;
    for (int k = 0; k <= 4; ++k)
        ones[{m.diagram->vertex_id(4, k), GroupElement::integer(k)}] = 1;
    const auto sh = skew_harmonic(sd, m.walk, {Rational(1)}, ones);
    for (const auto& level : sh.h.h)
        for (const auto& x : level)
            CHECK(x == 1);

    const auto model = bernoulli_uhf(10, ratio(1, 2));
    const auto uhf = skew_product(model.diagram, Z, model.rho, {GroupElement::integer(0)});
    SkewTerminal tail;
    for (int k = 0; k <= 10; ++k)
        tail[{"v10", GroupElement::integer(k)}] = k >= 5 ? 1 : 0;
    const auto th = skew_harmonic(uhf, model.walk, {Rational(1)}, tail);
    CHECK(th.h.h[0][0] == ratio(319, 512));
    Rational oracle = 0;
    for (int k = 5; k <= 10; ++k)
        oracle += binomial(10, k) / 1024;
    CHECK(th.h.h[0][0] == oracle);

    SkewTerminal outside = tail;
    outside[{"v10", GroupElement::integer(42)}] = 1;
    CHECK_THROWS_WITH_AS(skew_harmonic(uhf, model.walk, {Rational(1)}, outside), doctest::Contains("window too small"),
                         DomainError);
}
