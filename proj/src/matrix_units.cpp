#include "bratteli/matrix_units.hpp"

#include "bratteli/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <numeric>

namespace bratteli {

MatrixUnit canonical_matrix_unit(const RelationPtr& relation) {
    MatrixUnit out;
    for (int i = 0; i < relation->dimension(); ++i) {
        const auto [x, y] = relation->pair_at(i);
        out.emplace(std::make_pair(x, y), AlgebraElement::unit(relation, x, y));
    }
    return out;
}

std::vector<std::string> check_matrix_unit(const FiniteEquivRelation& index, const MatrixUnit& units, double tol) {
    std::vector<std::string> out;
    auto name = [&](int x, int y) { return "e(" + index.point(x) + "," + index.point(y) + ")"; };
    if (static_cast<int>(units.size()) != index.dimension())
        out.push_back("unit family does not match the relation's pairs");
    for (const auto& [key, e] : units)
        if (!index.related(key.first, key.second)) {
            out.push_back(name(key.first, key.second) + " is not indexed by the relation");
            return out;
        }
    for (const auto& [key, e] : units) {
        const auto [x, y] = key;
        const auto adj = units.find({y, x});
        if (adj == units.end() || max_abs_diff(e.adjoint(), adj->second) > tol)
            out.push_back(name(x, y) + "* != " + name(y, x));
        for (const auto& [key2, f] : units) {
            const auto [z, w] = key2;
            const auto prod = e * f;
            if (y == z) {
                const auto target = units.find({x, w});
                if (target == units.end() || max_abs_diff(prod, target->second) > tol)
                    out.push_back(name(x, y) + name(z, w) + " != " + name(x, w));
            } else if (prod.coefficients().cwiseAbs().maxCoeff() > tol) {
                out.push_back(name(x, y) + name(z, w) + " != 0");
            }
        }
    }
    return out;
}

std::vector<Complex> trivialize_cocycle(const TorusCocycle& tc, double tol) {
    const auto& S = tc.c.relation();
    auto fail = [&](const std::string& witness) { throw DomainError("cocycle identity", witness); };
    auto pt = [&](int x) { return S.point(x); };
    for (int i = 0; i < S.dimension(); ++i) {
        const auto [x, y] = S.pair_at(i);
        const Complex v = tc.c(x, y);
        if (std::abs(std::abs(v) - 1.0) > tol)
            fail("|c(" + pt(x) + "," + pt(y) + ")| != 1");
        if (x == y && std::abs(v - 1.0) > tol)
            fail("c(" + pt(x) + "," + pt(x) + ") != 1");
        if (std::abs(tc.c(y, x) - std::conj(v)) > tol)
            fail("c(" + pt(y) + "," + pt(x) + ") != conj c(" + pt(x) + "," + pt(y) + ")");
    }
    for (int cls = 0; cls < S.class_count(); ++cls) {
        const auto& m = S.members(cls);
        for (int x : m)
            for (int y : m)
                for (int z : m)
                    if (std::abs(tc.c(x, y) * tc.c(y, z) - tc.c(x, z)) > tol)
                        fail("c(" + pt(x) + "," + pt(y) + ") c(" + pt(y) + "," + pt(z) + ") != c(" + pt(x) + "," +
                             pt(z) + ")");
    }
    std::vector<Complex> b(S.size());
    for (int cls = 0; cls < S.class_count(); ++cls) {
        const auto& m = S.members(cls);
        const int rep = *std::min_element(m.begin(), m.end());
        for (int x : m)
            b[x] = tc.c(x, rep);
    }
    return b;
}

MatrixUnit extend_matrix_unit(const RelationPtr& S, const MatrixUnit& partial, const RelationPtr& R,
                              const MatrixUnit& reference, double tol) {
    auto fail = [](const std::string& what) { throw DomainError("not a partial matrix unit", what); };
    if (!S->contained_in(*R))
        fail("S is not a subrelation of R");
    if (static_cast<int>(reference.size()) != R->dimension())
        fail("reference units do not cover R");
    for (const auto& [key, e] : partial)
        if (S->pair_index(key.first, key.second) < 0)
            fail("unit keyed outside S");
    const auto problems = check_matrix_unit(*S, partial, tol);
    if (!problems.empty())
        fail(problems.front());

    TorusCocycle tc{AlgebraElement(S)};
    for (const auto& [key, e] : partial) {
        const auto& ref = reference.at(key);
        const Complex norm2 = ref.coefficients().squaredNorm();
        if (std::abs(norm2) <= tol)
            fail("reference unit vanishes");
        const Complex c = ref.coefficients().dot(e.coefficients()) / norm2;
        if (max_abs_diff(e, ref * c) > tol)
            fail("e(" + S->point(key.first) + "," + S->point(key.second) + ") is not a phase multiple of the reference");
        tc.c.set(key.first, key.second, c);
    }
    const auto b = trivialize_cocycle(tc, tol);

    MatrixUnit out;
    for (int i = 0; i < R->dimension(); ++i) {
        const auto [x, y] = R->pair_at(i);
        out.emplace(std::make_pair(x, y), reference.at({x, y}) * (b[x] * std::conj(b[y])));
    }
    return out;
}

StateDiagonalization diagonalize_state(const Eigen::MatrixXcd& density, double tol) {
    if (density.rows() != density.cols() || density.rows() == 0)
        throw DomainError("not self-adjoint", "density must be a nonempty square matrix");
    if ((density - density.adjoint()).cwiseAbs().maxCoeff() > tol)
        throw DomainError("not self-adjoint", "");
    if (std::abs(density.trace() - Complex(1.0)) > tol)
        throw DomainError("not trace 1", "");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(density);
    const auto& values = eig.eigenvalues();
    if (values.minCoeff() <= tol)
        throw DomainError("not faithful", "density is not positive definite");

    const Eigen::Index n = density.rows();
    std::vector<Eigen::Index> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return values[a] > values[b]; });

    StateDiagonalization out{Eigen::MatrixXcd(n, n), Eigen::VectorXd(n)};
    for (Eigen::Index k = 0; k < n; ++k) {
        Eigen::VectorXcd v = eig.eigenvectors().col(order[k]);
        for (Eigen::Index i = 0; i < n; ++i)
            if (std::abs(v[i]) > tol) {
                v *= std::conj(v[i]) / std::abs(v[i]);
                break;
            }
        out.basis.col(k) = v;
        out.eigenvalues[k] = values[order[k]];
    }
    return out;
}

Complex state_value(const Eigen::MatrixXcd& density, const Eigen::MatrixXcd& a) {
    return (density * a).trace();
}

Eigen::MatrixXcd diagonal_compression(const Eigen::MatrixXcd& basis, const Eigen::MatrixXcd& a) {
    const Eigen::MatrixXcd in_basis = basis.adjoint() * a * basis;
    const Eigen::MatrixXcd diag = in_basis.diagonal().asDiagonal();
    return basis * diag * basis.adjoint();
}

} // namespace bratteli
