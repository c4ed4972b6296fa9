#include "bratteli/relation_algebra.hpp"

#include "bratteli/errors.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

namespace bratteli {

FiniteEquivRelation::FiniteEquivRelation(std::vector<std::string> points, std::vector<std::string> class_names,
                                         std::vector<int> class_of)
    : points_(std::move(points)), class_names_(std::move(class_names)), class_of_(std::move(class_of)) {
    if (class_of_.size() != points_.size())
        throw DomainError("relation", "class map must be defined on every point");
    members_.resize(class_names_.size());
    position_.resize(points_.size());
    for (int x = 0; x < size(); ++x) {
        const int c = class_of_[x];
        if (c < 0 || c >= class_count())
            throw DomainError("relation", "class index out of range for point '" + points_[x] + "'");
        position_[x] = static_cast<int>(members_[c].size());
        members_[c].push_back(x);
    }
    offset_.resize(class_count());
    for (int c = 0; c < class_count(); ++c) {
        if (members_[c].empty())
            throw DomainError("relation", "class map is not surjective: '" + class_names_[c] + "' is empty");
        offset_[c] = dimension_;
        const int k = static_cast<int>(members_[c].size());
        dimension_ += k * k;
        for (int x : members_[c])
            for (int y : members_[c])
                pairs_.emplace_back(x, y);
    }
}

std::vector<int> FiniteEquivRelation::block_sizes() const {
    std::vector<int> out;
    for (const auto& m : members_)
        out.push_back(static_cast<int>(m.size()));
    return out;
}

int FiniteEquivRelation::pair_index(int x, int y) const {
    if (x < 0 || y < 0 || x >= size() || y >= size() || class_of_[x] != class_of_[y])
        return -1;
    const int c = class_of_[x];
    return offset_[c] + position_[x] * static_cast<int>(members_[c].size()) + position_[y];
}

bool FiniteEquivRelation::same_as(const FiniteEquivRelation& other) const {
    return contained_in(other) && other.contained_in(*this);
}

bool FiniteEquivRelation::contained_in(const FiniteEquivRelation& other) const {
    if (points_ != other.points_)
        return false;
    for (const auto& [x, y] : pairs_)
        if (!other.related(x, y))
            return false;
    return true;
}

AlgebraElement::AlgebraElement(RelationPtr relation)
    : relation_(std::move(relation)), coeffs_(Eigen::VectorXcd::Zero(relation_->dimension())) {}

AlgebraElement::AlgebraElement(RelationPtr relation, Eigen::VectorXcd coefficients)
    : relation_(std::move(relation)), coeffs_(std::move(coefficients)) {
    if (coeffs_.size() != relation_->dimension())
        throw DomainError("shape mismatch", "coefficient vector does not match the relation");
}

AlgebraElement AlgebraElement::identity(RelationPtr relation) {
    AlgebraElement out(std::move(relation));
    for (int x = 0; x < out.relation().size(); ++x)
        out.set(x, x, 1.0);
    return out;
}

AlgebraElement AlgebraElement::unit(RelationPtr relation, int x, int y) {
    AlgebraElement out(std::move(relation));
    out.set(x, y, 1.0);
    return out;
}

AlgebraElement AlgebraElement::from_dense(RelationPtr relation, const Eigen::MatrixXcd& m) {
    const int n = relation->size();
    if (m.rows() != n || m.cols() != n)
        throw DomainError("shape mismatch", "dense matrix has the wrong size");
    AlgebraElement out(std::move(relation));
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
            const int idx = out.relation().pair_index(x, y);
            if (idx >= 0)
                out.coeffs_[idx] = m(x, y);
            else if (std::abs(m(x, y)) > kAlgebraTolerance)
                throw DomainError("support", "entry (" + out.relation().point(x) + "," + out.relation().point(y) +
                                                 ") lies outside the relation");
        }
    return out;
}

Complex AlgebraElement::operator()(int x, int y) const {
    const int idx = relation_->pair_index(x, y);
    return idx < 0 ? Complex(0) : coeffs_[idx];
}

void AlgebraElement::set(int x, int y, Complex value) {
    const int idx = relation_->pair_index(x, y);
    if (idx < 0)
        throw DomainError("support", "(" + std::to_string(x) + "," + std::to_string(y) + ") is not in the relation");
    coeffs_[idx] = value;
}

void AlgebraElement::add(int x, int y, Complex value) {
    const int idx = relation_->pair_index(x, y);
    if (idx < 0)
        throw DomainError("support", "(" + std::to_string(x) + "," + std::to_string(y) + ") is not in the relation");
    coeffs_[idx] += value;
}

AlgebraElement AlgebraElement::adjoint() const {
    AlgebraElement out(relation_);
    for (int i = 0; i < relation_->dimension(); ++i) {
        const auto [x, y] = relation_->pair_at(i);
        out.coeffs_[relation_->pair_index(y, x)] = std::conj(coeffs_[i]);
    }
    return out;
}

Complex AlgebraElement::trace() const {
    Complex t = 0;
    for (int x = 0; x < relation_->size(); ++x)
        t += (*this)(x, x);
    return t;
}

Eigen::MatrixXcd AlgebraElement::to_dense() const {
    const int n = relation_->size();
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 0; i < relation_->dimension(); ++i) {
        const auto [x, y] = relation_->pair_at(i);
        m(x, y) = coeffs_[i];
    }
    return m;
}

Eigen::MatrixXcd AlgebraElement::block(int c) const {
    const int k = static_cast<int>(relation_->members(c).size());
    using RowMajor = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    return Eigen::Map<const RowMajor>(coeffs_.data() + relation_->class_offset(c), k, k);
}

void AlgebraElement::require_same(const AlgebraElement& other) const {
    if (relation_ != other.relation_ && !relation_->same_as(*other.relation_))
        throw DomainError("shape mismatch", "elements live on different relations");
}

AlgebraElement AlgebraElement::operator+(const AlgebraElement& other) const {
    require_same(other);
    return AlgebraElement(relation_, coeffs_ + other.coeffs_);
}

AlgebraElement AlgebraElement::operator-(const AlgebraElement& other) const {
    require_same(other);
    return AlgebraElement(relation_, coeffs_ - other.coeffs_);
}

AlgebraElement AlgebraElement::operator*(Complex scalar) const {
    return AlgebraElement(relation_, coeffs_ * scalar);
}

AlgebraElement AlgebraElement::operator*(const AlgebraElement& other) const {
    require_same(other);
    using RowMajor = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    AlgebraElement out(relation_);
    for (int c = 0; c < relation_->class_count(); ++c) {
        const int k = static_cast<int>(relation_->members(c).size());
        const int off = relation_->class_offset(c);
        Eigen::Map<const RowMajor> a(coeffs_.data() + off, k, k);
        Eigen::Map<const RowMajor> b(other.coeffs_.data() + off, k, k);
        Eigen::Map<RowMajor>(out.coeffs_.data() + off, k, k).noalias() = a * b;
    }
    return out;
}

double max_abs_diff(const AlgebraElement& a, const AlgebraElement& b) {
    const auto diff = a - b;
    return diff.coefficients().size() ? diff.coefficients().cwiseAbs().maxCoeff() : 0.0;
}

AlgebraStructure algebra_of(RelationPtr relation) {
    AlgebraStructure s;
    s.dimension = relation->dimension();
    s.block_sizes = relation->block_sizes();
    for (int i = 0; i < relation->dimension(); ++i) {
        const auto [x, y] = relation->pair_at(i);
        s.matrix_units.push_back(AlgebraElement::unit(relation, x, y));
    }
    return s;
}

LinearMap matrix_of(const RelationPtr& domain, const RelationPtr& codomain,
                    const std::function<AlgebraElement(const AlgebraElement&)>& map) {
    std::vector<Eigen::Triplet<Complex>> triplets;
    for (int i = 0; i < domain->dimension(); ++i) {
        const auto [x, y] = domain->pair_at(i);
        const auto image = map(AlgebraElement::unit(domain, x, y));
        if (image.relation().dimension() != codomain->dimension())
            throw DomainError("shape mismatch", "map image does not live on the codomain");
        for (int j = 0; j < codomain->dimension(); ++j)
            if (image.coefficients()[j] != Complex(0))
                triplets.emplace_back(j, i, image.coefficients()[j]);
    }
    LinearMap m(codomain->dimension(), domain->dimension());
    m.setFromTriplets(triplets.begin(), triplets.end());
    return m;
}

AlgebraElement apply(const LinearMap& map, const RelationPtr& codomain, const AlgebraElement& f) {
    if (map.cols() != f.relation().dimension() || map.rows() != codomain->dimension())
        throw DomainError("shape mismatch", "linear map does not fit the element");
    return AlgebraElement(codomain, map * f.coefficients());
}

AlgebraElement restrict_or_extend(const AlgebraElement& f, const RelationPtr& target) {
    if (f.relation().points() != target->points())
        throw DomainError("shape mismatch", "relations live on different point sets");
    AlgebraElement out(target);
    const auto& src = f.relation();
    for (int i = 0; i < src.dimension(); ++i) {
        const auto [x, y] = src.pair_at(i);
        const Complex v = f.coefficients()[i];
        const int j = target->pair_index(x, y);
        if (j >= 0)
            out.coefficients()[j] = v;
        else if (std::abs(v) > kAlgebraTolerance)
            throw DomainError("support", "element does not fit in the target relation");
    }
    return out;
}

namespace {

LinearMap multiplication(const AlgebraElement& m, bool left) {
    const auto& rel = m.relation();
    std::vector<Eigen::Triplet<Complex>> triplets;
    for (int i = 0; i < rel.dimension(); ++i) {
        const Complex v = m.coefficients()[i];
        if (v == Complex(0))
            continue;
        const auto [a, c] = rel.pair_at(i);
        for (int b : rel.members(rel.class_of(a))) {
            if (left) // (m f)(a, b) += m(a, c) f(c, b)
                triplets.emplace_back(rel.pair_index(a, b), rel.pair_index(c, b), v);
            else // (f m)(b, c) += f(b, a) m(a, c)
                triplets.emplace_back(rel.pair_index(b, c), rel.pair_index(b, a), v);
        }
    }
    LinearMap out(rel.dimension(), rel.dimension());
    out.setFromTriplets(triplets.begin(), triplets.end());
    return out;
}

Eigen::MatrixXcd as_columns(const std::vector<AlgebraElement>& elements, Eigen::Index rows) {
    Eigen::MatrixXcd m(rows, static_cast<Eigen::Index>(elements.size()));
    for (std::size_t i = 0; i < elements.size(); ++i)
        m.col(static_cast<Eigen::Index>(i)) = elements[i].coefficients();
    return m;
}

} // namespace

LinearMap left_multiplication(const AlgebraElement& m) {
    return multiplication(m, true);
}

LinearMap right_multiplication(const AlgebraElement& m) {
    return multiplication(m, false);
}

double span_residual(const std::vector<AlgebraElement>& basis, const AlgebraElement& f) {
    if (basis.empty())
        return f.coefficients().norm();
    const auto b = as_columns(basis, f.coefficients().size());
    Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(b);
    const Eigen::VectorXcd x = qr.solve(f.coefficients());
    return (b * x - f.coefficients()).norm();
}

int span_rank(const std::vector<AlgebraElement>& elements, double tol) {
    if (elements.empty())
        return 0;
    const auto b = as_columns(elements, elements.front().coefficients().size());
    Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(b);
    qr.setThreshold(tol);
    return static_cast<int>(qr.rank());
}

CommutantBasis brute_force_commutant(const RelationPtr& ambient, const std::vector<AlgebraElement>& generators) {
    const int dim = ambient->dimension();
    // Gram matrix of the stacked commutator map m -> ([m, g_i])_i; its null
    // space is the commutant.
    Eigen::MatrixXcd gram = Eigen::MatrixXcd::Zero(dim, dim);
    for (const auto& g : generators) {
        if (!g.relation().same_as(*ambient))
            throw DomainError("shape mismatch", "generator does not live in the ambient algebra");
        const auto gg = restrict_or_extend(g, ambient);
        const LinearMap commutator = right_multiplication(gg) - left_multiplication(gg);
        const LinearMap product = LinearMap(commutator.adjoint()) * commutator;
        gram += Eigen::MatrixXcd(product);
    }
    CommutantBasis out;
    if (dim == 0)
        return out;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(gram);
    const double scale = std::max(1.0, eig.eigenvalues().cwiseAbs().maxCoeff());
    for (int i = 0; i < dim; ++i)
        if (eig.eigenvalues()[i] <= 1e-8 * scale)
            out.basis.emplace_back(ambient, eig.eigenvectors().col(i));
    out.dimension = static_cast<int>(out.basis.size());
    return out;
}

} // namespace bratteli
