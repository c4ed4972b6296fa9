#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <complex>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace bratteli {

using Complex = std::complex<double>;

/// Comparison tolerance for every floating-point check in the C*-algebra code.
inline constexpr double kAlgebraTolerance = 1e-9;

/// Equivalence relation on a finite ordered set X given by a surjection
/// r : X -> V; the classes are the fibers. Pairs (x, y) of R are numbered
/// block by block (class order), row-major inside a block, which is the
/// coordinate order of every AlgebraElement over R.
class FiniteEquivRelation {
public:
    FiniteEquivRelation(std::vector<std::string> points, std::vector<std::string> class_names, std::vector<int> class_of);

    int size() const { return static_cast<int>(points_.size()); }
    int class_count() const { return static_cast<int>(members_.size()); }
    const std::string& point(int x) const { return points_[x]; }
    const std::vector<std::string>& points() const { return points_; }
    const std::string& class_name(int c) const { return class_names_[c]; }

    int class_of(int x) const { return class_of_[x]; }
    const std::vector<int>& members(int c) const { return members_[c]; }
    int position(int x) const { return position_[x]; }
    int class_offset(int c) const { return offset_[c]; }

    /// Sum of squared class sizes.
    int dimension() const { return dimension_; }
    std::vector<int> block_sizes() const;

    bool related(int x, int y) const { return class_of_[x] == class_of_[y]; }
    /// Coordinate of (x, y), or -1 when x and y are not related.
    int pair_index(int x, int y) const;
    std::pair<int, int> pair_at(int index) const { return pairs_[index]; }

    /// Same points and same partition.
    bool same_as(const FiniteEquivRelation& other) const;
    /// Every pair of this relation is a pair of `other` (same point set).
    bool contained_in(const FiniteEquivRelation& other) const;

private:
    std::vector<std::string> points_;
    std::vector<std::string> class_names_;
    std::vector<int> class_of_;
    std::vector<std::vector<int>> members_;
    std::vector<int> position_;
    std::vector<int> offset_;
    std::vector<std::pair<int, int>> pairs_;
    int dimension_ = 0;
};

using RelationPtr = std::shared_ptr<const FiniteEquivRelation>;

/// An element of C*(R): a complex matrix on X supported on R, stored
/// sparsely as one coefficient per pair of R.
class AlgebraElement {
public:
    explicit AlgebraElement(RelationPtr relation);
    AlgebraElement(RelationPtr relation, Eigen::VectorXcd coefficients);

    static AlgebraElement zero(RelationPtr relation) { return AlgebraElement(std::move(relation)); }
    static AlgebraElement identity(RelationPtr relation);
    /// Canonical matrix unit e(x, y); throws DomainError if (x, y) is not in R.
    static AlgebraElement unit(RelationPtr relation, int x, int y);
    /// Dense |X| x |X| matrix; throws DomainError("support") if an entry
    /// off R exceeds the tolerance.
    static AlgebraElement from_dense(RelationPtr relation, const Eigen::MatrixXcd& m);

    const FiniteEquivRelation& relation() const { return *relation_; }
    const RelationPtr& relation_ptr() const { return relation_; }
    const Eigen::VectorXcd& coefficients() const { return coeffs_; }
    Eigen::VectorXcd& coefficients() { return coeffs_; }

    /// Entry at (x, y); zero off R.
    Complex operator()(int x, int y) const;
    void set(int x, int y, Complex value);
    void add(int x, int y, Complex value);

    AlgebraElement adjoint() const;
    Complex trace() const;
    Eigen::MatrixXcd to_dense() const;
    /// Block of class c as a dense k x k matrix (rows/columns in member order).
    Eigen::MatrixXcd block(int c) const;

    AlgebraElement operator+(const AlgebraElement& other) const;
    AlgebraElement operator-(const AlgebraElement& other) const;
    AlgebraElement operator*(const AlgebraElement& other) const;
    AlgebraElement operator*(Complex scalar) const;

private:
    void require_same(const AlgebraElement& other) const;

    RelationPtr relation_;
    Eigen::VectorXcd coeffs_;
};

/// Largest entrywise difference; elements must live on the same relation.
double max_abs_diff(const AlgebraElement& a, const AlgebraElement& b);

/// Structure of C*(R): its dimension, block sizes and canonical matrix units
/// e(x, y) (one per pair of R, in coordinate order).
struct AlgebraStructure {
    int dimension = 0;
    std::vector<int> block_sizes;
    std::vector<AlgebraElement> matrix_units;
};

AlgebraStructure algebra_of(RelationPtr relation);

/// Matrix of a linear map between relation algebras, acting on coefficient
/// vectors: column i is the image of the i-th canonical matrix unit.
using LinearMap = Eigen::SparseMatrix<Complex>;

LinearMap matrix_of(const RelationPtr& domain, const RelationPtr& codomain,
                    const std::function<AlgebraElement(const AlgebraElement&)>& map);
AlgebraElement apply(const LinearMap& map, const RelationPtr& codomain, const AlgebraElement& f);

/// Re-expresses an element over another relation on the same points; the
/// support must fit (DomainError("support") otherwise).
AlgebraElement restrict_or_extend(const AlgebraElement& f, const RelationPtr& target);

/// Left multiplication f -> m f as a LinearMap on C*(R).
LinearMap left_multiplication(const AlgebraElement& m);
/// Right multiplication f -> f m as a LinearMap on C*(R).
LinearMap right_multiplication(const AlgebraElement& m);

/// Distance from f to the span of `basis` (least squares residual norm).
double span_residual(const std::vector<AlgebraElement>& basis, const AlgebraElement& f);
/// Numerical rank of the span of `elements`.
int span_rank(const std::vector<AlgebraElement>& elements, double tol = kAlgebraTolerance);

struct CommutantBasis {
    int dimension = 0;
    std::vector<AlgebraElement> basis; // orthonormal in the coefficient inner product
};

/// Relative commutant {m in C*(ambient) : [m, g] = 0 for all generators},
/// computed as the null space of the stacked commutator equations. Used as
/// an independent oracle for commutant_embed_k.
CommutantBasis brute_force_commutant(const RelationPtr& ambient, const std::vector<AlgebraElement>& generators);

} // namespace bratteli
