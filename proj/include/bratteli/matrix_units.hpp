#pragma once

#include "bratteli/relation_algebra.hpp"

#include <map>

namespace bratteli {

/// A (partial) matrix unit: elements e(x, y) of some algebra indexed by the
/// pairs of a relation on X. Keys are point indices of X.
using MatrixUnit = std::map<std::pair<int, int>, AlgebraElement>;

/// The canonical units e(x, y) of C*(R), keyed by the pairs of R.
MatrixUnit canonical_matrix_unit(const RelationPtr& relation);

/// Checks e(x,y) e(y,z) = e(x,z), e(x,y)* = e(y,x) and e(x,y) e(z,w) = 0 for
/// y != z over all keyed pairs of `index`; `units` must have exactly the pairs
/// of `index` as keys. Returns one message per failure (empty = valid).
std::vector<std::string> check_matrix_unit(const FiniteEquivRelation& index, const MatrixUnit& units,
                                           double tol = kAlgebraTolerance);

/// A T-valued cocycle on a relation S, stored as an element over S (one
/// unit-modulus value per pair).
struct TorusCocycle {
    AlgebraElement c;
};

/// b : X -> T with c(x, y) = b(x) conj(b(y)). Gauge: the smallest point of
/// each S-class gets b = 1 and b(x) = c(x, rep). Throws
/// DomainError("cocycle identity") naming a witness pair or triple when |c| != 1,
/// c(x, x) != 1, c(y, x) != conj(c(x, y)) or c(x, y) c(y, z) != c(x, z).
std::vector<Complex> trivialize_cocycle(const TorusCocycle& tc, double tol = kAlgebraTolerance);

/// Extends a partial matrix unit on S (a subrelation of R on the same points)
/// to a full matrix unit on R agreeing with it on S. The comparison cocycle
/// c(x, y) against `reference` (a full unit on R with the same diagonal) is
/// trivialized and e(x, y) = b(x) ref(x, y) conj(b(y)). Throws
/// DomainError("not a partial matrix unit") if the input fails the unit
/// identities, is not keyed by S, or is not a phase multiple of the reference.
MatrixUnit extend_matrix_unit(const RelationPtr& S, const MatrixUnit& partial, const RelationPtr& R,
                              const MatrixUnit& reference, double tol = kAlgebraTolerance);

/// Orthonormal eigenbasis (columns of `basis`) of a faithful state's density
/// matrix, eigenvalues descending, each column's first non-negligible entry
/// real positive.
struct StateDiagonalization {
    Eigen::MatrixXcd basis;
    Eigen::VectorXd eigenvalues;
};

/// Throws DomainError("not self-adjoint" | "not trace 1" | "not faithful").
StateDiagonalization diagonalize_state(const Eigen::MatrixXcd& density, double tol = kAlgebraTolerance);

/// phi(a) = Tr(density a).
Complex state_value(const Eigen::MatrixXcd& density, const Eigen::MatrixXcd& a);

/// P(a): keep only the diagonal of a in the given basis, expressed back in the
/// standard basis.
Eigen::MatrixXcd diagonal_compression(const Eigen::MatrixXcd& basis, const Eigen::MatrixXcd& a);

} // namespace bratteli
