#ifndef RELULIM_NORMS_HPP
#define RELULIM_NORMS_HPP

#include "relulim/types.hpp"

namespace relulim {

/// l^p norm of a vector, p in {1, 2, inf}.
double vector_norm(const VectorXd& v, NormKind p);

/// Operator norm induced by the l^p vector norm.
/// p=1: max absolute column sum; p=inf: max absolute row sum;
/// p=2: largest singular value by power iteration on A^T A
/// (relative tolerance 1e-10, cap 10000, all-ones start).
double induced_matrix_norm(const MatrixXd& A, NormKind p);

}  // namespace relulim

#endif
