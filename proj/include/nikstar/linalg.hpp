// Dense extended-precision linear algebra.

#pragma once

#include "nikstar/precision.hpp"

#include <vector>

namespace nikstar {

using Matrix = std::vector<std::vector<Real>>;

/// Solves A x = b by Gaussian elimination with full pivoting. Throws
/// ConvergenceError when a pivot is exactly zero or negligible relative to
/// the largest entry of A.
std::vector<Real> solve_full_pivot(Matrix A, std::vector<Real> b);

}  // namespace nikstar
