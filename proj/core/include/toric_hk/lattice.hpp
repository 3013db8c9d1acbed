#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace toric_hk::lattice {

using IntMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;
using IntVector = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>;

// Non-negative gcd of all entries; 0 for an empty or all-zero input.
std::int64_t gcd(std::span<const std::int64_t> entries);

// Exact rank of an integer matrix (fraction-free elimination).
int rank(const IntMatrix& a);

// Exact determinant of a square integer matrix.
std::int64_t determinant(const IntMatrix& a);

// Smith normal form P * A * Q = D with P, Q unimodular and D diagonal,
// d_1 | d_2 | ... | d_r, d_i > 0, zeros after the rank.
struct SmithForm {
  IntMatrix diagonal;  // same shape as A
  IntMatrix left;      // P, rows x rows
  IntMatrix right;     // Q, cols x cols
  std::vector<std::int64_t> invariant_factors;  // nonzero d_i
};

SmithForm smith_normal_form(const IntMatrix& a);

// True iff the rows of `rows` are part of a Z-basis of Z^n: full row rank and
// every invariant factor equal to one.
bool extends_to_basis(const IntMatrix& rows);

// Unimodular n x n matrix whose first k rows are `rows` (k x n). Throws
// InputError if the rows do not extend to a Z-basis.
IntMatrix complete_to_basis(const IntMatrix& rows);

// Inverse of a unimodular matrix (exact; throws if det != +-1).
IntMatrix unimodular_inverse(const IntMatrix& a);

}  // namespace toric_hk::lattice
