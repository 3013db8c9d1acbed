#include "toric_hk/lattice.hpp"

#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <string>
#include <utility>

#include "toric_hk/error.hpp"

namespace toric_hk::lattice {
namespace {

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) {
    throw OverflowError("integer overflow in lattice arithmetic");
  }
  return out;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_add_overflow(a, b, &out)) {
    throw OverflowError("integer overflow in lattice arithmetic");
  }
  return out;
}

std::int64_t checked_sub(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_sub_overflow(a, b, &out)) {
    throw OverflowError("integer overflow in lattice arithmetic");
  }
  return out;
}

// Extended Euclid: g = s*a + t*b, g >= 0.
void extended_gcd(std::int64_t a, std::int64_t b, std::int64_t& g,
                  std::int64_t& s, std::int64_t& t) {
  std::int64_t old_r = a, r = b, old_s = 1, s_ = 0, old_t = 0, t_ = 1;
  while (r != 0) {
    const std::int64_t q = old_r / r;
    old_r = checked_sub(old_r, checked_mul(q, r));
    std::swap(old_r, r);
    old_s = checked_sub(old_s, checked_mul(q, s_));
    std::swap(old_s, s_);
    old_t = checked_sub(old_t, checked_mul(q, t_));
    std::swap(old_t, t_);
  }
  if (old_r < 0) {
    old_r = -old_r;
    old_s = -old_s;
    old_t = -old_t;
  }
  // Prefer the plain elimination when a already divides b, so that clearing
  // one entry never disturbs the pivot row.
  if (a != 0 && b % a == 0) {
    old_r = std::llabs(a);
    old_s = a < 0 ? -1 : 1;
    old_t = 0;
  }
  g = old_r;
  s = old_s;
  t = old_t;
}

// Row op on M: rows (i, j) <- (a*ri + b*rj, c*ri + d*rj).
void combine_rows(IntMatrix& m, Eigen::Index i, Eigen::Index j, std::int64_t a,
                  std::int64_t b, std::int64_t c, std::int64_t d) {
  for (Eigen::Index k = 0; k < m.cols(); ++k) {
    const std::int64_t ri = m(i, k), rj = m(j, k);
    m(i, k) = checked_add(checked_mul(a, ri), checked_mul(b, rj));
    m(j, k) = checked_add(checked_mul(c, ri), checked_mul(d, rj));
  }
}

void combine_cols(IntMatrix& m, Eigen::Index i, Eigen::Index j, std::int64_t a,
                  std::int64_t b, std::int64_t c, std::int64_t d) {
  for (Eigen::Index k = 0; k < m.rows(); ++k) {
    const std::int64_t ci = m(k, i), cj = m(k, j);
    m(k, i) = checked_add(checked_mul(a, ci), checked_mul(b, cj));
    m(k, j) = checked_add(checked_mul(c, ci), checked_mul(d, cj));
  }
}

__extension__ typedef __int128 wide;

}  // namespace

std::int64_t gcd(std::span<const std::int64_t> entries) {
  std::int64_t g = 0;
  for (const auto e : entries) g = std::gcd(g, e);
  return g;
}

int rank(const IntMatrix& a) {
  // Bareiss elimination on a copy promoted to __int128 to delay overflow.
  const Eigen::Index rows = a.rows(), cols = a.cols();
  std::vector<std::vector<wide>> m(rows, std::vector<wide>(cols));
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m[i][j] = a(i, j);
  int r = 0;
  wide prev = 1;
  for (Eigen::Index c = 0; c < cols && r < rows; ++c) {
    Eigen::Index pivot = -1;
    for (Eigen::Index i = r; i < rows; ++i) {
      if (m[i][c] != 0) {
        pivot = i;
        break;
      }
    }
    if (pivot < 0) continue;
    std::swap(m[r], m[pivot]);
    for (Eigen::Index i = r + 1; i < rows; ++i) {
      for (Eigen::Index j = c + 1; j < cols; ++j) {
        m[i][j] = (m[r][c] * m[i][j] - m[i][c] * m[r][j]) / prev;
      }
      m[i][c] = 0;
    }
    prev = m[r][c];
    ++r;
  }
  return r;
}

std::int64_t determinant(const IntMatrix& a) {
  if (a.rows() != a.cols()) throw DimensionError("determinant of non-square matrix");
  const Eigen::Index n = a.rows();
  if (n == 0) return 1;
  std::vector<std::vector<wide>> m(n, std::vector<wide>(n));
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m[i][j] = a(i, j);
  int sign = 1;
  wide prev = 1;
  for (Eigen::Index c = 0; c < n; ++c) {
    Eigen::Index pivot = -1;
    for (Eigen::Index i = c; i < n; ++i)
      if (m[i][c] != 0) {
        pivot = i;
        break;
      }
    if (pivot < 0) return 0;
    if (pivot != c) {
      std::swap(m[c], m[pivot]);
      sign = -sign;
    }
    for (Eigen::Index i = c + 1; i < n; ++i) {
      for (Eigen::Index j = c + 1; j < n; ++j)
        m[i][j] = (m[c][c] * m[i][j] - m[i][c] * m[c][j]) / prev;
      m[i][c] = 0;
    }
    prev = m[c][c];
  }
  const wide det = sign * m[n - 1][n - 1];
  if (det > INT64_MAX || det < INT64_MIN) throw OverflowError("determinant overflows int64");
  return static_cast<std::int64_t>(det);
}

SmithForm smith_normal_form(const IntMatrix& a) {
  const Eigen::Index rows = a.rows(), cols = a.cols();
  IntMatrix d = a;
  IntMatrix p = IntMatrix::Identity(rows, rows);
  IntMatrix q = IntMatrix::Identity(cols, cols);

  const Eigen::Index diag = std::min(rows, cols);
  for (Eigen::Index t = 0; t < diag; ++t) {
    // Pivot: smallest nonzero |entry| in the trailing block.
    Eigen::Index pi = -1, pj = -1;
    std::int64_t best = 0;
    for (Eigen::Index i = t; i < rows; ++i)
      for (Eigen::Index j = t; j < cols; ++j)
        if (d(i, j) != 0 && (best == 0 || std::llabs(d(i, j)) < best)) {
          best = std::llabs(d(i, j));
          pi = i;
          pj = j;
        }
    if (pi < 0) break;
    d.row(t).swap(d.row(pi));
    p.row(t).swap(p.row(pi));
    d.col(t).swap(d.col(pj));
    q.col(t).swap(q.col(pj));

    for (;;) {
      // Clear column t below the pivot.
      for (Eigen::Index i = t + 1; i < rows; ++i) {
        if (d(i, t) == 0) continue;
        std::int64_t g, s, u;
        extended_gcd(d(t, t), d(i, t), g, s, u);
        const std::int64_t at = d(t, t) / g, ai = d(i, t) / g;
        // [s u; -ai at] has det s*at + u*ai = 1.
        combine_rows(d, t, i, s, u, -ai, at);
        combine_rows(p, t, i, s, u, -ai, at);
      }
      // Clear row t right of the pivot; this may refill column t.
      for (Eigen::Index j = t + 1; j < cols; ++j) {
        if (d(t, j) == 0) continue;
        std::int64_t g, s, u;
        extended_gcd(d(t, t), d(t, j), g, s, u);
        const std::int64_t at = d(t, t) / g, aj = d(t, j) / g;
        combine_cols(d, t, j, s, u, -aj, at);
        combine_cols(q, t, j, s, u, -aj, at);
      }
      bool column_zero = true;
      for (Eigen::Index i = t + 1; i < rows; ++i) column_zero &= d(i, t) == 0;
      if (!column_zero) continue;

      // The pivot must divide the whole trailing block.
      Eigen::Index offending = -1;
      for (Eigen::Index i = t + 1; i < rows && offending < 0; ++i)
        for (Eigen::Index j = t + 1; j < cols; ++j)
          if (d(i, j) % d(t, t) != 0) {
            offending = i;
            break;
          }
      if (offending < 0) break;
      combine_rows(d, t, offending, 1, 1, 0, 1);
      combine_rows(p, t, offending, 1, 1, 0, 1);
    }
    if (d(t, t) < 0) {
      d.row(t) = -d.row(t);
      p.row(t) = -p.row(t);
    }
  }

  SmithForm out{d, p, q, {}};
  for (Eigen::Index t = 0; t < diag; ++t)
    if (d(t, t) != 0) out.invariant_factors.push_back(d(t, t));
  return out;
}

bool extends_to_basis(const IntMatrix& rows) {
  if (rows.rows() == 0) return true;
  if (rows.rows() > rows.cols()) return false;
  const auto snf = smith_normal_form(rows);
  if (static_cast<Eigen::Index>(snf.invariant_factors.size()) != rows.rows()) return false;
  for (const auto f : snf.invariant_factors)
    if (f != 1) return false;
  return true;
}

IntMatrix complete_to_basis(const IntMatrix& rows) {
  const Eigen::Index k = rows.rows(), n = rows.cols();
  if (!extends_to_basis(rows)) {
    throw InputError("rows do not extend to a Z-basis of Z^" + std::to_string(n));
  }
  // P U Q = [I 0]  =>  U = P^-1 [I 0] Q^-1; take W = diag(P^-1, I) Q^-1.
  const auto snf = smith_normal_form(rows);
  const IntMatrix p_inv = unimodular_inverse(snf.left);
  const IntMatrix q_inv = unimodular_inverse(snf.right);
  IntMatrix left = IntMatrix::Identity(n, n);
  left.topLeftCorner(k, k) = p_inv;
  IntMatrix w = IntMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      std::int64_t acc = 0;
      for (Eigen::Index l = 0; l < n; ++l) acc = checked_add(acc, checked_mul(left(i, l), q_inv(l, j)));
      w(i, j) = acc;
    }
  return w;
}

IntMatrix unimodular_inverse(const IntMatrix& a) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n) throw DimensionError("inverse of non-square matrix");
  // Gauss-Jordan over Z: valid when det = +-1 since every pivot becomes +-1
  // after gcd row operations.
  IntMatrix m = a;
  IntMatrix inv = IntMatrix::Identity(n, n);
  for (Eigen::Index c = 0; c < n; ++c) {
    for (Eigen::Index i = c + 1; i < n; ++i) {
      if (m(i, c) == 0) continue;
      std::int64_t g, s, u;
      extended_gcd(m(c, c), m(i, c), g, s, u);
      const std::int64_t ac = m(c, c) / g, ai = m(i, c) / g;
      combine_rows(m, c, i, s, u, -ai, ac);
      combine_rows(inv, c, i, s, u, -ai, ac);
    }
    if (std::llabs(m(c, c)) != 1) throw InputError("matrix is not unimodular");
    if (m(c, c) < 0) {
      m.row(c) = -m.row(c);
      inv.row(c) = -inv.row(c);
    }
  }
  for (Eigen::Index c = n - 1; c >= 0; --c) {
    for (Eigen::Index i = 0; i < c; ++i) {
      const std::int64_t f = m(i, c);
      if (f == 0) continue;
      for (Eigen::Index k = 0; k < n; ++k) {
        m(i, k) = checked_sub(m(i, k), checked_mul(f, m(c, k)));
        inv(i, k) = checked_sub(inv(i, k), checked_mul(f, inv(c, k)));
      }
    }
  }
  return inv;
}

}  // namespace toric_hk::lattice
