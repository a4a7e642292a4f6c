#pragma once

#include <ksmooth/rational.hpp>

#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace ksmooth {

namespace detail {

using IntRow = std::vector<Integer>;

/// Multiplies a rational row by the lcm of its denominators.
inline IntRow integer_row(std::span<const Rational> row) {
  Integer l = 1;
  for (const auto &q : row)
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den_mpz_t());
  IntRow out(row.size());
  for (std::size_t i = 0; i < row.size(); ++i)
    out[i] = row[i].get_num() * (l / row[i].get_den());
  return out;
}

/// Fraction-free forward elimination in place. Every intermediate entry is a
/// minor of the input, so the division by the previous pivot is exact.
/// Returns the pivot columns in order; rows [0, pivots.size()) form an echelon
/// basis of the row space. Only the first `ncols` columns are used as pivots.
inline std::vector<std::size_t> bareiss(std::vector<IntRow> &a, std::size_t ncols) {
  std::vector<std::size_t> pivots;
  if (a.empty())
    return pivots;
  const std::size_t width = a.front().size();
  Integer prev = 1;
  std::size_t r = 0;
  for (std::size_t c = 0; c < ncols && r < a.size(); ++c) {
    std::size_t p = r;
    while (p < a.size() && a[p][c] == 0)
      ++p;
    if (p == a.size())
      continue;
    std::swap(a[r], a[p]);
    const Integer &piv = a[r][c];
    for (std::size_t i = r + 1; i < a.size(); ++i) {
      const Integer lead = a[i][c];
      for (std::size_t j = c + 1; j < width; ++j) {
        Integer t = piv * a[i][j] - lead * a[r][j];
        mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
        a[i][j] = std::move(t);
      }
      a[i][c] = 0;
    }
    prev = piv;
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

} // namespace detail

inline std::size_t rank(std::span<const RatVector> rows) {
  if (rows.empty())
    return 0;
  std::vector<detail::IntRow> a;
  a.reserve(rows.size());
  for (const auto &r : rows) {
    if (r.size() != rows.front().size())
      throw Error(ErrorKind::DimensionMismatch, "rows of different length");
    a.push_back(detail::integer_row(r));
  }
  return detail::bareiss(a, rows.front().size()).size();
}

inline std::size_t rank(const RatMatrix &m) {
  if (m.rows() == 0 || m.cols() == 0)
    return 0;
  const auto rows = m.row_vectors();
  return rank(rows);
}

/// dim span of a finite set; the empty set spans {0}.
inline std::size_t span_dim(std::span<const RatVector> vs) { return rank(vs); }

/// Affine dimension of a point set (−1 conventionally for the empty set, here 0).
inline std::size_t affine_dim(std::span<const RatVector> pts) {
  if (pts.size() <= 1)
    return 0;
  std::vector<RatVector> diffs;
  diffs.reserve(pts.size() - 1);
  for (std::size_t i = 1; i < pts.size(); ++i)
    diffs.push_back(sub(pts[i], pts[0]));
  return rank(diffs);
}

/// Greedy scan in input order; returns indices of a maximal linearly
/// independent subset (the first one in that order).
inline std::vector<std::size_t> independent_subset(std::span<const RatVector> vs) {
  std::vector<std::size_t> chosen;
  std::vector<RatVector> basis;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    basis.push_back(vs[i]);
    if (rank(basis) == basis.size())
      chosen.push_back(i);
    else
      basis.pop_back();
  }
  return chosen;
}

/// Exact solution of A x = b, or nullopt when A is singular.
inline std::optional<RatVector> solve_square(const RatMatrix &A,
                                             std::span<const Rational> b) {
  const std::size_t n = A.rows();
  if (A.cols() != n)
    throw Error(ErrorKind::DimensionMismatch, "solve_square needs a square matrix");
  if (b.size() != n)
    throw Error(ErrorKind::DimensionMismatch, "right-hand side length");
  if (n == 0)
    return RatVector{};
  std::vector<detail::IntRow> a;
  a.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    RatVector aug(A.row(i).begin(), A.row(i).end());
    aug.push_back(b[i]);
    a.push_back(detail::integer_row(aug));
  }
  const auto pivots = detail::bareiss(a, n);
  if (pivots.size() < n)
    return std::nullopt;
  RatVector x(n);
  for (std::size_t i = n; i-- > 0;) {
    Rational acc(a[i][n]);
    for (std::size_t j = i + 1; j < n; ++j)
      acc -= Rational(a[i][j]) * x[j];
    x[i] = acc / Rational(a[i][i]);
  }
  return x;
}

inline std::optional<RatMatrix> inverse(const RatMatrix &A) {
  const std::size_t n = A.rows();
  RatMatrix inv(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    auto col = solve_square(A, unit(n, j));
    if (!col)
      return std::nullopt;
    for (std::size_t i = 0; i < n; ++i)
      inv(i, j) = (*col)[i];
  }
  return inv;
}

inline RatMatrix multiply(const RatMatrix &a, const RatMatrix &b) {
  if (a.cols() != b.rows())
    throw Error(ErrorKind::DimensionMismatch, "matrix product");
  RatMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k)
      if (a(i, k) != 0)
        for (std::size_t j = 0; j < b.cols(); ++j)
          c(i, j) += a(i, k) * b(k, j);
  return c;
}

} // namespace ksmooth
