#pragma once

#include <ksmooth/error.hpp>

#include <gmpxx.h>

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ksmooth {

// mpq_class keeps every value in lowest terms with a positive denominator,
// zero being 0/1, as long as values are produced by arithmetic or canonicalize().
using Rational = mpq_class;
using Integer = mpz_class;

/// A point of Q^n. std::vector's lexicographic operator< is the canonical order.
using RatVector = std::vector<Rational>;

inline Rational make_rational(long num, long den = 1) {
  if (den == 0)
    throw Error(ErrorKind::InputError, "zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

/// Parses "p", "p/q", "+p/q" or "-p/q" with decimal integers; rejects q = 0.
inline Rational parse_rational(std::string_view text) {
  auto bad = [&](const char *why) {
    return Error(ErrorKind::InputError,
                 "cannot parse rational '" + std::string(text) + "': " + why);
  };
  std::string s(text);
  s.erase(std::remove_if(s.begin(), s.end(),
                         [](unsigned char c) { return std::isspace(c); }),
          s.end());
  if (s.empty())
    throw bad("empty");
  bool negative = false;
  if (s.front() == '+' || s.front() == '-') {
    negative = s.front() == '-';
    s.erase(s.begin());
  }
  const auto slash = s.find('/');
  std::string num = s.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  auto digits = [](const std::string &d) {
    return !d.empty() && std::all_of(d.begin(), d.end(), [](unsigned char c) {
      return std::isdigit(c);
    });
  };
  if (!digits(num) || !digits(den))
    throw bad("expected [sign]digits[/digits]");
  Integer p(num, 10), q(den, 10);
  if (q == 0)
    throw bad("zero denominator");
  Rational r(negative ? Integer(-p) : p, q);
  r.canonicalize();
  return r;
}

/// "p/q", or "p" when q = 1.
inline std::string to_string(const Rational &q) { return q.get_str(10); }

inline std::string to_string(std::span<const Rational> v) {
  std::string out = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i)
      out += ",";
    out += to_string(v[i]);
  }
  return out + ")";
}

inline RatVector make_vector(std::initializer_list<Rational> xs) { return {xs}; }

inline RatVector parse_vector(std::string_view csv) {
  RatVector out;
  std::size_t start = 0;
  while (start <= csv.size()) {
    const auto comma = csv.find(',', start);
    const auto end = comma == std::string_view::npos ? csv.size() : comma;
    out.push_back(parse_rational(csv.substr(start, end - start)));
    if (comma == std::string_view::npos)
      break;
    start = comma + 1;
  }
  return out;
}

inline double to_double(const Rational &q) { return q.get_d(); }

// ---------------------------------------------------------------------------
// Vector algebra

inline void require_same_dim(std::span<const Rational> a,
                             std::span<const Rational> b) {
  if (a.size() != b.size())
    throw Error(ErrorKind::DimensionMismatch,
                "vectors of dimension " + std::to_string(a.size()) + " and " +
                    std::to_string(b.size()));
}

inline Rational dot(std::span<const Rational> f, std::span<const Rational> x) {
  require_same_dim(f, x);
  Rational acc = 0;
  for (std::size_t i = 0; i < f.size(); ++i)
    acc += f[i] * x[i];
  return acc;
}

inline RatVector add(std::span<const Rational> a, std::span<const Rational> b) {
  require_same_dim(a, b);
  RatVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    out[i] = a[i] + b[i];
  return out;
}

inline RatVector sub(std::span<const Rational> a, std::span<const Rational> b) {
  require_same_dim(a, b);
  RatVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    out[i] = a[i] - b[i];
  return out;
}

inline RatVector scale(const Rational &c, std::span<const Rational> a) {
  RatVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    out[i] = c * a[i];
  return out;
}

inline RatVector negate(std::span<const Rational> a) {
  RatVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    out[i] = -a[i];
  return out;
}

inline bool is_zero(std::span<const Rational> a) {
  return std::all_of(a.begin(), a.end(), [](const Rational &q) { return q == 0; });
}

inline RatVector zeros(std::size_t n) { return RatVector(n, Rational(0)); }

inline RatVector unit(std::size_t n, std::size_t i) {
  RatVector e = zeros(n);
  e.at(i) = 1;
  return e;
}

/// Sorts and removes duplicates; the canonical form of a finite point set.
inline std::vector<RatVector> canonical(std::vector<RatVector> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

/// A ∪ (−A), canonical.
inline std::vector<RatVector> symmetrize(std::span<const RatVector> pts) {
  std::vector<RatVector> out(pts.begin(), pts.end());
  for (const auto &p : pts)
    out.push_back(negate(p));
  return canonical(std::move(out));
}

inline bool is_symmetric(std::span<const RatVector> canonical_pts) {
  for (const auto &p : canonical_pts)
    if (!std::binary_search(canonical_pts.begin(), canonical_pts.end(), negate(p)))
      return false;
  return true;
}

// ---------------------------------------------------------------------------
// Matrices

class RatMatrix {
public:
  RatMatrix() = default;
  RatMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), entries_(rows * cols, Rational(0)) {}

  static RatMatrix from_rows(std::span<const RatVector> rows) {
    if (rows.empty())
      return {};
    RatMatrix m(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != m.cols_)
        throw Error(ErrorKind::DimensionMismatch, "ragged matrix rows");
      std::copy(rows[i].begin(), rows[i].end(), m.entries_.begin() + i * m.cols_);
    }
    return m;
  }

  static RatMatrix from_rows(std::initializer_list<RatVector> rows) {
    return from_rows(std::span<const RatVector>(rows.begin(), rows.size()));
  }

  static RatMatrix identity(std::size_t n) {
    RatMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
      m(i, i) = 1;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Rational &operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
  const Rational &operator()(std::size_t i, std::size_t j) const {
    return entries_[i * cols_ + j];
  }

  std::span<const Rational> row(std::size_t i) const {
    return {entries_.data() + i * cols_, cols_};
  }

  RatVector column(std::size_t j) const {
    RatVector c(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      c[i] = (*this)(i, j);
    return c;
  }

  std::vector<RatVector> row_vectors() const {
    std::vector<RatVector> out;
    for (std::size_t i = 0; i < rows_; ++i)
      out.emplace_back(row(i).begin(), row(i).end());
    return out;
  }

  /// Row-major flattening; the coordinate form used for operator spaces.
  const RatVector &vectorized() const { return entries_; }

  RatMatrix transpose() const {
    RatMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        t(j, i) = (*this)(i, j);
    return t;
  }

  RatVector apply(std::span<const Rational> v) const {
    if (v.size() != cols_)
      throw Error(ErrorKind::DimensionMismatch, "matrix-vector product");
    RatVector out(rows_, Rational(0));
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        out[i] += (*this)(i, j) * v[j];
    return out;
  }

  RatMatrix scaled(const Rational &c) const {
    RatMatrix m = *this;
    for (auto &q : m.entries_)
      q *= c;
    return m;
  }

  bool is_zero() const { return ksmooth::is_zero(entries_); }

  friend bool operator==(const RatMatrix &a, const RatMatrix &b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.entries_ == b.entries_;
  }

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  RatVector entries_;
};

/// Entry (i, j) = f_i x_j.
inline RatMatrix outer(std::span<const Rational> f, std::span<const Rational> x) {
  RatMatrix m(f.size(), x.size());
  for (std::size_t i = 0; i < f.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j)
      m(i, j) = f[i] * x[j];
  return m;
}

} // namespace ksmooth
