#pragma once

// Vertex enumeration for bounded polytopes written as { x : f·x <= 1 }.
//
// The polytope is homogenized into the pointed cone
//   C = { (t, x) : t − f_i·x >= 0 for all i },
// whose extreme rays with t > 0 are exactly (1, v) for the vertices v. The
// cone is built by the incremental double description method: start from
// the simplicial cone of a full-rank row subset, then insert one constraint
// at a time, keeping the rays on the feasible side and combining every
// adjacent (+, −) pair. Adjacency uses the combinatorial test on zero sets.
// Rays are kept as primitive integer vectors, so no rational normalization
// happens inside the main loop.

#include <ksmooth/linalg.hpp>

#include <boost/dynamic_bitset.hpp>

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <span>
#include <vector>

namespace ksmooth::dd {

namespace detail {

using ksmooth::detail::IntRow;
using Bits = boost::dynamic_bitset<>;

struct Ray {
  IntRow coords; // (t, x_1, ..., x_d), primitive
  Bits zeros;    // processed constraints that vanish on the ray
};

inline void make_primitive(IntRow &v) {
  Integer g = 0;
  for (const auto &c : v)
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  if (g > 1)
    for (auto &c : v)
      mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
}

inline Integer eval(const IntRow &row, const IntRow &ray) {
  Integer acc = 0;
  for (std::size_t i = 0; i < row.size(); ++i)
    if (row[i] != 0 && ray[i] != 0)
      acc += row[i] * ray[i];
  return acc;
}

/// Integer row of t − f·x >= 0, i.e. (1, −f) scaled to integers.
inline IntRow homogenized_row(std::span<const Rational> f) {
  RatVector r;
  r.reserve(f.size() + 1);
  r.emplace_back(1);
  for (const auto &q : f)
    r.push_back(-q);
  return ksmooth::detail::integer_row(r);
}

} // namespace detail

/// Vertices of { x ∈ Q^dim : f·x <= 1 for every f } in canonical order.
/// Throws UnboundedInput when the region has a recession direction.
inline std::vector<RatVector> enumerate_vertices(std::span<const RatVector> functionals,
                                                 std::size_t dim) {
  using namespace detail;
  for (const auto &f : functionals)
    if (f.size() != dim)
      throw Error(ErrorKind::DimensionMismatch, "functional dimension");

  const std::vector<RatVector> fs = canonical({functionals.begin(), functionals.end()});
  const std::size_t m = fs.size();
  const std::size_t D = dim + 1;
  std::vector<IntRow> rows;
  rows.reserve(m);
  for (const auto &f : fs)
    rows.push_back(homogenized_row(f));

  // Initial full-rank subset, greedily in canonical order.
  std::vector<std::size_t> basis;
  {
    std::vector<RatVector> chosen;
    for (std::size_t i = 0; i < m && basis.size() < D; ++i) {
      RatVector r(D);
      for (std::size_t j = 0; j < D; ++j)
        r[j] = Rational(rows[i][j]);
      chosen.push_back(r);
      if (rank(chosen) == chosen.size())
        basis.push_back(i);
      else
        chosen.pop_back();
    }
    if (basis.size() < D)
      throw Error(ErrorKind::UnboundedInput,
                  "constraints do not bound the region (rank deficient)");
  }

  // Rays of { y : A0 y >= 0 } are the columns of A0^{-1}.
  RatMatrix A0(D, D);
  for (std::size_t i = 0; i < D; ++i)
    for (std::size_t j = 0; j < D; ++j)
      A0(i, j) = Rational(rows[basis[i]][j]);
  const auto inv = inverse(A0);
  std::vector<Ray> rays;
  Bits processed(m);
  for (auto b : basis)
    processed.set(b);
  for (std::size_t j = 0; j < D; ++j) {
    Ray r;
    r.coords = ksmooth::detail::integer_row(inv->column(j));
    make_primitive(r.coords);
    r.zeros = Bits(m);
    for (std::size_t i = 0; i < D; ++i)
      if (i != j)
        r.zeros.set(basis[i]);
    rays.push_back(std::move(r));
  }

  for (std::size_t k = 0; k < m; ++k) {
    if (processed.test(k))
      continue;
    const IntRow &row = rows[k];
    std::vector<Ray> plus, minus, next;
    std::vector<Integer> plus_val, minus_val;
    for (auto &r : rays) {
      Integer v = eval(row, r.coords);
      const int s = sgn(v);
      if (s > 0) {
        plus.push_back(std::move(r));
        plus_val.push_back(std::move(v));
      } else if (s < 0) {
        minus.push_back(std::move(r));
        minus_val.push_back(std::move(v));
      } else {
        r.zeros.set(k);
        next.push_back(std::move(r));
      }
    }
    if (minus.empty()) {
      for (auto &r : plus)
        next.push_back(std::move(r));
      rays = std::move(next);
      processed.set(k);
      continue;
    }

    // Candidates for adjacency are checked against all current rays.
    std::vector<const Bits *> all;
    all.reserve(plus.size() + minus.size() + next.size());
    for (const auto &r : plus)
      all.push_back(&r.zeros);
    for (const auto &r : minus)
      all.push_back(&r.zeros);
    for (const auto &r : next)
      all.push_back(&r.zeros);

    std::vector<Ray> created;
    for (std::size_t p = 0; p < plus.size(); ++p) {
      for (std::size_t q = 0; q < minus.size(); ++q) {
        Bits common = plus[p].zeros & minus[q].zeros;
        if (common.count() + 2 < D)
          continue;
        bool adjacent = true;
        for (const Bits *z : all) {
          if (z == &plus[p].zeros || z == &minus[q].zeros)
            continue;
          if (common.is_subset_of(*z)) {
            adjacent = false;
            break;
          }
        }
        if (!adjacent)
          continue;
        Ray r;
        r.coords.resize(D);
        for (std::size_t j = 0; j < D; ++j)
          r.coords[j] = plus_val[p] * minus[q].coords[j] - minus_val[q] * plus[p].coords[j];
        make_primitive(r.coords);
        r.zeros = std::move(common);
        r.zeros.set(k);
        created.push_back(std::move(r));
      }
    }
    for (auto &r : plus)
      next.push_back(std::move(r));
    for (auto &r : created)
      next.push_back(std::move(r));
    rays = std::move(next);
    processed.set(k);
  }

  std::vector<RatVector> vertices;
  vertices.reserve(rays.size());
  for (const auto &r : rays) {
    if (r.coords[0] <= 0)
      throw Error(ErrorKind::UnboundedInput, "recession direction detected");
    RatVector v(dim);
    for (std::size_t j = 0; j < dim; ++j) {
      v[j] = Rational(r.coords[j + 1], r.coords[0]);
      v[j].canonicalize();
    }
    vertices.push_back(std::move(v));
  }
  return canonical(std::move(vertices));
}

inline constexpr std::size_t kBruteForceMaxDim = 6;

/// Reference method: solve every dim-subset of constraints with equality and
/// keep the feasible unique solutions. Exponential; guarded to dim <= 6.
inline std::vector<RatVector> enumerate_vertices_brute_force(
    std::span<const RatVector> functionals, std::size_t dim) {
  if (dim > kBruteForceMaxDim)
    throw Error(ErrorKind::DimensionGuard,
                "brute-force vertex enumeration limited to dim <= 6");
  const std::vector<RatVector> fs = canonical({functionals.begin(), functionals.end()});
  const std::size_t m = fs.size();
  if (m < dim)
    throw Error(ErrorKind::UnboundedInput, "fewer constraints than dimensions");
  std::vector<RatVector> found;
  std::vector<std::size_t> idx(dim);
  std::iota(idx.begin(), idx.end(), 0);
  const RatVector ones(dim, Rational(1));
  while (true) {
    RatMatrix A(dim, dim);
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < dim; ++j)
        A(i, j) = fs[idx[i]][j];
    if (auto x = solve_square(A, ones)) {
      const bool feasible = std::all_of(fs.begin(), fs.end(),
                                        [&](const RatVector &f) { return dot(f, *x) <= 1; });
      if (feasible)
        found.push_back(std::move(*x));
    }
    // next combination
    std::size_t i = dim;
    while (i > 0 && idx[i - 1] == m - dim + i - 1)
      --i;
    if (i == 0)
      break;
    ++idx[i - 1];
    for (std::size_t j = i; j < dim; ++j)
      idx[j] = idx[j - 1] + 1;
  }
  if (found.empty())
    throw Error(ErrorKind::UnboundedInput, "no basic feasible solution");
  return canonical(std::move(found));
}

} // namespace ksmooth::dd
