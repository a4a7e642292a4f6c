#pragma once

#include <ksmooth/banach.hpp>

#include <map>
#include <mutex>
#include <optional>
#include <utility>
#include <vector>

namespace ksmooth {

/// A linear map between polyhedral spaces, stored as an m×n matrix acting on
/// column vectors: rows index codomain coordinates.
class Operator {
public:
  Operator(PolyhedralSpace domain, PolyhedralSpace codomain, RatMatrix matrix)
      : domain_(std::move(domain)), codomain_(std::move(codomain)),
        matrix_(std::move(matrix)) {
    if (matrix_.rows() != codomain_.dim() || matrix_.cols() != domain_.dim())
      throw Error(ErrorKind::DimensionMismatch,
                  "matrix is " + std::to_string(matrix_.rows()) + "x" +
                      std::to_string(matrix_.cols()) + ", expected " +
                      std::to_string(codomain_.dim()) + "x" + std::to_string(domain_.dim()));
  }

  const PolyhedralSpace &domain() const { return domain_; }
  const PolyhedralSpace &codomain() const { return codomain_; }
  const RatMatrix &matrix() const { return matrix_; }

  RatVector apply(std::span<const Rational> v) const { return matrix_.apply(v); }
  Operator scaled(const Rational &c) const {
    return Operator(domain_, codomain_, matrix_.scaled(c));
  }
  Operator operator-() const { return scaled(Rational(-1)); }

private:
  PolyhedralSpace domain_;
  PolyhedralSpace codomain_;
  RatMatrix matrix_;
};

inline std::size_t operator_rank(const Operator &T) { return rank(T.matrix()); }

/// ‖T‖ = max ‖Tv‖ over Ext(B_X); a convex function peaks at a vertex.
inline Rational op_norm(const Operator &T) {
  Rational best = 0;
  for (const auto &v : T.domain().extreme_points()) {
    Rational n = norm(T.codomain(), T.apply(v));
    if (n > best)
      best = std::move(n);
  }
  return best;
}

/// M_T ∩ Ext(B_X), in the domain's canonical vertex order.
inline std::vector<RatVector> norming_extremes(const Operator &T) {
  const Rational n = op_norm(T);
  if (n == 0)
    throw Error(ErrorKind::ZeroOperator, "the zero operator attains its norm everywhere");
  std::vector<RatVector> out;
  for (const auto &v : T.domain().extreme_points())
    if (norm(T.codomain(), T.apply(v)) == n)
      out.push_back(v);
  return out;
}

inline bool all_vertices_norming(const Operator &T) {
  return norming_extremes(T).size() == T.domain().extreme_points().size();
}

inline Operator normalized(const Operator &T) {
  const Rational n = op_norm(T);
  if (n == 0)
    throw Error(ErrorKind::ZeroOperator, "cannot normalize the zero operator");
  return n == 1 ? T : T.scaled(1 / n);
}

/// Extreme points of T(B_X).
inline std::vector<RatVector> image_polytope(const Operator &T) {
  std::vector<RatVector> imgs;
  for (const auto &v : T.domain().extreme_points())
    imgs.push_back(T.apply(v));
  return extreme_points_general(imgs);
}

// ---------------------------------------------------------------------------

/// The functional S ↦ y*(Sx) on L(X,Y).
struct RankOneFunctional {
  RatVector ystar;
  RatVector x;
  RatMatrix vectorized;

  RankOneFunctional(RatVector g, RatVector v)
      : ystar(std::move(g)), x(std::move(v)), vectorized(outer(ystar, x)) {}

  Rational evaluate(const RatMatrix &S) const { return dot(ystar, S.apply(x)); }

  /// Entrywise pairing ⟨vectorized, S⟩.
  Rational pair(const RatMatrix &S) const { return dot(vectorized.vectorized(), S.vectorized()); }

  friend bool operator==(const RankOneFunctional &a, const RankOneFunctional &b) {
    return a.ystar == b.ystar && a.x == b.x;
  }
  friend bool operator<(const RankOneFunctional &a, const RankOneFunctional &b) {
    return std::tie(a.x, a.ystar) < std::tie(b.x, b.ystar);
  }
};

inline void require_normalized(const Operator &T) {
  const Rational n = op_norm(T);
  if (n != 1)
    throw Error(ErrorKind::NotNormalized, "operator norm is " + to_string(n) + ", expected 1");
}

/// { y*⊗x : x ∈ M_T ∩ Ext(B_X), y* ∈ Ext J(Tx) }, ordered by (x, y*).
inline std::vector<RankOneFunctional> ext_J_operator(const Operator &T) {
  require_normalized(T);
  std::vector<RankOneFunctional> out;
  for (const auto &v : norming_extremes(T))
    for (auto &g : ext_support(T.codomain(), T.apply(v)))
      out.emplace_back(std::move(g), v);
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<RatVector> vectorized(std::span<const RankOneFunctional> fs) {
  std::vector<RatVector> out;
  out.reserve(fs.size());
  for (const auto &f : fs)
    out.push_back(f.vectorized.vectorized());
  return out;
}

struct VertexSupport {
  RatVector vertex;
  RatVector image;
  std::vector<RatVector> ext_functionals;
  std::size_t order = 0;
};

struct OperatorSmoothnessReport {
  Rational input_norm;
  RatMatrix normalized_matrix;
  std::vector<RatVector> norming_extremes;
  std::vector<VertexSupport> per_vertex;
  std::vector<RankOneFunctional> ext_j;
  std::size_t order = 0;
};

inline OperatorSmoothnessReport smoothness_order_operator(const Operator &input) {
  const Rational n = op_norm(input);
  const Operator T = normalized(input);
  OperatorSmoothnessReport r{n, T.matrix(), norming_extremes(T), {}, ext_J_operator(T), 0};
  for (const auto &v : r.norming_extremes) {
    auto img = T.apply(v);
    auto ext = ext_support(T.codomain(), img);
    const std::size_t k = span_dim(ext);
    r.per_vertex.push_back({v, std::move(img), std::move(ext), k});
  }
  r.order = span_dim(vectorized(r.ext_j));
  return r;
}

// ---------------------------------------------------------------------------
// The operator space L(X,Y) as a polyhedral space of dimension n·m

inline constexpr std::size_t kOperatorOracleMaxDim = 9;
inline constexpr std::size_t kPolarOracleMaxDim = 6;

/// ‖T‖ <= 1 as { ⟨outer(g, v), T⟩ <= 1 : v ∈ Ext(B_X), g ∈ Ext(B_Y*) }. Each
/// functional arises from both (v, g) and (−v, −g); duplicates are merged.
inline HPolytope operator_ball(const PolyhedralSpace &X, const PolyhedralSpace &Y) {
  const std::size_t d = X.dim() * Y.dim();
  if (d > kOperatorOracleMaxDim)
    throw Error(ErrorKind::DimensionGuard,
                "operator space dimension " + std::to_string(d) + " exceeds " +
                    std::to_string(kOperatorOracleMaxDim));
  std::vector<RatVector> fs;
  for (const auto &v : X.extreme_points())
    for (const auto &g : Y.dual_extreme_points())
      fs.push_back(outer(g, v).vectorized());
  return HPolytope{d, canonical(std::move(fs))};
}

/// The unit ball of L(X,Y) with its vertices enumerated. Building it is the
/// expensive step, so oracles for one (X, Y) pair share an instance.
class OperatorSpaceOracle {
public:
  OperatorSpaceOracle(PolyhedralSpace X, PolyhedralSpace Y)
      : X_(std::move(X)), Y_(std::move(Y)),
        ball_(Polytope::from_functionals(operator_ball(X_, Y_).functionals,
                                         X_.dim() * Y_.dim())) {}

  const Polytope &ball() const { return ball_; }
  std::size_t dim() const { return ball_.dim(); }

  /// nm − dim of the minimal face of B_{L(X,Y)} containing T.
  std::size_t order(const Operator &T) const {
    check(T);
    return dim() - minimal_face(ball_, T.matrix().vectorized()).dim();
  }

  /// span_dim of the dual operator-ball vertices tight at T.
  std::optional<std::size_t> polar_order(const Operator &T) const {
    check(T);
    if (dim() > kPolarOracleMaxDim)
      return std::nullopt;
    std::call_once(polar_once_, [this] { polar_ = polar(ball_); });
    const auto t = T.matrix().vectorized();
    std::vector<RatVector> tight;
    for (const auto &f : polar_->vertices())
      if (dot(f, t) == 1)
        tight.push_back(f);
    return span_dim(tight);
  }

private:
  void check(const Operator &T) const {
    if (!(T.domain() == X_) || !(T.codomain() == Y_))
      throw Error(ErrorKind::InputError, "operator spaces do not match the oracle");
    require_normalized(T);
  }

  PolyhedralSpace X_, Y_;
  Polytope ball_;
  mutable std::once_flag polar_once_;
  mutable std::optional<Polytope> polar_;
};

/// One-shot oracle; prefer OperatorSpaceOracle for repeated queries.
inline std::size_t oracle_order(const Operator &T) {
  return OperatorSpaceOracle(T.domain(), T.codomain()).order(T);
}

} // namespace ksmooth
