#pragma once

#include <ksmooth/polytope.hpp>
#include <ksmooth/random.hpp>

#include <algorithm>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace ksmooth {

/// A finite-dimensional real normed space whose unit ball is a symmetric
/// polytope. The dual ball is computed once, at construction.
class PolyhedralSpace {
public:
  static PolyhedralSpace from_ball(Polytope ball, std::string name = "custom") {
    auto d = std::make_shared<Data>(Data{ball, polar(ball), std::move(name)});
    return PolyhedralSpace(std::move(d));
  }

  std::size_t dim() const { return data_->ball.dim(); }
  const Polytope &ball() const { return data_->ball; }
  const Polytope &dual_ball() const { return data_->dual; }
  const std::string &name() const { return data_->name; }

  /// Ext(B_X).
  const std::vector<RatVector> &extreme_points() const { return data_->ball.vertices(); }
  /// Ext(B_X*), which are also the facet functionals of B_X.
  const std::vector<RatVector> &dual_extreme_points() const {
    return data_->dual.vertices();
  }

  /// Spaces are equal when their canonical unit balls are.
  friend bool operator==(const PolyhedralSpace &a, const PolyhedralSpace &b) {
    return a.data_ == b.data_ || a.ball() == b.ball();
  }

private:
  struct Data {
    Polytope ball;
    Polytope dual;
    std::string name;
  };
  explicit PolyhedralSpace(std::shared_ptr<const Data> d) : data_(std::move(d)) {}
  std::shared_ptr<const Data> data_;
};

inline PolyhedralSpace space_from_ball(Polytope ball, std::string name = "custom") {
  return PolyhedralSpace::from_ball(std::move(ball), std::move(name));
}

/// ℓ∞ⁿ: the unit ball is the cube conv{±1}ⁿ.
inline PolyhedralSpace space_linf(std::size_t n) {
  if (n == 0)
    throw Error(ErrorKind::InputError, "dimension must be positive");
  std::vector<RatVector> pts;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    RatVector v(n);
    for (std::size_t i = 0; i < n; ++i)
      v[i] = (mask >> i) & 1 ? -1 : 1;
    pts.push_back(std::move(v));
  }
  return space_from_ball(Polytope::from_points(pts), "linf" + std::to_string(n));
}

/// ℓ₁ⁿ: the unit ball is the cross-polytope conv{±e_i}.
inline PolyhedralSpace space_l1(std::size_t n) {
  if (n == 0)
    throw Error(ErrorKind::InputError, "dimension must be positive");
  std::vector<RatVector> pts;
  for (std::size_t i = 0; i < n; ++i) {
    pts.push_back(unit(n, i));
    pts.push_back(negate(unit(n, i)));
  }
  return space_from_ball(Polytope::from_points(pts), "l1:" + std::to_string(n));
}

/// Polygonal space; every listed point must be a vertex of the symmetric hull.
inline PolyhedralSpace space_polygon(std::span<const RatVector> vertices,
                                     std::string name = "polygon") {
  const auto c = canonical({vertices.begin(), vertices.end()});
  for (const auto &v : c)
    if (v.size() != 2)
      throw Error(ErrorKind::InputError, "polygon vertices must be planar");
  if (c.size() < 4)
    throw Error(ErrorKind::InputError, "a symmetric polygon needs at least 4 vertices");
  auto ball = Polytope::from_points(c);
  if (ball.vertices() != c)
    throw Error(ErrorKind::InputError, "polygon input contains non-extreme points");
  return space_from_ball(std::move(ball), std::move(name));
}

/// conv{(1,0),(1,1),(0,1),(−1,0),(−1,−1),(0,−1)}.
inline PolyhedralSpace space_hexagon() {
  const std::vector<RatVector> v = {{1, 0}, {1, 1}, {0, 1}, {-1, 0}, {-1, -1}, {0, -1}};
  return space_polygon(v, "hexagon");
}

inline Rational norm(const PolyhedralSpace &X, std::span<const Rational> v) {
  return X.ball().gauge(v);
}

inline bool is_linf_space(const PolyhedralSpace &X) {
  return X.extreme_points().size() == (std::size_t{1} << X.dim()) &&
         std::all_of(X.extreme_points().begin(), X.extreme_points().end(),
                     [](const RatVector &v) {
                       return std::all_of(v.begin(), v.end(), [](const Rational &q) {
                         return q == 1 || q == -1;
                       });
                     });
}

inline bool is_l1_space(const PolyhedralSpace &X) {
  return X.dual_extreme_points().size() == (std::size_t{1} << X.dim()) &&
         X.extreme_points().size() == 2 * X.dim() &&
         std::all_of(X.extreme_points().begin(), X.extreme_points().end(),
                     [](const RatVector &v) {
                       return std::count_if(v.begin(), v.end(),
                                            [](const Rational &q) { return q != 0; }) == 1;
                     }) &&
         std::all_of(X.extreme_points().begin(), X.extreme_points().end(),
                     [](const RatVector &v) {
                       return std::all_of(v.begin(), v.end(), [](const Rational &q) {
                         return q == 0 || q == 1 || q == -1;
                       });
                     });
}

// ---------------------------------------------------------------------------

/// A point of the unit sphere S_X.
class UnitVector {
public:
  UnitVector(PolyhedralSpace space, RatVector coords)
      : space_(std::move(space)), coords_(std::move(coords)) {
    if (coords_.size() != space_.dim())
      throw Error(ErrorKind::DimensionMismatch, "point dimension");
    const Rational n = norm(space_, coords_);
    if (n != 1)
      throw Error(ErrorKind::NotUnitNorm,
                  "not unit norm: " + to_string(coords_) + " has norm " + to_string(n));
  }

  const PolyhedralSpace &space() const { return space_; }
  const RatVector &coords() const { return coords_; }

  UnitVector operator-() const { return UnitVector(space_, negate(coords_), trusted{}); }

private:
  struct trusted {};
  UnitVector(PolyhedralSpace s, RatVector c, trusted)
      : space_(std::move(s)), coords_(std::move(c)) {}

  PolyhedralSpace space_;
  RatVector coords_;
};

/// J(x) as a face of the dual ball, its extreme points, and k = dim span.
struct SupportSet {
  RatVector point;
  std::vector<RatVector> ext_functionals;
  Face face;
  std::size_t order = 0;
};

/// Ext J(x) = { g ∈ Ext(B_X*) : g·x = 1 }.
inline std::vector<RatVector> ext_support(const PolyhedralSpace &X,
                                          std::span<const Rational> x) {
  std::vector<RatVector> out;
  for (const auto &g : X.dual_extreme_points())
    if (dot(g, x) == 1)
      out.push_back(g);
  return out;
}

inline SupportSet support_set(const UnitVector &x) {
  const auto &dual = x.space().dual_ball();
  Polytope::Bits verts(dual.vertices().size());
  for (std::size_t i = 0; i < dual.vertices().size(); ++i)
    if (dot(dual.vertices()[i], x.coords()) == 1)
      verts.set(i);
  Face face = dual.face_from_vertices(verts);
  const std::size_t k = span_dim(face.vertices());
  return SupportSet{x.coords(), face.vertices(), std::move(face), k};
}

/// Unchecked variant for callers that already know ‖x‖ = 1.
inline std::size_t smoothness_order(const PolyhedralSpace &X, std::span<const Rational> x) {
  return span_dim(ext_support(X, x));
}

struct PointSmoothnessReport {
  RatVector point;
  std::size_t space_dim = 0;
  std::size_t order = 0;
  Face minimal_face;
  std::size_t face_dim = 0;
  std::vector<RatVector> ext_functionals;
  /// k = n − i; false would contradict the face-dimension identity.
  bool theorem_check = false;
};

inline PointSmoothnessReport smoothness_order_point(const UnitVector &x) {
  const auto s = support_set(x);
  Face f = minimal_face(x.space().ball(), x.coords());
  const std::size_t n = x.space().dim();
  const std::size_t i = f.dim();
  return PointSmoothnessReport{x.coords(), n,           s.order, std::move(f), i,
                               s.ext_functionals, s.order + i == n};
}

/// Strictly positive convex combination of the face's vertices: the centroid
/// without a seed, seeded weights with denominator <= 64 otherwise.
inline RatVector sample_relint(const Face &face, std::optional<std::uint64_t> seed = {}) {
  const auto &vs = face.vertices();
  if (vs.empty())
    throw Error(ErrorKind::InputError, "empty face");
  std::vector<Rational> w;
  if (seed) {
    Rng rng = derive_rng(*seed);
    w = positive_weights(rng, vs.size(), 64);
  } else {
    w.assign(vs.size(), Rational(1, vs.size()));
    for (auto &x : w)
      x.canonicalize();
  }
  RatVector x = zeros(vs.front().size());
  for (std::size_t i = 0; i < vs.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j)
      x[j] += w[i] * vs[i][j];
  return x;
}

// ---------------------------------------------------------------------------
// Face-theorem campaign

struct FaceRecord {
  std::vector<RatVector> vertices;
  std::size_t face_dim = 0;
  std::size_t samples = 0;
  std::vector<std::size_t> orders; // one per sample
  bool pass = true;
  std::string failure;
};

struct FaceCampaignReport {
  std::string space;
  std::size_t dim = 0;
  std::vector<FaceRecord> faces;
  std::size_t total_samples = 0;
  std::size_t failures = 0;
};

/// For every face F and each sampled x in relint(F): order(x) = n − dim(F), x
/// is in relint(F), and F is the minimal face of x.
inline FaceCampaignReport verify_face_theorem(const PolyhedralSpace &X,
                                              std::size_t samples_per_face,
                                              std::uint64_t seed) {
  FaceCampaignReport report{X.name(), X.dim(), {}, 0, 0};
  const auto faces = all_faces(X.ball());
  for (std::size_t fi = 0; fi < faces.size(); ++fi) {
    const Face &face = faces[fi];
    FaceRecord rec{face.vertices(), face.dim(), samples_per_face, {}, true, {}};
    for (std::size_t s = 0; s < samples_per_face; ++s) {
      const RatVector x = sample_relint(face, seed ^ (fi << 20) ^ (s + 1));
      const auto r = smoothness_order_point(UnitVector(X, x));
      rec.orders.push_back(r.order);
      std::string why;
      if (!relint_contains(face, x))
        why = "sample not in relative interior";
      else if (r.minimal_face.vertices() != face.vertices())
        why = "minimal face differs from sampled face";
      else if (r.order + face.dim() != X.dim())
        why = "order " + std::to_string(r.order) + " != n - dim(F) = " +
              std::to_string(X.dim() - face.dim());
      if (!why.empty() && rec.pass) {
        rec.pass = false;
        rec.failure = why + " at " + to_string(x);
      }
    }
    report.total_samples += samples_per_face;
    if (!rec.pass)
      ++report.failures;
    report.faces.push_back(std::move(rec));
  }
  return report;
}

// ---------------------------------------------------------------------------
// Seeded random spaces

/// Rational point on the unit sphere by inverse stereographic projection of a
/// random rational u ∈ Q^(d−1); such points are always in strictly convex
/// position, so every one of them is a vertex of the symmetric hull.
inline RatVector random_sphere_point(Rng &rng, std::size_t d, long bound) {
  RatVector u(d - 1);
  Rational s = 0;
  for (auto &x : u) {
    x = make_rational(uniform_int(rng, -bound, bound), uniform_int(rng, 1, bound));
    s += x * x;
  }
  RatVector p(d);
  for (std::size_t i = 0; i + 1 < d; ++i)
    p[i] = 2 * u[i] / (s + 1);
  p[d - 1] = (s - 1) / (s + 1);
  return p;
}

/// Symmetric hull of 2m seeded points; regenerated until full-dimensional.
inline PolyhedralSpace random_space(std::size_t dim, std::size_t pairs, std::uint64_t seed,
                                    long bound = 4) {
  if (dim < 2 || pairs < dim)
    throw Error(ErrorKind::InputError, "random_space needs dim >= 2 and pairs >= dim");
  Rng rng = derive_rng(seed, {dim, pairs});
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::vector<RatVector> pts;
    for (std::size_t i = 0; i < pairs; ++i)
      pts.push_back(random_sphere_point(rng, dim, bound));
    const auto sym = symmetrize(pts);
    if (sym.size() != 2 * pairs || span_dim(sym) < dim)
      continue;
    return space_from_ball(Polytope::from_points(sym),
                           "random(dim=" + std::to_string(dim) + ",seed=" +
                               std::to_string(seed) + ")");
  }
  throw Error(ErrorKind::GeneratorExhausted, "could not draw a full-dimensional ball");
}

/// Symmetric polygon with exactly 2·pairs vertices.
inline PolyhedralSpace random_polygon(std::size_t pairs, std::uint64_t seed) {
  return random_space(2, pairs, seed, 12);
}

} // namespace ksmooth
