#pragma once

#include <ksmooth/double_description.hpp>
#include <ksmooth/linalg.hpp>

#include <boost/dynamic_bitset.hpp>

#include <algorithm>
#include <cstddef>
#include <deque>
#include <memory>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace ksmooth {

/// Vertex representation. `vertices` is canonical (sorted, no duplicates).
struct VPolytope {
  std::size_t dim = 0;
  std::vector<RatVector> vertices;

  friend bool operator==(const VPolytope &, const VPolytope &) = default;
};

/// Facet representation: { x : f·x <= 1 for f in functionals }, canonical.
struct HPolytope {
  std::size_t dim = 0;
  std::vector<RatVector> functionals;

  friend bool operator==(const HPolytope &, const HPolytope &) = default;
};

/// Vertex enumeration of an H-representation by double description.
inline VPolytope vertex_enumeration(const HPolytope &h) {
  return {h.dim, dd::enumerate_vertices(h.functionals, h.dim)};
}

/// Same contract as vertex_enumeration, by the basic-solution method (dim <= 6).
inline VPolytope vertex_enumeration_brute_force(const HPolytope &h) {
  return {h.dim, dd::enumerate_vertices_brute_force(h.functionals, h.dim)};
}

namespace detail {

inline void require_points(std::span<const RatVector> pts, std::size_t &dim) {
  if (pts.empty())
    throw Error(ErrorKind::InputError, "empty point set");
  dim = pts.front().size();
  if (dim == 0)
    throw Error(ErrorKind::InputError, "zero-dimensional points");
  for (const auto &p : pts)
    if (p.size() != dim)
      throw Error(ErrorKind::DimensionMismatch, "points of different dimension");
}

/// For each point, the indices of `functionals` tight (== 1) at it.
inline std::vector<std::vector<std::size_t>>
tight_sets(std::span<const RatVector> pts, std::span<const RatVector> functionals) {
  std::vector<std::vector<std::size_t>> out(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = 0; j < functionals.size(); ++j)
      if (dot(functionals[j], pts[i]) == 1)
        out[i].push_back(j);
  return out;
}

inline std::vector<RatVector> pick(std::span<const RatVector> from,
                                   std::span<const std::size_t> idx) {
  std::vector<RatVector> out;
  out.reserve(idx.size());
  for (auto i : idx)
    out.push_back(from[i]);
  return out;
}

/// Points whose tight functionals span the whole space are extreme points of
/// a polytope given by those functionals (origin in the interior).
inline std::vector<RatVector> points_with_full_rank_tight_set(
    std::span<const RatVector> pts, std::span<const RatVector> facets, std::size_t dim) {
  std::vector<RatVector> out;
  const auto tight = tight_sets(pts, facets);
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (tight[i].size() >= dim && rank(pick(facets, tight[i])) == dim)
      out.push_back(pts[i]);
  return canonical(std::move(out));
}

} // namespace detail

/// Extreme points of conv(pts) for a symmetric, full-dimensional point set.
/// Interior and duplicate points are dropped.
inline VPolytope hull_from_points(std::span<const RatVector> pts) {
  std::size_t dim = 0;
  detail::require_points(pts, dim);
  auto c = canonical({pts.begin(), pts.end()});
  if (!is_symmetric(c))
    throw Error(ErrorKind::NotSymmetric, "point set is not centrally symmetric");
  if (span_dim(c) < dim)
    throw Error(ErrorKind::NotFullDimensional,
                "points span a proper subspace; use extreme_points_general");
  // Facets of conv(c) are the vertices of its polar.
  const auto facets = dd::enumerate_vertices(c, dim);
  return {dim, detail::points_with_full_rank_tight_set(c, facets, dim)};
}

/// Extreme points of conv(pts) with no symmetry or dimension requirement.
inline std::vector<RatVector> extreme_points_general(std::span<const RatVector> pts) {
  std::size_t dim = 0;
  detail::require_points(pts, dim);
  auto c = canonical({pts.begin(), pts.end()});
  if (c.size() == 1)
    return c;
  const std::size_t r = affine_dim(c);
  if (r == 0)
    return {c.front()};

  // A coordinate projection that is injective on the affine hull maps
  // extreme points to extreme points and back.
  std::vector<RatVector> diffs;
  for (std::size_t i = 1; i < c.size(); ++i)
    diffs.push_back(sub(c[i], c[0]));
  std::vector<RatVector> columns;
  for (std::size_t j = 0; j < dim; ++j) {
    RatVector col(diffs.size());
    for (std::size_t i = 0; i < diffs.size(); ++i)
      col[i] = diffs[i][j];
    columns.push_back(std::move(col));
  }
  const auto coords = independent_subset(columns);

  // Centre on the centroid, which lies in the relative interior.
  RatVector centroid(r, Rational(0));
  std::vector<RatVector> projected;
  for (const auto &p : c) {
    RatVector q(r);
    for (std::size_t j = 0; j < r; ++j)
      q[j] = p[coords[j]];
    for (std::size_t j = 0; j < r; ++j)
      centroid[j] += q[j];
    projected.push_back(std::move(q));
  }
  for (auto &x : centroid)
    x /= static_cast<long>(c.size());
  for (auto &q : projected)
    q = sub(q, centroid);

  const auto facets = dd::enumerate_vertices(projected, r);
  const auto tight = detail::tight_sets(projected, facets);
  std::vector<RatVector> out;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (tight[i].size() >= r && rank(detail::pick(facets, tight[i])) == r)
      out.push_back(c[i]);
  return canonical(std::move(out));
}

class Face;

/// A full-dimensional, centrally symmetric polytope held as paired V- and
/// H-representations. Copies share the same immutable data.
class Polytope {
public:
  using Bits = boost::dynamic_bitset<>;

  /// Builds from a symmetric point set; non-extreme points are dropped.
  static Polytope from_points(std::span<const RatVector> pts) {
    auto v = hull_from_points(pts);
    const std::size_t dim = v.dim;
    auto facets = dd::enumerate_vertices(v.vertices, dim);
    return Polytope(std::move(v), HPolytope{dim, std::move(facets)});
  }

  /// Builds from a symmetric functional set. With `strict`, redundant
  /// functionals are an input error; otherwise they are dropped.
  static Polytope from_functionals(std::span<const RatVector> fs, std::size_t dim,
                                   bool strict = false) {
    auto c = canonical({fs.begin(), fs.end()});
    for (const auto &f : c)
      if (f.size() != dim)
        throw Error(ErrorKind::DimensionMismatch, "functional dimension");
    if (!is_symmetric(c))
      throw Error(ErrorKind::NotSymmetric, "functional set is not centrally symmetric");
    auto v = vertex_enumeration(HPolytope{dim, c});
    std::vector<RatVector> kept;
    const auto tight_per_vertex = detail::tight_sets(c, v.vertices);
    for (std::size_t j = 0; j < c.size(); ++j) {
      const auto on = detail::pick(v.vertices, tight_per_vertex[j]);
      if (!on.empty() && affine_dim(on) + 1 == dim)
        kept.push_back(c[j]);
      else if (strict)
        throw Error(ErrorKind::InputError, "redundant functional " + to_string(c[j]));
    }
    return Polytope(std::move(v), HPolytope{dim, std::move(kept)});
  }

  std::size_t dim() const { return data_->v.dim; }
  const VPolytope &vrep() const { return data_->v; }
  const HPolytope &hrep() const { return data_->h; }
  const std::vector<RatVector> &vertices() const { return data_->v.vertices; }
  const std::vector<RatVector> &functionals() const { return data_->h.functionals; }

  /// Functionals tight at vertex i.
  const Bits &tight_at_vertex(std::size_t i) const { return data_->vertex_tight[i]; }
  /// Vertices tight at functional j.
  const Bits &vertices_on(std::size_t j) const { return data_->functional_tight[j]; }

  /// max_f f·x, the Minkowski gauge of the polytope.
  Rational gauge(std::span<const Rational> x) const {
    if (x.size() != dim())
      throw Error(ErrorKind::DimensionMismatch, "point dimension");
    Rational best = dot(functionals().front(), x);
    for (const auto &f : functionals()) {
      Rational v = dot(f, x);
      if (v > best)
        best = std::move(v);
    }
    return best;
  }

  /// The face whose vertex set is `vertex_set` (which must be a face).
  Face face_from_vertices(const Bits &vertex_set) const;

  friend bool operator==(const Polytope &a, const Polytope &b) {
    return a.vrep() == b.vrep() && a.hrep() == b.hrep();
  }

private:
  struct Data {
    VPolytope v;
    HPolytope h;
    std::vector<Bits> vertex_tight;
    std::vector<Bits> functional_tight;
  };

  Polytope(VPolytope v, HPolytope h) {
    auto d = std::make_shared<Data>();
    d->v = std::move(v);
    d->h = std::move(h);
    const std::size_t nv = d->v.vertices.size(), nf = d->h.functionals.size();
    d->vertex_tight.assign(nv, Bits(nf));
    d->functional_tight.assign(nf, Bits(nv));
    for (std::size_t i = 0; i < nv; ++i)
      for (std::size_t j = 0; j < nf; ++j)
        if (dot(d->h.functionals[j], d->v.vertices[i]) == 1) {
          d->vertex_tight[i].set(j);
          d->functional_tight[j].set(i);
        }
    data_ = std::move(d);
  }

  std::shared_ptr<const Data> data_;

  friend Polytope polar(const Polytope &);
};

/// A nonempty face: its vertices and the functionals tight on all of them.
class Face {
public:
  Face(Polytope parent, Polytope::Bits vertex_bits, Polytope::Bits functional_bits)
      : parent_(std::move(parent)), vertex_bits_(std::move(vertex_bits)),
        functional_bits_(std::move(functional_bits)) {
    for (auto i = vertex_bits_.find_first(); i != Polytope::Bits::npos;
         i = vertex_bits_.find_next(i))
      vertices_.push_back(parent_.vertices()[i]);
    for (auto j = functional_bits_.find_first(); j != Polytope::Bits::npos;
         j = functional_bits_.find_next(j))
      active_.push_back(parent_.functionals()[j]);
    dim_ = affine_dim(vertices_);
  }

  const Polytope &parent() const { return parent_; }
  const std::vector<RatVector> &vertices() const { return vertices_; }
  const std::vector<RatVector> &active_functionals() const { return active_; }
  const Polytope::Bits &vertex_bits() const { return vertex_bits_; }
  const Polytope::Bits &functional_bits() const { return functional_bits_; }
  std::size_t dim() const { return dim_; }
  bool is_facet() const { return dim_ + 1 == parent_.dim(); }
  bool is_edge() const { return dim_ == 1; }
  bool is_vertex() const { return vertices_.size() == 1; }

private:
  Polytope parent_;
  Polytope::Bits vertex_bits_;
  Polytope::Bits functional_bits_;
  std::vector<RatVector> vertices_;
  std::vector<RatVector> active_;
  std::size_t dim_ = 0;
};

inline Face Polytope::face_from_vertices(const Bits &vertex_set) const {
  Bits active(functionals().size());
  active.set();
  for (auto i = vertex_set.find_first(); i != Bits::npos; i = vertex_set.find_next(i))
    active &= tight_at_vertex(i);
  return Face(*this, vertex_set, active);
}

/// Polar body { f : f·v <= 1 for all vertices v }. The vertices are found by
/// vertex enumeration; the facets are the vertices of P.
inline Polytope polar(const Polytope &p) {
  auto v = vertex_enumeration(HPolytope{p.dim(), p.vertices()});
  return Polytope(std::move(v), HPolytope{p.dim(), p.vertices()});
}

/// Face spanned by the functionals active at a boundary point x.
inline Face minimal_face(const Polytope &p, std::span<const Rational> x) {
  const Rational g = p.gauge(x);
  if (g < 1)
    throw Error(ErrorKind::InteriorPoint, "point " + to_string(x) + " has gauge " +
                                              to_string(g) + " < 1");
  if (g > 1)
    throw Error(ErrorKind::ExteriorPoint, "point " + to_string(x) + " has gauge " +
                                              to_string(g) + " > 1");
  Polytope::Bits active(p.functionals().size());
  for (std::size_t j = 0; j < p.functionals().size(); ++j)
    if (dot(p.functionals()[j], x) == 1)
      active.set(j);
  Polytope::Bits verts(p.vertices().size());
  verts.set();
  for (auto j = active.find_first(); j != Polytope::Bits::npos; j = active.find_next(j))
    verts &= p.vertices_on(j);
  return Face(p, verts, active);
}

/// x is in the relative interior of F iff it satisfies F's active functionals
/// with equality and every other functional strictly.
inline bool relint_contains(const Face &face, std::span<const Rational> x) {
  const auto &fs = face.parent().functionals();
  if (x.size() != face.parent().dim())
    throw Error(ErrorKind::DimensionMismatch, "point dimension");
  for (std::size_t j = 0; j < fs.size(); ++j) {
    const Rational v = dot(fs[j], x);
    if (face.functional_bits().test(j) ? v != 1 : v >= 1)
      return false;
  }
  return true;
}

inline constexpr std::size_t kFaceEnumerationMaxDim = 6;

/// Every nonempty proper face exactly once, ordered by (dim, vertex set).
inline std::vector<Face> all_faces(const Polytope &p) {
  if (p.dim() > kFaceEnumerationMaxDim)
    throw Error(ErrorKind::DimensionGuard, "face enumeration limited to dim <= 6");
  using Bits = Polytope::Bits;
  // Faces are exactly the nonempty intersections of facets.
  std::set<Bits> seen;
  std::deque<Bits> queue;
  for (std::size_t j = 0; j < p.functionals().size(); ++j)
    if (seen.insert(p.vertices_on(j)).second)
      queue.push_back(p.vertices_on(j));
  while (!queue.empty()) {
    Bits s = std::move(queue.front());
    queue.pop_front();
    for (std::size_t j = 0; j < p.functionals().size(); ++j) {
      Bits t = s & p.vertices_on(j);
      if (t.any() && !seen.count(t)) {
        seen.insert(t);
        queue.push_back(std::move(t));
      }
    }
  }
  std::vector<Face> faces;
  faces.reserve(seen.size());
  for (const auto &s : seen)
    faces.push_back(p.face_from_vertices(s));
  std::stable_sort(faces.begin(), faces.end(), [](const Face &a, const Face &b) {
    if (a.dim() != b.dim())
      return a.dim() < b.dim();
    return a.vertices() < b.vertices();
  });
  return faces;
}

/// L[a, b] (closed) or L(a, b) (open).
struct Segment {
  RatVector a;
  RatVector b;
  bool closed = true;
};

/// Membership of x = (1 − t) a + t b with t in [0, 1] or (0, 1).
inline bool segment_relint_contains(const Segment &s, std::span<const Rational> x) {
  require_same_dim(s.a, s.b);
  require_same_dim(s.a, x);
  if (s.a == s.b)
    throw Error(ErrorKind::InputError, "degenerate segment");
  const RatVector dir = sub(s.b, s.a);
  const RatVector rel = sub(x, s.a);
  std::optional<Rational> t;
  for (std::size_t i = 0; i < dir.size(); ++i) {
    if (dir[i] == 0) {
      if (rel[i] != 0)
        return false;
      continue;
    }
    Rational ti = rel[i] / dir[i];
    if (t && *t != ti)
      return false;
    t = std::move(ti);
  }
  return s.closed ? (*t >= 0 && *t <= 1) : (*t > 0 && *t < 1);
}

} // namespace ksmooth
