#pragma once

#include <ksmooth/operator.hpp>

#include <array>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace ksmooth {

// ---------------------------------------------------------------------------
// Partition of the norming vertices by the order of their images

struct SmoothnessPartition {
  /// sets[k-1] = vertices whose image is k-smooth. Sized by codomain dim.
  std::vector<std::vector<RatVector>> sets;
  std::vector<VertexSupport> per_vertex; // domain vertex order

  std::size_t count(std::size_t k) const { return k - 1 < sets.size() ? sets[k - 1].size() : 0; }
  std::array<std::size_t, 3> triple() const { return {count(1), count(2), count(3)}; }
};

inline std::string to_string(const std::array<std::size_t, 3> &t) {
  return "(" + std::to_string(t[0]) + "," + std::to_string(t[1]) + "," + std::to_string(t[2]) +
         ")";
}

/// Requires every domain vertex to be norming; T is normalized first.
inline SmoothnessPartition partition(const Operator &input) {
  if (input.codomain().dim() > 3)
    throw Error(ErrorKind::Unsupported, "partition supports codomains of dimension <= 3");
  const Operator T = normalized(input);
  if (!all_vertices_norming(T))
    throw Error(ErrorKind::HypothesisViolation,
                "only " + std::to_string(norming_extremes(T).size()) + " of " +
                    std::to_string(T.domain().extreme_points().size()) +
                    " domain vertices attain the norm");
  SmoothnessPartition p;
  p.sets.resize(T.codomain().dim());
  for (const auto &v : T.domain().extreme_points()) {
    auto img = T.apply(v);
    auto ext = ext_support(T.codomain(), img);
    const std::size_t k = span_dim(ext);
    p.sets[k - 1].push_back(v);
    p.per_vertex.push_back({v, std::move(img), std::move(ext), k});
  }
  return p;
}

// ---------------------------------------------------------------------------
// Conditions

enum class QuantifierReading { Forall, Exists };

inline std::string to_string(QuantifierReading q) {
  return q == QuantifierReading::Forall ? "forall" : "exists";
}

inline QuantifierReading parse_quantifier_reading(std::string_view s) {
  if (s == "forall")
    return QuantifierReading::Forall;
  if (s == "exists")
    return QuantifierReading::Exists;
  throw Error(ErrorKind::InputError,
              "quantifier reading must be forall or exists, got '" + std::string(s) + "'");
}

/// ±A = A ∪ (−A), canonical.
inline std::vector<RatVector> plus_minus(std::span<const RatVector> a) {
  std::vector<RatVector> out(a.begin(), a.end());
  for (const auto &g : a)
    out.push_back(negate(g));
  return canonical(std::move(out));
}

inline std::vector<RatVector> set_intersection(const std::vector<RatVector> &a,
                                               const std::vector<RatVector> &b) {
  std::vector<RatVector> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline bool is_subset(const std::vector<RatVector> &a, const std::vector<RatVector> &b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

struct ConditionProfile {
  // Table conditions, evaluated on ±Ext J sets of one vertex per ± pair.
  bool eq_s1 = true;
  bool s1_in_ext_s2 = true;
  std::optional<std::size_t> cap_s2;     // |∩_{S2} ±Ext J|, absent when S2 = ∅
  std::size_t cap_all = 0;               // |∩_{all} ±Ext J|
  bool pairwise_ext_ne2_forall = true;   // |±Ext J_i ∩ ±Ext J_j| != 2 for every pair
  bool pairwise_ext_ne2_exists = false;  // ... for some pair
  std::optional<std::size_t> cap_s2_ext; // same as cap_s2 under the Ext reading

  // Structural data for the planar classifier.
  std::size_t operator_rank = 0;
  std::size_t nonsmooth_rank = 0;               // span_dim of vertices with non-smooth image
  std::vector<RatVector> nonsmooth_basis;       // lexicographically first maximal independent subset
  bool interior_segment = false;                // some Tx is not extreme in T(B_X)
  std::optional<RatVector> interior_witness;    // such a vertex x
  bool common_support = false;                  // all ±Ext J(Tx) coincide

  bool pairwise_ext_ne2(QuantifierReading q) const {
    return q == QuantifierReading::Forall ? pairwise_ext_ne2_forall : pairwise_ext_ne2_exists;
  }
};

/// One vertex from each ± pair: the lexicographically larger of v and −v.
inline std::vector<std::size_t> pair_representatives(const SmoothnessPartition &p) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < p.per_vertex.size(); ++i)
    if (negate(p.per_vertex[i].vertex) < p.per_vertex[i].vertex)
      out.push_back(i);
  return out;
}

inline ConditionProfile eval_conditions(const Operator &input, const SmoothnessPartition &p) {
  const Operator T = normalized(input);
  ConditionProfile c;
  const auto reps = pair_representatives(p);
  std::vector<std::size_t> s1, s2;
  std::vector<std::vector<RatVector>> pm(p.per_vertex.size());
  for (std::size_t i : reps) {
    pm[i] = plus_minus(p.per_vertex[i].ext_functionals);
    if (p.per_vertex[i].order == 1)
      s1.push_back(i);
    else if (p.per_vertex[i].order == 2)
      s2.push_back(i);
  }

  for (std::size_t a : s1)
    for (std::size_t b : s1)
      c.eq_s1 = c.eq_s1 && pm[a] == pm[b];
  for (std::size_t a : s1)
    for (std::size_t b : s2)
      c.s1_in_ext_s2 = c.s1_in_ext_s2 && is_subset(pm[a], pm[b]);
  if (!s2.empty()) {
    auto cap = pm[s2.front()];
    for (std::size_t b : s2)
      cap = set_intersection(cap, pm[b]);
    c.cap_s2 = c.cap_s2_ext = cap.size();
  }
  if (!reps.empty()) {
    auto cap = pm[reps.front()];
    for (std::size_t i : reps)
      cap = set_intersection(cap, pm[i]);
    c.cap_all = cap.size();
    c.common_support = std::all_of(reps.begin(), reps.end(),
                                   [&](std::size_t i) { return pm[i] == pm[reps.front()]; });
  }
  for (std::size_t a = 0; a < reps.size(); ++a)
    for (std::size_t b = a + 1; b < reps.size(); ++b) {
      const bool ne2 = set_intersection(pm[reps[a]], pm[reps[b]]).size() != 2;
      c.pairwise_ext_ne2_forall = c.pairwise_ext_ne2_forall && ne2;
      c.pairwise_ext_ne2_exists = c.pairwise_ext_ne2_exists || ne2;
    }

  c.operator_rank = operator_rank(T);
  std::vector<RatVector> nonsmooth;
  for (const auto &pv : p.per_vertex)
    if (pv.order > 1)
      nonsmooth.push_back(pv.vertex);
  c.nonsmooth_rank = span_dim(nonsmooth);
  for (std::size_t i : independent_subset(nonsmooth))
    c.nonsmooth_basis.push_back(nonsmooth[i]);

  const auto extremes = image_polytope(T);
  for (const auto &pv : p.per_vertex)
    if (!std::binary_search(extremes.begin(), extremes.end(), pv.image)) {
      c.interior_segment = true;
      c.interior_witness = pv.vertex;
      break;
    }
  return c;
}

// ---------------------------------------------------------------------------
// Decision tables for ℓ∞³ → ℓ₁³

enum class TableCondition {
  Unconditional,
  EqS1,
  EqS1AndS1InExtS2,
  CapS2Ge2AndS1InExtS2,
  CapAllEq4,
  CapAllEq2OrPairwiseExtNe2,
  CapS2ExtEq4,
  Otherwise,
};

inline std::string to_string(TableCondition c) {
  switch (c) {
  case TableCondition::Unconditional:
    return "-";
  case TableCondition::EqS1:
    return "±J(Tx_i) = ±J(Tx_j) for all x_i, x_j in S1";
  case TableCondition::EqS1AndS1InExtS2:
    return "±J(Tx_i) = ±J(Tx_j) for all x_i, x_j in S1 and ±J(Tx_i) ⊆ ±Ext J(Tx_k) for all "
           "x_i in S1, x_k in S2";
  case TableCondition::CapS2Ge2AndS1InExtS2:
    return "|∩_{S2} ±J(Tx_k)| >= 2 and ±J(Tx_i) ⊆ ±Ext J(Tx_k) for all x_i in S1, x_k in S2";
  case TableCondition::CapAllEq4:
    return "|∩_i ±J(Tx_i)| = 4";
  case TableCondition::CapAllEq2OrPairwiseExtNe2:
    return "|∩_i ±J(Tx_i)| = 2 or |±Ext J(Tx_i) ∩ ±Ext J(Tx_j)| != 2 for i != j";
  case TableCondition::CapS2ExtEq4:
    return "|∩_{S2} ±Ext J(Tx_i)| = 4";
  case TableCondition::Otherwise:
    return "otherwise";
  }
  return "?";
}

inline std::string condition_id(TableCondition c) {
  switch (c) {
  case TableCondition::Unconditional:
    return "unconditional";
  case TableCondition::EqS1:
    return "eq-s1";
  case TableCondition::EqS1AndS1InExtS2:
    return "eq-s1+s1-in-ext-s2";
  case TableCondition::CapS2Ge2AndS1InExtS2:
    return "cap-s2-ge2+s1-in-ext-s2";
  case TableCondition::CapAllEq4:
    return "cap-all-eq4";
  case TableCondition::CapAllEq2OrPairwiseExtNe2:
    return "cap-all-eq2-or-pairwise-ext-ne2";
  case TableCondition::CapS2ExtEq4:
    return "cap-s2-ext-eq4";
  case TableCondition::Otherwise:
    return "otherwise";
  }
  return "?";
}

inline bool holds(TableCondition cond, const ConditionProfile &c, QuantifierReading q) {
  switch (cond) {
  case TableCondition::Unconditional:
  case TableCondition::Otherwise:
    return true;
  case TableCondition::EqS1:
    return c.eq_s1;
  case TableCondition::EqS1AndS1InExtS2:
    return c.eq_s1 && c.s1_in_ext_s2;
  case TableCondition::CapS2Ge2AndS1InExtS2:
    return c.cap_s2.value_or(0) >= 2 && c.s1_in_ext_s2;
  case TableCondition::CapAllEq4:
    return c.cap_all == 4;
  case TableCondition::CapAllEq2OrPairwiseExtNe2:
    return c.cap_all == 2 || c.pairwise_ext_ne2(q);
  case TableCondition::CapS2ExtEq4:
    return c.cap_s2_ext.value_or(0) == 4;
  }
  return false;
}

struct TableRow {
  int table = 0; // 1: S3 empty, 2: S3 nonempty
  std::array<std::size_t, 3> triple;
  TableCondition condition;
  std::size_t k = 0;

  std::string id() const { return to_string(triple) + "/" + condition_id(condition); }
};

struct TableData {
  std::vector<TableRow> rows;
  std::vector<std::array<std::size_t, 3>> infeasible;
};

/// Rows are listed in dispatch order: within a triple the first row whose
/// condition holds decides.
inline const TableData &table_data() {
  using C = TableCondition;
  static const TableData data{
      {
          {1, {8, 0, 0}, C::EqS1, 3},
          {1, {8, 0, 0}, C::Otherwise, 4},
          {1, {6, 2, 0}, C::EqS1AndS1InExtS2, 4},
          {1, {6, 2, 0}, C::Otherwise, 5},
          {1, {4, 4, 0}, C::EqS1AndS1InExtS2, 5},
          {1, {4, 4, 0}, C::Otherwise, 6},
          {1, {2, 6, 0}, C::CapS2Ge2AndS1InExtS2, 6},
          {1, {2, 6, 0}, C::Otherwise, 7},
          {1, {0, 8, 0}, C::CapAllEq4, 6},
          {1, {0, 8, 0}, C::CapAllEq2OrPairwiseExtNe2, 7},
          {1, {0, 8, 0}, C::Otherwise, 8},
          {2, {6, 0, 2}, C::EqS1, 5},
          {2, {6, 0, 2}, C::Otherwise, 6},
          {2, {4, 2, 2}, C::EqS1AndS1InExtS2, 6},
          {2, {4, 2, 2}, C::Otherwise, 7},
          {2, {2, 4, 2}, C::Unconditional, 7},
          {2, {0, 6, 2}, C::CapS2ExtEq4, 7},
          {2, {0, 6, 2}, C::Otherwise, 8},
          {2, {4, 0, 4}, C::Unconditional, 7},
          {2, {0, 4, 4}, C::Unconditional, 8},
          {2, {0, 0, 8}, C::Unconditional, 9},
      },
      {{2, 2, 4}, {2, 0, 6}, {0, 2, 6}},
  };
  return data;
}

/// Row for a triple and condition profile. Infeasible triples raise
/// InfeasibleTriple; triples the tables do not list raise UnmappedCase.
inline const TableRow &lookup_row(const std::array<std::size_t, 3> &triple,
                                  const ConditionProfile &c, QuantifierReading q) {
  const auto &data = table_data();
  if (std::find(data.infeasible.begin(), data.infeasible.end(), triple) != data.infeasible.end())
    throw Error(ErrorKind::InfeasibleTriple, "partition " + to_string(triple) +
                                                 " is listed as not feasible");
  for (const auto &row : data.rows)
    if (row.triple == triple && holds(row.condition, c, q))
      return row;
  throw Error(ErrorKind::UnmappedCase, "no table row for partition " + to_string(triple));
}

// ---------------------------------------------------------------------------
// Verdicts

struct ClassifierVerdict {
  std::string source_rule;
  std::optional<std::size_t> predicted; // empty: infeasible
  std::size_t computed = 0;
  std::optional<std::size_t> oracle;
  bool agree = false;
  std::array<std::size_t, 3> triple{};
  ConditionProfile conditions;
  std::string diagnosis;
};

inline bool is_linf_domain(const Operator &T, std::size_t min_n, std::size_t max_n) {
  return is_linf_space(T.domain()) && T.domain().dim() >= min_n && T.domain().dim() <= max_n;
}

namespace detail {

inline void finish(ClassifierVerdict &v, const Operator &T, const OperatorSpaceOracle *oracle) {
  v.computed = smoothness_order_operator(T).order;
  if (oracle)
    v.oracle = oracle->order(T);
  v.agree = v.predicted == v.computed && (!v.oracle || *v.oracle == v.computed);
}

} // namespace detail

/// Closed-form order for T: ℓ∞ⁿ → two-dimensional Y with every vertex norming.
///
/// All images smooth: rank 1, or rank 2 with some Tx interior to a segment of
/// T(B_X), gives n; any other rank-2 map gives 2n − 2. Some image non-smooth:
/// n + rank of the vertices with non-smooth images.
inline ClassifierVerdict classify_linf_to_2d(const Operator &input,
                                             const OperatorSpaceOracle *oracle = nullptr) {
  if (!is_linf_domain(input, 2, 64) || input.codomain().dim() != 2)
    throw Error(ErrorKind::HypothesisViolation,
                "expects an l_inf^n domain (n >= 2) and a two-dimensional codomain");
  const Operator T = normalized(input);
  const auto p = partition(T);
  ClassifierVerdict v;
  v.triple = p.triple();
  v.conditions = eval_conditions(T, p);
  const std::size_t n = T.domain().dim();
  const auto &c = v.conditions;
  if (p.count(2) > 0) {
    v.source_rule = "non-smooth-images/k=" + std::to_string(c.nonsmooth_rank);
    v.predicted = n + c.nonsmooth_rank;
  } else if (c.operator_rank == 1) {
    v.source_rule = "smooth-images/rank-one";
    v.predicted = n;
  } else if (c.interior_segment) {
    v.source_rule = "smooth-images/rank-two/interior-segment";
    v.predicted = n;
  } else {
    v.source_rule = "smooth-images/rank-two/extreme-images";
    v.predicted = 2 * n - 2;
  }
  detail::finish(v, T, oracle);
  if (!v.agree) {
    if (v.source_rule == "smooth-images/rank-two/extreme-images" && c.common_support)
      v.diagnosis = "the two image classes ±z1, ±z2 have the same supporting functionals up "
                    "to sign (z1 and -z2 lie on one facet of B_Y), so the tensors span only " +
                    std::to_string(v.computed) + " dimensions";
    else
      v.diagnosis = "unexplained disagreement";
  }
  return v;
}

/// Table lookup for T: ℓ∞³ → ℓ₁³ with all eight vertices norming.
inline ClassifierVerdict classify_linf3_to_l13(const Operator &input,
                                               const OperatorSpaceOracle *oracle = nullptr,
                                               QuantifierReading q = QuantifierReading::Forall) {
  if (!is_linf_domain(input, 3, 3) || !is_l1_space(input.codomain()) ||
      input.codomain().dim() != 3)
    throw Error(ErrorKind::HypothesisViolation, "expects an l_inf^3 -> l_1^3 operator");
  const Operator T = normalized(input);
  const auto p = partition(T);
  ClassifierVerdict v;
  v.triple = p.triple();
  v.conditions = eval_conditions(T, p);
  const auto &row = lookup_row(v.triple, v.conditions, q);
  v.source_rule = row.id();
  v.predicted = row.k;
  detail::finish(v, T, oracle);
  if (!v.agree)
    v.diagnosis = "unexplained disagreement";
  return v;
}

/// Dispatches on the codomain.
inline ClassifierVerdict classify(const Operator &T, const OperatorSpaceOracle *oracle = nullptr,
                                  QuantifierReading q = QuantifierReading::Forall) {
  if (T.codomain().dim() == 2)
    return classify_linf_to_2d(T, oracle);
  if (T.codomain().dim() == 3 && is_l1_space(T.codomain()))
    return classify_linf3_to_l13(T, oracle, q);
  throw Error(ErrorKind::HypothesisViolation,
              "no classifier for codomain " + T.codomain().name() +
                  " (supported: two-dimensional spaces and l1:3)");
}

// ---------------------------------------------------------------------------
// Image structure of rank-2 maps into the plane

struct SegmentPairReport {
  std::vector<RatVector> extremes;
  RatVector z1, z2;
  bool on_z1_z2 = false;     // every Tx in ±L[z1, z2]
  bool on_z1_neg_z2 = false; // every Tx in ±L[z1, −z2]
  bool holds() const { return extremes.size() == 4 && (on_z1_z2 || on_z1_neg_z2); }
};

inline SegmentPairReport segment_pair_structure(const Operator &input) {
  const Operator T = normalized(input);
  SegmentPairReport r;
  r.extremes = image_polytope(T);
  if (r.extremes.size() != 4)
    return r;
  r.z1 = r.extremes.front();
  for (const auto &e : r.extremes)
    if (e != r.z1 && e != negate(r.z1)) {
      r.z2 = e;
      break;
    }
  auto all_on = [&](const RatVector &a, const RatVector &b) {
    const Segment s{a, b, true}, t{negate(a), negate(b), true};
    return std::all_of(T.domain().extreme_points().begin(), T.domain().extreme_points().end(),
                       [&](const RatVector &x) {
                         const auto y = T.apply(x);
                         return segment_relint_contains(s, y) || segment_relint_contains(t, y);
                       });
  };
  r.on_z1_z2 = all_on(r.z1, r.z2);
  r.on_z1_neg_z2 = all_on(r.z1, negate(r.z2));
  return r;
}

// ---------------------------------------------------------------------------
// Seeded operators with every domain vertex norming

inline constexpr long kDefaultDenominatorBound = 12;
inline constexpr std::size_t kGeneratorAttempts = 20000;

/// A random point of S_Y: a uniformly chosen face dimension, a face of that
/// dimension, then positive weights with denominator <= bound.
inline RatVector random_unit_vector(Rng &rng, const std::vector<Face> &faces,
                                    std::size_t dim, long bound) {
  std::size_t face_dim = static_cast<std::size_t>(uniform_int(rng, 0, long(dim) - 1));
  std::vector<const Face *> pool;
  for (const auto &f : faces)
    if (f.dim() == face_dim)
      pool.push_back(&f);
  const Face &f = *pool[static_cast<std::size_t>(uniform_int(rng, 0, long(pool.size()) - 1))];
  const auto &vs = f.vertices();
  const auto w = positive_weights(rng, vs.size(), std::max<long>(bound, long(vs.size())));
  RatVector y = zeros(dim);
  for (std::size_t i = 0; i < vs.size(); ++i)
    for (std::size_t j = 0; j < dim; ++j)
      y[j] += w[i] * vs[i][j];
  return y;
}

namespace detail {

inline Operator from_columns(const PolyhedralSpace &X, const PolyhedralSpace &Y,
                             const std::vector<RatVector> &cols) {
  RatMatrix m(Y.dim(), X.dim());
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (std::size_t i = 0; i < Y.dim(); ++i)
      m(i, j) = cols[j][i];
  return Operator(X, Y, std::move(m));
}

inline bool every_vertex_unit(const Operator &T) {
  return std::all_of(T.domain().extreme_points().begin(), T.domain().extreme_points().end(),
                     [&](const RatVector &v) { return norm(T.codomain(), T.apply(v)) == 1; });
}

/// Images y_k of the basis x_k = (−1,…,−1,1,…,1) with k−1 leading −1s.
inline std::optional<Operator> generic_candidate(Rng &rng, const PolyhedralSpace &X,
                                                 const PolyhedralSpace &Y,
                                                 const std::vector<Face> &faces, long bound) {
  const std::size_t n = X.dim();
  RatMatrix basis(n, n), images(Y.dim(), n);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i)
      basis(i, k) = i < k ? -1 : 1;
    const auto y = random_unit_vector(rng, faces, Y.dim(), bound);
    for (std::size_t i = 0; i < Y.dim(); ++i)
      images(i, k) = y[i];
  }
  Operator T(X, Y, multiply(images, *inverse(basis)));
  if (!every_vertex_unit(T))
    return std::nullopt;
  return T;
}

/// Tu = u_i · y.
inline Operator rank_one_candidate(Rng &rng, const PolyhedralSpace &X, const PolyhedralSpace &Y,
                                   const std::vector<Face> &faces, long bound) {
  const auto y = random_unit_vector(rng, faces, Y.dim(), bound);
  const auto i = static_cast<std::size_t>(uniform_int(rng, 0, long(X.dim()) - 1));
  std::vector<RatVector> cols(X.dim(), zeros(Y.dim()));
  cols[i] = y;
  return from_columns(X, Y, cols);
}

/// Tu = u_i·p + (b·u)·q with p = (z1+z2)/2, q = (z1−z2)/2, so the vertex
/// images lie on ±L[z1, z2]. When z1 and z2 share a facet, b may have
/// ‖b‖₁ <= 1 and the images fill the segment; otherwise b = ±e_j.
inline std::optional<Operator> rank_two_candidate(Rng &rng, const PolyhedralSpace &X,
                                                  const PolyhedralSpace &Y,
                                                  const std::vector<Face> &faces, long bound) {
  const auto z1 = random_unit_vector(rng, faces, 2, bound);
  const auto z2 = random_unit_vector(rng, faces, 2, bound);
  if (z1[0] * z2[1] - z1[1] * z2[0] == 0)
    return std::nullopt;
  const std::size_t n = X.dim();
  const auto p = scale(Rational(1, 2), add(z1, z2));
  const auto q = scale(Rational(1, 2), sub(z1, z2));
  const bool common = std::any_of(
      Y.dual_extreme_points().begin(), Y.dual_extreme_points().end(),
      [&](const RatVector &g) { return dot(g, z1) == 1 && dot(g, z2) == 1; });
  const auto i = static_cast<std::size_t>(uniform_int(rng, 0, long(n) - 1));
  auto j = static_cast<std::size_t>(uniform_int(rng, 0, long(n) - 2));
  if (j >= i)
    ++j;
  RatVector b = zeros(n);
  if (common && coin(rng, 7, 10)) {
    const long d = uniform_int(rng, 1, bound);
    long rem = d;
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t t = n; t > 1; --t)
      std::swap(order[t - 1], order[static_cast<std::size_t>(uniform_int(rng, 0, long(t) - 1))]);
    for (std::size_t k : order) {
      const long part = uniform_int(rng, 0, rem);
      rem -= part;
      b[k] = make_rational(coin(rng) ? part : -part, d);
    }
    bool off_i = false;
    for (std::size_t k = 0; k < n; ++k)
      off_i = off_i || (k != i && b[k] != 0);
    if (!off_i) {
      b = zeros(n);
      b[j] = 1;
    }
  } else {
    b[j] = coin(rng) ? 1 : -1;
  }
  std::vector<RatVector> cols;
  for (std::size_t k = 0; k < n; ++k)
    cols.push_back(add(k == i ? p : zeros(2), scale(b[k], q)));
  Operator T = from_columns(X, Y, cols);
  if (!every_vertex_unit(T))
    return std::nullopt;
  return T;
}

} // namespace detail

/// Seeded operator ℓ∞ⁿ → Y (n ∈ {3,4}; Y planar or ℓ₁³) whose vertex images
/// all have norm 1. Planar codomains mix rank-one, segment-pair and generic
/// candidates; ℓ₁³ uses generic candidates only.
inline Operator generate_all_vertices_norming(const PolyhedralSpace &X, const PolyhedralSpace &Y,
                                              std::uint64_t seed,
                                              long denominator_bound = kDefaultDenominatorBound) {
  if (!is_linf_space(X) || X.dim() < 3 || X.dim() > 4)
    throw Error(ErrorKind::Unsupported, "generator domain must be linf3 or linf4");
  const bool planar = Y.dim() == 2;
  if (!planar && !(Y.dim() == 3 && is_l1_space(Y)))
    throw Error(ErrorKind::Unsupported, "generator codomain must be planar or l1:3");
  if (denominator_bound < 2)
    throw Error(ErrorKind::InputError, "denominator bound must be at least 2");
  Rng rng = derive_rng(seed, {X.dim(), Y.dim()});
  const auto faces = all_faces(Y.ball());
  for (std::size_t attempt = 0; attempt < kGeneratorAttempts; ++attempt) {
    std::optional<Operator> T;
    const long mode = planar ? uniform_int(rng, 0, 3) : 3;
    if (mode == 0)
      T = detail::rank_one_candidate(rng, X, Y, faces, denominator_bound);
    else if (mode <= 2)
      T = detail::rank_two_candidate(rng, X, Y, faces, denominator_bound);
    else
      T = detail::generic_candidate(rng, X, Y, faces, denominator_bound);
    if (T)
      return *T;
  }
  throw Error(ErrorKind::GeneratorExhausted,
              "no operator found after " + std::to_string(kGeneratorAttempts) + " attempts");
}

// ---------------------------------------------------------------------------
// Cross-validation campaigns

struct CampaignConfig {
  std::vector<std::size_t> domain_dims{3};
  std::vector<PolyhedralSpace> codomains;
  std::size_t count = 200;
  std::uint64_t seed = 1;
  long denominator_bound = kDefaultDenominatorBound;
  QuantifierReading quantifier = QuantifierReading::Forall;
  std::size_t workers = 1;
  bool run_oracle = true;
};

struct CampaignRecord {
  std::size_t index = 0;
  std::string domain, codomain;
  std::optional<RatMatrix> matrix;
  std::optional<ClassifierVerdict> verdict;
  std::optional<bool> segment_pair; // rank-2 planar only
  std::string error;                // generator exhaustion or classifier fault
  ErrorKind error_kind = ErrorKind::InputError;
};

struct RuleTally {
  std::size_t hits = 0;
  std::size_t agree = 0;
};

struct CampaignReport {
  CampaignConfig config;
  std::vector<CampaignRecord> records;
  std::map<std::string, RuleTally> rules;
  std::size_t generated = 0;
  std::size_t agreements = 0;
  std::size_t disagreements = 0;
  std::size_t oracle_checked = 0;
  std::size_t infeasible_hits = 0;
  std::size_t segment_pair_failures = 0;
  std::size_t exhausted = 0;
  std::size_t faults = 0;

  bool passed() const {
    return disagreements == 0 && infeasible_hits == 0 && segment_pair_failures == 0 &&
           faults == 0;
  }
};

inline std::size_t default_workers() {
  if (const char *env = std::getenv("KSMOOTH_WORKERS")) {
    char *end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end && *end == '\0' && v > 0)
      return static_cast<std::size_t>(v);
  }
  return 1;
}

inline CampaignReport cross_validate(const CampaignConfig &config) {
  if (config.codomains.empty() || config.domain_dims.empty())
    throw Error(ErrorKind::InputError, "campaign needs at least one domain and codomain");
  struct Pair {
    PolyhedralSpace X, Y;
    std::shared_ptr<OperatorSpaceOracle> oracle;
  };
  std::vector<Pair> pairs;
  for (std::size_t n : config.domain_dims)
    for (const auto &Y : config.codomains) {
      auto X = space_linf(n);
      std::shared_ptr<OperatorSpaceOracle> o;
      if (config.run_oracle && n * Y.dim() <= kOperatorOracleMaxDim)
        o = std::make_shared<OperatorSpaceOracle>(X, Y);
      pairs.push_back({X, Y, std::move(o)});
    }

  std::vector<CampaignRecord> records(config.count);
  auto run_one = [&](std::size_t i) {
    const Pair &pr = pairs[i % pairs.size()];
    CampaignRecord &rec = records[i];
    rec.index = i;
    rec.domain = pr.X.name();
    rec.codomain = pr.Y.name();
    try {
      const Operator T = generate_all_vertices_norming(
          pr.X, pr.Y, config.seed * 1000003ULL + i, config.denominator_bound);
      rec.matrix = T.matrix();
      rec.verdict = classify(T, pr.oracle.get(), config.quantifier);
      if (pr.Y.dim() == 2 && rec.verdict->conditions.operator_rank == 2)
        rec.segment_pair = segment_pair_structure(T).holds();
    } catch (const Error &e) {
      rec.error = e.what();
      rec.error_kind = e.kind();
    }
  };

  const std::size_t workers = std::max<std::size_t>(1, std::min(config.workers, config.count));
  if (workers == 1) {
    for (std::size_t i = 0; i < config.count; ++i)
      run_one(i);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < config.count; i += workers)
          run_one(i);
      });
    for (auto &t : pool)
      t.join();
  }

  CampaignReport r;
  r.config = config;
  for (const auto &rec : records) {
    if (rec.verdict) {
      ++r.generated;
      auto &tally = r.rules[rec.verdict->source_rule];
      ++tally.hits;
      if (rec.verdict->oracle)
        ++r.oracle_checked;
      if (rec.verdict->agree) {
        ++tally.agree;
        ++r.agreements;
      } else {
        ++r.disagreements;
      }
      if (rec.segment_pair && !*rec.segment_pair)
        ++r.segment_pair_failures;
    } else if (rec.error_kind == ErrorKind::GeneratorExhausted) {
      ++r.exhausted;
    } else if (rec.error_kind == ErrorKind::InfeasibleTriple) {
      ++r.infeasible_hits;
    } else {
      ++r.faults;
    }
  }
  r.records = std::move(records);
  return r;
}

/// The two decision tables with campaign coverage and a verified column.
inline std::string render_table_markdown(const CampaignReport &r) {
  std::ostringstream out;
  for (int table : {1, 2}) {
    out << (table == 1 ? "### Partitions with S3 empty\n\n" : "### Partitions with S3 nonempty\n\n");
    out << "| \\|S1\\| | \\|S2\\| | \\|S3\\| | condition | k | reached | agree | verified |\n";
    out << "|---|---|---|---|---|---|---|---|\n";
    for (const auto &row : table_data().rows) {
      if (row.table != table)
        continue;
      const auto it = r.rules.find(row.id());
      const RuleTally t = it == r.rules.end() ? RuleTally{} : it->second;
      const char *verified = t.hits == 0 ? "not reached" : t.agree == t.hits ? "yes" : "NO";
      out << "| " << row.triple[0] << " | " << row.triple[1] << " | " << row.triple[2] << " | "
          << to_string(row.condition) << " | " << row.k << " | " << t.hits << " | " << t.agree
          << " | " << verified << " |\n";
    }
    out << "\n";
  }
  out << "Infeasible partitions:";
  for (const auto &t : table_data().infeasible)
    out << " " << to_string(t);
  out << " (hits: " << r.infeasible_hits << ")\n";
  return out.str();
}

/// Every rule reached by the campaign, in key order.
inline std::string render_rules_markdown(const CampaignReport &r) {
  std::ostringstream out;
  out << "| rule | reached | agree | verified |\n|---|---|---|---|\n";
  for (const auto &[rule, t] : r.rules)
    out << "| " << rule << " | " << t.hits << " | " << t.agree << " | "
        << (t.agree == t.hits ? "yes" : "NO") << " |\n";
  out << "\ngenerated " << r.generated << ", agreements " << r.agreements << ", disagreements "
      << r.disagreements << ", oracle checked " << r.oracle_checked << ", generator exhausted "
      << r.exhausted << ", faults " << r.faults << "\n";
  return out.str();
}

} // namespace ksmooth
