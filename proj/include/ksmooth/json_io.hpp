#pragma once

#include <ksmooth/classifier.hpp>

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <string>

namespace ksmooth {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Values

inline Json to_json(const Rational &q) { return to_string(q); }

inline Json to_json(std::span<const Rational> v) {
  Json out = Json::array();
  for (const auto &q : v)
    out.push_back(to_string(q));
  return out;
}

inline Json to_json(const std::vector<RatVector> &vs) {
  Json out = Json::array();
  for (const auto &v : vs)
    out.push_back(to_json(std::span<const Rational>(v)));
  return out;
}

inline Json to_json(const RatMatrix &m) { return to_json(m.row_vectors()); }

/// Rationals are JSON strings; plain integers are accepted as a convenience.
inline Rational rational_from_json(const Json &j) {
  if (j.is_string())
    return parse_rational(j.get<std::string>());
  if (j.is_number_integer())
    return Rational(j.get<long>());
  throw Error(ErrorKind::InputError, "expected a rational string such as \"1/3\", got " + j.dump());
}

inline RatVector vector_from_json(const Json &j) {
  if (!j.is_array() || j.empty())
    throw Error(ErrorKind::InputError, "expected a nonempty array of rationals, got " + j.dump());
  RatVector out;
  for (const auto &x : j)
    out.push_back(rational_from_json(x));
  return out;
}

inline std::vector<RatVector> vectors_from_json(const Json &j, std::size_t dim) {
  if (!j.is_array() || j.empty())
    throw Error(ErrorKind::InputError, "expected a nonempty array of points");
  std::vector<RatVector> out;
  for (const auto &x : j) {
    out.push_back(vector_from_json(x));
    if (dim && out.back().size() != dim)
      throw Error(ErrorKind::DimensionMismatch,
                  "point " + x.dump() + " does not have dimension " + std::to_string(dim));
  }
  return out;
}

inline const Json &require(const Json &j, const char *key) {
  if (!j.is_object() || !j.contains(key))
    throw Error(ErrorKind::InputError, std::string("missing field '") + key + "'");
  return j.at(key);
}

inline std::size_t dim_from_json(const Json &j) {
  if (!j.is_number_integer() || j.get<long>() <= 0)
    throw Error(ErrorKind::InputError, "dim must be a positive integer");
  return j.get<std::size_t>();
}

// ---------------------------------------------------------------------------
// Polytopes and spaces

inline Json polytope_to_json(const Polytope &p) {
  return Json{{"dim", p.dim()}, {"vertices", to_json(p.vertices())},
              {"facets", to_json(p.functionals())}};
}

/// { "dim": d, "vertices": [...] } or { "dim": d, "facets": [...] }.
inline Polytope polytope_from_json(const Json &j) {
  const std::size_t dim = dim_from_json(require(j, "dim"));
  const bool has_v = j.contains("vertices"), has_f = j.contains("facets");
  if (has_v == has_f)
    throw Error(ErrorKind::InputError, "give exactly one of 'vertices' or 'facets'");
  if (has_v)
    return Polytope::from_points(vectors_from_json(j.at("vertices"), dim));
  return Polytope::from_functionals(vectors_from_json(j.at("facets"), dim), dim, true);
}

/// linf2..linf5, l1:2..l1:4, hexagon.
inline PolyhedralSpace space_from_alias(std::string_view alias) {
  const std::string a(alias);
  if (a == "hexagon")
    return space_hexagon();
  for (std::size_t n = 2; n <= 5; ++n)
    if (a == "linf" + std::to_string(n))
      return space_linf(n);
  for (std::size_t n = 2; n <= 4; ++n)
    if (a == "l1:" + std::to_string(n))
      return space_l1(n);
  throw Error(ErrorKind::InputError,
              "unknown space '" + a + "' (aliases: linf2..linf5, l1:2..l1:4, hexagon)");
}

/// A space is an alias string or an object with "kind":
/// linf/l1 take "dim"; polygon takes "vertices"; custom takes a polytope.
inline PolyhedralSpace space_from_json(const Json &j) {
  if (j.is_string())
    return space_from_alias(j.get<std::string>());
  const auto &kind = require(j, "kind");
  if (!kind.is_string())
    throw Error(ErrorKind::InputError, "'kind' must be a string");
  const auto k = kind.get<std::string>();
  if (k == "linf")
    return space_linf(dim_from_json(require(j, "dim")));
  if (k == "l1")
    return space_l1(dim_from_json(require(j, "dim")));
  if (k == "polygon")
    return space_polygon(vectors_from_json(require(j, "vertices"), 2),
                         j.value("name", std::string("polygon")));
  if (k == "custom")
    return space_from_ball(polytope_from_json(j), j.value("name", std::string("custom")));
  throw Error(ErrorKind::InputError, "unknown space kind '" + k + "'");
}

inline Json space_to_json(const PolyhedralSpace &X) {
  return Json{{"name", X.name()}, {"dim", X.dim()}, {"ball", polytope_to_json(X.ball())}};
}

// ---------------------------------------------------------------------------
// Operators

inline Operator operator_from_json(const Json &j) {
  auto X = space_from_json(require(j, "domain"));
  auto Y = space_from_json(require(j, "codomain"));
  const auto rows = vectors_from_json(require(j, "matrix"), X.dim());
  return Operator(std::move(X), std::move(Y), RatMatrix::from_rows(rows));
}

inline Json operator_to_json(const Operator &T) {
  return Json{{"domain", T.domain().name()},
              {"codomain", T.codomain().name()},
              {"matrix", to_json(T.matrix())}};
}

inline Json read_json_file(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorKind::InputError, "cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error &e) {
    throw Error(ErrorKind::InputError, path + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Reports

inline Json face_to_json(const Face &f) {
  return Json{{"faceDim", f.dim()},
              {"vertices", to_json(f.vertices())},
              {"activeFunctionals", to_json(f.active_functionals())}};
}

inline Json report_to_json(const PointSmoothnessReport &r) {
  return Json{{"point", to_json(r.point)},
              {"spaceDim", r.space_dim},
              {"order", r.order},
              {"extJ", to_json(r.ext_functionals)},
              {"minimalFace", face_to_json(r.minimal_face)},
              {"faceDim", r.face_dim},
              {"theoremCheck", r.theorem_check}};
}

inline Json report_to_json(const OperatorSmoothnessReport &r) {
  Json per = Json::array();
  for (const auto &v : r.per_vertex)
    per.push_back(Json{{"vertex", to_json(v.vertex)},
                       {"image", to_json(v.image)},
                       {"extJ", to_json(v.ext_functionals)},
                       {"order", v.order}});
  Json ext = Json::array();
  for (const auto &f : r.ext_j)
    ext.push_back(Json{{"ystar", to_json(f.ystar)}, {"x", to_json(f.x)}});
  return Json{{"opNorm", to_json(r.input_norm)},
              {"normalizedMatrix", to_json(r.normalized_matrix)},
              {"normingExtremes", to_json(r.norming_extremes)},
              {"perVertex", per},
              {"extJ", ext},
              {"order", r.order}};
}

inline Json conditions_to_json(const ConditionProfile &c) {
  auto opt = [](const std::optional<std::size_t> &v) { return v ? Json(*v) : Json(nullptr); };
  return Json{{"EQ_S1", c.eq_s1},
              {"S1_IN_EXT_S2", c.s1_in_ext_s2},
              {"CAP_S2", opt(c.cap_s2)},
              {"CAP_ALL4", c.cap_all},
              {"PAIRWISE_EXT_NE2_FORALL", c.pairwise_ext_ne2_forall},
              {"PAIRWISE_EXT_NE2_EXISTS", c.pairwise_ext_ne2_exists},
              {"CAP_S2_EXT", opt(c.cap_s2_ext)},
              {"operatorRank", c.operator_rank},
              {"nonsmoothRank", c.nonsmooth_rank},
              {"nonsmoothBasis", to_json(c.nonsmooth_basis)},
              {"interiorSegment", c.interior_segment},
              {"commonSupport", c.common_support}};
}

inline Json verdict_to_json(const ClassifierVerdict &v) {
  return Json{{"sourceRule", v.source_rule},
              {"partition", {v.triple[0], v.triple[1], v.triple[2]}},
              {"predictedOrder", v.predicted ? Json(*v.predicted) : Json("infeasible")},
              {"computedOrder", v.computed},
              {"oracleOrder", v.oracle ? Json(*v.oracle) : Json(nullptr)},
              {"agree", v.agree},
              {"conditions", conditions_to_json(v.conditions)},
              {"diagnosis", v.diagnosis}};
}

inline Json report_to_json(const FaceCampaignReport &r) {
  Json faces = Json::array();
  for (const auto &f : r.faces) {
    Json rec{{"faceDim", f.face_dim},
             {"vertexCount", f.vertices.size()},
             {"vertices", to_json(f.vertices)},
             {"samples", f.samples},
             {"k", f.orders},
             {"pass", f.pass}};
    if (!f.pass)
      rec["failure"] = f.failure;
    faces.push_back(std::move(rec));
  }
  return Json{{"suite", "face-theorem"},      {"space", r.space},
              {"dim", r.dim},                 {"faceCount", r.faces.size()},
              {"totalSamples", r.total_samples}, {"failures", r.failures},
              {"faces", faces}};
}

inline Json report_to_json(const CampaignReport &r) {
  Json codomains = Json::array();
  for (const auto &Y : r.config.codomains)
    codomains.push_back(Y.name());
  Json rules = Json::object();
  for (const auto &[rule, t] : r.rules)
    rules[rule] = Json{{"reached", t.hits}, {"agree", t.agree}};
  Json disagreements = Json::array();
  Json errors = Json::array();
  for (const auto &rec : r.records) {
    if (rec.verdict && !rec.verdict->agree) {
      Json d = verdict_to_json(*rec.verdict);
      d["index"] = rec.index;
      d["domain"] = rec.domain;
      d["codomain"] = rec.codomain;
      d["matrix"] = to_json(*rec.matrix);
      disagreements.push_back(std::move(d));
    }
    if (!rec.error.empty())
      errors.push_back(Json{{"index", rec.index},
                            {"kind", to_string(rec.error_kind)},
                            {"message", rec.error}});
  }
  return Json{{"suite", "cross-validate"},
              {"config",
               {{"domainDims", r.config.domain_dims},
                {"codomains", codomains},
                {"count", r.config.count},
                {"seed", r.config.seed},
                {"denominatorBound", r.config.denominator_bound},
                {"quantifierReading", to_string(r.config.quantifier)}}},
              {"generated", r.generated},
              {"agreements", r.agreements},
              {"disagreementCount", r.disagreements},
              {"oracleChecked", r.oracle_checked},
              {"infeasibleHits", r.infeasible_hits},
              {"segmentPairFailures", r.segment_pair_failures},
              {"generatorExhausted", r.exhausted},
              {"faults", r.faults},
              {"rules", rules},
              {"disagreements", disagreements},
              {"errors", errors},
              {"passed", r.passed()}};
}

/// Campaign config file: { "domain": "linf3" | [..], "codomain": "l1:3" | [..],
/// "count", "seed", "denominatorBound", "quantifierReading" }.
inline CampaignConfig campaign_config_from_json(const Json &j) {
  CampaignConfig c;
  auto as_list = [](const Json &v) { return v.is_array() ? v : Json::array({v}); };
  c.domain_dims.clear();
  for (const auto &d : as_list(require(j, "domain"))) {
    const auto X = space_from_json(d);
    if (!is_linf_space(X))
      throw Error(ErrorKind::InputError, "campaign domains must be linf spaces");
    c.domain_dims.push_back(X.dim());
  }
  for (const auto &y : as_list(require(j, "codomain")))
    c.codomains.push_back(space_from_json(y));
  if (j.contains("count"))
    c.count = j.at("count").get<std::size_t>();
  if (j.contains("seed"))
    c.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("denominatorBound"))
    c.denominator_bound = j.at("denominatorBound").get<long>();
  if (j.contains("quantifierReading"))
    c.quantifier = parse_quantifier_reading(j.at("quantifierReading").get<std::string>());
  return c;
}

} // namespace ksmooth
