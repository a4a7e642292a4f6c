// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails. All comparisons are exact; the only
// tolerances are the wall-clock limits below.

#include "oracles.hpp"

#include <ksmooth/json_io.hpp>

#include <chrono>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

using namespace ksmooth;

namespace {

constexpr double kFaceSuiteSeconds = 60;
constexpr double kPolarSuiteSeconds = 10;
constexpr double kFaceSpanSeconds = 120;
constexpr double kOracleSuiteSeconds = 600;
constexpr std::size_t kMinFaceSamples = 500;
constexpr std::size_t kSamplesPerFace = 3;
constexpr std::size_t kCampaignSize = 240;
constexpr std::size_t kTableCampaignSize = 200;
constexpr std::size_t kDdInstances = 30;
constexpr std::size_t kRankTwoOperators = 100;
constexpr std::size_t kPolarPolygons = 50;
constexpr std::uint64_t kSeed = 20261019;

struct Outcome {
  bool pass = false;
  std::string detail;
};

class Stopwatch {
public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string secs(double s) {
  std::ostringstream o;
  o.precision(2);
  o << std::fixed << s << "s";
  return o.str();
}

Rational q(long n, long d = 1) { return make_rational(n, d); }

std::vector<PolyhedralSpace> face_suite_spaces() {
  return {space_linf(3),          space_l1(3),          space_linf(4),
          space_l1(4),            space_hexagon(),      random_space(3, 5, kSeed),
          random_space(4, 6, kSeed), random_polygon(6, kSeed)};
}

std::string face_suite_reports() {
  std::string out;
  for (const auto &X : face_suite_spaces())
    out += report_to_json(verify_face_theorem(X, kSamplesPerFace, kSeed)).dump();
  return out;
}

Outcome criterion_face_theorem() {
  Stopwatch sw;
  std::size_t samples = 0, failures = 0, faces = 0;
  for (const auto &X : face_suite_spaces()) {
    const auto r = verify_face_theorem(X, kSamplesPerFace, kSeed);
    samples += r.total_samples;
    failures += r.failures;
    faces += r.faces.size();
  }
  const double t = sw.seconds();
  return {failures == 0 && samples >= kMinFaceSamples && t < kFaceSuiteSeconds,
          std::to_string(faces) + " faces over 8 spaces, " + std::to_string(samples) +
              " samples, " + std::to_string(failures) + " failing faces, " + secs(t) +
              " (limit " + secs(kFaceSuiteSeconds) + ")"};
}

Outcome criterion_polar_involution() {
  Stopwatch sw;
  std::vector<Polytope> balls;
  for (std::size_t n = 2; n <= 5; ++n)
    balls.push_back(space_linf(n).ball());
  for (std::size_t n = 2; n <= 4; ++n)
    balls.push_back(space_l1(n).ball());
  balls.push_back(space_hexagon().ball());
  balls.push_back(space_hexagon().dual_ball());
  std::size_t fixtures = balls.size(), facet_mismatch = 0;
  for (std::size_t i = 0; i < kPolarPolygons; ++i) {
    const auto P = random_polygon(2 + i % 5, kSeed + i);
    // Independent check of the polygon's facets.
    if (P.dual_extreme_points() != oracle::polygon_facets(P.extreme_points()))
      ++facet_mismatch;
    balls.push_back(P.ball());
  }
  std::size_t bad = 0;
  for (const auto &B : balls)
    if (!(polar(polar(B)) == B))
      ++bad;
  const double t = sw.seconds();
  return {bad == 0 && facet_mismatch == 0 && t < kPolarSuiteSeconds,
          std::to_string(fixtures) + " fixtures + " + std::to_string(kPolarPolygons) +
              " seeded polygons, " + std::to_string(bad) + " involution failures, " +
              std::to_string(facet_mismatch) + " facet mismatches, " + secs(t) + " (limit " +
              secs(kPolarSuiteSeconds) + ")"};
}

std::vector<HPolytope> dd_instances() {
  std::vector<HPolytope> out;
  Rng rng = derive_rng(kSeed, {3});
  for (std::size_t d = 2; d <= 5; ++d) {
    std::vector<RatVector> fs;
    for (std::size_t i = 0; i < d; ++i) {
      fs.push_back(unit(d, i));
      fs.push_back(negate(unit(d, i)));
    }
    out.push_back({d, fs});
  }
  while (out.size() < kDdInstances) {
    const std::size_t d = static_cast<std::size_t>(uniform_int(rng, 2, 6));
    const std::size_t pairs = d + 1 + static_cast<std::size_t>(uniform_int(rng, 0, 1));
    std::vector<RatVector> fs;
    for (std::size_t i = 0; i < pairs; ++i) {
      RatVector f(d);
      for (auto &x : f)
        x = make_rational(uniform_int(rng, -4, 4), uniform_int(rng, 1, 3));
      fs.push_back(f);
    }
    if (oracle::rank(fs) < d)
      continue;
    out.push_back({d, symmetrize(fs)});
  }
  return out;
}

std::string dd_reports() {
  std::string out;
  for (const auto &h : dd_instances())
    out += to_json(vertex_enumeration(h).vertices).dump();
  return out;
}

Outcome criterion_vertex_enumeration() {
  Stopwatch sw;
  const auto inst = dd_instances();
  std::size_t bad = 0, max_dim = 0, vertices = 0;
  for (const auto &h : inst) {
    const auto a = vertex_enumeration(h), b = vertex_enumeration_brute_force(h);
    bad += a.vertices == b.vertices ? 0 : 1;
    max_dim = std::max(max_dim, h.dim);
    vertices += a.vertices.size();
  }
  return {bad == 0 && inst.size() >= kDdInstances && max_dim <= 6,
          std::to_string(inst.size()) + " instances up to dim " + std::to_string(max_dim) + ", " +
              std::to_string(vertices) + " vertices, " + std::to_string(bad) + " mismatches, " +
              secs(sw.seconds())};
}

Outcome criterion_face_span() {
  Stopwatch sw;
  std::size_t checked = 0, bad = 0;
  for (std::size_t n = 2; n <= 5; ++n)
    for (const auto &f : all_faces(space_linf(n).ball())) {
      const std::size_t count = f.vertices().size();
      std::size_t k = 0;
      while ((std::size_t{1} << k) < count)
        ++k;
      if ((std::size_t{1} << k) != count) {
        ++bad;
        continue;
      }
      ++checked;
      const auto s = span_dim(f.vertices());
      if (s != k + 1 || oracle::rank(f.vertices()) != k + 1)
        ++bad;
    }
  const double t = sw.seconds();
  return {bad == 0 && t < kFaceSpanSeconds,
          std::to_string(checked) + " faces of linf2..linf5, " + std::to_string(bad) +
              " exceptions, " + secs(t) + " (limit " + secs(kFaceSpanSeconds) + ")"};
}

Outcome criterion_segment_pairs() {
  const std::vector<PolyhedralSpace> Ys = {space_l1(2), space_linf(2), space_hexagon()};
  std::size_t found = 0, bad = 0, not_four = 0;
  for (std::uint64_t i = 0; found < kRankTwoOperators && i < 10000; ++i) {
    const auto T = generate_all_vertices_norming(space_linf(3 + i % 2), Ys[i % 3], kSeed + i);
    if (operator_rank(T) != 2)
      continue;
    ++found;
    const auto s = segment_pair_structure(T);
    not_four += s.extremes.size() == 4 ? 0 : 1;
    bad += s.holds() ? 0 : 1;
  }
  return {found == kRankTwoOperators && bad == 0,
          std::to_string(found) + " rank-2 operators into l1:2/linf2/hexagon, " +
              std::to_string(not_four) + " without 4 image extremes, " + std::to_string(bad) +
              " violating the segment-pair dichotomy"};
}

Outcome criterion_oracle_equivalence() {
  Stopwatch sw;
  struct Pair {
    PolyhedralSpace X, Y;
    std::shared_ptr<OperatorSpaceOracle> oracle;
  };
  std::vector<Pair> pairs;
  for (const auto &Y : {space_l1(2), space_linf(2), space_hexagon()})
    for (std::size_t n : {3, 4})
      pairs.push_back({space_linf(n), Y, nullptr});
  pairs.push_back({space_linf(3), space_l1(3), nullptr});
  for (auto &p : pairs)
    p.oracle = std::make_shared<OperatorSpaceOracle>(p.X, p.Y);
  std::size_t checked = 0, bad = 0, polar_checked = 0;
  for (std::size_t i = 0; i < kCampaignSize; ++i) {
    const auto &p = pairs[i % pairs.size()];
    const auto T = generate_all_vertices_norming(p.X, p.Y, kSeed * 7 + i);
    const auto k = smoothness_order_operator(T).order;
    ++checked;
    if (p.oracle->order(T) != k)
      ++bad;
    if (auto pk = p.oracle->polar_order(T)) {
      ++polar_checked;
      if (*pk != k)
        ++bad;
    }
  }
  const double t = sw.seconds();
  return {bad == 0 && checked >= 200 && t < kOracleSuiteSeconds,
          std::to_string(checked) + " operators (nm <= 9), " + std::to_string(polar_checked) +
              " also by the polar oracle, " + std::to_string(bad) + " mismatches, " + secs(t) +
              " (limit " + secs(kOracleSuiteSeconds) + ")"};
}

CampaignConfig planar_campaign(std::size_t workers = 1) {
  CampaignConfig c;
  c.domain_dims = {3, 4};
  c.codomains = {space_l1(2), space_linf(2), space_hexagon()};
  c.count = kCampaignSize;
  c.seed = kSeed;
  c.workers = workers;
  return c;
}

CampaignConfig table_campaign(std::size_t workers = 1) {
  CampaignConfig c;
  c.domain_dims = {3};
  c.codomains = {space_l1(3)};
  c.count = kTableCampaignSize;
  c.seed = kSeed;
  c.workers = workers;
  return c;
}

Outcome criterion_planar_classifier() {
  auto r = cross_validate(planar_campaign());
  bool rank_one = false, interior = false, extreme = false;
  std::set<std::string> nonsmooth;
  for (const auto &[rule, t] : r.rules) {
    rank_one = rank_one || rule == "smooth-images/rank-one";
    interior = interior || rule == "smooth-images/rank-two/interior-segment";
    extreme = extreme || rule == "smooth-images/rank-two/extreme-images";
    if (rule.rfind("non-smooth-images/", 0) == 0)
      nonsmooth.insert(rule);
  }
  std::size_t explained = 0;
  for (const auto &rec : r.records)
    if (rec.verdict && !rec.verdict->agree && rec.verdict->conditions.common_support)
      ++explained;
  std::ostringstream d;
  d << r.generated << " operators, " << r.oracle_checked << " oracle-checked, "
    << r.disagreements << " disagreements";
  if (r.disagreements)
    d << " (" << explained << " on rank-2 maps whose image pairs share supporting functionals "
      << "up to sign)";
  d << "; coverage: rank-one " << r.rules["smooth-images/rank-one"].hits
    << ", interior-segment " << r.rules["smooth-images/rank-two/interior-segment"].hits
    << ", extreme-images " << r.rules["smooth-images/rank-two/extreme-images"].hits
    << " (agree " << r.rules["smooth-images/rank-two/extreme-images"].agree << ")"
    << ", non-smooth cases " << nonsmooth.size();
  const bool coverage = rank_one && interior && extreme && nonsmooth.size() >= 2;
  return {r.passed() && r.generated >= 200 && coverage, d.str()};
}

Outcome criterion_table_classifier() {
  const auto r = cross_validate(table_campaign());
  auto verdict = [](std::initializer_list<RatVector> rows) {
    const Operator T(space_linf(3), space_l1(3), RatMatrix::from_rows(rows));
    OperatorSpaceOracle o(T.domain(), T.codomain());
    return classify_linf3_to_l13(T, &o);
  };
  const RatVector z{q(0), q(0), q(0)};
  struct Fixture {
    ClassifierVerdict v;
    std::size_t k;
  };
  const std::vector<Fixture> fixtures = {
      {verdict({{q(1, 3), q(0), q(0)}, {q(1, 3), q(0), q(0)}, {q(1, 3), q(0), q(0)}}), 3},
      {verdict({{q(1, 3), q(0), q(0)}, {q(0), q(1, 3), q(0)}, {q(0), q(0), q(1, 3)}}), 4},
      {verdict({z, {q(-1, 2), q(0), q(0)}, {q(1, 2), q(0), q(0)}}), 6},
      {verdict({{q(0), q(-1, 4), q(-1, 4)}, {q(0), q(0), q(1, 2)}, {q(0), q(-1, 4), q(1, 4)}}), 7},
      {verdict({{q(1, 2), q(0), q(0)}, {q(0), q(1, 2), q(0)}, z}), 7},
      {verdict({{q(1, 4), q(1, 4), q(0)}, {q(-1, 4), q(1, 4), q(0)}, {q(0), q(0), q(-1, 2)}}), 8},
      {verdict({{q(1), q(0), q(0)}, z, z}), 9},
  };
  std::size_t fixture_bad = 0;
  for (const auto &f : fixtures)
    fixture_bad += f.v.agree && f.v.predicted == f.k ? 0 : 1;
  std::size_t infeasible = r.infeasible_hits;
  for (const auto &rec : r.records)
    if (rec.verdict)
      for (const auto &t : table_data().infeasible)
        infeasible += rec.verdict->triple == t ? 1 : 0;
  std::ostringstream d;
  d << r.generated << " operators, " << r.disagreements << " disagreements, "
    << fixture_bad << " of " << fixtures.size() << " fixtures off, infeasible hits "
    << infeasible << "; reached " << r.rules.size() << " rows:";
  for (const auto &[rule, t] : r.rules)
    d << " " << rule << "=" << t.hits;
  return {r.passed() && r.generated >= 200 && fixture_bad == 0 && infeasible == 0, d.str()};
}

Outcome criterion_named_fixtures() {
  const auto linf3 = space_linf(3);
  struct Named {
    std::string name;
    Operator T;
    std::size_t k;
  };
  const std::vector<Named> named = {
      {"(1/3)Id linf3->l1:3", Operator(linf3, space_l1(3), RatMatrix::identity(3).scaled(q(1, 3))),
       4},
      {"(u1/3)(1,1,1)", Operator(linf3, space_l1(3),
                                 RatMatrix::from_rows({{q(1, 3), q(0), q(0)},
                                                       {q(1, 3), q(0), q(0)},
                                                       {q(1, 3), q(0), q(0)}})),
       3},
      {"(u1/2,u2/2) into l1:2",
       Operator(linf3, space_l1(2),
                RatMatrix::from_rows({{q(1, 2), q(0), q(0)}, {q(0), q(1, 2), q(0)}})),
       4},
      {"(u1,u2) into linf2",
       Operator(linf3, space_linf(2),
                RatMatrix::from_rows({{q(1), q(0), q(0)}, {q(0), q(1), q(0)}})),
       6},
  };
  std::ostringstream d;
  bool ok = true;
  for (const auto &n : named) {
    const auto k = smoothness_order_operator(n.T).order;
    const auto o = oracle_order(n.T);
    const auto v = classify(n.T);
    const bool good = k == n.k && o == n.k && v.predicted == n.k;
    ok = ok && good;
    d << n.name << " -> " << k << (good ? "" : " (expected " + std::to_string(n.k) + ")") << "; ";
  }
  return {ok, d.str()};
}

Outcome criterion_determinism() {
  std::vector<std::pair<std::string, std::function<std::string()>>> suites = {
      {"face-theorem", face_suite_reports},
      {"vertex-enumeration", dd_reports},
      {"planar campaign", [] { return report_to_json(cross_validate(planar_campaign())).dump(); }},
      {"table campaign", [] { return report_to_json(cross_validate(table_campaign())).dump(); }},
      {"polar", [] {
         std::string s;
         for (std::size_t i = 0; i < 10; ++i)
           s += polytope_to_json(random_polygon(2 + i % 5, i).dual_ball()).dump();
         return s;
       }},
  };
  std::vector<std::pair<std::string, std::function<std::string()>>> parallel = {
      {"planar campaign, 3 workers",
       [] { return report_to_json(cross_validate(planar_campaign(3))).dump(); }},
      {"table campaign, 3 workers",
       [] { return report_to_json(cross_validate(table_campaign(3))).dump(); }},
  };
  std::size_t bad = 0;
  std::string which;
  std::vector<std::string> first;
  for (const auto &[name, f] : suites) {
    const auto a = f(), b = f();
    first.push_back(a);
    if (a != b) {
      ++bad;
      which += " " + name;
    }
  }
  // Parallel campaigns must match the sequential runs.
  for (std::size_t i = 0; i < parallel.size(); ++i)
    if (parallel[i].second() != first[2 + i]) {
      ++bad;
      which += " " + parallel[i].first;
    }
  return {bad == 0, std::to_string(suites.size()) + " suites run twice + " +
                        std::to_string(parallel.size()) + " parallel reruns, " +
                        std::to_string(bad) + " differing" + which};
}

} // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"face theorem suite", criterion_face_theorem},
      {"polar involution", criterion_polar_involution},
      {"vertex enumeration equivalence", criterion_vertex_enumeration},
      {"cube face spans", criterion_face_span},
      {"rank-2 image structure", criterion_segment_pairs},
      {"tensor order vs operator-space oracle", criterion_oracle_equivalence},
      {"planar classifier", criterion_planar_classifier},
      {"l_inf^3 -> l_1^3 tables", criterion_table_classifier},
      {"named fixtures", criterion_named_fixtures},
      {"determinism", criterion_determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception &e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << i + 1 << " ("
              << criteria[i].first << "): " << o.detail << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
