// ksmooth: orders of smoothness in polyhedral Banach spaces.
//
// Exit codes: 0 success, 1 a verification or agreement check failed, 2 bad input.

#include <ksmooth/json_io.hpp>

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <sstream>

using namespace ksmooth;

namespace {

enum class Format { Text, Json, Markdown };

struct Options {
  std::string space = "linf3";
  std::vector<std::string> domains;
  std::vector<std::string> codomains;
  std::string x;
  std::string file;
  std::string suite = "face-theorem";
  std::size_t samples = 3;
  std::size_t count = 200;
  std::uint64_t seed = 1;
  long denominator_bound = kDefaultDenominatorBound;
  std::string quantifier = "forall";
  std::size_t workers = 0;
  bool json = false;
  bool markdown = false;

  Format format() const {
    return json ? Format::Json : markdown ? Format::Markdown : Format::Text;
  }
};

/// An alias, or a path to a JSON space file.
PolyhedralSpace load_space(const std::string &spec) {
  if (std::filesystem::exists(spec))
    return space_from_json(read_json_file(spec));
  return space_from_alias(spec);
}

std::string vec(std::span<const Rational> v) { return to_string(v); }

std::string list(const std::vector<RatVector> &vs) {
  std::string out = "{";
  for (std::size_t i = 0; i < vs.size(); ++i)
    out += (i ? ", " : "") + to_string(vs[i]);
  return out + "}";
}

int emit(const Json &j, const std::string &text, const std::string &markdown, Format f) {
  if (f == Format::Json)
    std::cout << j.dump(2) << "\n";
  else
    std::cout << (f == Format::Markdown ? markdown : text);
  return 0;
}

// ---------------------------------------------------------------------------

int run_point(const Options &o) {
  if (o.x.empty())
    throw Error(ErrorKind::InputError, "--x is required");
  const auto X = load_space(o.space);
  const auto r = smoothness_order_point(UnitVector(X, parse_vector(o.x)));
  std::ostringstream t, m;
  t << "space " << X.name() << " (dim " << X.dim() << ")\n"
    << "x = " << vec(r.point) << "\n"
    << "Ext J(x) = " << list(r.ext_functionals) << "\n"
    << "k = " << r.order << "\n"
    << "minimal face dim i = " << r.face_dim << ", vertices " << list(r.minimal_face.vertices())
    << "\n"
    << "k = n - i: " << (r.theorem_check ? "yes" : "NO") << "\n";
  m << "| field | value |\n|---|---|\n"
    << "| space | " << X.name() << " |\n| x | " << vec(r.point) << " |\n| Ext J(x) | "
    << list(r.ext_functionals) << " |\n| k | " << r.order << " |\n| face dim | " << r.face_dim
    << " |\n| k = n - i | " << (r.theorem_check ? "yes" : "NO") << " |\n";
  emit(report_to_json(r), t.str(), m.str(), o.format());
  return r.theorem_check ? 0 : 1;
}

int run_operator(const Options &o) {
  if (o.file.empty())
    throw Error(ErrorKind::InputError, "--file is required");
  const auto T = operator_from_json(read_json_file(o.file));
  const auto r = smoothness_order_operator(T);
  std::optional<std::size_t> oracle;
  const std::size_t nm = T.domain().dim() * T.codomain().dim();
  if (nm <= kOperatorOracleMaxDim)
    oracle = oracle_order(normalized(T));
  Json j = report_to_json(r);
  j["oracleOrder"] = oracle ? Json(*oracle) : Json("skipped");
  std::ostringstream t, m;
  t << T.domain().name() << " -> " << T.codomain().name() << "\n"
    << "||T|| = " << to_string(r.input_norm) << "\n"
    << "norming vertices: " << r.norming_extremes.size() << " of "
    << T.domain().extreme_points().size() << "\n";
  for (const auto &v : r.per_vertex)
    t << "  x = " << vec(v.vertex) << "  Tx = " << vec(v.image) << "  Ext J(Tx) = "
      << list(v.ext_functionals) << "  (" << v.order << "-smooth)\n";
  t << "|Ext J(T)| = " << r.ext_j.size() << "\n"
    << "order k = " << r.order << "\n"
    << "operator-space oracle: " << (oracle ? std::to_string(*oracle) : "skipped") << "\n";
  m << "| vertex | image | Ext J(Tx) | order |\n|---|---|---|---|\n";
  for (const auto &v : r.per_vertex)
    m << "| " << vec(v.vertex) << " | " << vec(v.image) << " | " << list(v.ext_functionals)
      << " | " << v.order << " |\n";
  m << "\norder k = " << r.order << ", oracle " << (oracle ? std::to_string(*oracle) : "skipped")
    << "\n";
  emit(j, t.str(), m.str(), o.format());
  return !oracle || *oracle == r.order ? 0 : 1;
}

int run_classify(const Options &o) {
  if (o.file.empty())
    throw Error(ErrorKind::InputError, "--file is required");
  const auto q = parse_quantifier_reading(o.quantifier);
  const auto T = normalized(operator_from_json(read_json_file(o.file)));
  std::unique_ptr<OperatorSpaceOracle> oracle;
  if (T.domain().dim() * T.codomain().dim() <= kOperatorOracleMaxDim)
    oracle = std::make_unique<OperatorSpaceOracle>(T.domain(), T.codomain());
  const auto v = classify(T, oracle.get(), q);
  auto n = [](const std::optional<std::size_t> &x) {
    return x ? std::to_string(*x) : std::string("-");
  };
  std::ostringstream t, m;
  t << "rule: " << v.source_rule << "\n"
    << "partition (|S1|,|S2|,|S3|) = " << to_string(v.triple) << "\n"
    << "predicted k = " << n(v.predicted) << "\n"
    << "computed k = " << v.computed << "\n"
    << "oracle k = " << n(v.oracle) << "\n"
    << "agree: " << (v.agree ? "yes" : "NO") << "\n";
  if (!v.diagnosis.empty())
    t << "diagnosis: " << v.diagnosis << "\n";
  m << "| rule | partition | predicted | computed | oracle | agree |\n|---|---|---|---|---|---|\n"
    << "| " << v.source_rule << " | " << to_string(v.triple) << " | " << n(v.predicted) << " | "
    << v.computed << " | " << n(v.oracle) << " | " << (v.agree ? "yes" : "NO") << " |\n";
  emit(verdict_to_json(v), t.str(), m.str(), o.format());
  return v.agree ? 0 : 1;
}

int run_face_suite(const Options &o) {
  const auto X = load_space(o.space);
  const auto r = verify_face_theorem(X, o.samples, o.seed);
  std::ostringstream t, m;
  t << "face theorem on " << X.name() << ": " << r.faces.size() << " faces, "
    << r.total_samples << " samples, " << r.failures << " failures\n";
  for (const auto &f : r.faces)
    if (!f.pass)
      t << "  FAIL face " << list(f.vertices) << ": " << f.failure << "\n";
  m << "| face dim | faces | samples | expected k | failures |\n|---|---|---|---|---|\n";
  for (std::size_t d = 0; d < X.dim(); ++d) {
    std::size_t faces = 0, samples = 0, failures = 0;
    for (const auto &f : r.faces)
      if (f.face_dim == d) {
        ++faces;
        samples += f.samples;
        failures += f.pass ? 0 : 1;
      }
    m << "| " << d << " | " << faces << " | " << samples << " | " << X.dim() - d << " | "
      << failures << " |\n";
  }
  emit(report_to_json(r), t.str(), m.str(), o.format());
  return r.failures == 0 ? 0 : 1;
}

int run_cross_validate(const Options &o) {
  CampaignConfig c;
  if (!o.file.empty()) {
    c = campaign_config_from_json(read_json_file(o.file));
  } else {
    c.domain_dims.clear();
    for (const auto &d : o.domains.empty() ? std::vector<std::string>{"linf3"} : o.domains) {
      const auto X = load_space(d);
      if (!is_linf_space(X))
        throw Error(ErrorKind::InputError, "campaign domains must be linf spaces");
      c.domain_dims.push_back(X.dim());
    }
    for (const auto &y : o.codomains.empty() ? std::vector<std::string>{"l1:3"} : o.codomains)
      c.codomains.push_back(load_space(y));
    c.count = o.count;
    c.seed = o.seed;
    c.denominator_bound = o.denominator_bound;
    c.quantifier = parse_quantifier_reading(o.quantifier);
  }
  c.workers = o.workers ? o.workers : default_workers();
  const auto r = cross_validate(c);
  const bool table = std::all_of(c.codomains.begin(), c.codomains.end(), [](const auto &Y) {
    return Y.dim() == 3 && is_l1_space(Y);
  });
  std::ostringstream t, m;
  t << render_rules_markdown(r);
  if (r.disagreements)
    for (const auto &rec : r.records)
      if (rec.verdict && !rec.verdict->agree)
        t << "disagreement #" << rec.index << " " << rec.domain << " -> " << rec.codomain
          << " rule " << rec.verdict->source_rule << ": predicted "
          << (rec.verdict->predicted ? std::to_string(*rec.verdict->predicted) : "infeasible")
          << ", computed " << rec.verdict->computed << "; " << rec.verdict->diagnosis << "\n";
  m << (table ? render_table_markdown(r) + "\n" : std::string()) << render_rules_markdown(r);
  emit(report_to_json(r), t.str(), m.str(), o.format());
  return r.passed() ? 0 : 1;
}

int run_polar_suite(const Options &o) {
  const auto X = load_space(o.space);
  const bool ok = polar(polar(X.ball())) == X.ball();
  Json j{{"suite", "polar-involution"}, {"space", X.name()}, {"pass", ok}};
  const std::string line = std::string("polar(polar(B)) = B on ") + X.name() + ": " +
                           (ok ? "yes" : "NO") + "\n";
  emit(j, line, line, o.format());
  return ok ? 0 : 1;
}

int run_verify(const Options &o) {
  if (o.suite == "face-theorem")
    return run_face_suite(o);
  if (o.suite == "cross-validate")
    return run_cross_validate(o);
  if (o.suite == "polar-involution")
    return run_polar_suite(o);
  throw Error(ErrorKind::InputError, "unknown suite '" + o.suite +
                                         "' (face-theorem, cross-validate, polar-involution)");
}

int run_polar(const Options &o) {
  const auto X = load_space(o.space);
  const auto &D = X.dual_ball();
  std::ostringstream t, m;
  t << "dual ball of " << X.name() << "\nvertices (" << D.vertices().size()
    << "): " << list(D.vertices()) << "\nfacets (" << D.functionals().size()
    << "): " << list(D.functionals()) << "\n";
  m << "| vertex of the dual ball |\n|---|\n";
  for (const auto &v : D.vertices())
    m << "| " << vec(v) << " |\n";
  emit(Json{{"space", X.name()}, {"dual", polytope_to_json(D)}}, t.str(), m.str(), o.format());
  return 0;
}

int run_faces(const Options &o) {
  const auto X = load_space(o.space);
  const auto faces = all_faces(X.ball());
  Json arr = Json::array();
  std::ostringstream t, m;
  m << "| dim | vertices |\n|---|---|\n";
  for (const auto &f : faces) {
    arr.push_back(face_to_json(f));
    t << "dim " << f.dim() << ": " << list(f.vertices()) << "\n";
    m << "| " << f.dim() << " | " << list(f.vertices()) << " |\n";
  }
  t << faces.size() << " faces\n";
  emit(Json{{"space", X.name()}, {"faceCount", faces.size()}, {"faces", arr}}, t.str(), m.str(),
       o.format());
  return 0;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Orders of smoothness of points and operators in polyhedral Banach spaces"};
  app.require_subcommand(1, 1);
  Options o;

  auto add_format = [&](CLI::App *sub) {
    auto *j = sub->add_flag("--json", o.json, "Emit JSON");
    sub->add_flag("--markdown", o.markdown, "Emit markdown")->excludes(j);
  };
  auto add_space = [&](CLI::App *sub) {
    sub->add_option("--space", o.space, "Space alias (linf2..linf5, l1:2..l1:4, hexagon) or JSON file")
        ->capture_default_str();
  };

  auto *point = app.add_subcommand("point", "Order of smoothness of a unit vector");
  add_space(point);
  point->add_option("--x", o.x, "Coordinates, comma separated rationals")->required();
  add_format(point);

  auto *op = app.add_subcommand("operator", "Order of smoothness of an operator");
  op->add_option("--file", o.file, "Operator JSON")->required()->check(CLI::ExistingFile);
  add_format(op);

  auto *cls = app.add_subcommand("classify", "Closed-form classifier verdict for an operator");
  cls->add_option("--file", o.file, "Operator JSON")->required()->check(CLI::ExistingFile);
  cls->add_option("--quantifier-reading", o.quantifier, "forall or exists")
      ->check(CLI::IsMember({"forall", "exists"}));
  add_format(cls);

  auto *ver = app.add_subcommand("verify", "Run a verification suite");
  ver->add_option("--suite", o.suite, "face-theorem, cross-validate or polar-involution")
      ->check(CLI::IsMember({"face-theorem", "cross-validate", "polar-involution"}))
      ->capture_default_str();
  add_space(ver);
  ver->add_option("--domain", o.domains, "Campaign domain spaces (default linf3)")->delimiter(',');
  ver->add_option("--codomain", o.codomains, "Campaign codomain spaces (default l1:3)")->delimiter(',');
  ver->add_option("--file", o.file, "Campaign config JSON")->check(CLI::ExistingFile);
  ver->add_option("--samples", o.samples, "Samples per face")->check(CLI::PositiveNumber);
  ver->add_option("--count", o.count, "Operators per campaign");
  ver->add_option("--seed", o.seed, "Seed");
  ver->add_option("--denominator-bound", o.denominator_bound, "Generator denominator bound")
      ->check(CLI::Range(2L, 1000L));
  ver->add_option("--quantifier-reading", o.quantifier, "forall or exists")
      ->check(CLI::IsMember({"forall", "exists"}));
  ver->add_option("--workers", o.workers, "Worker threads (default: KSMOOTH_WORKERS or 1)");
  add_format(ver);

  auto *pol = app.add_subcommand("polar", "Dual ball of a space");
  add_space(pol);
  add_format(pol);

  auto *fac = app.add_subcommand("faces", "All faces of a unit ball");
  add_space(fac);
  add_format(fac);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*point)
      return run_point(o);
    if (*op)
      return run_operator(o);
    if (*cls)
      return run_classify(o);
    if (*ver)
      return run_verify(o);
    if (*pol)
      return run_polar(o);
    return run_faces(o);
  } catch (const Error &e) {
    std::cerr << "error: " << e.what() << "\n";
    return is_input_error(e.kind()) ? 2 : 1;
  } catch (const nlohmann::json::exception &e) {
    std::cerr << "error: InputError: " << e.what() << "\n";
    return 2;
  }
}
