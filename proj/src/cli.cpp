#include "minkops/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "minkops/measures.hpp"
#include "minkops/operators.hpp"
#include "minkops/verifier.hpp"

namespace minkops {

namespace {

/// Input errors: reported with exit code 2.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  std::string action;  // compute quantity, operator action, or verify suite
  std::vector<std::string> inputs;
  std::vector<std::string> ops;
  std::uint64_t seed = 0;
  std::string corpus;
  int grid = 360;
  int dim = 0;  // 0: from the corpus or the inputs
  int pairs = 2000;
  int rotations = 8;
  std::vector<std::string> tol_overrides;
  int threads = 0;
  std::string format;
  std::string out_path;
  std::string direction;
  Tolerances tol{};
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Json parse_json(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    throw InputError("malformed JSON in " + what + ": " + e.what());
  }
}

Body load_body(const std::string& path) { return body_from_json(parse_json(read_file(path), "'" + path + "'")); }

/// A file path, an inline JSON object, or a bare kind name.
OperatorDescriptor load_operator(const std::string& spec) {
  if (spec == "identity") return OperatorDescriptor::identity();
  if (spec == "reflection") return OperatorDescriptor::reflection();
  if (spec == "diffbody") return OperatorDescriptor::diff_body();
  if (!spec.empty() && spec.front() == '{') return operator_from_json(parse_json(spec, "--op"));
  if (std::filesystem::exists(spec)) return operator_from_json(parse_json(read_file(spec), "'" + spec + "'"));
  throw InputError("--op '" + spec + "' is neither a file, inline JSON, nor identity|reflection|diffbody");
}

Vec parse_vector(const std::string& text) {
  std::vector<double> xs;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      xs.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw InputError("bad vector component '" + item + "'");
    }
  }
  Vec v(static_cast<Eigen::Index>(xs.size()));
  for (std::size_t i = 0; i < xs.size(); ++i) v(static_cast<Eigen::Index>(i)) = xs[i];
  return v;
}

void apply_tolerances(RunConfig& cfg) {
  for (const auto& item : cfg.tol_overrides) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw InputError("--tol expects name=value, got '" + item + "'");
    double value = 0.0;
    try {
      std::size_t used = 0;
      value = std::stod(item.substr(eq + 1), &used);
      if (used != item.size() - eq - 1) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw InputError("--tol: bad value in '" + item + "'");
    }
    if (!(value >= 0.0)) throw InputError("--tol: value must be nonnegative");
    if (!cfg.tol.set(item.substr(0, eq), value))
      throw InputError("--tol: unknown or fixed tolerance '" + item.substr(0, eq) + "'");
  }
}

Json header(const RunConfig& cfg) {
  Json doc;
  doc["tool"] = kToolName;
  doc["version"] = kToolVersion;
  doc["command"] = cfg.command + " " + cfg.action;
  doc["seed"] = cfg.seed;
  Json tol = Json::object();
  for (const auto& [k, v] : cfg.tol.as_map()) tol[k] = v;
  doc["tolerances"] = tol;
  Json c;
  c["inputs"] = cfg.inputs;
  c["ops"] = cfg.ops;
  c["corpus"] = cfg.corpus;
  c["grid"] = cfg.grid;
  c["dim"] = cfg.dim;
  c["pairs"] = cfg.pairs;
  c["rotations"] = cfg.rotations;
  c["direction"] = cfg.direction;
  c["threads"] = cfg.threads;
  c["format"] = cfg.format;
  doc["config"] = c;
  return doc;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

void flatten(const Json& j, const std::string& path, std::ostringstream& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) flatten(it.value(), path.empty() ? it.key() : path + "." + it.key(), out);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], path + "." + std::to_string(i), out);
  } else {
    std::string value = j.is_string() ? j.get<std::string>() : dump_json(j, 0);
    out << csv_field(path) << ',' << csv_field(value) << '\n';
  }
}

// Leading comment lines carrying the provenance fields of the JSON header.
std::string csv_preamble(const Json& head) {
  std::ostringstream out;
  out << "# tool=" << head["tool"].get<std::string>() << " version=" << head["version"].get<std::string>()
      << " command=" << head["command"].get<std::string>() << " seed=" << head["seed"].get<std::uint64_t>() << '\n';
  out << "# tolerances=" << dump_json(head["tolerances"], 0) << '\n';
  out << "# config=" << dump_json(head["config"], 0) << '\n';
  return out.str();
}

// Generic key,value projection of a result object.
std::string result_csv(const Json& head, const Json& result) {
  std::ostringstream out;
  out << csv_preamble(head) << "key,value\n";
  flatten(result, "", out);
  return out.str();
}

std::string reports_csv(const Json& head, const std::vector<VerificationReport>& reports) {
  std::ostringstream out;
  out << csv_preamble(head) << VerificationReport::csv_header() << '\n';
  for (const auto& r : reports)
    for (const auto& row : r.csv_rows()) out << row << '\n';
  return out.str();
}

Corpus resolve_corpus(RunConfig& cfg) {
  if (cfg.corpus.empty()) {
    cfg.corpus = (cfg.dim > 2) ? "zonotopes:30,segments:5,dim:" + std::to_string(cfg.dim)
                               : "polygons:20,triangles:10,symmetric:10,zonotopes:10,segments:5";
  }
  CorpusSpec spec = CorpusSpec::parse(cfg.corpus);
  cfg.corpus = spec.to_string();
  if (cfg.dim == 0) cfg.dim = spec.dim;
  if (cfg.dim != spec.dim) throw InputError("--dim differs from the corpus dimension");
  return make_corpus(spec, cfg.seed);
}

struct Output {
  std::string text;
  int code = kExitPass;
};

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

Output cmd_compute(RunConfig& cfg) {
  std::vector<Body> bodies;
  for (const auto& p : cfg.inputs) bodies.push_back(load_body(p));
  auto need = [&](std::size_t count) {
    if (bodies.size() != count)
      throw InputError("compute " + cfg.action + " takes " + std::to_string(count) + " --in file(s)");
  };
  Json result;
  std::vector<VerificationReport> reports;
  const std::string& what = cfg.action;
  if (what == "volume") {
    need(1);
    result["volume"] = volume(bodies[0]);
  } else if (what == "support") {
    need(1);
    if (cfg.direction.empty()) throw InputError("compute support requires --u");
    const Vec u = parse_vector(cfg.direction);
    if (u.size() != bodies[0].ambient_dim()) throw InputError("--u dimension differs from the body");
    result["support"] = support(bodies[0], u);
  } else if (what == "diffbody") {
    need(1);
    const Body dk = difference_body(bodies[0]);
    result["body"] = body_to_json(dk.ambient_dim() == 2 && !dk.is_point() ? Body(to_polygon(dk)) : dk);
    result["volume"] = volume(dk);
  } else if (what == "steiner") {
    need(1);
    result["steiner_point"] = vec_to_json(steiner_point(bodies[0]));
  } else if (what == "mixed") {
    if (bodies.empty()) throw InputError("compute mixed takes n --in files");
    result["mixed_volume"] = mixed_volume(bodies);
  } else if (what == "hausdorff") {
    need(2);
    result["hausdorff"] = hausdorff_distance(bodies[0], bodies[1]);
  } else if (what == "width") {
    need(1);
    if (cfg.direction.empty()) throw InputError("compute width requires --u");
    reports.push_back(width_mixed_volume_check(bodies[0], parse_vector(cfg.direction), cfg.tol));
    result["report"] = reports.back().to_json();
  }
  Json doc = header(cfg);
  Output o;
  if (!reports.empty()) o.code = all_passed(reports) ? kExitPass : kExitFail;
  if (cfg.format == "csv") {
    o.text = reports.empty() ? result_csv(doc, result) : reports_csv(doc, reports);
  } else {
    doc["result"] = result;
    o.text = dump_json(doc) + "\n";
  }
  return o;
}

Output cmd_operator(RunConfig& cfg) {
  if (cfg.ops.empty()) throw InputError("operator " + cfg.action + " requires --op");
  Json result;
  Json doc = header(cfg);
  Output o;
  if (cfg.action == "apply") {
    if (cfg.ops.size() != 1) throw InputError("operator apply takes one --op");
    const OperatorDescriptor op = load_operator(cfg.ops[0]);
    std::vector<Body> bodies;
    for (const auto& p : cfg.inputs) bodies.push_back(load_body(p));
    if (!cfg.corpus.empty()) {
      const Corpus c = resolve_corpus(cfg);
      bodies.insert(bodies.end(), c.bodies.begin(), c.bodies.end());
      doc = header(cfg);
    }
    if (bodies.empty()) throw InputError("operator apply requires --in or --corpus");
    Json images = Json::array();
    for (const auto& k : bodies) {
      const Body img = apply(op, k);
      images.push_back(Json{{"body", body_to_json(img)}, {"volume", volume(img)}});
    }
    result["operator"] = operator_to_json(op);
    result["images"] = images;
  } else if (cfg.action == "extract") {
    if (cfg.ops.size() != 1) throw InputError("operator extract takes one --op");
    const RhoPiTable t = extract_table(load_operator(cfg.ops[0]), cfg.grid);
    if (cfg.format == "csv") {
      o.text = csv_preamble(doc) + table_to_csv(t);
      return o;
    }
    result["table"] = table_to_json(t);
    const auto [smin, smax] = t.slope_range();
    result["summary"] = Json{{"m_phi", t.m_phi()},         {"M_phi", t.big_m_phi()}, {"slope_min", smin},
                             {"slope_max", smax},          {"orientation", t.orientation()}};
  } else {  // compose
    if (cfg.ops.size() < 2) throw InputError("operator compose takes at least two --op");
    OperatorDescriptor acc = load_operator(cfg.ops.back());
    for (std::size_t i = cfg.ops.size() - 1; i-- > 0;) acc = compose(load_operator(cfg.ops[i]), acc);
    result["operator"] = operator_to_json(acc, cfg.dim > 0 ? cfg.dim : 2);
  }
  if (cfg.format == "csv") {
    o.text = result_csv(doc, result);
  } else {
    doc["result"] = result;
    o.text = dump_json(doc) + "\n";
  }
  return o;
}

Output cmd_verify(RunConfig& cfg) {
  const std::string& suite = cfg.action;
  const Corpus corpus = resolve_corpus(cfg);
  VerifyOptions opt;
  opt.tol = cfg.tol;
  opt.threads = cfg.threads;
  opt.seed = cfg.seed;
  std::vector<OperatorDescriptor> ops;
  for (const auto& s : cfg.ops) ops.push_back(load_operator(s));
  if (suite != "rs" && ops.empty()) throw InputError("verify " + suite + " requires --op");
  if (suite != "vc" && ops.size() > 1) throw InputError("verify " + suite + " takes one --op");
  if (ops.size() > 2) throw InputError("verify vc takes one or two --op");

  std::vector<VerificationReport> reports;
  Json extra = Json::object();
  const int n = cfg.dim;
  if (suite == "rs") {
    reports.push_back(rs_corpus_check(corpus, opt));
  } else if (suite == "axioms") {
    reports.push_back(check_operator_axioms(ops[0], corpus, opt));
  } else if (suite == "even") {
    reports.push_back(evenness_test(ops[0], corpus, opt));
  } else if (suite == "vc") {
    if (ops.size() == 2) {
      reports.push_back(vc_estimate(compose(ops[0], ops[1]), corpus, opt));
      reports.push_back(vc_composition_check(ops[0], ops[1], corpus, opt));
    } else {
      reports.push_back(vc_estimate(ops[0], corpus, opt));
    }
  } else if (suite == "monotone") {
    reports.push_back(monotonicity_test(ops[0], corpus, opt));
  } else if (suite == "weak_monotone") {
    reports.push_back(monotonicity_test(ops[0], corpus, opt, true));
  } else if (suite == "equivariant") {
    reports.push_back(equivariance_test(ops[0], random_rotations(n, cfg.rotations, cfg.seed), corpus, opt));
  } else if (suite == "bilip") {
    reports.push_back(bilip_estimate(ops[0], n, cfg.pairs, cfg.seed, opt));
  } else if (suite == "recover") {
    RecoverResult r = recover_gD(ops[0], corpus, n, opt);
    if (r.g) extra["g"] = mat_to_json(*r.g);
    reports.push_back(std::move(r.report));
  } else if (suite == "fit") {
    FitResult r = fit_blend(ops[0], corpus, n, opt);
    extra["a"] = r.a;
    extra["b"] = r.b;
    if (r.g) extra["g"] = mat_to_json(*r.g);
    extra["identifiable"] = r.identifiable;
    reports.push_back(std::move(r.report));
  }

  Json doc = header(cfg);
  Output o;
  o.code = all_passed(reports) ? kExitPass : kExitFail;
  if (cfg.format == "csv") {
    o.text = reports_csv(doc, reports);
  } else {
    Json rs = Json::array();
    for (const auto& r : reports) rs.push_back(r.to_json());
    doc["pass"] = o.code == kExitPass;
    doc["reports"] = rs;
    for (auto it = extra.begin(); it != extra.end(); ++it) doc[it.key()] = it.value();
    o.text = dump_json(doc) + "\n";
  }
  return o;
}

Output cmd_corpus(RunConfig& cfg) {
  const Corpus c = resolve_corpus(cfg);
  Json doc = header(cfg);
  const Json body = corpus_to_json(c);
  Output o;
  if (cfg.format == "csv") {
    o.text = result_csv(doc, body);
  } else {
    doc["result"] = body;
    o.text = dump_json(doc) + "\n";
  }
  return o;
}

void add_common(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--seed", cfg.seed, "random seed");
  sub->add_option("--tol", cfg.tol_overrides, "tolerance override name=value (repeatable)");
  sub->add_option("--threads", cfg.threads, "worker threads, 0 = hardware parallelism")->check(CLI::NonNegativeNumber);
  sub->add_option("--format", cfg.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  sub->add_option("--out", cfg.out_path, "output file (default stdout)");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Minkowski additive operators on convex bodies", "minkops"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolName) + " " + kToolVersion);
  RunConfig cfg;

  auto* compute = app.add_subcommand("compute", "compute a geometric quantity");
  compute->add_option("what", cfg.action, "volume|support|diffbody|steiner|mixed|hausdorff|width")
      ->required()
      ->check(CLI::IsMember({"volume", "support", "diffbody", "steiner", "mixed", "hausdorff", "width"}));
  compute->add_option("--in", cfg.inputs, "body JSON file (repeatable)");
  compute->add_option("--u", cfg.direction, "direction, comma separated");
  add_common(compute, cfg);

  auto* oper = app.add_subcommand("operator", "apply, extract or compose operators");
  oper->add_option("action", cfg.action, "apply|extract|compose")
      ->required()
      ->check(CLI::IsMember({"apply", "extract", "compose"}));
  oper->add_option("--op", cfg.ops, "operator: JSON file, inline JSON, or identity|reflection|diffbody");
  oper->add_option("--in", cfg.inputs, "body JSON file (repeatable)");
  oper->add_option("--corpus", cfg.corpus, "corpus spec, e.g. polygons:10,triangles:5");
  oper->add_option("--grid", cfg.grid, "table grid size")->check(CLI::Range(2, 1000000));
  oper->add_option("--dim", cfg.dim, "dimension for declared VC constants")->check(CLI::Range(2, 16));
  add_common(oper, cfg);

  auto* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("suite", cfg.action, "axioms|even|rs|vc|monotone|weak_monotone|equivariant|bilip|recover|fit")
      ->required()
      ->check(CLI::IsMember(
          {"axioms", "even", "rs", "vc", "monotone", "weak_monotone", "equivariant", "bilip", "recover", "fit"}));
  verify->add_option("--op", cfg.ops, "operator (vc accepts outer and inner)");
  verify->add_option("--corpus", cfg.corpus, "corpus spec");
  verify->add_option("--dim", cfg.dim, "ambient dimension")->check(CLI::Range(2, 16));
  verify->add_option("--pairs", cfg.pairs, "line pairs for bilip")->check(CLI::Range(1, 100000000));
  verify->add_option("--rotations", cfg.rotations, "rotations for equivariant")->check(CLI::Range(1, 100000));
  verify->add_option("--grid", cfg.grid, "unused by verify; recorded")->check(CLI::Range(2, 1000000));
  add_common(verify, cfg);

  auto* corpus = app.add_subcommand("corpus", "generate a seeded corpus");
  corpus->add_option("--corpus", cfg.corpus, "corpus spec")->required();
  add_common(corpus, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitInputError;
  }

  Output result;
  try {
    apply_tolerances(cfg);
    if (compute->parsed()) {
      cfg.command = "compute";
      if (cfg.format.empty()) cfg.format = "json";
      result = cmd_compute(cfg);
    } else if (oper->parsed()) {
      cfg.command = "operator";
      if (cfg.format.empty()) cfg.format = cfg.action == "extract" ? "csv" : "json";
      result = cmd_operator(cfg);
    } else if (verify->parsed()) {
      cfg.command = "verify";
      if (cfg.format.empty()) cfg.format = "json";
      result = cmd_verify(cfg);
    } else {
      cfg.command = "corpus";
      cfg.action = "generate";
      if (cfg.format.empty()) cfg.format = "json";
      result = cmd_corpus(cfg);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }

  if (cfg.out_path.empty()) {
    out << result.text;
  } else {
    std::ofstream f(cfg.out_path, std::ios::binary);
    if (!f) {
      err << "error: cannot write '" << cfg.out_path << "'\n";
      return kExitInputError;
    }
    f << result.text;
  }
  return result.code;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"minkops"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace minkops
