// ncg: build triples, compute Connes distances, classify morphisms and run
// the verification suites. Exit codes: 0 success, 1 a check failed, 2 bad
// input or usage.

#include "ncg/ncg.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using ncg::io::json;

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kBadInput = 2;

struct RunConfig {
  double tol = 1e-9;
  double eps = 1e-4;
  double tol_rel = 0.05;
  std::string states = "default";
  std::string format = "json";
  std::uint64_t seed = 1;
  std::string out;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(cfg.out, std::ios::binary);
  if (!f) throw ncg::io::FormatError("cannot write " + cfg.out);
  f << text;
}

void check_config(const RunConfig& cfg) {
  if (!(cfg.tol > 0.0) || !(cfg.eps > 0.0) || !(cfg.tol_rel > 0.0)) throw UsageError("tolerances must be positive");
  if (cfg.format != "json" && cfg.format != "csv") throw UsageError("--format must be json or csv");
}

// A state argument: short token ("e0", "v1:0") or an inline JSON state.
ncg::State state_arg(const std::string& s, const ncg::FiniteAlgebra& alg) {
  if (!s.empty() && s.front() == '{') {
    try {
      return ncg::io::state_from(json::parse(s));
    } catch (const json::parse_error& e) {
      throw ncg::io::FormatError(std::string("state: ") + e.what());
    }
  }
  return ncg::io::state_from_token(s, alg);
}

// --states: "default", a comma-separated token list, or a JSON file holding
// an array of states.
std::vector<ncg::State> state_set(const std::string& selector, const ncg::FiniteAlgebra& alg) {
  if (selector == "default") return ncg::default_state_set(alg);
  if (std::filesystem::exists(selector)) {
    const json j = ncg::io::read_file(selector);
    if (!j.is_array()) throw ncg::io::FormatError(selector + ": expected an array of states");
    std::vector<ncg::State> out;
    for (const auto& s : j) out.push_back(ncg::io::state_from(s));
    return out;
  }
  std::vector<ncg::State> out;
  std::stringstream ss(selector);
  for (std::string tok; std::getline(ss, tok, ',');) {
    if (!tok.empty()) out.push_back(ncg::io::state_from_token(tok, alg));
  }
  if (out.size() < 2) throw UsageError("--states needs at least two states");
  for (const auto& s : out) s.check(alg);
  return out;
}

std::string csv_number(double v) {
  json j = v;
  std::string s = ncg::io::dump(j, -1);
  if (!s.empty() && s.front() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

// ---------------------------------------------------------------------------

struct BuildArgs {
  std::string kind;
  int n = 3;
  std::string x = "1";
  std::string d = "1";
  int m = 1;
  int ntheta = 32;
  int nphi = 32;
  double c = 3.0;
  std::string metric = "embedded";
};

json number_or_json(const std::string& s) {
  try {
    return json::parse(s);
  } catch (const json::parse_error&) {
    throw ncg::io::FormatError("cannot parse '" + s + "' as a number, [re, im] or list");
  }
}

int cmd_build(const BuildArgs& a, const RunConfig& cfg) {
  json spec = {{"kind", a.kind}};
  if (a.kind == "npoint") {
    spec["n"] = a.n;
    spec["x"] = number_or_json(a.x);
  } else if (a.kind == "f_ed") {
    spec["d"] = number_or_json(a.d);
  } else if (a.kind == "trivial") {
    spec["m"] = a.m;
  } else if (a.kind == "circle" || a.kind == "union") {
    spec["n"] = a.n;
  } else if (a.kind == "torus") {
    spec["ntheta"] = a.ntheta;
    spec["nphi"] = a.nphi;
    spec["c"] = a.c;
    spec["metric"] = a.metric;
  } else {
    throw UsageError("unknown kind '" + a.kind + "' (npoint, f_ed, trivial, circle, torus, union)");
  }
  const ncg::FiniteSpectralTriple t = ncg::io::triple_from_spec(spec);
  const ncg::ValidationReport v = ncg::validate_triple(t, cfg.tol);
  if (!v.ok()) {
    std::cerr << ncg::io::dump(ncg::io::to_json(v)) << "\n";
    return kBadInput;
  }
  emit(cfg, ncg::io::dump(ncg::io::to_json(t)));
  return kOk;
}

int cmd_distance(const std::string& path, const std::string& rho, const std::string& sigma, const RunConfig& cfg) {
  const ncg::FiniteSpectralTriple t = ncg::io::triple_ref_from(json(path), ".");
  const ncg::State r = state_arg(rho, t.algebra);
  const ncg::State s = state_arg(sigma, t.algebra);
  r.check(t.algebra);
  s.check(t.algebra);
  ncg::DistanceOptions opts;
  opts.eps = cfg.eps;
  const ncg::DistanceResult d = ncg::connes_distance(t, r, s, opts);
  if (cfg.format == "csv") {
    emit(cfg, "value,iterations\n" + (d.value.infinite ? std::string("inf") : csv_number(d.value.value)) + "," +
                  std::to_string(d.iterations) + "\n");
  } else {
    emit(cfg, ncg::io::dump(ncg::io::to_json(d)));
  }
  return kOk;
}

bool flag_value(const ncg::ClassificationReport& r, const std::string& name) {
  if (name == "smooth_morphism") return r.smooth_morphism;
  if (name == "embedding") return r.embedding;
  if (name == "connes_isometric") return r.connes_isometric;
  if (name == "riemannian") return r.riemannian;
  if (name == "totally_geodesic") return r.totally_geodesic;
  if (name == "isometric") return r.isometric;
  throw UsageError("unknown flag '" + name + "'");
}

int cmd_classify(const std::string& path, const std::vector<std::string>& require, const RunConfig& cfg) {
  const std::filesystem::path p(path);
  const ncg::SmoothMorphism m = ncg::io::morphism_from(ncg::io::read_file(p), p.parent_path());
  for (const auto& f : require) flag_value({}, f);  // reject unknown names before the work
  const auto states = state_set(cfg.states, m.target->algebra);
  ncg::ClassifyOptions opts;
  opts.tau = cfg.tol;
  opts.eps = cfg.eps;
  ncg::ClassificationReport r;
  try {
    r = ncg::classify(m, states, opts);
  } catch (const ncg::InconsistencyError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kCheckFailed;
  }
  json out = ncg::io::to_json(r);
  bool pass = true;
  json req = json::object();
  for (const auto& f : require) {
    const bool v = flag_value(r, f);
    req[f] = v;
    pass = pass && v;
  }
  out["required"] = req;
  out["pass"] = pass;
  if (cfg.format == "csv") {
    std::string text = "flag,value\n";
    for (const auto& [k, v] : out.at("flags").items()) text += k + "," + (v.get<bool>() ? "true" : "false") + "\n";
    emit(cfg, text);
  } else {
    emit(cfg, ncg::io::dump(out));
  }
  return pass ? kOk : kCheckFailed;
}

int cmd_verify(const std::string& suite, const RunConfig& cfg) {
  const auto& table = ncg::suites();
  const auto it = table.find(suite);
  if (suite.empty() || it == table.end()) {
    std::string names;
    for (const auto& [k, v] : table) names += (names.empty() ? "" : ", ") + k;
    throw UsageError("unknown suite '" + suite + "' (" + names + ")");
  }
  ncg::SuiteOptions opts;
  opts.tau = cfg.tol;
  opts.eps = cfg.eps;
  opts.tau_rel = cfg.tol_rel;
  opts.seed = cfg.seed;
  const ncg::SuiteReport r = it->second(opts);

  if (cfg.format == "csv") {
    std::string text;
    if (suite == "hodge-convergence") {
      text = "grid,function,norm_N,norm_M,rel_gap\n";
      for (const auto& c : r.cases) {
        if (c.values.size() != 3 || c.values[0].first != "norm_N") continue;
        const auto space = c.name.find(' ');
        text += c.name.substr(0, space) + "," + c.name.substr(space + 1) + "," + csv_number(c.values[0].second) + "," +
                csv_number(c.values[1].second) + "," + csv_number(c.values[2].second) + "\n";
      }
    } else {
      text = "case,pass\n";
      for (const auto& c : r.cases) text += "\"" + c.name + "\"," + (c.pass ? "true" : "false") + "\n";
    }
    emit(cfg, text);
  } else {
    json cases = json::array();
    for (const auto& c : r.cases) {
      json values = json::object();
      for (const auto& [k, v] : c.values) values[k] = v;
      json item = {{"name", c.name}, {"pass", c.pass}, {"values", values}};
      if (!c.detail.empty()) item["detail"] = c.detail;
      cases.push_back(std::move(item));
    }
    emit(cfg, ncg::io::dump({{"suite", r.name}, {"seed", cfg.seed}, {"pass", r.passed()}, {"cases", cases}}));
  }
  return r.passed() ? kOk : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite spectral triples: distances, morphisms and discrete Hodge checks"};
  app.require_subcommand(1);
  RunConfig cfg;
  auto common = [&cfg](CLI::App* sub) {
    sub->add_option("--tol", cfg.tol, "residual tolerance");
    sub->add_option("--eps", cfg.eps, "distance tolerance");
    sub->add_option("--out", cfg.out, "write output here instead of stdout");
    sub->add_option("--format", cfg.format, "json or csv");
  };

  BuildArgs build;
  auto* b = app.add_subcommand("build", "write a validated triple as JSON");
  b->add_option("kind", build.kind, "npoint, f_ed, trivial, circle, torus or union")->required();
  b->add_option("--n", build.n, "points (npoint) or vertices (circle, union)");
  b->add_option("--x", build.x, "npoint off-diagonal entry: number, [re, im] or list");
  b->add_option("--d", build.d, "F_ED mass parameter");
  b->add_option("--m", build.m, "trivial triple dimension");
  b->add_option("--ntheta", build.ntheta);
  b->add_option("--nphi", build.nphi);
  b->add_option("--c", build.c, "torus major radius");
  b->add_option("--metric", build.metric, "embedded or flat");
  common(b);

  std::string triple_path, rho, sigma;
  auto* d = app.add_subcommand("distance", "Connes distance between two states");
  d->add_option("triple", triple_path, "triple JSON file")->required();
  d->add_option("rho", rho, "state: e<block>, v<block>:<index> or JSON")->required();
  d->add_option("sigma", sigma)->required();
  common(d);

  std::string morphism_path;
  std::string require = "smooth_morphism,embedding";
  auto* c = app.add_subcommand("classify", "classify a morphism; exit 0 iff the required flags hold");
  c->add_option("morphism", morphism_path, "morphism JSON file")->required();
  c->add_option("--states", cfg.states, "default, comma-separated tokens, or a JSON file");
  c->add_option("--require", require, "comma-separated flags that must hold");
  common(c);

  std::string suite;
  auto* v = app.add_subcommand("verify", "run a named verification suite");
  v->add_option("suite", suite, "paper-examples, hodge-convergence or implications");
  v->add_option("--seed", cfg.seed, "seed for randomized suites");
  v->add_option("--tol-rel", cfg.tol_rel, "relative tolerance for convergence checks");
  common(v);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kBadInput;
  }

  try {
    check_config(cfg);
    if (b->parsed()) return cmd_build(build, cfg);
    if (d->parsed()) {
      ncg::DistanceOptions defaults;
      if (d->count("--eps") == 0) cfg.eps = defaults.eps;
      return cmd_distance(triple_path, rho, sigma, cfg);
    }
    if (c->parsed()) {
      std::vector<std::string> flags;
      std::stringstream ss(require);
      for (std::string f; std::getline(ss, f, ',');) {
        if (!f.empty()) flags.push_back(f);
      }
      return cmd_classify(morphism_path, flags, cfg);
    }
    if (v->parsed()) return cmd_verify(suite, cfg);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kBadInput;
  } catch (const ncg::io::FormatError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kBadInput;
  } catch (const ncg::ShapeError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kBadInput;
  } catch (const ncg::PreconditionError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kBadInput;
  } catch (const ncg::HomomorphismError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kBadInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kCheckFailed;
  }
  return kBadInput;
}
