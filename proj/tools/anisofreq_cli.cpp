// Batch front end over the C interface.
//
//   anisofreq_cli --command eigen --domain square --p 2 --level 6 --out eig.json
//   anisofreq_cli --command optimize --domain-file disk.json --a 0.25 --out opt.json
//   anisofreq_cli --command verify --config run.json --out report.json
//
// Exit codes: 0 success, 1 a verification entry failed, 2 bad input,
// 3 solver or I/O failure.

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <json.hpp>
#include <memory>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "anisofreq/anisofreq.h"

namespace {

using Json = nlohmann::ordered_json;

constexpr int kExitFailedCheck = 1;
constexpr int kExitUsage = 2;
constexpr int kExitRuntime = 3;

struct RunConfig {
  std::string command;
  Json domain = {{"type", "square"}};
  double p = 2.0;
  double a = 1.0;
  std::optional<double> b;
  int level = 5;
  int grid_n = 17;
  double tol = 1e-9;
  std::string out;
  std::uint64_t seed = 42;
  std::vector<double> form;
  std::vector<double> thetas;
  std::vector<double> as;
  std::vector<double> bs;
  std::vector<double> ps;
  int n_samples = 5;
  int n_pairs = 5;
  bool timestamp = true;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RuntimeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(af_status s) {
  if (s == AF_OK) return;
  const std::string msg = af_last_error();
  if (s == AF_ERR_INVALID_ARGUMENT || s == AF_ERR_NEGATIVE_CROSS_TERM || s == AF_ERR_CLASS_MEMBERSHIP)
    throw UsageError(msg);
  throw RuntimeError(msg);
}

struct StringDeleter {
  void operator()(char* s) const { af_string_free(s); }
};
using OwnedString = std::unique_ptr<char, StringDeleter>;

template <class T, void (*Free)(T*)>
struct Handle {
  T* ptr = nullptr;
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  ~Handle() { Free(ptr); }
};

using DomainHandle = Handle<af_domain, af_domain_free>;
using MeshHandle = Handle<af_mesh, af_mesh_free>;
using EigenHandle = Handle<af_eigen, af_eigen_free>;
using OptimizeHandle = Handle<af_optimize, af_optimize_free>;
using ReportHandle = Handle<af_report, af_report_free>;

Json parse_json(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(what + " is not valid JSON: " + e.what());
  }
}

std::string slurp(const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "rb");
  if (!f) throw UsageError("cannot read " + path);
  std::string out;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, f)) > 0) out.append(buf, n);
  std::fclose(f);
  return out;
}

// Accepts inline JSON or one of the named shapes.
Json domain_argument(const std::string& s) {
  if (!s.empty() && s.front() == '{') return parse_json(s, "--domain");
  if (s == "square" || s == "lshape") return {{"type", s}};
  if (s == "disk") return {{"type", "disk"}, {"radius", 1.0}};
  throw UsageError("unknown domain \"" + s + "\"; use square, disk, lshape or inline JSON");
}

template <class T>
void take(const Json& j, const char* key, T& field) {
  if (j.contains(key) && !j.at(key).is_null()) field = j.at(key).get<T>();
}

void apply_config(const Json& j, RunConfig& c) {
  if (!j.is_object()) throw UsageError("config must be a JSON object");
  try {
    take(j, "command", c.command);
    if (j.contains("domain")) c.domain = j.at("domain").is_string() ? domain_argument(j.at("domain")) : j.at("domain");
    take(j, "p", c.p);
    take(j, "a", c.a);
    if (j.contains("b") && !j.at("b").is_null()) c.b = j.at("b").get<double>();
    take(j, "mesh_level", c.level);
    take(j, "level", c.level);
    take(j, "grid_n", c.grid_n);
    take(j, "tol", c.tol);
    take(j, "output_path", c.out);
    take(j, "out", c.out);
    take(j, "seed", c.seed);
    take(j, "form", c.form);
    take(j, "thetas", c.thetas);
    take(j, "as", c.as);
    take(j, "bs", c.bs);
    take(j, "ps", c.ps);
    take(j, "n_samples", c.n_samples);
    take(j, "n_pairs", c.n_pairs);
    take(j, "timestamp", c.timestamp);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("bad config field: ") + e.what());
  }
}

void validate(const RunConfig& c) {
  static const std::vector<std::string> commands = {"eigen", "optimize", "sweep", "verify", "bounds"};
  if (std::find(commands.begin(), commands.end(), c.command) == commands.end())
    throw UsageError("command must be one of eigen, optimize, sweep, verify, bounds");
  if (!(c.p > 1.0)) throw UsageError("p must be > 1");
  if (!(c.a > 0.0 && c.a <= 1.0)) throw UsageError("a must lie in (0, 1]");
  if (c.b && !(*c.b > 0.0 && *c.b <= 1.0)) throw UsageError("b must lie in (0, 1]");
  if (c.level < 2 || c.level > 9) throw UsageError("level must lie in [2, 9]");
  if (c.grid_n < 9) throw UsageError("grid_n must be >= 9");
  if (!(c.tol > 0.0)) throw UsageError("tol must be > 0");
  if (!c.form.empty() && c.form.size() != 3) throw UsageError("form takes three numbers: alpha beta gamma");
}

af_options options_for(const RunConfig& c) {
  af_options o;
  af_options_default(&o);
  o.mesh_level = c.level;
  o.grid_n = c.grid_n;
  o.tol = c.tol;
  return o;
}

void emit(const RunConfig& c, const std::string& payload_json) {
  char* raw = nullptr;
  check(af_envelope(payload_json.c_str(), c.timestamp ? 1 : 0, &raw));
  const OwnedString text(raw);
  if (c.out.empty()) {
    std::cout << text.get();
  } else {
    check(af_write_file(c.out.c_str(), text.get()));
  }
}

// foo.json -> foo<suffix>; a path without extension just gains the suffix.
std::string sibling(const std::string& out, const std::string& suffix) {
  const auto slash = out.find_last_of('/');
  const auto dot = out.find_last_of('.');
  const bool has_ext = dot != std::string::npos && (slash == std::string::npos || dot > slash);
  return (has_ext ? out.substr(0, dot) : out) + suffix;
}

void write_text(const RunConfig& c, const std::string& text) {
  if (c.out.empty())
    std::cout << text;
  else
    check(af_write_file(c.out.c_str(), text.c_str()));
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int run_eigen(const RunConfig& c, const af_domain* d, const af_options& o) {
  af_quadform q{1.0, 0.0, 1.0};
  if (!c.form.empty()) check(af_quadform_make(c.form[0], c.form[1], c.form[2], &q));
  MeshHandle m;
  check(af_mesh_build(d, &o, &m.ptr));
  EigenHandle e;
  check(af_solve(m.ptr, q, c.p, &o, &e.ptr));
  char* raw = nullptr;
  check(af_eigen_json(e.ptr, &raw));
  const OwnedString j(raw);
  if (!c.out.empty()) check(af_eigen_write_csv(e.ptr, sibling(c.out, ".csv").c_str()));
  emit(c, j.get());
  return 0;
}

int run_optimize(const RunConfig& c, const af_domain* d, const af_options& o) {
  if (!(c.a < 1.0)) throw UsageError("optimize needs a < 1");
  OptimizeHandle r;
  check(af_lambda_min(d, c.a, c.p, &o, &r.ptr));
  char* raw = nullptr;
  check(af_optimize_json(r.ptr, &raw));
  const OwnedString j(raw);
  if (!c.out.empty()) check(af_optimize_write_profile_csv(r.ptr, sibling(c.out, "_profile.csv").c_str()));
  emit(c, j.get());
  return 0;
}

// One row per (theta, a, p). Failed solves keep their row with status
// "failed" and make the run exit nonzero.
int run_sweep(const RunConfig& c, const af_domain* d, const af_options& o) {
  std::vector<double> thetas = c.thetas;
  if (thetas.empty())
    for (int k = 0; k < c.grid_n; ++k) thetas.push_back(std::numbers::pi / 2 * k / (c.grid_n - 1));
  const std::vector<double> as = c.as.empty() ? std::vector<double>{c.a} : c.as;
  const std::vector<double> ps = c.ps.empty() ? std::vector<double>{c.p} : c.ps;
  std::string csv = "theta,a,p,lambda,residual,status\n";
  bool failed = false;
  for (const double p : ps) {
    for (const double a : as) {
      for (const double t : thetas) {
        double lambda = NAN, residual = NAN;
        const af_status s = af_lambda_at_theta(d, a, t, p, &o, &lambda, &residual);
        if (s == AF_ERR_INVALID_ARGUMENT) check(s);
        failed = failed || s != AF_OK;
        csv += num(t) + ',' + num(a) + ',' + num(p) + ',' + num(lambda) + ',' + num(residual) + ',' +
               (s == AF_OK ? "ok" : "failed") + '\n';
        if (s != AF_OK) std::cerr << "sweep: theta=" << t << " a=" << a << " p=" << p << ": " << af_last_error() << '\n';
      }
    }
  }
  write_text(c, csv);
  return failed ? kExitRuntime : 0;
}

int run_verify(const RunConfig& c) {
  Json cfg = {{"domain", c.domain}, {"a", c.a},           {"p", c.p},
              {"level", c.level},   {"grid_n", c.grid_n}, {"tol", c.tol},
              {"seed", c.seed},     {"n_samples", c.n_samples}, {"n_pairs", c.n_pairs}};
  if (c.b) cfg["b"] = *c.b;
  ReportHandle r;
  check(af_verify(cfg.dump().c_str(), &r.ptr));
  char* raw = nullptr;
  check(af_report_json(r.ptr, &raw));
  const OwnedString j(raw);
  emit(c, j.get());
  int passed = 0;
  check(af_report_passed(r.ptr, &passed));
  return passed ? 0 : kExitFailedCheck;
}

// quant_upper_bound and quant_lower_constant over the (a, b, p) grid, with
// c0 and lambda_{1,p} measured on the domain once per p.
int run_bounds(const RunConfig& c, const af_domain* d, const af_options& o) {
  const std::vector<double> as = c.as.empty() ? std::vector<double>{c.a} : c.as;
  const std::vector<double> bs = c.bs.empty() ? std::vector<double>{c.b.value_or(c.a)} : c.bs;
  const std::vector<double> ps = c.ps.empty() ? std::vector<double>{c.p} : c.ps;
  std::string csv = "a,b,p,upper_bound,c0,lambda,lower_constant\n";
  for (const double p : ps) {
    double c0 = 0.0, lambda = 0.0;
    check(af_directional_min(d, p, AF_AXIS_X, &o, &c0, nullptr));
    check(af_lambda_max(d, 0.5, p, &o, &lambda));
    for (const double a : as) {
      for (const double b : bs) {
        if (b < a || !(b < 1.0)) continue;
        double up = 0.0, lo = 0.0;
        check(af_quant_upper_bound(a, b, p, &up));
        check(af_quant_lower_constant(a, b, p, c0, lambda, &lo));
        csv += num(a) + ',' + num(b) + ',' + num(p) + ',' + num(up) + ',' + num(c0) + ',' + num(lambda) + ',' +
               num(lo) + '\n';
      }
    }
  }
  write_text(c, csv);
  return 0;
}

int dispatch(const RunConfig& c) {
  if (c.command == "verify") return run_verify(c);
  DomainHandle d;
  check(af_domain_from_json(c.domain.dump().c_str(), &d.ptr));
  const af_options o = options_for(c);
  if (c.command == "eigen") return run_eigen(c, d.ptr, o);
  if (c.command == "optimize") return run_optimize(c, d.ptr, o);
  if (c.command == "sweep") return run_sweep(c, d.ptr, o);
  return run_bounds(c, d.ptr, o);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Anisotropic p-Laplacian fundamental frequencies"};
  RunConfig c;
  std::string domain_file, domain, config_file;
  std::optional<double> b;
  bool no_timestamp = false;
  app.add_option("--command", c.command, "eigen, optimize, sweep, verify or bounds");
  app.add_option("--domain-file", domain_file, "domain JSON file");
  app.add_option("--domain", domain, "square, disk, lshape or inline domain JSON");
  app.add_option("--p", c.p, "exponent p > 1");
  app.add_option("--a", c.a, "coercivity bound a in (0, 1]");
  app.add_option("--b", b, "second bound for the quantitative checks");
  app.add_option("--level", c.level, "mesh refinement level in [2, 9]");
  app.add_option("--grid-n", c.grid_n, "theta grid size, >= 9");
  app.add_option("--tol", c.tol, "solver tolerance");
  app.add_option("--out", c.out, "output path; stdout when absent");
  app.add_option("--seed", c.seed, "seed for randomized suites");
  app.add_option("--form", c.form, "alpha beta gamma of the form (eigen)")->expected(3);
  app.add_option("--thetas", c.thetas, "theta values (sweep)");
  app.add_option("--as", c.as, "a values (sweep, bounds)");
  app.add_option("--bs", c.bs, "b values (bounds)");
  app.add_option("--ps", c.ps, "p values (sweep, bounds)");
  app.add_option("--samples", c.n_samples, "random forms per verification check");
  app.add_option("--pairs", c.n_pairs, "ordered pairs for the monotonicity check");
  app.add_flag("--no-timestamp", no_timestamp, "leave the envelope timestamp empty");
  app.add_option("--config", config_file, "JSON config; its fields override flags");
  CLI11_PARSE(app, argc, argv);

  try {
    if (b) c.b = b;
    c.timestamp = !no_timestamp;
    if (!domain.empty()) c.domain = domain_argument(domain);
    if (!domain_file.empty()) c.domain = parse_json(slurp(domain_file), domain_file);
    if (!config_file.empty()) apply_config(parse_json(slurp(config_file), config_file), c);
    validate(c);
    return dispatch(c);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const RuntimeError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}
