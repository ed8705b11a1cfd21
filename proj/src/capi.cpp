#include "anisofreq/anisofreq.h"

#include <cstring>
#include <string>

#include "anisofreq/error.hpp"
#include "anisofreq/optimizer.hpp"
#include "anisofreq/serialize.hpp"
#include "anisofreq/verification.hpp"

using namespace anisofreq;

struct af_domain {
  DomainSpec spec;
};

struct af_mesh {
  Mesh mesh;
  int level;
};

struct af_eigen {
  EigenResult result;
  std::vector<Vec2> nodes;
  Json options;
  int level;
};

struct af_optimize {
  OptimizeResult result;
  Json options;
};

struct af_report {
  VerificationReport report;
  Json config;
};

namespace {

thread_local std::string g_last_error;

af_status set_error(af_status s, const std::string& msg) {
  g_last_error = msg;
  return s;
}

af_status to_status(ErrorCode c) {
  switch (c) {
    case ErrorCode::InvalidArgument: return AF_ERR_INVALID_ARGUMENT;
    case ErrorCode::NegativeCrossTerm: return AF_ERR_NEGATIVE_CROSS_TERM;
    case ErrorCode::ClassMembership: return AF_ERR_CLASS_MEMBERSHIP;
    case ErrorCode::Mesh: return AF_ERR_MESH;
    case ErrorCode::Convergence: return AF_ERR_CONVERGENCE;
    case ErrorCode::Io: return AF_ERR_IO;
    case ErrorCode::Internal: return AF_ERR_INTERNAL;
  }
  return AF_ERR_INTERNAL;
}

// Runs f, translating every exception into a status and a message.
template <class F>
af_status guarded(F&& f) {
  try {
    f();
    g_last_error.clear();
    return AF_OK;
  } catch (const Error& e) {
    return set_error(to_status(e.code()), e.what());
  } catch (const nlohmann::json::exception& e) {
    return set_error(AF_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return set_error(AF_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(AF_ERR_INTERNAL, e.what());
  }
}

void need(const void* p, const char* what) {
  if (!p) throw Error(ErrorCode::InvalidArgument, std::string(what) + " must not be null");
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

QuadForm from_c(af_quadform q) { return QuadForm(q.alpha, q.beta, q.gamma); }
af_quadform to_c(const QuadForm& q) { return {q.alpha(), q.beta(), q.gamma()}; }

OptimizeOptions from_c(const af_options* o) {
  af_options d;
  af_options_default(&d);
  if (!o) o = &d;
  OptimizeOptions out;
  out.mesh.level = o->mesh_level;
  out.mesh.coarse_boundary = o->coarse_boundary;
  out.solver.tol = o->tol;
  out.solver.max_iter = o->max_iter;
  out.solver.continuation = o->continuation != 0;
  out.grid_n = o->grid_n;
  out.theta_tol = o->theta_tol;
  out.route = o->route == AF_ROUTE_DIRECT ? Route::Direct : Route::Sheared;
  require(out.mesh.level >= 0 && out.mesh.level <= 9, "mesh level must be in [0, 9]");
  validate(out);
  return out;
}

}  // namespace

extern "C" {

const char* af_version(void) { return "0.1.0"; }

const char* af_last_error(void) { return g_last_error.c_str(); }

void af_string_free(char* s) { std::free(s); }

void af_options_default(af_options* out) {
  if (!out) return;
  const OptimizeOptions d;
  out->mesh_level = d.mesh.level;
  out->coarse_boundary = d.mesh.coarse_boundary;
  out->tol = d.solver.tol;
  out->max_iter = d.solver.max_iter;
  out->continuation = d.solver.continuation ? 1 : 0;
  out->grid_n = d.grid_n;
  out->theta_tol = d.theta_tol;
  out->route = AF_ROUTE_SHEARED;
}

af_status af_quadform_make(double alpha, double beta, double gamma, af_quadform* out) {
  return guarded([&] {
    need(out, "out");
    *out = to_c(QuadForm(alpha, beta, gamma));
  });
}

af_status af_quadform_reflect(double alpha, double beta, double gamma, af_quadform* out) {
  return guarded([&] {
    need(out, "out");
    *out = to_c(reflect_y(alpha, beta, gamma));
  });
}

af_status af_quadform_eval(af_quadform q, double x, double y, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = eval(from_c(q), {x, y});
  });
}

af_status af_quadform_spectral(af_quadform q, double* qmin, double* qmax, double* theta) {
  return guarded([&] {
    const SpectralData s = spectral(from_c(q));
    if (qmin) *qmin = s.mu_min;
    if (qmax) *qmax = s.mu_max;
    if (theta) *theta = s.theta;
  });
}

af_status af_quadform_classify(af_quadform q, double a, af_class_tag* out) {
  return guarded([&] {
    need(out, "out");
    switch (classify(from_c(q), a)) {
      case ClassTag::InQaExact: *out = AF_CLASS_EXACT; break;
      case ClassTag::InQupperA: *out = AF_CLASS_UPPER; break;
      case ClassTag::InQnnA: *out = AF_CLASS_NN; break;
      case ClassTag::InQ0: *out = AF_CLASS_ZERO; break;
      case ClassTag::NotNormalized: *out = AF_CLASS_NOT_NORMALIZED; break;
    }
  });
}

af_status af_q_alpha(double a, double alpha, af_quadform* out) {
  return guarded([&] {
    need(out, "out");
    *out = to_c(make_q_alpha(a, alpha));
  });
}

af_status af_alpha_of_theta(double a, double theta, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = alpha_of_theta(a, theta);
  });
}

af_status af_theta_of_alpha(double a, double alpha, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = theta_of_alpha(a, alpha);
  });
}

af_status af_rotated_extremal(double a, double theta, af_quadform* out) {
  return guarded([&] {
    need(out, "out");
    *out = to_c(rotated_extremal(a, theta));
  });
}

af_status af_decompose(af_quadform q, double a, af_decomposition* out) {
  return guarded([&] {
    need(out, "out");
    const Decomposition d = decompose(from_c(q), a);
    *out = {d.b, d.alpha_param.has_value() ? 1 : 0, d.alpha_param.value_or(0.0), d.w_aniso, d.w_iso};
  });
}

af_status af_quant_upper_bound(double a, double b, double p, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = quant_upper_bound(a, b, p);
  });
}

af_status af_quant_lower_constant(double a, double b, double p, double c0, double lambda1p, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = quant_lower_constant(a, b, p, c0, lambda1p);
  });
}

af_status af_domain_from_json(const char* json, af_domain** out) {
  return guarded([&] {
    need(json, "json");
    need(out, "out");
    *out = nullptr;
    *out = new af_domain{domain_from_json(Json::parse(json))};
  });
}

af_status af_domain_to_json(const af_domain* d, char** out) {
  return guarded([&] {
    need(d, "domain");
    need(out, "out");
    *out = dup_string(dump_json(to_json(d->spec)));
  });
}

af_status af_domain_area(const af_domain* d, double* out) {
  return guarded([&] {
    need(d, "domain");
    need(out, "out");
    *out = area(d->spec);
  });
}

void af_domain_free(af_domain* d) { delete d; }

af_status af_mesh_build(const af_domain* d, const af_options* opts, af_mesh** out) {
  return guarded([&] {
    need(d, "domain");
    need(out, "out");
    *out = nullptr;
    const OptimizeOptions o = from_c(opts);
    *out = new af_mesh{build_mesh(d->spec, o.mesh), o.mesh.level};
  });
}

af_status af_mesh_counts(const af_mesh* m, size_t* nodes, size_t* triangles, size_t* boundary_nodes) {
  return guarded([&] {
    need(m, "mesh");
    if (nodes) *nodes = m->mesh.node_count();
    if (triangles) *triangles = m->mesh.triangle_count();
    if (boundary_nodes) *boundary_nodes = m->mesh.boundary_node_count();
  });
}

af_status af_mesh_write_csv(const af_mesh* m, const char* nodes_path, const char* triangles_path) {
  return guarded([&] {
    need(m, "mesh");
    if (nodes_path) write_atomic(nodes_path, nodes_csv(m->mesh));
    if (triangles_path) write_atomic(triangles_path, triangles_csv(m->mesh));
  });
}

void af_mesh_free(af_mesh* m) { delete m; }

af_status af_solve(const af_mesh* m, af_quadform q, double p, const af_options* opts, af_eigen** out) {
  return guarded([&] {
    need(m, "mesh");
    need(out, "out");
    *out = nullptr;
    const OptimizeOptions o = from_c(opts);
    *out = new af_eigen{solve(m->mesh, from_c(q), p, o.solver), m->mesh.nodes(), to_json(o.solver), m->level};
  });
}

af_status af_directional(const af_mesh* m, double p, af_axis axis, const af_options* opts, af_eigen** out) {
  return guarded([&] {
    need(m, "mesh");
    need(out, "out");
    *out = nullptr;
    const OptimizeOptions o = from_c(opts);
    const Axis ax = axis == AF_AXIS_Y ? Axis::Y : Axis::X;
    *out = new af_eigen{directional_constant(m->mesh, p, ax, o.solver), m->mesh.nodes(), to_json(o.solver), m->level};
  });
}

af_status af_eigen_lambda(const af_eigen* e, double* lambda, double* residual, int* iterations) {
  return guarded([&] {
    need(e, "eigen");
    if (lambda) *lambda = e->result.lambda;
    if (residual) *residual = e->result.residual;
    if (iterations) *iterations = e->result.iterations;
  });
}

af_status af_eigen_values(const af_eigen* e, const double** u, size_t* n) {
  return guarded([&] {
    need(e, "eigen");
    if (u) *u = e->result.u.data();
    if (n) *n = e->result.u.size();
  });
}

af_status af_eigen_json(const af_eigen* e, char** out) {
  return guarded([&] {
    need(e, "eigen");
    need(out, "out");
    Json j = to_json(e->result);
    j["mesh_level"] = e->level;
    j["node_count"] = e->nodes.size();
    j["options"] = e->options;
    *out = dup_string(dump_json(j));
  });
}

af_status af_eigen_write_csv(const af_eigen* e, const char* path) {
  return guarded([&] {
    need(e, "eigen");
    need(path, "path");
    std::string csv = "x,y,u\n";
    for (std::size_t i = 0; i < e->nodes.size(); ++i)
      csv += format_number(e->nodes[i].x) + ',' + format_number(e->nodes[i].y) + ',' +
             format_number(e->result.u[i]) + '\n';
    write_atomic(path, csv);
  });
}

void af_eigen_free(af_eigen* e) { delete e; }

af_status af_two_routes(const af_domain* d, double a, double theta, double p, const af_options* opts,
                        double* anisotropic, double* sheared, double* residual) {
  return guarded([&] {
    need(d, "domain");
    const OptimizeOptions o = from_c(opts);
    const TwoRoutes r = lambda_anisotropic_two_routes(d->spec, a, theta, p, o.mesh, o.solver);
    if (anisotropic) *anisotropic = r.anisotropic;
    if (sheared) *sheared = r.sheared;
    if (residual) *residual = r.residual;
  });
}

af_status af_lambda_at_theta(const af_domain* d, double a, double theta, double p, const af_options* opts,
                             double* lambda, double* residual) {
  return guarded([&] {
    need(d, "domain");
    require(a > 0.0 && a <= 1.0, "a must lie in (0, 1]");
    const EigenResult r = lambda_at_theta(d->spec, a, theta, p, from_c(opts));
    if (lambda) *lambda = r.lambda;
    if (residual) *residual = r.residual;
  });
}

af_status af_directional_min(const af_domain* d, double p, af_axis axis, const af_options* opts, double* value,
                             double* theta) {
  return guarded([&] {
    need(d, "domain");
    const DirectionalMin r = directional_min(d->spec, p, axis == AF_AXIS_Y ? Axis::Y : Axis::X, from_c(opts));
    if (value) *value = r.value;
    if (theta) *theta = r.theta;
  });
}

af_status af_lambda_max(const af_domain* d, double a, double p, const af_options* opts, double* lambda) {
  return guarded([&] {
    need(d, "domain");
    need(lambda, "lambda");
    const OptimizeOptions o = from_c(opts);
    *lambda = lambda_max(d->spec, a, p, o.mesh, o.solver).lambda;
  });
}

af_status af_lambda_min(const af_domain* d, double a, double p, const af_options* opts, af_optimize** out) {
  return guarded([&] {
    need(d, "domain");
    need(out, "out");
    *out = nullptr;
    const OptimizeOptions o = from_c(opts);
    *out = new af_optimize{lambda_min(d->spec, a, p, o), to_json(o)};
  });
}

af_status af_optimize_values(const af_optimize* r, double* lambda_min, double* lambda_max, double* theta_star,
                             double* alpha_star) {
  return guarded([&] {
    need(r, "result");
    if (lambda_min) *lambda_min = r->result.lambda_min;
    if (lambda_max) *lambda_max = r->result.lambda_max;
    if (theta_star) *theta_star = r->result.theta_star;
    if (alpha_star) *alpha_star = r->result.alpha_star;
  });
}

af_status af_optimize_extremizer(const af_optimize* r, af_quadform* out) {
  return guarded([&] {
    need(r, "result");
    need(out, "out");
    *out = to_c(r->result.extremizer);
  });
}

af_status af_optimize_flags(const af_optimize* r, int* flat, int* multiplicity) {
  return guarded([&] {
    need(r, "result");
    if (flat) *flat = r->result.flat_disk_flag ? 1 : 0;
    if (multiplicity) *multiplicity = r->result.multiplicity_warning ? 1 : 0;
  });
}

af_status af_optimize_json(const af_optimize* r, char** out) {
  return guarded([&] {
    need(r, "result");
    need(out, "out");
    Json j = to_json(r->result);
    j["options"] = r->options;
    *out = dup_string(dump_json(j));
  });
}

af_status af_optimize_write_profile_csv(const af_optimize* r, const char* path) {
  return guarded([&] {
    need(r, "result");
    need(path, "path");
    write_atomic(path, profile_csv(r->result.theta_profile));
  });
}

void af_optimize_free(af_optimize* r) { delete r; }

af_status af_verify(const char* config_json, af_report** out) {
  return guarded([&] {
    need(config_json, "config");
    need(out, "out");
    *out = nullptr;
    const Json j = Json::parse(config_json);
    require(j.is_object(), "verify config must be a JSON object");
    SuiteConfig c;
    if (j.contains("domain")) c.domain = domain_from_json(j.at("domain"));
    c.a = j.value("a", c.a);
    c.p = j.value("p", c.p);
    if (j.contains("b") && !j.at("b").is_null()) c.b = j.at("b").get<double>();
    c.n_samples = j.value("n_samples", c.n_samples);
    c.n_pairs = j.value("n_pairs", c.n_pairs);
    c.seed = j.value("seed", c.seed);
    c.opts.mesh.level = j.value("level", 4);
    c.opts.grid_n = j.value("grid_n", c.opts.grid_n);
    c.opts.solver.tol = j.value("tol", c.opts.solver.tol);
    require(c.p > 1.0, "p must be > 1");
    require(c.a > 0.0 && c.a < 1.0, "verification needs a in (0, 1)");
    require(c.opts.mesh.level >= 2 && c.opts.mesh.level <= 9, "level must be in [2, 9]");
    Json echo = {{"domain", to_json(c.domain)}, {"a", c.a}, {"p", c.p}, {"b", c.b ? Json(*c.b) : Json()},
                 {"level", c.opts.mesh.level}, {"grid_n", c.opts.grid_n}, {"tol", c.opts.solver.tol},
                 {"seed", c.seed}, {"n_samples", c.n_samples}, {"n_pairs", c.n_pairs}};
    *out = new af_report{run_verification_suite(c), std::move(echo)};
  });
}

af_status af_report_passed(const af_report* r, int* passed) {
  return guarded([&] {
    need(r, "report");
    need(passed, "passed");
    *passed = r->report.passed() ? 1 : 0;
  });
}

af_status af_report_json(const af_report* r, char** out) {
  return guarded([&] {
    need(r, "report");
    need(out, "out");
    Json j = {{"config", r->config}};
    const Json body = to_json(r->report);
    for (const auto& [k, v] : body.items()) j[k] = v;
    *out = dup_string(dump_json(j));
  });
}

void af_report_free(af_report* r) { delete r; }

af_status af_envelope(const char* payload_json, int with_timestamp, char** out) {
  return guarded([&] {
    need(payload_json, "payload");
    need(out, "out");
    *out = dup_string(dump_json(envelope(Json::parse(payload_json), with_timestamp ? utc_timestamp() : "")) + "\n");
  });
}

af_status af_write_file(const char* path, const char* content) {
  return guarded([&] {
    need(path, "path");
    need(content, "content");
    write_atomic(path, content);
  });
}

}  // extern "C"
