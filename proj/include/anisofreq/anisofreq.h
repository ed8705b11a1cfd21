/* C interface to the anisofreq library.
 *
 * Every call returns an af_status. On failure the thread-local message from
 * af_last_error() describes the cause. Handles are opaque and owned by the
 * caller, who releases them with the matching *_free function. Strings
 * returned through char** are released with af_string_free.
 */
#ifndef ANISOFREQ_H
#define ANISOFREQ_H

#include <stddef.h>
#include <stdint.h>

#if defined(ANISOFREQ_BUILDING)
#define AF_API __attribute__((visibility("default")))
#else
#define AF_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum af_status {
  AF_OK = 0,
  AF_ERR_INVALID_ARGUMENT = 1,
  AF_ERR_NEGATIVE_CROSS_TERM = 2,
  AF_ERR_CLASS_MEMBERSHIP = 3,
  AF_ERR_MESH = 4,
  AF_ERR_CONVERGENCE = 5,
  AF_ERR_IO = 6,
  AF_ERR_INTERNAL = 7
} af_status;

typedef enum af_class_tag {
  AF_CLASS_EXACT = 0,          /* Q_max = 1, Q_min = a */
  AF_CLASS_UPPER = 1,          /* Q_max = 1, Q_min >= a */
  AF_CLASS_NN = 2,             /* a Q_max <= Q_min, not normalized */
  AF_CLASS_ZERO = 3,           /* Q_max = 1 only */
  AF_CLASS_NOT_NORMALIZED = 4
} af_class_tag;

typedef enum af_axis { AF_AXIS_X = 0, AF_AXIS_Y = 1 } af_axis;
typedef enum af_route { AF_ROUTE_SHEARED = 0, AF_ROUTE_DIRECT = 1 } af_route;

/* alpha x^2 + 2 beta x y + gamma y^2 with beta >= 0. */
typedef struct af_quadform {
  double alpha;
  double beta;
  double gamma;
} af_quadform;

typedef struct af_decomposition {
  double b;
  int has_alpha;
  double alpha;
  double w_aniso;
  double w_iso;
} af_decomposition;

typedef struct af_options {
  int mesh_level;
  int coarse_boundary;
  double tol;
  int max_iter;
  int continuation;
  int grid_n;
  double theta_tol;
  af_route route;
} af_options;

typedef struct af_domain af_domain;
typedef struct af_mesh af_mesh;
typedef struct af_eigen af_eigen;
typedef struct af_optimize af_optimize;
typedef struct af_report af_report;

AF_API const char* af_version(void);
AF_API const char* af_last_error(void);
AF_API void af_string_free(char* s);
AF_API void af_options_default(af_options* out);

/* Quadratic forms. */
AF_API af_status af_quadform_make(double alpha, double beta, double gamma, af_quadform* out);
/* Accepts beta < 0 by reflecting y. */
AF_API af_status af_quadform_reflect(double alpha, double beta, double gamma, af_quadform* out);
AF_API af_status af_quadform_eval(af_quadform q, double x, double y, double* out);
AF_API af_status af_quadform_spectral(af_quadform q, double* qmin, double* qmax, double* theta);
AF_API af_status af_quadform_classify(af_quadform q, double a, af_class_tag* out);
AF_API af_status af_q_alpha(double a, double alpha, af_quadform* out);
AF_API af_status af_alpha_of_theta(double a, double theta, double* out);
AF_API af_status af_theta_of_alpha(double a, double alpha, double* out);
AF_API af_status af_rotated_extremal(double a, double theta, af_quadform* out);
AF_API af_status af_decompose(af_quadform q, double a, af_decomposition* out);
AF_API af_status af_quant_upper_bound(double a, double b, double p, double* out);
AF_API af_status af_quant_lower_constant(double a, double b, double p, double c0, double lambda1p, double* out);

/* Domains, from JSON such as {"type":"square"} or {"type":"disk","radius":1}. */
AF_API af_status af_domain_from_json(const char* json, af_domain** out);
AF_API af_status af_domain_to_json(const af_domain* d, char** out);
AF_API af_status af_domain_area(const af_domain* d, double* out);
AF_API void af_domain_free(af_domain* d);

/* Meshes. */
AF_API af_status af_mesh_build(const af_domain* d, const af_options* opts, af_mesh** out);
AF_API af_status af_mesh_counts(const af_mesh* m, size_t* nodes, size_t* triangles, size_t* boundary_nodes);
AF_API af_status af_mesh_write_csv(const af_mesh* m, const char* nodes_path, const char* triangles_path);
AF_API void af_mesh_free(af_mesh* m);

/* Principal eigenpairs. The result keeps a copy of the node coordinates. */
AF_API af_status af_solve(const af_mesh* m, af_quadform q, double p, const af_options* opts, af_eigen** out);
AF_API af_status af_directional(const af_mesh* m, double p, af_axis axis, const af_options* opts, af_eigen** out);
AF_API af_status af_eigen_lambda(const af_eigen* e, double* lambda, double* residual, int* iterations);
AF_API af_status af_eigen_values(const af_eigen* e, const double** u, size_t* n);
AF_API af_status af_eigen_json(const af_eigen* e, char** out);
AF_API af_status af_eigen_write_csv(const af_eigen* e, const char* path);
AF_API void af_eigen_free(af_eigen* e);

/* Anisotropic value for the rotated extremal form, both ways. */
AF_API af_status af_two_routes(const af_domain* d, double a, double theta, double p, const af_options* opts,
                               double* anisotropic, double* sheared, double* residual);
AF_API af_status af_lambda_at_theta(const af_domain* d, double a, double theta, double p, const af_options* opts,
                                    double* lambda, double* residual);

/* Smallest directional constant over rotations on the theta grid. */
AF_API af_status af_directional_min(const af_domain* d, double p, af_axis axis, const af_options* opts, double* value,
                                    double* theta);

/* Extremal values over the class. */
AF_API af_status af_lambda_max(const af_domain* d, double a, double p, const af_options* opts, double* lambda);
AF_API af_status af_lambda_min(const af_domain* d, double a, double p, const af_options* opts, af_optimize** out);
AF_API af_status af_optimize_values(const af_optimize* r, double* lambda_min, double* lambda_max, double* theta_star,
                                    double* alpha_star);
AF_API af_status af_optimize_extremizer(const af_optimize* r, af_quadform* out);
AF_API af_status af_optimize_flags(const af_optimize* r, int* flat, int* multiplicity);
AF_API af_status af_optimize_json(const af_optimize* r, char** out);
AF_API af_status af_optimize_write_profile_csv(const af_optimize* r, const char* path);
AF_API void af_optimize_free(af_optimize* r);

/* Verification suite. The config is a JSON object with optional fields
 * domain, a, p, b, level, grid_n, tol, seed, n_samples, n_pairs. */
AF_API af_status af_verify(const char* config_json, af_report** out);
AF_API af_status af_report_passed(const af_report* r, int* passed);
AF_API af_status af_report_json(const af_report* r, char** out);
AF_API void af_report_free(af_report* r);

/* Wraps a JSON payload as {"schema_version", "timestamp", "payload"} and
 * reformats numbers to 17 significant digits. */
AF_API af_status af_envelope(const char* payload_json, int with_timestamp, char** out);
/* Writes through a temporary file and a rename. */
AF_API af_status af_write_file(const char* path, const char* content);

#ifdef __cplusplus
}
#endif

#endif
