#pragma once

#include <cstdint>
#include <vector>

#include "anisofreq/error.hpp"
#include "anisofreq/mesh.hpp"
#include "anisofreq/quadform.hpp"

namespace anisofreq {

enum class StepRule { Fixed, Backtracking };

struct SolverOptions {
  /// Stop once the relative change of lambda stays below tol.
  double tol = 1e-9;
  int max_iter = 20000;
  /// Warm-start p != 2 from the p = 2 ground state and walk p geometrically.
  bool continuation = true;
  StepRule step_rule = StepRule::Backtracking;
  int continuation_stages = 6;
  /// Width of the block used by the p = 2 inverse subspace iteration.
  int block_size = 6;
};

void validate(const SolverOptions& opts);

struct EigenResult {
  double lambda = 0.0;
  /// Nodal values on the whole mesh: nonnegative, zero on the boundary, unit
  /// discrete p-norm.
  std::vector<double> u;
  int iterations = 0;
  /// Relative change of lambda over the final iteration.
  double residual = 0.0;
  double p = 2.0;
  GradientMetric form;
};

/// Raised when max_iter is exhausted; carries the best iterate found.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, EigenResult best)
      : Error(ErrorCode::Convergence, what), best_(std::move(best)) {}
  const EigenResult& best() const { return best_; }

 private:
  EigenResult best_;
};

/// sum_T |T| Q(grad u|_T)^{p/2}; u holds one value per mesh node. Boundary
/// values are used as given.
double energy(const Mesh& m, const GradientMetric& form, double p, const std::vector<double>& u);
double energy(const Mesh& m, const QuadForm& form, double p, const std::vector<double>& u);

/// Discrete integral of |u|^p: three-point edge-midpoint rule per triangle
/// applied to the linear interpolant.
double pnorm_pow(const Mesh& m, double p, const std::vector<double>& u);

double rayleigh_quotient(const Mesh& m, const GradientMetric& form, double p, const std::vector<double>& u);

/// Gradient of the Rayleigh quotient with respect to the interior nodal
/// values (in DofMap order), evaluated at the interior vector x.
std::vector<double> rayleigh_gradient(const Mesh& m, const DofMap& dofs, const GradientMetric& form, double p,
                                      const std::vector<double>& x);

/// Smallest eigenpair of K u = lambda M u on the interior nodes.
EigenResult solve_p2(const Mesh& m, const GradientMetric& form, const SolverOptions& opts = {});
EigenResult solve_p2(const Mesh& m, const QuadForm& form, const SolverOptions& opts = {});

/// Minimizes the discrete Rayleigh quotient energy / ||u||_p^p over
/// nonnegative zero-trace functions. `initial` (one value per mesh node)
/// replaces the default start when non-empty.
EigenResult solve_p(const Mesh& m, const GradientMetric& form, double p, const SolverOptions& opts = {},
                    const std::vector<double>& initial = {});
EigenResult solve_p(const Mesh& m, const QuadForm& form, double p, const SolverOptions& opts = {},
                    const std::vector<double>& initial = {});

/// solve_p2 for p == 2, solve_p otherwise.
EigenResult solve(const Mesh& m, const GradientMetric& form, double p, const SolverOptions& opts = {});
EigenResult solve(const Mesh& m, const QuadForm& form, double p, const SolverOptions& opts = {});

/// Deterministic positive nodal start vector (zero on the boundary).
std::vector<double> random_positive_guess(const Mesh& m, std::uint64_t seed);

enum class Axis { X, Y };

/// inf |D_axis u|^p / ||u||_p^p over discrete zero-trace functions.
EigenResult directional_constant(const Mesh& m, double p, Axis axis, const SolverOptions& opts = {});

struct TwoRoutes {
  /// Q_a on the rotated domain.
  double anisotropic;
  /// a^{p/2} times the isotropic value on the sheared rotated domain.
  double sheared;
  double residual;
};

TwoRoutes lambda_anisotropic_two_routes(const DomainSpec& d, double a, double theta, double p,
                                        const MeshOptions& mesh_opts, const SolverOptions& opts = {});

}  // namespace anisofreq
