#pragma once

#include <vector>

#include "anisofreq/geometry.hpp"
#include "anisofreq/mesh.hpp"
#include "anisofreq/quadform.hpp"
#include "anisofreq/solver.hpp"

namespace anisofreq {

/// How lambda^{Q_a o R_theta^T}(Omega) is evaluated for one theta.
enum class Route {
  /// a^{p/2} lambda_{1,p} of the sheared rotated domain, meshed afresh.
  Sheared,
  /// The rotated extremal form on one fixed mesh of Omega. All samples share
  /// a discretization, so discrete inequalities between them are exact.
  Direct,
};

struct OptimizeOptions {
  int grid_n = 17;
  double theta_tol = 1e-4;
  /// Relative spread of the theta profile under which it counts as flat.
  double flat_tolerance = 1e-2;
  Route route = Route::Sheared;
  MeshOptions mesh;
  SolverOptions solver;
};

void validate(const OptimizeOptions& opts);

struct ProfileSample {
  double theta;
  double lambda;
};

struct OptimizeResult {
  double a = 0.0;
  double p = 2.0;
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  double theta_star = 0.0;
  double alpha_star = 0.0;
  QuadForm extremizer = QuadForm::identity();
  /// Uniform grid samples over [0, pi/2].
  std::vector<ProfileSample> theta_profile;
  /// Extra samples taken by the golden-section stage.
  std::vector<ProfileSample> refinement;
  /// One refined angle per grid minimum that ties the best value (several
  /// entries signal multiplicity).
  std::vector<double> minimizers;
  /// (max - min) / mean over the grid profile.
  double relative_spread = 0.0;
  bool flat_disk_flag = false;
  bool multiplicity_warning = false;
  double residual = 0.0;
  int mesh_level = 0;
};

struct MaxResult {
  double lambda;
  QuadForm form;
  double residual;
};

/// The supremum over the class is the isotropic value, attained only by |.|^2.
MaxResult lambda_max(const DomainSpec& d, double a, double p, const MeshOptions& mesh, const SolverOptions& opts);

/// lambda^{Q_a o R_theta^T}(Omega) for one theta, via the chosen route.
EigenResult lambda_at_theta(const DomainSpec& d, double a, double theta, double p, const OptimizeOptions& opts,
                            const Mesh* fixed_mesh = nullptr);

/// Minimizes over the class by a theta grid plus golden-section refinement.
OptimizeResult lambda_min(const DomainSpec& d, double a, double p, const OptimizeOptions& opts);

struct DirectionalMin {
  double value;
  double theta;
  double residual;
  std::vector<ProfileSample> profile;
};

/// min over the theta grid of the directional constant of the rotated domain.
DirectionalMin directional_min(const DomainSpec& d, double p, Axis axis, const OptimizeOptions& opts);

}  // namespace anisofreq
