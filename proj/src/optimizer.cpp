#include "anisofreq/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <limits>
#include <optional>

namespace anisofreq {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2;

double grid_theta(int k, int n) { return kHalfPi * k / (n - 1); }

}  // namespace

void validate(const OptimizeOptions& opts) {
  require(opts.grid_n >= 9, "theta grid needs at least 9 points");
  require(opts.theta_tol > 0.0, "theta tolerance must be > 0");
  require(opts.flat_tolerance > 0.0, "flat tolerance must be > 0");
  validate(opts.solver);
}

MaxResult lambda_max(const DomainSpec& d, double a, double p, const MeshOptions& mesh, const SolverOptions& opts) {
  require(a >= 0.0 && a < 1.0, "lambda_max needs a in [0, 1)");
  const EigenResult r = solve(build_mesh(d, mesh), QuadForm::identity(), p, opts);
  return {r.lambda, QuadForm::identity(), r.residual};
}

EigenResult lambda_at_theta(const DomainSpec& d, double a, double theta, double p, const OptimizeOptions& opts,
                            const Mesh* fixed_mesh) {
  if (opts.route == Route::Direct) {
    const QuadForm q = rotated_extremal(a, theta);
    if (fixed_mesh) return solve(*fixed_mesh, q, p, opts.solver);
    return solve(build_mesh(d, opts.mesh), q, p, opts.solver);
  }
  EigenResult r = solve(build_mesh(shear_y(rotate(d, theta), a), opts.mesh), GradientMetric::identity(), p,
                        opts.solver);
  r.lambda *= std::pow(a, 0.5 * p);
  return r;
}

OptimizeResult lambda_min(const DomainSpec& d, double a, double p, const OptimizeOptions& opts) {
  require(a > 0.0 && a < 1.0, "lambda_min needs a in (0, 1)");
  validate(opts);
  validate(d);

  std::optional<Mesh> fixed;
  if (opts.route == Route::Direct) fixed.emplace(build_mesh(d, opts.mesh));
  const Mesh* fixed_ptr = fixed ? &*fixed : nullptr;

  OptimizeResult out;
  out.a = a;
  out.p = p;
  out.mesh_level = opts.mesh.level;

  auto sample = [&](double theta) {
    const EigenResult r = lambda_at_theta(d, a, theta, p, opts, fixed_ptr);
    out.residual = std::max(out.residual, r.residual);
    return r.lambda;
  };

  const int n = opts.grid_n;
  for (int k = 0; k < n; ++k) {
    const double theta = grid_theta(k, n);
    out.theta_profile.push_back({theta, sample(theta)});
  }

  const auto& prof = out.theta_profile;
  double lo = prof[0].lambda, hi = prof[0].lambda, mean = 0.0;
  for (const auto& s : prof) {
    lo = std::min(lo, s.lambda);
    hi = std::max(hi, s.lambda);
    mean += s.lambda / n;
  }
  out.relative_spread = (hi - lo) / mean;
  out.flat_disk_flag = out.relative_spread < opts.flat_tolerance;

  // Grid points tying the best value within twice the solver residual,
  // grouped into runs of consecutive indices.
  const double tie = lo * (1.0 + 2.0 * out.residual) + 1e-15 * lo;
  std::vector<std::pair<int, int>> runs;
  for (int k = 0; k < n; ++k) {
    if (prof[k].lambda > tie) continue;
    if (!runs.empty() && runs.back().second == k - 1)
      runs.back().second = k;
    else
      runs.emplace_back(k, k);
  }
  out.multiplicity_warning = runs.size() > 1 || runs.front().first != runs.front().second;

  double best_lambda = lo;
  double best_theta = prof[runs.front().first].theta;
  for (const auto& [first, last] : runs) {
    if (first != last) {
      // A plateau: nothing left to resolve inside it.
      for (int k = first; k <= last; ++k) out.minimizers.push_back(prof[k].theta);
      continue;
    }
    const int k = first;
    double left = prof[std::max(0, k - 1)].theta, right = prof[std::min(n - 1, k + 1)].theta;
    double run_theta = prof[k].theta, run_lambda = prof[k].lambda;
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = right - invphi * (right - left), dd = left + invphi * (right - left);
    double fc = sample(c), fd = sample(dd);
    out.refinement.push_back({c, fc});
    out.refinement.push_back({dd, fd});
    while (right - left > opts.theta_tol) {
      if (fc <= fd) {
        right = dd;
        dd = c;
        fd = fc;
        c = right - invphi * (right - left);
        fc = sample(c);
        out.refinement.push_back({c, fc});
      } else {
        left = c;
        c = dd;
        fc = fd;
        dd = left + invphi * (right - left);
        fd = sample(dd);
        out.refinement.push_back({dd, fd});
      }
    }
    for (const auto& [t, l] : {ProfileSample{c, fc}, ProfileSample{dd, fd}}) {
      if (l < run_lambda) {
        run_lambda = l;
        run_theta = t;
      }
    }
    out.minimizers.push_back(run_theta);
    if (run_lambda < best_lambda) {
      best_lambda = run_lambda;
      best_theta = run_theta;
    }
  }

  out.lambda_min = best_lambda;
  out.theta_star = best_theta;
  out.alpha_star = alpha_of_theta(a, best_theta);
  out.extremizer = make_q_alpha(a, out.alpha_star);

  const MaxResult mx = lambda_max(d, a, p, opts.mesh, opts.solver);
  out.lambda_max = mx.lambda;
  out.residual = std::max(out.residual, mx.residual);
  return out;
}

DirectionalMin directional_min(const DomainSpec& d, double p, Axis axis, const OptimizeOptions& opts) {
  validate(opts);
  DirectionalMin out{std::numeric_limits<double>::infinity(), 0.0, 0.0, {}};
  for (int k = 0; k < opts.grid_n; ++k) {
    const double theta = grid_theta(k, opts.grid_n);
    const EigenResult r = directional_constant(build_mesh(rotate(d, theta), opts.mesh), p, axis, opts.solver);
    out.profile.push_back({theta, r.lambda});
    out.residual = std::max(out.residual, r.residual);
    if (r.lambda < out.value) {
      out.value = r.lambda;
      out.theta = theta;
    }
  }
  return out;
}

}  // namespace anisofreq
