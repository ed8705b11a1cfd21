#include "anisofreq/solver.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <sstream>

#include "anisofreq/random.hpp"

namespace anisofreq {

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Vec = Eigen::VectorXd;

/// Floor inside Q(grad u)^{(p-2)/2} for p < 2.
constexpr double kGradientFloor = 1e-12;

void require_p(double p) { require(std::isfinite(p) && p > 1.0, "p must be > 1"); }

/// Energy and p-norm of a nodal field together with their gradients with
/// respect to the interior values.
class Functional {
 public:
  Functional(const Mesh& m, const DofMap& dofs, const GradientMetric& form, double p)
      : mesh_(m), dofs_(dofs), form_(form), p_(p), full_(m.node_count(), 0.0) {}

  std::size_t size() const { return dofs_.size(); }

  void scatter(const Vec& x) {
    for (std::size_t i = 0; i < dofs_.size(); ++i) full_[dofs_.dof_to_node[i]] = x[static_cast<Eigen::Index>(i)];
  }

  std::vector<double> to_nodal(const Vec& x) {
    scatter(x);
    return full_;
  }

  double energy(const Vec& x) {
    scatter(x);
    return anisofreq::energy(mesh_, form_, p_, full_);
  }
  double norm_pow(const Vec& x) {
    scatter(x);
    return pnorm_pow(mesh_, p_, full_);
  }
  double quotient(const Vec& x) {
    scatter(x);
    return anisofreq::energy(mesh_, form_, p_, full_) / pnorm_pow(mesh_, p_, full_);
  }

  /// Accumulates d(energy) and d(norm^p) into grad_e, grad_n.
  void gradients(const Vec& x, Vec& grad_e, Vec& grad_n) {
    scatter(x);
    grad_e.setZero(static_cast<Eigen::Index>(size()));
    grad_n.setZero(static_cast<Eigen::Index>(size()));
    const auto& tris = mesh_.triangles();
    for (std::size_t t = 0; t < tris.size(); ++t) {
      const auto& tri = tris[t];
      const auto& g = mesh_.grad_map(t);
      const double area = mesh_.tri_area(t);
      const double u0 = full_[tri[0]], u1 = full_[tri[1]], u2 = full_[tri[2]];
      const Vec2 grad = u0 * g[0] + u1 * g[1] + u2 * g[2];
      const double q = form_(grad);
      double w = p_ == 2.0 ? 1.0 : std::pow(std::max(q, kGradientFloor), 0.5 * (p_ - 2.0));
      if (p_ > 2.0 && q == 0.0) w = 0.0;
      const Vec2 mg{form_.m11 * grad.x + form_.m12 * grad.y, form_.m12 * grad.x + form_.m22 * grad.y};
      const double scale = p_ * area * w;
      // Edge midpoints (u0+u1)/2, (u1+u2)/2, (u2+u0)/2 with weight area/3.
      const double m01 = 0.5 * (u0 + u1), m12 = 0.5 * (u1 + u2), m20 = 0.5 * (u2 + u0);
      auto dpow = [this](double v) { return std::copysign(std::pow(std::abs(v), p_ - 1.0), v); };
      const double c = p_ * area / 6.0;
      const double d01 = dpow(m01), d12 = dpow(m12), d20 = dpow(m20);
      const double dn[3] = {c * (d01 + d20), c * (d01 + d12), c * (d12 + d20)};
      for (int k = 0; k < 3; ++k) {
        const int dof = dofs_.node_to_dof[tri[k]];
        if (dof < 0) continue;
        grad_e[dof] += scale * dot(mg, g[k]);
        grad_n[dof] += dn[k];
      }
    }
  }

 private:
  const Mesh& mesh_;
  const DofMap& dofs_;
  GradientMetric form_;
  double p_;
  std::vector<double> full_;
};

SpMat assemble_stiffness(const Mesh& m, const DofMap& dofs, const GradientMetric& form) {
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(m.triangle_count() * 9);
  for (std::size_t t = 0; t < m.triangle_count(); ++t) {
    const auto& tri = m.triangles()[t];
    const auto& g = m.grad_map(t);
    const double area = m.tri_area(t);
    for (int i = 0; i < 3; ++i) {
      const int di = dofs.node_to_dof[tri[i]];
      if (di < 0) continue;
      const Vec2 mg{form.m11 * g[i].x + form.m12 * g[i].y, form.m12 * g[i].x + form.m22 * g[i].y};
      for (int j = 0; j < 3; ++j) {
        const int dj = dofs.node_to_dof[tri[j]];
        if (dj < 0) continue;
        trip.emplace_back(di, dj, area * dot(mg, g[j]));
      }
    }
  }
  const auto n = static_cast<Eigen::Index>(dofs.size());
  SpMat k(n, n);
  k.setFromTriplets(trip.begin(), trip.end());
  return k;
}

SpMat assemble_mass(const Mesh& m, const DofMap& dofs) {
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(m.triangle_count() * 9);
  for (std::size_t t = 0; t < m.triangle_count(); ++t) {
    const auto& tri = m.triangles()[t];
    const double area = m.tri_area(t);
    for (int i = 0; i < 3; ++i) {
      const int di = dofs.node_to_dof[tri[i]];
      if (di < 0) continue;
      for (int j = 0; j < 3; ++j) {
        const int dj = dofs.node_to_dof[tri[j]];
        if (dj < 0) continue;
        trip.emplace_back(di, dj, area / 12.0 * (i == j ? 2.0 : 1.0));
      }
    }
  }
  const auto n = static_cast<Eigen::Index>(dofs.size());
  SpMat mass(n, n);
  mass.setFromTriplets(trip.begin(), trip.end());
  return mass;
}

using Factorization = Eigen::SimplicialLDLT<SpMat>;

std::unique_ptr<Factorization> factorize(const SpMat& k) {
  auto f = std::make_unique<Factorization>(k);
  require(f->info() == Eigen::Success, "stiffness factorization failed", ErrorCode::Convergence);
  // A form with a zero direction can leave K singular on unlucky meshes.
  require(f->vectorD().minCoeff() > 0.0, "stiffness matrix is not positive definite", ErrorCode::Convergence);
  return f;
}

Vec gather(const DofMap& dofs, const std::vector<double>& nodal) {
  Vec x(static_cast<Eigen::Index>(dofs.size()));
  for (std::size_t i = 0; i < dofs.size(); ++i) x[static_cast<Eigen::Index>(i)] = nodal[dofs.dof_to_node[i]];
  return x;
}

/// Nonnegative representative with unit discrete p-norm.
void retract(Functional& f, double p, Vec& x) {
  x = x.cwiseAbs();
  x /= std::pow(f.norm_pow(x), 1.0 / p);
}

EigenResult finish(Functional& f, const Vec& x_in, double p, const GradientMetric& form, int iterations,
                   double residual) {
  Vec x = x_in;
  if (x.sum() < 0.0) x = -x;
  retract(f, p, x);
  EigenResult r;
  r.u = f.to_nodal(x);
  r.lambda = f.quotient(x);
  r.iterations = iterations;
  r.residual = residual;
  r.p = p;
  r.form = form;
  return r;
}

/// Inverse subspace iteration with Rayleigh-Ritz on a small block; the block
/// keeps the rate at lambda_1 / lambda_{b+1} on elongated domains where the
/// spectral gap is small.
EigenResult inverse_iteration(const Mesh& m, const DofMap& dofs, const GradientMetric& form,
                              const SolverOptions& opts) {
  const SpMat k = assemble_stiffness(m, dofs, form);
  const SpMat mass = assemble_mass(m, dofs);
  const auto solver = factorize(k);

  const auto n = static_cast<Eigen::Index>(dofs.size());
  const Eigen::Index b = std::min<Eigen::Index>(opts.block_size, n);
  Eigen::MatrixXd x(n, b);
  SplitMix64 rng(0x5eed);
  x.col(0).setOnes();
  for (Eigen::Index j = 1; j < b; ++j)
    for (Eigen::Index i = 0; i < n; ++i) x(i, j) = rng.uniform() - 0.5;

  Functional f(m, dofs, form, 2.0);
  double lambda = std::numeric_limits<double>::infinity();
  double residual = std::numeric_limits<double>::infinity();
  for (int it = 1; it <= opts.max_iter; ++it) {
    const Eigen::MatrixXd y = solver->solve(mass * x);
    const Eigen::MatrixXd ky = k * y;
    const Eigen::MatrixXd my = mass * y;
    Eigen::MatrixXd kr = y.transpose() * ky;
    Eigen::MatrixXd mr = y.transpose() * my;
    kr = 0.5 * (kr + kr.transpose()).eval();
    mr = 0.5 * (mr + mr.transpose()).eval();
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ritz(kr, mr);
    require(ritz.info() == Eigen::Success, "Rayleigh-Ritz step failed", ErrorCode::Convergence);
    x = y * ritz.eigenvectors();
    const double next = ritz.eigenvalues()[0];
    residual = std::abs(lambda - next) / next;
    lambda = next;
    if (residual < opts.tol) return finish(f, x.col(0), 2.0, form, it, residual);
  }
  std::ostringstream msg;
  msg << "inverse iteration did not converge in " << opts.max_iter << " iterations";
  throw ConvergenceError(msg.str(), finish(f, x.col(0), 2.0, form, opts.max_iter, residual));
}

struct DescentOutcome {
  Vec x;
  double lambda;
  int iterations;
  double residual;
  bool converged;
};

/// Preconditioned nonlinear conjugate gradients (Polak-Ribiere+) on the unit
/// p-sphere. The metric is the p = 2 stiffness of the same form, the step is
/// chosen by Armijo backtracking on the retracted point.
DescentOutcome descend(Functional& f, const Factorization& precond, double p, Vec x, const SolverOptions& opts,
                       int max_iter) {
  retract(f, p, x);
  double lambda = f.quotient(x);
  const auto n = static_cast<Eigen::Index>(f.size());
  Vec ge(n), gn(n), g(n), d(n), s = Vec::Zero(n), d_prev, g_prev;
  double gd_prev = 0.0;
  double step = 1.0 / p;
  double residual = std::numeric_limits<double>::infinity();
  int quiet = 0;

  for (int it = 1; it <= max_iter; ++it) {
    f.gradients(x, ge, gn);
    const double norm_p = f.norm_pow(x);
    g = (ge - lambda * gn) / norm_p;
    d = precond.solve(g);
    const double gd = g.dot(d);
    if (!(gd > 0.0)) return {x, lambda, it, 0.0, true};

    bool restarted = gd_prev == 0.0;
    if (!restarted) {
      const double beta = std::max(0.0, g.dot(d - d_prev) / gd_prev);
      s = -d + beta * s;
      if (s.dot(g) >= -1e-12 * gd) restarted = true;
    }
    if (restarted) s = -d;

    const double slope = s.dot(g);
    double t = opts.step_rule == StepRule::Fixed ? 1.0 / p : step;
    Vec trial;
    double lambda_trial = lambda;
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      trial = x + t * s;
      retract(f, p, trial);
      lambda_trial = f.quotient(trial);
      if (opts.step_rule == StepRule::Fixed || lambda_trial <= lambda + 1e-4 * t * slope) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) {
      if (!restarted) {
        // Drop the conjugate direction and retry along the plain gradient.
        gd_prev = 0.0;
        continue;
      }
      // Flat direction: no decrease available at machine precision.
      return {x, lambda, it, residual, true};
    }
    step = opts.step_rule == StepRule::Fixed ? step : std::min(4.0 * t, 1e6);

    residual = std::abs(lambda - lambda_trial) / lambda_trial;
    x = trial;
    lambda = lambda_trial;
    d_prev = d;
    gd_prev = gd;
    quiet = residual < opts.tol ? quiet + 1 : 0;
    if (quiet >= 3) return {x, lambda, it, residual, true};
  }
  return {x, lambda, max_iter, residual, false};
}

}  // namespace

void validate(const SolverOptions& opts) {
  require(opts.tol > 0.0, "solver tolerance must be > 0");
  require(opts.max_iter >= 1, "max_iter must be >= 1");
  require(opts.block_size >= 1, "block_size must be >= 1");
  require(opts.continuation_stages >= 1, "continuation_stages must be >= 1");
}

double energy(const Mesh& m, const GradientMetric& form, double p, const std::vector<double>& u) {
  require(u.size() == m.node_count(), "nodal vector size does not match the mesh");
  double sum = 0.0;
  for (std::size_t t = 0; t < m.triangle_count(); ++t) {
    const double q = form(m.gradient(t, u));
    sum += m.tri_area(t) * (p == 2.0 ? q : std::pow(q, 0.5 * p));
  }
  return sum;
}

double energy(const Mesh& m, const QuadForm& form, double p, const std::vector<double>& u) {
  return energy(m, form.metric(), p, u);
}

double pnorm_pow(const Mesh& m, double p, const std::vector<double>& u) {
  require(u.size() == m.node_count(), "nodal vector size does not match the mesh");
  auto powp = [p](double v) { return p == 2.0 ? v * v : std::pow(std::abs(v), p); };
  double sum = 0.0;
  for (std::size_t t = 0; t < m.triangle_count(); ++t) {
    const auto& tri = m.triangles()[t];
    const double u0 = u[tri[0]], u1 = u[tri[1]], u2 = u[tri[2]];
    sum += m.tri_area(t) / 3.0 * (powp(0.5 * (u0 + u1)) + powp(0.5 * (u1 + u2)) + powp(0.5 * (u2 + u0)));
  }
  return sum;
}

double rayleigh_quotient(const Mesh& m, const GradientMetric& form, double p, const std::vector<double>& u) {
  return energy(m, form, p, u) / pnorm_pow(m, p, u);
}

std::vector<double> rayleigh_gradient(const Mesh& m, const DofMap& dofs, const GradientMetric& form, double p,
                                      const std::vector<double>& x) {
  require_p(p);
  require(x.size() == dofs.size(), "interior vector size does not match the dof map");
  Functional f(m, dofs, form, p);
  const Vec xv = Eigen::Map<const Vec>(x.data(), static_cast<Eigen::Index>(x.size()));
  Vec ge, gn;
  f.gradients(xv, ge, gn);
  const double e = f.energy(xv), nrm = f.norm_pow(xv);
  const Vec g = (ge - (e / nrm) * gn) / nrm;
  return {g.data(), g.data() + g.size()};
}

EigenResult solve_p2(const Mesh& m, const GradientMetric& form, const SolverOptions& opts) {
  validate(opts);
  const DofMap dofs = interior_dof_map(m);
  return inverse_iteration(m, dofs, form, opts);
}

EigenResult solve_p2(const Mesh& m, const QuadForm& form, const SolverOptions& opts) {
  return solve_p2(m, form.metric(), opts);
}

EigenResult solve_p(const Mesh& m, const GradientMetric& form, double p, const SolverOptions& opts,
                    const std::vector<double>& initial) {
  require_p(p);
  validate(opts);
  const DofMap dofs = interior_dof_map(m);
  const SpMat k = assemble_stiffness(m, dofs, form);
  const auto precond = factorize(k);

  Vec x;
  int used = 0;
  std::vector<double> schedule;
  if (!initial.empty()) {
    require(initial.size() == m.node_count(), "initial guess size does not match the mesh");
    x = gather(dofs, initial);
    schedule = {p};
  } else if (opts.continuation && p != 2.0) {
    const EigenResult ground = inverse_iteration(m, dofs, form, opts);
    x = gather(dofs, ground.u);
    used = ground.iterations;
    for (int s = 1; s <= opts.continuation_stages; ++s)
      schedule.push_back(2.0 * std::pow(0.5 * p, static_cast<double>(s) / opts.continuation_stages));
    schedule.back() = p;
  } else {
    x = Vec::Ones(static_cast<Eigen::Index>(dofs.size()));
    schedule = {p};
  }
  require(x.cwiseAbs().sum() > 0.0, "initial guess vanishes on the interior");

  DescentOutcome out{};
  for (std::size_t s = 0; s < schedule.size(); ++s) {
    const double ps = schedule[s];
    Functional f(m, dofs, form, ps);
    SolverOptions stage = opts;
    if (s + 1 < schedule.size()) stage.tol = std::max(opts.tol, 1e-6);
    out = descend(f, *precond, ps, x, stage, std::max(1, opts.max_iter - used));
    used += out.iterations;
    x = out.x;
    if (!out.converged) break;
  }

  Functional f(m, dofs, form, p);
  EigenResult result = finish(f, x, p, form, used, out.residual);
  if (!out.converged) {
    std::ostringstream msg;
    msg << "p-descent did not converge in " << opts.max_iter << " iterations (p = " << p << ")";
    throw ConvergenceError(msg.str(), std::move(result));
  }
  return result;
}

EigenResult solve_p(const Mesh& m, const QuadForm& form, double p, const SolverOptions& opts,
                    const std::vector<double>& initial) {
  return solve_p(m, form.metric(), p, opts, initial);
}

EigenResult solve(const Mesh& m, const GradientMetric& form, double p, const SolverOptions& opts) {
  return p == 2.0 ? solve_p2(m, form, opts) : solve_p(m, form, p, opts);
}

EigenResult solve(const Mesh& m, const QuadForm& form, double p, const SolverOptions& opts) {
  return solve(m, form.metric(), p, opts);
}

std::vector<double> random_positive_guess(const Mesh& m, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<double> u(m.node_count(), 0.0);
  for (std::size_t i = 0; i < u.size(); ++i)
    if (!m.is_boundary(i)) u[i] = 0.05 + rng.uniform();
  return u;
}

EigenResult directional_constant(const Mesh& m, double p, Axis axis, const SolverOptions& opts) {
  return solve(m, axis == Axis::X ? GradientMetric::x_only() : GradientMetric::y_only(), p, opts);
}

TwoRoutes lambda_anisotropic_two_routes(const DomainSpec& d, double a, double theta, double p,
                                        const MeshOptions& mesh_opts, const SolverOptions& opts) {
  require(a > 0.0 && a <= 1.0, "a must lie in (0, 1]");
  require_p(p);
  const DomainSpec rotated = rotate(d, theta);
  const GradientMetric qa{a, 0.0, 1.0};
  const EigenResult direct = solve(build_mesh(rotated, mesh_opts), qa, p, opts);
  const EigenResult iso = solve(build_mesh(shear_y(rotated, a), mesh_opts), GradientMetric::identity(), p, opts);
  return {direct.lambda, std::pow(a, 0.5 * p) * iso.lambda, std::max(direct.residual, iso.residual)};
}

}  // namespace anisofreq
