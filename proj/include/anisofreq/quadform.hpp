#pragma once

#include <optional>
#include <string_view>
#include <utility>

#include "anisofreq/linalg.hpp"

namespace anisofreq {

/// Symmetric 2x2 coefficient block [[m11, m12], [m12, m22]] of a
/// nonnegative form. Unlike QuadForm it may be degenerate, which is what the
/// directional functionals |D_x u|^p and |D_y u|^p need.
struct GradientMetric {
  double m11 = 1.0;
  double m12 = 0.0;
  double m22 = 1.0;

  double operator()(Vec2 g) const { return m11 * g.x * g.x + 2.0 * m12 * g.x * g.y + m22 * g.y * g.y; }

  static GradientMetric identity() { return {}; }
  static GradientMetric x_only() { return {1.0, 0.0, 0.0}; }
  static GradientMetric y_only() { return {0.0, 0.0, 1.0}; }
};

/// Positive quadratic form alpha x^2 + 2 beta xy + gamma y^2 with
/// alpha, gamma > 0, beta >= 0 and beta^2 < alpha gamma.
class QuadForm {
 public:
  /// Throws Error(NegativeCrossTerm) for beta < 0 and Error(InvalidArgument)
  /// for any other violation.
  QuadForm(double alpha, double beta, double gamma);

  static QuadForm identity() { return {1.0, 0.0, 1.0}; }

  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  double gamma() const { return gamma_; }

  double operator()(Vec2 v) const { return alpha_ * v.x * v.x + 2.0 * beta_ * v.x * v.y + gamma_ * v.y * v.y; }

  GradientMetric metric() const { return {alpha_, beta_, gamma_}; }

  friend bool operator==(const QuadForm&, const QuadForm&) = default;

 private:
  double alpha_;
  double beta_;
  double gamma_;
};

/// Maps a form with a negative cross term into the admissible class via the
/// reflection y -> -y, i.e. returns (alpha, -beta, gamma).
QuadForm reflect_y(double alpha, double beta, double gamma);

double eval(const QuadForm& q, Vec2 v);

struct SpectralData {
  double mu_min;
  double mu_max;
  /// Angle in [0, pi/2] with Q o R_theta = mu_min x^2 + mu_max y^2.
  double theta;
};

SpectralData spectral(const QuadForm& q);

/// Returns (Q / Q_max, Q_max).
std::pair<QuadForm, double> normalize(const QuadForm& q);

enum class ClassTag {
  InQaExact,     // Q_max = 1 and Q_min = a
  InQupperA,     // Q_max = 1 and Q_min >= a
  InQnnA,        // a Q_max <= Q_min, not normalized
  InQ0,          // Q_max = 1 only
  NotNormalized,
};

std::string_view to_string(ClassTag tag);

inline constexpr double kClassTolerance = 1e-12;

ClassTag classify(const QuadForm& q, double a);

/// The extremal family Q_alpha in the slice Q_min = a, Q_max = 1.
QuadForm make_q_alpha(double a, double alpha);

/// A_alpha, the rotation with Q_alpha o A_alpha = Q_a.
Mat2 rotation_for_alpha(double a, double alpha);

double alpha_of_theta(double a, double theta);
double theta_of_alpha(double a, double alpha);

/// Q o A, i.e. v -> Q(A v).
QuadForm compose(const QuadForm& q, const Mat2& a);

/// Q_a o R_theta^T, the member of the Q_min = a slice paired with theta.
QuadForm rotated_extremal(double a, double theta);

/// Convex splitting Q = w_aniso Q_alpha + w_iso |.|^2 of a normalized form.
struct Decomposition {
  double b;
  /// Empty on the degenerate branch b = 1, where Q is the identity.
  std::optional<double> alpha_param;
  double w_aniso;
  double w_iso;
};

Decomposition decompose(const QuadForm& q, double a);

/// Coefficients of w_aniso Q_alpha + w_iso |.|^2.
QuadForm reconstruct(const Decomposition& d, double a);

/// True when q - r is positive semidefinite.
bool dominates(const QuadForm& q, const QuadForm& r, double tol = 1e-14);

/// Right-hand side of the upper ratio inequality between the b- and a-classes.
double quant_upper_bound(double a, double b, double p);

/// Constant C(a, b, p, Omega) of the lower difference inequality.
double quant_lower_constant(double a, double b, double p, double c0, double lambda1p);

}  // namespace anisofreq
