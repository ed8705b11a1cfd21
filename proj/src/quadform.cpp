#include "anisofreq/quadform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "anisofreq/error.hpp"

namespace anisofreq {

namespace {

void require_slice_level(double a) {
  require(a > 0.0 && a < 1.0, "class level a must lie in (0, 1)");
}

void require_alpha_range(double a, double alpha) {
  require_slice_level(a);
  require(alpha >= a && alpha <= 1.0, "alpha must lie in [a, 1]");
}

}  // namespace

QuadForm::QuadForm(double alpha, double beta, double gamma) : alpha_(alpha), beta_(beta), gamma_(gamma) {
  require(std::isfinite(alpha) && std::isfinite(beta) && std::isfinite(gamma), "form coefficients must be finite");
  if (beta < 0.0) {
    std::ostringstream msg;
    msg << "negative cross term beta = " << beta << "; use reflect_y to map the form into the admissible class";
    throw Error(ErrorCode::NegativeCrossTerm, msg.str());
  }
  require(alpha > 0.0 && gamma > 0.0, "form requires alpha > 0 and gamma > 0");
  require(beta * beta < alpha * gamma, "form is not positive definite (beta^2 >= alpha gamma)");
}

QuadForm reflect_y(double alpha, double beta, double gamma) { return {alpha, -beta, gamma}; }

double eval(const QuadForm& q, Vec2 v) { return q(v); }

SpectralData spectral(const QuadForm& q) {
  const double mean = 0.5 * (q.alpha() + q.gamma());
  const double half_diff = 0.5 * (q.gamma() - q.alpha());
  const double r = std::hypot(half_diff, q.beta());
  const double mu_max = mean + r;
  // det / mu_max avoids cancellation in mean - r for nearly singular forms.
  const double mu_min = (q.alpha() * q.gamma() - q.beta() * q.beta()) / mu_max;
  // Isotropic forms: every angle diagonalizes, pick 0.
  const double theta = r <= 1e-15 * mean ? 0.0 : 0.5 * std::atan2(q.beta(), half_diff);
  return {mu_min, mu_max, theta};
}

std::pair<QuadForm, double> normalize(const QuadForm& q) {
  const double qmax = spectral(q).mu_max;
  return {QuadForm(q.alpha() / qmax, q.beta() / qmax, q.gamma() / qmax), qmax};
}

std::string_view to_string(ClassTag tag) {
  switch (tag) {
    case ClassTag::InQaExact: return "InQa_exact";
    case ClassTag::InQupperA: return "InQupper_a";
    case ClassTag::InQnnA: return "InQnn_a";
    case ClassTag::InQ0: return "InQ0";
    case ClassTag::NotNormalized: return "NotNormalized";
  }
  return "unknown";
}

ClassTag classify(const QuadForm& q, double a) {
  require(a > 0.0 && a <= 1.0, "class level a must lie in (0, 1]");
  const auto s = spectral(q);
  if (std::abs(s.mu_max - 1.0) <= kClassTolerance) {
    if (std::abs(s.mu_min - a) <= kClassTolerance) return ClassTag::InQaExact;
    if (s.mu_min >= a - kClassTolerance) return ClassTag::InQupperA;
    return ClassTag::InQ0;
  }
  if (a * s.mu_max <= s.mu_min + kClassTolerance * s.mu_max) return ClassTag::InQnnA;
  return ClassTag::NotNormalized;
}

QuadForm make_q_alpha(double a, double alpha) {
  require_alpha_range(a, alpha);
  const double beta = std::sqrt(std::max(0.0, (1.0 - alpha) * (alpha - a)));
  return {alpha, beta, 1.0 + a - alpha};
}

Mat2 rotation_for_alpha(double a, double alpha) {
  require_alpha_range(a, alpha);
  const double c = std::sqrt((1.0 - alpha) / (1.0 - a));
  const double s = std::sqrt((alpha - a) / (1.0 - a));
  return {c, s, -s, c};
}

double alpha_of_theta(double a, double theta) {
  require_slice_level(a);
  require(theta >= 0.0 && theta <= std::numbers::pi / 2, "theta must lie in [0, pi/2]");
  const double c = std::cos(theta);
  return std::clamp(1.0 - (1.0 - a) * c * c, a, 1.0);
}

double theta_of_alpha(double a, double alpha) {
  require_alpha_range(a, alpha);
  return std::atan2(std::sqrt(alpha - a), std::sqrt(1.0 - alpha));
}

QuadForm compose(const QuadForm& q, const Mat2& a) {
  // A^T M A with M = [[alpha, beta], [beta, gamma]].
  const Mat2 m{q.alpha(), q.beta(), q.beta(), q.gamma()};
  const Mat2 n = a.transpose() * m * a;
  double beta = 0.5 * (n.m01 + n.m10);
  // A diagonalizing A leaves a cross term at roundoff level with either sign.
  if (beta < 0.0 && -beta <= 64.0 * std::numeric_limits<double>::epsilon() * (n.m00 + n.m11)) beta = 0.0;
  return {n.m00, beta, n.m11};
}

QuadForm rotated_extremal(double a, double theta) {
  if (a == 1.0) return QuadForm::identity();
  return make_q_alpha(a, alpha_of_theta(a, theta));
}

Decomposition decompose(const QuadForm& q, double a) {
  require_slice_level(a);
  const auto s = spectral(q);
  require(std::abs(s.mu_max - 1.0) <= kClassTolerance, "decompose requires a normalized form (Q_max = 1)",
          ErrorCode::ClassMembership);
  require(s.mu_min >= a - kClassTolerance, "decompose requires Q_min >= a", ErrorCode::ClassMembership);

  const double b = std::clamp(s.mu_min, a, 1.0);
  const double w_aniso = (1.0 - b) / (1.0 - a);
  const double w_iso = (b - a) / (1.0 - a);
  if (1.0 - b <= kClassTolerance) return {1.0, std::nullopt, 0.0, 1.0};

  const double alpha = alpha_of_theta(a, s.theta);
  // Independent route through the coefficient relation between the slices.
  const double alpha_linear = (1.0 - a) / (1.0 - b) * q.alpha() + (a - b) / (1.0 - b);
  if (std::abs(alpha - alpha_linear) > 1e-10) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "decompose: angle route gives alpha = " << alpha << " but coefficient route gives " << alpha_linear;
    throw Error(ErrorCode::Internal, msg.str());
  }
  return {b, alpha, w_aniso, w_iso};
}

QuadForm reconstruct(const Decomposition& d, double a) {
  if (!d.alpha_param) return QuadForm::identity();
  const auto qa = make_q_alpha(a, *d.alpha_param);
  return {d.w_aniso * qa.alpha() + d.w_iso, d.w_aniso * qa.beta(), d.w_aniso * qa.gamma() + d.w_iso};
}

bool dominates(const QuadForm& q, const QuadForm& r, double tol) {
  const double da = q.alpha() - r.alpha();
  const double db = q.beta() - r.beta();
  const double dg = q.gamma() - r.gamma();
  return da >= -tol && dg >= -tol && db * db - da * dg <= tol;
}

double quant_upper_bound(double a, double b, double p) {
  require(a > 0.0 && a <= b && b < 1.0, "quant_upper_bound requires 0 < a <= b < 1");
  require(p > 1.0, "quant_upper_bound requires p > 1");
  return p * std::sqrt(std::pow(b, p - 1.0) * (b - a) / (std::pow(a, p) * (1.0 - a)));
}

double quant_lower_constant(double a, double b, double p, double c0, double lambda1p) {
  require(a > 0.0 && a <= b && b < 1.0, "quant_lower_constant requires 0 < a <= b < 1");
  require(p > 1.0, "quant_lower_constant requires p > 1");
  require(c0 > 0.0 && lambda1p > 0.0, "quant_lower_constant requires c0 > 0 and lambda1p > 0");
  if (p >= 2.0) return 0.5 * p * std::pow(a, 0.5 * (p - 2.0)) * c0;
  return 0.5 * p * std::pow(b, 0.5 * (2.0 - p)) * std::pow(lambda1p, 0.5 * (p - 2.0)) * std::pow(c0, 2.0 / p);
}

}  // namespace anisofreq
