#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "anisofreq/geometry.hpp"
#include "anisofreq/optimizer.hpp"

namespace anisofreq {

struct VerificationEntry {
  std::string name;
  std::string claim;
  /// Ordered (label, value) pairs; order is part of the serialized output.
  std::vector<std::pair<std::string, double>> measured;
  double tolerance = 0.0;
  bool passed = false;
  int mesh_level = 0;
  double residual = 0.0;
  std::string note;

  void put(std::string label, double value) { measured.emplace_back(std::move(label), value); }
  double get(const std::string& label) const;
};

struct VerificationReport {
  std::vector<VerificationEntry> entries;

  bool passed() const;
  void append(VerificationReport other);
};

/// Random forms in Q^a \ {identity} stay strictly below the isotropic value,
/// and random ordered pairs Q1 <= Q2 keep their discrete ordering.
VerificationReport verify_rigidity(const DomainSpec& d, double a, double p, int n_samples, int n_pairs,
                                   const OptimizeOptions& opts, std::uint64_t seed);

/// Both quantitative inequalities for every (a, b, p). c0 is the theta-minimized
/// directional constant.
VerificationReport verify_quantitative(const DomainSpec& d, const std::vector<std::pair<double, double>>& ab_pairs,
                                       const std::vector<double>& p_list, const OptimizeOptions& opts);

/// lambda_min along a decreasing sequence of a is nonincreasing and bounded
/// below by the theta-minimized y-directional constant.
VerificationEntry verify_Q0_limit(const DomainSpec& d, double p, const std::vector<double>& a_sequence,
                                  const OptimizeOptions& opts);

VerificationEntry verify_disk(const Disk& d, double a, double p, const OptimizeOptions& opts);

/// Built on R_a = [-1,1] x [-1/sqrt(a), 1/sqrt(a)].
VerificationEntry verify_rectangle(double a, double p, const OptimizeOptions& opts);

/// a^{p/2} lambda < lambda_min < lambda_max with margins beyond 3x residual.
VerificationEntry verify_chain(const DomainSpec& d, double a, double p, const OptimizeOptions& opts);

/// lambda_min Qmax^{p/2} <= lambda^Q <= lambda_max Qmax^{p/2} for random
/// non-normalized Q. Uses the direct route so every value shares one mesh.
VerificationEntry verify_nonnormalized(const DomainSpec& d, double a, double p, int n_samples,
                                       const OptimizeOptions& opts, std::uint64_t seed);

struct SuiteConfig {
  DomainSpec domain = domains::square();
  double a = 0.25;
  double p = 2.0;
  std::optional<double> b;
  int n_samples = 5;
  int n_pairs = 5;
  std::uint64_t seed = 42;
  OptimizeOptions opts;
};

/// Rigidity, chain, non-normalized bounds and, when b is set, the
/// quantitative pair (a, b). Deterministic for a fixed seed.
VerificationReport run_verification_suite(const SuiteConfig& config);

}  // namespace anisofreq
