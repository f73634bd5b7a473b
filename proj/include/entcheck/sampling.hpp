// Finite-shot Monte Carlo estimates of correlation functions.
//
// Each shot measures the parties in order 0..n-1: the outcome distribution of
// party j is conditioned on the collapsed state left by parties 0..j-1. The
// conditional distributions depend only on the outcome prefix, so they are
// computed lazily once per visited prefix and reused across shots.

#pragma once

#include "entcheck/correlations.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <random>
#include <vector>

namespace entcheck {

struct ShotPlan {
  std::size_t shots_per_setting;
  std::uint64_t seed;
  std::vector<SettingChoice> settings;  // optional; used by callers that sweep settings
};

struct SampleEstimate {
  double estimate;
  double stderr_;  // sample standard deviation / sqrt(shots)
  std::size_t shots;
};

/// One joint-outcome record: the eigenvalue observed at each party.
using Outcome = std::vector<double>;

/// Owns its generator; one instance must not be shared between threads.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  SampleEstimate correlation(StateView state, const SettingsGrid& grid,
                             const SettingChoice& choice, std::size_t shots);

  /// Raw per-shot outcomes, for marginal and no-signalling checks.
  std::vector<Outcome> outcomes(StateView state, const std::vector<Observable>& observables,
                                std::size_t shots);

 private:
  std::mt19937_64 rng_;
};

SampleEstimate sample_correlation(StateView state, const SettingsGrid& grid,
                                  const SettingChoice& choice, const ShotPlan& plan);

/// An equality instance: E_a E_b against the pair with `swap` exchanged.
/// The two-party E_ij E_kl = E_il E_kj is a = (i,j), b = (k,l), swap = {1}.
struct EqualityInstance {
  SettingChoice choice_a;
  SettingChoice choice_b;
  SwapPermutation swap;

  static EqualityInstance bipartite(int i, int j, int k, int l);
};

struct SampledEqualityReport {
  EqualityReport report;  // built from estimates; verdict uses the rule below
  double lhs_sigma;
  double rhs_sigma;
  double residual_sigma;  // first-order propagated
  double residual_ci_low;
  double residual_ci_high;
  std::optional<double> ratio_sigma;
  double k;
  std::vector<std::pair<SettingChoice, SampleEstimate>> estimates;
};

/// Distinct correlations are sampled once each with plan.shots_per_setting
/// shots. violated ⇔ |lhs - rhs| > max(k·σ, tolerance).
SampledEqualityReport sampled_equality(StateView state, const SettingsGrid& grid,
                                       const EqualityInstance& instance, const ShotPlan& plan,
                                       double k = 5.0, EqualityTolerance tol = {});

}  // namespace entcheck
