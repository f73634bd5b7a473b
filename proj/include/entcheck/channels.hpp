// Detector-loss model: a beam splitter of transmissivity sqrt(eta) mixing the
// signal with vacuum, realised as the pure-loss Kraus channel on one mode.

#pragma once

#include "entcheck/hilbert.hpp"

#include <optional>
#include <string>
#include <vector>

namespace entcheck {

struct Efficiency {
  double eta;
  explicit Efficiency(double value);
};

/// K_k = Σ_{n>=k} sqrt(C(n,k) (1-η)^k η^{n-k}) |n-k><n|, k = 0..dim-1.
std::vector<CMatrix> loss_kraus(Efficiency eta, std::size_t dim);

DensityMatrix loss_channel(const DensityMatrix& rho, Efficiency eta, std::size_t mode);

struct MomentScalingEntry {
  std::string quantity;
  double before;
  double after;
  std::optional<double> ratio;  // after / before when |before| > 1e-6
  bool pass;
};

struct MomentScalingReport {
  double expected_ratio;  // sqrt(eta)
  std::vector<MomentScalingEntry> entries;
  bool all_pass;
};

/// Compares <X>, <P> and |<a>| on `mode` before and after loss.
MomentScalingReport first_moment_scaling_check(const DensityMatrix& rho, Efficiency eta,
                                               std::size_t mode);

}  // namespace entcheck
