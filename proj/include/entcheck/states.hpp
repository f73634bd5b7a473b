// State constructors: two-qubit and single-photon superpositions, truncated
// two-mode squeezed states, the n-mode split superposition, depolarized
// mixtures and seeded random states.

#pragma once

#include "entcheck/hilbert.hpp"
#include "entcheck/observables.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace entcheck {

/// Amplitudes sinθ and cosθ·e^{iφ} of a two-term superposition.
struct TwoQubitParams {
  double theta;
  double phi;
};

struct SqueezeParam {
  double r;
  explicit SqueezeParam(double squeezing);
};

/// sinθ|00> + cosθ e^{iφ}|11>
StateVector two_qubit_state(TwoQubitParams p);

/// sinθ|01> + cosθ e^{iφ}|10> on two truncated modes; needs n_max >= 1.
StateVector single_photon_state(TwoQubitParams p, FockCutoff cutoff = FockCutoff{1});

struct TruncatedTmss {
  StateVector state;          // renormalized after truncation
  double truncation_weight;   // 1 - Σ_{n<=n_max} tanh^{2n} r / cosh^2 r
  FockCutoff cutoff;
  std::vector<double> raw_amplitudes;  // tanh^n r / cosh r before renormalization
};

TruncatedTmss tmss(SqueezeParam r, FockCutoff cutoff);

/// Smallest n_max whose truncation weight tanh^{2(n_max+1)} r is below `weight`.
FockCutoff tmss_cutoff_for_weight(SqueezeParam r, double weight);

/// Default TMSS cutoff (truncation weight below 1e-14).
FockCutoff tmss_default_cutoff(SqueezeParam r);

/// sinθ |0>^{⊗split}|1>^{⊗(n-split)} + cosθ e^{iφ} |1>^{⊗split}|0>^{⊗(n-split)}.
StateVector multimode_noon_like(TwoQubitParams p, std::size_t parties, std::size_t split,
                                FockCutoff cutoff = FockCutoff{1});

/// p|ψ><ψ| + (1-p) I/d on the (truncated) space of ψ.
DensityMatrix depolarize_mix(const StateVector& pure, double p);

/// Σ_m w_m ρ_m; weights must be nonnegative and sum to 1.
DensityMatrix convex_mixture(const std::vector<std::pair<double, DensityMatrix>>& terms);

/// Tensor product of Haar-random local pure states. Deterministic per seed.
StateVector random_product_pure(const SpaceShape& shape, std::uint64_t seed);

/// Haar-random global pure state. Deterministic per seed.
StateVector random_pure(const SpaceShape& shape, std::uint64_t seed);

/// Product of local state vectors, party 0 first.
StateVector product_state(const std::vector<CVector>& locals);

}  // namespace entcheck
