// Correlation functions and the local-measurement separability tests:
//
//   two-party       E_ij E_kl = E_il E_kj
//   n-party         E_a E_b   = E_{a'} E_{b'}  (a', b' = a, b with a subset of
//                                               parties' settings exchanged)
//   CFRD            |<Π_j (M_j^1 + i M_j^2)>|^2 <= <Π_j ((M_j^1)^2 + (M_j^2)^2)>
//
// Every product pure state satisfies the equalities exactly, so a residual
// above tolerance certifies entanglement of a pure state. Setting indices are
// 1-based throughout, matching the usual E_{i1...in} labelling.

#pragma once

#include "entcheck/hilbert.hpp"
#include "entcheck/observables.hpp"
#include "entcheck/states.hpp"

#include <optional>
#include <vector>

namespace entcheck {

using SettingChoice = std::vector<int>;

class SettingsGrid {
 public:
  /// settings[j][s] is party j's observable for setting s+1.
  explicit SettingsGrid(std::vector<std::vector<Observable>> settings);

  std::size_t parties() const { return settings_.size(); }
  std::size_t settings(std::size_t party) const { return settings_.at(party).size(); }
  const Observable& at(std::size_t party, int setting) const;
  std::vector<Observable> select(const SettingChoice& choice) const;

 private:
  std::vector<std::vector<Observable>> settings_;
};

/// Parties whose settings are exchanged between the two correlation functions.
struct SwapPermutation {
  std::vector<std::size_t> subset;

  /// The first r parties.
  static SwapPermutation first(std::size_t r);
};

struct EqualityTolerance {
  double violation = 1e-8;
  double ratio_guard = 1e-12;
};

struct EqualityReport {
  double lhs;
  double rhs;
  double residual;              // |lhs - rhs|
  std::optional<double> ratio;  // rhs / lhs, only when |lhs| > ratio_guard
  bool violated;                // residual > violation tolerance
};

EqualityReport make_equality_report(double lhs, double rhs, EqualityTolerance tol = {});

double correlation(StateView state, const SettingsGrid& grid, const SettingChoice& choice);

/// E_ij E_kl versus E_il E_kj on a two-party grid.
EqualityReport bipartite_equality(StateView state, const SettingsGrid& grid, int i, int j,
                                  int k, int l, EqualityTolerance tol = {});

/// `choice` with the entries listed in `perm` taken from `donor`.
SettingChoice swap_settings(const SettingChoice& choice, const SettingChoice& donor,
                            const SwapPermutation& perm);

EqualityReport multipartite_equality(StateView state, const SettingsGrid& grid,
                                     const SettingChoice& choice_a,
                                     const SettingChoice& choice_b,
                                     const SwapPermutation& perm, EqualityTolerance tol = {});

struct TmssEqualityReport {
  EqualityReport equality;   // (1,1,2,2) instance on the renormalized state
  FockCutoff cutoff;
  double truncation_weight;
  double e11, e12, e21, e22;
  double closed_form_lhs;    // sinh^2(2r)
  // 4 N^2 / D with N = Σ c_n c_{n+1} (n+1) and D = Σ c_n^2 over the
  // unrenormalized truncated amplitudes c_n = tanh^n r / cosh r.
  double series_numerator;
  double series_denominator;
  double series_lhs;
};

/// Two-party test on the truncated TMSS with the quadrature grid
/// (A: 0, +π/2; B: 0, -π/2). Throws when the truncation weight exceeds the gate.
TmssEqualityReport tmss_equality(SqueezeParam r, FockCutoff cutoff,
                                 double max_truncation_weight = 1e-10,
                                 EqualityTolerance tol = {});

/// lhs = |<Π(M^1 + iM^2)>|^2, rhs = <Π((M^1)^2 + (M^2)^2)>; violated iff lhs > rhs + tol.
EqualityReport cfrd(StateView state, const SettingsGrid& grid, EqualityTolerance tol = {});

/// <Π M^2> - <Π M>^2 for one setting choice.
double variance_bound_check(StateView state, const SettingsGrid& grid,
                            const SettingChoice& choice);

struct CrossTerm {
  SettingChoice a;
  SettingChoice b;
  int sign;             // ±1
  double contribution;  // 2 * sign * E_a * E_b
};

/// Two cross terms of opposite sign whose correlation products coincide on
/// every product pure state.
struct MatchedPair {
  SettingChoice positive_a, positive_b;
  SettingChoice negative_a, negative_b;
  SwapPermutation swap;     // maps the positive pair onto the negative one
  EqualityReport equality;  // lhs = E_{+a} E_{+b}, rhs = E_{-a} E_{-b}
  double contribution;      // 2 (lhs - rhs)
};

struct CfrdDecomposition {
  Complex moment;  // <Π(M^1 + iM^2)>
  double re_squared;
  double im_squared;
  double lhs;      // |moment|^2 computed directly
  double rhs;
  double m_prime;  // Σ over all choices of E^2
  double cross_total;
  std::vector<std::pair<SettingChoice, double>> correlations;
  std::vector<CrossTerm> cross_terms;
  std::vector<MatchedPair> matched_pairs;
  double reconstruction_residual;  // |lhs - m_prime - Σ matched contributions|
};

CfrdDecomposition cfrd_decomposition(StateView state, const SettingsGrid& grid,
                                     EqualityTolerance tol = {});

// Grid builders -------------------------------------------------------------

/// A = (σx, σy), B = (σx, σy).
SettingsGrid qubit_xy_grid();

/// Party j: setting 1 = quadrature(0), setting 2 = quadrature(second_phases[j]).
SettingsGrid quadrature_grid(const std::vector<double>& second_phases, FockCutoff cutoff);

/// Party j: setting 1 = s- + s+, setting 2 = s- e^{-iφ_j} + s+ e^{iφ_j}.
SettingsGrid pseudospin_grid(const std::vector<double>& second_phases, FockCutoff cutoff);

/// +π/2 for the first `split` parties, -π/2 for the rest.
std::vector<double> split_phases(std::size_t parties, std::size_t split);

/// Every choice in {1..m_1} x ... x {1..m_n}, first party slowest.
std::vector<SettingChoice> all_choices(const SettingsGrid& grid);

}  // namespace entcheck
