#include "entcheck/correlations.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>

namespace entcheck {

namespace {

void check_choice(const SettingsGrid& grid, const SettingChoice& choice) {
  if (choice.size() != grid.parties()) {
    throw DimensionError("setting choice has " + std::to_string(choice.size()) +
                         " entries for a " + std::to_string(grid.parties()) + "-party grid");
  }
}

void check_two_settings(const SettingsGrid& grid) {
  for (std::size_t j = 0; j < grid.parties(); ++j) {
    if (grid.settings(j) != 2) {
      throw DimensionError("CFRD needs exactly two settings per party");
    }
  }
}

int count_second(const SettingChoice& c) {
  return static_cast<int>(std::count(c.begin(), c.end(), 2));
}

}  // namespace

// ---------------------------------------------------------------------------
// SettingsGrid

SettingsGrid::SettingsGrid(std::vector<std::vector<Observable>> settings)
    : settings_(std::move(settings)) {
  if (settings_.empty()) throw DimensionError("settings grid needs at least one party");
  for (std::size_t j = 0; j < settings_.size(); ++j) {
    if (settings_[j].empty()) throw DimensionError("every party needs at least one setting");
    for (const auto& obs : settings_[j]) {
      if (obs.party() != j) {
        throw DimensionError("observable party index does not match its grid position");
      }
    }
  }
}

const Observable& SettingsGrid::at(std::size_t party, int setting) const {
  if (party >= settings_.size()) throw DimensionError("party index out of range");
  const auto& row = settings_[party];
  if (setting < 1 || static_cast<std::size_t>(setting) > row.size()) {
    throw DimensionError("setting index " + std::to_string(setting) + " out of range for party " +
                         std::to_string(party));
  }
  return row[static_cast<std::size_t>(setting - 1)];
}

std::vector<Observable> SettingsGrid::select(const SettingChoice& choice) const {
  check_choice(*this, choice);
  std::vector<Observable> out;
  out.reserve(choice.size());
  for (std::size_t j = 0; j < choice.size(); ++j) out.push_back(at(j, choice[j]));
  return out;
}

SwapPermutation SwapPermutation::first(std::size_t r) {
  SwapPermutation p;
  for (std::size_t j = 0; j < r; ++j) p.subset.push_back(j);
  return p;
}

// ---------------------------------------------------------------------------
// Equalities

EqualityReport make_equality_report(double lhs, double rhs, EqualityTolerance tol) {
  EqualityReport r{lhs, rhs, std::abs(lhs - rhs), std::nullopt, false};
  if (std::abs(lhs) > tol.ratio_guard) r.ratio = rhs / lhs;
  r.violated = r.residual > tol.violation;
  return r;
}

double correlation(StateView state, const SettingsGrid& grid, const SettingChoice& choice) {
  if (grid.parties() != state.shape().parties()) {
    throw DimensionError("grid arity does not match the state");
  }
  return expectation(state, grid.select(choice));
}

EqualityReport bipartite_equality(StateView state, const SettingsGrid& grid, int i, int j,
                                  int k, int l, EqualityTolerance tol) {
  if (grid.parties() != 2) throw DimensionError("two-party equality needs a 2-party grid");
  const double lhs = correlation(state, grid, {i, j}) * correlation(state, grid, {k, l});
  const double rhs = correlation(state, grid, {i, l}) * correlation(state, grid, {k, j});
  return make_equality_report(lhs, rhs, tol);
}

SettingChoice swap_settings(const SettingChoice& choice, const SettingChoice& donor,
                            const SwapPermutation& perm) {
  if (choice.size() != donor.size()) throw DimensionError("choices differ in length");
  SettingChoice out = choice;
  std::set<std::size_t> seen;
  for (auto p : perm.subset) {
    if (p >= choice.size()) throw DimensionError("swap subset names a nonexistent party");
    if (!seen.insert(p).second) throw DimensionError("swap subset repeats a party");
    out[p] = donor[p];
  }
  return out;
}

EqualityReport multipartite_equality(StateView state, const SettingsGrid& grid,
                                     const SettingChoice& choice_a,
                                     const SettingChoice& choice_b,
                                     const SwapPermutation& perm, EqualityTolerance tol) {
  const SettingChoice swapped_a = swap_settings(choice_a, choice_b, perm);
  const SettingChoice swapped_b = swap_settings(choice_b, choice_a, perm);
  const double lhs = correlation(state, grid, choice_a) * correlation(state, grid, choice_b);
  const double rhs =
      correlation(state, grid, swapped_a) * correlation(state, grid, swapped_b);
  return make_equality_report(lhs, rhs, tol);
}

TmssEqualityReport tmss_equality(SqueezeParam r, FockCutoff cutoff,
                                 double max_truncation_weight, EqualityTolerance tol) {
  const TruncatedTmss t = tmss(r, cutoff);
  if (t.truncation_weight > max_truncation_weight) {
    throw DimensionError("TMSS truncation weight " + std::to_string(t.truncation_weight) +
                         " exceeds " + std::to_string(max_truncation_weight) +
                         "; raise the cutoff");
  }
  const SettingsGrid grid = quadrature_grid(split_phases(2, 1), cutoff);
  TmssEqualityReport rep{make_equality_report(0.0, 0.0, tol), cutoff, t.truncation_weight,
                         correlation(t.state, grid, {1, 1}), correlation(t.state, grid, {1, 2}),
                         correlation(t.state, grid, {2, 1}), correlation(t.state, grid, {2, 2}),
                         std::pow(std::sinh(2.0 * r.r), 2), 0.0, 0.0, 0.0};
  rep.equality = make_equality_report(rep.e11 * rep.e22, rep.e12 * rep.e21, tol);

  const auto& c = t.raw_amplitudes;
  for (std::size_t n = 0; n < c.size(); ++n) {
    rep.series_denominator += c[n] * c[n];
    if (n + 1 < c.size()) rep.series_numerator += c[n] * c[n + 1] * static_cast<double>(n + 1);
  }
  rep.series_lhs = 4.0 * rep.series_numerator * rep.series_numerator / rep.series_denominator;
  return rep;
}

// ---------------------------------------------------------------------------
// CFRD

EqualityReport cfrd(StateView state, const SettingsGrid& grid, EqualityTolerance tol) {
  check_two_settings(grid);
  if (grid.parties() != state.shape().parties()) {
    throw DimensionError("grid arity does not match the state");
  }
  std::vector<LocalOperator> raising;
  std::vector<LocalOperator> second_moments;
  for (std::size_t j = 0; j < grid.parties(); ++j) {
    const CMatrix& m1 = grid.at(j, 1).matrix();
    const CMatrix& m2 = grid.at(j, 2).matrix();
    raising.push_back({j, m1 + Complex(0.0, 1.0) * m2});
    second_moments.push_back({j, m1 * m1 + m2 * m2});
  }
  const double lhs = std::norm(expectation_of_product(state, raising));
  const double rhs = expectation_of_product(state, second_moments).real();
  EqualityReport r = make_equality_report(lhs, rhs, tol);
  r.violated = lhs > rhs + tol.violation;
  return r;
}

double variance_bound_check(StateView state, const SettingsGrid& grid,
                            const SettingChoice& choice) {
  const auto observables = grid.select(choice);
  std::vector<LocalOperator> squares;
  for (const auto& o : observables) squares.push_back({o.party(), o.matrix() * o.matrix()});
  const double second = expectation_of_product(state, squares).real();
  const double first = expectation(state, observables);
  return second - first * first;
}

CfrdDecomposition cfrd_decomposition(StateView state, const SettingsGrid& grid,
                                     EqualityTolerance tol) {
  check_two_settings(grid);
  const std::size_t n = grid.parties();
  const EqualityReport direct = cfrd(state, grid, tol);

  CfrdDecomposition out{};
  out.lhs = direct.lhs;
  out.rhs = direct.rhs;

  // <Π(M^1 + iM^2)> = Σ_c i^{w(c)} E_c, w(c) = number of second settings.
  const auto choices = all_choices(grid);
  std::vector<double> e;
  e.reserve(choices.size());
  double re = 0.0;
  double im = 0.0;
  for (const auto& c : choices) {
    const double value = correlation(state, grid, c);
    e.push_back(value);
    out.correlations.emplace_back(c, value);
    out.m_prime += value * value;
    const int w = count_second(c);
    const double sign = (w / 2) % 2 == 0 ? 1.0 : -1.0;
    (w % 2 == 0 ? re : im) += sign * value;
  }
  out.moment = Complex(re, im);
  out.re_squared = re * re;
  out.im_squared = im * im;

  // Cross term of the pair (c, d): 2 cos((w_c - w_d) π/2) E_c E_d. Pairs with
  // the same differing-party set D and the same settings outside D form a
  // class whose products all agree on product states; within a class the
  // signs split evenly, so positive and negative terms are matched one to one.
  struct Signed {
    std::size_t a, b;
  };
  std::map<std::pair<std::vector<bool>, SettingChoice>, std::pair<std::vector<Signed>,
                                                                  std::vector<Signed>>>
      classes;
  for (std::size_t x = 0; x < choices.size(); ++x) {
    for (std::size_t y = x + 1; y < choices.size(); ++y) {
      const int dw = count_second(choices[x]) - count_second(choices[y]);
      if (dw % 2 != 0) continue;
      const int sign = ((dw / 2) % 2 == 0) ? 1 : -1;
      const double contribution = 2.0 * sign * e[x] * e[y];
      out.cross_terms.push_back({choices[x], choices[y], sign, contribution});
      out.cross_total += contribution;

      std::vector<bool> differs(n);
      SettingChoice outside(n, 0);
      for (std::size_t j = 0; j < n; ++j) {
        differs[j] = choices[x][j] != choices[y][j];
        if (!differs[j]) outside[j] = choices[x][j];
      }
      auto& bucket = classes[{differs, outside}];
      (sign > 0 ? bucket.first : bucket.second).push_back({x, y});
    }
  }

  double matched_sum = 0.0;
  for (const auto& [key, bucket] : classes) {
    const auto& [pos, neg] = bucket;
    if (pos.size() != neg.size()) {
      throw std::logic_error("unbalanced cross-term class in CFRD decomposition");
    }
    for (std::size_t q = 0; q < pos.size(); ++q) {
      MatchedPair m;
      m.positive_a = choices[pos[q].a];
      m.positive_b = choices[pos[q].b];
      m.negative_a = choices[neg[q].a];
      m.negative_b = choices[neg[q].b];
      for (std::size_t j = 0; j < n; ++j) {
        if (m.positive_a[j] != m.negative_a[j]) m.swap.subset.push_back(j);
      }
      m.equality = make_equality_report(e[pos[q].a] * e[pos[q].b], e[neg[q].a] * e[neg[q].b],
                                        tol);
      m.contribution = 2.0 * (m.equality.lhs - m.equality.rhs);
      matched_sum += m.contribution;
      out.matched_pairs.push_back(std::move(m));
    }
  }
  out.reconstruction_residual = std::abs(out.lhs - out.m_prime - matched_sum);
  return out;
}

// ---------------------------------------------------------------------------
// Grid builders

SettingsGrid qubit_xy_grid() {
  std::vector<std::vector<Observable>> s;
  for (std::size_t j = 0; j < 2; ++j) s.push_back({Observable(j, pauli_x()), Observable(j, pauli_y())});
  return SettingsGrid(std::move(s));
}

SettingsGrid quadrature_grid(const std::vector<double>& second_phases, FockCutoff cutoff) {
  std::vector<std::vector<Observable>> s;
  for (std::size_t j = 0; j < second_phases.size(); ++j) {
    s.push_back({quadrature(PhaseAngle(0.0), cutoff, j),
                 quadrature(PhaseAngle(second_phases[j]), cutoff, j)});
  }
  return SettingsGrid(std::move(s));
}

SettingsGrid pseudospin_grid(const std::vector<double>& second_phases, FockCutoff cutoff) {
  std::vector<std::vector<Observable>> s;
  for (std::size_t j = 0; j < second_phases.size(); ++j) {
    s.push_back({pseudospin_setting(1, PhaseAngle(0.0), cutoff, j),
                 pseudospin_setting(2, PhaseAngle(second_phases[j]), cutoff, j)});
  }
  return SettingsGrid(std::move(s));
}

std::vector<double> split_phases(std::size_t parties, std::size_t split) {
  if (split > parties) throw DimensionError("split index must satisfy 0 <= r <= n");
  std::vector<double> phases(parties, -std::numbers::pi / 2);
  std::fill_n(phases.begin(), split, std::numbers::pi / 2);
  return phases;
}

std::vector<SettingChoice> all_choices(const SettingsGrid& grid) {
  std::vector<SettingChoice> out{SettingChoice{}};
  for (std::size_t j = 0; j < grid.parties(); ++j) {
    std::vector<SettingChoice> next;
    for (const auto& prefix : out) {
      for (std::size_t s = 1; s <= grid.settings(j); ++s) {
        auto c = prefix;
        c.push_back(static_cast<int>(s));
        next.push_back(std::move(c));
      }
    }
    out = std::move(next);
  }
  return out;
}

}  // namespace entcheck
