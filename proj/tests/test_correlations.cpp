#include "entcheck/correlations.hpp"
#include "entcheck/states.hpp"
#include "oracle.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace entcheck;

namespace {

constexpr double kPi = std::numbers::pi;

double s2(double theta) { return std::pow(std::sin(2 * theta), 2); }

// Correlation from an explicit full-space product, bypassing the library.
double full_correlation(const StateVector& psi, const SettingsGrid& grid,
                        const SettingChoice& choice) {
  std::vector<CMatrix> ops;
  for (std::size_t j = 0; j < grid.parties(); ++j) ops.push_back(grid.at(j, choice[j]).matrix());
  return oracle::pure_expectation(psi.amplitudes(),
                                  oracle::full_operator(psi.shape().local_dims(), ops))
      .real();
}

SettingsGrid random_grid(const SpaceShape& s, std::size_t settings, std::mt19937_64& rng) {
  std::vector<std::vector<Observable>> g(s.parties());
  for (std::size_t j = 0; j < s.parties(); ++j)
    for (std::size_t k = 0; k < settings; ++k)
      g[j].emplace_back(j, oracle::random_hermitian(s.local_dim(j), rng));
  return SettingsGrid(std::move(g));
}

// Every two-factor swap instance over a grid: all choice pairs and swap subsets.
template <class F>
void for_each_instance(const SettingsGrid& grid, F&& f) {
  const auto choices = all_choices(grid);
  const std::size_t n = grid.parties();
  for (std::size_t a = 0; a < choices.size(); ++a)
    for (std::size_t b = a; b < choices.size(); ++b)
      for (std::size_t mask = 1; mask + 1 < (std::size_t{1} << n); ++mask) {
        SwapPermutation perm;
        for (std::size_t j = 0; j < n; ++j)
          if (mask >> j & 1) perm.subset.push_back(j);
        f(choices[a], choices[b], perm);
      }
}

}  // namespace

TEST(Correlation, QubitExamples) {
  const auto psi = two_qubit_state({kPi / 4, 0});
  const auto grid = qubit_xy_grid();
  EXPECT_NEAR(correlation(psi, grid, {1, 1}), 1.0, 1e-15);
  EXPECT_NEAR(correlation(psi, grid, {1, 2}), 0.0, 1e-15);
  EXPECT_THROW(correlation(psi, grid, {1, 3}), DimensionError);
  EXPECT_THROW(correlation(psi, grid, {1}), DimensionError);
}

TEST(Correlation, AgreesWithFullMatrixOracle) {
  std::mt19937_64 rng(2);
  const SpaceShape s({2, 3, 2});
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto psi = random_pure(s, seed);
    const auto grid = random_grid(s, 2, rng);
    for (const auto& c : all_choices(grid)) {
      EXPECT_NEAR(correlation(psi, grid, c), full_correlation(psi, grid, c), 1e-12);
    }
  }
}

TEST(Correlation, IdentitySettingDropsAParty) {
  const auto psi = random_pure(SpaceShape({2, 2, 2}), 4);
  std::mt19937_64 rng(4);
  const Observable a(0, oracle::random_hermitian(2, rng));
  const Observable c(2, oracle::random_hermitian(2, rng));
  SettingsGrid grid({{a}, {identity_observable(2, 1)}, {c}});
  EXPECT_NEAR(correlation(psi, grid, {1, 1, 1}), expectation(psi, {a, c}), 1e-14);
}

TEST(SettingsGrid, RejectsMismatchedParty) {
  EXPECT_THROW(SettingsGrid({{Observable(1, oracle::sx())}, {Observable(1, oracle::sx())}}),
               DimensionError);
}

TEST(Bipartite, TwoQubitClosedForms) {
  const auto grid = qubit_xy_grid();
  for (double theta : {0.0, kPi / 8, kPi / 6, kPi / 4, 1.1}) {
    for (double phi : {0.0, kPi / 4, kPi / 2, 2.3}) {
      const auto rep = bipartite_equality(two_qubit_state({theta, phi}), grid, 1, 1, 2, 2);
      EXPECT_NEAR(rep.lhs, -s2(theta) * std::cos(phi) * std::cos(phi), 1e-12);
      EXPECT_NEAR(rep.rhs, s2(theta) * std::sin(phi) * std::sin(phi), 1e-12);
      EXPECT_NEAR(rep.residual, s2(theta), 1e-12);
      EXPECT_EQ(rep.violated, s2(theta) > 1e-8);
    }
  }
}

TEST(Bipartite, SinglePhotonQuadraturesAnyCutoff) {
  for (std::size_t cut : {1u, 2u, 4u}) {
    const auto grid = quadrature_grid({kPi / 2, -kPi / 2}, FockCutoff{cut});
    for (double theta : {kPi / 8, kPi / 6, 0.9}) {
      for (double phi : {0.0, kPi / 4, 1.3}) {
        const auto psi = single_photon_state({theta, phi}, FockCutoff{cut});
        const auto rep = bipartite_equality(psi, grid, 1, 1, 2, 2);
        EXPECT_NEAR(rep.lhs, -s2(theta) * std::cos(phi) * std::cos(phi), 1e-12);
        EXPECT_NEAR(rep.rhs, s2(theta) * std::sin(phi) * std::sin(phi), 1e-12);
      }
    }
  }
}

TEST(Bipartite, SymmetricUnderPairExchange) {
  std::mt19937_64 rng(6);
  const SpaceShape s({3, 2});
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto psi = random_pure(s, seed);
    const auto grid = random_grid(s, 3, rng);
    for (int i = 1; i <= 3; ++i)
      for (int j = 1; j <= 3; ++j)
        for (int k = 1; k <= 3; ++k)
          for (int l = 1; l <= 3; ++l) {
            const auto a = bipartite_equality(psi, grid, i, j, k, l);
            const auto b = bipartite_equality(psi, grid, k, l, i, j);
            EXPECT_NEAR(a.lhs, b.lhs, 1e-14);
            EXPECT_NEAR(a.rhs, b.rhs, 1e-14);
            EXPECT_EQ(a.violated, b.violated);
          }
  }
}

TEST(EqualityReport, RatioGuardAndVerdict) {
  const auto a = make_equality_report(0.0, 0.5);
  EXPECT_FALSE(a.ratio.has_value());
  EXPECT_TRUE(a.violated);
  const auto b = make_equality_report(-0.5, 0.25);
  ASSERT_TRUE(b.ratio.has_value());
  EXPECT_DOUBLE_EQ(*b.ratio, -0.5);
  EXPECT_FALSE(make_equality_report(1.0, 1.0 + 5e-9).violated);
  EXPECT_TRUE(make_equality_report(1.0, 1.0 + 2e-8).violated);
}

TEST(Separability, ProductStatesSatisfyEveryInstance) {
  // Random local observables with three settings, all choice pairs, all swaps.
  std::mt19937_64 rng(12);
  const std::vector<SpaceShape> shapes = {SpaceShape({2, 2}), SpaceShape({4, 4}),
                                          SpaceShape({2, 3, 2})};
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto& s = shapes[seed % shapes.size()];
    const auto psi = random_product_pure(s, seed);
    const auto grid = random_grid(s, 2, rng);
    if (s.parties() == 2) {
      for (int i = 1; i <= 2; ++i)
        for (int j = 1; j <= 2; ++j)
          for (int k = 1; k <= 2; ++k)
            for (int l = 1; l <= 2; ++l)
              worst = std::max(worst, bipartite_equality(psi, grid, i, j, k, l).residual);
    }
    for_each_instance(grid, [&](const auto& a, const auto& b, const auto& perm) {
      const auto rep = multipartite_equality(psi, grid, a, b, perm);
      worst = std::max(worst, rep.residual);
      EXPECT_FALSE(rep.violated);
    });
  }
  EXPECT_LT(worst, 1e-10);
}

TEST(Separability, EntangledTwoQubitStatesAreDetected) {
  const auto grid = qubit_xy_grid();
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.0, 2 * kPi);
  int checked = 0;
  while (checked < 100) {
    const double theta = u(rng) / 4.0;  // [0, π/2)
    const double phi = u(rng);
    if (s2(theta) <= 1e-4) continue;
    ++checked;
    const auto psi = two_qubit_state({theta, phi});
    const auto a = bipartite_equality(psi, grid, 1, 1, 2, 2);
    const auto b = bipartite_equality(psi, grid, 1, 2, 2, 1);
    // lhs - rhs of the first instance is -sin²2θ whatever φ is.
    EXPECT_NEAR(a.lhs - a.rhs, -s2(theta), 1e-12);
    EXPECT_GT(std::max(a.residual, b.residual), 1e-6);
  }
}

TEST(SwapSettings, PicksEntriesFromDonor) {
  EXPECT_EQ(swap_settings({1, 1, 1}, {2, 2, 2}, SwapPermutation{{0, 2}}), (SettingChoice{2, 1, 2}));
  EXPECT_EQ(SwapPermutation::first(2).subset, (std::vector<std::size_t>{0, 1}));
  EXPECT_THROW(swap_settings({1, 1}, {2, 2}, SwapPermutation{{2}}), DimensionError);
  EXPECT_THROW(swap_settings({1, 1}, {2, 2}, SwapPermutation{{0, 0}}), DimensionError);
}

TEST(Multipartite, MatchesHandFormulasAndFullMatrix) {
  const double theta = kPi / 6, phi = kPi / 5;
  for (std::size_t n = 2; n <= 4; ++n) {
    for (std::size_t r = 1; r < n; ++r) {
      const auto psi = multimode_noon_like({theta, phi}, n, r);
      const auto grid = quadrature_grid(split_phases(n, r), FockCutoff{1});
      const SettingChoice ones(n, 1), twos(n, 2);
      const auto rep = multipartite_equality(psi, grid, ones, twos, SwapPermutation::first(r));

      const double dn = static_cast<double>(n), dr = static_cast<double>(r);
      const double lhs = s2(theta) * std::cos(phi) * std::cos(phi - dn * kPi / 2);
      const double rhs =
          s2(theta) * std::cos(phi - (dn - dr) * kPi / 2) * std::cos(phi - dr * kPi / 2);
      EXPECT_NEAR(rep.lhs, lhs, 1e-9) << n << "," << r;
      EXPECT_NEAR(rep.rhs, rhs, 1e-9) << n << "," << r;

      const auto a = swap_settings(ones, twos, SwapPermutation::first(r));
      const auto b = swap_settings(twos, ones, SwapPermutation::first(r));
      EXPECT_NEAR(rep.lhs,
                  full_correlation(psi, grid, ones) * full_correlation(psi, grid, twos), 1e-12);
      EXPECT_NEAR(rep.rhs, full_correlation(psi, grid, a) * full_correlation(psi, grid, b), 1e-12);
    }
  }
}

TEST(Multipartite, ThreeModeQuarterTurnValue) {
  // sin²(π/2)·cos(π/4)·cos(π/4 - 3π/2) = -1/2
  const auto psi = multimode_noon_like({kPi / 4, kPi / 4}, 3, 1);
  const auto grid = quadrature_grid(split_phases(3, 1), FockCutoff{1});
  const auto rep = multipartite_equality(psi, grid, {1, 1, 1}, {2, 2, 2}, SwapPermutation::first(1));
  EXPECT_NEAR(rep.lhs, -0.5, 1e-12);
  EXPECT_NEAR(rep.lhs, full_correlation(psi, grid, {1, 1, 1}) * full_correlation(psi, grid, {2, 2, 2}),
              1e-12);
}

TEST(Multipartite, RecoversSinglePhotonAtTwoModes) {
  const auto grid = quadrature_grid(split_phases(2, 1), FockCutoff{1});
  const auto psi = multimode_noon_like({0.4, 1.0}, 2, 1);
  const auto m = multipartite_equality(psi, grid, {1, 1}, {2, 2}, SwapPermutation::first(1));
  const auto b = bipartite_equality(single_photon_state({0.4, 1.0}), grid, 1, 1, 2, 2);
  EXPECT_NEAR(m.lhs, b.lhs, 1e-15);
  EXPECT_NEAR(m.rhs, b.rhs, 1e-15);
}

TEST(Multipartite, InvalidPermutation) {
  const auto psi = multimode_noon_like({0.4, 1.0}, 3, 1);
  const auto grid = quadrature_grid(split_phases(3, 1), FockCutoff{1});
  EXPECT_THROW(multipartite_equality(psi, grid, {1, 1, 1}, {2, 2, 2}, SwapPermutation{{3}}),
               DimensionError);
}

TEST(Tmss, MatchesClosedFormAndSeries) {
  EXPECT_FALSE(tmss_equality(SqueezeParam(0.0), FockCutoff{4}).equality.violated);
  for (double r : {0.02, 0.1, 0.5, 1.0}) {
    const auto cut = tmss_default_cutoff(SqueezeParam(r));
    const auto rep = tmss_equality(SqueezeParam(r), cut);
    const double closed = std::pow(std::sinh(2 * r), 2);
    EXPECT_NEAR(rep.closed_form_lhs, closed, 1e-15 * closed + 1e-15);
    EXPECT_NEAR(rep.equality.lhs, closed, 1e-8);
    EXPECT_LT(std::abs(rep.equality.rhs), 1e-10);
    EXPECT_NEAR(rep.series_denominator, 1.0 - rep.truncation_weight, 1e-14);
    EXPECT_NEAR(rep.series_lhs, closed, 1e-8);
    EXPECT_TRUE(rep.equality.violated);
  }
  const auto r05 = tmss_equality(SqueezeParam(0.5), FockCutoff{40});
  EXPECT_NEAR(r05.equality.lhs, 1.38110, 1e-5);
}

TEST(Tmss, TruncationGate) {
  EXPECT_THROW(tmss_equality(SqueezeParam(1.0), FockCutoff{5}), DimensionError);
}

TEST(Cfrd, PseudospinClosedForms) {
  for (std::size_t n = 2; n <= 6; ++n) {
    for (std::size_t r = 1; r < n; ++r) {
      const auto psi = multimode_noon_like({kPi / 4, 0.0}, n, r);
      const auto grid = pseudospin_grid(split_phases(n, r), FockCutoff{1});
      const auto rep = cfrd(psi, grid);
      EXPECT_NEAR(rep.lhs, std::ldexp(1.0, 2 * static_cast<int>(n)) / 4, 1e-9);
      EXPECT_NEAR(rep.rhs, std::ldexp(1.0, static_cast<int>(n)), 1e-9);
      EXPECT_EQ(rep.violated, n >= 3);
    }
  }
}

TEST(Cfrd, CutoffIndependent) {
  const auto ref = cfrd(multimode_noon_like({kPi / 4, 0.0}, 3, 1),
                        pseudospin_grid(split_phases(3, 1), FockCutoff{1}));
  for (std::size_t cut : {3u, 5u}) {
    const auto rep = cfrd(multimode_noon_like({kPi / 4, 0.0}, 3, 1, FockCutoff{cut}),
                          pseudospin_grid(split_phases(3, 1), FockCutoff{cut}));
    EXPECT_NEAR(rep.lhs, ref.lhs, 1e-12);
    EXPECT_NEAR(rep.rhs, ref.rhs, 1e-12);
  }
  EXPECT_NEAR(ref.lhs, 16.0, 1e-12);
  EXPECT_NEAR(ref.rhs, 8.0, 1e-12);
}

TEST(Cfrd, NeverViolatedOnProductStates) {
  std::mt19937_64 rng(17);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const std::size_t n = 2 + seed % 3;
    const auto s = SpaceShape::uniform(n, 2 + seed % 2 * 2);
    const auto psi = random_product_pure(s, seed);
    const auto grid = seed % 2 ? random_grid(s, 2, rng)
                               : pseudospin_grid(split_phases(n, 1), FockCutoff{s.local_dim(0) - 1});
    const auto rep = cfrd(psi, grid);
    EXPECT_LE(rep.lhs, rep.rhs + 1e-10) << seed;
    EXPECT_FALSE(rep.violated);
  }
}

TEST(CfrdDecomposition, TwoQubitCrossPairByHand) {
  // |E11 - E22 + i(E12 + E21)|² = Σ E² + 2E12E21 - 2E11E22
  const auto grid = qubit_xy_grid();
  const auto psi = two_qubit_state({0.5, 0.7});
  const double e11 = correlation(psi, grid, {1, 1}), e12 = correlation(psi, grid, {1, 2});
  const double e21 = correlation(psi, grid, {2, 1}), e22 = correlation(psi, grid, {2, 2});
  const auto d = cfrd_decomposition(psi, grid);
  ASSERT_EQ(d.matched_pairs.size(), 1u);
  EXPECT_NEAR(d.matched_pairs[0].contribution, 2 * (e12 * e21 - e11 * e22), 1e-12);
  EXPECT_NEAR(d.m_prime, e11 * e11 + e12 * e12 + e21 * e21 + e22 * e22, 1e-12);
  EXPECT_NEAR(d.re_squared, std::pow(e11 - e22, 2), 1e-12);
  EXPECT_NEAR(d.im_squared, std::pow(e12 + e21, 2), 1e-12);
  EXPECT_LT(d.reconstruction_residual, 1e-9);
}

TEST(CfrdDecomposition, ProductStatesHaveNoCrossContribution) {
  std::mt19937_64 rng(31);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto s = SpaceShape({2, 3, 2});
    const auto psi = random_product_pure(s, seed);
    const auto d = cfrd_decomposition(psi, random_grid(s, 2, rng));
    for (const auto& m : d.matched_pairs) EXPECT_LT(std::abs(m.contribution), 1e-10);
    EXPECT_NEAR(d.lhs, d.m_prime, 1e-9);
  }
}

TEST(CfrdDecomposition, ThreeModeCrossTermsCarryTheViolation) {
  const auto psi = multimode_noon_like({kPi / 4, 0.0}, 3, 1);
  const auto d = cfrd_decomposition(psi, pseudospin_grid(split_phases(3, 1), FockCutoff{1}));
  EXPECT_NEAR(d.lhs, 16.0, 1e-12);
  EXPECT_NEAR(d.m_prime, 4.0, 1e-12);
  EXPECT_NEAR(d.lhs - d.m_prime, 12.0, 1e-12);
  EXPECT_NEAR(d.cross_total, d.lhs - d.m_prime, 1e-12);
  EXPECT_LT(d.reconstruction_residual, 1e-12);
}

TEST(CfrdDecomposition, ReconstructionAlwaysHolds) {
  std::mt19937_64 rng(41);
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const std::size_t n = 2 + seed % 3;
    const auto s = SpaceShape::uniform(n, 2 + seed % 2);
    const auto rho = depolarize_mix(random_pure(s, seed), 0.8);
    const auto d = cfrd_decomposition(rho, random_grid(s, 2, rng));
    EXPECT_LT(d.reconstruction_residual, 1e-9);
    EXPECT_NEAR(d.lhs, d.re_squared + d.im_squared, 1e-9);
  }
}

TEST(VarianceBound, Examples) {
  CVector v = CVector::Zero(4);
  v(0) = 1.0;
  const StateVector zz(SpaceShape({2, 2}), v);
  SettingsGrid zgrid({{Observable(0, oracle::sz())}, {Observable(1, oracle::sz())}});
  EXPECT_NEAR(variance_bound_check(zz, zgrid, {1, 1}), 0.0, 1e-15);

  CVector vac = CVector::Zero(4);
  vac(0) = 1.0;
  const StateVector vacuum(SpaceShape({2, 2}), vac);
  const auto qgrid = quadrature_grid({0.0, 0.0}, FockCutoff{1});
  EXPECT_NEAR(variance_bound_check(vacuum, qgrid, {1, 1}), 1.0, 1e-15);
}

TEST(VarianceBound, NonnegativeOnRandomInputs) {
  std::mt19937_64 rng(51);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto s = SpaceShape::uniform(2 + seed % 2, 2 + seed % 3);
    const auto psi = random_pure(s, seed);
    const auto grid = random_grid(s, 2, rng);
    for (const auto& c : all_choices(grid)) EXPECT_GE(variance_bound_check(psi, grid, c), -1e-10);
  }
}

TEST(Depolarizing, BothSidesScaleByPSquared) {
  for (std::size_t cut : {1u, 3u}) {
    const auto grid = quadrature_grid({kPi / 2, -kPi / 2}, FockCutoff{cut});
    const auto psi = single_photon_state({0.35, 0.6}, FockCutoff{cut});
    const auto pure = bipartite_equality(psi, grid, 1, 1, 2, 2);
    for (double p : {0.05, 0.2, 0.5, 0.9}) {
      const auto rep = bipartite_equality(depolarize_mix(psi, p), grid, 1, 1, 2, 2);
      EXPECT_NEAR(rep.lhs, p * p * pure.lhs, 1e-10);
      EXPECT_NEAR(rep.rhs, p * p * pure.rhs, 1e-10);
      ASSERT_TRUE(rep.ratio.has_value());
      EXPECT_NEAR(*rep.ratio, *pure.ratio, 1e-10);
      EXPECT_EQ(rep.violated, pure.violated);
    }
  }
}

TEST(MixedSeparable, TwoTermMixtureViolates) {
  CVector zero(2), plus(2);
  zero << 1, 0;
  plus << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0);
  const auto rho = convex_mixture({{0.5, outer(product_state({zero, zero}))},
                                   {0.5, outer(product_state({plus, plus}))}});
  SettingsGrid grid({{Observable(0, oracle::sz()), Observable(0, oracle::sx())},
                     {Observable(1, oracle::sz()), Observable(1, oracle::sx())}});
  // E11 = E22 = 1/2, E12 = E21 = 0.
  const auto rep = bipartite_equality(rho, grid, 1, 1, 2, 2);
  EXPECT_NEAR(rep.lhs, 0.25, 1e-15);
  EXPECT_NEAR(rep.rhs, 0.0, 1e-15);
  EXPECT_TRUE(rep.violated);
}
