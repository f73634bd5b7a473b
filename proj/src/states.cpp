#include "entcheck/states.hpp"

#include <cmath>
#include <random>

namespace entcheck {

namespace {

CVector gaussian_vector(std::size_t dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CVector v(static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double re = normal(rng);
    const double im = normal(rng);
    v(i) = Complex(re, im);
  }
  return v;
}

std::size_t basis_index(const SpaceShape& shape, const std::vector<std::size_t>& levels) {
  std::size_t idx = 0;
  for (std::size_t j = 0; j < levels.size(); ++j) idx = idx * shape.local_dim(j) + levels[j];
  return idx;
}

}  // namespace

SqueezeParam::SqueezeParam(double squeezing) : r(squeezing) {
  if (!(squeezing >= 0.0) || !std::isfinite(squeezing)) {
    throw DimensionError("squeezing parameter must be finite and >= 0");
  }
}

StateVector two_qubit_state(TwoQubitParams p) {
  CVector v = CVector::Zero(4);
  v(0) = std::sin(p.theta);
  v(3) = std::cos(p.theta) * std::polar(1.0, p.phi);
  return normalize(SpaceShape({2, 2}), v);
}

StateVector single_photon_state(TwoQubitParams p, FockCutoff cutoff) {
  if (cutoff.n_max < 1) throw DimensionError("single-photon state needs cutoff n_max >= 1");
  const SpaceShape shape = SpaceShape::uniform(2, cutoff.dim());
  CVector v = CVector::Zero(static_cast<Eigen::Index>(shape.total_dim()));
  v(static_cast<Eigen::Index>(basis_index(shape, {0, 1}))) = std::sin(p.theta);
  v(static_cast<Eigen::Index>(basis_index(shape, {1, 0}))) =
      std::cos(p.theta) * std::polar(1.0, p.phi);
  return normalize(shape, v);
}

TruncatedTmss tmss(SqueezeParam r, FockCutoff cutoff) {
  const SpaceShape shape = SpaceShape::uniform(2, cutoff.dim());
  const double t = std::tanh(r.r);
  const double c = std::cosh(r.r);
  std::vector<double> raw(cutoff.dim());
  CVector v = CVector::Zero(static_cast<Eigen::Index>(shape.total_dim()));
  for (std::size_t n = 0; n <= cutoff.n_max; ++n) {
    raw[n] = std::pow(t, static_cast<double>(n)) / c;
    v(static_cast<Eigen::Index>(basis_index(shape, {n, n}))) = raw[n];
  }
  // Discarded tail, tanh^{2(n_max+1)} r, in closed form.
  const double weight = std::pow(t, 2.0 * static_cast<double>(cutoff.n_max + 1));
  return TruncatedTmss{normalize(shape, v), weight, cutoff, std::move(raw)};
}

FockCutoff tmss_cutoff_for_weight(SqueezeParam r, double weight) {
  if (!(weight > 0.0 && weight < 1.0)) throw DimensionError("weight target must be in (0,1)");
  const double t2 = std::tanh(r.r) * std::tanh(r.r);
  if (t2 == 0.0) return FockCutoff{0};
  // tanh^{2(N+1)} < weight  <=>  N + 1 > log(weight) / log(tanh^2)
  const double levels = std::log(weight) / std::log(t2);
  return FockCutoff{static_cast<std::size_t>(std::floor(levels))};
}

FockCutoff tmss_default_cutoff(SqueezeParam r) { return tmss_cutoff_for_weight(r, 1e-14); }

StateVector multimode_noon_like(TwoQubitParams p, std::size_t parties, std::size_t split,
                                FockCutoff cutoff) {
  if (parties == 0) throw DimensionError("need at least one mode");
  if (split > parties) throw DimensionError("split index must satisfy 0 <= r <= n");
  if (cutoff.n_max < 1) throw DimensionError("multimode state needs cutoff n_max >= 1");
  const SpaceShape shape = SpaceShape::uniform(parties, cutoff.dim());
  std::vector<std::size_t> first(parties), second(parties);
  for (std::size_t j = 0; j < parties; ++j) {
    first[j] = j < split ? 0 : 1;
    second[j] = j < split ? 1 : 0;
  }
  CVector v = CVector::Zero(static_cast<Eigen::Index>(shape.total_dim()));
  v(static_cast<Eigen::Index>(basis_index(shape, first))) += std::sin(p.theta);
  v(static_cast<Eigen::Index>(basis_index(shape, second))) +=
      std::cos(p.theta) * std::polar(1.0, p.phi);
  return normalize(shape, v);
}

DensityMatrix depolarize_mix(const StateVector& pure, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw DimensionError("mixing probability must be in [0,1]");
  const auto d = static_cast<Eigen::Index>(pure.dim());
  CMatrix rho = p * (pure.amplitudes() * pure.amplitudes().adjoint());
  rho.diagonal().array() += (1.0 - p) / static_cast<double>(d);
  return DensityMatrix(pure.shape(), rho);
}

DensityMatrix convex_mixture(const std::vector<std::pair<double, DensityMatrix>>& terms) {
  if (terms.empty()) throw DimensionError("mixture needs at least one term");
  const SpaceShape& shape = terms.front().second.shape();
  CMatrix rho = CMatrix::Zero(terms.front().second.matrix().rows(),
                              terms.front().second.matrix().cols());
  double total = 0.0;
  for (const auto& [w, state] : terms) {
    if (w < 0.0) throw DimensionError("mixture weights must be nonnegative");
    if (!(state.shape() == shape)) throw DimensionError("mixture terms differ in shape");
    rho += w * state.matrix();
    total += w;
  }
  if (std::abs(total - 1.0) > tol::kConstruction) {
    throw DimensionError("mixture weights must sum to 1");
  }
  return DensityMatrix(shape, rho);
}

StateVector product_state(const std::vector<CVector>& locals) {
  if (locals.empty()) throw DimensionError("product state needs at least one factor");
  std::vector<std::size_t> dims;
  CMatrix v = CMatrix::Ones(1, 1);
  for (const auto& l : locals) {
    dims.push_back(static_cast<std::size_t>(l.size()));
    v = kron(v, CMatrix(l));
  }
  return normalize(SpaceShape(std::move(dims)), v.col(0));
}

StateVector random_product_pure(const SpaceShape& shape, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<CVector> locals;
  for (auto d : shape.local_dims()) {
    CVector local = gaussian_vector(d, rng);
    locals.push_back(local / local.norm());
  }
  return product_state(locals);
}

StateVector random_pure(const SpaceShape& shape, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return normalize(shape, gaussian_vector(shape.total_dim(), rng));
}

}  // namespace entcheck
