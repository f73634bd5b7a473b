#include "entcheck/channels.hpp"

#include "entcheck/observables.hpp"

#include <cmath>
#include <numbers>

namespace entcheck {

namespace {

double binomial(std::size_t n, std::size_t k) {
  double c = 1.0;
  for (std::size_t i = 1; i <= k; ++i) {
    c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
  }
  return c;
}

}  // namespace

Efficiency::Efficiency(double value) : eta(value) {
  if (!(value >= 0.0 && value <= 1.0)) throw DimensionError("efficiency must be in [0,1]");
}

std::vector<CMatrix> loss_kraus(Efficiency eta, std::size_t dim) {
  const double keep = eta.eta;
  const double lose = 1.0 - eta.eta;
  std::vector<CMatrix> kraus;
  kraus.reserve(dim);
  const auto d = static_cast<Eigen::Index>(dim);
  for (std::size_t k = 0; k < dim; ++k) {
    CMatrix op = CMatrix::Zero(d, d);
    for (std::size_t n = k; n < dim; ++n) {
      // std::pow(0, 0) == 1 keeps the η ∈ {0, 1} endpoints exact.
      const double amp = binomial(n, k) * std::pow(lose, static_cast<double>(k)) *
                         std::pow(keep, static_cast<double>(n - k));
      op(static_cast<Eigen::Index>(n - k), static_cast<Eigen::Index>(n)) = std::sqrt(amp);
    }
    kraus.push_back(std::move(op));
  }
  return kraus;
}

DensityMatrix loss_channel(const DensityMatrix& rho, Efficiency eta, std::size_t mode) {
  const auto& shape = rho.shape();
  if (mode >= shape.parties()) throw DimensionError("loss channel mode out of range");
  const auto kraus = loss_kraus(eta, shape.local_dim(mode));
  CMatrix out = CMatrix::Zero(rho.matrix().rows(), rho.matrix().cols());
  for (const auto& k : kraus) {
    const CMatrix left = apply_local_left(k, mode, shape, rho.matrix());
    out += apply_local_right(left, k.adjoint(), mode, shape);
  }
  // Restore exact Hermiticity lost to summation order.
  out = 0.5 * (out + out.adjoint()).eval();
  return DensityMatrix(shape, out);
}

MomentScalingReport first_moment_scaling_check(const DensityMatrix& rho, Efficiency eta,
                                               std::size_t mode) {
  const DensityMatrix lossy = loss_channel(rho, eta, mode);
  const FockCutoff cutoff{rho.shape().local_dim(mode) - 1};
  const double expected = std::sqrt(eta.eta);

  MomentScalingReport report{expected, {}, true};
  auto add = [&](std::string name, double before, double after) {
    MomentScalingEntry e{std::move(name), before, after, std::nullopt, true};
    if (std::abs(before) > 1e-6) {
      e.ratio = after / before;
      e.pass = std::abs(*e.ratio - expected) < 1e-8;
    }
    report.all_pass = report.all_pass && e.pass;
    report.entries.push_back(std::move(e));
  };

  const Observable x = quadrature(PhaseAngle(0.0), cutoff, mode);
  const Observable p = quadrature(PhaseAngle(std::numbers::pi / 2), cutoff, mode);
  add("X", expectation(rho, {x}), expectation(lossy, {x}));
  add("P", expectation(rho, {p}), expectation(lossy, {p}));

  const CMatrix a = annihilation(cutoff);
  add("|<a>|", std::abs(expectation_of_product(rho, {{mode, a}})),
      std::abs(expectation_of_product(lossy, {{mode, a}})));
  return report;
}

}  // namespace entcheck
