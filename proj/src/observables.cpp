#include "entcheck/observables.hpp"

#include <cmath>

namespace entcheck {

namespace {

constexpr Complex kI{0.0, 1.0};

// op e^{-iφ} + op† e^{iφ}, with the lower triangle written as the exact
// conjugate of the upper one so the result is Hermitian bit for bit.
CMatrix phased_sum(const CMatrix& op, double phi) {
  const Complex w = std::polar(1.0, -phi);
  CMatrix upper = op * w;
  CMatrix out = upper + upper.adjoint();
  return out;
}

}  // namespace

PhaseAngle::PhaseAngle(double radians) : value(radians) {
  if (!std::isfinite(radians)) throw DimensionError("phase angle must be finite");
}

CMatrix pauli_x() {
  CMatrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

CMatrix pauli_y() {
  CMatrix m(2, 2);
  m << 0.0, -kI, kI, 0.0;
  return m;
}

CMatrix pauli_z() {
  CMatrix m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

Observable pauli_direction(const Vec3& a, std::size_t party, const SpaceShape& shape) {
  const double norm = std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]);
  if (std::abs(norm - 1.0) > tol::kDerived) {
    throw DimensionError("Pauli direction must be a unit vector");
  }
  if (shape.local_dim(party) != 2) {
    throw DimensionError("Pauli observable requested on a non-qubit party");
  }
  return Observable(party, a[0] * pauli_x() + a[1] * pauli_y() + a[2] * pauli_z());
}

Observable identity_observable(std::size_t dim, std::size_t party) {
  const auto d = static_cast<Eigen::Index>(dim);
  return Observable(party, CMatrix::Identity(d, d));
}

CMatrix annihilation(FockCutoff cutoff) {
  const auto d = static_cast<Eigen::Index>(cutoff.dim());
  CMatrix a = CMatrix::Zero(d, d);
  for (Eigen::Index n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

CMatrix creation(FockCutoff cutoff) { return annihilation(cutoff).adjoint(); }

CMatrix number_operator(FockCutoff cutoff) {
  const auto d = static_cast<Eigen::Index>(cutoff.dim());
  CMatrix n = CMatrix::Zero(d, d);
  for (Eigen::Index k = 0; k < d; ++k) n(k, k) = static_cast<double>(k);
  return n;
}

Observable quadrature(PhaseAngle phase, FockCutoff cutoff, std::size_t party) {
  return Observable(party, phased_sum(annihilation(cutoff), phase.value));
}

Observable pseudospin_z(FockCutoff cutoff, std::size_t party) {
  const auto d = static_cast<Eigen::Index>(cutoff.dim());
  CMatrix sz = CMatrix::Zero(d, d);
  for (Eigen::Index k = 0; k < d; ++k) sz(k, k) = (k % 2 == 0) ? -1.0 : 1.0;
  return Observable(party, sz);
}

CMatrix pseudospin_minus(FockCutoff cutoff) {
  const auto d = static_cast<Eigen::Index>(cutoff.dim());
  CMatrix sm = CMatrix::Zero(d, d);
  for (Eigen::Index k = 0; k + 1 < d; k += 2) sm(k, k + 1) = 1.0;
  return sm;
}

CMatrix pseudospin_plus(FockCutoff cutoff) { return pseudospin_minus(cutoff).adjoint(); }

Observable pseudospin_setting(int setting, PhaseAngle phase, FockCutoff cutoff,
                              std::size_t party) {
  switch (setting) {
    case 1:
      return Observable(party, phased_sum(pseudospin_minus(cutoff), 0.0));
    case 2:
      return Observable(party, phased_sum(pseudospin_minus(cutoff), phase.value));
    default:
      throw DimensionError("pseudospin setting index must be 1 or 2");
  }
}

}  // namespace entcheck
