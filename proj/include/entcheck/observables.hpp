// Measurement operator families: Pauli directions, phase-dependent field
// quadratures and pseudospin operators on truncated Fock spaces.

#pragma once

#include "entcheck/hilbert.hpp"

#include <array>
#include <cstddef>

namespace entcheck {

/// Local measurement phase, radians.
struct PhaseAngle {
  double value;
  explicit PhaseAngle(double radians);
};

/// Highest retained Fock level; the mode's local dimension is n_max + 1.
struct FockCutoff {
  std::size_t n_max;
  explicit constexpr FockCutoff(std::size_t n) : n_max(n) {}
  constexpr std::size_t dim() const { return n_max + 1; }
};

using Vec3 = std::array<double, 3>;

CMatrix pauli_x();
CMatrix pauli_y();
CMatrix pauli_z();

/// a·σ for a unit vector a. The party must be a qubit in `shape`.
Observable pauli_direction(const Vec3& a, std::size_t party, const SpaceShape& shape);

Observable identity_observable(std::size_t dim, std::size_t party);

/// Truncated annihilation operator, <n-1|a|n> = sqrt(n).
CMatrix annihilation(FockCutoff cutoff);
CMatrix creation(FockCutoff cutoff);
CMatrix number_operator(FockCutoff cutoff);

/// a e^{-iφ} + a† e^{iφ}. Phase 0 is a + a†; phase ±π/2 gives ∓i(a - a†).
Observable quadrature(PhaseAngle phase, FockCutoff cutoff, std::size_t party);

/// -1 on even Fock levels, +1 on odd ones.
Observable pseudospin_z(FockCutoff cutoff, std::size_t party);

/// Σ_k |2k><2k+1| restricted to the truncation.
CMatrix pseudospin_minus(FockCutoff cutoff);
CMatrix pseudospin_plus(FockCutoff cutoff);

/// Setting 1: s- + s+.  Setting 2: s- e^{-iφ} + s+ e^{iφ}.
Observable pseudospin_setting(int setting, PhaseAngle phase, FockCutoff cutoff,
                              std::size_t party);

}  // namespace entcheck
