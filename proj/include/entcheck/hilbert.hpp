// Dense complex linear algebra over tensor products of finite local spaces.
//
// Kets are ordered big-endian: party 0 is the slowest-varying index, so the
// basis label |i0 i1 ... i_{n-1}> reads left to right.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace entcheck {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

namespace tol {
inline constexpr double kConstruction = 1e-12;
inline constexpr double kDerived = 1e-10;
inline constexpr double kDegeneracy = 1e-10;
inline constexpr double kPsdFloor = 1e-10;
}  // namespace tol

/// Largest total dimension a dense state may have.
inline constexpr std::size_t kMaxTotalDim = 4096;

/// Thrown for any violated precondition on shapes, dimensions or values.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class SpaceShape {
 public:
  explicit SpaceShape(std::vector<std::size_t> local_dims);

  static SpaceShape uniform(std::size_t parties, std::size_t local_dim);

  std::size_t parties() const { return dims_.size(); }
  std::size_t local_dim(std::size_t party) const;
  std::size_t total_dim() const { return total_; }
  const std::vector<std::size_t>& local_dims() const { return dims_; }

  /// Product of the dimensions before / after `party`.
  std::size_t left_dim(std::size_t party) const;
  std::size_t right_dim(std::size_t party) const;

  bool operator==(const SpaceShape&) const = default;

 private:
  std::vector<std::size_t> dims_;
  std::size_t total_ = 1;
};

class StateVector {
 public:
  /// Requires unit norm within tol::kConstruction; use normalize() otherwise.
  StateVector(SpaceShape shape, CVector amplitudes);

  const SpaceShape& shape() const { return shape_; }
  const CVector& amplitudes() const { return amps_; }
  std::size_t dim() const { return static_cast<std::size_t>(amps_.size()); }

 private:
  SpaceShape shape_;
  CVector amps_;
};

class DensityMatrix {
 public:
  /// Checks Hermiticity and unit trace (1e-12) and eigenvalues >= -1e-10.
  DensityMatrix(SpaceShape shape, CMatrix matrix);

  const SpaceShape& shape() const { return shape_; }
  const CMatrix& matrix() const { return matrix_; }
  std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }

 private:
  SpaceShape shape_;
  CMatrix matrix_;
};

/// A Hermitian operator acting on a single party.
class Observable {
 public:
  Observable(std::size_t party, CMatrix matrix);

  std::size_t party() const { return party_; }
  const CMatrix& matrix() const { return matrix_; }
  std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }

 private:
  std::size_t party_;
  CMatrix matrix_;
};

/// An arbitrary (not necessarily Hermitian) operator on one party.
struct LocalOperator {
  std::size_t party;
  CMatrix matrix;
};

/// Non-owning reference to either a pure or a mixed state.
class StateView {
 public:
  StateView(const StateVector& pure) : state_(&pure) {}
  StateView(const DensityMatrix& mixed) : state_(&mixed) {}

  bool is_pure() const { return std::holds_alternative<const StateVector*>(state_); }
  const StateVector& pure() const { return *std::get<const StateVector*>(state_); }
  const DensityMatrix& mixed() const { return *std::get<const DensityMatrix*>(state_); }
  const SpaceShape& shape() const;

 private:
  std::variant<const StateVector*, const DensityMatrix*> state_;
};

bool is_hermitian(const CMatrix& m, double tolerance = tol::kConstruction);

CMatrix dagger(const CMatrix& m);
CMatrix kron(const CMatrix& a, const CMatrix& b);
StateVector normalize(SpaceShape shape, const CVector& v);
DensityMatrix outer(const StateVector& v);

/// Full-space matrix I ⊗ ... ⊗ local ⊗ ... ⊗ I.
CMatrix embed_local(const CMatrix& local, std::size_t party, const SpaceShape& shape);
CMatrix tensor_embed(const Observable& obs, const SpaceShape& shape);

// Apply a local operator without materialising the embedded matrix.
CVector apply_local(const CMatrix& op, std::size_t party, const SpaceShape& shape,
                    const CVector& v);
CMatrix apply_local_left(const CMatrix& op, std::size_t party, const SpaceShape& shape,
                         const CMatrix& m);
CMatrix apply_local_right(const CMatrix& m, const CMatrix& op, std::size_t party,
                          const SpaceShape& shape);

/// <Π_j O_j> for operators on distinct parties; complex in general.
Complex expectation_of_product(StateView state, const std::vector<LocalOperator>& ops);

/// <Π_j O_j> for Hermitian observables on distinct parties. The imaginary
/// part is checked against 1e-10 (relative to the magnitude) and dropped.
double expectation(StateView state, const std::vector<Observable>& observables);

struct SpectralComponent {
  double eigenvalue;
  CMatrix projector;
};

/// Eigenvalues ascending; eigenvalues closer than tol::kDegeneracy share one projector.
std::vector<SpectralComponent> spectral_decomposition(const Observable& obs);

}  // namespace entcheck
