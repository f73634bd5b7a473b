#include "entcheck/hilbert.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace entcheck {

namespace {

std::string dims_str(std::size_t a, std::size_t b) {
  return std::to_string(a) + " vs " + std::to_string(b);
}

double max_abs(const CMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

void check_party(const SpaceShape& shape, std::size_t party, std::size_t dim) {
  if (party >= shape.parties()) {
    throw DimensionError("party " + std::to_string(party) + " out of range for " +
                         std::to_string(shape.parties()) + "-party space");
  }
  if (shape.local_dim(party) != dim) {
    throw DimensionError("operator dimension mismatch at party " + std::to_string(party) +
                         ": " + dims_str(dim, shape.local_dim(party)));
  }
}

void check_distinct_parties(const std::vector<std::size_t>& parties) {
  std::set<std::size_t> seen;
  for (auto p : parties) {
    if (!seen.insert(p).second) {
      throw DimensionError("two operators act on party " + std::to_string(p));
    }
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// SpaceShape

SpaceShape::SpaceShape(std::vector<std::size_t> local_dims) : dims_(std::move(local_dims)) {
  if (dims_.empty()) throw DimensionError("space needs at least one party");
  for (auto d : dims_) {
    if (d == 0) throw DimensionError("local dimension must be >= 1");
    if (total_ > kMaxTotalDim / d) {
      throw DimensionError("total dimension exceeds limit " + std::to_string(kMaxTotalDim));
    }
    total_ *= d;
  }
}

SpaceShape SpaceShape::uniform(std::size_t parties, std::size_t local_dim) {
  return SpaceShape(std::vector<std::size_t>(parties, local_dim));
}

std::size_t SpaceShape::local_dim(std::size_t party) const {
  if (party >= dims_.size()) throw DimensionError("party index out of range");
  return dims_[party];
}

std::size_t SpaceShape::left_dim(std::size_t party) const {
  return std::accumulate(dims_.begin(), dims_.begin() + static_cast<std::ptrdiff_t>(party),
                         std::size_t{1}, std::multiplies<>());
}

std::size_t SpaceShape::right_dim(std::size_t party) const {
  return std::accumulate(dims_.begin() + static_cast<std::ptrdiff_t>(party) + 1, dims_.end(),
                         std::size_t{1}, std::multiplies<>());
}

// ---------------------------------------------------------------------------
// Value types

StateVector::StateVector(SpaceShape shape, CVector amplitudes)
    : shape_(std::move(shape)), amps_(std::move(amplitudes)) {
  if (static_cast<std::size_t>(amps_.size()) != shape_.total_dim()) {
    throw DimensionError("amplitude count does not match shape: " +
                         dims_str(static_cast<std::size_t>(amps_.size()), shape_.total_dim()));
  }
  if (std::abs(amps_.norm() - 1.0) > tol::kConstruction) {
    throw DimensionError("state vector is not normalized");
  }
}

DensityMatrix::DensityMatrix(SpaceShape shape, CMatrix matrix)
    : shape_(std::move(shape)), matrix_(std::move(matrix)) {
  const auto d = shape_.total_dim();
  if (static_cast<std::size_t>(matrix_.rows()) != d ||
      static_cast<std::size_t>(matrix_.cols()) != d) {
    throw DimensionError("density matrix size does not match shape");
  }
  if (!is_hermitian(matrix_)) throw DimensionError("density matrix is not Hermitian");
  if (std::abs(matrix_.trace() - Complex(1.0, 0.0)) > tol::kConstruction) {
    throw DimensionError("density matrix trace is not 1");
  }
  // rho + floor*I is positive definite iff the smallest eigenvalue exceeds -floor.
  CMatrix shifted = matrix_;
  shifted.diagonal().array() += tol::kPsdFloor;
  Eigen::LLT<CMatrix> llt(shifted);
  if (llt.info() != Eigen::Success) {
    throw DimensionError("density matrix has an eigenvalue below -1e-10");
  }
}

Observable::Observable(std::size_t party, CMatrix matrix)
    : party_(party), matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols() || matrix_.rows() == 0) {
    throw DimensionError("observable matrix must be square and non-empty");
  }
  if (!is_hermitian(matrix_)) throw DimensionError("observable is not Hermitian");
}

const SpaceShape& StateView::shape() const {
  return is_pure() ? pure().shape() : mixed().shape();
}

// ---------------------------------------------------------------------------
// Elementary operations

bool is_hermitian(const CMatrix& m, double tolerance) {
  if (m.rows() != m.cols()) return false;
  return max_abs(m - m.adjoint()) <= tolerance * std::max(1.0, max_abs(m));
}

CMatrix dagger(const CMatrix& m) { return m.adjoint(); }

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

StateVector normalize(SpaceShape shape, const CVector& v) {
  const double n = v.norm();
  if (n == 0.0 || !std::isfinite(n)) throw DimensionError("cannot normalize a zero vector");
  return StateVector(std::move(shape), v / n);
}

DensityMatrix outer(const StateVector& v) {
  return DensityMatrix(v.shape(), v.amplitudes() * v.amplitudes().adjoint());
}

CMatrix embed_local(const CMatrix& local, std::size_t party, const SpaceShape& shape) {
  check_party(shape, party, static_cast<std::size_t>(local.rows()));
  const auto left = static_cast<Eigen::Index>(shape.left_dim(party));
  const auto right = static_cast<Eigen::Index>(shape.right_dim(party));
  return kron(kron(CMatrix::Identity(left, left), local), CMatrix::Identity(right, right));
}

CMatrix tensor_embed(const Observable& obs, const SpaceShape& shape) {
  return embed_local(obs.matrix(), obs.party(), shape);
}

CVector apply_local(const CMatrix& op, std::size_t party, const SpaceShape& shape,
                    const CVector& v) {
  check_party(shape, party, static_cast<std::size_t>(op.rows()));
  if (static_cast<std::size_t>(v.size()) != shape.total_dim()) {
    throw DimensionError("vector length does not match shape");
  }
  const auto local = static_cast<Eigen::Index>(shape.local_dim(party));
  const auto right = static_cast<Eigen::Index>(shape.right_dim(party));
  const auto left = static_cast<Eigen::Index>(shape.left_dim(party));
  const CMatrix op_t = op.transpose();
  CVector out(v.size());
  // Each left-block is a (right x local) column-major slab: slab(rr, k).
  for (Eigen::Index l = 0; l < left; ++l) {
    const auto offset = l * local * right;
    Eigen::Map<const CMatrix> in(v.data() + offset, right, local);
    Eigen::Map<CMatrix> dst(out.data() + offset, right, local);
    dst.noalias() = in * op_t;
  }
  return out;
}

CMatrix apply_local_left(const CMatrix& op, std::size_t party, const SpaceShape& shape,
                         const CMatrix& m) {
  check_party(shape, party, static_cast<std::size_t>(op.rows()));
  if (static_cast<std::size_t>(m.rows()) != shape.total_dim()) {
    throw DimensionError("matrix rows do not match shape");
  }
  const auto local = static_cast<Eigen::Index>(shape.local_dim(party));
  const auto right = static_cast<Eigen::Index>(shape.right_dim(party));
  const auto left = static_cast<Eigen::Index>(shape.left_dim(party));
  const CMatrix op_t = op.transpose();
  CMatrix out(m.rows(), m.cols());
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    for (Eigen::Index l = 0; l < left; ++l) {
      const auto offset = c * m.rows() + l * local * right;
      Eigen::Map<const CMatrix> in(m.data() + offset, right, local);
      Eigen::Map<CMatrix> dst(out.data() + offset, right, local);
      dst.noalias() = in * op_t;
    }
  }
  return out;
}

CMatrix apply_local_right(const CMatrix& m, const CMatrix& op, std::size_t party,
                          const SpaceShape& shape) {
  // M (I⊗O⊗I) = ((I⊗O^T⊗I) M^T)^T
  const CMatrix mt = m.transpose();
  return apply_local_left(op.transpose(), party, shape, mt).transpose();
}

Complex expectation_of_product(StateView state, const std::vector<LocalOperator>& ops) {
  std::vector<std::size_t> parties;
  parties.reserve(ops.size());
  for (const auto& op : ops) parties.push_back(op.party);
  check_distinct_parties(parties);

  const auto& shape = state.shape();
  if (state.is_pure()) {
    const CVector& psi = state.pure().amplitudes();
    CVector w = psi;
    for (const auto& op : ops) w = apply_local(op.matrix, op.party, shape, w);
    return psi.dot(w);
  }
  CMatrix y = state.mixed().matrix();
  for (const auto& op : ops) y = apply_local_left(op.matrix, op.party, shape, y);
  return y.trace();
}

double expectation(StateView state, const std::vector<Observable>& observables) {
  std::vector<LocalOperator> ops;
  ops.reserve(observables.size());
  for (const auto& o : observables) ops.push_back({o.party(), o.matrix()});
  const Complex value = expectation_of_product(state, ops);
  if (std::abs(value.imag()) > tol::kDerived * std::max(1.0, std::abs(value))) {
    throw std::logic_error("expectation of Hermitian product has imaginary part " +
                           std::to_string(value.imag()));
  }
  return value.real();
}

std::vector<SpectralComponent> spectral_decomposition(const Observable& obs) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(obs.matrix());
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigensolver failed");
  const auto& values = solver.eigenvalues();
  const auto& vectors = solver.eigenvectors();

  std::vector<SpectralComponent> out;
  Eigen::Index start = 0;
  const Eigen::Index n = values.size();
  for (Eigen::Index i = 1; i <= n; ++i) {
    if (i < n && values(i) - values(i - 1) < tol::kDegeneracy) continue;
    const auto block = vectors.middleCols(start, i - start);
    out.push_back({values.segment(start, i - start).mean(), block * block.adjoint()});
    start = i;
  }
  return out;
}

}  // namespace entcheck
