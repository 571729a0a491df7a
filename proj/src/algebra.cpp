#include "hilmod/algebra.hpp"

#include "hilmod/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hilmod {

AlgebraShape::AlgebraShape(std::vector<Index> block_dims) : dims_(std::move(block_dims)) {
  if (dims_.empty()) throw Error(ErrorKind::ValidationError, "algebra shape needs at least one block");
  for (Index n : dims_)
    if (n < 1) throw Error(ErrorKind::ValidationError, "block dimensions must be positive");
}

Index AlgebraShape::algebra_dim() const noexcept {
  Index total = 0;
  for (Index n : dims_) total += n * n;
  return total;
}

void require_same_shape(const AlgebraShape& a, const AlgebraShape& b, const char* where) {
  if (!(a == b)) throw Error(ErrorKind::ShapeMismatch, std::string(where) + ": algebra shapes differ");
}

AlgebraElement::AlgebraElement(AlgebraShape shape, std::vector<Matrix> blocks)
    : shape_(std::move(shape)), blocks_(std::move(blocks)) {
  if (blocks_.size() != shape_.num_blocks())
    throw Error(ErrorKind::ShapeMismatch, "block count does not match the algebra shape");
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    const Index n = shape_.dim(i);
    if (blocks_[i].rows() != n || blocks_[i].cols() != n)
      throw Error(ErrorKind::ShapeMismatch, "block " + std::to_string(i) + " has the wrong size", i);
  }
}

AlgebraElement AlgebraElement::zero(const AlgebraShape& shape) {
  std::vector<Matrix> blocks;
  for (Index n : shape.block_dims()) blocks.push_back(Matrix::Zero(n, n));
  return {shape, std::move(blocks)};
}

AlgebraElement AlgebraElement::identity(const AlgebraShape& shape) {
  return scalar(shape, Complex(1.0));
}

AlgebraElement AlgebraElement::scalar(const AlgebraShape& shape, Complex value) {
  std::vector<Matrix> blocks;
  for (Index n : shape.block_dims()) blocks.push_back(value * Matrix::Identity(n, n));
  return {shape, std::move(blocks)};
}

AlgebraElement AlgebraElement::from_matrix(const Matrix& m) {
  return {AlgebraShape{m.rows()}, {m}};
}

AlgebraElement AlgebraElement::adjoint() const {
  std::vector<Matrix> blocks;
  blocks.reserve(blocks_.size());
  for (const Matrix& b : blocks_) blocks.push_back(b.adjoint());
  return {shape_, std::move(blocks)};
}

double AlgebraElement::max_abs() const {
  double m = 0.0;
  for (const Matrix& b : blocks_) m = std::max(m, b.cwiseAbs().maxCoeff());
  return m;
}

AlgebraElement& AlgebraElement::operator+=(const AlgebraElement& other) {
  require_same_shape(shape_, other.shape_, "add");
  for (std::size_t i = 0; i < blocks_.size(); ++i) blocks_[i] += other.blocks_[i];
  return *this;
}

AlgebraElement& AlgebraElement::operator-=(const AlgebraElement& other) {
  require_same_shape(shape_, other.shape_, "subtract");
  for (std::size_t i = 0; i < blocks_.size(); ++i) blocks_[i] -= other.blocks_[i];
  return *this;
}

AlgebraElement& AlgebraElement::operator*=(Complex s) {
  for (Matrix& b : blocks_) b *= s;
  return *this;
}

AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b) {
  require_same_shape(a.shape_, b.shape_, "multiply");
  std::vector<Matrix> blocks;
  blocks.reserve(a.blocks_.size());
  for (std::size_t i = 0; i < a.blocks_.size(); ++i) blocks.push_back(a.blocks_[i] * b.blocks_[i]);
  return {a.shape_, std::move(blocks)};
}

namespace {

double frobenius_scale(const AlgebraElement& a) {
  double s = 0.0;
  for (const Matrix& b : a.blocks()) s = std::max(s, b.norm());
  return s;
}

}  // namespace

double operator_norm(const AlgebraElement& a) {
  double m = 0.0;
  for (const Matrix& b : a.blocks()) m = std::max(m, linalg::spectral_norm(b));
  return m;
}

double hermiticity_defect(const AlgebraElement& a) {
  double d = 0.0;
  for (const Matrix& b : a.blocks()) d = std::max(d, (b - b.adjoint()).norm());
  return d;
}

HermitianEigensystem hermitian_eigensystem(const AlgebraElement& a, const Tolerances& tol) {
  if (hermiticity_defect(a) > tol.hermitian * frobenius_scale(a))
    throw Error(ErrorKind::NotHermitian, "element is not Hermitian");
  HermitianEigensystem out{a.shape(), {}, {}};
  for (const Matrix& b : a.blocks()) {
    linalg::Eigh e = linalg::jacobi_eigh(b);
    out.eigenvalues.push_back(std::move(e.values));
    out.eigenvectors.push_back(std::move(e.vectors));
  }
  return out;
}

namespace {

double spectral_radius(const HermitianEigensystem& eig) {
  double r = 0.0;
  for (const auto& vals : eig.eigenvalues) r = std::max(r, vals.cwiseAbs().maxCoeff());
  return r;
}

}  // namespace

AlgebraElement positive_sqrt(const AlgebraElement& a, const Tolerances& tol) {
  const HermitianEigensystem eig = hermitian_eigensystem(a, tol);
  const double norm = spectral_radius(eig);
  for (std::size_t i = 0; i < eig.eigenvalues.size(); ++i)
    if (eig.eigenvalues[i].minCoeff() < -tol.hermitian * norm)
      throw Error(ErrorKind::NotPositive, "negative eigenvalue in block " + std::to_string(i), i);
  return spectral_map(eig, [](double l) { return std::sqrt(std::max(l, 0.0)); });
}

AlgebraElement abs_element(const AlgebraElement& b, const Tolerances& tol) {
  return positive_sqrt(b.adjoint() * b, tol);
}

namespace {

// Right singular vectors and singular values of each block, from the
// eigensystem of b*b.
struct BlockSvd {
  Matrix v;
  Eigen::VectorXd sigma;
};

std::vector<BlockSvd> block_svds(const AlgebraElement& a) {
  std::vector<BlockSvd> out;
  for (const Matrix& b : a.blocks()) {
    linalg::Eigh e = linalg::jacobi_eigh(b.adjoint() * b);
    Eigen::VectorXd sigma = e.values.cwiseMax(0.0).cwiseSqrt();
    out.push_back({std::move(e.vectors), std::move(sigma)});
  }
  return out;
}

double top_sigma(const std::vector<BlockSvd>& svds) {
  double t = 0.0;
  for (const auto& s : svds) t = std::max(t, s.sigma(0));
  return t;
}

}  // namespace

PolarDecomposition polar_decompose(const AlgebraElement& a, const Tolerances& tol) {
  const auto svds = block_svds(a);
  const double threshold = tol.rank * top_sigma(svds);
  std::vector<Matrix> us;
  std::vector<Matrix> hs;
  bool singular = false;
  for (std::size_t i = 0; i < svds.size(); ++i) {
    const Matrix& v = svds[i].v;
    const auto& sigma = svds[i].sigma;
    const Index n = v.rows();
    Matrix u = Matrix::Zero(n, n);
    for (Index k = 0; k < n; ++k) {
      if (sigma(k) > threshold && sigma(k) > 0.0) {
        u += (a.block(i) * v.col(k) / sigma(k)) * v.col(k).adjoint();
      } else {
        singular = true;
      }
    }
    us.push_back(std::move(u));
    hs.push_back(v * sigma.cast<Complex>().asDiagonal() * v.adjoint());
  }
  return {AlgebraElement(a.shape(), std::move(us)), AlgebraElement(a.shape(), std::move(hs)), singular};
}

AlgebraElement unitary_polar_factor(const AlgebraElement& a, const Tolerances& tol) {
  const auto svds = block_svds(a);
  const double threshold = tol.rank * top_sigma(svds);
  std::vector<Matrix> us;
  for (std::size_t i = 0; i < svds.size(); ++i) {
    const Matrix& v = svds[i].v;
    const auto& sigma = svds[i].sigma;
    const Index n = v.rows();
    Index r = 0;
    while (r < n && sigma(r) > threshold && sigma(r) > 0.0) ++r;
    Matrix w(n, r);
    for (Index k = 0; k < r; ++k) w.col(k) = a.block(i) * v.col(k) / sigma(k);
    // Clean up round-off before completing: orthonormalize the image columns.
    for (Index k = 0; k < r; ++k) {
      for (Index j = 0; j < k; ++j) w.col(k) -= w.col(j) * w.col(j).dot(w.col(k));
      w.col(k).normalize();
    }
    const Matrix full = linalg::complete_orthonormal(w, n);
    us.push_back(full * v.adjoint());
  }
  return {a.shape(), std::move(us)};
}

AlgebraElement range_projection(const AlgebraElement& a, const Tolerances& tol) {
  const Positivity pos = is_positive(a, tol);
  if (!pos.positive) throw Error(ErrorKind::NotPositive, "range projection needs a positive element");
  const HermitianEigensystem eig = hermitian_eigensystem(a, tol);
  const double cut = tol.rank * spectral_radius(eig);
  return spectral_map(eig, [cut](double l) { return l > cut && l > 0.0 ? 1.0 : 0.0; });
}

Inverse invert(const AlgebraElement& a, const Tolerances& tol) {
  const double norm = operator_norm(a);
  std::vector<Matrix> blocks;
  for (std::size_t i = 0; i < a.num_blocks(); ++i) {
    const Matrix& b = a.block(i);
    const double smin = linalg::min_singular_value(b);
    if (smin <= tol.rank * norm || smin == 0.0)
      throw Error(ErrorKind::Singular, "block " + std::to_string(i) + " is not invertible", i);
    const linalg::DenseLu lu(b, linalg::Pivoting::Partial);
    blocks.push_back(lu.solve(Matrix(Matrix::Identity(b.rows(), b.cols()))));
  }
  AlgebraElement inv(a.shape(), std::move(blocks));
  const double inv_norm = operator_norm(inv);
  return {std::move(inv), inv_norm};
}

Positivity is_positive(const AlgebraElement& a, const Tolerances& tol) {
  const bool hermitian = hermiticity_defect(a) <= tol.hermitian * frobenius_scale(a);
  double margin = 0.0;
  double radius = 0.0;
  bool first = true;
  for (const Matrix& b : a.blocks()) {
    const linalg::Eigh e = linalg::jacobi_eigh(b);
    const double lo = e.values(e.values.size() - 1);
    margin = first ? lo : std::min(margin, lo);
    radius = std::max(radius, e.values.cwiseAbs().maxCoeff());
    first = false;
  }
  return {hermitian && margin >= -tol.hermitian * radius, margin};
}

}  // namespace hilmod
