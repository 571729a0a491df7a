#pragma once

// Finite-dimensional C*-algebras A = M_{n_1}(C) (+) ... (+) M_{n_m}(C) and the
// functional calculus needed on them: norms, spectra, square roots, polar
// decompositions, range projections and inverses.

#include "hilmod/linalg.hpp"

#include <cstddef>
#include <initializer_list>
#include <vector>

namespace hilmod {

struct Tolerances {
  double hermitian = 1e-10;  // relative; also used for positivity
  double rank = 1e-8;        // relative cut for "nonzero" singular values
};

class AlgebraShape {
 public:
  AlgebraShape() = default;
  explicit AlgebraShape(std::vector<Index> block_dims);
  AlgebraShape(std::initializer_list<Index> block_dims)
      : AlgebraShape(std::vector<Index>(block_dims)) {}

  const std::vector<Index>& block_dims() const noexcept { return dims_; }
  std::size_t num_blocks() const noexcept { return dims_.size(); }
  Index dim(std::size_t block) const { return dims_.at(block); }
  // Complex dimension of A, i.e. the sum of n_i^2.
  Index algebra_dim() const noexcept;

  friend bool operator==(const AlgebraShape&, const AlgebraShape&) = default;

 private:
  std::vector<Index> dims_;
};

class AlgebraElement {
 public:
  AlgebraElement() = default;
  AlgebraElement(AlgebraShape shape, std::vector<Matrix> blocks);

  static AlgebraElement zero(const AlgebraShape& shape);
  static AlgebraElement identity(const AlgebraShape& shape);
  static AlgebraElement scalar(const AlgebraShape& shape, Complex value);
  // Single-block convenience.
  static AlgebraElement from_matrix(const Matrix& m);

  const AlgebraShape& shape() const noexcept { return shape_; }
  std::size_t num_blocks() const noexcept { return blocks_.size(); }
  const Matrix& block(std::size_t i) const { return blocks_.at(i); }
  Matrix& block(std::size_t i) { return blocks_.at(i); }
  const std::vector<Matrix>& blocks() const noexcept { return blocks_; }

  AlgebraElement adjoint() const;
  // Largest absolute entry over all blocks.
  double max_abs() const;

  AlgebraElement& operator+=(const AlgebraElement& other);
  AlgebraElement& operator-=(const AlgebraElement& other);
  AlgebraElement& operator*=(Complex s);

  friend AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b) { return a += b; }
  friend AlgebraElement operator-(AlgebraElement a, const AlgebraElement& b) { return a -= b; }
  friend AlgebraElement operator*(AlgebraElement a, Complex s) { return a *= s; }
  friend AlgebraElement operator*(Complex s, AlgebraElement a) { return a *= s; }
  friend AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b);
  friend AlgebraElement operator-(AlgebraElement a) { return a *= Complex(-1.0); }

 private:
  AlgebraShape shape_;
  std::vector<Matrix> blocks_;
};

// Throws ShapeMismatch unless both shapes agree.
void require_same_shape(const AlgebraShape& a, const AlgebraShape& b, const char* where);

struct HermitianEigensystem {
  AlgebraShape shape;
  std::vector<Eigen::VectorXd> eigenvalues;  // per block, descending
  std::vector<Matrix> eigenvectors;          // per block, unitary
};

struct PolarDecomposition {
  AlgebraElement u;  // unitary, or a partial isometry when `singular`
  AlgebraElement h;  // |a|
  bool singular = false;
};

struct Inverse {
  AlgebraElement inverse;
  double inverse_norm = 0.0;
};

struct Positivity {
  bool positive = false;
  double margin = 0.0;  // smallest eigenvalue of the Hermitian part
};

double operator_norm(const AlgebraElement& a);

double hermiticity_defect(const AlgebraElement& a);

HermitianEigensystem hermitian_eigensystem(const AlgebraElement& a, const Tolerances& tol = {});

AlgebraElement positive_sqrt(const AlgebraElement& a, const Tolerances& tol = {});

// |b| = (b*b)^{1/2}
AlgebraElement abs_element(const AlgebraElement& b, const Tolerances& tol = {});

PolarDecomposition polar_decompose(const AlgebraElement& a, const Tolerances& tol = {});

// A unitary u with a = u|a|, also when a is singular (the partial isometry is
// completed on the kernel of |a|).
AlgebraElement unitary_polar_factor(const AlgebraElement& a, const Tolerances& tol = {});

AlgebraElement range_projection(const AlgebraElement& a, const Tolerances& tol = {});

Inverse invert(const AlgebraElement& a, const Tolerances& tol = {});

Positivity is_positive(const AlgebraElement& a, const Tolerances& tol = {});

// Apply a real function to the spectrum of a Hermitian element.
template <class F>
AlgebraElement spectral_map(const HermitianEigensystem& eig, F&& f) {
  std::vector<Matrix> blocks;
  blocks.reserve(eig.eigenvectors.size());
  for (std::size_t i = 0; i < eig.eigenvectors.size(); ++i) {
    const Matrix& u = eig.eigenvectors[i];
    Eigen::VectorXcd d(eig.eigenvalues[i].size());
    for (Index k = 0; k < d.size(); ++k) d(k) = f(eig.eigenvalues[i](k));
    blocks.push_back(u * d.asDiagonal() * u.adjoint());
  }
  return AlgebraElement(eig.shape, std::move(blocks));
}

}  // namespace hilmod
