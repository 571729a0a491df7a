#pragma once

// Dense complex kernels shared by the algebra, module and solver layers.

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace hilmod {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Index = Eigen::Index;

namespace linalg {

struct Eigh {
  Eigen::VectorXd values;  // descending
  Matrix vectors;          // columns, unitary
  int sweeps = 0;
};

// Cyclic Jacobi diagonalization of the Hermitian part of `h`.
Eigh jacobi_eigh(const Matrix& h);

// Largest singular value, through the eigenvalues of m*m (or mm*, whichever is smaller).
double spectral_norm(const Matrix& m);

// Smallest singular value of a square matrix.
double min_singular_value(const Matrix& m);

// One-sided (Hestenes) Jacobi: singular values, descending, and matching left
// singular vectors for the min(rows, cols) leading directions. Small singular
// values keep full relative accuracy, unlike the eigenvalues of m*m.
struct LeftSvd {
  Eigen::VectorXd values;
  Matrix left;
  int sweeps = 0;
};
LeftSvd one_sided_jacobi(const Matrix& m);

// Orthonormal basis (as columns) of the column space of m. A direction is kept
// when its singular value exceeds rank_tol times the largest one and abs_floor.
Matrix range_basis(const Matrix& m, double rank_tol, double abs_floor = 0.0);

// Orthonormal basis of the orthogonal complement of span(basis) in C^dim.
// `basis` must have orthonormal columns.
Matrix complement_basis(const Matrix& basis, Index dim);

// Extend orthonormal columns to a full orthonormal basis of C^dim; the
// original columns come first.
Matrix complete_orthonormal(const Matrix& basis, Index dim);

enum class Pivoting { Partial, Complete };

// Gaussian elimination with row (partial) or row+column (complete) pivoting.
class DenseLu {
 public:
  DenseLu(const Matrix& a, Pivoting pivoting);

  // True when some pivot is at or below rel_tol times the largest entry.
  bool singular(double rel_tol = 1e-14) const;
  double min_abs_pivot() const noexcept { return min_pivot_; }

  // Solve with one step of iterative refinement against the original matrix.
  Vector solve(const Vector& b) const;
  Matrix solve(const Matrix& b) const;

 private:
  Vector solve_once(const Vector& b) const;

  Matrix original_;
  Matrix lu_;
  std::vector<Index> row_perm_;
  std::vector<Index> col_perm_;
  double min_pivot_ = 0.0;
  double scale_ = 0.0;
};

}  // namespace linalg
}  // namespace hilmod
