#include "hilmod/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace hilmod::linalg {

namespace {

double off_diagonal_norm2(const Matrix& a) {
  double off = 0.0;
  for (Index q = 1; q < a.cols(); ++q)
    for (Index p = 0; p < q; ++p) off += std::norm(a(p, q));
  return 2.0 * off;
}

}  // namespace

Eigh jacobi_eigh(const Matrix& h) {
  if (h.rows() != h.cols()) throw std::invalid_argument("jacobi_eigh: matrix must be square");
  const Index n = h.rows();
  Matrix a = (h + h.adjoint()) * 0.5;
  Matrix v = Matrix::Identity(n, n);
  const double frob2 = a.squaredNorm();
  const double eps = std::numeric_limits<double>::epsilon();

  int sweep = 0;
  for (; sweep < 100; ++sweep) {
    const double off = off_diagonal_norm2(a);
    if (off <= eps * eps * frob2 * 1e-2 || off == 0.0) break;
    for (Index p = 0; p + 1 < n; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag == 0.0) continue;
        const double alpha = a(p, p).real();
        const double gamma = a(q, q).real();
        // Skip entries already negligible against both diagonal entries.
        if (sweep > 3 && mag < eps * 1e-2 * std::sqrt(std::abs(alpha * gamma))) {
          a(p, q) = a(q, p) = 0.0;
          continue;
        }
        const Complex phase = apq / mag;
        const double theta = (gamma - alpha) / (2.0 * mag);
        double t;
        if (std::abs(theta) > 1e150) {
          t = 0.5 / theta;
        } else {
          t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        }
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // J = diag(1, conj(phase)) * [[c, s], [-s, c]]
        const Complex j00 = c;
        const Complex j01 = s;
        const Complex j10 = -s * std::conj(phase);
        const Complex j11 = c * std::conj(phase);

        for (Index k = 0; k < n; ++k) {
          const Complex akp = a(k, p);
          const Complex akq = a(k, q);
          a(k, p) = akp * j00 + akq * j10;
          a(k, q) = akp * j01 + akq * j11;
        }
        for (Index k = 0; k < n; ++k) {
          const Complex apk = a(p, k);
          const Complex aqk = a(q, k);
          a(p, k) = std::conj(j00) * apk + std::conj(j10) * aqk;
          a(q, k) = std::conj(j01) * apk + std::conj(j11) * aqk;
        }
        for (Index k = 0; k < n; ++k) {
          const Complex vkp = v(k, p);
          const Complex vkq = v(k, q);
          v(k, p) = vkp * j00 + vkq * j10;
          v(k, q) = vkp * j01 + vkq * j11;
        }
        a(p, q) = a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
      }
    }
  }

  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index i, Index j) { return a(i, i).real() > a(j, j).real(); });
  Eigh out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  out.sweeps = sweep;
  for (Index k = 0; k < n; ++k) {
    out.values(k) = a(order[k], order[k]).real();
    out.vectors.col(k) = v.col(order[k]);
  }
  return out;
}

double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  const Matrix g = m.rows() < m.cols() ? Matrix(m * m.adjoint()) : Matrix(m.adjoint() * m);
  const Eigh e = jacobi_eigh(g);
  return std::sqrt(std::max(0.0, e.values(0)));
}

double min_singular_value(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  const LeftSvd svd = one_sided_jacobi(m);
  if (svd.values.size() < m.cols()) return 0.0;
  return svd.values(svd.values.size() - 1);
}

LeftSvd one_sided_jacobi(const Matrix& m) {
  // Orthogonalize the columns of w = m (tall) or w = m* (wide). For a wide m
  // the accumulated rotations v are its left singular vectors.
  const bool wide = m.cols() > m.rows();
  Matrix w = wide ? Matrix(m.adjoint()) : m;
  const Index n = w.cols();
  Matrix v = Matrix::Identity(n, n);
  const double eps = std::numeric_limits<double>::epsilon();
  LeftSvd out;
  for (int sweep = 0; sweep < 80; ++sweep) {
    bool rotated = false;
    for (Index i = 0; i + 1 < n; ++i) {
      for (Index j = i + 1; j < n; ++j) {
        const double alpha = w.col(i).squaredNorm();
        const double beta = w.col(j).squaredNorm();
        const Complex gamma = w.col(i).dot(w.col(j));
        const double g = std::abs(gamma);
        if (g == 0.0 || g <= eps * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const Complex phase = std::conj(gamma / g);
        const double zeta = (beta - alpha) / (2.0 * g);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        const Vector wi = w.col(i);
        const Vector wj = w.col(j) * phase;
        w.col(i) = c * wi - s * wj;
        w.col(j) = s * wi + c * wj;
        const Vector vi = v.col(i);
        const Vector vj = v.col(j) * phase;
        v.col(i) = c * vi - s * vj;
        v.col(j) = s * vi + c * vj;
      }
    }
    out.sweeps = sweep + 1;
    if (!rotated) break;
  }
  const Eigen::VectorXd norms = w.colwise().norm().transpose();
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return norms(a) > norms(b); });
  out.values.resize(n);
  out.left.resize(m.rows(), n);
  for (Index k = 0; k < n; ++k) {
    const Index src = order[static_cast<std::size_t>(k)];
    out.values(k) = norms(src);
    if (wide) {
      out.left.col(k) = v.col(src);
    } else {
      out.left.col(k) = norms(src) > 0.0 ? Vector(w.col(src) / norms(src)) : Vector::Zero(m.rows());
    }
  }
  return out;
}

Matrix range_basis(const Matrix& m, double rank_tol, double abs_floor) {
  if (m.size() == 0) return Matrix(m.rows(), 0);
  const LeftSvd svd = one_sided_jacobi(m);
  const double top = svd.values.size() > 0 ? svd.values(0) : 0.0;
  if (top == 0.0) return Matrix(m.rows(), 0);
  const double cut = std::max(rank_tol * top, abs_floor);
  Index rank = 0;
  while (rank < svd.values.size() && svd.values(rank) > cut) ++rank;
  Matrix q = svd.left.leftCols(rank);
  // Clean up rounding so the basis is orthonormal to working precision.
  for (Index j = 0; j < rank; ++j) {
    for (int pass = 0; pass < 2; ++pass)
      for (Index l = 0; l < j; ++l) q.col(j) -= q.col(l) * q.col(l).dot(q.col(j));
    q.col(j).normalize();
  }
  return q;
}

Matrix complement_basis(const Matrix& basis, Index dim) {
  const Matrix full = complete_orthonormal(basis, dim);
  return full.rightCols(dim - basis.cols());
}

Matrix complete_orthonormal(const Matrix& basis, Index dim) {
  Matrix out(dim, dim);
  Index filled = basis.cols();
  out.leftCols(filled) = basis;
  // Gram-Schmidt (twice) over the standard basis vectors.
  for (Index e = 0; e < dim && filled < dim; ++e) {
    Vector cand = Vector::Unit(dim, e);
    for (int pass = 0; pass < 2; ++pass) {
      for (Index j = 0; j < filled; ++j) cand -= out.col(j) * out.col(j).dot(cand);
    }
    const double nrm = cand.norm();
    if (nrm > 1e-6) out.col(filled++) = cand / nrm;
  }
  if (filled != dim) throw std::runtime_error("complete_orthonormal: basis is not orthonormal");
  return out;
}

DenseLu::DenseLu(const Matrix& a, Pivoting pivoting) : original_(a), lu_(a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("DenseLu: matrix must be square");
  const Index n = a.rows();
  row_perm_.resize(static_cast<std::size_t>(n));
  col_perm_.resize(static_cast<std::size_t>(n));
  std::iota(row_perm_.begin(), row_perm_.end(), Index{0});
  std::iota(col_perm_.begin(), col_perm_.end(), Index{0});
  scale_ = n == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
  min_pivot_ = n == 0 ? 0.0 : std::numeric_limits<double>::infinity();

  for (Index k = 0; k < n; ++k) {
    Index pr = k;
    Index pc = k;
    double best = -1.0;
    if (pivoting == Pivoting::Partial) {
      for (Index i = k; i < n; ++i) {
        if (std::abs(lu_(i, k)) > best) {
          best = std::abs(lu_(i, k));
          pr = i;
        }
      }
    } else {
      for (Index j = k; j < n; ++j)
        for (Index i = k; i < n; ++i)
          if (std::abs(lu_(i, j)) > best) {
            best = std::abs(lu_(i, j));
            pr = i;
            pc = j;
          }
    }
    if (pr != k) {
      lu_.row(pr).swap(lu_.row(k));
      std::swap(row_perm_[static_cast<std::size_t>(pr)], row_perm_[static_cast<std::size_t>(k)]);
    }
    if (pc != k) {
      lu_.col(pc).swap(lu_.col(k));
      std::swap(col_perm_[static_cast<std::size_t>(pc)], col_perm_[static_cast<std::size_t>(k)]);
    }
    const Complex pivot = lu_(k, k);
    min_pivot_ = std::min(min_pivot_, std::abs(pivot));
    if (pivot == Complex(0.0)) continue;
    for (Index i = k + 1; i < n; ++i) {
      const Complex factor = lu_(i, k) / pivot;
      lu_(i, k) = factor;
      if (factor == Complex(0.0)) continue;
      lu_.row(i).tail(n - k - 1) -= factor * lu_.row(k).tail(n - k - 1);
    }
  }
}

bool DenseLu::singular(double rel_tol) const {
  return lu_.rows() > 0 && min_pivot_ <= rel_tol * scale_;
}

Vector DenseLu::solve_once(const Vector& b) const {
  const Index n = lu_.rows();
  Vector y(n);
  for (Index i = 0; i < n; ++i) {
    Complex acc = b(row_perm_[static_cast<std::size_t>(i)]);
    for (Index j = 0; j < i; ++j) acc -= lu_(i, j) * y(j);
    y(i) = acc;
  }
  for (Index i = n - 1; i >= 0; --i) {
    Complex acc = y(i);
    for (Index j = i + 1; j < n; ++j) acc -= lu_(i, j) * y(j);
    y(i) = acc / lu_(i, i);
  }
  Vector x(n);
  for (Index i = 0; i < n; ++i) x(col_perm_[static_cast<std::size_t>(i)]) = y(i);
  return x;
}

Vector DenseLu::solve(const Vector& b) const {
  if (b.size() != lu_.rows()) throw std::invalid_argument("DenseLu::solve: size mismatch");
  Vector x = solve_once(b);
  const Vector r = b - original_ * x;
  x += solve_once(r);
  return x;
}

Matrix DenseLu::solve(const Matrix& b) const {
  Matrix x(b.rows(), b.cols());
  for (Index j = 0; j < b.cols(); ++j) x.col(j) = solve(Vector(b.col(j)));
  return x;
}

}  // namespace hilmod::linalg
