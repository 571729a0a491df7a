#pragma once

#include "hilmod/algebra.hpp"
#include "hilmod/module.hpp"

#include <Eigen/Dense>

#include <initializer_list>

namespace hilmod::test {

inline Matrix mat(std::initializer_list<std::initializer_list<Complex>> rows) {
  Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(rows.begin()->size()));
  Index r = 0;
  for (const auto& row : rows) {
    Index c = 0;
    for (const auto& v : row) m(r, c++) = v;
    ++r;
  }
  return m;
}

inline AlgebraElement m2(std::initializer_list<std::initializer_list<Complex>> rows) {
  return AlgebraElement::from_matrix(mat(rows));
}

// x = ½[[1,1],[1,1]] and y = ½[[1,-1],[-1,1]]
inline AlgebraElement gap_x() { return m2({{0.5, 0.5}, {0.5, 0.5}}); }
inline AlgebraElement gap_y() { return m2({{0.5, -0.5}, {-0.5, 0.5}}); }

inline double max_abs_diff(const Matrix& a, const Matrix& b) { return (a - b).cwiseAbs().maxCoeff(); }
inline double max_abs_diff(const AlgebraElement& a, const AlgebraElement& b) { return (a - b).max_abs(); }
inline double max_abs_diff(const ModuleElement& a, const ModuleElement& b) { return (a - b).max_abs(); }

// Block-diagonal embedding of an algebra element, for Eigen-based oracles.
inline Matrix dense(const AlgebraElement& a) {
  Index n = 0;
  for (Index d : a.shape().block_dims()) n += d;
  Matrix out = Matrix::Zero(n, n);
  Index off = 0;
  for (const auto& b : a.blocks()) {
    out.block(off, off, b.rows(), b.cols()) = b;
    off += b.rows();
  }
  return out;
}

}  // namespace hilmod::test
