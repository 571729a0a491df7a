#include "hilmod/random.hpp"

namespace hilmod::random {

Matrix gaussian_matrix(Index rows, Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      m(i, j) = Complex(re, im);
    }
  return m;
}

AlgebraElement random_element(const AlgebraShape& shape, Rng& rng) {
  std::vector<Matrix> blocks;
  for (Index n : shape.block_dims()) blocks.push_back(gaussian_matrix(n, n, rng));
  return {shape, std::move(blocks)};
}

AlgebraElement random_hermitian(const AlgebraShape& shape, Rng& rng) {
  AlgebraElement a = random_element(shape, rng);
  return (a + a.adjoint()) * Complex(0.5);
}

AlgebraElement random_positive_invertible(const AlgebraShape& shape, Rng& rng, double min_eig) {
  std::vector<Matrix> blocks;
  for (Index n : shape.block_dims()) {
    const Matrix g = gaussian_matrix(n, n, rng);
    blocks.push_back(g * g.adjoint() / static_cast<double>(n) + min_eig * Matrix::Identity(n, n));
  }
  return {shape, std::move(blocks)};
}

ModuleElement random_module_element(const ModuleSpace& space, Rng& rng) {
  std::vector<AlgebraElement> comps;
  for (std::size_t k = 0; k < space.rank; ++k) comps.push_back(random_element(space.shape, rng));
  return {space, std::move(comps)};
}

ModuleElement random_unit_element(const ModuleSpace& space, Rng& rng) {
  return normalized(random_module_element(space, rng));
}

ModuleOperator random_operator(const ModuleSpace& domain, const ModuleSpace& codomain, Rng& rng) {
  std::vector<AlgebraElement> entries;
  for (std::size_t e = 0; e < domain.rank * codomain.rank; ++e) entries.push_back(random_element(domain.shape, rng));
  return {domain, codomain, std::move(entries)};
}

ModuleOperator random_positive_operator(const ModuleSpace& space, Rng& rng, double min_eig) {
  std::vector<Matrix> blocks;
  const auto p = static_cast<Index>(space.rank);
  for (Index n : space.shape.block_dims()) {
    const Index d = p * n;
    const Matrix g = gaussian_matrix(d, d, rng);
    blocks.push_back(g * g.adjoint() / static_cast<double>(d) + min_eig * Matrix::Identity(d, d));
  }
  return ModuleOperator::from_block_matrices(space, space, blocks);
}

}  // namespace hilmod::random
