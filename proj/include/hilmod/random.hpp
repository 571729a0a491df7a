#pragma once

// Seeded random instances, shared by the CLI builtins and the test suites.

#include "hilmod/module.hpp"

#include <random>

namespace hilmod::random {

using Rng = std::mt19937_64;

// Entries with independent standard complex Gaussian real and imaginary parts.
Matrix gaussian_matrix(Index rows, Index cols, Rng& rng);

AlgebraElement random_element(const AlgebraShape& shape, Rng& rng);
AlgebraElement random_hermitian(const AlgebraShape& shape, Rng& rng);
// g g* / n + min_eig, per block.
AlgebraElement random_positive_invertible(const AlgebraShape& shape, Rng& rng, double min_eig = 0.5);

ModuleElement random_module_element(const ModuleSpace& space, Rng& rng);
ModuleElement random_unit_element(const ModuleSpace& space, Rng& rng);

ModuleOperator random_operator(const ModuleSpace& domain, const ModuleSpace& codomain, Rng& rng);
// Positive invertible T on A^p; every block matrix has spectrum in [min_eig, ...).
ModuleOperator random_positive_operator(const ModuleSpace& space, Rng& rng, double min_eig = 0.5);

}  // namespace hilmod::random
